//! Finite monoids given by validated Cayley tables.
//!
//! Elements are the dense indices `0..n`. The identity is detected from the
//! table rather than declared, so a table file cannot claim a wrong identity.

use std::fmt;

use crate::error::{Error, Result};

/// A finite monoid stored as a flat row-major Cayley table.
///
/// Construction validates associativity and the identity laws; the value is
/// immutable afterwards.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: usize,
}

/// Size of the cyclic submonoid `{a^0, a^1, ...}` generated by an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementOrder(usize);

impl ElementOrder {
    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FiniteMonoid {
    /// Validates a square table given as rows.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyTable);
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            table.extend_from_slice(r);
        }
        Self::from_flat(n, table)
    }

    /// Validates a flat row-major table of `size * size` entries.
    pub fn from_flat(size: usize, table: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyTable);
        }
        if table.len() != size * size {
            return Err(Error::NotSquare {
                row: table.len() / size,
                len: table.len() % size,
                expected: size,
            });
        }
        if let Some(pos) = table.iter().position(|&v| v >= size) {
            return Err(Error::EntryOutOfRange {
                row: pos / size,
                col: pos % size,
                value: table[pos],
                size,
            });
        }
        let at = |a: usize, b: usize| table[a * size + b];
        for a in 0..size {
            for b in 0..size {
                let ab = at(a, b);
                for c in 0..size {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let identity = find_identity(size, &table).ok_or(Error::NoIdentity)?;
        Ok(Self {
            size,
            table,
            identity,
        })
    }

    /// Parses the Cayley-table text format: the first line holds `n`, the
    /// next `n` lines hold the rows as space-separated indices. Text after
    /// `#` is ignored, as are blank lines.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing size line".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected table size, found `{first}`"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line,
                message: "table size must be positive".into(),
            });
        }

        let mut rows = Vec::with_capacity(n);
        for row in 0..n {
            let (line, text) = lines.next().ok_or(Error::Parse {
                line: line + row + 1,
                message: format!("missing row {row}"),
            })?;
            let entries = text
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line,
                    message: format!("row {row}: {e}"),
                })?;
            if entries.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("row {row} has {} entries, expected {n}", entries.len()),
                });
            }
            if let Some(&v) = entries.iter().find(|&&v| v >= n) {
                return Err(Error::Parse {
                    line,
                    message: format!("row {row}: entry {v} out of range"),
                });
            }
            rows.push(entries);
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "trailing content after the last row".into(),
            });
        }
        Self::from_rows(&rows)
    }

    /// Renders the table in the text format accepted by [`parse_table`](Self::parse_table).
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.size);
        for a in 0..self.size {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.size..(a + 1) * self.size]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// All distinct powers `a^0, a^1, ...` in order of first appearance.
    pub fn powers(&self, a: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        let mut cur = self.identity;
        while !seen[cur] {
            seen[cur] = true;
            out.push(cur);
            cur = self.mul(cur, a);
        }
        out
    }

    pub fn element_order(&self, a: usize) -> ElementOrder {
        ElementOrder(self.powers(a).len())
    }

    /// Index and period of the monogenic submonoid generated by `a`: the
    /// least `i` and `p >= 1` with `a^(i+p) = a^i`.
    pub fn index_period(&self, a: usize) -> (usize, usize) {
        let powers = self.powers(a);
        let next = self.mul(*powers.last().unwrap(), a);
        let index = powers.iter().position(|&p| p == next).unwrap();
        (index, powers.len() - index)
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Row `a` and column `a` are both permutations.
    pub fn is_cancellative_element(&self, a: usize) -> bool {
        let mut left = vec![false; self.size];
        let mut right = vec![false; self.size];
        for b in 0..self.size {
            let l = self.mul(a, b);
            let r = self.mul(b, a);
            if left[l] || right[r] {
                return false;
            }
            left[l] = true;
            right[r] = true;
        }
        true
    }

    pub fn cancellative_elements(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.is_cancellative_element(a))
            .collect()
    }

    pub fn is_cancellative(&self) -> bool {
        self.elements().all(|a| self.is_cancellative_element(a))
    }

    pub fn units(&self) -> Vec<usize> {
        self.elements()
            .filter(|&u| self.inverse(u).is_ok())
            .collect()
    }

    pub fn inverse(&self, u: usize) -> Result<usize> {
        let e = self.identity;
        self.elements()
            .find(|&v| self.mul(u, v) == e && self.mul(v, u) == e)
            .ok_or(Error::NotAUnit(u))
    }

    pub fn is_group(&self) -> bool {
        self.elements().all(|a| self.inverse(a).is_ok())
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Relabels the elements: element `a` becomes `perm[a]`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.size;
        assert_eq!(perm.len(), n, "permutation length");
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self {
            size: n,
            table,
            identity: perm[self.identity],
        }
    }

    /// Internal constructor for tables that are correct by construction.
    /// Debug builds still run the full validation.
    pub(crate) fn from_trusted(size: usize, table: Vec<usize>) -> Self {
        if cfg!(debug_assertions) && size <= 64 {
            return Self::from_flat(size, table).expect("trusted table failed validation");
        }
        let identity = find_identity(size, &table).expect("trusted table has no identity");
        Self {
            size,
            table,
            identity,
        }
    }
}

fn find_identity(n: usize, table: &[usize]) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMonoid")
            .field("size", &self.size)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

/// Convenience wrapper matching the table-first constructor name.
pub fn make_monoid<R: AsRef<[usize]>>(rows: &[R]) -> Result<FiniteMonoid> {
    FiniteMonoid::from_rows(rows)
}

/// The monogenic monoid `<z | z^(index+period) = z^index>` on elements
/// `z^0 .. z^(index+period-1)`, where element `k` is `z^k`.
pub fn cyclic_monoid(index: usize, period: usize) -> Result<FiniteMonoid> {
    if period == 0 {
        return Err(Error::PreconditionViolated(
            "period must be positive".into(),
        ));
    }
    let n = index + period;
    let reduce = |k: usize| {
        if k < n {
            k
        } else {
            index + (k - index) % period
        }
    };
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(reduce(a + b));
        }
    }
    Ok(FiniteMonoid::from_trusted(n, table))
}

/// The two-element monoid `{1, e}` with `e * e = e`.
pub fn idempotent_monoid() -> FiniteMonoid {
    FiniteMonoid::from_trusted(2, vec![0, 1, 1, 1])
}
