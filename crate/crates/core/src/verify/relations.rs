use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::power::{product_of, subset_power, with_identity};
use crate::subset::SubsetId;

use super::{require_subset_base, Record, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossRelationCheck {
    pub x: usize,
    pub y: usize,
    pub r: usize,
    pub s: usize,
    /// `({1,x}^(r-1) {1,xy} {1,y}^s, {1,x}^r {1,y}^(s+1))`
    pub first: (SubsetId, SubsetId),
    /// `({1,x}^r {1,xy} {1,y}^(s-1), {1,x}^(r+1) {1,y}^s)`
    pub second: (SubsetId, SubsetId),
}

impl CrossRelationCheck {
    pub fn passed(&self) -> bool {
        self.first.0 == self.first.1 && self.second.0 == self.second.1
    }

    pub fn record(&self, label: &str) -> Record {
        Record::new(
            "lemma24",
            format!(
                "{label} x={} y={} r={} s={}",
                self.x, self.y, self.r, self.s
            ),
            Status::from_bool(self.passed()),
        )
        .with_witness(format!(
            "{} = {}; {} = {}",
            self.first.0, self.first.1, self.second.0, self.second.1
        ))
    }
}

/// Given `x^r = y^s` with `r, s >= 1`, evaluates both product identities.
pub fn check_cross_relation(
    m: &FiniteMonoid,
    x: usize,
    y: usize,
    r: usize,
    s: usize,
) -> Result<CrossRelationCheck> {
    require_subset_base(m)?;
    if r == 0 || s == 0 || m.pow(x, r) != m.pow(y, s) {
        return Err(Error::PreconditionViolated(format!(
            "need x^r = y^s with r, s >= 1 (x={x}, y={y}, r={r}, s={s})"
        )));
    }
    let xs = with_identity(m, x);
    let ys = with_identity(m, y);
    let xy = with_identity(m, m.mul(x, y));
    let first = (
        product_of(m, &[subset_power(m, xs, r - 1), xy, subset_power(m, ys, s)]),
        product_of(m, &[subset_power(m, xs, r), subset_power(m, ys, s + 1)]),
    );
    let second = (
        product_of(m, &[subset_power(m, xs, r), xy, subset_power(m, ys, s - 1)]),
        product_of(m, &[subset_power(m, xs, r + 1), subset_power(m, ys, s)]),
    );
    Ok(CrossRelationCheck {
        x,
        y,
        r,
        s,
        first,
        second,
    })
}

/// Minimal exponents relating two cancellative elements: `x^r = y^s` with
/// `r` least, and `x^u = y^v` with `v` least.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimalRelation {
    pub r: usize,
    pub s: usize,
    pub u: usize,
    pub v: usize,
}

impl MinimalRelation {
    /// First `(c, d)` with `x^c = y^d` but `r` not dividing `c` or `v` not
    /// dividing `d`, scanning `c in [0, 2 ord(x)]`, `d in [0, 2 ord(y)]`.
    /// Exponents outside that grid repeat it, since both elements are units.
    pub fn divisibility_counterexample(
        &self,
        m: &FiniteMonoid,
        x: usize,
        y: usize,
    ) -> Option<(usize, usize)> {
        let (ox, oy) = (m.element_order(x).value(), m.element_order(y).value());
        for c in 0..=2 * ox {
            let xc = m.pow(x, c);
            for d in 0..=2 * oy {
                if xc == m.pow(y, d) && (c % self.r != 0 || d % self.v != 0) {
                    return Some((c, d));
                }
            }
        }
        None
    }

    pub fn record(&self, m: &FiniteMonoid, label: &str, x: usize, y: usize) -> Record {
        let bad = self.divisibility_counterexample(m, x, y);
        let witness = match bad {
            None => format!("r={} s={} u={} v={}", self.r, self.s, self.u, self.v),
            Some((c, d)) => format!(
                "r={} s={} u={} v={} counterexample c={c} d={d}",
                self.r, self.s, self.u, self.v
            ),
        };
        Record::new(
            "prop25",
            format!("{label} x={x} y={y}"),
            Status::from_bool(bad.is_none()),
        )
        .with_witness(witness)
    }
}

/// Brute-force search of the exponent grid `[1, ord(x)] x [1, ord(y)]`.
pub fn minimal_relation(m: &FiniteMonoid, x: usize, y: usize) -> Result<MinimalRelation> {
    for a in [x, y] {
        if !m.is_cancellative_element(a) {
            return Err(Error::NotCancellative(a));
        }
    }
    let (ox, oy) = (m.element_order(x).value(), m.element_order(y).value());
    let xp: Vec<usize> = (0..=ox).map(|c| m.pow(x, c)).collect();
    let yp: Vec<usize> = (0..=oy).map(|d| m.pow(y, d)).collect();

    let (r, s) = (1..=ox)
        .find_map(|c| (1..=oy).find(|&d| xp[c] == yp[d]).map(|d| (c, d)))
        .expect("x^ord(x) = 1 = y^ord(y) for cancellative elements");
    let (u, v) = (1..=oy)
        .find_map(|d| (1..=ox).find(|&c| xp[c] == yp[d]).map(|c| (c, d)))
        .expect("x^ord(x) = 1 = y^ord(y) for cancellative elements");
    Ok(MinimalRelation { r, s, u, v })
}
