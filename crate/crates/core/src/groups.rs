//! Standard small groups and the name syntax used by the CLI.
//!
//! Names: `trivial`, `z<n>` (cyclic), `d<n>` (dihedral of order `2n`),
//! `s3`, `klein`, `q8`, products joined by `x` (`z2xz3`), and the non-group
//! monoids `idem2` and `cm<i>-<p>` (monogenic with index `i`, period `p`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::monoid::{cyclic_monoid, idempotent_monoid, FiniteMonoid};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupName {
    Cyclic(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Klein,
    Quaternion8,
    DirectProduct(Box<GroupName>, Box<GroupName>),
}

impl GroupName {
    pub fn product(a: GroupName, b: GroupName) -> Self {
        GroupName::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn order(&self) -> usize {
        match self {
            GroupName::Cyclic(n) => *n,
            GroupName::Dihedral(n) => 2 * n,
            GroupName::Klein => 4,
            GroupName::Quaternion8 => 8,
            GroupName::DirectProduct(a, b) => a.order() * b.order(),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Cyclic(1) => write!(f, "trivial"),
            GroupName::Cyclic(n) => write!(f, "z{n}"),
            GroupName::Dihedral(3) => write!(f, "s3"),
            GroupName::Dihedral(n) => write!(f, "d{n}"),
            GroupName::Klein => write!(f, "klein"),
            GroupName::Quaternion8 => write!(f, "q8"),
            GroupName::DirectProduct(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName(s.to_string());
        if let Some((a, b)) = s.split_once('x') {
            return Ok(GroupName::product(a.parse()?, b.parse()?));
        }
        let positive = |digits: &str| -> Result<usize> {
            match digits.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(unknown()),
            }
        };
        match s {
            "trivial" => Ok(GroupName::Cyclic(1)),
            "klein" | "v4" => Ok(GroupName::Klein),
            "q8" => Ok(GroupName::Quaternion8),
            "s3" => Ok(GroupName::Dihedral(3)),
            _ if s.starts_with('z') => Ok(GroupName::Cyclic(positive(&s[1..])?)),
            _ if s.starts_with('d') => Ok(GroupName::Dihedral(positive(&s[1..])?)),
            _ => Err(unknown()),
        }
    }
}

/// Canonical Cayley table of a named group.
pub fn standard_group(name: &GroupName) -> Result<FiniteMonoid> {
    match name {
        GroupName::Cyclic(0) | GroupName::Dihedral(0) => Err(Error::UnknownName(name.to_string())),
        GroupName::Cyclic(n) => cyclic_monoid(0, *n),
        GroupName::Dihedral(n) => Ok(dihedral(*n)),
        GroupName::Klein => Ok(FiniteMonoid::from_trusted(
            4,
            (0..16).map(|k| (k / 4) ^ (k % 4)).collect(),
        )),
        GroupName::Quaternion8 => Ok(quaternion8()),
        GroupName::DirectProduct(a, b) => {
            Ok(direct_product(&standard_group(a)?, &standard_group(b)?))
        }
    }
}

fn dihedral(n: usize) -> FiniteMonoid {
    // r^i s^a is stored at i + n*a
    let size = 2 * n;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        let (i, a) = (x % n, x / n);
        for y in 0..size {
            let (j, b) = (y % n, y / n);
            let rot = if a == 0 { (i + j) % n } else { (i + n - j) % n };
            table.push(rot + n * ((a + b) % 2));
        }
    }
    FiniteMonoid::from_trusted(size, table)
}

fn quaternion8() -> FiniteMonoid {
    // unit u in {1, i, j, k} = 0..4; element sign*4 + u
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (sign, u) = UNIT[x % 4][y % 4];
            table.push(((x / 4 + y / 4 + sign) % 2) * 4 + u);
        }
    }
    FiniteMonoid::from_trusted(8, table)
}

/// Direct product; the pair `(a, b)` is stored at `a * |B| + b`.
pub fn direct_product(left: &FiniteMonoid, right: &FiniteMonoid) -> FiniteMonoid {
    let (n, m) = (left.size(), right.size());
    let size = n * m;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            table.push(left.mul(x / m, y / m) * m + right.mul(x % m, y % m));
        }
    }
    FiniteMonoid::from_trusted(size, table)
}

/// Resolves any monoid name: group names plus `idem2` and `cm<i>-<p>`.
pub fn named_monoid(name: &str) -> Result<FiniteMonoid> {
    if name == "idem2" {
        return Ok(idempotent_monoid());
    }
    if let Some(rest) = name.strip_prefix("cm") {
        let (i, p) = rest
            .split_once('-')
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let i = i
            .parse()
            .map_err(|_| Error::UnknownName(name.to_string()))?;
        let p = p
            .parse()
            .map_err(|_| Error::UnknownName(name.to_string()))?;
        return cyclic_monoid(i, p);
    }
    standard_group(&name.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_profile(m: &FiniteMonoid) -> Vec<usize> {
        let mut p: Vec<usize> = m.elements().map(|a| m.element_order(a).value()).collect();
        p.sort_unstable();
        p
    }

    #[test]
    fn names_round_trip() {
        for s in [
            "trivial", "z6", "d4", "s3", "klein", "q8", "z2xz3", "z2xz2xz2",
        ] {
            let g: GroupName = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
            assert_eq!(standard_group(&g).unwrap().size(), g.order());
        }
        assert!(matches!(
            "foo".parse::<GroupName>(),
            Err(Error::UnknownName(_))
        ));
        assert!("z0".parse::<GroupName>().is_err());
        assert!(named_monoid("cm2").is_err());
    }

    #[test]
    fn catalog_groups_are_groups() {
        for s in [
            "trivial", "z5", "d1", "d2", "d3", "d4", "klein", "q8", "z2xz4",
        ] {
            let g = standard_group(&s.parse().unwrap()).unwrap();
            assert!(g.is_group(), "{s}");
        }
        assert_eq!(standard_group(&GroupName::Cyclic(1)).unwrap().size(), 1);
    }

    #[test]
    fn dihedral_and_quaternion_shapes() {
        let d4 = standard_group(&GroupName::Dihedral(4)).unwrap();
        assert!(!d4.is_commutative());
        assert_eq!(order_profile(&d4), vec![1, 2, 2, 2, 2, 2, 4, 4]);

        let q8 = standard_group(&GroupName::Quaternion8).unwrap();
        assert!(!q8.is_commutative());
        assert_eq!(order_profile(&q8), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        let involutions = q8
            .elements()
            .filter(|&a| q8.element_order(a).value() == 2)
            .count();
        assert_eq!(involutions, 1);

        let klein = standard_group(&GroupName::Klein).unwrap();
        assert!(klein.is_commutative());
        assert_eq!(order_profile(&klein), vec![1, 2, 2, 2]);
    }

    #[test]
    fn named_non_groups() {
        let m = named_monoid("cm2-2").unwrap();
        assert_eq!(m.size(), 4);
        assert!(!m.is_group());
        assert!(!named_monoid("idem2").unwrap().is_group());
    }
}
