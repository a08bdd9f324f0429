//! Setwise products and power monoids of a finite monoid.
//!
//! The reduced power monoid has as elements the subsets containing the
//! identity; the full power semigroup (a monoid with identity `{1}`) has all
//! non-empty subsets. Carrier indices follow increasing bitmask order.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::iso::IsoWitness;
use crate::monoid::FiniteMonoid;
use crate::subset::{SubsetId, MAX_BASE};

/// `{xy : x in X, y in Y}`.
pub fn setwise_product(m: &FiniteMonoid, x: SubsetId, y: SubsetId) -> SubsetId {
    let mut bits = 0u64;
    for a in x.iter() {
        let row = m.row(a);
        for b in y.iter() {
            bits |= 1 << row[b];
        }
    }
    SubsetId::from_bits(m.size(), bits)
}

/// `X^k`, with `X^0 = {1}`.
pub fn subset_power(m: &FiniteMonoid, x: SubsetId, k: usize) -> SubsetId {
    (0..k).fold(identity_subset(m), |acc, _| setwise_product(m, acc, x))
}

pub fn identity_subset(m: &FiniteMonoid) -> SubsetId {
    SubsetId::singleton(m.size(), m.identity())
}

/// `{1, a}` in the base monoid.
pub fn with_identity(m: &FiniteMonoid, a: usize) -> SubsetId {
    SubsetId::pair(m.size(), m.identity(), a)
}

/// Left-to-right product of a list of subsets; `{1}` when empty.
pub fn product_of(m: &FiniteMonoid, factors: &[SubsetId]) -> SubsetId {
    factors
        .iter()
        .fold(identity_subset(m), |acc, &f| setwise_product(m, acc, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerKind {
    Reduced,
    Full,
}

/// Base-size limits for power-monoid constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerLimits {
    /// Largest base whose carrier table is materialised.
    pub materialize_max_base: usize,
    /// Largest base for memoised on-demand products.
    pub on_demand_max_base: usize,
}

impl Default for PowerLimits {
    fn default() -> Self {
        Self {
            materialize_max_base: 10,
            on_demand_max_base: 16,
        }
    }
}

/// A power monoid materialised as a [`FiniteMonoid`] over subset indices.
#[derive(Debug, Clone)]
pub struct PowerMonoid {
    base: FiniteMonoid,
    carrier: FiniteMonoid,
    subsets: Vec<SubsetId>,
    index: HashMap<u64, usize>,
    kind: PowerKind,
}

pub fn reduced_power_monoid(m: &FiniteMonoid) -> Result<PowerMonoid> {
    PowerMonoid::build(m, PowerKind::Reduced, &PowerLimits::default())
}

pub fn full_power_semigroup(m: &FiniteMonoid) -> Result<PowerMonoid> {
    PowerMonoid::build(m, PowerKind::Full, &PowerLimits::default())
}

impl PowerMonoid {
    pub fn build(m: &FiniteMonoid, kind: PowerKind, limits: &PowerLimits) -> Result<Self> {
        let n = m.size();
        let limit = limits.materialize_max_base.min(MAX_BASE);
        if n > limit {
            let required = match kind {
                PowerKind::Reduced => 1usize.checked_shl(n as u32 - 1),
                PowerKind::Full => 1usize.checked_shl(n as u32).map(|v| v - 1),
            }
            .unwrap_or(usize::MAX);
            return Err(Error::SizeLimitExceeded {
                what: "materialised power monoid carrier",
                required,
                limit: match kind {
                    PowerKind::Reduced => 1 << (limit - 1),
                    PowerKind::Full => (1 << limit) - 1,
                },
            });
        }
        let e = 1u64 << m.identity();
        let subsets: Vec<SubsetId> = (1..1u64 << n)
            .filter(|bits| kind == PowerKind::Full || bits & e != 0)
            .map(|bits| SubsetId::from_bits(n, bits))
            .collect();
        let index: HashMap<u64, usize> = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits(), i))
            .collect();
        let size = subsets.len();
        let mut table = Vec::with_capacity(size * size);
        for &x in &subsets {
            for &y in &subsets {
                table.push(index[&setwise_product(m, x, y).bits()]);
            }
        }
        let carrier = FiniteMonoid::from_trusted(size, table);
        debug_assert_eq!(subsets[carrier.identity()], identity_subset(m));
        Ok(Self {
            base: m.clone(),
            carrier,
            subsets,
            index,
            kind,
        })
    }

    pub fn base(&self) -> &FiniteMonoid {
        &self.base
    }

    pub fn carrier(&self) -> &FiniteMonoid {
        &self.carrier
    }

    pub fn kind(&self) -> PowerKind {
        self.kind
    }

    pub fn subset_of(&self, i: usize) -> SubsetId {
        self.subsets[i]
    }

    pub fn index_of(&self, s: SubsetId) -> Option<usize> {
        self.index.get(&s.bits()).copied()
    }

    pub fn subsets(&self) -> &[SubsetId] {
        &self.subsets
    }

    /// Carrier index of `{1, a}`.
    pub fn pair_index(&self, a: usize) -> usize {
        self.index_of(with_identity(&self.base, a))
            .expect("{1, a} belongs to every power monoid")
    }

    /// Maps a carrier isomorphism to the subset-level image of `X`.
    pub fn image_under(&self, target: &PowerMonoid, f: &IsoWitness, x: SubsetId) -> SubsetId {
        target.subset_of(f.apply(self.index_of(x).expect("subset outside carrier")))
    }
}

/// The augmentation `X -> h[X]` of a base isomorphism, certified as an
/// isomorphism of the two carriers.
pub fn augmentation(
    source: &PowerMonoid,
    target: &PowerMonoid,
    h: &IsoWitness,
) -> Result<IsoWitness> {
    let map = source
        .subsets()
        .iter()
        .map(|s| {
            target
                .index_of(s.image(h.map()))
                .ok_or_else(|| Error::InvalidWitness(format!("image of {s} not in target")))
        })
        .collect::<Result<Vec<_>>>()?;
    IsoWitness::certify(source.carrier(), target.carrier(), map)
}

/// Memoised on-demand setwise products for bases too large to materialise.
///
/// Lookups are safe from several threads; each product is stored once and
/// every caller observes the same value.
#[derive(Debug)]
pub struct SubsetProducts {
    base: FiniteMonoid,
    cache: RwLock<HashMap<(u64, u64), u64>>,
}

impl SubsetProducts {
    pub fn new(m: &FiniteMonoid, limits: &PowerLimits) -> Result<Self> {
        let limit = limits.on_demand_max_base.min(MAX_BASE);
        if m.size() > limit {
            return Err(Error::SizeLimitExceeded {
                what: "on-demand subset products base",
                required: m.size(),
                limit,
            });
        }
        Ok(Self {
            base: m.clone(),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn base(&self) -> &FiniteMonoid {
        &self.base
    }

    pub fn product(&self, x: SubsetId, y: SubsetId) -> SubsetId {
        let key = (x.bits(), y.bits());
        if let Some(&bits) = self.cache.read().unwrap().get(&key) {
            return SubsetId::from_bits(self.base.size(), bits);
        }
        let p = setwise_product(&self.base, x, y);
        let bits = *self.cache.write().unwrap().entry(key).or_insert(p.bits());
        SubsetId::from_bits(self.base.size(), bits)
    }

    pub fn power(&self, x: SubsetId, k: usize) -> SubsetId {
        (0..k).fold(identity_subset(&self.base), |acc, _| self.product(acc, x))
    }

    pub fn cached(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}
