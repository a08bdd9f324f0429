//! Small monoid and group censuses, and the power-isomorphism experiment.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{named_monoid, standard_group, GroupName};
use crate::iso::{
    find_isomorphism, search_first, signatures, Invariants, IsoWitness, SearchConfig,
    SearchOutcome, SearchReport,
};
use crate::monoid::FiniteMonoid;
use crate::power::{reduced_power_monoid, PowerMonoid};
use crate::verify::{extract_pullback, pullback_report};

/// Largest order accepted by [`enumerate_monoids`].
pub const MAX_ENUMERATION_ORDER: usize = 5;
/// Largest order accepted by [`groups_catalog`].
pub const MAX_CATALOG_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tags {
    pub group: bool,
    pub commutative: bool,
    pub cancellative: bool,
}

impl Tags {
    pub fn of(m: &FiniteMonoid) -> Self {
        Self {
            group: m.is_group(),
            commutative: m.is_commutative(),
            cancellative: m.is_cancellative(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub name: String,
    pub monoid: FiniteMonoid,
    pub canonical_key: Vec<u8>,
    pub tags: Tags,
}

impl CensusEntry {
    pub fn new(name: impl Into<String>, monoid: FiniteMonoid) -> Self {
        Self {
            name: name.into(),
            canonical_key: canonical_key(&monoid),
            tags: Tags::of(&monoid),
            monoid,
        }
    }
}

/// Minimum row-major table over all relabelings that list elements by
/// increasing signature (the identity first), permuting freely inside each
/// signature class.
pub fn canonical_form(m: &FiniteMonoid) -> FiniteMonoid {
    let n = m.size();
    let sigs = signatures(m, Invariants::Basic);
    let mut by_sig: BTreeMap<&Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (a, s) in sigs.iter().enumerate() {
        by_sig.entry(s).or_default().push(a);
    }
    let blocks: Vec<Vec<usize>> = by_sig.into_values().collect();

    // order[pos] = old element placed at new label pos
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut best: Option<Vec<usize>> = None;
    let mut used = vec![false; n];
    canonical_search(m, &blocks, 0, &mut order, &mut used, &mut best);
    let order = best.unwrap();
    let mut perm = vec![0; n];
    for (pos, &a) in order.iter().enumerate() {
        perm[a] = pos;
    }
    m.relabel(&perm)
}

fn canonical_search(
    m: &FiniteMonoid,
    blocks: &[Vec<usize>],
    block: usize,
    order: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<Vec<usize>>,
) {
    let n = m.size();
    if order.len() == n {
        let better = match best {
            None => true,
            Some(b) => compare_labelings(m, order, b) == std::cmp::Ordering::Less,
        };
        if better {
            *best = Some(order.clone());
        }
        return;
    }
    let filled: usize = blocks[..block].iter().map(Vec::len).sum();
    let next_block = if order.len() + 1 == filled + blocks[block].len() {
        block + 1
    } else {
        block
    };
    for &a in &blocks[block] {
        if used[a] {
            continue;
        }
        used[a] = true;
        order.push(a);
        canonical_search(m, blocks, next_block, order, used, best);
        order.pop();
        used[a] = false;
    }
}

fn compare_labelings(m: &FiniteMonoid, a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    let n = m.size();
    let mut pos_a = vec![0; n];
    let mut pos_b = vec![0; n];
    for i in 0..n {
        pos_a[a[i]] = i;
        pos_b[b[i]] = i;
    }
    for i in 0..n {
        for j in 0..n {
            let x = pos_a[m.mul(a[i], a[j])];
            let y = pos_b[m.mul(b[i], b[j])];
            if x != y {
                return x.cmp(&y);
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// Relabeling-invariant encoding: the order followed by the canonical table.
pub fn canonical_key(m: &FiniteMonoid) -> Vec<u8> {
    assert!(
        m.size() <= 255,
        "canonical keys cover monoids of order at most 255"
    );
    let c = canonical_form(m);
    std::iter::once(m.size() as u8)
        .chain(c.table().iter().map(|&v| v as u8))
        .collect()
}

/// All Cayley tables of order `n` with identity `0`, without deduplication.
pub fn enumerate_raw_monoids(n: usize) -> Result<Vec<FiniteMonoid>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::SizeLimitExceeded {
            what: "monoid enumeration order",
            required: n,
            limit: MAX_ENUMERATION_ORDER,
        });
    }
    const UNSET: usize = usize::MAX;
    let mut table = vec![UNSET; n * n];
    for a in 0..n {
        table[a] = a;
        table[a * n] = a;
    }
    let cells: Vec<usize> = (1..n)
        .flat_map(|a| (1..n).map(move |b| a * n + b))
        .collect();
    let mut out = Vec::new();
    fill_cells(n, &mut table, &cells, 0, &mut out);
    Ok(out)
}

fn fill_cells(
    n: usize,
    table: &mut [usize],
    cells: &[usize],
    k: usize,
    out: &mut Vec<FiniteMonoid>,
) {
    let Some(&cell) = cells.get(k) else {
        out.push(FiniteMonoid::from_trusted(n, table.to_vec()));
        return;
    };
    for v in 0..n {
        table[cell] = v;
        if associative_so_far(n, table) {
            fill_cells(n, table, cells, k + 1, out);
        }
    }
    table[cell] = usize::MAX;
}

/// No violated triple among the triples whose entries are all set.
fn associative_so_far(n: usize, t: &[usize]) -> bool {
    const UNSET: usize = usize::MAX;
    for a in 1..n {
        for b in 1..n {
            let ab = t[a * n + b];
            if ab == UNSET {
                continue;
            }
            for c in 1..n {
                let bc = t[b * n + c];
                if bc == UNSET {
                    continue;
                }
                let (l, r) = (t[ab * n + c], t[a * n + bc]);
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// All monoids of order `n` up to isomorphism, sorted by canonical key and
/// named `m<n>.<i>`.
pub fn enumerate_monoids(n: usize) -> Result<Vec<CensusEntry>> {
    let mut classes: BTreeMap<Vec<u8>, FiniteMonoid> = BTreeMap::new();
    for m in enumerate_raw_monoids(n)? {
        let key = canonical_key(&m);
        classes.entry(key).or_insert_with(|| canonical_form(&m));
    }
    Ok(classes
        .into_iter()
        .enumerate()
        .map(|(i, (key, m))| CensusEntry {
            name: format!("m{n}.{i}"),
            tags: Tags::of(&m),
            canonical_key: key,
            monoid: m,
        })
        .collect())
}

/// Every monoid of order `1..=max_order` up to isomorphism.
pub fn monoid_census(max_order: usize) -> Result<Vec<CensusEntry>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(enumerate_monoids(n)?);
    }
    Ok(out)
}

/// Looks up a census name `m<n>.<i>`.
pub fn census_monoid(name: &str) -> Result<FiniteMonoid> {
    let unknown = || Error::UnknownName(name.to_string());
    let (n, i) = name
        .strip_prefix('m')
        .and_then(|r| r.split_once('.'))
        .ok_or_else(unknown)?;
    let n: usize = n.parse().map_err(|_| unknown())?;
    let i: usize = i.parse().map_err(|_| unknown())?;
    enumerate_monoids(n)?
        .into_iter()
        .nth(i)
        .map(|e| e.monoid)
        .ok_or_else(unknown)
}

/// A named monoid (`z6`, `q8`, `idem2`, `cm2-2`, ...) or a census name.
pub fn resolve_monoid(name: &str) -> Result<FiniteMonoid> {
    match named_monoid(name) {
        Err(Error::UnknownName(_)) => census_monoid(name),
        other => other,
    }
}

fn catalog_names(max_order: usize) -> Vec<GroupName> {
    use GroupName::*;
    let z = Cyclic;
    let all = vec![
        z(1),
        z(2),
        z(3),
        z(4),
        Klein,
        z(5),
        z(6),
        Dihedral(3),
        z(7),
        z(8),
        GroupName::product(z(2), z(4)),
        GroupName::product(z(2), GroupName::product(z(2), z(2))),
        Dihedral(4),
        Quaternion8,
    ];
    all.into_iter().filter(|g| g.order() <= max_order).collect()
}

/// One representative of each group of order at most `max_order`.
pub fn groups_catalog(max_order: usize) -> Result<Vec<CensusEntry>> {
    if max_order > MAX_CATALOG_ORDER {
        return Err(Error::SizeLimitExceeded {
            what: "group catalog order",
            required: max_order,
            limit: MAX_CATALOG_ORDER,
        });
    }
    catalog_names(max_order)
        .into_iter()
        .map(|g| Ok(CensusEntry::new(g.to_string(), standard_group(&g)?)))
        .collect()
}

/// Groups with a different table than a catalog entry they are isomorphic
/// to, so the experiment also exercises the positive direction.
pub fn positive_controls(max_order: usize) -> Result<Vec<CensusEntry>> {
    let controls = [GroupName::product(
        GroupName::Cyclic(2),
        GroupName::Cyclic(3),
    )];
    controls
        .into_iter()
        .filter(|g| g.order() <= max_order)
        .map(|g| Ok(CensusEntry::new(g.to_string(), standard_group(&g)?)))
        .collect()
}

/// Catalog plus positive controls, ordered by group order then name order.
pub fn group_census(max_order: usize) -> Result<Vec<CensusEntry>> {
    let mut all = groups_catalog(max_order)?;
    all.extend(positive_controls(max_order)?);
    all.sort_by_key(|e| e.monoid.size());
    Ok(all)
}

/// Searches for an isomorphism of the reduced power monoids of `h` and `k`,
/// pruning with extended element invariants of the carriers. Subset size is
/// not used as an invariant.
pub fn find_power_isomorphism(
    h: &PowerMonoid,
    k: &PowerMonoid,
    budget: Option<u64>,
) -> SearchReport {
    let config = SearchConfig::with_budget(budget).extended();
    search_first(h.carrier(), k.carrier(), &config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerIso {
    Yes,
    No,
    BudgetExceeded,
}

impl fmt::Display for PowerIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerIso::Yes => "yes",
            PowerIso::No => "no",
            PowerIso::BudgetExceeded => "budget-exceeded",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub h: usize,
    pub k: usize,
    pub base_iso: bool,
    pub power_iso: PowerIso,
    /// Set when a power isomorphism exists and both bases are groups.
    pub pullback_ok: Option<bool>,
    /// Search nodes spent on the power-isomorphism search.
    pub nodes: u64,
    pub witness: Option<IsoWitness>,
}

impl ExperimentRecord {
    /// The pair contradicts "power iso iff base iso".
    pub fn is_exception(&self) -> bool {
        match self.power_iso {
            PowerIso::Yes => !self.base_iso,
            PowerIso::No => self.base_iso,
            PowerIso::BudgetExceeded => false,
        }
    }

    pub fn tsv(&self, census: &[CensusEntry]) -> String {
        let pb = match self.pullback_ok {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.h,
            self.k,
            census[self.h].name,
            census[self.k].name,
            if self.base_iso { "yes" } else { "no" },
            self.power_iso,
            pb,
            self.nodes
        )
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub pairs: usize,
    pub base_isomorphic: usize,
    pub power_isomorphic: usize,
    pub exceptions: Vec<(usize, usize)>,
    pub budget_exceeded: Vec<(usize, usize)>,
    pub pullback_failures: Vec<(usize, usize)>,
}

impl ExperimentSummary {
    /// No exceptions and no undecided pairs.
    pub fn biconditional_holds(&self) -> bool {
        self.exceptions.is_empty() && self.budget_exceeded.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub records: Vec<ExperimentRecord>,
    pub summary: ExperimentSummary,
}

impl Experiment {
    pub const HEADER: &'static str =
        "h\tk\th_name\tk_name\tbase_iso\tpower_iso\tpullback_ok\tnodes";

    pub fn summary_lines(&self, census: &[CensusEntry]) -> Vec<String> {
        let s = &self.summary;
        let pairs = |v: &[(usize, usize)]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter()
                    .map(|&(a, b)| format!("{}:{}", census[a].name, census[b].name))
                    .collect::<Vec<_>>()
                    .join(",")
            }
        };
        vec![
            format!("summary\tpairs\t{}", s.pairs),
            format!("summary\tbase_isomorphic\t{}", s.base_isomorphic),
            format!("summary\tpower_isomorphic\t{}", s.power_isomorphic),
            format!(
                "summary\texceptions\t{}\t{}",
                s.exceptions.len(),
                pairs(&s.exceptions)
            ),
            format!(
                "summary\tbudget_exceeded\t{}\t{}",
                s.budget_exceeded.len(),
                pairs(&s.budget_exceeded)
            ),
            format!(
                "summary\tpullback_failures\t{}\t{}",
                s.pullback_failures.len(),
                pairs(&s.pullback_failures)
            ),
            format!(
                "summary\tbiconditional\t{}",
                if s.biconditional_holds() {
                    "holds"
                } else {
                    "fails"
                }
            ),
        ]
    }
}

fn run_pair(
    census: &[CensusEntry],
    powers: &[Option<PowerMonoid>],
    i: usize,
    j: usize,
    budget: Option<u64>,
) -> ExperimentRecord {
    let (h, k) = (&census[i], &census[j]);
    let base_iso = h.canonical_key == k.canonical_key
        || find_isomorphism(&h.monoid, &k.monoid)
            .expect("unbounded search")
            .is_some();
    let (Some(ph), Some(pk)) = (&powers[i], &powers[j]) else {
        return ExperimentRecord {
            h: i,
            k: j,
            base_iso,
            power_iso: PowerIso::BudgetExceeded,
            pullback_ok: None,
            nodes: 0,
            witness: None,
        };
    };
    let report = find_power_isomorphism(ph, pk, budget);
    let (power_iso, witness) = match report.outcome {
        SearchOutcome::Found(w) => {
            assert!(w.is_valid_for(ph.carrier(), pk.carrier()));
            (PowerIso::Yes, Some(w))
        }
        SearchOutcome::ProvenAbsent => (PowerIso::No, None),
        SearchOutcome::BudgetExceeded => (PowerIso::BudgetExceeded, None),
    };
    let pullback_ok = match &witness {
        Some(w) if h.tags.group && k.tags.group => Some(
            extract_pullback(ph, pk, w)
                .map(|pb| {
                    let r = pullback_report(&pb);
                    r.full_hom && r.passed()
                })
                .unwrap_or(false),
        ),
        _ => None,
    };
    ExperimentRecord {
        h: i,
        k: j,
        base_iso,
        power_iso,
        pullback_ok,
        nodes: report.nodes,
        witness,
    }
}

/// Runs every unordered pair `(i, j)` with `i <= j`. Records come back
/// sorted by pair regardless of scheduling. Bases whose power monoid is too
/// large to materialise are reported as budget-exceeded.
pub fn run_experiment(census: &[CensusEntry], budget: Option<u64>) -> Experiment {
    let powers: Vec<Option<PowerMonoid>> = census
        .par_iter()
        .map(|e| reduced_power_monoid(&e.monoid).ok())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..census.len())
        .flat_map(|i| (i..census.len()).map(move |j| (i, j)))
        .collect();
    let mut records: Vec<ExperimentRecord> = pairs
        .par_iter()
        .map(|&(i, j)| run_pair(census, &powers, i, j, budget))
        .collect();
    records.sort_by_key(|r| (r.h, r.k));

    let pick = |f: &dyn Fn(&ExperimentRecord) -> bool| -> Vec<(usize, usize)> {
        records
            .iter()
            .filter(|r| f(r))
            .map(|r| (r.h, r.k))
            .collect()
    };
    let summary = ExperimentSummary {
        pairs: records.len(),
        base_isomorphic: records.iter().filter(|r| r.base_iso).count(),
        power_isomorphic: records
            .iter()
            .filter(|r| r.power_iso == PowerIso::Yes)
            .count(),
        exceptions: pick(&|r| r.is_exception()),
        budget_exceeded: pick(&|r| r.power_iso == PowerIso::BudgetExceeded),
        pullback_failures: pick(&|r| r.pullback_ok == Some(false)),
    };
    Experiment { records, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::idempotent_monoid;

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_monoids(1).unwrap().len(), 1);
        let two = enumerate_monoids(2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().any(|e| e.tags.group));
        assert!(two
            .iter()
            .any(|e| find_isomorphism(&e.monoid, &idempotent_monoid())
                .unwrap()
                .is_some()));
        assert_eq!(enumerate_monoids(3).unwrap().len(), 7);
        assert!(enumerate_monoids(6).is_err());
        assert!(enumerate_monoids(0).is_err());
    }

    #[test]
    fn canonical_form_is_a_relabeling() {
        for e in enumerate_monoids(3).unwrap() {
            assert_eq!(canonical_form(&e.monoid), e.monoid);
            assert_eq!(e.monoid.identity(), 0);
        }
    }

    #[test]
    fn catalog_sizes() {
        let names: Vec<String> = groups_catalog(2)
            .unwrap()
            .into_iter()
            .map(|e| e.name)
            .collect();
        assert_eq!(names, vec!["trivial", "z2"]);
        assert_eq!(groups_catalog(4).unwrap().len(), 5);
        assert_eq!(groups_catalog(8).unwrap().len(), 14);
        assert!(groups_catalog(9).is_err());
        assert_eq!(group_census(6).unwrap().len(), 9);
    }

    #[test]
    fn census_names_resolve() {
        let m = census_monoid("m2.1").unwrap();
        assert_eq!(m.size(), 2);
        assert!(census_monoid("m2.9").is_err());
        assert!(census_monoid("q").is_err());
    }

    #[test]
    fn tiny_experiment() {
        let census = groups_catalog(2).unwrap();
        let exp = run_experiment(&census, None);
        assert_eq!(exp.summary.pairs, 3);
        assert!(exp.summary.biconditional_holds());
        assert!(exp.summary.pullback_failures.is_empty());
    }
}
