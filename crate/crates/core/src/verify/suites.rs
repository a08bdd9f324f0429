//! Exhaustive suites over the monoid census and the group catalog.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::{
    find_power_isomorphism, group_census, monoid_census, resolve_monoid, CensusEntry,
};
use crate::error::{Error, Result};
use crate::iso::{enumerate_isomorphisms_with, find_isomorphism, SearchConfig, SearchOutcome};
use crate::monoid::{cyclic_monoid, FiniteMonoid};
use crate::power::{reduced_power_monoid, subset_power, with_identity, PowerMonoid};
use crate::subset::SubsetId;

use super::{
    check_cross_relation, check_order_stabilization, check_shifted_power, check_two_to_two,
    count_equation_solutions, extract_pullback, minimal_relation, pullback_report,
    two_element_case_count, PullbackReport, Record, Status, SuiteReport, Universe,
};

pub const SUITES: [&str; 7] = [
    "lemma21", "lemma22", "lemma24", "prop25", "lemma31", "thm32", "section4",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    /// Monoid census order for the element-level suites.
    pub monoid_order: usize,
    /// Group catalog order for the cancellative suites.
    pub group_order: usize,
    /// Group order for suites that search power-monoid isomorphisms.
    pub power_group_order: usize,
    /// Search node budget per power-monoid search.
    pub budget: Option<u64>,
    pub seed: u64,
    pub pair: Option<(String, String)>,
    pub monoid: Option<String>,
    pub exponent: Option<usize>,
}

impl Default for Scope {
    fn default() -> Self {
        Self {
            monoid_order: 4,
            group_order: 8,
            power_group_order: 6,
            budget: None,
            seed: 0,
            pair: None,
            monoid: None,
            exponent: None,
        }
    }
}

impl Scope {
    /// Caps every order at `n`, and at the largest order each census supports.
    pub fn with_max_order(mut self, n: usize) -> Self {
        self.monoid_order = n.min(crate::census::MAX_ENUMERATION_ORDER);
        self.group_order = n.min(crate::census::MAX_CATALOG_ORDER);
        self.power_group_order = n.min(crate::census::MAX_CATALOG_ORDER);
        self
    }

    /// Power-monoid suites keep the monoid census at order 4 or below.
    fn power_monoid_order(&self) -> usize {
        self.monoid_order.min(4)
    }
}

/// Runs one suite by name, or every suite for `all`.
pub fn run_suite(name: &str, scope: &Scope) -> Result<SuiteReport> {
    match name {
        "all" => {
            let mut report = SuiteReport::new("all");
            for s in SUITES {
                report.extend(run_suite(s, scope)?);
            }
            Ok(report)
        }
        "lemma21" => lemma21(scope),
        "lemma22" => lemma22(scope),
        "lemma24" => lemma24(scope),
        "prop25" => prop25(scope),
        "lemma31" => lemma31(scope),
        "thm32" => thm32(scope),
        "section4" => section4(scope),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

fn collect<T, F>(name: &str, items: &[T], f: F) -> Result<SuiteReport>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<Record>> + Sync + Send,
{
    let chunks: Vec<Vec<Record>> = items.par_iter().map(f).collect::<Result<_>>()?;
    Ok(SuiteReport {
        name: name.to_string(),
        records: chunks.into_iter().flatten().collect(),
    })
}

fn groups(max_order: usize) -> Result<Vec<CensusEntry>> {
    group_census(max_order)
}

pub fn lemma21(scope: &Scope) -> Result<SuiteReport> {
    let census = monoid_census(scope.monoid_order)?;
    collect("lemma21", &census, |e| {
        e.monoid
            .elements()
            .map(|z| Ok(check_order_stabilization(&e.monoid, z)?.record(&e.name)))
            .collect()
    })
}

fn shifted_power_records(e: &CensusEntry) -> Result<Vec<Record>> {
    let m = &e.monoid;
    let mut out = Vec::new();
    for z in m.elements() {
        let ord = m.element_order(z).value();
        for shift in 1..=ord {
            for r in 0..=shift + 3 {
                out.extend(check_shifted_power(m, z, shift, r)?.records(&e.name));
            }
        }
    }
    Ok(out)
}

pub fn lemma22(scope: &Scope) -> Result<SuiteReport> {
    let mut entries = monoid_census(scope.monoid_order)?;
    entries.extend(groups(scope.group_order)?);
    let mut report = collect("lemma22", &entries, shifted_power_records)?;

    // order 4, index 2: {1,z^3}{1,z} = {1,z}^4 although 1 < 3 - 1
    let m = cyclic_monoid(2, 2)?;
    let c = check_shifted_power(&m, 1, 3, 1)?;
    let x = with_identity(&m, 1);
    let reproduced = c.is_finding()
        && c.lhs == subset_power(&m, x, 4)
        && c.equal_powers.contains(&4)
        && c.inequality == Status::NotApplicable;
    report.push(
        Record::new(
            "lemma22.example",
            "cm2-2 z=1 l=3 r=1",
            Status::from_bool(reproduced),
        )
        .with_witness(format!(
            "lhs={} equals {{1,z}}^s for s={:?}",
            c.lhs, c.equal_powers
        )),
    );
    report.records.extend(c.records("cm2-2"));
    Ok(report)
}

pub fn lemma24(scope: &Scope) -> Result<SuiteReport> {
    let entries = groups(scope.group_order)?;
    collect("lemma24", &entries, |e| {
        let m = &e.monoid;
        let mut out = Vec::new();
        for x in m.elements() {
            let ox = m.element_order(x).value();
            for y in m.elements() {
                let oy = m.element_order(y).value();
                for r in 1..=ox {
                    for s in 1..=oy {
                        if m.pow(x, r) == m.pow(y, s) {
                            out.push(check_cross_relation(m, x, y, r, s)?.record(&e.name));
                        }
                    }
                }
            }
        }
        Ok(out)
    })
}

pub fn prop25(scope: &Scope) -> Result<SuiteReport> {
    let entries = groups(scope.group_order)?;
    collect("prop25", &entries, |e| {
        let m = &e.monoid;
        let mut out = Vec::new();
        for x in m.elements() {
            for y in m.elements() {
                out.push(minimal_relation(m, x, y)?.record(m, &e.name, x, y));
            }
        }
        Ok(out)
    })
}

fn equation_records(e: &CensusEntry, exponents: &[usize]) -> Result<Vec<Record>> {
    let m = &e.monoid;
    let mut out = Vec::new();
    let e_bit = 1u64 << m.identity();
    for bits in (1u64..1 << m.size()).filter(|b| b & e_bit != 0) {
        let s = SubsetId::new(m.size(), bits)?;
        for &n in exponents {
            out.push(count_equation_solutions(m, s, n, Universe::Full)?.record(&e.name));
        }
    }
    Ok(out)
}

fn case_records(e: &CensusEntry) -> Result<Vec<Record>> {
    let m = &e.monoid;
    m.elements()
        .filter(|&x| x != m.identity())
        .map(|x| Ok(two_element_case_count(m, x)?.record(&e.name)))
        .collect()
}

pub fn lemma31(scope: &Scope) -> Result<SuiteReport> {
    let exponents: Vec<usize> = match scope.exponent {
        Some(n) => vec![n],
        None => vec![3, 4],
    };
    let (counted, cased) = match &scope.monoid {
        Some(name) => {
            let one = vec![CensusEntry::new(name.clone(), resolve_monoid(name)?)];
            (one.clone(), one)
        }
        None => {
            let mut cased = monoid_census(scope.monoid_order)?;
            cased.extend(groups(scope.group_order)?);
            (monoid_census(scope.monoid_order)?, cased)
        }
    };
    let mut report = collect("lemma31", &counted, |e| equation_records(e, &exponents))?;
    report.extend(collect("lemma31", &cased, case_records)?);
    Ok(report)
}

/// Pairs `(i, j)` with `i <= j` and bases of equal order.
fn same_order_pairs(entries: &[CensusEntry]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..entries.len() {
        for j in i..entries.len() {
            if entries[i].monoid.size() == entries[j].monoid.size() {
                out.push((i, j));
            }
        }
    }
    out
}

fn power_monoids(entries: &[CensusEntry]) -> Result<Vec<PowerMonoid>> {
    entries
        .par_iter()
        .map(|e| reduced_power_monoid(&e.monoid))
        .collect()
}

fn cardinality_preserving(p: &PowerMonoid, q: &PowerMonoid, f: &crate::iso::IsoWitness) -> bool {
    (0..p.carrier().size()).all(|i| p.subset_of(i).len() == q.subset_of(f.apply(i)).len())
}

fn pair_label(entries: &[CensusEntry], i: usize, j: usize) -> String {
    format!("{}:{}", entries[i].name, entries[j].name)
}

fn budget_record(checker: &'static str, label: String, nodes: u64) -> Record {
    Record::new(checker, label, Status::Fail)
        .with_witness(format!("search budget exceeded after {nodes} nodes"))
}

fn two_to_two_pair(
    entries: &[CensusEntry],
    powers: &[PowerMonoid],
    (i, j): (usize, usize),
    budget: Option<u64>,
) -> Vec<Record> {
    let label = pair_label(entries, i, j);
    let (p, q) = (&powers[i], &powers[j]);
    let config = SearchConfig::with_budget(budget).extended();
    let isos = match enumerate_isomorphisms_with(p.carrier(), q.carrier(), &config) {
        Ok(v) => v,
        Err(Error::SearchBudgetExceeded { nodes }) => {
            return vec![budget_record("thm32", label, nodes)]
        }
        Err(e) => {
            return vec![Record::new("thm32", label, Status::Fail).with_witness(e.to_string())]
        }
    };
    if isos.is_empty() {
        return Vec::new();
    }
    let mut bad_sets = Vec::new();
    let mut bad_pullbacks = Vec::new();
    let mut preserving = 0;
    for f in &isos {
        let c = check_two_to_two(p, q, f);
        if !c.passed() {
            bad_sets.push(c.record(&label).witness);
        }
        match extract_pullback(p, q, f) {
            Ok(pb) if pb.apply(p.base().identity()) == q.base().identity() => {}
            Ok(pb) => bad_pullbacks.push(format!("g(1)={}", pb.apply(p.base().identity()))),
            Err(e) => bad_pullbacks.push(e.to_string()),
        }
        preserving += usize::from(cardinality_preserving(p, q, f));
    }
    let n = isos.len();
    let witness = |bad: &[String]| match bad.first() {
        None => format!("isos={n}"),
        Some(w) => format!("isos={n} bad={} first: {w}", bad.len()),
    };
    vec![
        Record::new(
            "thm32",
            label.clone(),
            Status::from_bool(bad_sets.is_empty()),
        )
        .with_witness(witness(&bad_sets)),
        Record::new(
            "cor33",
            label.clone(),
            Status::from_bool(bad_pullbacks.is_empty()),
        )
        .with_witness(witness(&bad_pullbacks)),
        Record::new("thm32.cardinality", label, Status::NotApplicable)
            .with_witness(format!("isos={n} cardinality_preserving={preserving}")),
    ]
}

/// Relabels every group at random and asks the power-monoid search to find
/// the relabeling again.
fn relabel_controls(
    entries: &[CensusEntry],
    seed: u64,
    budget: Option<u64>,
) -> Result<Vec<Record>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Vec<usize>> = entries
        .iter()
        .map(|e| {
            let mut perm: Vec<usize> = e.monoid.elements().collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();
    entries
        .par_iter()
        .zip(perms.par_iter())
        .map(|(e, perm)| {
            let relabeled = e.monoid.relabel(perm);
            let (p, q) = (
                reduced_power_monoid(&e.monoid)?,
                reduced_power_monoid(&relabeled)?,
            );
            let label = format!("{} perm={}", e.name, join(perm));
            let report = find_power_isomorphism(&p, &q, budget);
            Ok(match report.outcome {
                SearchOutcome::Found(f) => {
                    let pb = extract_pullback(&p, &q, &f)?;
                    let r = pullback_report(&pb);
                    Record::new(
                        "thm32.control",
                        label,
                        Status::from_bool(r.full_hom && r.passed()),
                    )
                    .with_witness(format!(
                        "g={} nodes={}",
                        join(pb.map()),
                        report.nodes
                    ))
                }
                SearchOutcome::ProvenAbsent => Record::new("thm32.control", label, Status::Fail)
                    .with_witness("no power isomorphism found"),
                SearchOutcome::BudgetExceeded => {
                    budget_record("thm32.control", label, report.nodes)
                }
            })
        })
        .collect()
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn thm32(scope: &Scope) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("thm32");
    for entries in [
        monoid_census(scope.power_monoid_order())?,
        groups(scope.power_group_order)?,
    ] {
        let powers = power_monoids(&entries)?;
        let pairs = same_order_pairs(&entries);
        let recs: Vec<Vec<Record>> = pairs
            .par_iter()
            .map(|&pair| two_to_two_pair(&entries, &powers, pair, scope.budget))
            .collect();
        report.records.extend(recs.into_iter().flatten());
    }
    report.records.extend(relabel_controls(
        &groups(scope.power_group_order)?,
        scope.seed,
        scope.budget,
    )?);
    Ok(report)
}

/// Folds the per-isomorphism pullback reports of one pair into one record
/// per checker.
fn aggregate(label: &str, reports: &[PullbackReport]) -> Vec<Record> {
    let per_iso: Vec<Vec<Record>> = reports.iter().map(|r| r.records(label)).collect();
    let Some(first) = per_iso.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|c| {
            let column: Vec<&Record> = per_iso.iter().map(|recs| &recs[c]).collect();
            let status = if column.iter().any(|r| r.status == Status::Fail) {
                Status::Fail
            } else if column.iter().any(|r| r.status == Status::Pass) {
                Status::Pass
            } else {
                Status::NotApplicable
            };
            let finding = column.iter().any(|r| r.finding);
            let shown = column
                .iter()
                .find(|r| r.status == Status::Fail || r.finding)
                .unwrap_or(&column[0]);
            let rec = Record::new(shown.checker, label.to_string(), status).with_witness(format!(
                "isos={} {}",
                reports.len(),
                shown.witness
            ));
            if finding {
                rec.as_finding()
            } else {
                rec
            }
        })
        .collect()
}

fn pullback_pair(
    (h_name, h): (&str, &FiniteMonoid),
    (k_name, k): (&str, &FiniteMonoid),
    budget: Option<u64>,
) -> Result<Vec<Record>> {
    let label = format!("{h_name}:{k_name}");
    let (p, q) = (reduced_power_monoid(h)?, reduced_power_monoid(k)?);
    let config = SearchConfig::with_budget(budget).extended();
    let isos = match enumerate_isomorphisms_with(p.carrier(), q.carrier(), &config) {
        Ok(v) => v,
        Err(Error::SearchBudgetExceeded { nodes }) => {
            return Ok(vec![budget_record("cor52", label, nodes)])
        }
        Err(e) => return Err(e),
    };
    let base_iso = find_isomorphism(h, k)?.is_some();
    let power_iso = !isos.is_empty();
    let groups = h.is_group() && k.is_group();
    let agree = base_iso == power_iso;
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut pair =
        Record::new("cor52", label.clone(), Status::gated(groups, agree)).with_witness(format!(
            "base_iso={} power_iso={} isos={}",
            yes_no(base_iso),
            yes_no(power_iso),
            isos.len()
        ));
    if !groups && !agree {
        pair = pair.as_finding();
    }
    let mut out = vec![pair];
    let reports: Vec<PullbackReport> = isos
        .iter()
        .map(|f| extract_pullback(&p, &q, f).map(|pb| pullback_report(&pb)))
        .collect::<Result<_>>()?;
    out.extend(aggregate(&label, &reports));
    Ok(out)
}

pub fn section4(scope: &Scope) -> Result<SuiteReport> {
    if let Some((h, k)) = &scope.pair {
        let (hm, km) = (resolve_monoid(h)?, resolve_monoid(k)?);
        let records = pullback_pair((h, &hm), (k, &km), scope.budget)?;
        return Ok(SuiteReport {
            name: "section4".into(),
            records,
        });
    }
    let mut report = SuiteReport::new("section4");
    for entries in [
        groups(scope.power_group_order)?,
        monoid_census(scope.power_monoid_order())?,
    ] {
        let pairs = same_order_pairs(&entries);
        let recs: Vec<Vec<Record>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&entries[i], &entries[j]);
                pullback_pair((&a.name, &a.monoid), (&b.name, &b.monoid), scope.budget)
            })
            .collect::<Result<_>>()?;
        report.records.extend(recs.into_iter().flatten());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Scope {
        Scope::default().with_max_order(3)
    }

    #[test]
    fn every_suite_passes_at_order_three() {
        for name in SUITES {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.cases() > 0, "{name}");
            assert!(r.passed(), "{name}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("lemma99", &small()).is_err());
    }

    #[test]
    fn example_finding_is_reported() {
        let r = lemma22(&small()).unwrap();
        assert!(r
            .records
            .iter()
            .any(|x| x.checker == "lemma22.example" && x.status == Status::Pass));
        assert!(r
            .findings()
            .any(|x| x.checker == "lemma22.ne" && x.input.starts_with("cm2-2")));
    }

    #[test]
    fn pair_mode() {
        let scope = Scope {
            pair: Some(("z2".into(), "idem2".into())),
            ..Scope::default()
        };
        let r = section4(&scope).unwrap();
        assert!(r.passed());
        let cor = r.records.iter().find(|x| x.checker == "cor52").unwrap();
        assert!(cor.finding);
        assert_eq!(cor.witness, "base_iso=no power_iso=yes isos=1");
        let p = r.findings().find(|x| x.checker == "prop43").unwrap();
        assert!(
            p.witness.contains("x=1 k=2: g(x^k)=0 != g(x)^k=1"),
            "{}",
            p.witness
        );
    }

    #[test]
    fn lemma31_single_monoid() {
        let scope = Scope {
            monoid: Some("z2".into()),
            exponent: Some(3),
            ..Scope::default()
        };
        let r = lemma31(&scope).unwrap();
        let full = r
            .records
            .iter()
            .find(|x| x.input == "z2 S=0,1 n=3 Full")
            .unwrap();
        assert_eq!(full.witness, "count=3 bound=2 constructive=pass");
    }
}
