//! Pullbacks of isomorphisms between reduced power monoids.
//!
//! For an isomorphism `f` of reduced power monoids the pullback `g` is the
//! bijection of bases with `f({1, x}) = {1, g(x)}`. The report checks the
//! homomorphism-like properties of `g`, each under its own hypotheses.

use crate::error::{Error, Result};
use crate::iso::IsoWitness;
use crate::power::{PowerKind, PowerMonoid};
use crate::subset::SubsetId;

use super::{Record, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoToTwoCheck {
    /// Base elements `x` whose `{1, x}` maps to a set of another size.
    pub violations: Vec<(usize, SubsetId)>,
}

impl TwoToTwoCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record(&self, label: &str) -> Record {
        let witness = self
            .violations
            .iter()
            .map(|(x, img)| format!("{{1,{x}}}->{{{img}}}"))
            .collect::<Vec<_>>()
            .join(" ");
        Record::new("thm32", label.to_string(), Status::from_bool(self.passed()))
            .with_witness(witness)
    }
}

fn require_reduced(source: &PowerMonoid, target: &PowerMonoid, f: &IsoWitness) -> Result<()> {
    if source.kind() != PowerKind::Reduced || target.kind() != PowerKind::Reduced {
        return Err(Error::PreconditionViolated(
            "pullbacks are defined between reduced power monoids".into(),
        ));
    }
    if !f.is_valid_for(source.carrier(), target.carrier()) {
        return Err(Error::InvalidWitness(
            "witness is not an isomorphism of the given carriers".into(),
        ));
    }
    Ok(())
}

/// Every 2-element `{1, x}` maps to a 2-element set.
pub fn check_two_to_two(
    source: &PowerMonoid,
    target: &PowerMonoid,
    f: &IsoWitness,
) -> TwoToTwoCheck {
    let base = source.base();
    let violations = base
        .elements()
        .filter(|&x| x != base.identity())
        .filter_map(|x| {
            let img = target.subset_of(f.apply(source.pair_index(x)));
            (img.len() != 2).then_some((x, img))
        })
        .collect();
    TwoToTwoCheck { violations }
}

/// The pullback bijection together with the isomorphism it came from.
#[derive(Debug, Clone)]
pub struct Pullback<'a> {
    pub source: &'a PowerMonoid,
    pub target: &'a PowerMonoid,
    pub witness: IsoWitness,
    map: Vec<usize>,
}

impl Pullback<'_> {
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

pub fn extract_pullback<'a>(
    source: &'a PowerMonoid,
    target: &'a PowerMonoid,
    f: &IsoWitness,
) -> Result<Pullback<'a>> {
    require_reduced(source, target, f)?;
    let (h, k) = (source.base(), target.base());
    let mut map = vec![0; h.size()];
    for x in h.elements() {
        let img = target.subset_of(f.apply(source.pair_index(x)));
        map[x] = if x == h.identity() {
            if img.len() != 1 {
                return Err(Error::TwoToTwoViolation {
                    element: x,
                    size: img.len(),
                });
            }
            k.identity()
        } else {
            if img.len() != 2 || !img.contains(k.identity()) {
                return Err(Error::TwoToTwoViolation {
                    element: x,
                    size: img.len(),
                });
            }
            img.iter().find(|&y| y != k.identity()).unwrap()
        };
    }
    let mut hit = vec![false; k.size()];
    for &y in &map {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::InvalidWitness(format!("pullback hits {y} twice")));
        }
    }
    Ok(Pullback {
        source,
        target,
        witness: f.clone(),
        map,
    })
}

/// Which hypotheses the two bases satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypotheses {
    pub source_cancellative: bool,
    pub target_cancellative: bool,
    pub source_group: bool,
    pub target_group: bool,
}

impl Hypotheses {
    pub fn both_cancellative(&self) -> bool {
        self.source_cancellative && self.target_cancellative
    }

    pub fn both_groups(&self) -> bool {
        self.source_group && self.target_group
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub inputs: String,
    pub observed: String,
    pub expected: String,
    /// The hypotheses of `check` hold, so this is a genuine failure.
    pub gated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    pub hypotheses: Hypotheses,
    pub pullback: Vec<usize>,
    /// `ord(x) = ord(g(x))` for all `x`; no hypotheses.
    pub order_preserving: bool,
    /// The pullback of `f^-1` is `g^-1`; no hypotheses.
    pub inverse_consistent: bool,
    /// `g(x^k) = g(x)^l` for some `l <= k`; needs a cancellative target.
    pub bounded_power: bool,
    /// `g(x^k) = g(x)^k`; needs both cancellative.
    pub power_compatible: bool,
    /// `g(xy) = g(x)g(y)` or `x^2 y^2 = 1`; needs both cancellative.
    pub dichotomy: bool,
    /// `g(xy) = g(x)g(y)` whenever `x^2 = 1` or `y^2 = 1`; needs both
    /// cancellative.
    pub involution_hom: bool,
    /// `g(xy) = g(x)g(y)` on all pairs of torsion elements (every element of
    /// a finite monoid); needs both cancellative.
    pub torsion_hom: bool,
    /// `g` is a monoid isomorphism; asserted when both bases are groups.
    pub full_hom: bool,
    pub counterexamples: Vec<Violation>,
}

impl PullbackReport {
    pub fn gated_failures(&self) -> impl Iterator<Item = &Violation> {
        self.counterexamples.iter().filter(|v| v.gated)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Violation> {
        self.counterexamples.iter().filter(|v| !v.gated)
    }

    pub fn passed(&self) -> bool {
        self.gated_failures().next().is_none()
    }

    pub fn records(&self, label: &str) -> Vec<Record> {
        let h = &self.hypotheses;
        let g: Vec<String> = self.pullback.iter().map(|v| v.to_string()).collect();
        let flags = [
            ("prop41", true, self.order_preserving),
            ("cor33.inverse", true, self.inverse_consistent),
            ("lemma42", h.target_cancellative, self.bounded_power),
            ("prop43", h.both_cancellative(), self.power_compatible),
            ("lemma45", h.both_cancellative(), self.dichotomy),
            ("lemma46", h.both_cancellative(), self.involution_hom),
            ("prop47", h.both_cancellative(), self.torsion_hom),
            ("thm51", h.both_groups(), self.full_hom),
        ];
        flags
            .into_iter()
            .map(|(name, hyp, ok)| {
                let first = self.counterexamples.iter().find(|v| v.check == name);
                let witness = match first {
                    Some(v) => format!(
                        "g={} {}: {} != {}",
                        g.join(","),
                        v.inputs,
                        v.observed,
                        v.expected
                    ),
                    None => format!("g={}", g.join(",")),
                };
                let rec = Record::new(name, label.to_string(), Status::gated(hyp, ok))
                    .with_witness(witness);
                if !hyp && !ok {
                    rec.as_finding()
                } else {
                    rec
                }
            })
            .collect()
    }
}

/// Checks every pullback property; exponents range over `[0, 2 ord(x)]`.
pub fn pullback_report(pb: &Pullback<'_>) -> PullbackReport {
    let (h, k) = (pb.source.base(), pb.target.base());
    let g = pb.map();
    let hyp = Hypotheses {
        source_cancellative: h.is_cancellative(),
        target_cancellative: k.is_cancellative(),
        source_group: h.is_group(),
        target_group: k.is_group(),
    };
    let mut out = Vec::new();
    let mut push =
        |check: &'static str, gated: bool, inputs: String, observed: String, expected: String| {
            out.push(Violation {
                check,
                inputs,
                observed,
                expected,
                gated,
            })
        };

    let mut order_preserving = true;
    for x in h.elements() {
        let (a, b) = (h.element_order(x).value(), k.element_order(g[x]).value());
        if a != b {
            order_preserving = false;
            push(
                "prop41",
                true,
                format!("x={x}"),
                format!("ord(g(x))={b}"),
                format!("ord(x)={a}"),
            );
        }
    }

    let inverse_consistent = match extract_pullback(pb.target, pb.source, &pb.witness.inverse()) {
        Ok(inv) => h.elements().all(|x| inv.apply(g[x]) == x),
        Err(_) => false,
    };
    if !inverse_consistent {
        push(
            "cor33.inverse",
            true,
            "f^-1".into(),
            "pullback of f^-1".into(),
            "g^-1".into(),
        );
    }

    let mut bounded_power = true;
    let mut power_compatible = true;
    for x in h.elements() {
        let y = g[x];
        let ord = h.element_order(x).value();
        for kk in 0..=2 * ord {
            let lhs = g[h.pow(x, kk)];
            if !(0..=kk).any(|l| k.pow(y, l) == lhs) {
                bounded_power = false;
                push(
                    "lemma42",
                    hyp.target_cancellative,
                    format!("x={x} k={kk}"),
                    format!("g(x^k)={lhs}"),
                    "g(x)^l for some l<=k".into(),
                );
            }
            let rhs = k.pow(y, kk);
            if lhs != rhs {
                power_compatible = false;
                push(
                    "prop43",
                    hyp.both_cancellative(),
                    format!("x={x} k={kk}"),
                    format!("g(x^k)={lhs}"),
                    format!("g(x)^k={rhs}"),
                );
            }
        }
    }

    let mut dichotomy = true;
    let mut involution_hom = true;
    let mut torsion_hom = true;
    for x in h.elements() {
        for y in h.elements() {
            let lhs = g[h.mul(x, y)];
            let rhs = k.mul(g[x], g[y]);
            if lhs == rhs {
                continue;
            }
            let inputs = format!("x={x} y={y}");
            let (observed, expected) = (format!("g(xy)={lhs}"), format!("g(x)g(y)={rhs}"));
            torsion_hom = false;
            push(
                "prop47",
                hyp.both_cancellative(),
                inputs.clone(),
                observed.clone(),
                expected.clone(),
            );
            let x2 = h.mul(x, x);
            let y2 = h.mul(y, y);
            if h.mul(x2, y2) != h.identity() {
                dichotomy = false;
                push(
                    "lemma45",
                    hyp.both_cancellative(),
                    inputs.clone(),
                    observed.clone(),
                    "x^2y^2=1 or hom".into(),
                );
            }
            if x2 == h.identity() || y2 == h.identity() {
                involution_hom = false;
                push(
                    "lemma46",
                    hyp.both_cancellative(),
                    inputs.clone(),
                    observed.clone(),
                    expected.clone(),
                );
            }
            push("thm51", hyp.both_groups(), inputs, observed, expected);
        }
    }
    let full_hom = torsion_hom && g[h.identity()] == k.identity();

    PullbackReport {
        hypotheses: hyp,
        pullback: g.to_vec(),
        order_preserving,
        inverse_consistent,
        bounded_power,
        power_compatible,
        dichotomy,
        involution_hom,
        torsion_hom,
        full_hom,
        counterexamples: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{enumerate_isomorphisms, IsoWitness};
    use crate::monoid::{cyclic_monoid, idempotent_monoid};
    use crate::power::{full_power_semigroup, reduced_power_monoid};

    #[test]
    fn identity_automorphism() {
        let m = cyclic_monoid(0, 4).unwrap();
        let p = reduced_power_monoid(&m).unwrap();
        let id = IsoWitness::identity(p.carrier().size());
        assert!(check_two_to_two(&p, &p, &id).passed());
        let pb = extract_pullback(&p, &p, &id).unwrap();
        assert_eq!(pb.map(), &[0, 1, 2, 3]);
        let r = pullback_report(&pb);
        assert!(r.order_preserving && r.power_compatible && r.torsion_hom && r.full_hom);
        assert!(r.passed());
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn z2_idempotent_counterexample() {
        let (h, k) = (cyclic_monoid(0, 2).unwrap(), idempotent_monoid());
        let (ph, pk) = (
            reduced_power_monoid(&h).unwrap(),
            reduced_power_monoid(&k).unwrap(),
        );
        // both carriers are {{1}, base} with the same table
        let f = IsoWitness::certify(ph.carrier(), pk.carrier(), vec![0, 1]).unwrap();
        assert!(check_two_to_two(&ph, &pk, &f).passed());
        let pb = extract_pullback(&ph, &pk, &f).unwrap();
        assert_eq!(pb.map(), &[0, 1]);
        let r = pullback_report(&pb);
        assert!(r.order_preserving);
        assert!(!r.power_compatible);
        assert!(r.passed(), "violations are findings outside the hypotheses");
        let v = r.findings().find(|v| v.check == "prop43").unwrap();
        assert_eq!(v.inputs, "x=1 k=2");
        assert_eq!(v.observed, "g(x^k)=0");
        assert_eq!(v.expected, "g(x)^k=1");
        assert!(!r.full_hom);
        let recs = r.records("z2:idem2");
        assert!(recs.iter().any(|r| r.checker == "prop43" && r.finding));
    }

    #[test]
    fn z3_automorphisms_fix_identity() {
        let z3 = cyclic_monoid(0, 3).unwrap();
        let p = reduced_power_monoid(&z3).unwrap();
        let autos = enumerate_isomorphisms(p.carrier(), p.carrier()).unwrap();
        assert!(!autos.is_empty());
        for f in autos {
            assert!(check_two_to_two(&p, &p, &f).passed());
            let pb = extract_pullback(&p, &p, &f).unwrap();
            assert_eq!(pb.apply(0), 0);
            let mut img = pb.map().to_vec();
            img.sort_unstable();
            assert_eq!(img, vec![0, 1, 2]);
        }
    }

    #[test]
    fn rejects_full_power_semigroups_and_bad_witnesses() {
        let z2 = cyclic_monoid(0, 2).unwrap();
        let full = full_power_semigroup(&z2).unwrap();
        let id = IsoWitness::identity(full.carrier().size());
        assert!(matches!(
            extract_pullback(&full, &full, &id),
            Err(Error::PreconditionViolated(_))
        ));
        let p = reduced_power_monoid(&cyclic_monoid(0, 3).unwrap()).unwrap();
        let q = reduced_power_monoid(&cyclic_monoid(1, 2).unwrap()).unwrap();
        let id = IsoWitness::identity(4);
        assert!(matches!(
            extract_pullback(&p, &q, &id),
            Err(Error::InvalidWitness(_))
        ));
    }
}
