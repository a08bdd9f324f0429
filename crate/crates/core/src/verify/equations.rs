use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::power::{setwise_product, subset_power, with_identity};
use crate::subset::{submasks, SubsetId};

use super::{require_subset_base, Record, Status};

/// Where solutions `A` of `AS = S^n` are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Universe {
    /// All non-empty subsets.
    Full,
    /// Subsets containing the identity.
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationCount {
    pub set: SubsetId,
    pub exponent: usize,
    pub universe: Universe,
    /// Every solution, in increasing bitmask order.
    pub solutions: Vec<SubsetId>,
    /// `2^(|S| - 1)`.
    pub bound: usize,
    /// `count >= bound`, asserted for the full universe and `n >= 3`.
    pub bound_status: Status,
    /// Every `(S^(n-1) \ T) S = S^n` for `T` ranging over subsets of
    /// `S \ {1}`, and the `2^(|S| - 1)` sets are pairwise distinct;
    /// asserted for `n >= 3`.
    pub constructive_status: Status,
}

impl EquationCount {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn passed(&self) -> bool {
        self.bound_status != Status::Fail && self.constructive_status != Status::Fail
    }

    pub fn record(&self, label: &str) -> Record {
        let status = if self.bound_status == Status::Fail
            || self.constructive_status == Status::Fail
        {
            Status::Fail
        } else if self.bound_status == Status::Pass || self.constructive_status == Status::Pass {
            Status::Pass
        } else {
            Status::NotApplicable
        };
        Record::new(
            "lemma31",
            format!(
                "{label} S={} n={} {:?}",
                self.set, self.exponent, self.universe
            ),
            status,
        )
        .with_witness(format!(
            "count={} bound={} constructive={}",
            self.count(),
            self.bound,
            self.constructive_status
        ))
    }
}

/// Exhaustively counts the `A` in `universe` with `A S = S^n`.
///
/// Since `1` lies in `S`, every solution satisfies `A = A{1} ⊆ AS = S^n`,
/// so the scan runs over subsets of `S^n` only.
pub fn count_equation_solutions(
    m: &FiniteMonoid,
    s: SubsetId,
    n: usize,
    universe: Universe,
) -> Result<EquationCount> {
    require_subset_base(m)?;
    if !s.contains(m.identity()) || s.base_size() != m.size() {
        return Err(Error::PreconditionViolated(format!(
            "S = {{{s}}} must be a subset of the base containing the identity"
        )));
    }
    let target = subset_power(m, s, n);
    let e = 1u64 << m.identity();
    let solutions: Vec<SubsetId> = submasks(target.bits())
        .filter(|bits| universe == Universe::Full || bits & e != 0)
        .map(|bits| SubsetId::from_bits(m.size(), bits))
        .filter(|&a| setwise_product(m, a, s) == target)
        .collect();

    let bound = 1usize << (s.len() - 1);
    let bound_status = Status::gated(
        n >= 3 && universe == Universe::Full,
        solutions.len() >= bound,
    );

    let constructive_ok = if n >= 1 {
        let prev = subset_power(m, s, n - 1);
        let identity = SubsetId::singleton(m.size(), m.identity());
        let rest = s.difference(identity);
        let mut family: Vec<SubsetId> = std::iter::once(0u64)
            .chain(
                rest.map(|r| submasks(r.bits()).collect::<Vec<_>>())
                    .unwrap_or_default(),
            )
            .map(|t| {
                let q = prev.bits() & !t;
                SubsetId::from_bits(m.size(), q)
            })
            .collect();
        let valid = family.iter().all(|&q| setwise_product(m, q, s) == target);
        family.sort();
        family.dedup();
        valid && family.len() == bound
    } else {
        false
    };
    let constructive_status = Status::gated(n >= 3, constructive_ok);

    Ok(EquationCount {
        set: s,
        exponent: n,
        universe,
        solutions,
        bound,
        bound_status,
        constructive_status,
    })
}

/// Solutions of `A X = X^3` over the reduced universe for `X = {1, x}`,
/// compared against the counts forced by the order of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseCount {
    pub element: usize,
    pub order: usize,
    pub solutions: Vec<SubsetId>,
    pub status: Status,
    /// The count is off while `x` is not cancellative.
    pub finding: bool,
}

impl CaseCount {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn record(&self, label: &str) -> Record {
        let sols: Vec<String> = self.solutions.iter().map(|s| format!("{{{s}}}")).collect();
        let rec = Record::new(
            "thm32.cases",
            format!("{label} x={} ord={}", self.element, self.order),
            self.status,
        )
        .with_witness(format!("d={} solutions={}", self.count(), sols.join(" ")));
        if self.finding {
            rec.as_finding()
        } else {
            rec
        }
    }
}

/// Order 2 gives 2 solutions, order 3 gives 3, order 4 at most 7, and order
/// at least 5 exactly `{1, x^2}` and `X^2`. Asserted for cancellative `x`.
pub fn two_element_case_count(m: &FiniteMonoid, x: usize) -> Result<CaseCount> {
    if x == m.identity() {
        return Err(Error::PreconditionViolated(
            "x must not be the identity".into(),
        ));
    }
    let set = with_identity(m, x);
    let counted = count_equation_solutions(m, set, 3, Universe::Reduced)?;
    let order = m.element_order(x).value();
    let d = counted.count();
    let ok = match order {
        2 => d == 2,
        3 => d == 3,
        4 => d <= 7,
        _ => {
            let mut expected = vec![with_identity(m, m.pow(x, 2)), subset_power(m, set, 2)];
            expected.sort();
            counted.solutions == expected
        }
    };
    let hypothesis = m.is_cancellative_element(x);
    Ok(CaseCount {
        element: x,
        order,
        solutions: counted.solutions,
        status: Status::gated(hypothesis, ok),
        finding: !hypothesis && !ok,
    })
}
