use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::power::{setwise_product, subset_power, with_identity};
use crate::subset::SubsetId;

use super::{require_subset_base, Record, Status};

/// Least `k >= 1` with `{1, z}^k = {1, z}^(k-1)`.
pub fn stabilization_index(m: &FiniteMonoid, z: usize) -> Result<usize> {
    require_subset_base(m)?;
    let x = with_identity(m, z);
    let mut prev = subset_power(m, x, 0);
    let mut k = 1;
    loop {
        let cur = setwise_product(m, prev, x);
        if cur == prev {
            return Ok(k);
        }
        prev = cur;
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationCheck {
    pub element: usize,
    pub stabilization: usize,
    pub order: usize,
}

impl StabilizationCheck {
    pub fn passed(&self) -> bool {
        self.stabilization == self.order
    }

    pub fn record(&self, label: &str) -> Record {
        Record::new(
            "lemma21",
            format!("{label} z={}", self.element),
            Status::from_bool(self.passed()),
        )
        .with_witness(format!("k={} ord={}", self.stabilization, self.order))
    }
}

/// The stabilization index of `{1, z}` equals the order of `z`.
pub fn check_order_stabilization(m: &FiniteMonoid, z: usize) -> Result<StabilizationCheck> {
    Ok(StabilizationCheck {
        element: z,
        stabilization: stabilization_index(m, z)?,
        order: m.element_order(z).value(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedPowerCheck {
    pub element: usize,
    pub shift: usize,
    pub r: usize,
    /// `{1, z^shift} {1, z}^r`.
    pub lhs: SubsetId,
    /// Equality with `{1, z}^(shift + r)` when `r >= shift - 1`.
    pub equality: Status,
    /// Whether `z` is cancellative and `shift <= ord(z)`.
    pub cancellative_hypothesis: bool,
    /// Inequality against every `{1, z}^s` with `shift - 1 <= s` when
    /// `r < shift - 1`.
    pub inequality: Status,
    /// Exponents `s` where the inequality conclusion is violated.
    pub equal_powers: Vec<usize>,
}

impl ShiftedPowerCheck {
    pub fn passed(&self) -> bool {
        self.equality != Status::Fail && self.inequality != Status::Fail
    }

    /// A violation of the inequality part outside its hypotheses.
    pub fn is_finding(&self) -> bool {
        !self.cancellative_hypothesis && !self.equal_powers.is_empty()
    }

    pub fn records(&self, label: &str) -> Vec<Record> {
        let input = format!("{label} z={} l={} r={}", self.element, self.shift, self.r);
        let mut out = Vec::new();
        if self.equality != Status::NotApplicable {
            out.push(
                Record::new("lemma22.eq", input.clone(), self.equality)
                    .with_witness(format!("lhs={}", self.lhs)),
            );
        }
        if self.r + 1 < self.shift {
            let mut rec = Record::new("lemma22.ne", input, self.inequality);
            let witness = if self.equal_powers.is_empty() {
                format!("lhs={}", self.lhs)
            } else {
                format!(
                    "lhs={} equals {{1,z}}^s for s={:?}",
                    self.lhs, self.equal_powers
                )
            };
            rec = rec.with_witness(witness);
            if self.is_finding() {
                rec = rec.as_finding();
            }
            out.push(rec);
        }
        out
    }
}

/// Checks both parts of the shifted-power identity for `{1, z^shift}`.
///
/// The inequality part is evaluated for every `s` in
/// `[shift - 1, max(shift - 1, ord(z) + 2)]`; past the stabilization index
/// the powers of `{1, z}` no longer change.
pub fn check_shifted_power(
    m: &FiniteMonoid,
    z: usize,
    shift: usize,
    r: usize,
) -> Result<ShiftedPowerCheck> {
    require_subset_base(m)?;
    if shift == 0 {
        return Err(Error::PreconditionViolated(
            "shift must be at least 1".into(),
        ));
    }
    let x = with_identity(m, z);
    let lhs = setwise_product(m, with_identity(m, m.pow(z, shift)), subset_power(m, x, r));
    let order = m.element_order(z).value();

    let equality = if r + 1 >= shift {
        Status::from_bool(lhs == subset_power(m, x, shift + r))
    } else {
        Status::NotApplicable
    };

    let hypothesis = m.is_cancellative_element(z) && shift <= order;
    let mut equal_powers = Vec::new();
    let inequality = if r + 1 < shift {
        let top = (shift - 1).max(order + 2);
        let mut power = subset_power(m, x, shift - 1);
        for s in shift - 1..=top {
            if power == lhs {
                equal_powers.push(s);
            }
            power = setwise_product(m, power, x);
        }
        Status::gated(hypothesis, equal_powers.is_empty())
    } else {
        Status::NotApplicable
    };

    Ok(ShiftedPowerCheck {
        element: z,
        shift,
        r,
        lhs,
        equality,
        cancellative_hypothesis: hypothesis,
        inequality,
        equal_powers,
    })
}
