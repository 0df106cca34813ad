//! Executable versions of the counting bounds on sets of a fixed rank and
//! of the difference-algebra axioms.

use num_bigint::BigUint;

use super::level::{count_rank_exact, MAX_ENUMERATED_LEVEL};
use super::HfSet;

/// One checked instance of a bound.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: &'static str,
    pub n: u32,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn violations(&self) -> Vec<&BoundCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

// Above this many bits a power of two is compared by exponent only.
const EXACT_POW_LIMIT: u64 = 1 << 24;

fn pow2(exp: u64) -> BigUint {
    BigUint::from(1u8) << exp
}

/// `2^(2^n) >= 3 * 2^n - 2n`.
pub fn double_exponential_bound(n: u32) -> (bool, String) {
    let rhs = BigUint::from(3u8) * pow2(n as u64) - BigUint::from(2 * n as u64);
    if (1u64 << n.min(63)) <= EXACT_POW_LIMIT && n < 63 {
        let lhs = pow2(1u64 << n);
        let holds = lhs >= rhs;
        let detail = if n <= 4 {
            format!("2^(2^{n}) = {lhs} >= {rhs}")
        } else {
            format!("2^(2^{n}) has {} bits, rhs = {rhs}", lhs.bits())
        };
        (holds, detail)
    } else {
        // 2^(2^n) has 2^n + 1 bits, far more than the right-hand side.
        let holds = n >= 63 || (1u64 << n) + 1 > rhs.bits();
        (
            holds,
            format!("compared by bit length ({} bits on the right)", rhs.bits()),
        )
    }
}

/// `|V_n|` for `n <= 6`; `None` beyond (the value has 2^65536 bits).
pub fn level_size(n: u32) -> Option<BigUint> {
    let mut size = BigUint::from(0u8);
    for _ in 0..n {
        let exp: u64 = size.clone().try_into().ok()?;
        size = pow2(exp);
    }
    Some(size)
}

/// `|V#_n| >= 2^(n-1)` through `|V#_n| = 2^|V_n| - |V_n|`.
///
/// Exact when `2^|V_n|` fits in memory, otherwise via
/// `2^K - K >= 2^(K-1)` (valid for `K >= 2`) and `K - 1 >= n - 1`.
pub fn rank_count_by_recurrence(n: u32) -> (bool, String) {
    let Some(k) = level_size(n) else {
        return (false, format!("|V_{n}| is not representable"));
    };
    let bound = pow2(n as u64 - 1);
    match u64::try_from(&k) {
        Ok(k64) if k64 <= EXACT_POW_LIMIT => {
            let count = pow2(k64) - &k;
            let holds = count >= bound;
            let detail = if count.bits() <= 64 {
                format!("|V#_{n}| = 2^{k} - {k} = {count} >= {bound}")
            } else {
                format!("|V#_{n}| = 2^{k} - {k} ({} bits) >= {bound}", count.bits())
            };
            (holds, detail)
        }
        _ => {
            let two = BigUint::from(2u8);
            let holds = k >= two && k > BigUint::from(n - 1);
            (
                holds,
                format!(
                    "|V#_{n}| = 2^K - K >= 2^(K-1) >= 2^{} with K = |V_{n}| of {} bits",
                    n - 1,
                    k.bits()
                ),
            )
        }
    }
}

/// Run the counting bounds: the double-exponential inequality for `n = 1..=n_max`,
/// the rank-count bound by enumeration for `n <= 4` and by the recurrence
/// for `n <= 6`.
pub fn bound_checks(n_max: u32) -> BoundReport {
    let mut report = BoundReport::default();
    for n in 1..=n_max {
        let (holds, detail) = double_exponential_bound(n);
        report.checks.push(BoundCheck {
            name: "2^(2^n) >= 3*2^n - 2n",
            n,
            holds,
            detail,
        });
    }
    for n in 1..=n_max.min(MAX_ENUMERATED_LEVEL) {
        let bound = 1u64 << (n - 1);
        let (holds, detail) = match count_rank_exact(n) {
            Ok(count) => (
                count >= bound,
                format!("|V#_{n}| = {count} >= {bound} (enumerated)"),
            ),
            Err(e) => (false, e.to_string()),
        };
        report.checks.push(BoundCheck {
            name: "|V#_n| >= 2^(n-1) by enumeration",
            n,
            holds,
            detail,
        });
    }
    for n in 1..=n_max.min(6) {
        let (holds, detail) = rank_count_by_recurrence(n);
        report.checks.push(BoundCheck {
            name: "|V#_n| >= 2^(n-1) by recurrence",
            n,
            holds,
            detail,
        });
    }
    report
}

pub type TriplePredicate = fn(&HfSet, &HfSet, &HfSet) -> bool;

/// Axioms of difference algebras, as predicates on a triple.
pub const AXIOMS: [(&str, TriplePredicate); 4] = [
    ("x \\ (y \\ y) = x", |x, y, _| x.diff(&y.diff(y)) == *x),
    ("(x \\ y) \\ z = (x \\ z) \\ y", |x, y, z| {
        x.diff(y).diff(z) == x.diff(z).diff(y)
    }),
    ("x \\ (x \\ y) = y \\ (y \\ x)", |x, y, _| {
        x.diff(&x.diff(y)) == y.diff(&y.diff(x))
    }),
    ("(x \\ y) \\ y = x \\ y", |x, y, _| {
        x.diff(y).diff(y) == x.diff(y)
    }),
];

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    /// 1-based axiom number.
    pub axiom: usize,
    pub triple: (HfSet, HfSet, HfSet),
}

#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<AxiomViolation>,
}

pub fn check_axioms<'a>(
    sample: impl IntoIterator<Item = &'a (HfSet, HfSet, HfSet)>,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    for t in sample {
        report.checked += 1;
        for (i, (_, holds)) in AXIOMS.iter().enumerate() {
            if !holds(&t.0, &t.1, &t.2) {
                report.violations.push(AxiomViolation {
                    axiom: i + 1,
                    triple: t.clone(),
                });
            }
        }
    }
    report
}
