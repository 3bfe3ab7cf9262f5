//! Exact series evaluations: `Σ f_k / λ^k` tails and `Σ f_n / s_n` verdicts.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{BudgetSeq, ClosedForm};
use crate::error::{Error, Result};
use crate::families::SphereGrowth;
use crate::rational::int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Exact(BigRational),
    Diverges,
    /// The budget has no recognized closed form.
    Unknown,
}

/// Eulerian numbers `A(j, 0..j)`.
fn eulerian_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 2..=j {
        let mut next = vec![BigInt::zero(); n];
        for m in 0..n {
            let keep = if m < row.len() {
                &row[m] * BigInt::from(m + 1)
            } else {
                BigInt::zero()
            };
            let shift = if m > 0 {
                &row[m - 1] * BigInt::from(n - m)
            } else {
                BigInt::zero()
            };
            next[m] = keep + shift;
        }
        row = next;
    }
    row
}

/// `Σ_{k>=1} k^j x^k` for `0 <= x < 1`, via `x A_j(x) / (1-x)^{j+1}`.
pub fn power_sum(j: u32, x: &BigRational) -> BigRational {
    assert!(
        !x.is_negative() && *x < BigRational::one(),
        "power_sum needs 0 <= x < 1"
    );
    let one = BigRational::one();
    if j == 0 {
        return x / (&one - x);
    }
    let mut numer = BigRational::zero();
    let mut xp = x.clone();
    for a in eulerian_row(j as usize) {
        numer += BigRational::from_integer(a) * &xp;
        xp *= x;
    }
    numer / (&one - x).pow(j as i32 + 1)
}

/// Exact `Σ_{k>=1} f_k / λ^k` for `λ > 1`.
pub fn geometric_tail(budget: &BudgetSeq, lambda: &BigRational) -> Result<Tail> {
    if *lambda <= BigRational::one() {
        return Err(Error::InvalidArgument("geometric tail needs lambda > 1".into()));
    }
    let x = lambda.recip();
    Ok(match budget.closed_form() {
        ClosedForm::Polynomial(coeffs) => Tail::Exact(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| BigRational::from_integer(c.clone()) * power_sum(j as u32, &x))
                .sum(),
        ),
        ClosedForm::Finite(values) => {
            let mut total = BigRational::zero();
            let mut xp = x.clone();
            for v in values {
                total += int(v) * &xp;
                xp *= &x;
            }
            Tail::Exact(total)
        }
        ClosedForm::Geometric { c, base } => {
            let y = int(base) * &x;
            if c == 0 {
                Tail::Exact(BigRational::zero())
            } else if y >= BigRational::one() {
                Tail::Diverges
            } else {
                Tail::Exact(int(c) * &y / (BigRational::one() - &y))
            }
        }
        ClosedForm::Unknown => Tail::Unknown,
    })
}

/// `c Σ_{k>=1} k^d / λ^k`
pub fn poly_tail(c: u64, d: u32, lambda: &BigRational) -> Result<BigRational> {
    match geometric_tail(&BudgetSeq::Poly { c, d }, lambda)? {
        Tail::Exact(t) => Ok(t),
        _ => unreachable!("polynomial tails are exact"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Diverges,
    Converges,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSums {
    /// `Σ_{n<=k} f_n / s_n` for `k = 1..N`, as exact rationals.
    pub prefix: Vec<String>,
    pub verdict: SeriesVerdict,
    pub reason: String,
}

/// Prefix sums of `f_n / s_n` (`sizes[n] = s_n`, index 0 ignored) and a
/// convergence verdict from the budget's closed form and the known sphere
/// growth. Anything unrecognized yields `Unknown`.
pub fn ratio_partial_sums(budget: &BudgetSeq, sizes: &[u64], growth: Option<SphereGrowth>) -> Result<PartialSums> {
    let mut prefix = Vec::new();
    let mut acc = BigRational::zero();
    for (n, &s) in sizes.iter().enumerate().skip(1) {
        if s == 0 {
            return Err(Error::PreconditionViolated {
                index: n,
                reason: "sphere is empty".into(),
            });
        }
        acc += BigRational::new(budget.value(n as u64).into(), s.into());
        prefix.push(crate::rational::to_text(&acc));
    }
    let (verdict, reason) = series_verdict(budget, growth);
    Ok(PartialSums {
        prefix,
        verdict,
        reason,
    })
}

pub fn series_verdict(budget: &BudgetSeq, growth: Option<SphereGrowth>) -> (SeriesVerdict, String) {
    let Some(growth) = growth else {
        return (
            SeriesVerdict::Unknown,
            "sphere growth of the family is not recognized".into(),
        );
    };
    let form = budget.closed_form();
    let poly_degree = match &form {
        ClosedForm::Finite(_) => {
            return (
                SeriesVerdict::Converges,
                "budget has finitely many nonzero terms".into(),
            );
        }
        ClosedForm::Polynomial(coeffs) => match coeffs.iter().rposition(|c| !c.is_zero()) {
            None => return (SeriesVerdict::Converges, "budget is identically zero".into()),
            Some(q) => Some(q as u32),
        },
        ClosedForm::Geometric { c: 0, .. } => {
            return (SeriesVerdict::Converges, "budget is identically zero".into());
        }
        ClosedForm::Geometric { base, .. } if *base <= 1 => Some(0),
        _ => None,
    };
    match (poly_degree, growth) {
        (Some(q), SphereGrowth::Polynomial { degree: p }) => {
            if p >= q + 2 {
                (SeriesVerdict::Converges, format!("f_n/s_n ~ n^-{}, summable", p - q))
            } else {
                (
                    SeriesVerdict::Diverges,
                    format!("f_n/s_n is at least of order n^-{}", p.saturating_sub(q)),
                )
            }
        }
        (Some(q), SphereGrowth::ExponentialAtLeast { base }) if base >= 2 => (
            SeriesVerdict::Converges,
            format!("polynomial of degree {q} over spheres of size at least {base}^n"),
        ),
        (None, SphereGrowth::Polynomial { degree }) => match form {
            ClosedForm::Geometric { .. } => (
                SeriesVerdict::Diverges,
                format!("exponential budget over polynomial spheres of degree {degree}"),
            ),
            _ => (SeriesVerdict::Unknown, "budget has no recognized closed form".into()),
        },
        _ => (
            SeriesVerdict::Unknown,
            "budget and sphere growth are not comparable".into(),
        ),
    }
}

/// Checks `Σ_{i<=k} p_i/s_i <= Σ_{i<=k} f_i/s_i` for every prefix, given that
/// `s` is positive and non-decreasing and `Σ_{i<=k} p_i <= Σ_{i<=k} f_i`.
/// Returns the first prefix where the conclusion fails, if any.
pub fn rearrange_check(f: &[u64], p: &[u64], s: &[u64]) -> Result<Option<usize>> {
    let n = f.len();
    if p.len() != n || s.len() != n {
        return Err(Error::InvalidArgument("sequences must have equal length".into()));
    }
    let (mut sf, mut sp) = (0u128, 0u128);
    for k in 0..n {
        if s[k] == 0 {
            return Err(Error::PreconditionViolated {
                index: k + 1,
                reason: "s must be positive".into(),
            });
        }
        if k > 0 && s[k] < s[k - 1] {
            return Err(Error::PreconditionViolated {
                index: k + 1,
                reason: "s must be non-decreasing".into(),
            });
        }
        sf += f[k] as u128;
        sp += p[k] as u128;
        if sp > sf {
            return Err(Error::PreconditionViolated {
                index: k + 1,
                reason: "prefix sums of p exceed those of f".into(),
            });
        }
    }
    let (mut lhs, mut rhs) = (BigRational::zero(), BigRational::zero());
    for k in 0..n {
        lhs += BigRational::new(p[k].into(), s[k].into());
        rhs += BigRational::new(f[k].into(), s[k].into());
        if lhs > rhs {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}
