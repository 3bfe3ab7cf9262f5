//! Budget sequences `f_1, f_2, ...` of protections per turn.
//!
//! Text grammar:
//!
//! ```text
//! 3                 constant
//! poly:c,d          c * n^d
//! list:a,b,c        explicit prefix, 0 afterwards
//! exp:c,b           c * b^n
//! group:r(<inner>)  g_n = f_{r(n-1)+1} + ... + f_{rn}
//! scale:k(<inner>)  k * f_n
//! ```

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BudgetSeq {
    Constant(u64),
    Poly { c: u64, d: u32 },
    List(Vec<u64>),
    Exponential { c: u64, base: u64 },
    Group { r: u64, inner: Box<BudgetSeq> },
    Scale { factor: u64, inner: Box<BudgetSeq> },
}

/// Exact closed form of a budget, when one is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    /// `f_n = sum_j coeffs[j] n^j` for every `n >= 1`.
    Polynomial(Vec<BigInt>),
    /// Finitely many nonzero terms.
    Finite(Vec<u64>),
    /// `f_n = c * base^n`.
    Geometric {
        c: u64,
        base: u64,
    },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "degree")]
pub enum AsymptoticClass {
    /// `O(n^d)` and not `O(n^{d-1})`; degree 0 also covers eventually-zero budgets.
    Poly(u32),
    Exponential,
    Other,
}

impl fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticClass::Poly(d) => write!(f, "O(n^{d})"),
            AsymptoticClass::Exponential => f.write_str("exponential"),
            AsymptoticClass::Other => f.write_str("other"),
        }
    }
}

impl BudgetSeq {
    pub fn constant(c: u64) -> Self {
        BudgetSeq::Constant(c)
    }

    /// `g_n = f_{r(n-1)+1} + ... + f_{rn}`
    pub fn grouped(self, r: u64) -> Self {
        if r == 1 {
            return self;
        }
        BudgetSeq::Group {
            r,
            inner: Box::new(self),
        }
    }

    pub fn scaled(self, factor: u64) -> Self {
        if factor == 1 {
            return self;
        }
        BudgetSeq::Scale {
            factor,
            inner: Box::new(self),
        }
    }

    /// `f_n` for `n >= 1` (saturating). `f_0` is defined as 0.
    pub fn value(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        match self {
            BudgetSeq::Constant(c) => *c,
            BudgetSeq::Poly { c, d } => c.saturating_mul(n.saturating_pow(*d)),
            BudgetSeq::List(v) => v.get(n as usize - 1).copied().unwrap_or(0),
            BudgetSeq::Exponential { c, base } => c.saturating_mul(base.saturating_pow(n.min(u32::MAX as u64) as u32)),
            BudgetSeq::Group { r, inner } => {
                let start = r.saturating_mul(n - 1);
                (1..=*r).fold(0u64, |acc, i| acc.saturating_add(inner.value(start + i)))
            }
            BudgetSeq::Scale { factor, inner } => factor.saturating_mul(inner.value(n)),
        }
    }

    /// `f_1 + ... + f_n`
    pub fn prefix_sum(&self, n: u64) -> u64 {
        (1..=n).fold(0u64, |acc, k| acc.saturating_add(self.value(k)))
    }

    /// First index `n >= 1` with `f_{n+1} < f_n`, if any.
    pub fn nondecreasing_violation(&self) -> Option<u64> {
        match self {
            BudgetSeq::Constant(_) | BudgetSeq::Poly { .. } => None,
            BudgetSeq::Exponential { c, base } => (*c > 0 && *base == 0).then_some(1),
            BudgetSeq::List(v) => {
                for (i, w) in v.windows(2).enumerate() {
                    if w[1] < w[0] {
                        return Some(i as u64 + 1);
                    }
                }
                match v.last() {
                    Some(&last) if last > 0 => Some(v.len() as u64),
                    _ => None,
                }
            }
            BudgetSeq::Group { inner, .. } | BudgetSeq::Scale { inner, .. } => inner.nondecreasing_violation(),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.nondecreasing_violation().is_none()
    }

    pub fn closed_form(&self) -> ClosedForm {
        match self {
            BudgetSeq::Constant(c) => ClosedForm::Polynomial(vec![BigInt::from(*c)]),
            BudgetSeq::Poly { c, d } => {
                let mut coeffs = vec![BigInt::zero(); *d as usize + 1];
                coeffs[*d as usize] = BigInt::from(*c);
                ClosedForm::Polynomial(coeffs)
            }
            BudgetSeq::List(v) => ClosedForm::Finite(v.clone()),
            BudgetSeq::Exponential { c, base } => ClosedForm::Geometric { c: *c, base: *base },
            BudgetSeq::Scale { factor, inner } => match inner.closed_form() {
                ClosedForm::Polynomial(p) => {
                    ClosedForm::Polynomial(p.into_iter().map(|x| x * BigInt::from(*factor)).collect())
                }
                ClosedForm::Finite(v) => ClosedForm::Finite(v.iter().map(|x| x.saturating_mul(*factor)).collect()),
                ClosedForm::Geometric { c, base } => ClosedForm::Geometric {
                    c: c.saturating_mul(*factor),
                    base,
                },
                ClosedForm::Unknown => ClosedForm::Unknown,
            },
            BudgetSeq::Group { r, inner } => match inner.closed_form() {
                ClosedForm::Polynomial(p) => ClosedForm::Polynomial(group_polynomial(&p, *r)),
                ClosedForm::Finite(v) => {
                    let terms = (v.len() as u64).div_ceil(*r);
                    ClosedForm::Finite((1..=terms).map(|n| self.value(n)).collect())
                }
                _ => ClosedForm::Unknown,
            },
        }
    }

    pub fn asymptotic_class(&self) -> AsymptoticClass {
        match self.closed_form() {
            ClosedForm::Polynomial(p) => {
                let degree = p.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
                AsymptoticClass::Poly(degree as u32)
            }
            ClosedForm::Finite(_) => AsymptoticClass::Poly(0),
            ClosedForm::Geometric { c, base } => {
                if c == 0 || base <= 1 {
                    AsymptoticClass::Poly(0)
                } else {
                    AsymptoticClass::Exponential
                }
            }
            ClosedForm::Unknown => AsymptoticClass::Other,
        }
    }
}

/// Coefficients of `sum_{i=1..r} p(r(n-1)+i)` as a polynomial in `n`.
fn group_polynomial(p: &[BigInt], r: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len().max(1)];
    let r_big = BigInt::from(r);
    for i in 1..=r {
        // argument is r*n + (i - r)
        let shift = BigInt::from(i as i64 - r as i64);
        // powers of (r n + shift) as coefficient vectors
        let mut power = vec![BigInt::one()];
        for (j, c) in p.iter().enumerate() {
            if j > 0 {
                let mut next = vec![BigInt::zero(); power.len() + 1];
                for (k, a) in power.iter().enumerate() {
                    next[k] += a * &shift;
                    next[k + 1] += a * &r_big;
                }
                power = next;
            }
            for (k, a) in power.iter().enumerate() {
                out[k] += c * a;
            }
        }
    }
    out
}

impl fmt::Display for BudgetSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetSeq::Constant(c) => write!(f, "{c}"),
            BudgetSeq::Poly { c, d } => write!(f, "poly:{c},{d}"),
            BudgetSeq::List(v) => {
                f.write_str("list:")?;
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
            BudgetSeq::Exponential { c, base } => write!(f, "exp:{c},{base}"),
            BudgetSeq::Group { r, inner } => write!(f, "group:{r}({inner})"),
            BudgetSeq::Scale { factor, inner } => write!(f, "scale:{factor}({inner})"),
        }
    }
}

fn parse_u64(text: &str, whole: &str) -> Result<u64> {
    text.trim().parse().map_err(|_| Error::Malformed {
        what: "budget",
        reason: format!("`{whole}`: `{text}` is not a nonnegative integer"),
    })
}

fn split_wrapped<'a>(rest: &'a str, whole: &str) -> Result<(&'a str, &'a str)> {
    let open = rest.find('(').ok_or_else(|| Error::Malformed {
        what: "budget",
        reason: format!("`{whole}`: expected `(`"),
    })?;
    let inner = rest[open + 1..].strip_suffix(')').ok_or_else(|| Error::Malformed {
        what: "budget",
        reason: format!("`{whole}`: expected closing `)`"),
    })?;
    Ok((&rest[..open], inner))
}

impl FromStr for BudgetSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |reason: &str| Error::Malformed {
            what: "budget",
            reason: format!("`{s}`: {reason}"),
        };
        if let Some(rest) = s.strip_prefix("poly:") {
            let (c, d) = rest.split_once(',').ok_or_else(|| bad("expected poly:c,d"))?;
            let d = parse_u64(d, s)?;
            return Ok(BudgetSeq::Poly {
                c: parse_u64(c, s)?,
                d: u32::try_from(d).map_err(|_| bad("degree too large"))?,
            });
        }
        if let Some(rest) = s.strip_prefix("list:") {
            if rest.trim().is_empty() {
                return Ok(BudgetSeq::List(Vec::new()));
            }
            return rest
                .split(',')
                .map(|t| parse_u64(t, s))
                .collect::<Result<_>>()
                .map(BudgetSeq::List);
        }
        if let Some(rest) = s.strip_prefix("exp:") {
            let (c, b) = rest.split_once(',').ok_or_else(|| bad("expected exp:c,base"))?;
            return Ok(BudgetSeq::Exponential {
                c: parse_u64(c, s)?,
                base: parse_u64(b, s)?,
            });
        }
        if let Some(rest) = s.strip_prefix("group:") {
            let (r, inner) = split_wrapped(rest, s)?;
            let r = parse_u64(r, s)?;
            if r == 0 {
                return Err(bad("group size must be positive"));
            }
            return Ok(BudgetSeq::Group {
                r,
                inner: Box::new(inner.parse()?),
            });
        }
        if let Some(rest) = s.strip_prefix("scale:") {
            let (k, inner) = split_wrapped(rest, s)?;
            return Ok(BudgetSeq::Scale {
                factor: parse_u64(k, s)?,
                inner: Box::new(inner.parse()?),
            });
        }
        Ok(BudgetSeq::Constant(parse_u64(s, s)?))
    }
}

impl Serialize for BudgetSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BudgetSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
