//! Gamma-function values with exact bookkeeping.
//!
//! - `GammaValue`: a rational times a product of Γ(a)^{±1} with a ∈ (0,1).
//! - Γ_n(α) = ∏_j Γ(α_j + n - j) with an explicit pole marker.
//! - Reciprocal gammas vanish at poles.
//! - Scalar and matrix Pochhammer symbols, divided-power coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{factorial, is_integer, q, qi, to_f64, Q};
use crate::weights::{DominantWeight, ShiftedWeight};

/// rational_part · ∏ Γ(arg)^{exp}, every arg in the open interval (0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValue {
    rational_part: Q,
    gamma_args: BTreeMap<Q, i64>,
}

/// Result of evaluating Γ or Γ_n: a finite value or a pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaOutcome {
    Finite(GammaValue),
    Pole,
}

impl GammaOutcome {
    pub fn is_pole(&self) -> bool {
        matches!(self, GammaOutcome::Pole)
    }

    pub fn finite(self) -> Option<GammaValue> {
        match self {
            GammaOutcome::Finite(v) => Some(v),
            GammaOutcome::Pole => None,
        }
    }
}

/// Serialized form: gamma factors listed with multiplicity, inverse factors separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRecord {
    pub num: String,
    pub den: String,
    pub gamma_args: Vec<(String, String)>,
    pub inverse_gamma_args: Vec<(String, String)>,
}

impl GammaValue {
    pub fn rational(c: Q) -> Self {
        GammaValue { rational_part: c, gamma_args: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    /// Γ(z) for rational z; `None` at poles.
    pub fn gamma(z: &Q) -> Option<Self> {
        if is_integer(z) {
            if !z.is_positive() {
                return None;
            }
            let k: u64 = (z.to_integer() - 1u32).try_into().expect("gamma argument too large");
            return Some(Self::rational(qi(&factorial(k))));
        }
        let k = z.floor();
        let f = z - &k;
        let k: i64 = k.to_integer().try_into().expect("gamma argument too large");
        // Γ(f + k) from Γ(f) by the recurrence
        let mut r = Q::one();
        if k >= 0 {
            for j in 0..k {
                r *= &f + q(j);
            }
        } else {
            for j in k..0 {
                r /= &f + q(j);
            }
        }
        let mut g = BTreeMap::new();
        g.insert(f, 1);
        Some(GammaValue { rational_part: r, gamma_args: g })
    }

    /// 1/Γ(z), exactly zero at poles.
    pub fn reciprocal_gamma(z: &Q) -> Self {
        Self::gamma(z).map_or_else(Self::zero, |g| g.recip().expect("gamma values are nonzero"))
    }

    pub fn rational_part(&self) -> &Q {
        &self.rational_part
    }

    pub fn gamma_args(&self) -> &BTreeMap<Q, i64> {
        &self.gamma_args
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero()
    }

    /// Whether the value is a plain rational.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.gamma_args.is_empty() || self.is_zero() {
            Some(&self.rational_part)
        } else {
            None
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut g = self.gamma_args.clone();
        for (a, e) in &o.gamma_args {
            let v = g.entry(a.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                g.remove(a);
            }
        }
        GammaValue { rational_part: &self.rational_part * &o.rational_part, gamma_args: g }
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.mul(&Self::rational(c.clone()))
    }

    /// 1/v, `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(GammaValue {
            rational_part: self.rational_part.recip(),
            gamma_args: self.gamma_args.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.recip().map(|r| self.mul(&r))
    }

    /// Exact ratio self/o when both share the same gamma factors.
    pub fn ratio(&self, o: &Self) -> Option<Q> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Q::zero());
        }
        (self.gamma_args == o.gamma_args).then(|| &self.rational_part / &o.rational_part)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = to_f64(&self.rational_part);
        for (a, e) in &self.gamma_args {
            v *= statrs::function::gamma::gamma(to_f64(a)).powi(*e as i32);
        }
        v
    }

    pub fn to_record(&self) -> GammaRecord {
        let mut gamma_args = Vec::new();
        let mut inverse_gamma_args = Vec::new();
        for (a, &e) in &self.gamma_args {
            let pair = (a.numer().to_string(), a.denom().to_string());
            let target = if e > 0 { &mut gamma_args } else { &mut inverse_gamma_args };
            for _ in 0..e.abs() {
                target.push(pair.clone());
            }
        }
        GammaRecord {
            num: self.rational_part.numer().to_string(),
            den: self.rational_part.denom().to_string(),
            gamma_args,
            inverse_gamma_args,
        }
    }
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational_part)?;
        for (a, e) in &self.gamma_args {
            write!(f, "·Γ({a})^{e}")?;
        }
        Ok(())
    }
}

/// Γ_n(α) = ∏_{j=1}^n Γ(α_j + n - j).
pub fn gamma_n(alpha: &ShiftedWeight) -> GammaOutcome {
    gamma_n_parts(&alpha.parts())
}

/// Γ_n on an explicit rational vector.
pub fn gamma_n_parts(parts: &[Q]) -> GammaOutcome {
    let n = parts.len();
    let mut acc = GammaValue::one();
    for (j, a) in parts.iter().enumerate() {
        match GammaValue::gamma(&(a + q((n - 1 - j) as i64))) {
            Some(g) => acc = acc.mul(&g),
            None => return GammaOutcome::Pole,
        }
    }
    GammaOutcome::Finite(acc)
}

/// 1/Γ_n(α), exact zero at poles.
pub fn reciprocal_gamma_n(alpha: &ShiftedWeight) -> GammaValue {
    reciprocal_gamma_n_parts(&alpha.parts())
}

pub fn reciprocal_gamma_n_parts(parts: &[Q]) -> GammaValue {
    match gamma_n_parts(parts) {
        GammaOutcome::Finite(g) => g.recip().expect("finite gamma values are nonzero"),
        GammaOutcome::Pole => GammaValue::zero(),
    }
}

/// (a)_m = a(a+1)...(a+m-1).
pub fn pochhammer(a: &Q, m: u64) -> Q {
    (0..m).fold(Q::one(), |acc, j| acc * (a + q(j as i64)))
}

/// [a]_μ = ∏_{j=1}^n (a + n - j)_{μ_j}.
pub fn matrix_pochhammer(a: &Q, mu: &DominantWeight) -> Q {
    let n = mu.n();
    mu.parts().iter().enumerate().fold(Q::one(), |acc, (j, &m)| {
        assert!(m >= 0, "matrix Pochhammer needs a nonnegative weight");
        acc * pochhammer(&(a + q((n - 1 - j) as i64)), m as u64)
    })
}

/// 1/Γ_n(α + 1) as an exact rational; zero unless α ≥ 0.
pub fn divided_power_coeff(alpha: &DominantWeight) -> Q {
    let parts: Vec<Q> = alpha.parts().iter().map(|&a| q(a + 1)).collect();
    reciprocal_gamma_n_parts(&parts).as_rational().cloned().expect("integer arguments give rationals")
}

/// c_n = ∏_{j=1}^{n-1} j!.
pub fn c_n(n: usize) -> BigInt {
    (1..n as u64).fold(BigInt::one(), |acc, j| acc * factorial(j))
}

/// Float path: 1/Γ(x) with zeros at the poles.
pub fn rgamma_f64(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / statrs::function::gamma::gamma(x)
}

/// Float path: 1/Γ_n on a real vector.
pub fn reciprocal_gamma_n_f64(parts: &[f64]) -> f64 {
    let n = parts.len();
    parts.iter().enumerate().map(|(j, a)| rgamma_f64(a + (n - 1 - j) as f64)).product()
}

pub fn pochhammer_f64(a: f64, m: u64) -> f64 {
    (0..m).map(|j| a + j as f64).product()
}
