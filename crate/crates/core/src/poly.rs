//! Laurent polynomials in n commuting variables with exact coefficients.
//!
//! Used for monomial-level computations: explicit Schur polynomials from
//! semistandard tableaux, differentiation, and re-expansion of symmetric
//! polynomials in the Schur basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, qpow, Q};
use crate::symfunc::ClassFunction;
use crate::weights::DominantWeight;

/// Σ c_e x^e over integer exponent vectors e of length n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], Q::one())
    }

    pub fn monomial(e: Vec<i64>, c: Q) -> Self {
        let n = e.len();
        let mut p = Self::zero(n);
        p.add_term(e, c);
        p
    }

    /// x_i.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, m: u32) -> Self {
        (0..m).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// Multiply by the monomial x^shift.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone());
        }
        out
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * q(e[i]));
            }
        }
        out
    }

    /// Σ_i ∂/∂x_i.
    pub fn total_derivative(&self) -> Self {
        (0..self.n).fold(Self::zero(self.n), |acc, i| acc.add(&self.partial(i)))
    }

    /// Exact evaluation at a rational point; zero coordinates with negative
    /// exponents are a domain error.
    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if xi.is_zero() && ei < 0 {
                    return Err(Error::Domain("negative power of zero".into()));
                }
                t *= qpow(xi, ei);
            }
            total += t;
        }
        Ok(total)
    }

    /// Expand a symmetric Laurent polynomial in the Schur basis.
    pub fn to_schur(&self) -> Result<ClassFunction> {
        let n = self.n;
        let mut out = ClassFunction::zero(n);
        let mut rest = self.clone();
        while let Some((e, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let w = DominantWeight::new(e.clone()).map_err(|_| {
                Error::Domain(format!("polynomial is not symmetric (leading exponent {e:?})"))
            })?;
            rest = rest.sub(&schur_polynomial(&w).scale(&c));
            out.add_term(w, c);
        }
        Ok(out)
    }
}

/// The Schur polynomial s_α(x_1..x_n) as an explicit Laurent polynomial,
/// built from semistandard tableaux of shape α - α_n.
pub fn schur_polynomial(alpha: &DominantWeight) -> LaurentPoly {
    let n = alpha.n();
    let base = alpha.det_shift(-alpha.last());
    let shape: Vec<usize> = base.parts().iter().map(|&p| p as usize).collect();
    let mut out = LaurentPoly::zero(n);
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
    fill(&shape, 0, 0, &mut rows, n, &mut out);
    out.shift(&vec![alpha.last(); n])
}

fn fill(shape: &[usize], r: usize, c: usize, rows: &mut Vec<Vec<usize>>, n: usize, out: &mut LaurentPoly) {
    if r == shape.len() || shape[r] == 0 {
        let mut e = vec![0i64; n];
        for row in rows.iter() {
            for &v in row {
                e[v - 1] += 1;
            }
        }
        out.add_term(e, Q::one());
        return;
    }
    if c == shape[r] {
        fill(shape, r + 1, 0, rows, n, out);
        return;
    }
    let lo_row = if c > 0 { rows[r][c - 1] } else { 1 };
    let lo_col = if r > 0 { rows[r - 1][c] + 1 } else { 1 };
    for v in lo_row.max(lo_col)..=n {
        rows[r][c] = v;
        fill(shape, r, c + 1, rows, n, out);
    }
    rows[r][c] = 0;
}

/// (x_1 + ... + x_n)^m.
pub fn power_sum_power(n: usize, m: u32) -> LaurentPoly {
    let p1 = (0..n).fold(LaurentPoly::zero(n), |acc, i| acc.add(&LaurentPoly::var(n, i)));
    p1.pow(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: &[i64]) -> DominantWeight {
        DominantWeight::from_slice(p)
    }

    #[test]
    fn schur_polynomials_small() {
        // s_(1,0) = x1 + x2, s_(1,1) = x1 x2
        let s10 = schur_polynomial(&w(&[1, 0]));
        assert_eq!(s10, LaurentPoly::var(2, 0).add(&LaurentPoly::var(2, 1)));
        let s11 = schur_polynomial(&w(&[1, 1]));
        assert_eq!(s11, LaurentPoly::monomial(vec![1, 1], Q::one()));
        // s_(0,-1) = x1^-1 + x2^-1
        let s0m = schur_polynomial(&w(&[0, -1]));
        assert_eq!(s0m.terms().len(), 2);
        assert!(s0m.terms().contains_key(&vec![-1, 0]));
    }

    #[test]
    fn schur_expansion_round_trip() {
        let p = power_sum_power(2, 2);
        let f = p.to_schur().unwrap();
        assert_eq!(f.coefficient(&w(&[2, 0])), q(1));
        assert_eq!(f.coefficient(&w(&[1, 1])), q(1));
    }

    #[test]
    fn derivative_of_complete_square() {
        // D (t1^2 + t1 t2 + t2^2) = 3 (t1 + t2)
        let s20 = schur_polynomial(&w(&[2, 0]));
        let d = s20.total_derivative().to_schur().unwrap();
        assert_eq!(d.coefficient(&w(&[1, 0])), q(3));
        assert_eq!(d.len(), 1);
    }
}
