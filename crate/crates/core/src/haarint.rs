//! Integration over U_n by orthogonality of matrix elements.
//!
//! - Exact pairing ∫ s_α(Cy) s_β(Dy) d*y and integrals of trace-power monomials.
//! - Monte-Carlo Haar averages (QR of Ginibre matrices) with standard errors.
//! - Termwise contour Fourier transform of class functions.
//! - Exact Euler-type integral used as an oracle for terminating series.
//!
//! Haar measure d*y is normalized to total mass 1.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gammafn::{c_n, divided_power_coeff};
use crate::rational::{factorial, inverse, matmul, qi, qpow, Q};
use crate::symfunc::{power_trace_expand, schur_of_matrix, ClassFunction};
use crate::weights::DominantWeight;

/// Default Monte-Carlo seed.
pub const DEFAULT_SEED: u64 = 20_260_101;

const BATCH: u64 = 1024;

/// Result of ∫_{U_n} s_α(Cy) s_β(Dy) d*y: `scalar` · s_α(CD^{-1}) when `nonzero`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurPairing {
    pub nonzero: bool,
    pub weight: DominantWeight,
    pub scalar: Q,
}

pub fn integrate_schur_pair(alpha: &DominantWeight, beta: &DominantWeight) -> Result<SchurPairing> {
    if alpha.n() != beta.n() {
        return Err(Error::Mismatch("weights of different rank".into()));
    }
    let nonzero = *beta == alpha.dual();
    let scalar = if nonzero { Q::new(1.into(), alpha.dimension()) } else { Q::zero() };
    Ok(SchurPairing { nonzero, weight: alpha.clone(), scalar })
}

/// c · ∏_j tr(C_j y)^{e_j} · det(y)^p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixMonomial {
    pub coeff: Q,
    pub trace_powers: Vec<u32>,
    pub det_power: i64,
}

/// Polynomial in tr(C_j y) and det(y)^{±1} with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPolyExpr {
    pub n: usize,
    pub matrices: usize,
    pub terms: Vec<MatrixMonomial>,
}

impl MatrixPolyExpr {
    pub fn new(n: usize, matrices: usize) -> Self {
        MatrixPolyExpr { n, matrices, terms: vec![] }
    }

    pub fn term(mut self, coeff: Q, trace_powers: &[u32], det_power: i64) -> Self {
        assert_eq!(trace_powers.len(), self.matrices, "one power per matrix argument");
        self.terms.push(MatrixMonomial { coeff, trace_powers: trace_powers.to_vec(), det_power });
        self
    }

    pub fn eval_complex(&self, mats: &[DMatrix<Complex64>], y: &DMatrix<Complex64>) -> Complex64 {
        let traces: Vec<Complex64> = mats.iter().map(|c| (c * y).trace()).collect();
        let d = y.determinant();
        self.terms
            .iter()
            .map(|t| {
                let mut v = Complex64::new(crate::rational::to_f64(&t.coeff), 0.0);
                for (tr, &e) in traces.iter().zip(&t.trace_powers) {
                    v *= tr.powu(e);
                }
                v * d.powi(t.det_power as i32)
            })
            .sum()
    }
}

/// Σ coeff · s_λ(C_1 C_2^{-1}) · det(C_2)^k, keyed by (λ, k).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HaarResult {
    pub n: usize,
    pub terms: BTreeMap<(DominantWeight, i64), Q>,
}

impl HaarResult {
    fn add(&mut self, key: (DominantWeight, i64), c: Q) {
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, c1: &[Vec<Q>], c2: &[Vec<Q>]) -> Result<Q> {
        let inv = inverse(c2).ok_or_else(|| Error::Domain("C_2 is singular".into()))?;
        let m = matmul(c1, &inv);
        let det2 = crate::rational::det(c2);
        let mut acc = Q::zero();
        for ((w, k), c) in &self.terms {
            acc += c * schur_of_matrix(w, &m)? * qpow(&det2, *k);
        }
        Ok(acc)
    }

    pub fn eval_complex(&self, c1: &DMatrix<Complex64>, c2: &DMatrix<Complex64>) -> Result<Complex64> {
        let inv = c2.clone().try_inverse().ok_or_else(|| Error::Domain("C_2 is singular".into()))?;
        let m = c1 * inv;
        let rows: Vec<Vec<Complex64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
        let det2 = c2.determinant();
        let mut acc = Complex64::zero();
        for ((w, k), c) in &self.terms {
            acc += schur_of_matrix(w, &rows)? * det2.powi(*k as i32) * crate::rational::to_f64(c);
        }
        Ok(acc)
    }
}

/// ∫ tr(C_1 y)^{e0} tr(C_2 y)^{e1} det(y)^p d*y as (λ, det-power of C_2, coefficient).
fn pair_traces(n: usize, e0: u32, e1: u32, p: i64) -> Vec<(DominantWeight, i64, Q)> {
    let left = power_trace_expand(e0 as u64, n);
    let right = power_trace_expand(e1 as u64, n);
    let mut out = Vec::new();
    for (lam, wl) in left.iter() {
        let target = lam.dual();
        for (kap, wk) in right.iter() {
            // det(y)^p s_κ(C_2 y) = det(C_2)^{-p} s_{κ+p}(C_2 y)
            if kap.det_shift(p) == target {
                let c = wl * wk / qi(&lam.dimension());
                out.push((lam.clone(), -p, c));
            }
        }
    }
    out
}

/// Exact Haar integral of a polynomial in tr(C_1 y), tr(C_2 y), det(y)^{±1}.
/// With one matrix argument the result is expressed with C_2 = identity.
pub fn integrate_un(expr: &MatrixPolyExpr) -> Result<HaarResult> {
    if expr.matrices > 2 {
        return Err(Error::Unsupported(format!(
            "{} matrix arguments; use monte_carlo_haar for more than two",
            expr.matrices
        )));
    }
    let mut out = HaarResult { n: expr.n, terms: BTreeMap::new() };
    for t in &expr.terms {
        let e0 = t.trace_powers.first().copied().unwrap_or(0);
        let e1 = t.trace_powers.get(1).copied().unwrap_or(0);
        for (lam, k, c) in pair_traces(expr.n, e0, e1, t.det_power) {
            out.add((lam, k), &t.coeff * c);
        }
    }
    if expr.matrices < 2 {
        // C_2 = 1: fold det(C_2) powers away
        let mut folded = HaarResult { n: expr.n, terms: BTreeMap::new() };
        for ((w, _), c) in out.terms {
            folded.add((w, 0), c);
        }
        return Ok(folded);
    }
    Ok(out)
}

/// Numeric Haar average with its standard error.
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub re: f64,
    pub im: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn estimate(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug)]
struct Welford {
    n: u64,
    mean: Complex64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Welford { n: 0, mean: Complex64::zero(), m2: 0.0 }
    }

    fn push(&mut self, x: Complex64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += (delta.conj() * (x - self.mean)).re;
    }

    fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let delta = o.mean - self.mean;
        let mean = self.mean + delta * (o.n as f64 / n as f64);
        let m2 = self.m2 + o.m2 + delta.norm_sqr() * (self.n as f64 * o.n as f64 / n as f64);
        Welford { n, mean, m2 }
    }
}

/// Haar-random unitary: QR of a complex Ginibre matrix with phases fixed by diag(R).
pub fn haar_unitary<R: rand::Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::one() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Average of f over U_n. Batches use independent ChaCha streams and are
/// merged in batch order, so the result depends only on (samples, seed).
pub fn monte_carlo_haar<F>(f: F, n: usize, samples: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&DMatrix<Complex64>) -> Complex64 + Sync,
{
    monte_carlo_haar_product(|ys| f(&ys[0]), &[n], samples, seed)
}

/// Average of f over U_{n_1} × … × U_{n_k}.
pub fn monte_carlo_haar_product<F>(f: F, dims: &[usize], samples: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[DMatrix<Complex64>]) -> Complex64 + Sync,
{
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let batches = samples.div_ceil(BATCH);
    let parts: Vec<Result<Welford>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BATCH.min(samples - b * BATCH);
            let mut w = Welford::new();
            for _ in 0..count {
                let ys: Vec<DMatrix<Complex64>> = dims.iter().map(|&n| haar_unitary(n, &mut rng)).collect();
                let v = f(&ys);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Domain("integrand returned a non-finite value".into()));
                }
                w.push(v);
            }
            Ok(w)
        })
        .collect();
    let mut acc = Welford::new();
    for p in parts {
        acc = acc.merge(p?);
    }
    let stderr = if acc.n > 1 { (acc.m2 / (acc.n - 1) as f64 / acc.n as f64).sqrt() } else { 0.0 };
    Ok(McEstimate { re: acc.mean.re, im: acc.mean.im, stderr, samples, seed })
}

/// Contour Fourier transform of a class function, as coefficients of C·s_α(y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierResult {
    pub terms: ClassFunction,
    pub truncation: u64,
    /// Some pairing needed a term of the exponential beyond the truncation.
    pub incomplete: bool,
    pub dropped: Vec<DominantWeight>,
}

/// C(n) = (2π)^{n(n+1)/2} / ∏_{i=1}^{n-1} i!.
pub fn fourier_constant_f64(n: usize) -> f64 {
    let num = (2.0 * std::f64::consts::PI).powi((n * (n + 1) / 2) as i32);
    num / crate::rational::to_f64(&qi(&c_n(n)))
}

/// FC[f](y) = ∫_{U_n} f(x) e^{tr(xy)} dx with dx = C·det(x)^n d*x.
///
/// The exponential is expanded as Σ_{m ≤ M} tr(xy)^m / m! and each term is
/// paired by orthogonality, so FC[s_{α^-} det^{-n}] = C·c_n·s_α / Γ_n(α+1).
pub fn contour_fourier(f: &ClassFunction, truncation: u64) -> FourierResult {
    let n = f.n();
    let mut out = ClassFunction::zero(n);
    let mut dropped = Vec::new();
    let expansions: Vec<ClassFunction> = (0..=truncation).map(|m| power_trace_expand(m, n)).collect();
    for (beta, c) in f.iter() {
        let alpha = beta.det_shift(n as i64).dual();
        if !alpha.is_nonnegative() {
            continue;
        }
        let m = alpha.size() as u64;
        if m > truncation {
            dropped.push(beta.clone());
            continue;
        }
        let w = expansions[m as usize].coefficient(&alpha);
        let coeff = c * w / qi(&factorial(m)) / qi(&alpha.dimension());
        out.add_term(alpha, coeff);
    }
    FourierResult { terms: out, truncation, incomplete: !dropped.is_empty(), dropped }
}

/// Recover f from FC[f] by reading off the coefficients of C·s_α.
pub fn fourier_inverse_coefficients(res: &FourierResult) -> ClassFunction {
    let n = res.terms.n();
    let cn = qi(&c_n(n));
    let mut out = ClassFunction::zero(n);
    for (alpha, c) in res.terms.iter() {
        let beta = alpha.dual().det_shift(-(n as i64));
        out.add_term(beta, c / (&cn * divided_power_coeff(alpha)));
    }
    out
}

/// One monomial a^i b^j · coeff · s_λ(C D^{-1}) · det(D)^k of the Euler integral.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EulerTerm {
    pub a_power: u64,
    pub b_power: u64,
    pub weight: DominantWeight,
    pub det_d_power: i64,
}

/// ∫_{U_1×U_1×U_n} (a + bu + tr(Cy) + u·tr(Dy))^τ u^q det(y)^r d*u d*y, symbolically.
pub fn euler_oracle_symbolic(n: usize, tau: u64, q: i64, r: i64) -> BTreeMap<EulerTerm, Q> {
    let mut out: BTreeMap<EulerTerm, Q> = BTreeMap::new();
    let tf = qi(&factorial(tau));
    for j in 0..=tau {
        for l in 0..=(tau - j) {
            // u-integral keeps only u^{j+l+q} = u^0
            if j as i64 + l as i64 + q != 0 {
                continue;
            }
            for k in 0..=(tau - j - l) {
                let i = tau - j - k - l;
                let multi = &tf / qi(&(factorial(i) * factorial(j) * factorial(k) * factorial(l)));
                for (lam, dk, c) in pair_traces(n, k as u32, l as u32, r) {
                    let key = EulerTerm { a_power: i, b_power: j, weight: lam, det_d_power: dk };
                    let e = out.entry(key.clone()).or_insert_with(Q::zero);
                    *e += &multi * c;
                    if e.is_zero() {
                        out.remove(&key);
                    }
                }
            }
        }
    }
    out
}

/// Exact value of the Euler integral for rational data.
#[allow(clippy::too_many_arguments)]
pub fn euler_oracle_61(a: &Q, b: &Q, c: &[Vec<Q>], d: &[Vec<Q>], tau: u64, q: i64, r: i64) -> Result<Q> {
    let n = c.len();
    let inv = inverse(d).ok_or_else(|| Error::Domain("D is singular".into()))?;
    let m = matmul(c, &inv);
    let det_d = crate::rational::det(d);
    let mut acc = Q::zero();
    for (t, coeff) in euler_oracle_symbolic(n, tau, q, r) {
        acc += coeff
            * qpow(a, t.a_power as i64)
            * qpow(b, t.b_power as i64)
            * schur_of_matrix(&t.weight, &m)?
            * qpow(&det_d, t.det_d_power);
    }
    Ok(acc)
}
