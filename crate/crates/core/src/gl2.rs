//! GL_2 special functions.
//!
//! - Gelfand–Tsetlin matrix elements t^{(λ)}_{km}(x).
//! - 3j-symbols for GL_2 triples: Racah form with exact squares, plus the
//!   alternative z-sum display for comparison.
//! - Triangle admissibility.
//! - The Appell-type Γ-series on (a, b, x, y, z).

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gammafn::{reciprocal_gamma_n_f64, rgamma_f64};
use crate::rational::{binomial, factorial, qi, to_f64, Q};
use crate::weights::{weights_in_box, DominantWeight};

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat2(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
    [[Complex64::new(a, 0.0), Complex64::new(b, 0.0)], [Complex64::new(c, 0.0), Complex64::new(d, 0.0)]]
}

pub fn det2(x: &Mat2) -> Complex64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

pub fn mul2(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[Complex64::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn check_gl2(w: &DominantWeight) -> Result<()> {
    if w.n() != 2 {
        return Err(Error::Domain(format!("{w} is not a GL_2 weight")));
    }
    Ok(())
}

fn fact_f64(n: i64) -> f64 {
    to_f64(&qi(&factorial(n as u64)))
}

/// t^{(λ)}_{km}(x) in the orthonormal Gelfand–Tsetlin basis, λ_1 ≥ k, m ≥ λ_2.
///
/// The normalization is sqrt((m−λ_2)!(λ_1−m)! / ((k−λ_2)!(λ_1−k)!)), which makes
/// t^{(λ)}(u) unitary for u ∈ U_2.
pub fn gt_matrix_element(lambda: &DominantWeight, k: i64, m: i64, x: &Mat2) -> Result<Complex64> {
    gt_element_with(lambda, k, m, x, false)
}

/// Same sum with the reciprocal normalization sqrt((k−λ_2)!(λ_1−k)! / ((m−λ_2)!(λ_1−m)!)).
/// It is a diagonal conjugate of `gt_matrix_element`: multiplicative but not unitary.
pub fn gt_matrix_element_printed(lambda: &DominantWeight, k: i64, m: i64, x: &Mat2) -> Result<Complex64> {
    gt_element_with(lambda, k, m, x, true)
}

fn gt_element_with(lambda: &DominantWeight, k: i64, m: i64, x: &Mat2, printed: bool) -> Result<Complex64> {
    check_gl2(lambda)?;
    let (l1, l2) = (lambda.parts()[0], lambda.parts()[1]);
    if !(l2..=l1).contains(&k) || !(l2..=l1).contains(&m) {
        return Err(Error::Domain(format!("GT index ({k},{m}) out of range for {lambda}")));
    }
    let d = det2(x);
    if l2 < 0 && d.norm() == 0.0 {
        return Err(Error::Domain("singular matrix with a negative determinant power".into()));
    }
    let ratio = (fact_f64(m - l2) * fact_f64(l1 - m)) / (fact_f64(k - l2) * fact_f64(l1 - k));
    let norm = if printed { ratio.recip().sqrt() } else { ratio.sqrt() };
    let mut sum = Complex64::zero();
    for i in 0..=(m - l2) {
        let j = m - l2 - i;
        if i > k - l2 || j > l1 - k {
            continue;
        }
        let c = to_f64(&qi(&(binomial(k - l2, i) * binomial(l1 - k, j))));
        sum += x[0][0].powi(i as i32)
            * x[0][1].powi((k - l2 - i) as i32)
            * x[1][0].powi(j as i32)
            * x[1][1].powi((l1 - k - j) as i32)
            * c;
    }
    Ok(d.powi(l2 as i32) * norm * sum)
}

/// GT indices of Σ^λ(C²), highest first.
pub fn gt_indices(lambda: &DominantWeight) -> Vec<i64> {
    let (l1, l2) = (lambda.parts()[0], lambda.parts()[1]);
    (l2..=l1).rev().collect()
}

/// The matrix [t^{(λ)}_{km}(x)] with rows and columns ordered by `gt_indices`.
pub fn t_matrix(lambda: &DominantWeight, x: &Mat2) -> Result<DMatrix<Complex64>> {
    let idx = gt_indices(lambda);
    let mut out = DMatrix::zeros(idx.len(), idx.len());
    for (r, &k) in idx.iter().enumerate() {
        for (c, &m) in idx.iter().enumerate() {
            out[(r, c)] = gt_matrix_element(lambda, k, m, x)?;
        }
    }
    Ok(out)
}

/// |λ|+|μ|+|ν| = 0 and the gaps satisfy the triangle inequalities.
pub fn triangle_check(lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> bool {
    if lambda.n() != 2 || mu.n() != 2 || nu.n() != 2 {
        return false;
    }
    if lambda.size() + mu.size() + nu.size() != 0 {
        return false;
    }
    let g = |w: &DominantWeight| w.parts()[0] - w.parts()[1];
    let (a, b, c) = (g(lambda), g(mu), g(nu));
    a <= b + c && b <= a + c && c <= a + b
}

/// One 3j-symbol with its exact square.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreeJEntry {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub value: f64,
    #[serde(with = "crate::rational::qserde")]
    pub square: Q,
}

fn fact_q(n: i64) -> Option<Q> {
    (n >= 0).then(|| qi(&factorial(n as u64)))
}

/// Racah's formula in doubled coordinates: returns the signed square
/// (sign, value²) of (j1 j2 j3; m1 m2 m3) with 2j = λ1−λ2, 2m = 2i−λ1−λ2.
fn racah(tj: [i64; 3], tm: [i64; 3]) -> (i32, Q) {
    let [a, b, c] = tj;
    let [x, y, z] = tm;
    // all half-integer combinations below are integers under the selection rules
    let h = |v: i64| v / 2;
    let delta = fact_q(h(a + b - c)).unwrap() * fact_q(h(a - b + c)).unwrap() * fact_q(h(-a + b + c)).unwrap()
        / fact_q(h(a + b + c) + 1).unwrap();
    let pref = [h(a + x), h(a - x), h(b + y), h(b - y), h(c + z), h(c - z)]
        .iter()
        .map(|&n| fact_q(n).unwrap())
        .fold(Q::one(), |acc, f| acc * f);
    let mut sum = Q::zero();
    for t in 0..=(a + b + c) {
        let den = [t, h(c - b + x) + t, h(c - a - y) + t, h(a + b - c) - t, h(a - x) - t, h(b + y) - t];
        if den.iter().any(|&d| d < 0) {
            continue;
        }
        let d = den.iter().fold(Q::one(), |acc, &n| acc * fact_q(n).unwrap());
        let term = Q::one() / d;
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let phase = h(a - b - z);
    let mut sign = if sum.is_negative() { -1 } else if sum.is_zero() { 0 } else { 1 };
    if phase.rem_euclid(2) == 1 {
        sign = -sign;
    }
    (sign, delta * pref * &sum * &sum)
}

/// All nonzero 3j-symbols of an admissible triple, sorted by (i, j, k).
/// The entry with the lexicographically largest (i, j, k) is positive.
/// Returns None when no invariant exists.
pub fn threej_table(lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> Option<Vec<ThreeJEntry>> {
    if !triangle_check(lambda, mu, nu) {
        return None;
    }
    let gap = |w: &DominantWeight| w.parts()[0] - w.parts()[1];
    let tot = |w: &DominantWeight| w.parts()[0] + w.parts()[1];
    let tj = [gap(lambda), gap(mu), gap(nu)];
    let mut out = Vec::new();
    for i in gt_indices(lambda).into_iter().rev() {
        for j in gt_indices(mu).into_iter().rev() {
            let k = -i - j;
            if !(nu.parts()[1]..=nu.parts()[0]).contains(&k) {
                continue;
            }
            let tm = [2 * i - tot(lambda), 2 * j - tot(mu), 2 * k - tot(nu)];
            let (sign, square) = racah(tj, tm);
            if sign != 0 {
                out.push(ThreeJEntry { i, j, k, value: f64::from(sign) * to_f64(&square).sqrt(), square });
            }
        }
    }
    if out.last().is_some_and(|e| e.value < 0.0) {
        for e in &mut out {
            e.value = -e.value;
        }
    }
    Some(out)
}

/// A single 3j-symbol; 0 when i+j+k ≠ 0 or the triple is inadmissible.
pub fn threej(lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight, i: i64, j: i64, k: i64) -> Result<f64> {
    check_gl2(lambda)?;
    check_gl2(mu)?;
    check_gl2(nu)?;
    if i + j + k != 0 {
        return Ok(0.0);
    }
    Ok(threej_table(lambda, mu, nu)
        .and_then(|t| t.into_iter().find(|e| (e.i, e.j, e.k) == (i, j, k)))
        .map_or(0.0, |e| e.value))
}

/// The alternative z-sum display of the 3j-symbol, evaluated literally.
/// Returns None when a factorial under the square root has a negative argument.
pub fn threej_printed(lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight, i: i64, j: i64, k: i64) -> Option<f64> {
    let (l1, _l2) = (lambda.parts()[0], lambda.parts()[1]);
    let (m1, m2) = (mu.parts()[0], mu.parts()[1]);
    let (n1, n2) = (nu.parts()[0], nu.parts()[1]);
    let l2 = lambda.parts()[1];
    let f = |n: i64| fact_q(n);
    let outer = f(l2 + m1 + n1)? * f(l1 + m2 + n1)? / f(2 * l1 + 2 * m1 + 2 * n1 + 1)?;
    let inner = f(j - m2)? * f(m1 - j)? * f(k - n2)? * f(n1 - k)? * f(l1 + m1 + n2)? * f(i - l1)? * f(l1 - i)?;
    let mut sum = Q::zero();
    for z in -64..=64 {
        let den = [z, l1 + m1 + n2 - z, z - j - n2 - l1, j - z - m2, z + i + l1 + m2 + n1, l1 - z - i];
        if den.iter().any(|&d| d < 0) {
            continue;
        }
        let d = den.iter().fold(Q::one(), |acc, &n| acc * f(n).unwrap());
        let term = Q::one() / d;
        if (z + n1 - k).rem_euclid(2) == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Some((to_f64(&outer) * to_f64(&inner)).sqrt() * to_f64(&sum))
}

/// Comparison of the literal display against the Racah values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrintedComparison {
    pub agrees_up_to_sign: bool,
    pub defined_entries: usize,
    pub printed_norm_sq: f64,
    pub max_abs_diff: f64,
}

pub fn compare_printed_threej(lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> Option<PrintedComparison> {
    let table = threej_table(lambda, mu, nu)?;
    let mut defined = 0;
    let mut norm = 0.0;
    let mut diff_plus: f64 = 0.0;
    let mut diff_minus: f64 = 0.0;
    for i in gt_indices(lambda) {
        for j in gt_indices(mu) {
            let k = -i - j;
            if !(nu.parts()[1]..=nu.parts()[0]).contains(&k) {
                continue;
            }
            let good = table.iter().find(|e| (e.i, e.j, e.k) == (i, j, k)).map_or(0.0, |e| e.value);
            let p = threej_printed(lambda, mu, nu, i, j, k);
            if let Some(p) = p {
                defined += 1;
                norm += p * p;
            }
            let p = p.unwrap_or(f64::NAN);
            diff_plus = diff_plus.max((p - good).abs());
            diff_minus = diff_minus.max((p + good).abs());
        }
    }
    let best = diff_plus.min(diff_minus);
    let max_abs_diff = if best.is_nan() { f64::INFINITY } else { best };
    Some(PrintedComparison { agrees_up_to_sign: max_abs_diff < 1e-10, defined_entries: defined, printed_norm_sq: norm, max_abs_diff })
}

/// ⟨v | t^{(λ)}(x) ⊗ t^{(μ)}(y) ⊗ t^{(ν)}(z) | v⟩ for the normalized invariant v.
pub fn invariant_matrix_element(
    lambda: &DominantWeight,
    mu: &DominantWeight,
    nu: &DominantWeight,
    x: &Mat2,
    y: &Mat2,
    z: &Mat2,
) -> Result<Complex64> {
    let table = threej_table(lambda, mu, nu).ok_or_else(|| Error::Domain("triple is not admissible".into()))?;
    let mut acc = Complex64::zero();
    for e in &table {
        for f in &table {
            acc += gt_matrix_element(lambda, e.i, f.i, x)?
                * gt_matrix_element(mu, e.j, f.j, y)?
                * gt_matrix_element(nu, e.k, f.k, z)?
                * (e.value * f.value);
        }
    }
    Ok(acc)
}

/// Term label (λ, μ, ν) of the Appell-type series with m = |μ| + 2|ν|.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AppellIndex {
    pub lambda: DominantWeight,
    pub mu: DominantWeight,
    pub nu: DominantWeight,
}

impl AppellIndex {
    pub fn m(&self) -> i64 {
        self.mu.size() + 2 * self.nu.size()
    }

    /// ½ Σ |α_i| over (m, −m, λ, μ, ν).
    pub fn order(&self) -> i64 {
        (2 * self.m().abs() + self.lambda.l1() + self.mu.l1() + self.nu.l1()) / 2
    }
}

/// Admissible (λ, μ, ν) of order ≤ D, in graded order.
pub fn appell_indices(truncation: i64) -> Vec<AppellIndex> {
    let ws = weights_in_box(2, -truncation, truncation);
    let mut out = Vec::new();
    for l in &ws {
        for m in &ws {
            for n in &ws {
                if !triangle_check(l, m, n) {
                    continue;
                }
                let idx = AppellIndex { lambda: l.clone(), mu: m.clone(), nu: n.clone() };
                if idx.order() <= truncation {
                    out.push(idx);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.order(), a).cmp(&(b.order(), b)));
    out
}

/// Evaluation point (a, b, x, y, z) of the Appell-type series.
#[derive(Clone, Debug)]
pub struct AppellPoint {
    pub a: Complex64,
    pub b: Complex64,
    pub x: Mat2,
    pub y: Mat2,
    pub z: Mat2,
}

/// Reciprocal gamma product and d(λ)d(μ)d(ν) of one term.
pub fn appell_coefficient(idx: &AppellIndex, s: &[f64; 5]) -> f64 {
    let m = idx.m() as f64;
    let shift = |w: &DominantWeight, t: f64| -> Vec<f64> { w.parts().iter().map(|&p| p as f64 + t + 1.0).collect() };
    let d = to_f64(&qi(&(idx.lambda.dimension() * idx.mu.dimension() * idx.nu.dimension())));
    d * rgamma_f64(m + s[0] + 1.0)
        * rgamma_f64(-m + s[1] + 1.0)
        * reciprocal_gamma_n_f64(&shift(&idx.lambda, s[2]))
        * reciprocal_gamma_n_f64(&shift(&idx.mu, s[3]))
        * reciprocal_gamma_n_f64(&shift(&idx.nu, s[4]))
}

/// Principal branch of w^s.
fn cpow(w: Complex64, s: f64) -> Complex64 {
    if s == 0.0 {
        return Complex64::one();
    }
    (w.ln() * s).exp()
}

/// a^{m+s1} b^{-m+s2} |x|^{s3} |y|^{s4} |z|^{s5} · coefficient · ⟨v|t⊗t⊗t|v⟩.
pub fn appell_term(idx: &AppellIndex, s: &[f64; 5], p: &AppellPoint) -> Result<Complex64> {
    let c = appell_coefficient(idx, s);
    if c == 0.0 {
        return Ok(Complex64::zero());
    }
    let m = idx.m();
    let pre = p.a.powi(m as i32)
        * cpow(p.a, s[0])
        * p.b.powi(-m as i32)
        * cpow(p.b, s[1])
        * cpow(det2(&p.x), s[2])
        * cpow(det2(&p.y), s[3])
        * cpow(det2(&p.z), s[4]);
    Ok(pre * c * invariant_matrix_element(&idx.lambda, &idx.mu, &idx.nu, &p.x, &p.y, &p.z)?)
}

/// Partial sum of the Appell-type series.
#[derive(Clone, Debug)]
pub struct AppellSum {
    pub value: Complex64,
    pub terms: usize,
    pub nonzero_terms: usize,
    /// Every term was killed by a gamma pole.
    pub all_poles: bool,
}

pub fn appell_series(s: &[f64; 5], p: &AppellPoint, truncation: i64) -> Result<AppellSum> {
    for m in [&p.x, &p.y, &p.z] {
        if det2(m).norm() == 0.0 {
            return Err(Error::Domain("x, y, z must be invertible".into()));
        }
    }
    let idx = appell_indices(truncation);
    let vals: Vec<Result<Complex64>> = idx.par_iter().map(|i| appell_term(i, s, p)).collect();
    let mut value = Complex64::zero();
    let mut nonzero = 0;
    for v in vals {
        let v = v?;
        if v != Complex64::zero() {
            nonzero += 1;
        }
        value += v;
    }
    Ok(AppellSum { value, terms: idx.len(), nonzero_terms: nonzero, all_poles: nonzero == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(a: i64, b: i64) -> DominantWeight {
        DominantWeight::from_slice(&[a, b])
    }

    fn random_mat(rng: &mut ChaCha8Rng) -> Mat2 {
        let mut m = [[Complex64::zero(); 2]; 2];
        for row in &mut m {
            for v in row.iter_mut() {
                *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        m
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> Mat2 {
        let u = crate::haarint::haar_unitary(2, rng);
        [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
    }

    fn to_d(m: &Mat2) -> DMatrix<Complex64> {
        DMatrix::from_fn(2, 2, |i, j| m[i][j])
    }

    #[test]
    fn gt_examples() {
        let x = mat2(2.0, 3.0, 5.0, 7.0);
        assert_eq!(gt_matrix_element(&w(0, 0), 0, 0, &x).unwrap(), Complex64::one());
        assert!((t_matrix(&w(1, 0), &x).unwrap() - to_d(&x)).norm() < 1e-14);
        assert!((gt_matrix_element(&w(1, 1), 1, 1, &x).unwrap() - det2(&x)).norm() < 1e-12);
        assert!(gt_matrix_element(&w(1, 0), 2, 0, &x).is_err());
    }

    #[test]
    fn gt_homomorphism_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for l in weights_in_box(2, -2, 3).into_iter().filter(|l| l.parts()[0] - l.parts()[1] <= 4) {
            let (x, y) = (random_mat(&mut rng), random_mat(&mut rng));
            let lhs = t_matrix(&l, &mul2(&x, &y)).unwrap();
            let rhs = t_matrix(&l, &x).unwrap() * t_matrix(&l, &y).unwrap();
            assert!((&lhs - &rhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{l}");
            let u = t_matrix(&l, &random_unitary(&mut rng)).unwrap();
            let id = DMatrix::<Complex64>::identity(u.nrows(), u.nrows());
            assert!((u.adjoint() * &u - id).norm() < 1e-10, "{l}");
        }
    }

    #[test]
    fn printed_normalization_is_a_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let l = w(3, -1);
        let u = random_unitary(&mut rng);
        let idx = gt_indices(&l);
        let mut p = DMatrix::<Complex64>::zeros(idx.len(), idx.len());
        for (r, &k) in idx.iter().enumerate() {
            for (c, &m) in idx.iter().enumerate() {
                p[(r, c)] = gt_matrix_element_printed(&l, k, m, &u).unwrap();
            }
        }
        let t = t_matrix(&l, &u).unwrap();
        let id = DMatrix::<Complex64>::identity(idx.len(), idx.len());
        assert!((p.adjoint() * &p - &id).norm() > 1e-3);
        // p = N t N^{-1} with N = diag((k−λ2)!(λ1−k)!)
        let n = DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            if r == c { Complex64::new(fact_f64(idx[r] + 1) * fact_f64(3 - idx[r]), 0.0) } else { Complex64::zero() }
        });
        let conj = &n * t * n.clone().try_inverse().unwrap();
        assert!((conj - p).norm() < 1e-10);
    }

    #[test]
    fn triangle_examples() {
        assert!(triangle_check(&w(1, 0), &w(1, 0), &w(-1, -1)));
        assert!(!triangle_check(&w(2, 0), &w(0, 0), &w(-1, -1)));
        assert!(triangle_check(&w(0, 0), &w(0, 0), &w(0, 0)));
    }

    fn admissible(max_gap: i64) -> Vec<(DominantWeight, DominantWeight, DominantWeight)> {
        let ws: Vec<DominantWeight> =
            weights_in_box(2, -3, 3).into_iter().filter(|l| l.parts()[0] - l.parts()[1] <= max_gap).collect();
        let mut out = vec![];
        for a in &ws {
            for b in &ws {
                for c in &ws {
                    if triangle_check(a, b, c) {
                        out.push((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn threej_examples() {
        let (a, b, c) = (w(1, 0), w(1, 0), w(-1, -1));
        assert_eq!(threej(&a, &b, &c, 1, 1, 0).unwrap(), 0.0);
        let t = threej_table(&a, &b, &c).unwrap();
        assert_eq!(t.len(), 2);
        for e in &t {
            assert!((e.value.abs() - 0.5f64.sqrt()).abs() < 1e-15);
            assert_eq!(e.square, crate::rational::qf(1, 2));
        }
        assert!(t[0].value < 0.0 && t[1].value > 0.0);
        assert!(threej_table(&w(2, 0), &w(0, 0), &w(-1, -1)).is_none());
        assert_eq!(threej(&w(2, 0), &w(0, 0), &w(-1, -1), 0, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn threej_normalization() {
        for (a, b, c) in admissible(4) {
            let t = threej_table(&a, &b, &c).unwrap();
            let exact: Q = t.iter().map(|e| e.square.clone()).sum();
            assert_eq!(exact, q(1), "{a} {b} {c}");
            let float: f64 = t.iter().map(|e| e.value * e.value).sum();
            assert!((float - 1.0).abs() < 1e-10);
        }
    }

    /// Invariant line of V_λ⊗V_μ⊗V_ν from the null space of T(g_i) − 1.
    fn null_space_vector(a: &DominantWeight, b: &DominantWeight, c: &DominantWeight) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut rows: Vec<DMatrix<Complex64>> = vec![];
        for _ in 0..3 {
            let g = random_mat(&mut rng);
            let t = t_matrix(a, &g).unwrap().kronecker(&t_matrix(b, &g).unwrap()).kronecker(&t_matrix(c, &g).unwrap());
            let id = DMatrix::<Complex64>::identity(t.nrows(), t.nrows());
            rows.push(t - id);
        }
        let n = rows[0].ncols();
        let mut stacked = DMatrix::<Complex64>::zeros(3 * n, n);
        for (r, m) in rows.iter().enumerate() {
            stacked.view_mut((r * n, 0), (n, n)).copy_from(m);
        }
        let svd = stacked.svd(false, true);
        let (imin, smin) = svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        assert!(smin < 1e-8);
        let v = svd.v_t.unwrap().row(imin).adjoint();
        // fix the phase by the largest component
        let big = v.iter().fold(Complex64::zero(), |acc, &z| if z.norm() > acc.norm() { z } else { acc });
        let out = &v * (big.conj() / big.norm());
        DMatrix::from_column_slice(out.nrows(), 1, out.as_slice())
    }

    #[test]
    fn threej_matches_null_space() {
        for (a, b, c) in admissible(3) {
            let t = threej_table(&a, &b, &c).unwrap();
            let (ia, ib, ic) = (gt_indices(&a), gt_indices(&b), gt_indices(&c));
            let mut v = DMatrix::<Complex64>::zeros(ia.len() * ib.len() * ic.len(), 1);
            for e in &t {
                let p = ia.iter().position(|&x| x == e.i).unwrap();
                let r = ib.iter().position(|&x| x == e.j).unwrap();
                let s = ic.iter().position(|&x| x == e.k).unwrap();
                v[((p * ib.len() + r) * ic.len() + s, 0)] = Complex64::new(e.value, 0.0);
            }
            let o = null_space_vector(&a, &b, &c);
            let d = (&v - &o).norm().min((&v + &o).norm());
            assert!(d < 1e-8, "{a} {b} {c}: {d}");
        }
    }

    #[test]
    fn threej_vector_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (a, b, c) in admissible(4).into_iter().take(60) {
            let g = random_unitary(&mut rng);
            let t = threej_table(&a, &b, &c).unwrap();
            let (ia, ib, ic) = (gt_indices(&a), gt_indices(&b), gt_indices(&c));
            let (ta, tb, tc) = (t_matrix(&a, &g).unwrap(), t_matrix(&b, &g).unwrap(), t_matrix(&c, &g).unwrap());
            for e in &t {
                let (p, r, s) = (
                    ia.iter().position(|&x| x == e.i).unwrap(),
                    ib.iter().position(|&x| x == e.j).unwrap(),
                    ic.iter().position(|&x| x == e.k).unwrap(),
                );
                let mut acc = Complex64::zero();
                for f in &t {
                    let (p2, r2, s2) = (
                        ia.iter().position(|&x| x == f.i).unwrap(),
                        ib.iter().position(|&x| x == f.j).unwrap(),
                        ic.iter().position(|&x| x == f.k).unwrap(),
                    );
                    acc += ta[(p, p2)] * tb[(r, r2)] * tc[(s, s2)] * f.value;
                }
                assert!((acc - e.value).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn printed_display_is_reported() {
        let cmp = compare_printed_threej(&w(1, 0), &w(1, 0), &w(-1, -1)).unwrap();
        assert!(cmp.max_abs_diff >= 0.0);
        assert!(compare_printed_threej(&w(2, 0), &w(0, 0), &w(-1, -1)).is_none());
    }

    fn point(rng: &mut ChaCha8Rng, scale: f64) -> AppellPoint {
        let near_id = |rng: &mut ChaCha8Rng| {
            let mut m = random_mat(rng);
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v *= scale;
                    if i == j {
                        *v += 1.0;
                    }
                }
            }
            m
        };
        AppellPoint { a: Complex64::new(1.0, 0.0), b: Complex64::new(1.2, 0.0), x: near_id(rng), y: near_id(rng), z: near_id(rng) }
    }

    #[test]
    fn appell_trivial_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = point(&mut rng, 0.1);
        let r = appell_series(&[0.0; 5], &p, 0).unwrap();
        assert_eq!(r.terms, 1);
        assert!((r.value - Complex64::one()).norm() < 1e-14);
    }

    #[test]
    fn appell_terms_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = [0.3, -0.4, 0.25, 0.6, -0.15];
        let p = point(&mut rng, 0.2);
        let (u, v) = (random_unitary(&mut rng), random_unitary(&mut rng));
        let q = AppellPoint {
            a: p.a,
            b: p.b,
            x: mul2(&mul2(&u, &p.x), &v),
            y: mul2(&mul2(&u, &p.y), &v),
            z: mul2(&mul2(&u, &p.z), &v),
        };
        let scale = det2(&u) * det2(&v);
        for idx in appell_indices(3) {
            let t0 = invariant_matrix_element(&idx.lambda, &idx.mu, &idx.nu, &p.x, &p.y, &p.z).unwrap();
            let t1 = invariant_matrix_element(&idx.lambda, &idx.mu, &idx.nu, &q.x, &q.y, &q.z).unwrap();
            // det(u)^{|λ|+|μ|+|ν|} det(v)^{…} = 1
            assert!((t0 - t1).norm() < 1e-8 * (1.0 + t0.norm()), "{idx:?}");
            let c0 = appell_term(&idx, &s, &p).unwrap();
            let c1 = appell_term(&idx, &s, &q).unwrap();
            let chi = cpow(scale, s[2] + s[3] + s[4]);
            // the character factor only enters through |x|^{s3}|y|^{s4}|z|^{s5}
            if c0.norm() > 1e-14 {
                let ratio = c1 / c0;
                assert!((ratio.norm() - chi.norm()).abs() < 1e-8, "{idx:?}");
            }
        }
    }

    #[test]
    fn appell_scalar_terms_match_triple_sum() {
        let s = [0.35, -0.2, 0.15, 0.45, -0.3];
        let (cx, cy, cz) = (1.1, 0.9, 1.3);
        let p = AppellPoint {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.8, 0.0),
            x: mat2(cx, 0.0, 0.0, cx),
            y: mat2(cy, 0.0, 0.0, cy),
            z: mat2(cz, 0.0, 0.0, cz),
        };
        let mut series = Complex64::zero();
        for idx in appell_indices(8) {
            let scalar = [&idx.lambda, &idx.mu, &idx.nu].iter().all(|w| w.parts()[0] == w.parts()[1]);
            if scalar {
                series += appell_term(&idx, &s, &p).unwrap();
            }
        }
        // direct sum over λ=(l,l), μ=(u,u), ν=(v,v) with l+u+v = 0
        let mut oracle = 0.0;
        for u in -4i64..=4 {
            for v in -4i64..=4 {
                let l = -u - v;
                let idx = AppellIndex { lambda: w(l, l), mu: w(u, u), nu: w(v, v) };
                if idx.order() > 8 {
                    continue;
                }
                let m = (2 * u + 4 * v) as f64;
                let g = rgamma_f64(m + s[0] + 1.0)
                    * rgamma_f64(-m + s[1] + 1.0)
                    * rgamma_f64(l as f64 + s[2] + 2.0) * rgamma_f64(l as f64 + s[2] + 1.0)
                    * rgamma_f64(u as f64 + s[3] + 2.0) * rgamma_f64(u as f64 + s[3] + 1.0)
                    * rgamma_f64(v as f64 + s[4] + 2.0) * rgamma_f64(v as f64 + s[4] + 1.0);
                oracle += g
                    * 1.0f64.powf(m + s[0])
                    * 0.8f64.powf(-m + s[1])
                    * (cx * cx).powf(l as f64 + s[2])
                    * (cy * cy).powf(u as f64 + s[3])
                    * (cz * cz).powf(v as f64 + s[4]);
            }
        }
        assert!((series.re - oracle).abs() < 1e-10 * (1.0 + oracle.abs()), "{series} vs {oracle}");
        assert!(series.im.abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn selection_rule(i in -3i64..4, j in -3i64..4, k in -3i64..4) {
            prop_assume!(i + j + k != 0);
            prop_assert_eq!(threej(&w(3, -3), &w(3, -3), &w(3, -3), i, j, k).unwrap(), 0.0);
        }
    }
}
