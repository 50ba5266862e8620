//! Schur polynomial calculus on GL_n at the level of characters.
//!
//! - `ClassFunction`: finite Schur expansion with exact coefficients.
//! - Evaluation by bialternant ratio, with a Jacobi-Trudi fallback.
//! - Littlewood-Richardson products via LR tableaux (memoized).
//! - Invariant multiplicities, hook-length dimensions, Weyl reciprocity.
//! - The derivative operator D = Σ ∂/∂t_i in the Schur basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, q, qi, qpow, Q};
use crate::weights::{nonneg_weights, DominantWeight};

/// A conjugation-invariant function on GL_n written as Σ c_α s_α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    n: usize,
    terms: BTreeMap<DominantWeight, Q>,
}

/// Serialized form of one Schur term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerm {
    pub weight: DominantWeight,
    pub num: String,
    pub den: String,
}

impl ClassFunction {
    pub fn zero(n: usize) -> Self {
        ClassFunction { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::schur(DominantWeight::zero(n))
    }

    pub fn schur(alpha: DominantWeight) -> Self {
        let mut f = Self::zero(alpha.n());
        f.add_term(alpha, Q::one());
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<DominantWeight, Q> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DominantWeight, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &DominantWeight) -> Q {
        self.terms.get(alpha).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, alpha: DominantWeight, c: Q) {
        assert_eq!(alpha.n(), self.n, "weight length must match block size");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(alpha.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    /// Keep only terms with |α| ≤ m.
    pub fn truncate(&self, m: i64) -> Self {
        ClassFunction {
            n: self.n,
            terms: self.terms.iter().filter(|(a, _)| a.size() <= m).map(|(a, c)| (a.clone(), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        lr_multiply(self, other)
    }

    /// Exact value at a rational eigenvalue vector.
    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        let mut total = Q::zero();
        for (a, c) in &self.terms {
            total += c * schur_eval(a, x)?;
        }
        Ok(total)
    }

    pub fn to_records(&self) -> Vec<ClassTerm> {
        self.terms
            .iter()
            .map(|(a, c)| ClassTerm { weight: a.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
            .collect()
    }

    pub fn from_records(n: usize, records: &[ClassTerm]) -> Result<Self> {
        let mut f = Self::zero(n);
        for r in records {
            if r.weight.n() != n {
                return Err(Error::Mismatch(format!("weight {} has length != {n}", r.weight)));
            }
            let num: BigInt = r.num.parse().map_err(|_| Error::Domain(format!("bad numerator {}", r.num)))?;
            let den: BigInt = r.den.parse().map_err(|_| Error::Domain(format!("bad denominator {}", r.den)))?;
            if den.is_zero() {
                return Err(Error::Domain("zero denominator".into()));
            }
            f.add_term(r.weight.clone(), Q::new(num, den));
        }
        Ok(f)
    }
}

/// Arithmetic needed by determinant-based Schur evaluation.
pub trait Field: Clone {
    fn f_zero() -> Self;
    fn f_one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Pivot quality; zero means unusable.
    fn magnitude(&self) -> f64;
    /// Whether comparisons must be exact.
    fn exact() -> bool;
    fn powi(&self, e: i64) -> Self {
        let mut acc = Self::f_one();
        let base = if e < 0 { Self::f_one().div(self) } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

impl Field for Q {
    fn f_zero() -> Self {
        <Q as Zero>::zero()
    }
    fn f_one() -> Self {
        <Q as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        q(v)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() { 0.0 } else { 1.0 }
    }
    fn exact() -> bool {
        true
    }
    fn powi(&self, e: i64) -> Self {
        qpow(self, e)
    }
}

impl Field for f64 {
    fn f_zero() -> Self {
        0.0
    }
    fn f_one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn exact() -> bool {
        false
    }
}

impl Field for Complex64 {
    fn f_zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn f_one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn exact() -> bool {
        false
    }
}

/// Determinant by Gaussian elimination (first nonzero pivot for exact
/// fields, largest pivot otherwise).
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = F::f_one();
    for c in 0..n {
        let p = if F::exact() {
            (c..n).find(|&i| a[i][c].magnitude() > 0.0)
        } else {
            (c..n).max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()))
                .filter(|&i| a[i][c].magnitude() > 0.0)
        };
        let Some(p) = p else { return F::f_zero() };
        if p != c {
            a.swap(p, c);
            d = F::f_zero().sub(&d);
        }
        d = d.mul(&a[c][c]);
        for i in (c + 1)..n {
            if a[i][c].magnitude() == 0.0 {
                continue;
            }
            let f = a[i][c].div(&a[c][c]);
            for j in c..n {
                let t = a[c][j].mul(&f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    d
}

/// Complete homogeneous symmetric functions h_0..h_k of the given values.
fn complete_homogeneous<F: Field>(x: &[F], k: usize) -> Vec<F> {
    let mut h = vec![F::f_zero(); k + 1];
    h[0] = F::f_one();
    for xi in x {
        for d in 1..=k {
            let t = h[d - 1].mul(xi);
            h[d] = h[d].add(&t);
        }
    }
    h
}

/// Jacobi-Trudi determinant det(h_{λ_i - i + j}) for a partition λ.
fn jacobi_trudi<F: Field>(lambda: &[i64], h: &[F]) -> F {
    let parts: Vec<i64> = lambda.iter().copied().filter(|&p| p > 0).collect();
    let l = parts.len();
    if l == 0 {
        return F::f_one();
    }
    let m: Vec<Vec<F>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let k = parts[i] - i as i64 + j as i64;
                    if k < 0 { F::f_zero() } else { h[k as usize].clone() }
                })
                .collect()
        })
        .collect();
    determinant(&m)
}

fn schur_nonneg<F: Field>(lambda: &[i64], x: &[F]) -> F {
    let n = x.len();
    let distinct = (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let d = x[i].sub(&x[j]).magnitude();
            if F::exact() {
                d > 0.0
            } else {
                d > 1e-6 * (1.0 + x[i].magnitude().max(x[j].magnitude()))
            }
        })
    });
    if distinct {
        let num: Vec<Vec<F>> = x
            .iter()
            .map(|xi| (0..n).map(|j| xi.powi(lambda[j] + (n - 1 - j) as i64)).collect())
            .collect();
        let den: Vec<Vec<F>> =
            x.iter().map(|xi| (0..n).map(|j| xi.powi((n - 1 - j) as i64)).collect()).collect();
        return determinant(&num).div(&determinant(&den));
    }
    let k = (lambda.first().copied().unwrap_or(0).max(0) as usize) + n;
    jacobi_trudi(lambda, &complete_homogeneous(x, k))
}

/// s_α(x_1, ..., x_n) over any supported field.
pub fn schur_eval_generic<F: Field>(alpha: &DominantWeight, x: &[F]) -> Result<F> {
    if x.len() != alpha.n() {
        return Err(Error::Mismatch(format!("{} eigenvalues for a weight of length {}", x.len(), alpha.n())));
    }
    let k = alpha.last();
    if k < 0 && x.iter().any(|v| v.magnitude() == 0.0) {
        return Err(Error::Domain(format!("zero eigenvalue with negative weight {alpha}")));
    }
    let base = alpha.det_shift(-k);
    let s = schur_nonneg(base.parts(), x);
    let detp = x.iter().fold(F::f_one(), |acc, v| acc.mul(&v.powi(k)));
    Ok(s.mul(&detp))
}

/// Exact s_α(x) for rational eigenvalues.
pub fn schur_eval(alpha: &DominantWeight, x: &[Q]) -> Result<Q> {
    schur_eval_generic(alpha, x)
}

pub fn schur_eval_f64(alpha: &DominantWeight, x: &[f64]) -> Result<f64> {
    schur_eval_generic(alpha, x)
}

pub fn schur_eval_complex(alpha: &DominantWeight, x: &[Complex64]) -> Result<Complex64> {
    schur_eval_generic(alpha, x)
}

/// s_α(M) for a square matrix, via power-sum traces, Newton's identities and
/// Jacobi-Trudi. No eigenvalues are needed.
pub fn schur_of_matrix<F: Field>(alpha: &DominantWeight, m: &[Vec<F>]) -> Result<F> {
    let n = m.len();
    if n != alpha.n() {
        return Err(Error::Mismatch(format!("{n}x{n} matrix for a weight of length {}", alpha.n())));
    }
    let k = alpha.last();
    let base = alpha.det_shift(-k);
    let top = (base.first().max(0) as usize) + n;
    // power sums p_1..p_top
    let mut p = vec![F::f_zero(); top + 1];
    let mut pw: Vec<Vec<F>> = m.to_vec();
    for (d, pd) in p.iter_mut().enumerate().skip(1) {
        if d > 1 {
            pw = mat_mul(&pw, m);
        }
        *pd = (0..n).fold(F::f_zero(), |acc, i| acc.add(&pw[i][i]));
    }
    let mut h = vec![F::f_zero(); top + 1];
    h[0] = F::f_one();
    for d in 1..=top {
        let mut acc = F::f_zero();
        for i in 1..=d {
            acc = acc.add(&p[i].mul(&h[d - i]));
        }
        h[d] = acc.div(&F::from_i64(d as i64));
    }
    let s = jacobi_trudi(base.parts(), &h);
    if k == 0 {
        return Ok(s);
    }
    let dm = determinant(m);
    if dm.magnitude() == 0.0 && k < 0 {
        return Err(Error::Domain("singular matrix with negative weight".into()));
    }
    Ok(s.mul(&dm.powi(k)))
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(F::f_zero(), |acc, l| acc.add(&a[i][l].mul(&b[l][j])))).collect())
        .collect()
}

type LrKey = (Vec<i64>, Vec<i64>, usize);
type LrTable = BTreeMap<Vec<i64>, u64>;

fn lr_cache() -> &'static Mutex<HashMap<LrKey, Arc<LrTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<LrKey, Arc<LrTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Littlewood-Richardson coefficients c^ν_{λμ} for partitions λ, μ (padded to
/// length n), restricted to ν with at most n parts.
pub fn lr_coefficients(lambda: &[i64], mu: &[i64], n: usize) -> Arc<LrTable> {
    let key = (lambda.to_vec(), mu.to_vec(), n);
    if let Some(t) = lr_cache().lock().unwrap().get(&key) {
        return t.clone();
    }
    let table = Arc::new(lr_compute(lambda, mu, n));
    lr_cache().lock().unwrap().insert(key, table.clone());
    table
}

fn lr_compute(lambda: &[i64], mu: &[i64], n: usize) -> LrTable {
    let mu: Vec<usize> = mu.iter().map(|&m| m as usize).filter(|&m| m > 0).collect();
    let lam: Vec<usize> = lambda.iter().map(|&l| l as usize).collect();
    let total: usize = mu.iter().sum();
    let mut out = LrTable::new();
    let mut used = vec![0usize; mu.len() + 1];
    let mut shape: Vec<usize> = Vec::with_capacity(n);
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n);
    lr_rows(&lam, &mu, n, total, 0, &mut used, &mut shape, &mut rows, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn lr_rows(
    lam: &[usize],
    mu: &[usize],
    n: usize,
    remaining: usize,
    r: usize,
    used: &mut Vec<usize>,
    shape: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
    out: &mut LrTable,
) {
    if r == n {
        if remaining == 0 {
            *out.entry(shape.iter().map(|&x| x as i64).collect()).or_insert(0) += 1;
        }
        return;
    }
    let lr = lam.get(r).copied().unwrap_or(0);
    let cap = if r == 0 { lr + remaining } else { shape[r - 1] };
    if lr > cap {
        return;
    }
    let max_len = (cap - lr).min(remaining);
    // labels usable in row r: 1..=min(r+1, len(mu))
    let k = (r + 1).min(mu.len());
    let mut counts = vec![0usize; k];
    lr_counts(lam, mu, n, remaining, r, lr, max_len, 0, &mut counts, used, shape, rows, out);
}

#[allow(clippy::too_many_arguments)]
fn lr_counts(
    lam: &[usize],
    mu: &[usize],
    n: usize,
    remaining: usize,
    r: usize,
    lr: usize,
    max_len: usize,
    idx: usize,
    counts: &mut Vec<usize>,
    used: &mut Vec<usize>,
    shape: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
    out: &mut LrTable,
) {
    if idx == counts.len() {
        let len: usize = counts.iter().sum();
        // build the row: cells < lr belong to λ (label 0)
        let mut row = vec![0usize; lr + len];
        let mut c = lr;
        for (v, &cnt) in counts.iter().enumerate() {
            for _ in 0..cnt {
                row[c] = v + 1;
                c += 1;
            }
        }
        // column strictness against the previous row
        if r > 0 {
            let prev = &rows[r - 1];
            for col in lr..row.len() {
                if col >= prev.len() || prev[col] >= row[col] {
                    return;
                }
            }
        }
        // lattice condition, reading right to left
        let mut u = used.clone();
        for col in (lr..row.len()).rev() {
            let v = row[col];
            u[v] += 1;
            if v > 1 && u[v] > u[v - 1] {
                return;
            }
        }
        let saved = std::mem::replace(used, u);
        shape.push(row.len());
        rows.push(row);
        lr_rows(lam, mu, n, remaining - len, r + 1, used, shape, rows, out);
        rows.pop();
        shape.pop();
        *used = saved;
        return;
    }
    let avail = mu[idx] - used[idx + 1];
    let sofar: usize = counts[..idx].iter().sum();
    for cnt in 0..=avail.min(max_len - sofar) {
        counts[idx] = cnt;
        lr_counts(lam, mu, n, remaining, r, lr, max_len, idx + 1, counts, used, shape, rows, out);
    }
    counts[idx] = 0;
}

/// s_α · s_β in GL_n, negative parts handled by determinant shifts.
pub fn schur_product(a: &DominantWeight, b: &DominantWeight) -> ClassFunction {
    let n = a.n();
    assert_eq!(n, b.n());
    let (ka, kb) = (a.last(), b.last());
    let pa = a.det_shift(-ka);
    let pb = b.det_shift(-kb);
    let table = lr_coefficients(pa.parts(), pb.parts(), n);
    let mut out = ClassFunction::zero(n);
    for (nu, c) in table.iter() {
        let w = DominantWeight::from_slice(nu).det_shift(ka + kb);
        out.add_term(w, q(*c as i64));
    }
    out
}

/// Product of class functions in the Schur basis.
pub fn lr_multiply(f: &ClassFunction, g: &ClassFunction) -> ClassFunction {
    assert_eq!(f.n, g.n, "class functions on different GL_n");
    let mut out = ClassFunction::zero(f.n);
    for (a, ca) in &f.terms {
        for (b, cb) in &g.terms {
            let c = ca * cb;
            for (nu, m) in schur_product(a, b).terms {
                out.add_term(nu, &m * &c);
            }
        }
    }
    out
}

/// Multiplicity of the trivial module in the tensor product of the given
/// irreducibles of GL_n.
pub fn invariant_dim(weights: &[DominantWeight], n: usize) -> Result<u64> {
    if weights.iter().any(|w| w.n() != n) {
        return Err(Error::Mismatch(format!("all weights must have length {n}")));
    }
    if weights.is_empty() {
        return Ok(1);
    }
    if weights.iter().map(|w| w.size()).sum::<i64>() != 0 {
        return Ok(0);
    }
    let (last, rest) = weights.split_last().unwrap();
    let mut acc = ClassFunction::one(n);
    for w in rest {
        acc = lr_multiply(&acc, &ClassFunction::schur(w.clone()));
    }
    // coefficient of the trivial weight in acc · s_last equals that of last^- in acc
    let c = acc.coefficient(&last.dual());
    Ok(c.to_integer().try_into().expect("multiplicity fits in u64"))
}

/// Hook lengths of a partition.
fn hooks(parts: &[i64]) -> Vec<i64> {
    let p: Vec<i64> = parts.iter().copied().filter(|&x| x > 0).collect();
    let mut out = Vec::new();
    for (i, &row) in p.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = p[i + 1..].iter().filter(|&&r| r > j).count() as i64;
            out.push(arm + leg + 1);
        }
    }
    out
}

/// Dimension w_α of the irreducible symmetric-group module, by hook lengths.
pub fn symmetric_group_dim(alpha: &DominantWeight) -> Result<BigInt> {
    if !alpha.is_nonnegative() {
        return Err(Error::Domain(format!("{alpha} has a negative part")));
    }
    let m = alpha.size() as u64;
    let prod = hooks(alpha.parts()).iter().fold(BigInt::one(), |acc, &h| acc * BigInt::from(h));
    Ok(factorial(m) / prod)
}

/// tr(x)^m = Σ_{|α|=m} w_α s_α on GL_n.
pub fn power_trace_expand(m: u64, n: usize) -> ClassFunction {
    let mut out = ClassFunction::zero(n);
    for a in nonneg_weights(m as i64, n) {
        let w = symmetric_group_dim(&a).expect("nonnegative");
        out.add_term(a, qi(&w));
    }
    out
}

/// D s_α = Σ_{β = α - e_i dominant} (α_i + n - i) s_β, extended linearly.
pub fn apply_d(f: &ClassFunction) -> ClassFunction {
    let n = f.n;
    let mut out = ClassFunction::zero(n);
    for (a, c) in &f.terms {
        for i in 0..n {
            if let Some(b) = a.sub_unit(i) {
                // 1-based index i+1: coefficient α_i + n - i
                let k = a.parts()[i] + (n - 1 - i) as i64;
                out.add_term(b, c * q(k));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{power_sum_power, schur_polynomial, LaurentPoly};
    use crate::rational::qf;
    use crate::weights::weights_in_box;
    use proptest::prelude::*;

    fn w(p: &[i64]) -> DominantWeight {
        DominantWeight::from_slice(p)
    }

    fn s(p: &[i64]) -> ClassFunction {
        ClassFunction::schur(w(p))
    }

    #[test]
    fn evaluation_examples() {
        let (a, b) = (qf(2, 3), qf(-5, 7));
        assert_eq!(schur_eval(&w(&[1, 0]), &[a.clone(), b.clone()]).unwrap(), &a + &b);
        assert_eq!(schur_eval(&w(&[1, 1]), &[a.clone(), b.clone()]).unwrap(), &a * &b);
        assert_eq!(schur_eval(&w(&[2, 0]), &[q(1), q(1)]).unwrap(), q(3));
        assert!(schur_eval(&w(&[0, -1]), &[q(0), q(1)]).is_err());
        // repeated eigenvalues take the Jacobi-Trudi path
        assert_eq!(schur_eval(&w(&[2, 1, 0]), &[q(2), q(2), q(2)]).unwrap(), q(64));
    }

    #[test]
    fn product_examples() {
        assert_eq!(s(&[1, 0]).mul(&s(&[1, 0])), s(&[2, 0]).add(&s(&[1, 1])));
        assert_eq!(s(&[1, 0]).mul(&s(&[0, -1])), s(&[1, -1]).add(&s(&[0, 0])));
        assert_eq!(s(&[3, 1, -2]).mul(&ClassFunction::one(3)), s(&[3, 1, -2]));
        // c^{(3,2,1)}_{(2,1),(2,1)} = 2
        let p = s(&[2, 1, 0]).mul(&s(&[2, 1, 0]));
        assert_eq!(p.coefficient(&w(&[3, 2, 1])), q(2));
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(invariant_dim(&[w(&[1, 0]), w(&[0, -1])], 2).unwrap(), 1);
        assert_eq!(invariant_dim(&[w(&[1, 0]), w(&[1, 0]), w(&[-1, -1])], 2).unwrap(), 1);
        assert_eq!(invariant_dim(&[w(&[1, 0]), w(&[1, 0]), w(&[1, 0])], 2).unwrap(), 0);
    }

    #[test]
    fn symmetric_group_examples() {
        assert_eq!(symmetric_group_dim(&w(&[2, 0])).unwrap(), BigInt::from(1));
        assert_eq!(symmetric_group_dim(&w(&[1, 1])).unwrap(), BigInt::from(1));
        assert_eq!(symmetric_group_dim(&w(&[2, 1])).unwrap(), BigInt::from(2));
        for m in 0..=8 {
            assert_eq!(symmetric_group_dim(&w(&[m, 0, 0])).unwrap(), BigInt::from(1));
        }
        assert!(symmetric_group_dim(&w(&[1, -1])).is_err());
    }

    #[test]
    fn power_trace_examples() {
        assert_eq!(power_trace_expand(0, 3), ClassFunction::one(3));
        assert_eq!(power_trace_expand(2, 3), s(&[2, 0, 0]).add(&s(&[1, 1, 0])));
        let three = s(&[3, 0]).add(&s(&[2, 1]).scale(&q(2)));
        assert_eq!(power_trace_expand(3, 2), three);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(apply_d(&s(&[1, 0])), ClassFunction::one(2).scale(&q(2)));
        assert!(apply_d(&s(&[0, 0])).is_empty());
        assert_eq!(apply_d(&s(&[2, 0])), s(&[1, 0]).scale(&q(3)));
    }

    #[test]
    fn matrix_schur_matches_eigenvalues() {
        // upper triangular matrix with eigenvalues 2, -1/3
        let m = vec![vec![q(2), q(5)], vec![q(0), qf(-1, 3)]];
        for a in weights_in_box(2, -2, 3) {
            let by_eig = schur_eval(&a, &[q(2), qf(-1, 3)]).unwrap();
            assert_eq!(schur_of_matrix(&a, &m).unwrap(), by_eig, "{a}");
        }
    }

    #[test]
    fn float_and_complex_paths_agree() {
        let a = w(&[3, 1, -1]);
        let xr = [0.5, -1.25, 2.0];
        let exact = schur_eval(&a, &[qf(1, 2), qf(-5, 4), q(2)]).unwrap();
        let fl = schur_eval_f64(&a, &xr).unwrap();
        assert!((fl - crate::rational::to_f64(&exact)).abs() < 1e-12);
        let xc: Vec<Complex64> = xr.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        assert!((schur_eval_complex(&a, &xc).unwrap().re - fl).abs() < 1e-12);
    }

    fn small_cf(n: usize) -> impl Strategy<Value = ClassFunction> {
        let ws: Vec<DominantWeight> =
            weights_in_box(n, -1, 3).into_iter().filter(|a| a.l1() <= 5).collect();
        proptest::collection::vec((0..ws.len(), -3i64..4), 1..3).prop_map(move |picks| {
            let mut f = ClassFunction::zero(n);
            for (i, c) in picks {
                f.add_term(ws[i].clone(), q(c));
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn lr_commutative_associative(f in small_cf(3), g in small_cf(3), h in small_cf(3)) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn lr_matches_evaluation(f in small_cf(2), g in small_cf(2), x in 1i64..7, y in -6i64..-1) {
            let pt = [q(x), qf(y, 3)];
            let lhs = f.mul(&g).eval(&pt).unwrap();
            prop_assert_eq!(lhs, f.eval(&pt).unwrap() * g.eval(&pt).unwrap());
        }

        #[test]
        fn lr_four_matches_polynomials(f in small_cf(4), g in small_cf(4)) {
            let mut pf = LaurentPoly::zero(4);
            for (a, c) in f.iter() { pf = pf.add(&schur_polynomial(a).scale(c)); }
            let mut pg = LaurentPoly::zero(4);
            for (a, c) in g.iter() { pg = pg.add(&schur_polynomial(a).scale(c)); }
            prop_assert_eq!(pf.mul(&pg).to_schur().unwrap(), f.mul(&g));
        }
    }

    #[test]
    fn orthogonality_at_character_level() {
        for n in 1..=3 {
            let ws: Vec<DominantWeight> =
                weights_in_box(n, -5, 5).into_iter().filter(|a| a.l1() <= 5).collect();
            for a in &ws {
                for b in &ws {
                    let c = schur_product(a, b).coefficient(&DominantWeight::zero(n));
                    let expect = if *b == a.dual() { q(1) } else { q(0) };
                    assert_eq!(c, expect, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn weyl_reciprocity_against_monomials() {
        for n in 1..=4 {
            for m in 0..=8u64 {
                let expected = power_sum_power(n, m as u32).to_schur().unwrap();
                assert_eq!(power_trace_expand(m, n), expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn derivative_identity_small() {
        for n in 1..=3 {
            for a in weights_in_box(n, -2, 3).into_iter().filter(|a| a.l1() <= 4) {
                let direct = schur_polynomial(&a).total_derivative().to_schur().unwrap();
                assert_eq!(apply_d(&ClassFunction::schur(a.clone())), direct, "{a}");
            }
        }
    }
}
