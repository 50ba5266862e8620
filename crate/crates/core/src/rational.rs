//! Exact rational helpers and small dense linear algebra over Q and Z.
//!
//! - `Q` is an arbitrary-precision rational.
//! - Row reduction, rank, affine solution sets and null spaces over Q.
//! - Integer row echelon forms for kernel lattices and lattice membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for huge numerators/denominators
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact integer power of a rational; negative exponents invert.
pub fn qpow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space {x : A x = 0}; `ncols` is needed when A has no rows.
pub fn nullspace(a: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Affine solution set of A x = b: a particular solution and a kernel basis,
/// or `None` when the system is inconsistent.
pub fn solve_affine(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][ncols].clone();
    }
    Some((x, nullspace(a, ncols)))
}

/// Scale a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * qi(&l)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Integer row echelon form by unimodular row operations. Rows are reduced in
/// place over the first `width` columns; trailing columns ride along.
/// Returns the number of nonzero leading rows.
pub fn integer_echelon(m: &mut Vec<Vec<BigInt>>, width: usize) -> usize {
    let rows = m.len();
    let mut r = 0;
    for c in 0..width {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut done = true;
            for i in (r + 1)..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].div_floor(&m[r][c]);
                for j in 0..m[i].len() {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows).any(|i| !m[i][c].is_zero()) {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            r += 1;
        }
    }
    r
}

/// Lattice basis of {x in Z^n : A x = 0} for an integer matrix A with n columns.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let c = a.len();
    // rows: (column j of A | e_j)
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let r = integer_echelon(&mut m, c);
    m[r..].iter().map(|row| row[c..].to_vec()).collect()
}

/// Whether the rational vector `v` lies in the Z-span of the integer generators.
pub fn lattice_contains(gens: &[Vec<BigInt>], v: &[Q]) -> bool {
    let width = v.len();
    let mut m = gens.to_vec();
    let r = integer_echelon(&mut m, width);
    let mut rest = v.to_vec();
    for row in m.iter().take(r) {
        let Some(p) = (0..width).find(|&c| !row[c].is_zero()) else { continue };
        let coef = &rest[p] / qi(&row[p]);
        if !is_integer(&coef) {
            return false;
        }
        for c in 0..width {
            rest[c] -= &coef * qi(&row[c]);
        }
    }
    rest.iter().all(|x| x.is_zero())
}

/// Determinant of a square rational matrix by elimination.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn trace(a: &[Vec<Q>]) -> Q {
    (0..a.len()).fold(Q::zero(), |acc, i| acc + &a[i][i])
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Serialized rational: numerator and denominator as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RationalRecord {
    pub num: String,
    pub den: String,
}

impl From<&Q> for RationalRecord {
    fn from(x: &Q) -> Self {
        RationalRecord { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

impl TryFrom<&RationalRecord> for Q {
    type Error = String;

    fn try_from(r: &RationalRecord) -> std::result::Result<Q, String> {
        let num: BigInt = r.num.trim().parse().map_err(|_| format!("bad numerator {:?}", r.num))?;
        let den: BigInt = r.den.trim().parse().map_err(|_| format!("bad denominator {:?}", r.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Q::new(num, den))
    }
}

/// Accepted input forms: a {"num","den"} record or a plain JSON integer.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum RationalInput {
    Record(RationalRecord),
    Int(i64),
}

/// `#[serde(with = "qserde")]` for a single rational.
pub mod qserde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRecord::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        match RationalInput::deserialize(d)? {
            RationalInput::Record(r) => Q::try_from(&r).map_err(serde::de::Error::custom),
            RationalInput::Int(i) => Ok(q(i)),
        }
    }
}

/// `#[serde(with = "opt_qserde")]` for an optional rational.
pub mod opt_qserde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(RationalRecord::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<RationalInput>::deserialize(d)?
            .map(|v| match v {
                RationalInput::Record(r) => Q::try_from(&r).map_err(serde::de::Error::custom),
                RationalInput::Int(i) => Ok(q(i)),
            })
            .transpose()
    }
}

/// `#[serde(with = "qvec_serde")]` for a vector of rationals.
pub mod qvec_serde {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter().map(RationalRecord::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<RationalInput>::deserialize(d)?
            .into_iter()
            .map(|v| match v {
                RationalInput::Record(r) => Q::try_from(&r).map_err(serde::de::Error::custom),
                RationalInput::Int(i) => Ok(q(i)),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_quadratic_configuration() {
        // columns (1,0),(1,1),(1,2)
        let a = vec![zi(&[1, 1, 1]), zi(&[0, 1, 2])];
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let s: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(s == vec![1, -2, 1] || s == vec![-1, 2, -1]);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has kernel generated by (2,-1), not (4,-2)
        let k = integer_kernel(&[zi(&[2, 4])], 2);
        assert_eq!(k.len(), 1);
        let g = k[0].iter().fold(BigInt::zero(), |a, x| a.gcd(x));
        assert!(g.is_one());
    }

    #[test]
    fn membership() {
        let gens = vec![zi(&[2, 0]), zi(&[1, 1])];
        assert!(lattice_contains(&gens, &[q(3), q(1)]));
        assert!(!lattice_contains(&gens, &[q(1), q(0)]));
        assert!(!lattice_contains(&gens, &[qf(1, 2), q(0)]));
    }

    #[test]
    fn affine_solve_and_inverse() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let (x, k) = solve_affine(&a, &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(k.is_empty());
        assert!(solve_affine(&[vec![q(1)], vec![q(2)]], &[q(1), q(1)], 1).is_none());
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(2));
        assert_eq!(det(&a), q(-2));
    }
}
