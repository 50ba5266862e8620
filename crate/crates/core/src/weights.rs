//! Dominant weights of GL_n, their rational shifts, and bounded enumeration.
//!
//! - `DominantWeight`: weakly decreasing integer vector; negative parts allowed.
//! - `ShiftedWeight`: a dominant weight plus a rational multiple of (1,...,1),
//!   kept in a normal form with shift in [0,1).
//! - Weyl dimension formula, duals, determinant twists, Pieri neighbours.
//! - Graded enumeration of tuples of partitions with a fixed total size.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// A weakly decreasing integer vector labelling an irreducible GL_n module.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DominantWeight {
    parts: Vec<i64>,
}

impl TryFrom<Vec<i64>> for DominantWeight {
    type Error = Error;
    fn try_from(parts: Vec<i64>) -> Result<Self> {
        DominantWeight::new(parts)
    }
}

impl From<DominantWeight> for Vec<i64> {
    fn from(w: DominantWeight) -> Self {
        w.parts
    }
}

impl fmt::Debug for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Graded order: by length, then total size, then reverse lexicographic on
/// parts, so (2,0) sorts before (1,1).
impl Ord for DominantWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then(self.size().cmp(&other.size()))
            .then(other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for DominantWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl DominantWeight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidWeight("empty weight".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidWeight(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(DominantWeight { parts })
    }

    /// Constructor for literals known to be dominant; panics otherwise.
    pub fn from_slice(parts: &[i64]) -> Self {
        Self::new(parts.to_vec()).expect("dominant weight")
    }

    pub fn zero(n: usize) -> Self {
        DominantWeight { parts: vec![0; n] }
    }

    /// A partition padded with zeros to length n.
    pub fn padded(parts: &[i64], n: usize) -> Result<Self> {
        if parts.len() > n {
            return Err(Error::InvalidWeight(format!("{parts:?} has more than {n} parts")));
        }
        let mut v = parts.to_vec();
        v.resize(n, 0);
        Self::new(v)
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    /// |α| = Σ α_i.
    pub fn size(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// Σ |α_i|.
    pub fn l1(&self) -> i64 {
        self.parts.iter().map(|p| p.abs()).sum()
    }

    pub fn last(&self) -> i64 {
        *self.parts.last().unwrap()
    }

    pub fn first(&self) -> i64 {
        self.parts[0]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.last() >= 0
    }

    /// Weyl dimension d_n(α) = Π_{i<j}(α_i-α_j+j-i)/(j-i).
    pub fn dimension(&self) -> BigInt {
        let n = self.n();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for i in 0..n {
            for j in (i + 1)..n {
                num *= BigInt::from(self.parts[i] - self.parts[j] + (j - i) as i64);
                den *= BigInt::from((j - i) as i64);
            }
        }
        num / den
    }

    /// α^- = (-α_n, ..., -α_1).
    pub fn dual(&self) -> Self {
        DominantWeight { parts: self.parts.iter().rev().map(|p| -p).collect() }
    }

    /// α + s(1,...,1).
    pub fn det_shift(&self, s: i64) -> Self {
        DominantWeight { parts: self.parts.iter().map(|p| p + s).collect() }
    }

    /// α + e_i when dominant.
    pub fn add_unit(&self, i: usize) -> Option<Self> {
        if i > 0 && self.parts[i - 1] == self.parts[i] {
            return None;
        }
        let mut p = self.parts.clone();
        p[i] += 1;
        Some(DominantWeight { parts: p })
    }

    /// α - e_i when dominant.
    pub fn sub_unit(&self, i: usize) -> Option<Self> {
        if i + 1 < self.n() && self.parts[i + 1] == self.parts[i] {
            return None;
        }
        let mut p = self.parts.clone();
        p[i] -= 1;
        Some(DominantWeight { parts: p })
    }

    /// All dominant α + e_i.
    pub fn pieri_up(&self) -> Vec<Self> {
        (0..self.n()).filter_map(|i| self.add_unit(i)).collect()
    }

    /// All dominant α - e_i.
    pub fn pieri_down(&self) -> Vec<Self> {
        (0..self.n()).filter_map(|i| self.sub_unit(i)).collect()
    }

    /// Componentwise sum with another weight of the same length.
    pub fn add(&self, other: &Self) -> Self {
        DominantWeight {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect(),
        }
    }

    /// Nonzero parts (for a nonnegative weight, the underlying partition).
    pub fn partition(&self) -> Vec<i64> {
        self.parts.iter().copied().filter(|&p| p != 0).collect()
    }
}

pub fn dimension(a: &DominantWeight) -> BigInt {
    a.dimension()
}

pub fn dual(a: &DominantWeight) -> DominantWeight {
    a.dual()
}

pub fn det_shift(a: &DominantWeight, s: i64) -> DominantWeight {
    a.det_shift(s)
}

pub fn pieri_up(a: &DominantWeight) -> Vec<DominantWeight> {
    a.pieri_up()
}

pub fn pieri_down(a: &DominantWeight) -> Vec<DominantWeight> {
    a.pieri_down()
}

/// Partitions of `m` with at most `max_parts` parts, largest first in
/// lexicographic order, padded to length `max_parts`.
pub fn partitions(m: i64, max_parts: usize) -> Vec<Vec<i64>> {
    fn rec(rem: i64, max_part: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            let mut v = cur.clone();
            v.resize(cur.len() + slots, 0);
            out.push(v);
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    if max_parts == 0 {
        if m == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(m, m, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Nonnegative dominant weights of length n and size m.
pub fn nonneg_weights(m: i64, n: usize) -> Vec<DominantWeight> {
    partitions(m, n).into_iter().map(|p| DominantWeight { parts: p }).collect()
}

/// All dominant weights of length n with every part in [lo, hi].
pub fn weights_in_box(n: usize, lo: i64, hi: i64) -> Vec<DominantWeight> {
    fn rec(n: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<DominantWeight>) {
        if cur.len() == n {
            out.push(DominantWeight { parts: cur.clone() });
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for p in (lo..=top).rev() {
            cur.push(p);
            rec(n, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        rec(n, lo, hi, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Tuples of nonnegative dominant weights (one per block, lengths `blocks`)
/// with total size `total`, in descending lexicographic order of the
/// concatenated parts. Empty for negative totals.
pub fn enumerate_bounded(blocks: &[usize], total: i64) -> Vec<Vec<DominantWeight>> {
    fn rec(
        blocks: &[usize],
        rem: i64,
        cur: &mut Vec<DominantWeight>,
        out: &mut Vec<Vec<DominantWeight>>,
    ) {
        match blocks.split_first() {
            None => {
                if rem == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&d, rest)) => {
                if rest.is_empty() {
                    for w in nonneg_weights(rem, d) {
                        cur.push(w);
                        rec(rest, 0, cur, out);
                        cur.pop();
                    }
                    return;
                }
                for m in (0..=rem).rev() {
                    for w in nonneg_weights(m, d) {
                        cur.push(w);
                        rec(rest, rem - m, cur, out);
                        cur.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    rec(blocks, total, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let ca: Vec<i64> = a.iter().flat_map(|w| w.parts.iter().copied()).collect();
        let cb: Vec<i64> = b.iter().flat_map(|w| w.parts.iter().copied()).collect();
        cb.cmp(&ca)
    });
    out
}

/// A dominant weight shifted by a rational multiple of (1,...,1).
///
/// Normal form: `0 <= shift < 1`, with the integer part folded into `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftedWeight {
    base: DominantWeight,
    shift: Q,
}

impl ShiftedWeight {
    pub fn new(base: DominantWeight, shift: Q) -> Self {
        let fl = shift.floor();
        let k: i64 = fl.to_integer().try_into().expect("shift fits in i64");
        ShiftedWeight { base: base.det_shift(k), shift: shift - fl }
    }

    pub fn integral(base: DominantWeight) -> Self {
        ShiftedWeight { base, shift: Q::zero() }
    }

    pub fn base(&self) -> &DominantWeight {
        &self.base
    }

    pub fn shift(&self) -> &Q {
        &self.shift
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// The rational parts α_j.
    pub fn parts(&self) -> Vec<Q> {
        self.base.parts.iter().map(|&p| q(p) + &self.shift).collect()
    }

    /// Shift every part by a rational amount.
    pub fn plus(&self, t: &Q) -> Self {
        ShiftedWeight::new(self.base.clone(), &self.shift + t)
    }

    pub fn add_unit(&self, i: usize) -> Option<Self> {
        self.base.add_unit(i).map(|b| ShiftedWeight { base: b, shift: self.shift.clone() })
    }

    pub fn is_integral(&self) -> bool {
        self.shift.is_zero()
    }
}
