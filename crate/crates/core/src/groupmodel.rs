//! The pair (H, A): a torus times GL blocks, and a list of representations.
//!
//! - Each representation is a torus character times at most one standard
//!   block representation, twisted by a power of det.
//! - Homogeneity test and homogenization.
//! - The affine space L_χ of admissible shifts.
//! - H-invariant dimensions of series terms.
//! - Truncated monoidal closure ⟨A⟩ by degree.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, solve_affine, Q};
use crate::symfunc::{invariant_dim, schur_product};
use crate::weights::DominantWeight;

/// H = (C^*)^k × GL_{n_1} × ... × GL_{n_m}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub torus_rank: usize,
    pub gl_blocks: Vec<usize>,
}

/// A character of the torus, optionally tensored with the standard
/// representation of one block twisted by det^twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub torus_char: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default)]
    pub twist: i64,
}

impl RepSpec {
    pub fn character(torus_char: &[i64]) -> Self {
        RepSpec { torus_char: torus_char.to_vec(), block: None, twist: 0 }
    }

    pub fn on_block(torus_char: &[i64], block: usize, twist: i64) -> Self {
        RepSpec { torus_char: torus_char.to_vec(), block: Some(block), twist }
    }
}

/// A term index (α, s): one weight and one shift per representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesIndex {
    pub alphas: Vec<DominantWeight>,
    #[serde(with = "crate::rational::qvec_serde")]
    pub s: Vec<Q>,
}

/// Label of an irreducible H-module: a torus character and one weight per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HLabel {
    pub torus: Vec<i64>,
    pub blocks: Vec<DominantWeight>,
}

impl HLabel {
    pub fn trivial(group: &GroupSpec) -> Self {
        HLabel { torus: vec![0; group.torus_rank], blocks: group.gl_blocks.iter().map(|&n| DominantWeight::zero(n)).collect() }
    }

    pub fn dual(&self) -> Self {
        HLabel { torus: self.torus.iter().map(|t| -t).collect(), blocks: self.blocks.iter().map(|b| b.dual()).collect() }
    }

    pub fn dimension(&self) -> BigInt {
        self.blocks.iter().fold(BigInt::one(), |acc, b| acc * b.dimension())
    }

    pub fn is_trivial(&self) -> bool {
        self.torus.iter().all(|&t| t == 0) && self.blocks.iter().all(|b| b.parts().iter().all(|&p| p == 0))
    }

    /// Irreducible constituents of self ⊗ other (without multiplicities).
    pub fn tensor(&self, other: &Self) -> BTreeSet<HLabel> {
        let torus: Vec<i64> = self.torus.iter().zip(&other.torus).map(|(a, b)| a + b).collect();
        let mut acc: Vec<Vec<DominantWeight>> = vec![vec![]];
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let prod: Vec<DominantWeight> = schur_product(a, b).terms().keys().cloned().collect();
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    prod.iter().map(move |w| {
                        let mut p = prefix.clone();
                        p.push(w.clone());
                        p
                    })
                })
                .collect();
        }
        acc.into_iter().map(|blocks| HLabel { torus: torus.clone(), blocks }).collect()
    }
}

impl fmt::Display for HLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.torus)?;
        for b in &self.blocks {
            write!(f, "⊗{b}")?;
        }
        Ok(())
    }
}

/// Outcome of the homogeneity test. On success `witness` holds the torus
/// element and the block scalars that act as the identity on every ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    pub homogeneous: bool,
    pub witness: Option<Vec<Q>>,
}

/// Parametrization s = particular + Σ c_i kernel_i of L_χ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    pub particular: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

/// The pair (H, A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupModel {
    pub group: GroupSpec,
    pub reps: Vec<RepSpec>,
}

impl GroupModel {
    pub fn new(group: GroupSpec, reps: Vec<RepSpec>) -> Result<Self> {
        let m = GroupModel { group, reps };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.group.gl_blocks.contains(&0) {
            return Err(Error::Config("GL blocks must have positive size".into()));
        }
        for (i, r) in self.reps.iter().enumerate() {
            if r.torus_char.len() != self.group.torus_rank {
                return Err(Error::Config(format!(
                    "reps[{i}].torus_char has length {} but torus_rank is {}",
                    r.torus_char.len(),
                    self.group.torus_rank
                )));
            }
            if let Some(b) = r.block {
                if b >= self.group.gl_blocks.len() {
                    return Err(Error::Config(format!("reps[{i}].block = {b} is out of range")));
                }
            } else if r.twist != 0 {
                return Err(Error::Config(format!("reps[{i}] has a twist but no block")));
            }
        }
        Ok(())
    }

    pub fn torus_rank(&self) -> usize {
        self.group.torus_rank
    }

    pub fn blocks(&self) -> &[usize] {
        &self.group.gl_blocks
    }

    /// rk(H) = k + Σ n_i, the dimension of the weight space.
    pub fn rank(&self) -> usize {
        self.group.torus_rank + self.group.gl_blocks.iter().sum::<usize>()
    }

    /// Index of the first weight coordinate of block b.
    pub fn block_offset(&self, b: usize) -> usize {
        self.group.torus_rank + self.group.gl_blocks[..b].iter().sum::<usize>()
    }

    /// d(ω).
    pub fn d(&self, i: usize) -> usize {
        self.reps[i].block.map_or(1, |b| self.group.gl_blocks[b])
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.reps.len()).map(|i| self.d(i)).collect()
    }

    /// Whether every representation is one-dimensional.
    pub fn is_toric(&self) -> bool {
        (0..self.reps.len()).all(|i| self.d(i) == 1)
    }

    /// Torus weights of ω as vectors in Z^{rk H}.
    pub fn weights(&self, i: usize) -> Vec<Vec<i64>> {
        let r = &self.reps[i];
        let mut base = vec![0i64; self.rank()];
        base[..self.group.torus_rank].copy_from_slice(&r.torus_char);
        match r.block {
            None => vec![base],
            Some(b) => {
                let off = self.block_offset(b);
                let n = self.group.gl_blocks[b];
                (0..n)
                    .map(|j| {
                        let mut w = base.clone();
                        for c in 0..n {
                            w[off + c] = r.twist + i64::from(c == j);
                        }
                        w
                    })
                    .collect()
            }
        }
    }

    /// All weights of all ω, in order.
    pub fn all_weights(&self) -> Vec<Vec<i64>> {
        (0..self.reps.len()).flat_map(|i| self.weights(i)).collect()
    }

    /// One representative weight per ω (the highest one), as used for toric data.
    pub fn toric_points(&self) -> Vec<Vec<i64>> {
        (0..self.reps.len()).map(|i| self.weights(i).remove(0)).collect()
    }

    /// H-label of ω itself.
    pub fn rep_label(&self, i: usize) -> HLabel {
        let w = DominantWeight::from_slice(&[1]);
        self.power_label(i, &w)
    }

    /// H-label of Σ^α(V_ω): torus χ_ω^{|α|}, block weight α + twist·|α|.
    pub fn power_label(&self, i: usize, alpha: &DominantWeight) -> HLabel {
        let r = &self.reps[i];
        let size = alpha.size();
        let mut label = HLabel::trivial(&self.group);
        for (t, c) in label.torus.iter_mut().zip(&r.torus_char) {
            *t = c * size;
        }
        if let Some(b) = r.block {
            let w = if alpha.n() == self.group.gl_blocks[b] {
                alpha.clone()
            } else {
                DominantWeight::padded(alpha.parts(), self.group.gl_blocks[b]).expect("padding a partition")
            };
            label.blocks[b] = w.det_shift(r.twist * size);
        }
        label
    }

    /// Homogeneity: some h ∈ Lie(H) acts as the identity on every V_ω.
    pub fn check_homogeneity(&self) -> Homogeneity {
        let k = self.group.torus_rank;
        let m = self.group.gl_blocks.len();
        let rows: Vec<Vec<Q>> = self
            .reps
            .iter()
            .map(|r| {
                let mut row: Vec<Q> = r.torus_char.iter().map(|&c| q(c)).collect();
                row.extend((0..m).map(|b| {
                    if r.block == Some(b) {
                        q(1 + r.twist * self.group.gl_blocks[b] as i64)
                    } else {
                        Q::zero()
                    }
                }));
                row
            })
            .collect();
        let rhs = vec![Q::one(); self.reps.len()];
        match solve_affine(&rows, &rhs, k + m) {
            Some((x, _)) => Homogeneity { homogeneous: true, witness: Some(x) },
            None => Homogeneity { homogeneous: false, witness: None },
        }
    }

    /// Add one torus coordinate (first position) acting by 1 on every ω.
    /// Returns the model unchanged, with `false`, when it is already homogeneous.
    pub fn homogenize(&self) -> (GroupModel, bool) {
        if self.check_homogeneity().homogeneous {
            return (self.clone(), false);
        }
        let group = GroupSpec { torus_rank: self.group.torus_rank + 1, gl_blocks: self.group.gl_blocks.clone() };
        let reps = self
            .reps
            .iter()
            .map(|r| {
                let mut c = vec![1];
                c.extend(&r.torus_char);
                RepSpec { torus_char: c, block: r.block, twist: r.twist }
            })
            .collect();
        (GroupModel { group, reps }, true)
    }

    /// Matrix of the map s ↦ Σ s_ω tr dρ_ω, in coordinates (torus, block traces).
    fn trace_matrix(&self) -> Vec<Vec<Q>> {
        let k = self.group.torus_rank;
        let m = self.group.gl_blocks.len();
        let mut rows = vec![vec![Q::zero(); self.reps.len()]; k + m];
        for (j, r) in self.reps.iter().enumerate() {
            let d = self.d(j) as i64;
            for c in 0..k {
                rows[c][j] = q(d * r.torus_char[c]);
            }
            if let Some(b) = r.block {
                rows[k + b][j] = q(1 + r.twist * self.group.gl_blocks[b] as i64);
            }
        }
        rows
    }

    /// χ(s) = Σ s_ω tr dρ_ω, as values on torus coordinates and block traces.
    pub fn character_of(&self, s: &[Q]) -> Vec<Q> {
        self.trace_matrix().iter().map(|row| row.iter().zip(s).fold(Q::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    /// L_χ = {s : Σ s_ω tr dρ_ω = χ}; `None` when empty.
    pub fn solve_l_chi(&self, chi: &[Q]) -> Result<Option<AffineSpace>> {
        let need = self.group.torus_rank + self.group.gl_blocks.len();
        if chi.len() != need {
            return Err(Error::Mismatch(format!("χ needs {need} values (torus coordinates, then block traces)")));
        }
        Ok(solve_affine(&self.trace_matrix(), chi, self.reps.len())
            .map(|(particular, kernel)| AffineSpace { particular, kernel }))
    }

    /// H-labels of the factors Σ^{α(ω)}(V_ω) of a series term.
    pub fn term_labels(&self, alphas: &[DominantWeight]) -> Result<Vec<HLabel>> {
        if alphas.len() != self.reps.len() {
            return Err(Error::Mismatch(format!("{} weights for {} representations", alphas.len(), self.reps.len())));
        }
        alphas
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if a.n() != self.d(i) {
                    return Err(Error::Mismatch(format!("weight {a} for a representation of dimension {}", self.d(i))));
                }
                Ok(self.power_label(i, a))
            })
            .collect()
    }

    /// dim (⊗_ω Σ^{α(ω)}(V_ω))^H.
    pub fn invariant_term_dim(&self, alphas: &[DominantWeight]) -> Result<u64> {
        let labels = self.term_labels(alphas)?;
        labels_invariant_dim(&self.group, &labels)
    }

    /// Constituents of tensor products of exactly k elements of A, for k = 0..=D.
    pub fn monoidal_closure_truncated(&self, degree: usize) -> Vec<BTreeSet<HLabel>> {
        let gens: Vec<HLabel> = (0..self.reps.len()).map(|i| self.rep_label(i)).collect();
        let mut out = vec![BTreeSet::from([HLabel::trivial(&self.group)])];
        for _ in 0..degree {
            let last = out.last().unwrap();
            let mut next = BTreeSet::new();
            for l in last {
                for g in &gens {
                    next.extend(l.tensor(g));
                }
            }
            out.push(next);
        }
        out
    }
}

/// Multiplicity of the trivial module in a tensor product of H-modules.
pub fn labels_invariant_dim(group: &GroupSpec, labels: &[HLabel]) -> Result<u64> {
    let k = group.torus_rank;
    for c in 0..k {
        if labels.iter().map(|l| l.torus[c]).sum::<i64>() != 0 {
            return Ok(0);
        }
    }
    let mut total = 1u64;
    for (b, &n) in group.gl_blocks.iter().enumerate() {
        let ws: Vec<DominantWeight> =
            labels.iter().map(|l| l.blocks[b].clone()).filter(|w| w.parts().iter().any(|&p| p != 0)).collect();
        total *= invariant_dim(&ws, n)?;
        if total == 0 {
            return Ok(0);
        }
    }
    Ok(total)
}

/// (H, A) of the matrix Gauss example: H = C^*×C^*×GL_n,
/// A = {N², N⊗L, N⊗V, L⊗V}.
pub fn gauss_model(n: usize) -> GroupModel {
    GroupModel::new(
        GroupSpec { torus_rank: 2, gl_blocks: vec![n] },
        vec![
            RepSpec::character(&[2, 0]),
            RepSpec::character(&[1, 1]),
            RepSpec::on_block(&[1, 0], 0, 0),
            RepSpec::on_block(&[0, 1], 0, 0),
        ],
    )
    .expect("valid model")
}

/// (H, A) of the Appell-type example:
/// A = {N³, N²⊗L, N²⊗V, N⊗L⊗V, L²⊗V}.
pub fn appell_model(n: usize) -> GroupModel {
    GroupModel::new(
        GroupSpec { torus_rank: 2, gl_blocks: vec![n] },
        vec![
            RepSpec::character(&[3, 0]),
            RepSpec::character(&[2, 1]),
            RepSpec::on_block(&[2, 0], 0, 0),
            RepSpec::on_block(&[1, 1], 0, 0),
            RepSpec::on_block(&[0, 2], 0, 0),
        ],
    )
    .expect("valid model")
}

/// Toric model with the given one-dimensional weights.
pub fn toric_model(points: &[Vec<i64>]) -> Result<GroupModel> {
    let k = points.first().map_or(0, |p| p.len());
    GroupModel::new(
        GroupSpec { torus_rank: k, gl_blocks: vec![] },
        points.iter().map(|p| RepSpec::character(p)).collect(),
    )
}
