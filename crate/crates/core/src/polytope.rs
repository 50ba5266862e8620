//! Weight polytopes and their combinatorics.
//!
//! - Exact convex hull by brute-force facet enumeration, in lattice
//!   coordinates on the affine span.
//! - Face lattice (with the empty face) and Weyl-group face orbits.
//! - Exact polynomial integration over a pulling triangulation.
//! - Kazarnovskii degree of the compactification X_A.
//! - Nonresonance of exponents and the toric cobase criterion.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gammafn::c_n;
use crate::groupmodel::{GroupModel, GroupSpec};
use crate::poly::LaurentPoly;
use crate::rational::{
    det, factorial, integer_kernel, lattice_contains, nullspace, primitive_integer, q, qi, rank, solve_affine, Q,
};

/// Largest ambient dimension accepted by `weight_polytope`.
pub const MAX_AMBIENT_DIM: usize = 8;

/// A facet in local lattice coordinates: normal · c ≤ offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub vertices: BTreeSet<usize>,
}

/// A face as a set of vertex indices; the empty face has dimension -1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub dim: i64,
    pub vertices: BTreeSet<usize>,
}

/// Convex polytope with rational vertices, measured in the lattice
/// Z^r ∩ (direction space of its affine span).
#[derive(Clone, Debug)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<Vec<Q>>,
    origin: Vec<Q>,
    basis: Vec<Vec<BigInt>>,
    local: Vec<Vec<Q>>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Normalize (normal, offset) so the normal is a primitive integer vector.
fn normalize_halfspace(normal: &[Q], offset: &Q) -> (Vec<Q>, Q) {
    let ints = primitive_integer(normal);
    let first = normal.iter().zip(&ints).find(|(x, _)| !x.is_zero()).expect("nonzero normal");
    let scale = qi(first.1) / first.0;
    (ints.iter().map(qi).collect(), offset * scale)
}

impl Polytope {
    /// Convex hull of rational points.
    pub fn from_points(points: &[Vec<Q>]) -> Result<Self> {
        let Some(p0) = points.first() else {
            return Err(Error::Domain("empty point set".into()));
        };
        let r = p0.len();
        if points.iter().any(|p| p.len() != r) {
            return Err(Error::Mismatch("points of different dimensions".into()));
        }
        let pts: Vec<Vec<Q>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let origin = pts[0].clone();
        let dirs: Vec<Vec<Q>> = pts.iter().skip(1).map(|p| sub(p, &origin)).collect();
        // lattice Z^r ∩ span(dirs) from an integer annihilator of the span
        let ann: Vec<Vec<BigInt>> = nullspace(&dirs, r).iter().map(|v| primitive_integer(v)).collect();
        let basis = if ann.is_empty() {
            (0..r).map(|i| (0..r).map(|j| BigInt::from(i64::from(i == j))).collect()).collect()
        } else {
            integer_kernel(&ann, r)
        };
        let d = basis.len();
        let cols: Vec<Vec<Q>> = (0..r).map(|j| basis.iter().map(|b| qi(&b[j])).collect()).collect();
        let local: Vec<Vec<Q>> = pts
            .iter()
            .map(|p| solve_affine(&cols, &sub(p, &origin), d).expect("point lies in its affine span").0)
            .collect();
        let facets = hull_facets(&local, d);
        // keep only vertices: points whose active facet normals span Q^d
        let keep: Vec<usize> = (0..pts.len())
            .filter(|&i| {
                if d == 0 {
                    return true;
                }
                let active: Vec<Vec<Q>> = facets.iter().filter(|f| f.vertices.contains(&i)).map(|f| f.normal.clone()).collect();
                rank(&active) == d
            })
            .collect();
        let vertices: Vec<Vec<Q>> = keep.iter().map(|&i| pts[i].clone()).collect();
        let local: Vec<Vec<Q>> = keep.iter().map(|&i| local[i].clone()).collect();
        let facets = hull_facets(&local, d);
        let mut p = Polytope { ambient: r, vertices, origin, basis, local, facets, faces: vec![] };
        p.faces = p.compute_faces();
        Ok(p)
    }

    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Vec<Q>> = points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        Self::from_points(&pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All faces including the empty face and the polytope itself.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    fn affine_dim_of(&self, vs: &BTreeSet<usize>) -> i64 {
        let Some(&first) = vs.iter().next() else { return -1 };
        let rows: Vec<Vec<Q>> = vs.iter().map(|&i| sub(&self.local[i], &self.local[first])).collect();
        rank(&rows) as i64
    }

    fn compute_faces(&self) -> Vec<Face> {
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
        seen.insert(all.clone());
        queue.push_back(all);
        if self.dim() == 0 {
            seen.insert(BTreeSet::new());
        }
        while let Some(f) = queue.pop_front() {
            for facet in &self.facets {
                let g: BTreeSet<usize> = f.intersection(&facet.vertices).copied().collect();
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        let mut faces: Vec<Face> = seen.into_iter().map(|v| Face { dim: self.affine_dim_of(&v), vertices: v }).collect();
        faces.sort();
        faces
    }

    /// Counts of faces by dimension, starting at the empty face.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 2];
        for face in &self.faces {
            f[(face.dim + 1) as usize] += 1;
        }
        f
    }

    /// Ambient point of local coordinates c.
    fn to_ambient(&self, c: &[Q]) -> Vec<Q> {
        (0..self.ambient)
            .map(|j| {
                self.basis.iter().zip(c).fold(self.origin[j].clone(), |acc, (b, ci)| acc + qi(&b[j]) * ci)
            })
            .collect()
    }

    /// Pulling triangulation into simplices given as vertex index lists.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        let top = self.faces.iter().find(|f| f.dim == self.dim() as i64).expect("polytope is a face of itself");
        self.triangulate_face(top)
    }

    fn triangulate_face(&self, face: &Face) -> Vec<Vec<usize>> {
        let v0 = *face.vertices.iter().next().expect("nonempty face");
        if face.dim == 0 {
            return vec![vec![v0]];
        }
        let mut out = Vec::new();
        for g in &self.faces {
            if g.dim == face.dim - 1 && g.vertices.is_subset(&face.vertices) && !g.vertices.contains(&v0) {
                for mut s in self.triangulate_face(g) {
                    s.insert(0, v0);
                    out.push(s);
                }
            }
        }
        out
    }

    /// ∫_P ∏_k ℓ_k(λ) dλ for linear functionals ℓ_k on the ambient space,
    /// with the lattice-normalized measure on the affine span.
    pub fn integrate_product(&self, forms: &[Vec<Q>]) -> Q {
        let d = self.dim();
        let mut total = Q::zero();
        for simplex in self.triangulate() {
            let v0 = &self.local[simplex[0]];
            let edges: Vec<Vec<Q>> = simplex[1..].iter().map(|&i| sub(&self.local[i], v0)).collect();
            let jac = if d == 0 { Q::one() } else { det(&edges).abs() };
            let a0 = self.to_ambient(v0);
            let amb: Vec<Vec<Q>> = simplex[1..].iter().map(|&i| self.to_ambient(&self.local[i])).collect();
            let mut f = LaurentPoly::one(d);
            for l in forms {
                let c0 = dot(l, &a0);
                let mut lin = LaurentPoly::monomial(vec![0; d], c0.clone());
                for (t, p) in amb.iter().enumerate() {
                    let mut e = vec![0; d];
                    e[t] = 1;
                    lin.add_term(e, dot(l, p) - &c0);
                }
                f = f.mul(&lin);
            }
            // ∫_{standard simplex} t^a dt = ∏ a_i! / (|a| + d)!
            let mut s = Q::zero();
            for (e, c) in f.terms() {
                let num = e.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a as u64));
                let tot: i64 = e.iter().sum::<i64>() + d as i64;
                s += c * Q::new(num, factorial(tot as u64));
            }
            total += jac * s;
        }
        total
    }

    /// Lattice-normalized volume on the affine span.
    pub fn volume(&self) -> Q {
        self.integrate_product(&[])
    }

    /// Intersection with halfspaces a·λ ≥ b (ambient coordinates).
    pub fn intersect(&self, halfspaces: &[(Vec<Q>, Q)]) -> Result<Polytope> {
        let d = self.dim();
        // all constraints as g·c ≤ h in local coordinates
        let mut cons: Vec<(Vec<Q>, Q)> = self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect();
        for (a, b) in halfspaces {
            let g: Vec<Q> = self
                .basis
                .iter()
                .map(|bv| -bv.iter().zip(a).fold(Q::zero(), |acc, (x, y)| acc + qi(x) * y))
                .collect();
            cons.push((g, dot(a, &self.origin) - b));
        }
        let mut pts = BTreeSet::new();
        if d == 0 {
            if cons.iter().all(|(_, h)| !h.is_negative()) {
                pts.insert(self.origin.clone());
            }
        } else {
            for sub_idx in combinations(cons.len(), d) {
                let a: Vec<Vec<Q>> = sub_idx.iter().map(|&i| cons[i].0.clone()).collect();
                let b: Vec<Q> = sub_idx.iter().map(|&i| cons[i].1.clone()).collect();
                let Some((c, ker)) = solve_affine(&a, &b, d) else { continue };
                if !ker.is_empty() {
                    continue;
                }
                if cons.iter().all(|(g, h)| dot(g, &c) <= *h) {
                    pts.insert(self.to_ambient(&c));
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::Domain("empty intersection".into()));
        }
        Polytope::from_points(&pts.into_iter().collect::<Vec<_>>())
    }

    /// W-orbits on faces, W acting by the given permutations of ambient coordinates.
    pub fn face_orbits(&self, group: &[Vec<usize>]) -> Vec<FaceOrbit> {
        let index: BTreeMap<&Vec<Q>, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let actions: Vec<Vec<usize>> = group
            .iter()
            .map(|perm| {
                self.vertices
                    .iter()
                    .map(|v| {
                        let mut img = vec![Q::zero(); self.ambient];
                        for (j, &pj) in perm.iter().enumerate() {
                            img[pj] = v[j].clone();
                        }
                        *index.get(&img).expect("polytope is invariant under the group")
                    })
                    .collect()
            })
            .collect();
        let mut orbits: BTreeMap<Vec<usize>, FaceOrbit> = BTreeMap::new();
        for face in &self.faces {
            let images: BTreeSet<Vec<usize>> = actions
                .iter()
                .map(|act| {
                    let mut v: Vec<usize> = face.vertices.iter().map(|&i| act[i]).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            let canon = images.iter().next().cloned().unwrap_or_default();
            orbits.entry(canon.clone()).or_insert_with(|| FaceOrbit {
                representative: canon,
                size: images.len(),
                dim: face.dim,
                rank: (face.dim + 1) as usize,
            });
        }
        let mut out: Vec<FaceOrbit> = orbits.into_values().collect();
        out.sort_by(|a, b| (a.dim, &a.representative).cmp(&(b.dim, &b.representative)));
        out
    }
}

/// Facets of the convex hull of full-dimensional points in Q^d.
fn hull_facets(local: &[Vec<Q>], d: usize) -> Vec<Facet> {
    if d == 0 {
        return vec![];
    }
    let mut found: BTreeMap<(Vec<Q>, Q), BTreeSet<usize>> = BTreeMap::new();
    for sub_idx in combinations(local.len(), d) {
        let base = &local[sub_idx[0]];
        let rows: Vec<Vec<Q>> = sub_idx[1..].iter().map(|&i| sub(&local[i], base)).collect();
        let ns = nullspace(&rows, d);
        if ns.len() != 1 {
            continue;
        }
        let mut normal = ns[0].clone();
        let mut offset = dot(&normal, base);
        let vals: Vec<Q> = local.iter().map(|p| dot(&normal, p)).collect();
        if vals.iter().all(|v| *v <= offset) {
        } else if vals.iter().all(|v| *v >= offset) {
            normal = normal.iter().map(|x| -x).collect();
            offset = -offset;
        } else {
            continue;
        }
        let key = normalize_halfspace(&normal, &offset);
        if found.contains_key(&key) {
            continue;
        }
        let on: BTreeSet<usize> = (0..local.len()).filter(|&i| dot(&key.0, &local[i]) == key.1).collect();
        found.insert(key, on);
    }
    found.into_iter().map(|((normal, offset), vertices)| Facet { normal, offset, vertices }).collect()
}

/// One W-orbit of faces. `rank` is the rank of the corresponding
/// H×H-orbit, i.e. the dimension of the cone over the face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceOrbit {
    pub representative: Vec<usize>,
    pub size: usize,
    pub dim: i64,
    pub rank: usize,
}

/// Q_A = Conv of all weights of all ω ∈ A.
pub fn weight_polytope(model: &GroupModel) -> Result<Polytope> {
    if model.rank() > MAX_AMBIENT_DIM {
        return Err(Error::Limit(format!("ambient dimension {} exceeds {MAX_AMBIENT_DIM}", model.rank())));
    }
    if model.reps.is_empty() {
        return Err(Error::Domain("no representations".into()));
    }
    Polytope::from_integer_points(&model.all_weights())
}

/// All permutations of 0..n.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k % 2 == 0 {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// Weyl group ∏ S_{n_b} as permutations of the weight coordinates.
pub fn weyl_group(group: &GroupSpec) -> Vec<Vec<usize>> {
    let r = group.torus_rank + group.gl_blocks.iter().sum::<usize>();
    let mut acc: Vec<Vec<usize>> = vec![(0..r).collect()];
    let mut off = group.torus_rank;
    for &n in &group.gl_blocks {
        let perms = permutations(n);
        acc = acc
            .into_iter()
            .flat_map(|base| {
                perms.iter().map(move |p| {
                    let mut g = base.clone();
                    for (i, &pi) in p.iter().enumerate() {
                        g[off + i] = off + pi;
                    }
                    g
                })
            })
            .collect();
        off += n;
    }
    acc
}

/// Positive coroots and characteristic exponents of H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    pub coroots: Vec<Vec<i64>>,
    pub exponents: Vec<u64>,
}

impl RootData {
    pub fn for_group(group: &GroupSpec) -> Self {
        let r = group.torus_rank + group.gl_blocks.iter().sum::<usize>();
        let mut coroots = Vec::new();
        let mut exponents = vec![1; group.torus_rank];
        let mut off = group.torus_rank;
        for &n in &group.gl_blocks {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut a = vec![0; r];
                    a[off + i] = 1;
                    a[off + j] = -1;
                    coroots.push(a);
                }
            }
            exponents.extend(1..=n as u64);
            off += n;
        }
        RootData { coroots, exponents }
    }
}

/// Degree of X_A together with the intermediate quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    /// (dim X)! / (∏(d_i-1)!)² · ∫_{Q ∩ C_+} ∏ ⟨α^∨,λ⟩² dλ.
    pub degree: Q,
    pub dim_x: usize,
    pub polytope_dim: usize,
    /// Positive roots not identically zero on Q.
    pub active_roots: usize,
    /// (1/∏(d_i-1)!) · ∫_Q ∏ ⟨α^∨,λ⟩ dλ, evaluated literally.
    pub unsquared_integral: Q,
}

/// Degree of the projective compactification attached to the polytope.
///
/// The integrand is the squared Weyl product over the dominant chamber,
/// scaled by (dim X)!; roots that vanish on the affine span of Q are dropped.
/// For a torus this is (dim Q)! · Vol(Q).
pub fn kazarnovskii_degree(p: &Polytope, roots: &RootData) -> Result<DegreeReport> {
    if roots.coroots.iter().any(|a| a.len() != p.ambient_dim()) {
        return Err(Error::Domain("coroots do not match the ambient dimension".into()));
    }
    let norm: BigInt = roots.exponents.iter().fold(BigInt::one(), |acc, &d| acc * factorial(d - 1));
    let all: Vec<Vec<Q>> = roots.coroots.iter().map(|a| a.iter().map(|&x| q(x)).collect()).collect();
    let unsquared = p.integrate_product(&all) / qi(&norm);
    // roots identically zero on Q play no role
    let active: Vec<Vec<Q>> = all
        .into_iter()
        .filter(|a| {
            let v0 = dot(a, &p.vertices[0]);
            !(v0.is_zero() && p.vertices.iter().all(|v| dot(a, v).is_zero()))
        })
        .collect();
    let dim_x = p.dim() + 2 * active.len();
    let chamber: Vec<(Vec<Q>, Q)> = active.iter().map(|a| (a.clone(), Q::zero())).collect();
    let integral = if active.is_empty() {
        p.volume()
    } else {
        let dom = p.intersect(&chamber)?;
        if dom.dim() < p.dim() {
            Q::zero()
        } else {
            let squared: Vec<Vec<Q>> = active.iter().flat_map(|a| [a.clone(), a.clone()]).collect();
            dom.integrate_product(&squared)
        }
    };
    let degree = qi(&factorial(dim_x as u64)) * integral / qi(&(&norm * &norm));
    Ok(DegreeReport { degree, dim_x, polytope_dim: p.dim(), active_roots: active.len(), unsquared_integral: unsquared })
}

/// Degree for the pair (H, A).
pub fn degree_of_model(model: &GroupModel) -> Result<DegreeReport> {
    let p = weight_polytope(model)?;
    kazarnovskii_degree(&p, &RootData::for_group(&model.group))
}

/// Outcome of the nonresonance test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonresonanceReport {
    pub nonresonant: bool,
    /// Generators of the linear span of the offending cone facet.
    pub witness: Option<Vec<Vec<String>>>,
    pub facets_checked: usize,
}

/// χ given as torus values and block traces, expanded to the weight space.
pub fn expand_chi(group: &GroupSpec, chi: &[Q]) -> Result<Vec<Q>> {
    let k = group.torus_rank;
    if chi.len() != k + group.gl_blocks.len() {
        return Err(Error::Mismatch(format!("χ needs {} values", k + group.gl_blocks.len())));
    }
    let mut out = chi[..k].to_vec();
    for (b, &n) in group.gl_blocks.iter().enumerate() {
        out.extend(std::iter::repeat_n(chi[k + b].clone(), n));
    }
    Ok(out)
}

/// χ is nonresonant iff χ ∉ Λ + Lin(Γ) for every codimension-one face Γ of
/// the cone over Q_A with apex 0.
pub fn nonresonant_check(model: &GroupModel, chi: &[Q]) -> Result<NonresonanceReport> {
    let chi = expand_chi(&model.group, chi)?;
    let r = model.rank();
    let mut pts: Vec<Vec<Q>> = model.all_weights().iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
    pts.push(vec![Q::zero(); r]);
    let p0 = Polytope::from_points(&pts)?;
    let zero_local = solve_local(&p0, &vec![Q::zero(); r]);
    let mut checked = 0;
    for facet in p0.facets() {
        if dot(&facet.normal, &zero_local) != facet.offset {
            continue;
        }
        checked += 1;
        let gens: Vec<Vec<Q>> = facet.vertices.iter().map(|&i| p0.vertices()[i].clone()).collect();
        let ann: Vec<Vec<BigInt>> = nullspace(&gens, r).iter().map(|v| primitive_integer(v)).collect();
        let image: Vec<Q> = ann.iter().map(|row| row.iter().zip(&chi).fold(Q::zero(), |acc, (a, x)| acc + qi(a) * x)).collect();
        let lattice_gens: Vec<Vec<BigInt>> = (0..r).map(|j| ann.iter().map(|row| row[j].clone()).collect()).collect();
        if ann.is_empty() || lattice_contains(&lattice_gens, &image) {
            let witness = gens.iter().map(|g| g.iter().map(|x| x.to_string()).collect()).collect();
            return Ok(NonresonanceReport { nonresonant: false, witness: Some(witness), facets_checked: checked });
        }
    }
    Ok(NonresonanceReport { nonresonant: true, witness: None, facets_checked: checked })
}

fn solve_local(p: &Polytope, x: &[Q]) -> Vec<Q> {
    let d = p.dim();
    let cols: Vec<Vec<Q>> = (0..p.ambient).map(|j| p.basis.iter().map(|b| qi(&b[j])).collect()).collect();
    solve_affine(&cols, &sub(x, &p.origin), d).expect("point in affine span").0
}

/// B ⊆ A is a cobase of toric data iff A \ B is affinely independent.
pub fn toric_cobase_check(model: &GroupModel, b: &[usize]) -> Result<bool> {
    if !model.is_toric() {
        return Err(Error::Unsupported("cobase detection is implemented for toric data only".into()));
    }
    if let Some(&bad) = b.iter().find(|&&i| i >= model.reps.len()) {
        return Err(Error::Domain(format!("index {bad} is not in A")));
    }
    let rest: Vec<Vec<Q>> = model
        .toric_points()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !b.contains(i))
        .map(|(_, p)| std::iter::once(Q::one()).chain(p.iter().map(|&x| q(x))).collect())
        .collect();
    Ok(rank(&rest) == rest.len())
}

/// c_n² appears in the degree normalization for a single GL_n block.
pub fn weyl_normalization(n: usize) -> BigInt {
    let c = c_n(n);
    &c * &c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmodel::{gauss_model, toric_model, RepSpec};
    use crate::rational::qf;
    use proptest::prelude::*;

    fn standard(n: usize) -> GroupModel {
        GroupModel::new(GroupSpec { torus_rank: 0, gl_blocks: vec![n] }, vec![RepSpec::on_block(&[], 0, 0)]).unwrap()
    }

    #[test]
    fn simplex_and_orbits() {
        for n in 2..=4 {
            let m = standard(n);
            let p = weight_polytope(&m).unwrap();
            assert_eq!(p.dim(), n - 1);
            assert_eq!(p.vertices().len(), n);
            assert_eq!(p.faces().len(), 1 << n);
            let orbits = p.face_orbits(&weyl_group(&m.group));
            assert_eq!(orbits.len(), n + 1);
            assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), p.faces().len());
        }
    }

    #[test]
    fn point_and_square() {
        let p = Polytope::from_integer_points(&[vec![3, 1]]).unwrap();
        assert_eq!(p.faces().len(), 2);
        assert_eq!(p.face_orbits(&[vec![0, 1]]).len(), 2);
        let sq = Polytope::from_integer_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(sq.f_vector(), vec![1, 4, 4, 1]);
        assert_eq!(sq.face_orbits(&[vec![0, 1]]).len(), 10);
        assert_eq!(sq.volume(), q(1));
    }

    #[test]
    fn gauss_polytope_is_a_prism() {
        for n in 1..=3 {
            let m = gauss_model(n);
            let p = weight_polytope(&m).unwrap();
            assert_eq!(p.dim(), n + 1);
            assert_eq!(p.vertices().len(), 2 * (n + 1));
            // facets of Δ¹×Δⁿ: 2 + (n+1)
            assert_eq!(p.facets().len(), n + 3);
        }
    }

    #[test]
    fn degree_examples() {
        let d1 = degree_of_model(&gauss_model(1)).unwrap();
        assert_eq!(d1.degree, q(2));
        let d2 = degree_of_model(&gauss_model(2)).unwrap();
        assert_eq!(d2.dim_x, 5);
        assert_eq!(d2.degree, q(5));
        assert_eq!(d2.unsquared_integral, q(0));
        let d3 = degree_of_model(&gauss_model(3)).unwrap();
        assert_eq!(d3.dim_x, 10);
        assert_eq!(d3.degree, q(10));
        // Mat_n compactifies to P^{n²-1}
        for n in 1..=3 {
            let d = degree_of_model(&standard(n)).unwrap();
            assert_eq!(d.dim_x, n * n - 1);
            assert_eq!(d.degree, q(1), "n={n}");
        }
        // scaled segment in a rank-one torus
        for k in 1..=5 {
            let m = toric_model(&[vec![0], vec![k]]).unwrap();
            assert_eq!(degree_of_model(&m).unwrap().degree, q(k));
        }
    }

    #[test]
    fn degree_rejects_mismatched_roots() {
        let p = Polytope::from_integer_points(&[vec![0, 0], vec![1, 0]]).unwrap();
        let roots = RootData { coroots: vec![vec![1, -1, 0]], exponents: vec![1, 2] };
        assert!(kazarnovskii_degree(&p, &roots).is_err());
    }

    #[test]
    fn degree_is_permutation_invariant() {
        let m = gauss_model(2);
        let base = degree_of_model(&m).unwrap().degree;
        let roots = RootData::for_group(&m.group);
        for perm in permutations(4) {
            let pts: Vec<Vec<i64>> = m.all_weights().iter().map(|w| {
                let mut v = vec![0; 4];
                for (j, &pj) in perm.iter().enumerate() {
                    v[pj] = w[j];
                }
                v
            }).collect();
            let cor: Vec<Vec<i64>> = roots.coroots.iter().map(|a| {
                let mut v = vec![0; 4];
                for (j, &pj) in perm.iter().enumerate() {
                    v[pj] = a[j];
                }
                v
            }).collect();
            let p = Polytope::from_integer_points(&pts).unwrap();
            let r = RootData { coroots: cor, exponents: roots.exponents.clone() };
            assert_eq!(kazarnovskii_degree(&p, &r).unwrap().degree, base);
        }
    }

    #[test]
    fn degree_monotone_on_nested_polytopes() {
        // W-invariant segments and hexagon-like sets in GL_2 × C^*
        let g = GroupSpec { torus_rank: 1, gl_blocks: vec![2] };
        let roots = RootData::for_group(&g);
        let mut last = Q::zero();
        for k in 1..=4i64 {
            let pts = vec![vec![1, k, 0], vec![1, 0, k], vec![1, k, k], vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
            let d = kazarnovskii_degree(&Polytope::from_integer_points(&pts).unwrap(), &roots).unwrap().degree;
            assert!(d > last, "k={k}");
            last = d;
        }
    }

    fn shoelace(pts: &[Vec<i64>]) -> (Q, Vec<Vec<i64>>) {
        // hull by monotone chain
        let mut p = pts.to_vec();
        p.sort();
        p.dedup();
        let cross = |o: &Vec<i64>, a: &Vec<i64>, b: &Vec<i64>| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let mut lower: Vec<Vec<i64>> = vec![];
        for x in &p {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], x) <= 0 {
                lower.pop();
            }
            lower.push(x.clone());
        }
        let mut upper: Vec<Vec<i64>> = vec![];
        for x in p.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], x) <= 0 {
                upper.pop();
            }
            upper.push(x.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        let n = lower.len();
        let twice: i64 = (0..n).map(|i| lower[i][0] * lower[(i + 1) % n][1] - lower[(i + 1) % n][0] * lower[i][1]).sum();
        (qf(twice.abs(), 2), lower)
    }

    fn pick_area(pts: &[Vec<i64>], hull: &[Vec<i64>]) -> Q {
        let n = hull.len();
        let boundary: i64 = (0..n)
            .map(|i| {
                let (a, b) = (&hull[i], &hull[(i + 1) % n]);
                num_integer::gcd((b[0] - a[0]).abs(), (b[1] - a[1]).abs())
            })
            .sum();
        let p = Polytope::from_integer_points(pts).unwrap();
        let (lo, hi) = (-6, 6);
        let mut interior = 0;
        for x in lo..=hi {
            for y in lo..=hi {
                let c = solve_local(&p, &[q(x), q(y)]);
                if p.facets().iter().all(|f| dot(&f.normal, &c) < f.offset) {
                    interior += 1;
                }
            }
        }
        q(interior) + qf(boundary, 2) - q(1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn toric_degree_is_normalized_area(pts in proptest::collection::vec((-5i64..6, -5i64..6), 3..9)) {
            let pts: Vec<Vec<i64>> = pts.into_iter().map(|(x, y)| vec![x, y]).collect();
            let (area, hull) = shoelace(&pts);
            prop_assume!(!area.is_zero());
            let m = toric_model(&pts).unwrap();
            let d = degree_of_model(&m).unwrap();
            prop_assert_eq!(&d.degree, &(q(2) * &area));
            prop_assert_eq!(pick_area(&pts, &hull), area);
        }

        #[test]
        fn orbit_sizes_sum_to_face_count(k in 1i64..4) {
            let m = gauss_model(2);
            let p = weight_polytope(&m).unwrap();
            let orbits = p.face_orbits(&weyl_group(&m.group));
            prop_assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), p.faces().len());
            let sq = Polytope::from_integer_points(&[vec![0, 0], vec![k, 0], vec![0, k], vec![k, k]]).unwrap();
            prop_assert_eq!(sq.volume(), q(k * k));
        }
    }

    #[test]
    fn nonresonance_examples() {
        let seg = toric_model(&[vec![0], vec![1]]).unwrap();
        assert!(nonresonant_check(&seg, &[qf(1, 2)]).unwrap().nonresonant);
        let r = nonresonant_check(&seg, &[q(3)]).unwrap();
        assert!(!r.nonresonant && r.witness.is_some());
        assert!(!nonresonant_check(&seg, &[q(0)]).unwrap().nonresonant);
        // homogenized segment: cone facets are the rays (1,0) and (1,1)
        let hseg = toric_model(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert!(nonresonant_check(&hseg, &[qf(1, 3), qf(1, 7)]).unwrap().nonresonant);
        assert!(!nonresonant_check(&hseg, &[qf(1, 3), q(0)]).unwrap().nonresonant);
        assert!(!nonresonant_check(&hseg, &[qf(1, 3), qf(1, 3)]).unwrap().nonresonant);
    }

    #[test]
    fn cobase_examples() {
        let simplex = toric_model(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(toric_cobase_check(&simplex, &[]).unwrap());
        let line = toric_model(&[vec![0], vec![1], vec![2]]).unwrap();
        assert!(toric_cobase_check(&line, &[1]).unwrap());
        assert!(!toric_cobase_check(&line, &[]).unwrap());
        assert!(toric_cobase_check(&gauss_model(2), &[]).is_err());
    }
}
