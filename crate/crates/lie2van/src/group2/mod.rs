//! Matrix Lie groups, crossed modules of matrix Lie groups, and the strict
//! 2-group they generate: the nerve `G_p ≅ H^p ⋊ G` with its group
//! operations, faces, degeneracies and exact tangent maps.

pub mod nerve;

use crate::lie2alg::{CrossedModuleAlgData, LieAlgebraData};
use crate::numcore::{curve_derivative, JMat, Mat, NumError};
use rand::Rng;

/// How membership in the group is checked on random samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relation {
    /// `gᵀg = 1`
    Orthogonal,
    /// upper unitriangular
    Unipotent,
    /// affine translation block form `[[I, v], [0, 1]]`
    AffineTranslation,
}

/// A matrix Lie group: ambient size, a Lie algebra basis, and the defining
/// relation used for closure checks. Multiplication and inversion are the
/// ambient matrix operations; `exp` is the matrix exponential.
#[derive(Clone, Debug)]
pub struct MatrixGroupSpec {
    pub name: String,
    pub n: usize,
    pub basis: Vec<Mat>,
    pub relation: Relation,
    gram_inv: Mat,
}

impl MatrixGroupSpec {
    pub fn new(name: &str, n: usize, basis: Vec<Mat>, relation: Relation) -> Self {
        let d = basis.len();
        let gram = Mat::from_fn(d, d, |i, j| basis[i].frobenius_inner(&basis[j]));
        let gram_inv = gram.inverse().expect("algebra basis must be independent");
        MatrixGroupSpec { name: name.into(), n, basis, relation, gram_inv }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn alg_from_coords(&self, c: &[f64]) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for (i, b) in self.basis.iter().enumerate() {
            if c[i] != 0.0 {
                out = out.add(&b.scale(c[i]));
            }
        }
        out
    }

    /// Coordinates of an algebra element in the basis (exact linear solve
    /// against the Gram matrix).
    pub fn coords_of(&self, x: &Mat) -> Vec<f64> {
        let d = self.dim();
        let rhs = Mat::from_fn(d, 1, |i, _| self.basis[i].frobenius_inner(x));
        let sol = self.gram_inv.mul(&rhs);
        (0..d).map(|i| sol.at(i, 0)).collect()
    }

    pub fn exp_coords(&self, c: &[f64]) -> Mat {
        self.alg_from_coords(c).expm()
    }

    pub fn unit(&self) -> Mat {
        Mat::eye(self.n)
    }

    /// Residual of the defining relation at a point.
    pub fn relation_residual(&self, g: &Mat) -> f64 {
        match self.relation {
            Relation::Orthogonal => g.transpose().mul(g).sub(&Mat::eye(self.n)).norm_inf(),
            Relation::Unipotent => {
                let mut r: f64 = 0.0;
                for i in 0..self.n {
                    for j in 0..=i {
                        let want = if i == j { 1.0 } else { 0.0 };
                        r = r.max((g.at(i, j) - want).abs());
                    }
                }
                r
            }
            Relation::AffineTranslation => {
                let mut r: f64 = 0.0;
                let m = self.n - 1;
                for i in 0..m {
                    for j in 0..m {
                        let want = if i == j { 1.0 } else { 0.0 };
                        r = r.max((g.at(i, j) - want).abs());
                    }
                }
                for j in 0..m {
                    r = r.max(g.at(m, j).abs());
                }
                r.max((g.at(m, m) - 1.0).abs())
            }
        }
    }

    pub fn random_elt(&self, rng: &mut impl Rng, scale: f64) -> Mat {
        let c: Vec<f64> = (0..self.dim())
            .map(|_| scale * gauss(rng))
            .collect();
        self.exp_coords(&c)
    }
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn so3() -> MatrixGroupSpec {
    let e = |i: usize, j: usize| {
        let mut m = Mat::zeros(3, 3);
        m.set(i, j, -1.0);
        m.set(j, i, 1.0);
        m
    };
    // L_x, L_y, L_z with [L_x, L_y] = L_z cyclically (matrix commutator)
    MatrixGroupSpec::new("so3", 3, vec![e(1, 2), e(2, 0), e(0, 1)], Relation::Orthogonal)
}

/// SU(2) as real 4×4 matrices: the left regular representation of the unit
/// quaternions, algebra basis `i/2, j/2, k/2`.
pub fn su2() -> MatrixGroupSpec {
    let from_cols = |cols: [[f64; 4]; 4]| Mat::from_fn(4, 4, |r, c| cols[c][r]);
    let li = from_cols([[0., 1., 0., 0.], [-1., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., -1., 0.]]);
    let lj = from_cols([[0., 0., 1., 0.], [0., 0., 0., -1.], [-1., 0., 0., 0.], [0., 1., 0., 0.]]);
    let lk = from_cols([[0., 0., 0., 1.], [0., 0., 1., 0.], [0., -1., 0., 0.], [-1., 0., 0., 0.]]);
    MatrixGroupSpec::new(
        "su2",
        4,
        vec![li.scale(0.5), lj.scale(0.5), lk.scale(0.5)],
        Relation::Orthogonal,
    )
}

/// 3-dimensional Heisenberg group: upper unitriangular 3×3 matrices.
pub fn heis3() -> MatrixGroupSpec {
    let e = |i: usize, j: usize| {
        let mut m = Mat::zeros(3, 3);
        m.set(i, j, 1.0);
        m
    };
    MatrixGroupSpec::new("heis3", 3, vec![e(0, 1), e(1, 2), e(0, 2)], Relation::Unipotent)
}

/// `ℝⁿ` under addition, as affine translation matrices of size `(n+1)`.
pub fn rn(n: usize) -> MatrixGroupSpec {
    let mut basis = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = Mat::zeros(n + 1, n + 1);
        m.set(i, n, 1.0);
        basis.push(m);
    }
    MatrixGroupSpec::new(&format!("r{n}"), n + 1, basis, Relation::AffineTranslation)
}

/// The dual vector group `g*` of a `d`-dimensional group, in the same
/// affine-translation representation.
pub fn dual_vector_group(of: &MatrixGroupSpec) -> MatrixGroupSpec {
    let mut spec = rn(of.dim());
    spec.name = format!("{}_dual", of.name);
    spec
}

pub fn group_by_name(name: &str) -> Option<MatrixGroupSpec> {
    match name {
        "so3" => Some(so3()),
        "su2" => Some(su2()),
        "heis3" => Some(heis3()),
        "r1" => Some(rn(1)),
        "r2" => Some(rn(2)),
        "r3" => Some(rn(3)),
        _ => None,
    }
}

/// Which bundled crossed module of Lie groups to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CmKind {
    /// `(G, G, id, Ad)` — conjugation action
    Conjugation,
    /// `(G, g*, 1, Ad*)` — coadjoint action on the dual vector group
    Coadjoint,
}

/// Crossed module of matrix Lie groups `(G, H, ∂, α)` with exact tangent
/// maps for `∂` and `α` in both slots (jets propagate through the closed
/// formulas; nothing here is differentiated numerically).
pub struct MatrixCrossedModule {
    pub gspec: MatrixGroupSpec,
    pub hspec: MatrixGroupSpec,
    pub kind: CmKind,
}

impl MatrixCrossedModule {
    pub fn conjugation(g: MatrixGroupSpec) -> Self {
        MatrixCrossedModule { hspec: g.clone(), gspec: g, kind: CmKind::Conjugation }
    }

    pub fn coadjoint(g: MatrixGroupSpec) -> Self {
        let h = dual_vector_group(&g);
        MatrixCrossedModule { gspec: g, hspec: h, kind: CmKind::Coadjoint }
    }

    pub fn by_name(group: &str, kind: &str) -> Option<Self> {
        let g = group_by_name(group)?;
        match kind {
            "conjugation" => Some(Self::conjugation(g)),
            "coadjoint" => Some(Self::coadjoint(g)),
            _ => None,
        }
    }

    pub fn unit_g(&self) -> JMat {
        JMat::eye(self.gspec.n)
    }

    pub fn unit_h(&self) -> JMat {
        JMat::eye(self.hspec.n)
    }

    /// `∂: H → G` with exact tangent.
    pub fn dmap_j(&self, h: &JMat) -> JMat {
        match self.kind {
            CmKind::Conjugation => h.clone(),
            CmKind::Coadjoint => JMat::point(Mat::eye(self.gspec.n)),
        }
    }

    /// `α: G × H → H`, `(g, h) ↦ h^g`, with exact tangent in both slots.
    pub fn alpha_j(&self, g: &JMat, h: &JMat) -> JMat {
        match self.kind {
            CmKind::Conjugation => g.mul(h).mul(&g.inv()),
            CmKind::Coadjoint => {
                // K_g = (Ad_{g⁻¹})ᵀ acting on the translation column
                let k = self.coad_matrix_j(g);
                let d = self.gspec.dim();
                let n = self.hspec.n;
                let mut v = JMat::new(Mat::zeros(d, 1), Mat::zeros(d, 1));
                for i in 0..d {
                    v.v.set(i, 0, h.v.at(i, n - 1));
                    v.d.set(i, 0, h.d.at(i, n - 1));
                }
                let kv = k.mul(&v);
                let mut out = JMat::new(Mat::eye(n), Mat::zeros(n, n));
                for i in 0..d {
                    out.v.set(i, n - 1, kv.v.at(i, 0));
                    out.d.set(i, n - 1, kv.d.at(i, 0));
                }
                out
            }
        }
    }

    /// `(Ad_{g⁻¹})ᵀ` on algebra coordinates, as a jet matrix.
    fn coad_matrix_j(&self, g: &JMat) -> JMat {
        let d = self.gspec.dim();
        let gi = g.inv();
        let mut ad = JMat::new(Mat::zeros(d, d), Mat::zeros(d, d));
        for (j, b) in self.gspec.basis.iter().enumerate() {
            let col = gi.mul(&JMat::point(b.clone())).mul(g);
            let cv = self.gspec.coords_of(&col.v);
            let cd = self.gspec.coords_of(&col.d);
            for i in 0..d {
                ad.v.set(i, j, cv[i]);
                ad.d.set(i, j, cd[i]);
            }
        }
        ad.transpose()
    }

    /// Residuals of the crossed-module axioms on random group samples.
    pub fn axiom_residual(&self, rng: &mut impl Rng, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let g = JMat::point(self.gspec.random_elt(rng, 0.3));
            let h1 = JMat::point(self.hspec.random_elt(rng, 0.3));
            let h2 = JMat::point(self.hspec.random_elt(rng, 0.3));
            // ∂(h^g) = g ∂(h) g⁻¹
            let lhs = self.dmap_j(&self.alpha_j(&g, &h1));
            let rhs = g.mul(&self.dmap_j(&h1)).mul(&g.inv());
            worst = worst.max(lhs.v.sub(&rhs.v).norm_inf());
            // h₂^{∂h₁} = h₁ h₂ h₁⁻¹
            let lhs = self.alpha_j(&self.dmap_j(&h1), &h2);
            let rhs = h1.mul(&h2).mul(&h1.inv());
            worst = worst.max(lhs.v.sub(&rhs.v).norm_inf());
            // closure under multiplication
            worst = worst.max(self.gspec.relation_residual(&g.v));
            worst = worst.max(self.hspec.relation_residual(&h1.mul(&h2).v));
        }
        worst
    }
}

/// Differentiates a matrix crossed module to a crossed module of Lie
/// algebras via the scalar derivative engine on exponential flows.
///
/// Brackets are the brackets of the vector fields generating left
/// translations (the convention in which the nerve's infinitesimal action
/// generators form Lie algebra homomorphisms), i.e. the coordinates of
/// `d/dτ Ad_{exp(τ b_i)⁻¹} b_j` at `τ = 0`.
pub fn differentiate(cm: &MatrixCrossedModule) -> Result<CrossedModuleAlgData, NumError> {
    let g_c = flow_structure_constants(&cm.gspec)?;
    let h_c = flow_structure_constants(&cm.hspec)?;
    let (dg, dh) = (cm.gspec.dim(), cm.hspec.dim());

    // T∂ at the identity, exact through jets
    let mut dmap = vec![0.0; dg * dh];
    for y in 0..dh {
        let jet = JMat::new(Mat::eye(cm.hspec.n), cm.hspec.basis[y].clone());
        let out = cm.dmap_j(&jet);
        let co = cm.gspec.coords_of(&out.d);
        for i in 0..dg {
            dmap[i * dh + y] = co[i];
        }
    }

    // ρ(x)(y) = d/dτ Tα(exp(τ b_x)⁻¹, ·)(y), scalar engine per entry
    let mut rho = vec![0.0; dg * dh * dh];
    for x in 0..dg {
        let bx = cm.gspec.basis[x].clone();
        for y in 0..dh {
            let by = cm.hspec.basis[y].clone();
            let mut dmat = Mat::zeros(cm.hspec.n, cm.hspec.n);
            for r in 0..cm.hspec.n {
                for c in 0..cm.hspec.n {
                    let val = curve_derivative(
                        |t| {
                            let gt = JMat::point(bx.scale(-t).expm());
                            let hj = JMat::new(Mat::eye(cm.hspec.n), by.clone());
                            cm.alpha_j(&gt, &hj).d.at(r, c)
                        },
                        0.0,
                    )?;
                    dmat.set(r, c, val);
                }
            }
            let co = cm.hspec.coords_of(&dmat);
            for k in 0..dh {
                rho[(x * dh + y) * dh + k] = co[k];
            }
        }
    }

    let g = LieAlgebraData::new(dg, g_c)?;
    let h = LieAlgebraData::new(dh, h_c)?;
    let out = CrossedModuleAlgData { g, h, dmap, rho };
    let rep = crate::lie2alg::check_crossed_module(&out);
    if !rep.pass(1e-8) {
        return Err(NumError::NonFinite(format!(
            "differentiated module fails axioms: {rep:?}"
        )));
    }
    Ok(out)
}

fn flow_structure_constants(spec: &MatrixGroupSpec) -> Result<Vec<f64>, NumError> {
    let d = spec.dim();
    let mut c = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let bi = &spec.basis[i];
            let bj = &spec.basis[j];
            let mut dmat = Mat::zeros(spec.n, spec.n);
            for r in 0..spec.n {
                for s in 0..spec.n {
                    let val = curve_derivative(
                        |t| {
                            let g = bi.scale(t).expm();
                            let gi = g.inverse().unwrap();
                            gi.mul(bj).mul(&g).at(r, s)
                        },
                        0.0,
                    )?;
                    dmat.set(r, s, val);
                }
            }
            // snap to exact commutator values to keep later algebra exact
            let exact = bj.comm(bi);
            if dmat.sub(&exact).norm_inf() > 1e-8 {
                return Err(NumError::NonFinite("flow bracket off commutator".into()));
            }
            let co = spec.coords_of(&exact);
            for k in 0..d {
                c[(i * d + j) * d + k] = co[k];
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie2alg::{check_crossed_module, samples};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in [so3(), su2(), heis3(), rn(2)] {
            assert!((spec.exp_coords(&vec![0.0; spec.dim()]).sub(&spec.unit())).norm_inf() == 0.0);
            for _ in 0..20 {
                let a = spec.random_elt(&mut rng, 0.3);
                let b = spec.random_elt(&mut rng, 0.3);
                assert!(spec.relation_residual(&a.mul(&b)) < 1e-10, "{}", spec.name);
            }
        }
    }

    #[test]
    fn crossed_module_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for cm in [
            MatrixCrossedModule::conjugation(so3()),
            MatrixCrossedModule::coadjoint(so3()),
            MatrixCrossedModule::coadjoint(heis3()),
            MatrixCrossedModule::conjugation(su2()),
        ] {
            assert!(cm.axiom_residual(&mut rng, 15) < 1e-10);
        }
    }

    #[test]
    fn differentiate_conjugation_gives_tangent_module() {
        let cm = MatrixCrossedModule::conjugation(so3());
        let alg = differentiate(&cm).unwrap();
        let want = samples::tangent_cm(&samples::so3_gen());
        for (a, b) in alg.g.c.iter().zip(&want.g.c) {
            assert!((a - b).abs() < 1e-10);
        }
        for (a, b) in alg.rho.iter().zip(&want.rho) {
            assert!((a - b).abs() < 1e-7);
        }
        for (a, b) in alg.dmap.iter().zip(&want.dmap) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn differentiate_coadjoint_matches_algebraic_coadjoint() {
        let cm = MatrixCrossedModule::coadjoint(so3());
        let alg = differentiate(&cm).unwrap();
        assert!(check_crossed_module(&alg).pass(1e-10));
        let want = samples::coadjoint_cm(&samples::so3_gen());
        for (a, b) in alg.dmap.iter().zip(&want.dmap) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in alg.rho.iter().zip(&want.rho) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn differentiate_abelian_group_is_trivial() {
        let cm = MatrixCrossedModule::conjugation(rn(2));
        let alg = differentiate(&cm).unwrap();
        assert!(alg.g.c.iter().all(|x| x.abs() < 1e-9));
        assert!(alg.rho.iter().all(|x| x.abs() < 1e-9));
    }
}
