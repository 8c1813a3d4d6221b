//! The coadjoint 2-group example: `W̄` of the crossed module
//! `(G, g*, 1, Ad*)`, the shifted tautological 1-form at level 3, the
//! shifted symplectic 2-form, the nondegeneracy pairing, and the van Est
//! verification `Φ` of both.

use crate::algebroid::Ctx;
use crate::group2::{differentiate, group_by_name, MatrixCrossedModule, MatrixGroupSpec};
use crate::numcore::{JMat, Mat, NumError, Tensor};
use crate::simplicial::{form_d, wbar_degen, with_dir, FormField, Stack, StackDir};
use crate::vanest::{phi_component, phi_full};
use crate::weil::{weil_d, WeilElement};
use crate::lie2alg::to_lie2;
use std::rc::Rc;

/// `W̄(g*⋊G ⇉ G)` with the duality pairing between `g*`-coordinates and
/// `g`-coordinates.
pub struct CoadjointModel {
    pub ctx: Ctx,
}

impl CoadjointModel {
    pub fn new(g: MatrixGroupSpec) -> Result<Self, NumError> {
        let cm = Rc::new(MatrixCrossedModule::coadjoint(g));
        let alg = Rc::new(differentiate(&cm)?);
        Ok(CoadjointModel { ctx: Ctx::new(cm, alg) })
    }

    pub fn by_name(group: &str) -> Result<Self, NumError> {
        let g = group_by_name(group)
            .ok_or_else(|| NumError::Capacity(format!("unknown group {group}")))?;
        Self::new(g)
    }

    fn dim(&self) -> usize {
        self.ctx.ng_dim()
    }

    /// Translation column of an affine `g*`-element.
    fn hvec(&self, m: &Mat) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| m.at(i, d)).collect()
    }

    /// The level-3 projection to `g* × G` with its exact tangent: the
    /// second dual coordinate of the top slot twisted back by the top base
    /// point, paired with the middle group coordinate. The twist is what
    /// makes the pulled-back tautological form simplicially closed in the
    /// face conventions used here.
    fn p2_jet(&self, s: &Stack) -> (Vec<f64>, Vec<f64>, JMat) {
        let top = &s[0];
        let a = self.ctx.cm.alpha_j(&top.g.inv(), &top.hs[1]);
        (self.hvec(&a.v), self.hvec(&a.d), s[1].g.clone())
    }

    fn pair_with(&self, xi: &[f64], v: &Mat) -> f64 {
        let co = self.ctx.cm.gspec.coords_of(v);
        xi.iter().zip(&co).map(|(a, b)| a * b).sum()
    }

    /// `p₂*θ`: the pulled-back tautological 1-form on level 3.
    pub fn theta_form(&self) -> FormField {
        let me = self.clone_ref();
        FormField {
            level: 3,
            r: 1,
            ev: Rc::new(move |s, dirs| {
                assert_eq!(dirs.len(), 1);
                let j = with_dir(s, &dirs[0]);
                let (xi, _, g1) = me.p2_jet(&j);
                let th = g1.d.mul(&g1.v.inverse().unwrap());
                me.pair_with(&xi, &th)
            }),
        }
    }

    /// `p₂*ω = -d(p₂*θ)` by the exact bilinear formula for `-dθ` on
    /// `g* × G`.
    pub fn omega_form(&self) -> FormField {
        let me = self.clone_ref();
        FormField {
            level: 3,
            r: 2,
            ev: Rc::new(move |s, dirs| {
                assert_eq!(dirs.len(), 2);
                let j1 = with_dir(s, &dirs[0]);
                let j2 = with_dir(s, &dirs[1]);
                let (xi, dxi1, g1a) = me.p2_jet(&j1);
                let (_, dxi2, g1b) = me.p2_jet(&j2);
                let gi = g1a.v.inverse().unwrap();
                let th1 = g1a.d.mul(&gi);
                let th2 = g1b.d.mul(&gi);
                // dθ^r = +θ^r ∧ θ^r for the right Maurer-Cartan form
                let dtheta = me.pair_with(&dxi1, &th2) - me.pair_with(&dxi2, &th1)
                    + me.pair_with(&xi, &th1.comm(&th2));
                -dtheta
            }),
        }
    }

    fn clone_ref(&self) -> CoadjointModel {
        CoadjointModel { ctx: self.ctx.clone() }
    }

    /// Max deviation between the exact `p₂*ω` and the chart-engine
    /// `-d(p₂*θ)` on random samples; a built-in cross-check of the de Rham
    /// engine.
    pub fn omega_chart_residual(&self, rng: &mut impl rand::Rng, samples: usize) -> f64 {
        let exact = self.omega_form();
        let chart = form_d(&self.ctx.k, &self.theta_form()).scale(-1.0);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let s = crate::simplicial::random_stack(&self.ctx.k, 3, rng, 0.3);
            let d1 = crate::simplicial::random_dir(&self.ctx.k, &s, rng, 0.8);
            let d2 = crate::simplicial::random_dir(&self.ctx.k, &s, rng, 0.8);
            let a = (exact.ev)(&s, &[d1.clone(), d2.clone()]);
            let b = (chart.ev)(&s, &[d1, d2]);
            worst = worst.max((a - b).abs());
        }
        worst
    }

    /// The nondegeneracy pairing `λ(η, v)`: the three-term combination of
    /// `p₂*ω` on degeneracy-pushforward tangents at the total unit.
    pub fn nondegeneracy_pairing(&self, eta: &[f64], v: &[f64]) -> f64 {
        let k = &self.ctx.k;
        let omega = self.omega_form();
        let unit3 = crate::simplicial::unit_stack(k, 3);
        // v as a tangent at the unit of level 1, pushed by two degeneracies
        let push_v = |i: usize, j: usize| -> StackDir {
            let u1 = crate::simplicial::unit_stack(k, 1);
            let mut d = crate::simplicial::zero_dir(&u1);
            d.slots[0].1 = self.ctx.cm.gspec.alg_from_coords(v);
            let jet = with_dir(&u1, &d);
            let out = wbar_degen(k, i, &wbar_degen(k, j, &jet));
            crate::simplicial::stack_dir(&out)
        };
        // η as the dual-slot tangent at the unit of level 2, one degeneracy
        let push_eta = |i: usize| -> StackDir {
            let u2 = crate::simplicial::unit_stack(k, 2);
            let mut d = crate::simplicial::zero_dir(&u2);
            let dd = self.dim();
            let mut hm = Mat::zeros(dd + 1, dd + 1);
            for (r, &e) in eta.iter().enumerate() {
                hm.set(r, dd, e);
            }
            d.slots[0].0[0] = hm;
            let jet = with_dir(&u2, &d);
            crate::simplicial::stack_dir(&wbar_degen(k, i, &jet))
        };
        // the dual-slot pushforward feeds the first slot of ω; this is the
        // argument order that returns +⟨η, v⟩
        (omega.ev)(&unit3, &[push_eta(0), push_v(2, 1)])
            - (omega.ev)(&unit3, &[push_eta(1), push_v(2, 0)])
            + (omega.ev)(&unit3, &[push_eta(2), push_v(1, 0)])
    }

    /// Max relative error of `λ(η, v) = ⟨η, v⟩` over random pairs.
    pub fn lambda_residual(&self, rng: &mut impl rand::Rng, samples: usize) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let eta: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let want: f64 = eta.iter().zip(&v).map(|(a, b)| a * b).sum();
            let got = self.nondegeneracy_pairing(&eta, &v);
            let scale = want.abs().max(1.0);
            worst = worst.max((got - want).abs() / scale);
        }
        worst
    }

    /// Pointwise residual of the simplicial closure `∂̄(p₂*θ) = 0` and
    /// `∂̄(p₂*ω) = 0` at level 4.
    pub fn closure_residual(&self, rng: &mut impl rand::Rng, samples: usize) -> f64 {
        let k = Rc::new(self.ctx.k.clone());
        let dbt = crate::simplicial::wbar_coboundary(k.clone(), &self.theta_form());
        let dbo = crate::simplicial::wbar_coboundary(k, &self.omega_form());
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let s = crate::simplicial::random_stack(&self.ctx.k, 4, rng, 0.3);
            let d1 = crate::simplicial::random_dir(&self.ctx.k, &s, rng, 0.8);
            let d2 = crate::simplicial::random_dir(&self.ctx.k, &s, rng, 0.8);
            worst = worst.max((dbt.ev)(&s, &[d1.clone()]).abs());
            worst = worst.max((dbo.ev)(&s, &[d1, d2]).abs());
        }
        worst
    }

    /// Residual of the normalization `σ̄_i*(p₂*θ) = 0`.
    pub fn normalization_residual(&self, rng: &mut impl rand::Rng, samples: usize) -> f64 {
        crate::simplicial::normalize_residual(&self.ctx.k, &self.theta_form(), rng, samples)
    }

    /// `Φ^{0110}(p₂*θ)` compared to the duality pairing, the vanishing of
    /// all other blocks, and `Φ(p₂*ω) = -dΦ(p₂*θ)`.
    pub fn verify_phi(&self) -> Result<CoadjointPhiReport, NumError> {
        let d = self.dim();
        let theta = self.theta_form();
        let block = phi_component(&self.ctx, &theta, 0, 1, 1, 0)?;
        let mut pairing_err: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                pairing_err = pairing_err.max((block.at(&[i, j]) - want).abs());
            }
        }
        let mut others: f64 = 0.0;
        for (k, l, a, b) in [(2usize, 0usize, 1usize, 0usize), (1, 0, 0, 1)] {
            let t = phi_component(&self.ctx, &theta, k, l, a, b)?;
            others = others.max(t.norm_inf());
        }
        // Φ(p₂*ω) vs -dΦ(p₂*θ) in the Weil model
        let phi_theta = {
            let mut w = WeilElement::zero(d, d);
            w.set_block((0, 1, 1, 0), block.clone());
            let mut o1 = Tensor::zeros(vec![d; 3]);
            o1.for_each(|_, _| {});
            w
        };
        let alg2 = to_lie2(&self.ctx.alg);
        let want_omega = weil_d(&phi_theta, &alg2).scale(-1.0);
        let phi_omega = phi_full(&self.ctx, &self.omega_form())?;
        let weil_err = phi_omega.sub(&want_omega).norm_inf();
        Ok(CoadjointPhiReport { pairing_err, other_blocks: others, weil_err })
    }
}

#[derive(Clone, Debug)]
pub struct CoadjointPhiReport {
    /// entrywise error of `Φ^{0110}(p₂*θ)` against the identity pairing
    pub pairing_err: f64,
    /// max absolute value over the other admissible blocks of `p₂*θ`
    pub other_blocks: f64,
    /// max block difference of `Φ(p₂*ω) + dΦ(p₂*θ)`
    pub weil_err: f64,
}



#[cfg(test)]
mod phi_tests {
    use super::*;

    #[test]
    fn verify_phi_so3() {
        let m = CoadjointModel::by_name("so3").unwrap();
        let t0 = std::time::Instant::now();
        let rep = m.verify_phi().unwrap();
        println!("phi report: {rep:?} [{:?}]", t0.elapsed());
        assert!(rep.pairing_err < 1e-6, "pairing {:e}", rep.pairing_err);
        assert!(rep.other_blocks < 1e-8, "others {:e}", rep.other_blocks);
        assert!(rep.weil_err < 1e-6, "weil {:e}", rep.weil_err);
    }
}
