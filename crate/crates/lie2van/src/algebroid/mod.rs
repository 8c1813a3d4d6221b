//! The simplicial 2-term algebroid `(A_•, H_•)` over `W_•G` in its
//! right-invariant trivialization `A_p ≅ W_pG × g_{p+1}`,
//! `H_p ≅ W_pG × h`, together with the double complexes it generates:
//! faces, the vertical differential, the projections and inclusions, the
//! homotopy operators `h₀, h_i, h, η₀, η`, and the perturbation-lemma
//! zig-zag that lands in the Weil algebra.
//!
//! Elements are sums of fiber-generator monomials with form-valued
//! coefficient evaluators; all differentials come out of the shared
//! normal-form engine in `weil::symb`, so the Koszul bookkeeping lives in
//! one place.

mod element;
mod maps;
#[cfg(test)]
mod tests;
mod zigzag;

pub use element::{element_distance, eval_element, random_element, FormCoeff, LevelElement};
pub use maps::{
    eta, eta0_star, h0_star, h_total, hi_star, horizontal_partial, iota_star,
    pi_iota_projector, pi_star,
};
pub use zigzag::perturbation_zigzag;

use crate::group2::nerve::{self, NervePt};
use crate::group2::MatrixCrossedModule;
use crate::lie2alg::CrossedModuleAlgData;
use crate::numcore::Mat;
use crate::simplicial::NerveGroup;
use crate::weil::symb::{Coeff, DeltaData};
use std::rc::Rc;

/// Step size for the nested scalar derivatives inside the vertical
/// differential (see `curve_derivative_tuned`).
pub const NEST_STEP: f64 = 2e-3;

/// Shared context: the crossed module, its differentiated algebra and the
/// nerve as a simplicial group.
#[derive(Clone)]
pub struct Ctx {
    pub cm: Rc<MatrixCrossedModule>,
    pub alg: Rc<CrossedModuleAlgData>,
    pub k: NerveGroup,
}

impl Ctx {
    pub fn new(cm: Rc<MatrixCrossedModule>, alg: Rc<CrossedModuleAlgData>) -> Self {
        let k = NerveGroup(cm.clone());
        Ctx { cm, alg, k }
    }

    pub fn ng_dim(&self) -> usize {
        self.cm.gspec.dim()
    }

    pub fn nh_dim(&self) -> usize {
        self.cm.hspec.dim()
    }

    /// Fiber dimension of `A` at a level: `dim g_{level+1}`.
    pub fn na(&self, level: usize) -> usize {
        (level + 1) * self.nh_dim() + self.ng_dim()
    }

    /// Basis element `j` of `g_q` as a unit-based jet: h-slots first
    /// (slot-major), then the `g`-part.
    pub fn alg_basis(&self, q: usize, j: usize) -> NervePt {
        let nh = self.nh_dim();
        let mut hdirs = vec![Mat::zeros(self.cm.hspec.n, self.cm.hspec.n); q];
        let mut gdir = Mat::zeros(self.cm.gspec.n, self.cm.gspec.n);
        if j < q * nh {
            hdirs[j / nh] = self.cm.hspec.basis[j % nh].clone();
        } else {
            gdir = self.cm.gspec.basis[j - q * nh].clone();
        }
        nerve::alg_elt(&self.cm, hdirs, gdir)
    }

    /// Coordinates of a unit-based algebra jet in the slot-major basis.
    pub fn alg_coords(&self, e: &NervePt) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.na(e.level().saturating_sub(1)));
        for h in &e.hs {
            out.extend(self.cm.hspec.coords_of(&h.d));
        }
        out.extend(self.cm.gspec.coords_of(&e.g.d));
        out
    }

    pub fn alg_from_coords(&self, q: usize, c: &[f64]) -> NervePt {
        let nh = self.nh_dim();
        let hdirs = (0..q)
            .map(|s| self.cm.hspec.alg_from_coords(&c[s * nh..(s + 1) * nh]))
            .collect();
        let gdir = self.cm.gspec.alg_from_coords(&c[q * nh..]);
        nerve::alg_elt(&self.cm, hdirs, gdir)
    }
}

/// Structure data of the level-`p` algebroid feeding the differential:
/// bracket tables of `g_{p+1}` in the generator convention, the inclusion
/// `j: h → g_{p+1}` (slot 0), the mixed bracket into `ker ∂̂₀`, and the
/// anchor action on coefficient forms.
pub struct LevelData {
    pub ctx: Ctx,
    pub level: usize,
    na: usize,
    nh: usize,
    cgg: Vec<f64>,
    jmat: Vec<f64>,
    rmix: Vec<f64>,
    /// `∂̂₀` of each `A`-basis element, as an algebra element of `g_level`
    anchors: Vec<NervePt>,
}

impl LevelData {
    pub fn new(ctx: &Ctx, level: usize) -> Self {
        let q = level + 1;
        let na = ctx.na(level);
        let nh = ctx.nh_dim();
        let mut cgg = vec![0.0; na * na * na];
        for a in 0..na {
            let ba = ctx.alg_basis(q, a);
            for b in 0..na {
                let bb = ctx.alg_basis(q, b);
                let br = nerve::alg_bracket(&ctx.cm, &ctx.alg, &ba, &bb);
                let co = ctx.alg_coords(&br);
                for c in 0..na {
                    cgg[(a * na + b) * na + c] = co[c];
                }
            }
        }
        // j: h → g_{q}, slot 0; its image coordinates are the first nh
        let mut jmat = vec![0.0; na * nh];
        for e in 0..nh {
            jmat[e * nh + e] = 1.0;
        }
        // mixed bracket ℓ₂(e_a, u_f) = slot-0 part of [e_a, (u_f)₀]
        let mut rmix = vec![0.0; na * nh * nh];
        for a in 0..na {
            let ba = ctx.alg_basis(q, a);
            for f in 0..nh {
                let yf = nerve::y_slot(&ctx.cm, q, 1, &ctx.cm.hspec.basis[f]);
                let br = nerve::alg_bracket(&ctx.cm, &ctx.alg, &ba, &yf);
                let co = ctx.cm.hspec.coords_of(&br.hs[0].d);
                for e in 0..nh {
                    rmix[(a * nh + f) * nh + e] = co[e];
                }
                // the bracket with ker ∂̂₀ stays in ker ∂̂₀
                for s in 1..br.hs.len() {
                    debug_assert!(br.hs[s].d.norm_inf() < 1e-9);
                }
                debug_assert!(br.g.d.norm_inf() < 1e-9);
            }
        }
        let anchors = (0..na)
            .map(|a| nerve::face(&ctx.cm, 0, &ctx.alg_basis(q, a)))
            .collect();
        LevelData { ctx: ctx.clone(), level, na, nh, cgg, jmat, rmix, anchors }
    }
}

impl DeltaData<FormCoeff> for LevelData {
    fn dims(&self) -> (usize, usize) {
        (self.na, self.nh)
    }
    fn c_gg(&self, a: usize, b: usize, c: usize) -> f64 {
        self.cgg[(a * self.na + b) * self.na + c]
    }
    fn j_map(&self, c: usize, e: usize) -> f64 {
        if c < self.nh {
            self.jmat[c * self.nh + e]
        } else {
            0.0
        }
    }
    fn r_mix(&self, a: usize, f: usize, e: usize) -> f64 {
        self.rmix[(a * self.nh + f) * self.nh + e]
    }

    fn anchor_lie(&self, c: &FormCoeff, a: usize) -> Option<FormCoeff> {
        let anchor = self.anchors[a].clone();
        if anchor.dir_norm() < 1e-15 {
            return None;
        }
        let ctx = self.ctx.clone();
        let f = c.f.clone();
        let s = c.s;
        Some(FormCoeff {
            s,
            f: Rc::new(move |stack, dirs| {
                crate::numcore::curve_derivative_tuned(
                    |t| {
                        let mover = nerve::slot_exp(&ctx.cm, &anchor, t);
                        let base = crate::simplicial::stack_value(stack);
                        let moved = crate::simplicial::left_action(&ctx.k, &mover, &base);
                        let mut newdirs = Vec::with_capacity(dirs.len());
                        for d in dirs {
                            let j = crate::simplicial::left_action(
                                &ctx.k,
                                &mover,
                                &crate::simplicial::with_dir(&base, d),
                            );
                            newdirs.push(crate::simplicial::stack_dir(&j));
                        }
                        f(&moved, &newdirs)
                    },
                    0.0,
                    NEST_STEP,
                    2,
                )
                .expect("anchor flow derivative")
            }),
        })
    }

    fn anchor_contract(&self, c: &FormCoeff, a: usize) -> Option<FormCoeff> {
        if c.s == 0 {
            return None;
        }
        let anchor = self.anchors[a].clone();
        if anchor.dir_norm() < 1e-15 {
            return None;
        }
        let ctx = self.ctx.clone();
        let f = c.f.clone();
        let s = c.s;
        Some(FormCoeff {
            s: s - 1,
            f: Rc::new(move |stack, dirs| {
                // the anchor generator: top-slot right-translate of ∂̂₀ξ
                let top = nerve::mult(&ctx.cm, &anchor, &stack[0].value());
                let mut gen = crate::simplicial::zero_dir(stack);
                gen.slots[0] = (top.hs.iter().map(|h| h.d.clone()).collect(), top.g.d.clone());
                let mut args = Vec::with_capacity(dirs.len() + 1);
                args.push(gen);
                args.extend_from_slice(dirs);
                f(stack, &args)
            }),
        })
    }
}

/// Vertical differential of a level element.
pub fn vertical_delta(data: &LevelData, e: &LevelElement) -> LevelElement {
    assert_eq!(e.level, data.level);
    LevelElement { level: e.level, q: e.q + 1, r: e.r, e: e.e.delta(data) }
}

/// Frame coordinates of the face `∂ᵢ` on `A`-fibers: for `i ≥ 1` the
/// constant algebra map `∂̂_{i+1}`; for `i = 0` the ε-twisted composition
/// `X ↦ (T d₁ X ⋆ 0_{pr_p ε_p(γ⃗)}) ⋆ 0⁻¹` at the target frame point.
pub fn a_face_frame(ctx: &Ctx, level: usize, i: usize, base: &crate::simplicial::Stack, j: usize) -> Vec<f64> {
    let cm = &*ctx.cm;
    if i > 0 {
        let img = nerve::face(cm, i + 1, &ctx.alg_basis(level + 1, j));
        return ctx.alg_coords(&img);
    }
    let top = base[0].value();
    let u = nerve::degen(cm, 0, &top);
    let x = nerve::right_translate(cm, &ctx.alg_basis(level + 1, j), &u);
    let y = nerve::face(cm, 1, &x);
    let eps = crate::simplicial::epsilon::epsilon(&ctx.k, &crate::simplicial::stack_value(base));
    let v = eps[1].value();
    let z = nerve::mult(cm, &y, &v);
    let zi = nerve::inv(cm, &z.value());
    let framed = nerve::mult(cm, &z, &zi);
    ctx.alg_coords(&framed)
}

/// Frame coordinates of `∂ᵢ` on `H`-fibers (identity for `i ≥ 1`).
pub fn h_face_frame(ctx: &Ctx, level: usize, i: usize, base: &crate::simplicial::Stack, f: usize) -> Vec<f64> {
    let nh = ctx.nh_dim();
    if i > 0 {
        let mut out = vec![0.0; nh];
        out[f] = 1.0;
        return out;
    }
    let full = a_face_frame_h_embedded(ctx, level, base, f);
    full
}

fn a_face_frame_h_embedded(ctx: &Ctx, level: usize, base: &crate::simplicial::Stack, f: usize) -> Vec<f64> {
    let cm = &*ctx.cm;
    let top = base[0].value();
    let u = nerve::degen(cm, 0, &top);
    let yf = nerve::y_slot(cm, level + 1, 1, &cm.hspec.basis[f]);
    let x = nerve::right_translate(cm, &yf, &u);
    let y = nerve::face(cm, 1, &x);
    let eps = crate::simplicial::epsilon::epsilon(&ctx.k, &crate::simplicial::stack_value(base));
    let v = eps[1].value();
    let z = nerve::mult(cm, &y, &v);
    let zi = nerve::inv(cm, &z.value());
    let framed = nerve::mult(cm, &z, &zi);
    // the image lies in ker ∂̂₀: slot 0 carries everything
    for s in 1..framed.hs.len() {
        debug_assert!(framed.hs[s].d.norm_inf() < 1e-8);
    }
    debug_assert!(framed.g.d.norm_inf() < 1e-8);
    ctx.cm.hspec.coords_of(&framed.hs[0].d)
}

