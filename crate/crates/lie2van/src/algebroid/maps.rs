//! Pullback machinery along bundle maps of the simplicial algebroid, and
//! the concrete maps built from it: the horizontal faces, the homotopies
//! `h₀, h_i, h`, the alternative homotopy `η₀, η`, and the projections and
//! inclusions linking the levels to the Weil algebra of `h → g₀`.

use super::element::{FormCoeff, LevelElement};
use super::{a_face_frame, h_face_frame, Ctx};
use crate::group2::nerve;
use crate::lie2alg::basis;
use crate::numcore::Tensor;
use crate::simplicial::{
    stack_dir, stack_value, w_face, wbar_degen, wbar_face, with_dir, Stack, StackDir,
};
use crate::weil::symb::{assemble, Factor, Kind, Monomial};
use crate::weil::WeilElement;
use std::rc::Rc;

/// Columns of a fiber map `A_dst → A_src` (and its `H` companion) in the
/// frame bases: `col(j)` is the source-coordinate vector of the image of
/// the `j`-th destination basis element.
#[derive(Clone)]
pub enum Cols {
    Const(Rc<Vec<Vec<f64>>>),
    Dep(Rc<dyn Fn(&Stack, usize) -> Vec<f64>>),
}

impl Cols {
    fn col(&self, base: &Stack, j: usize) -> Vec<f64> {
        match self {
            Cols::Const(m) => m[j].clone(),
            Cols::Dep(f) => f(base, j),
        }
    }

    fn dst_dim(&self, fallback: usize) -> usize {
        match self {
            Cols::Const(m) => m.len(),
            Cols::Dep(_) => fallback,
        }
    }
}

/// A bundle map from level `dst` to level `src`, acting contravariantly on
/// elements.
pub struct BundleMap {
    pub src_level: usize,
    pub dst_level: usize,
    pub base: Rc<dyn Fn(&Stack) -> Stack>,
    pub a: Cols,
    pub h: Cols,
}

/// Pullback of a level element along a bundle map.
pub fn pullback(ctx: &Ctx, bm: &BundleMap, elt: &LevelElement) -> LevelElement {
    assert_eq!(elt.level, bm.src_level);
    let na_dst = bm.a.dst_dim(ctx.na(bm.dst_level));
    let nh_dst = bm.h.dst_dim(ctx.nh_dim());
    let mut out = LevelElement::zero(bm.dst_level, elt.q, elt.r);
    for (m, c) in &elt.e.terms {
        // enumerate destination index assignments per factor
        let src_factors = m.factors();
        let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
        for f in &src_factors {
            let n = match f.kind {
                Kind::X | Kind::Z => na_dst,
                Kind::Y | Kind::W => nh_dst,
            };
            let mut next = Vec::with_capacity(choices.len() * n);
            for ch in &choices {
                for j in 0..n {
                    let mut c2 = ch.clone();
                    c2.push(j);
                    next.push(c2);
                }
            }
            choices = next;
        }
        for ch in choices {
            let dst_seq: Vec<Factor> = src_factors
                .iter()
                .zip(&ch)
                .map(|(f, &j)| Factor { kind: f.kind, idx: j as u8 })
                .collect();
            let Some((sign, mono)) = assemble(&dst_seq) else { continue };
            // constant part of the weight, when all columns are constant
            if let (Cols::Const(am), Cols::Const(hm)) = (&bm.a, &bm.h) {
                let mut w = sign;
                for (f, &j) in src_factors.iter().zip(&ch) {
                    w *= match f.kind {
                        Kind::X | Kind::Z => am[j][f.idx as usize],
                        Kind::Y | Kind::W => hm[j][f.idx as usize],
                    };
                    if w == 0.0 {
                        break;
                    }
                }
                if w == 0.0 {
                    continue;
                }
                let cf = c.f.clone();
                let base = bm.base.clone();
                let s = c.s;
                out.add_term(
                    mono,
                    FormCoeff {
                        s,
                        f: Rc::new(move |st, dirs| {
                            let bv = base(&stack_value(st));
                            let mut pushed = Vec::with_capacity(dirs.len());
                            for d in dirs {
                                pushed.push(stack_dir(&base(&with_dir(&stack_value(st), d))));
                            }
                            w * cf(&bv, &pushed)
                        }),
                    },
                );
            } else {
                let cf = c.f.clone();
                let base = bm.base.clone();
                let s = c.s;
                let picks: Vec<(Kind, usize, usize)> = src_factors
                    .iter()
                    .zip(&ch)
                    .map(|(f, &j)| (f.kind, f.idx as usize, j))
                    .collect();
                let acols = bm.a.clone();
                let hcols = bm.h.clone();
                out.add_term(
                    mono,
                    FormCoeff {
                        s,
                        f: Rc::new(move |st, dirs| {
                            let stv = stack_value(st);
                            let mut w = sign;
                            for &(kind, i, j) in &picks {
                                let col = match kind {
                                    Kind::X | Kind::Z => acols.col(&stv, j),
                                    Kind::Y | Kind::W => hcols.col(&stv, j),
                                };
                                w *= col[i];
                                if w == 0.0 {
                                    return 0.0;
                                }
                            }
                            let bv = base(&stv);
                            let mut pushed = Vec::with_capacity(dirs.len());
                            for d in dirs {
                                pushed.push(stack_dir(&base(&with_dir(&stv, d))));
                            }
                            w * cf(&bv, &pushed)
                        }),
                    },
                );
            }
        }
    }
    out
}

fn identity_cols(n: usize) -> Cols {
    Cols::Const(Rc::new((0..n).map(|j| basis(n, j)).collect()))
}

/// Constant fiber columns of the algebra map `∂̂_{i+1}: g_{q} → g_{q-1}`.
fn face_fiber_cols(ctx: &Ctx, q: usize, i: usize) -> Cols {
    let cols = (0..ctx.na(q - 1))
        .map(|j| ctx.alg_coords(&nerve::face(&ctx.cm, i + 1, &ctx.alg_basis(q, j))))
        .collect();
    Cols::Const(Rc::new(cols))
}

/// The face pullback `∂ᵢ*` from level `p` to level `p+1`.
pub fn face_map(ctx: &Ctx, p: usize, i: usize) -> BundleMap {
    let k = ctx.k.clone();
    let base: Rc<dyn Fn(&Stack) -> Stack> = Rc::new(move |s| w_face(&k, i, s));
    let (a, h) = if i == 0 {
        let c1 = ctx.clone();
        let c2 = ctx.clone();
        (
            Cols::Dep(Rc::new(move |st: &Stack, j| a_face_frame(&c1, p + 1, 0, st, j))),
            Cols::Dep(Rc::new(move |st: &Stack, f| h_face_frame(&c2, p + 1, 0, st, f))),
        )
    } else {
        (face_fiber_cols(ctx, p + 2, i), identity_cols(ctx.nh_dim()))
    };
    BundleMap { src_level: p, dst_level: p + 1, base, a, h }
}

/// Horizontal differential `∂ = Σ (-1)^i ∂ᵢ*` from level `p` to `p+1`.
pub fn horizontal_partial(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let p = e.level;
    let mut out = LevelElement::zero(p + 1, e.q, e.r);
    for i in 0..=p + 1 {
        let bm = face_map(ctx, p, i);
        let t = pullback(ctx, &bm, e);
        out = out.add(&t.scale(if i % 2 == 0 { 1.0 } else { -1.0 }));
    }
    out
}

/// The contracting homotopy `h₀* : C^{p+1,q} → C^{p,q}`: base `σ̄₀`,
/// fiber `σ̂₀` on `A` and the identity on `H`-coordinates.
pub fn h0_star(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    let k = ctx.k.clone();
    let base: Rc<dyn Fn(&Stack) -> Stack> = Rc::new(move |s| wbar_degen(&k, 0, s));
    let cols = (0..ctx.na(p))
        .map(|j| ctx.alg_coords(&nerve::degen(&ctx.cm, 0, &ctx.alg_basis(p + 1, j))))
        .collect();
    let bm = BundleMap {
        src_level: e.level,
        dst_level: p,
        base,
        a: Cols::Const(Rc::new(cols)),
        h: identity_cols(ctx.nh_dim()),
    };
    pullback(ctx, &bm, e)
}

/// The higher homotopies `h_i* : C^{p+1,q} → C^{p,q}` for `1 ≤ i ≤ p`:
/// the composition of honest bundle maps `σ̄₀-padding ∘ ∂₀ ∘ ∂₁ ∘ … ∘
/// ∂_{i-1}` (faces applied highest-first), which is what makes the
/// telescoping of `∂h + h∂ = Id − π*ι*` close.
pub fn hi_star(ctx: &Ctx, i: usize, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    assert!((1..=p).contains(&i));
    let k = ctx.k.clone();
    let base: Rc<dyn Fn(&Stack) -> Stack> = Rc::new(move |s| {
        let mut cur = s.clone();
        for j in (0..i).rev() {
            cur = w_face(&k, j, &cur);
        }
        for _ in 0..i + 1 {
            cur = wbar_degen(&k, 0, &cur);
        }
        cur
    });
    let c2 = ctx.clone();
    let a = Cols::Dep(Rc::new(move |st: &Stack, j| {
        let mut stack = st.clone();
        let mut coords = basis(c2.na(p), j);
        let mut level = p;
        for fj in (0..i).rev() {
            let cols: Vec<Vec<f64>> = (0..c2.na(level))
                .map(|t| a_face_frame(&c2, level, fj, &stack, t))
                .collect();
            coords = apply_cols(&cols, &coords, c2.na(level - 1));
            stack = w_face(&c2.k, fj, &stack);
            level -= 1;
        }
        for _ in 0..i + 1 {
            let cols: Vec<Vec<f64>> = (0..c2.na(level))
                .map(|t| {
                    c2.alg_coords(&nerve::degen(&c2.cm, 0, &c2.alg_basis(level + 1, t)))
                })
                .collect();
            coords = apply_cols(&cols, &coords, c2.na(level + 1));
            stack = wbar_degen(&c2.k, 0, &stack);
            level += 1;
        }
        coords
    }));
    let c3 = ctx.clone();
    let h = Cols::Dep(Rc::new(move |st: &Stack, f| {
        // only ∂₀ acts nontrivially on H-coordinates
        let mut stack = st.clone();
        let mut coords = basis(c3.nh_dim(), f);
        let mut level = p;
        for fj in (0..i).rev() {
            if fj == 0 {
                let cols: Vec<Vec<f64>> = (0..c3.nh_dim())
                    .map(|t| h_face_frame(&c3, level, 0, &stack, t))
                    .collect();
                coords = apply_cols(&cols, &coords, c3.nh_dim());
            }
            stack = w_face(&c3.k, fj, &stack);
            level -= 1;
        }
        coords
    }));
    let bm = BundleMap { src_level: e.level, dst_level: p, base, a, h };
    pullback(ctx, &bm, e)
}

/// The full homotopy `h = Σ_{i=0}^{p} (-1)^i h_i*`.
pub fn h_total(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    let mut out = h0_star(ctx, e);
    for i in 1..=p {
        let t = hi_star(ctx, i, e);
        out = out.add(&t.scale(if i % 2 == 0 { 1.0 } else { -1.0 }));
    }
    out
}

/// The alternative homotopy base map `(η₀)_p : W_pG → W_{p+1}G`.
pub fn eta0_base(ctx: &Ctx, s: &Stack) -> Stack {
    let cm = &*ctx.cm;
    let p = s.len() - 1;
    match p {
        0 => {
            let g = &s[0];
            vec![nerve::degen(cm, 0, g), nerve::inv(cm, g)]
        }
        1 => {
            let gamma = &s[0];
            let g = &s[1];
            let bar = nerve::bar1(cm, gamma);
            let top = nerve::append_arrow(cm, gamma, &bar);
            let d0g = nerve::face(cm, 0, gamma);
            let t = nerve::mult(cm, &d0g, g);
            let mid = nerve::mult(
                cm,
                &nerve::inv(cm, &bar),
                &nerve::degen(cm, 0, &t),
            );
            vec![top, mid, nerve::inv(cm, &t)]
        }
        _ => {
            let top_in = &s[0];
            let comp = nerve::composite(cm, top_in);
            let top = nerve::append_arrow(cm, top_in, &nerve::bar1(cm, &comp));
            // second slot: (γ^{p-1}, bar(γ^{p-1}_[]) ⋈ pr₂ (η₀)₁(γ^p_1; d₁γ^{p-1}_1))
            let g1 = nerve::NervePt { hs: vec![s[0].hs[0].clone()], g: nerve::arrow_bases(cm, &s[0])[0].clone() };
            let a1_next = nerve::NervePt {
                hs: vec![s[1].hs[0].clone()],
                g: nerve::arrow_bases(cm, &s[1])[0].clone(),
            };
            let d1a = nerve::face(cm, 1, &a1_next);
            let e1 = eta0_base(ctx, &vec![g1, d1a]);
            let x = nerve::join1(cm, &nerve::bar1(cm, &nerve::composite(cm, &s[1])), &e1[1]);
            let mid = nerve::append_arrow(cm, &s[1], &x);
            let tail_full = eta0_base(ctx, &w_face(&ctx.k, 0, s));
            let mut out = Vec::with_capacity(p + 2);
            out.push(top);
            out.push(mid);
            out.extend_from_slice(&tail_full[1..]);
            out
        }
    }
}

/// Fiber columns of `η₀` on `A`: the tangent of `v ↦ (v, bar(v_[]))` at
/// the frame point, re-expressed in the target frame.
fn eta0_a_cols(ctx: &Ctx, dst_level: usize, st: &Stack, j: usize) -> Vec<f64> {
    let cm = &*ctx.cm;
    let u = nerve::degen(cm, 0, &st[0].value());
    let x = nerve::right_translate(cm, &ctx.alg_basis(dst_level + 1, j), &u);
    let comp = nerve::composite(cm, &x);
    let img = nerve::append_arrow(cm, &x, &nerve::bar1(cm, &comp));
    let framed = nerve::mult(cm, &img, &nerve::inv(cm, &img.value()));
    ctx.alg_coords(&framed)
}

/// `η₀* : C^{p+1,q} → C^{p,q}` with the sign `(-1)^{p+1}` of the source
/// level.
pub fn eta0_star(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    let c1 = ctx.clone();
    let base: Rc<dyn Fn(&Stack) -> Stack> = Rc::new(move |s| eta0_base(&c1, s));
    let c2 = ctx.clone();
    let bm = BundleMap {
        src_level: e.level,
        dst_level: p,
        base,
        a: Cols::Dep(Rc::new(move |st: &Stack, j| eta0_a_cols(&c2, p, st, j))),
        h: identity_cols(ctx.nh_dim()),
    };
    let sign = if (p + 1) % 2 == 0 { 1.0 } else { -1.0 };
    pullback(ctx, &bm, e).scale(sign)
}

/// `η_i* = ((η₀)^{i+1} ∘ ∂_{p+1-i} ∘ … ∘ ∂_p)*` with the source-level
/// sign. The high-index face chain keeps the side conditions `η∘η = 0`
/// and `ι*∘η = 0` that this homotopy is used for.
pub fn etai_star(ctx: &Ctx, i: usize, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    assert!(i <= p);
    if i == 0 {
        return eta0_star(ctx, e);
    }
    let c1 = ctx.clone();
    let base: Rc<dyn Fn(&Stack) -> Stack> = Rc::new(move |s| {
        let mut cur = s.clone();
        for idx in (p + 1 - i..=p).rev() {
            cur = w_face(&c1.k, idx, &cur);
        }
        for _ in 0..=i {
            cur = eta0_base(&c1, &cur);
        }
        cur
    });
    let c2 = ctx.clone();
    let a = Cols::Dep(Rc::new(move |st: &Stack, j| {
        // follow the composition through the intermediate base points
        let mut stack = st.clone();
        let mut coords = basis(c2.na(p), j);
        let mut level = p;
        for idx in (p + 1 - i..=p).rev() {
            let cols: Vec<Vec<f64>> = (0..c2.na(level))
                .map(|t| {
                    c2.alg_coords(&nerve::face(&c2.cm, idx + 1, &c2.alg_basis(level + 1, t)))
                })
                .collect();
            coords = apply_cols(&cols, &coords, c2.na(level - 1));
            stack = w_face(&c2.k, idx, &stack);
            level -= 1;
        }
        for _ in 0..=i {
            let cols: Vec<Vec<f64>> =
                (0..c2.na(level)).map(|t| eta0_a_cols(&c2, level, &stack, t)).collect();
            coords = apply_cols(&cols, &coords, c2.na(level + 1));
            stack = eta0_base(&c2, &stack);
            level += 1;
        }
        coords
    }));
    let bm = BundleMap {
        src_level: e.level,
        dst_level: p,
        base,
        a,
        h: identity_cols(ctx.nh_dim()),
    };
    let sign = if (p + 1) % 2 == 0 { 1.0 } else { -1.0 };
    pullback(ctx, &bm, e).scale(sign)
}

fn apply_cols(cols: &[Vec<f64>], v: &[f64], out_dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; out_dim];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0.0 {
            continue;
        }
        for (t, &c) in cols[j].iter().enumerate() {
            out[t] += vj * c;
        }
    }
    out
}

/// `η = Σ_{i=0}^{p} (-1)^i η_i*`.
pub fn eta(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let p = e.level - 1;
    let mut out = eta0_star(ctx, e);
    for i in 1..=p {
        let t = etai_star(ctx, i, e);
        out = out.add(&t.scale(if i % 2 == 0 { 1.0 } else { -1.0 }));
    }
    out
}

/// `π_p* ∘ ι_p*` with the bidegree of the input preserved even when the
/// projection is zero.
pub fn pi_iota_projector(ctx: &Ctx, e: &LevelElement) -> LevelElement {
    let w = iota_star(ctx, e);
    let mut out = pi_star(ctx, e.level, &w);
    out.q = e.q;
    out.r = e.r;
    out
}

/// `π_p*`: pulls a Weil-algebra element back to level `p` along the
/// projections `π̂ = ∂̂₁∘…∘∂̂_{p+1}` on `A` and the identity on `H`.
pub fn pi_star(ctx: &Ctx, p: usize, w: &WeilElement) -> LevelElement {
    let ng = ctx.ng_dim();
    let cols: Vec<Vec<f64>> = (0..ctx.na(p))
        .map(|j| {
            let mut v = ctx.alg_basis(p + 1, j);
            for _ in 0..=p {
                v = nerve::face(&ctx.cm, 1, &v);
            }
            ctx.cm.gspec.coords_of(&v.g.d)
        })
        .collect();
    let e = w.to_element();
    let mut out: Option<LevelElement> = None;
    for (m, &c) in &e.terms {
        let (q, r) = m.bidegree();
        let out_ref = out.get_or_insert_with(|| LevelElement::zero(p, q, r));
        assert_eq!((out_ref.q, out_ref.r), (q, r), "pi_star needs homogeneous input");
        let src_factors = m.factors();
        let mut choices: Vec<(f64, Vec<Factor>)> = vec![(c, Vec::new())];
        for f in &src_factors {
            let mut next = Vec::new();
            match f.kind {
                Kind::X | Kind::Z => {
                    for (j, col) in cols.iter().enumerate() {
                        let w = col[f.idx as usize];
                        if w == 0.0 {
                            continue;
                        }
                        for (cw, seq) in &choices {
                            let mut s2 = seq.clone();
                            s2.push(Factor { kind: f.kind, idx: j as u8 });
                            next.push((cw * w, s2));
                        }
                    }
                }
                Kind::Y | Kind::W => {
                    for (cw, seq) in &choices {
                        let mut s2 = seq.clone();
                        s2.push(*f);
                        next.push((*cw, s2));
                    }
                }
            }
            choices = next;
        }
        let _ = ng;
        for (cw, seq) in choices {
            if let Some((sign, mono)) = assemble(&seq) {
                out_ref.e.add_term(mono, FormCoeff::constant(cw * sign));
            }
        }
    }
    out.unwrap_or_else(|| LevelElement::zero(p, 0, 0))
}

/// `ι_p*`: evaluates a level element at the all-units stack on the lifted
/// basis vectors, producing a Weil-algebra element. Blocks with a base-form
/// part are annihilated.
pub fn iota_star(ctx: &Ctx, e: &LevelElement) -> WeilElement {
    let p = e.level;
    let (ng, nh) = (ctx.ng_dim(), ctx.nh_dim());
    // lifted basis coordinates: x ↦ σ̂₀^{p+1} x, y ↦ y in slot 0
    let xlift: Vec<Vec<f64>> = (0..ng)
        .map(|i| {
            let mut v = nerve::x_slot(&ctx.cm, 0, &ctx.cm.gspec.basis[i]);
            for _ in 0..=p {
                v = nerve::degen(&ctx.cm, 0, &v);
            }
            ctx.alg_coords(&v)
        })
        .collect();
    let unit = crate::simplicial::unit_stack(&ctx.k, p + 1);
    let mut out = WeilElement::zero(ng, nh);
    // collect present blocks with s = 0
    let mut blocks: std::collections::BTreeSet<(usize, usize, usize, usize)> =
        std::collections::BTreeSet::new();
    for (m, c) in &e.e.terms {
        if c.s == 0 {
            blocks.insert(m.block());
        }
    }
    for key in blocks {
        let (k, l, a, b) = key;
        let mut dims = vec![ng; k];
        dims.extend(std::iter::repeat(nh).take(l));
        dims.extend(std::iter::repeat(ng).take(a));
        dims.extend(std::iter::repeat(nh).take(b));
        let mut t = Tensor::zeros(dims);
        let template = t.clone();
        template.for_each(|idx, _| {
            let xs: Vec<Vec<f64>> = idx[..k].iter().map(|&i| xlift[i].clone()).collect();
            let ys: Vec<Vec<f64>> = idx[k..k + l].iter().map(|&i| basis(nh, i)).collect();
            let zs: Vec<Vec<f64>> =
                idx[k + l..k + l + a].iter().map(|&i| xlift[i].clone()).collect();
            let ws: Vec<Vec<f64>> =
                idx[k + l + a..].iter().map(|&i| basis(nh, i)).collect();
            let v = super::eval_element(e, &unit, &xs, &ys, &zs, &ws, &[]);
            t.set(idx, v);
        });
        out.set_block(key, t);
    }
    out
}

/// `ι_p* ∘ π_p* = Id` sanity value used in tests.
pub fn iota_pi_roundtrip(ctx: &Ctx, p: usize, w: &WeilElement) -> WeilElement {
    iota_star(ctx, &pi_star(ctx, p, w))
}
