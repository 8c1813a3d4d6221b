//! The van Est map: infinitesimal generators of the top-slot action on
//! `W̄_•G`, the degeneracy-pullback Lie-derivative and contraction
//! operators `R` and `J`, and the block-sign-weighted permutation sum `Φ`
//! into the Weil algebra, with its cochain-map checks.

use crate::algebroid::{Ctx, NEST_STEP};
use crate::group2::nerve::{self, NervePt};
use crate::lie2alg::to_lie2;
use crate::numcore::{
    block_sign, curve_derivative_tuned, permutations, BlockPermutation, Mat, NumError, Tensor,
    MAX_PERM_DEGREE,
};
use crate::simplicial::{
    form_d, left_action, stack_dir, stack_value, wbar_coboundary, wbar_degen, with_dir,
    FormField, Stack, StackDir,
};
use crate::weil::{weil_d, weil_delta, WeilElement};
use std::rc::Rc;

/// One letter of an operator word, tagged with its argument.
#[derive(Clone)]
pub enum Letter {
    /// `R_x = σ̄₀* L_{x}` for `x ∈ g₀`: level −1
    Rx(Mat),
    /// `R_y = Σ_β (−1)^β (σ̄₀σ̄_β)* L_{y_{β+1}}` for `y ∈ h`: level −2
    Ry(Mat),
    /// `J_z = σ̄₀* ι_{z}`: level −1, degree −1
    Jz(Mat),
    /// `J_w = Σ_β (−1)^β (σ̄₀σ̄_β)* ι_{w_{β+1}}`: level −2, degree −1
    Jw(Mat),
}

impl Letter {
    pub fn level_drop(&self) -> usize {
        match self {
            Letter::Rx(_) | Letter::Jz(_) => 1,
            Letter::Ry(_) | Letter::Jw(_) => 2,
        }
    }
    pub fn degree_drop(&self) -> usize {
        match self {
            Letter::Rx(_) | Letter::Ry(_) => 0,
            Letter::Jz(_) | Letter::Jw(_) => 1,
        }
    }
}

/// Curve through the identity of the actor group `G_{m-1}` with velocity
/// `σ̂₀^{m-1}(x)` at parameter `t`.
fn x_mover(ctx: &Ctx, m: usize, x: &Mat, t: f64) -> NervePt {
    let xi = nerve::x_slot(&ctx.cm, m - 1, x);
    nerve::slot_exp(&ctx.cm, &xi, t)
}

/// Curve with velocity `y_β ∈ g_{m-1}` (slot `β`, 1-based).
fn y_mover(ctx: &Ctx, m: usize, beta: usize, y: &Mat, t: f64) -> NervePt {
    let yi = nerve::y_slot(&ctx.cm, m - 1, beta, y);
    nerve::slot_exp(&ctx.cm, &yi, t)
}

/// Tangent of the generator at a stack: the top-slot right-translate.
fn gen_dir(ctx: &Ctx, xi: &NervePt, s: &Stack) -> StackDir {
    let top = nerve::mult(&ctx.cm, xi, &s[0].value());
    let mut d = crate::simplicial::zero_dir(s);
    d.slots[0] = (top.hs.iter().map(|h| h.d.clone()).collect(), top.g.d.clone());
    d
}

/// Lie derivative of a form along the flow `t ↦ L_{mover(t)}`.
fn lie_derivative(ctx: &Ctx, mover: Rc<dyn Fn(f64) -> NervePt>, w: &FormField) -> FormField {
    let ev = w.ev.clone();
    let r = w.r;
    let k = ctx.k.clone();
    FormField {
        level: w.level,
        r,
        ev: Rc::new(move |s, dirs| {
            curve_derivative_tuned(
                |t| {
                    let g = mover(t);
                    let base = stack_value(s);
                    let moved = left_action(&k, &g, &base);
                    let nd: Vec<StackDir> = dirs
                        .iter()
                        .map(|d| stack_dir(&left_action(&k, &g, &with_dir(&base, d))))
                        .collect();
                    ev(&moved, &nd)
                },
                0.0,
                NEST_STEP,
                2,
            )
            .expect("generator flow derivative")
        }),
    }
}

/// Contraction of a form with a generator vector field.
fn contraction(ctx: &Ctx, xi: NervePt, w: &FormField) -> FormField {
    let ev = w.ev.clone();
    let ctx = ctx.clone();
    FormField {
        level: w.level,
        r: w.r - 1,
        ev: Rc::new(move |s, dirs| {
            let mut args = Vec::with_capacity(dirs.len() + 1);
            args.push(gen_dir(&ctx, &xi, s));
            args.extend_from_slice(dirs);
            ev(s, &args)
        }),
    }
}

/// Pullback along `σ̄_i` one level down.
fn degen_pullback(ctx: &Ctx, i: usize, w: &FormField) -> FormField {
    let k = ctx.k.clone();
    crate::simplicial::pullback_form(
        Rc::new(move |s: &Stack| wbar_degen(&k, i, s)),
        w.level - 1,
        w,
    )
}

/// Applies one operator letter to a form on `W̄_m G`.
pub fn apply_letter(ctx: &Ctx, letter: &Letter, w: &FormField) -> Result<FormField, NumError> {
    let m = w.level;
    match letter {
        Letter::Rx(x) => {
            if m < 1 {
                return Err(NumError::Capacity("R_x needs level ≥ 1".into()));
            }
            let c = ctx.clone();
            let x = x.clone();
            let lw = lie_derivative(ctx, Rc::new(move |t| x_mover(&c, m, &x, t)), w);
            Ok(degen_pullback(ctx, 0, &lw))
        }
        Letter::Jz(z) => {
            if m < 1 {
                return Err(NumError::Capacity("J_z needs level ≥ 1".into()));
            }
            if w.r < 1 {
                return Err(NumError::Capacity("J of a 0-form".into()));
            }
            let xi = nerve::x_slot(&ctx.cm, m - 1, z);
            let cw = contraction(ctx, xi, w);
            Ok(degen_pullback(ctx, 0, &cw))
        }
        Letter::Ry(y) => {
            if m < 2 {
                return Err(NumError::Capacity("R_y needs level ≥ 2".into()));
            }
            let mut total: Option<FormField> = None;
            for beta in 0..=m - 2 {
                let c = ctx.clone();
                let y2 = y.clone();
                let lw =
                    lie_derivative(ctx, Rc::new(move |t| y_mover(&c, m, beta + 1, &y2, t)), w);
                // (σ̄₀∘σ̄_β)*: wrap with σ̄₀ first, then σ̄_β
                let p1 = degen_pullback(ctx, 0, &lw);
                let p0 = degen_pullback(ctx, beta, &p1);
                // the degree-2 letters enter with the opposite alternation
                let signed = if beta % 2 == 0 { p0.scale(-1.0) } else { p0 };
                total = Some(match total {
                    None => signed,
                    Some(t) => t.add(&signed),
                });
            }
            Ok(total.unwrap())
        }
        Letter::Jw(y) => {
            if m < 2 {
                return Err(NumError::Capacity("J_w needs level ≥ 2".into()));
            }
            if w.r < 1 {
                return Err(NumError::Capacity("J of a 0-form".into()));
            }
            let mut total: Option<FormField> = None;
            for beta in 0..=m - 2 {
                let xi = nerve::y_slot(&ctx.cm, m - 1, beta + 1, y);
                let cw = contraction(ctx, xi, w);
                let p1 = degen_pullback(ctx, 0, &cw);
                let p0 = degen_pullback(ctx, beta, &p1);
                let signed = if beta % 2 == 0 { p0.scale(-1.0) } else { p0 };
                total = Some(match total {
                    None => signed,
                    Some(t) => t.add(&signed),
                });
            }
            Ok(total.unwrap())
        }
    }
}

/// Applies an operator word rightmost-first and evaluates the resulting
/// number (a 0-form on `W̄₀G`).
pub fn apply_word(ctx: &Ctx, word: &[Letter], w: &FormField) -> Result<f64, NumError> {
    let mut cur = w.clone();
    for letter in word.iter().rev() {
        cur = apply_letter(ctx, letter, &cur)?;
    }
    assert_eq!(cur.level, 0, "word level bookkeeping");
    assert_eq!(cur.r, 0, "word degree bookkeeping");
    Ok((cur.ev)(&Vec::new(), &[]))
}

/// The `(k, l, a, b)` block of the van Est map of a normalized form of
/// bidegree `(p, r) = (k+2l+a+2b, a+b)`.
pub fn phi_component(
    ctx: &Ctx,
    omega: &FormField,
    k: usize,
    l: usize,
    a: usize,
    b: usize,
) -> Result<Tensor, NumError> {
    let (p, r) = (omega.level, omega.r);
    assert_eq!(p, k + 2 * l + a + 2 * b, "level vs block");
    assert_eq!(r, a + b, "degree vs block");
    let n = k + l + a + b;
    if n > MAX_PERM_DEGREE {
        return Err(NumError::Capacity(format!("block word length {n}")));
    }
    let (ng, nh) = (ctx.ng_dim(), ctx.nh_dim());
    let mut dims = vec![ng; k];
    dims.extend(std::iter::repeat(nh).take(l));
    dims.extend(std::iter::repeat(ng).take(a));
    dims.extend(std::iter::repeat(nh).take(b));
    let mut out = Tensor::zeros(dims);
    let perms = permutations(n)?;
    let template = out.clone();
    let mut result = Ok(());
    template.for_each(|idx, _| {
        if result.is_err() {
            return;
        }
        let mut letters: Vec<Letter> = Vec::with_capacity(n);
        for s in 0..k {
            letters.push(Letter::Rx(ctx.cm.gspec.basis[idx[s]].clone()));
        }
        for s in 0..l {
            letters.push(Letter::Ry(ctx.cm.hspec.basis[idx[k + s]].clone()));
        }
        for s in 0..a {
            letters.push(Letter::Jz(ctx.cm.gspec.basis[idx[k + l + s]].clone()));
        }
        for s in 0..b {
            letters.push(Letter::Jw(ctx.cm.hspec.basis[idx[k + l + a + s]].clone()));
        }
        let mut acc = 0.0;
        for perm in &perms {
            let bp = BlockPermutation::new((k, l, a, b), perm.clone()).unwrap();
            let sign = block_sign(&bp) as f64;
            let word: Vec<Letter> = perm.iter().map(|&j| letters[j].clone()).collect();
            match apply_word(ctx, &word, omega) {
                Ok(v) => acc += sign * v,
                Err(e) => {
                    result = Err(e);
                    return;
                }
            }
        }
        out.set(idx, acc);
    });
    result.map(|_| out)
}

/// Assembles every admissible block of `Φ(ω)`.
pub fn phi_full(ctx: &Ctx, omega: &FormField) -> Result<WeilElement, NumError> {
    let (p, r) = (omega.level, omega.r);
    let mut out = WeilElement::zero(ctx.ng_dim(), ctx.nh_dim());
    for b in 0..=r {
        let a = r - b;
        if a + 2 * b > p {
            continue;
        }
        let rem = p - a - 2 * b;
        for l in 0..=rem / 2 {
            let k = rem - 2 * l;
            let t = phi_component(ctx, omega, k, l, a, b)?;
            out.set_block((k, l, a, b), t);
        }
    }
    Ok(out)
}

/// Residuals of the cochain-map property: max block difference of
/// `Φ(∂̄ω) - δΦ(ω)` and of `Φ(dω) - dΦ(ω)`.
pub fn cochain_map_residual(ctx: &Ctx, omega: &FormField) -> Result<(f64, f64), NumError> {
    let alg2 = to_lie2(&ctx.alg);
    let phi = phi_full(ctx, omega)?;
    let dbar = wbar_coboundary(Rc::new(ctx.k.clone()), omega);
    let lhs1 = phi_full(ctx, &dbar)?;
    let rhs1 = weil_delta(&phi, &alg2);
    let r1 = lhs1.sub(&rhs1).norm_inf();
    let dw = form_d(&ctx.k, omega);
    let lhs2 = phi_full(ctx, &dw)?;
    let rhs2 = weil_d(&phi, &alg2);
    let r2 = lhs2.sub(&rhs2).norm_inf();
    Ok((r1, r2))
}




#[cfg(test)]
mod heavy_tests {
    use super::*;
    use crate::group2::{differentiate, so3, MatrixCrossedModule};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zigzag_equals_phi_higher() {
        let cm = Rc::new(MatrixCrossedModule::coadjoint(so3()));
        let alg = Rc::new(differentiate(&cm).unwrap());
        let ctx = Ctx::new(cm, alg);
        let mut rng = ChaCha8Rng::seed_from_u64(112);
        for (p, r) in [(3usize, 0usize), (2, 1)] {
            let t0 = std::time::Instant::now();
            let f = crate::verify::random_normalized_form(&ctx.k, p, r, &mut rng);
            let z = crate::algebroid::perturbation_zigzag(&ctx, &f);
            let phi = phi_full(&ctx, &f).unwrap();
            let d = z.sub(&phi).norm_inf();
            println!("zigzag vs phi ({p},{r}): {d:e} [{:?}]", t0.elapsed());
            assert!(d < 1e-5, "mismatch {d:e} at ({p},{r})");
        }
    }

    #[test]
    fn cochain_map_midlevels() {
        let cm = Rc::new(MatrixCrossedModule::coadjoint(so3()));
        let alg = Rc::new(differentiate(&cm).unwrap());
        let ctx = Ctx::new(cm, alg);
        let alg2 = crate::lie2alg::to_lie2(&ctx.alg);
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        for (p, r) in [(2usize, 0usize)] {
            let f = crate::verify::random_normalized_form(&ctx.k, p, r, &mut rng);
            let dbarf = wbar_coboundary(Rc::new(ctx.k.clone()), &f);
            println!("normalized residual of dbar f: {:e}",
                crate::simplicial::normalize_residual(&ctx.k, &dbarf, &mut rng, 4));
            let z1 = crate::algebroid::perturbation_zigzag(&ctx, &dbarf);
            let phi1 = phi_full(&ctx, &dbarf).unwrap();
            println!("A: zig(dbar f) vs phi(dbar f): {:e}", z1.sub(&phi1).norm_inf());
            let zf = crate::algebroid::perturbation_zigzag(&ctx, &f);
            let dz = weil_delta(&zf, &alg2);
            println!("B: zig(dbar f) vs delta zig(f): {:e}", z1.sub(&dz).norm_inf());
            // value matrices of the (1,1,0,0) blocks on both sides
            {
                let lhs = phi_component(&ctx, &dbarf, 1, 1, 0, 0).unwrap();
                let rhs_w = weil_delta(&phi_full(&ctx, &f).unwrap(), &alg2);
                println!("LHS phi(dbar f) (1,1)-block:");
                for i in 0..3 {
                    for j in 0..3 { print!("{:+.5} ", lhs.at(&[i, j])); }
                    println!();
                }
                println!("RHS delta phi(f) (1,1)-block:");
                for i in 0..3 {
                    for j in 0..3 {
                        let v = rhs_w.blocks.get(&(1, 1, 0, 0)).map(|t| t.at(&[i, j])).unwrap_or(0.0);
                        print!("{:+.5} ", v);
                    }
                    println!();
                }
                // R-values of f for reference: Phi^{0100}(f)
                let r0 = phi_component(&ctx, &f, 0, 1, 0, 0).unwrap();
                println!("Phi(f) (0,1)-block: {:?}", r0.a);
            }
            // do the higher homotopies vanish on the zig-zag intermediates?
            {
                use crate::algebroid::{h0_star, hi_star, vertical_delta, LevelData, LevelElement};
                // intermediate of zig(dbar f): start at level 3
                let ev = dbarf.ev.clone();
                let e0 = LevelElement::from_form(3, 0, Rc::new(move |s, dirs| {
                    let base = s[1..].to_vec();
                    let cut: Vec<crate::simplicial::StackDir> = dirs.iter().map(|d| crate::simplicial::StackDir { slots: d.slots[1..].to_vec() }).collect();
                    ev(&base, &cut)
                }));
                let s1 = vertical_delta(&LevelData::new(&ctx, 2), &h0_star(&ctx, &e0));
                for i in 1..=1usize {
                    let hi = hi_star(&ctx, i, &s1);
                    let zero = LevelElement::zero(1, hi.q, hi.r);
                    let d = crate::algebroid::element_distance(&ctx, &hi, &zero, &mut rng, 4);
                    println!("h_{i}* on stage-2 intermediate: {d:e}");
                }
            }
        }
    }
}
