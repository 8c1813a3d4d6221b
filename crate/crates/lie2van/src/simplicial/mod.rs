//! Generic simplicial-manifold machinery for the models built out of a
//! simplicial group: the classifying construction `W̄K`, the décalage, the
//! universal-bundle model `W K = dec(W̄K)`, the left action, simplicial
//! coboundaries, normalization, and a chart-based de Rham differential.

pub mod epsilon;

use crate::group2::nerve::{self, NervePt};
use crate::group2::MatrixCrossedModule;
use crate::numcore::{curve_derivative_tuned, Mat};
use rand::Rng;
use std::rc::Rc;

/// A point of `W̄_m K`: the stack `(γ^{m-1}; …; γ^0)`, stored top slot
/// first. Jets in the slots carry one tangent direction.
pub type Stack = Vec<NervePt>;

/// A simplicial group with elements represented as [`NervePt`]s. The level
/// argument is explicit so that the décalage can shift it.
pub trait SGroup {
    fn unit(&self, p: usize) -> NervePt;
    fn mult(&self, p: usize, a: &NervePt, b: &NervePt) -> NervePt;
    fn face(&self, p: usize, i: usize, a: &NervePt) -> NervePt;
    fn degen(&self, p: usize, i: usize, a: &NervePt) -> NervePt;
    fn random_elt(&self, p: usize, rng: &mut dyn rand::RngCore, scale: f64) -> NervePt;
}

/// The nerve of a matrix crossed module as a simplicial group.
#[derive(Clone)]
pub struct NerveGroup(pub Rc<MatrixCrossedModule>);

impl SGroup for NerveGroup {
    fn unit(&self, p: usize) -> NervePt {
        nerve::unit(&self.0, p)
    }
    fn mult(&self, p: usize, a: &NervePt, b: &NervePt) -> NervePt {
        debug_assert_eq!(a.level(), p);
        nerve::mult(&self.0, a, b)
    }
    fn face(&self, p: usize, i: usize, a: &NervePt) -> NervePt {
        debug_assert_eq!(a.level(), p);
        nerve::face(&self.0, i, a)
    }
    fn degen(&self, p: usize, i: usize, a: &NervePt) -> NervePt {
        debug_assert_eq!(a.level(), p);
        nerve::degen(&self.0, i, a)
    }
    fn random_elt(&self, p: usize, mut rng: &mut dyn rand::RngCore, scale: f64) -> NervePt {
        nerve::random_elt(&self.0, p, &mut rng, scale)
    }
}

/// Décalage of a simplicial group: level `p` is the inner level `p+1`,
/// faces and degeneracies shift by one.
#[derive(Clone)]
pub struct DecGroup<K: SGroup>(pub Rc<K>);

impl<K: SGroup> SGroup for DecGroup<K> {
    fn unit(&self, p: usize) -> NervePt {
        self.0.unit(p + 1)
    }
    fn mult(&self, p: usize, a: &NervePt, b: &NervePt) -> NervePt {
        self.0.mult(p + 1, a, b)
    }
    fn face(&self, p: usize, i: usize, a: &NervePt) -> NervePt {
        self.0.face(p + 1, i + 1, a)
    }
    fn degen(&self, p: usize, i: usize, a: &NervePt) -> NervePt {
        self.0.degen(p + 1, i + 1, a)
    }
    fn random_elt(&self, p: usize, rng: &mut dyn rand::RngCore, scale: f64) -> NervePt {
        self.0.random_elt(p + 1, rng, scale)
    }
}

/// Face `∂̄_i: W̄_m K → W̄_{m-1} K` on a stack of length `m` (so `n = m-1`
/// in the three-case formula: drop the top, twist in the middle, or apply
/// the last faces down the stack).
pub fn wbar_face<K: SGroup>(k: &K, i: usize, s: &Stack) -> Stack {
    let m = s.len();
    assert!(m >= 1 && i <= m, "wbar face index");
    let n = m - 1;
    if i == 0 {
        return s[1..].to_vec();
    }
    if i == n + 1 {
        return (0..n).map(|j| k.face(n - j, n - j, &s[j])).collect();
    }
    let mut out = Vec::with_capacity(m - 1);
    for j in 0..i - 1 {
        out.push(k.face(n - j, i - 1 - j, &s[j]));
    }
    // twisted middle: (d₀ γ^{n-i+1}) ⊻ γ^{n-i}
    let d0_top = k.face(n - (i - 1), 0, &s[i - 1]);
    out.push(k.mult(n - i, &d0_top, &s[i]));
    out.extend_from_slice(&s[i + 1..]);
    out
}

/// Degeneracy `σ̄_i: W̄_m K → W̄_{m+1} K`.
pub fn wbar_degen<K: SGroup>(k: &K, i: usize, s: &Stack) -> Stack {
    let m = s.len();
    assert!(i <= m, "wbar degeneracy index");
    let n = m.wrapping_sub(1);
    let mut out = Vec::with_capacity(m + 1);
    for j in 0..i {
        out.push(k.degen(n - j, i - 1 - j, &s[j]));
    }
    out.push(k.unit(m - i));
    out.extend_from_slice(&s[i..]);
    out
}

/// Face of `W_p K = W̄_{p+1} K` (index shift of the décalage).
pub fn w_face<K: SGroup>(k: &K, i: usize, s: &Stack) -> Stack {
    wbar_face(k, i + 1, s)
}

/// Degeneracy of `W_p K`.
pub fn w_degen<K: SGroup>(k: &K, i: usize, s: &Stack) -> Stack {
    wbar_degen(k, i + 1, s)
}

/// `∂̄₀` of `W K`-stacks viewed in `W̄ K`: drops the top slot.
pub fn wbar_d0(s: &Stack) -> Stack {
    s[1..].to_vec()
}

/// The left action of the top-level group on `W̄_m K`.
pub fn left_action<K: SGroup>(k: &K, elt: &NervePt, s: &Stack) -> Stack {
    let mut out = s.to_vec();
    let top_level = s.len() - 1;
    out[0] = k.mult(top_level, elt, &s[0]);
    out
}

pub fn unit_stack<K: SGroup>(k: &K, m: usize) -> Stack {
    (0..m).map(|j| k.unit(m - 1 - j)).collect()
}

pub fn random_stack<K: SGroup>(k: &K, m: usize, rng: &mut impl Rng, scale: f64) -> Stack {
    (0..m).map(|j| k.random_elt(m - 1 - j, rng, scale)).collect()
}

pub fn stack_value(s: &Stack) -> Stack {
    s.iter().map(NervePt::value).collect()
}

pub fn stack_dist(a: &Stack, b: &Stack) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max(x.dist_value(y)))
}

pub fn stack_dir_dist(a: &Stack, b: &Stack) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max(x.dist_dir(y)))
}

/// One tangent direction at a stack, stored per slot.
#[derive(Clone, Debug)]
pub struct StackDir {
    pub slots: Vec<(Vec<Mat>, Mat)>,
}

pub fn stack_dir(s: &Stack) -> StackDir {
    StackDir {
        slots: s
            .iter()
            .map(|p| (p.hs.iter().map(|h| h.d.clone()).collect(), p.g.d.clone()))
            .collect(),
    }
}

pub fn with_dir(base: &Stack, d: &StackDir) -> Stack {
    base.iter()
        .zip(&d.slots)
        .map(|(p, (hd, gd))| NervePt {
            hs: p
                .hs
                .iter()
                .zip(hd)
                .map(|(h, dm)| crate::numcore::JMat::new(h.v.clone(), dm.clone()))
                .collect(),
            g: crate::numcore::JMat::new(p.g.v.clone(), gd.clone()),
        })
        .collect()
}

pub fn zero_dir(base: &Stack) -> StackDir {
    StackDir {
        slots: base
            .iter()
            .map(|p| {
                (
                    p.hs.iter().map(|h| Mat::zeros(h.v.rows, h.v.cols)).collect(),
                    Mat::zeros(p.g.v.rows, p.g.v.cols),
                )
            })
            .collect(),
    }
}

/// A random tangent direction to the stack manifold: each matrix component
/// moves as `ξ·m` with `ξ` a random combination of the algebra basis, so
/// flows along these directions stay in the group.
pub fn random_dir(k: &NerveGroup, base: &Stack, rng: &mut impl Rng, scale: f64) -> StackDir {
    let cm = &*k.0;
    let mut d = zero_dir(base);
    for (slot, (hd, gd)) in base.iter().zip(&mut d.slots) {
        for (h, m) in slot.hs.iter().zip(hd.iter_mut()) {
            let c: Vec<f64> =
                (0..cm.hspec.dim()).map(|_| scale * (rng.gen::<f64>() - 0.5)).collect();
            *m = cm.hspec.alg_from_coords(&c).mul(&h.v);
        }
        let c: Vec<f64> = (0..cm.gspec.dim()).map(|_| scale * (rng.gen::<f64>() - 0.5)).collect();
        *gd = cm.gspec.alg_from_coords(&c).mul(&slot.g.v);
    }
    d
}

/// Pushes a tangent through a stack map implemented on jets.
pub fn push_dir(f: impl Fn(&Stack) -> Stack, base: &Stack, d: &StackDir) -> (Stack, StackDir) {
    let out = f(&with_dir(base, d));
    (stack_value(&out), stack_dir(&out))
}

/// A smooth real function on one level of a simplicial model.
#[derive(Clone)]
pub struct Cochain {
    pub level: usize,
    pub f: Rc<dyn Fn(&Stack) -> f64>,
}

/// A differential `r`-form on one level, evaluated on a point and `r`
/// tangent directions.
#[derive(Clone)]
pub struct FormField {
    pub level: usize,
    pub r: usize,
    pub ev: Rc<dyn Fn(&Stack, &[StackDir]) -> f64>,
}

impl FormField {
    pub fn from_cochain(c: &Cochain) -> FormField {
        let f = c.f.clone();
        FormField { level: c.level, r: 0, ev: Rc::new(move |s, _| f(s)) }
    }

    pub fn add(&self, other: &FormField) -> FormField {
        assert_eq!((self.level, self.r), (other.level, other.r));
        let (a, b) = (self.ev.clone(), other.ev.clone());
        FormField { level: self.level, r: self.r, ev: Rc::new(move |s, v| a(s, v) + b(s, v)) }
    }

    pub fn scale(&self, c: f64) -> FormField {
        let a = self.ev.clone();
        FormField { level: self.level, r: self.r, ev: Rc::new(move |s, v| c * a(s, v)) }
    }
}

/// Pullback of a form along a stack map (with its exact tangent).
pub fn pullback_form(f: Rc<dyn Fn(&Stack) -> Stack>, new_level: usize, w: &FormField) -> FormField {
    let ev = w.ev.clone();
    let r = w.r;
    FormField {
        level: new_level,
        r,
        ev: Rc::new(move |s, dirs| {
            let base = f(&stack_value(s));
            let mut pushed = Vec::with_capacity(dirs.len());
            for d in dirs {
                let out = f(&with_dir(&stack_value(s), d));
                pushed.push(stack_dir(&out));
            }
            ev(&base, &pushed)
        }),
    }
}

/// Alternating sum of face pullbacks `∂ω = Σ (-1)^i ∂̄_i^* ω` on `W̄`-level
/// forms (or cochains via `r = 0`).
pub fn wbar_coboundary<K: SGroup + 'static>(k: Rc<K>, w: &FormField) -> FormField {
    let m = w.level; // W̄_m, faces map W̄_{m+1} → W̄_m
    let ev = w.ev.clone();
    let r = w.r;
    FormField {
        level: m + 1,
        r,
        ev: Rc::new(move |s, dirs| {
            let mut total = 0.0;
            for i in 0..=m + 1 {
                let base = wbar_face(&*k, i, &stack_value(s));
                let mut pushed = Vec::with_capacity(dirs.len());
                for d in dirs {
                    let out = wbar_face(&*k, i, &with_dir(&stack_value(s), d));
                    pushed.push(stack_dir(&out));
                }
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * ev(&base, &pushed);
            }
            total
        }),
    }
}

/// Max residual of `σ̄_i^* ω` over all degeneracy indices at random points.
pub fn normalize_residual(
    k: &NerveGroup,
    w: &FormField,
    rng: &mut impl Rng,
    samples: usize,
) -> f64 {
    let m = w.level;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let s = random_stack(k, m - 1, rng, 0.3);
        let dirs: Vec<StackDir> = (0..w.r).map(|_| random_dir(k, &s, rng, 1.0)).collect();
        for i in 0..m {
            let base = wbar_degen(k, i, &s);
            let pushed: Vec<StackDir> = dirs
                .iter()
                .map(|d| stack_dir(&wbar_degen(k, i, &with_dir(&s, d))))
                .collect();
            worst = worst.max((w.ev)(&base, &pushed).abs());
        }
    }
    worst
}

/// Projects a form onto the normalized subcomplex by removing the
/// degenerate parts `(σ̄_i ∘ ∂̄_{i+1})^* ω` in increasing order of `i`;
/// each step kills `σ̄_i^*` and preserves the kernels already arranged.
pub fn normalize_form<K: SGroup + 'static>(k: Rc<K>, w: &FormField) -> FormField {
    let m = w.level;
    let mut cur = w.clone();
    {
        for i in 0..m {
            let kk = k.clone();
            let ev = cur.ev.clone();
            let r = cur.r;
            let fi = move |s: &Stack| wbar_face(&*kk, i + 1, s);
            let kk2 = k.clone();
            let si = move |s: &Stack| wbar_degen(&*kk2, i, s);
            let pull = Rc::new(move |s: &Stack, dirs: &[StackDir]| {
                let comp = |st: &Stack| si(&fi(st));
                let base = comp(&stack_value(s));
                let pushed: Vec<StackDir> = dirs
                    .iter()
                    .map(|d| stack_dir(&comp(&with_dir(&stack_value(s), d))))
                    .collect();
                ev(&base, &pushed)
            });
            let prev = cur.ev.clone();
            cur = FormField {
                level: m,
                r,
                ev: Rc::new(move |s, dirs| prev(s, dirs) - pull(s, dirs)),
            };
        }
    }
    cur
}

/// Chart step size for the de Rham engine; see `curve_derivative_tuned`.
pub const DR_STEP: f64 = 2e-3;

/// De Rham differential of a form on a stack level, computed in the
/// right-translation frame of the slot components: directional derivatives
/// along component flows `exp(t ξ) m` with `ξ = V·m⁻¹` projected onto the
/// Lie algebra span, plus the exact commutator corrections of the frame
/// fields. The projection keeps the flows on the group submanifolds.
pub fn form_d(k: &NerveGroup, w: &FormField) -> FormField {
    let ev = w.ev.clone();
    let r = w.r;
    let k = k.clone();
    FormField {
        level: w.level,
        r: r + 1,
        ev: Rc::new(move |s, dirs| {
            assert_eq!(dirs.len(), r + 1);
            let base = stack_value(s);
            let mut total = 0.0;
            // translated frame coefficients Ṽ = proj(V·m⁻¹) per component
            let tilde: Vec<StackDir> =
                dirs.iter().map(|d| right_frame(&k, &base, d)).collect();
            for i in 0..=r {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let others: Vec<usize> = (0..=r).filter(|&j| j != i).collect();
                let val = curve_derivative_tuned(
                    |t| {
                        let moved = flow_stack(&base, &tilde[i], t);
                        let vdirs: Vec<StackDir> = others
                            .iter()
                            .map(|&j| apply_frame(&moved, &tilde[j]))
                            .collect();
                        ev(&moved, &vdirs)
                    },
                    0.0,
                    DR_STEP,
                    2,
                )
                .expect("form_d flow derivative");
                total += sign * val;
            }
            for i in 0..=r {
                for j in i + 1..=r {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    // [Ṽᵢ, Ṽⱼ]-frame field evaluated at the base: -[ṽᵢ, ṽⱼ]·m
                    let br = frame_bracket(&tilde[i], &tilde[j]);
                    let mut args = Vec::with_capacity(r);
                    args.push(apply_frame(&base, &br));
                    for m in 0..=r {
                        if m != i && m != j {
                            args.push(dirs[m].clone());
                        }
                    }
                    total += sign * ev(&base, &args);
                }
            }
            total
        }),
    }
}

fn right_frame(k: &NerveGroup, base: &Stack, d: &StackDir) -> StackDir {
    let cm = &*k.0;
    let proj_h = |x: &Mat| cm.hspec.alg_from_coords(&cm.hspec.coords_of(x));
    let proj_g = |x: &Mat| cm.gspec.alg_from_coords(&cm.gspec.coords_of(x));
    StackDir {
        slots: base
            .iter()
            .zip(&d.slots)
            .map(|(p, (hd, gd))| {
                (
                    p.hs
                        .iter()
                        .zip(hd)
                        .map(|(h, dm)| proj_h(&dm.mul(&h.v.inverse().unwrap())))
                        .collect(),
                    proj_g(&gd.mul(&p.g.v.inverse().unwrap())),
                )
            })
            .collect(),
    }
}

fn apply_frame(base: &Stack, tilde: &StackDir) -> StackDir {
    StackDir {
        slots: base
            .iter()
            .zip(&tilde.slots)
            .map(|(p, (hd, gd))| {
                (
                    p.hs.iter().zip(hd).map(|(h, t)| t.mul(&h.v)).collect(),
                    gd.mul(&p.g.v),
                )
            })
            .collect(),
    }
}

fn frame_bracket(a: &StackDir, b: &StackDir) -> StackDir {
    StackDir {
        slots: a
            .slots
            .iter()
            .zip(&b.slots)
            .map(|((ah, ag), (bh, bg))| {
                (
                    ah.iter().zip(bh).map(|(x, y)| x.comm(y).scale(-1.0)).collect(),
                    ag.comm(bg).scale(-1.0),
                )
            })
            .collect(),
    }
}

fn flow_stack(base: &Stack, tilde: &StackDir, t: f64) -> Stack {
    base.iter()
        .zip(&tilde.slots)
        .map(|(p, (hd, gd))| NervePt {
            hs: p
                .hs
                .iter()
                .zip(hd)
                .map(|(h, v)| crate::numcore::JMat::point(v.scale(t).expm().mul(&h.v)))
                .collect(),
            g: crate::numcore::JMat::point(gd.scale(t).expm().mul(&p.g.v)),
        })
        .collect()
}

/// Simplicial-identity residual of a W̄-type model over a simplicial group.
pub fn wbar_identity_residual<K: SGroup>(
    k: &K,
    level_cap: usize,
    rng: &mut impl Rng,
    samples_per_level: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 2..=level_cap {
        for _ in 0..samples_per_level {
            let s = random_stack(k, m, rng, 0.3);
            let n = m - 1;
            for i in 0..=n {
                for j in i + 1..=n {
                    let l = wbar_face(k, i, &wbar_face(k, j, &s));
                    let r = wbar_face(k, j - 1, &wbar_face(k, i, &s));
                    worst = worst.max(stack_dist(&l, &r));
                }
            }
            for j in 0..m {
                let sj = wbar_degen(k, j, &s);
                for i in 0..=m {
                    let dsj = wbar_face(k, i, &sj);
                    let want = if i == j || i == j + 1 {
                        s.clone()
                    } else if i < j {
                        wbar_degen(k, j - 1, &wbar_face(k, i, &s))
                    } else {
                        wbar_degen(k, j, &wbar_face(k, i - 1, &s))
                    };
                    worst = worst.max(stack_dist(&dsj, &want));
                }
                for jj in 0..m {
                    if jj <= j {
                        let l = wbar_degen(k, j + 1, &wbar_degen(k, jj, &s));
                        let r = wbar_degen(k, jj, &wbar_degen(k, j, &s));
                        worst = worst.max(stack_dist(&l, &r));
                    }
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group2::{so3, MatrixCrossedModule};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wbar_identities_hold() {
        let cm = Rc::new(MatrixCrossedModule::conjugation(so3()));
        let k = NerveGroup(cm);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let r = wbar_identity_residual(&k, 5, &mut rng, 6);
        assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn dec_identities_follow() {
        let cm = Rc::new(MatrixCrossedModule::coadjoint(so3()));
        let k = Rc::new(NerveGroup(cm));
        let dec = DecGroup(k);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let r = wbar_identity_residual(&dec, 4, &mut rng, 6);
        assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let cm = Rc::new(MatrixCrossedModule::conjugation(so3()));
        let k = Rc::new(NerveGroup(cm));
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        // a random smooth function at level 1
        let f = FormField {
            level: 1,
            r: 0,
            ev: Rc::new(|s: &Stack, _: &[StackDir]| {
                let g = &s[0].g.v;
                (g.at(0, 1) + 0.3 * g.at(2, 2)).sin() + g.at(1, 0)
            }),
        };
        let df = wbar_coboundary(k.clone(), &f);
        let ddf = wbar_coboundary(k.clone(), &df);
        for _ in 0..10 {
            let s = random_stack(&*k, 3, &mut rng, 0.3);
            assert!((ddf.ev)(&s, &[]).abs() < 1e-12);
        }
    }

    #[test]
    fn left_action_is_simplicial_on_w() {
        // faces of W intertwine the top-slot left action with the matching
        // face of the actor
        let cm = Rc::new(MatrixCrossedModule::conjugation(so3()));
        let k = NerveGroup(cm);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for p in 1..=3 {
            let s = random_stack(&k, p + 1, &mut rng, 0.3);
            let elt = k.random_elt(p, &mut rng, 0.3);
            for i in 0..=p {
                let l = w_face(&k, i, &left_action(&k, &elt, &s));
                let actor = k.face(p, i, &elt);
                let r = left_action(&k, &actor, &w_face(&k, i, &s));
                assert!(stack_dist(&l, &r) < 1e-10, "face {i} level {p}");
            }
        }
    }

    #[test]
    fn chart_d_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let cm = Rc::new(MatrixCrossedModule::conjugation(so3()));
        let k = NerveGroup(cm);
        let f = FormField {
            level: 2,
            r: 0,
            ev: Rc::new(|s: &Stack, _: &[StackDir]| {
                let a = &s[0].hs[0].v;
                let b = &s[1].g.v;
                (a.at(0, 2) * b.at(1, 1)).cos() + a.at(2, 1)
            }),
        };
        let df = form_d(&k, &f);
        let ddf = form_d(&k, &df);
        for _ in 0..4 {
            let s = random_stack(&k, 2, &mut rng, 0.3);
            let d1 = random_dir(&k, &s, &mut rng, 0.7);
            let d2 = random_dir(&k, &s, &mut rng, 0.7);
            let v = (ddf.ev)(&s, &[d1, d2]);
            assert!(v.abs() < 1e-6, "dd residual {v:e}");
        }
    }
}
