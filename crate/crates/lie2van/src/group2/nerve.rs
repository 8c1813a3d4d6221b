//! The nerve levels `G_p ≅ H^p ⋊ G` of the strict 2-group of a crossed
//! module, in semidirect coordinates.
//!
//! Coordinate convention: an element `(h₁, …, h_p; g)` is the composable
//! string of arrows `a₁, …, a_p` with `a_p = (h_p, g)` at the source end,
//! `a_i = (h_i, x_i)` based at `x_i = ∂(h_{i+1})⋯∂(h_p)·g`, and `a_1` at the
//! target end. Arrows compose as `(h₂, ∂(h₁)g) ⋈ (h₁, g) = (h₂h₁, g)` and
//! the group law is arrow-wise semidirect: `(h,g)⊻(h',g') = (h·(h')^g, gg')`.
//!
//! All operations carry first-order jets, so every tangent map is exact.

use super::MatrixCrossedModule;
use crate::numcore::{JMat, Mat};
use rand::Rng;

/// A point of a nerve level (with an optional tangent in the jets).
/// `hs.len()` is the level.
#[derive(Clone, Debug)]
pub struct NervePt {
    pub hs: Vec<JMat>,
    pub g: JMat,
}

impl NervePt {
    pub fn level(&self) -> usize {
        self.hs.len()
    }

    pub fn value(&self) -> NervePt {
        NervePt {
            hs: self.hs.iter().map(JMat::drop_dir).collect(),
            g: self.g.drop_dir(),
        }
    }

    pub fn dir_norm(&self) -> f64 {
        let mut m = self.g.d.norm_inf();
        for h in &self.hs {
            m = m.max(h.d.norm_inf());
        }
        m
    }

    pub fn dist_value(&self, other: &NervePt) -> f64 {
        let mut m = self.g.v.sub(&other.g.v).norm_inf();
        for (a, b) in self.hs.iter().zip(&other.hs) {
            m = m.max(a.v.sub(&b.v).norm_inf());
        }
        m
    }

    pub fn dist_dir(&self, other: &NervePt) -> f64 {
        let mut m = self.g.d.sub(&other.g.d).norm_inf();
        for (a, b) in self.hs.iter().zip(&other.hs) {
            m = m.max(a.d.sub(&b.d).norm_inf());
        }
        m
    }

    /// Scales the jet directions (the point part is untouched).
    pub fn scale_dir(&self, s: f64) -> NervePt {
        NervePt {
            hs: self.hs.iter().map(|h| JMat::new(h.v.clone(), h.d.scale(s))).collect(),
            g: JMat::new(self.g.v.clone(), self.g.d.scale(s)),
        }
    }

    pub fn add_dir(&self, other: &NervePt) -> NervePt {
        NervePt {
            hs: self
                .hs
                .iter()
                .zip(&other.hs)
                .map(|(a, b)| JMat::new(a.v.clone(), a.d.add(&b.d)))
                .collect(),
            g: JMat::new(self.g.v.clone(), self.g.d.add(&other.g.d)),
        }
    }
}

pub fn unit(cm: &MatrixCrossedModule, p: usize) -> NervePt {
    NervePt { hs: vec![cm.unit_h(); p], g: cm.unit_g() }
}

/// Base points `x_i` of the arrows, index `i` matching `hs[i]`
/// (`x_{p-1} = g`, going up toward the target end).
pub fn arrow_bases(cm: &MatrixCrossedModule, u: &NervePt) -> Vec<JMat> {
    let p = u.level();
    let mut xs = vec![u.g.clone(); p];
    for i in (0..p.saturating_sub(1)).rev() {
        xs[i] = cm.dmap_j(&u.hs[i + 1]).mul(&xs[i + 1]);
    }
    xs
}

/// Target of the whole string: `∂(h₁)⋯∂(h_p)·g`.
pub fn target(cm: &MatrixCrossedModule, u: &NervePt) -> JMat {
    let mut t = u.g.clone();
    for h in u.hs.iter().rev() {
        t = cm.dmap_j(h).mul(&t);
    }
    t
}

/// The group law `⊻` on a nerve level, arrow-wise semidirect.
pub fn mult(cm: &MatrixCrossedModule, u: &NervePt, v: &NervePt) -> NervePt {
    assert_eq!(u.level(), v.level(), "level mismatch in nerve mult");
    let xs = arrow_bases(cm, u);
    let hs = u
        .hs
        .iter()
        .zip(&v.hs)
        .zip(&xs)
        .map(|((hu, hv), x)| hu.mul(&cm.alpha_j(x, hv)))
        .collect();
    NervePt { hs, g: u.g.mul(&v.g) }
}

/// Group inverse for `⊻`.
pub fn inv(cm: &MatrixCrossedModule, u: &NervePt) -> NervePt {
    let xs = arrow_bases(cm, u);
    let hs = u
        .hs
        .iter()
        .zip(&xs)
        .map(|(h, x)| cm.alpha_j(&x.inv(), &h.inv()))
        .collect();
    NervePt { hs, g: u.g.inv() }
}

/// Nerve face `d_i: G_p → G_{p-1}`.
pub fn face(cm: &MatrixCrossedModule, i: usize, u: &NervePt) -> NervePt {
    let p = u.level();
    assert!(p >= 1 && i <= p, "face index {i} out of range at level {p}");
    if i == 0 {
        NervePt { hs: u.hs[1..].to_vec(), g: u.g.clone() }
    } else if i == p {
        let g = cm.dmap_j(&u.hs[p - 1]).mul(&u.g);
        NervePt { hs: u.hs[..p - 1].to_vec(), g }
    } else {
        let mut hs = Vec::with_capacity(p - 1);
        hs.extend_from_slice(&u.hs[..i - 1]);
        hs.push(u.hs[i - 1].mul(&u.hs[i]));
        hs.extend_from_slice(&u.hs[i + 1..]);
        NervePt { hs, g: u.g.clone() }
    }
}

/// Nerve degeneracy `s_i: G_p → G_{p+1}`, inserting an identity arrow at
/// vertex `i`.
pub fn degen(cm: &MatrixCrossedModule, i: usize, u: &NervePt) -> NervePt {
    let p = u.level();
    assert!(i <= p, "degeneracy index {i} out of range at level {p}");
    let mut hs = Vec::with_capacity(p + 1);
    hs.extend_from_slice(&u.hs[..i]);
    hs.push(cm.unit_h());
    hs.extend_from_slice(&u.hs[i..]);
    NervePt { hs, g: u.g.clone() }
}

/// Groupoid composite of the whole string, an arrow of `G₁`.
pub fn composite(cm: &MatrixCrossedModule, u: &NervePt) -> NervePt {
    let mut h = cm.unit_h();
    for hi in &u.hs {
        h = h.mul(hi);
    }
    NervePt { hs: vec![h], g: u.g.clone() }
}

/// Groupoid composition on `G₁`: `a ⋈ b` with source of `a` equal to the
/// target of `b`.
pub fn join1(cm: &MatrixCrossedModule, a: &NervePt, b: &NervePt) -> NervePt {
    debug_assert!(a.level() == 1 && b.level() == 1);
    debug_assert!(
        a.g.v.sub(&target(cm, b).v).norm_inf() < 1e-8,
        "join of non-composable arrows"
    );
    NervePt { hs: vec![a.hs[0].mul(&b.hs[0])], g: b.g.clone() }
}

/// Groupoid inverse on `G₁`: `(h, g) ↦ (h⁻¹, ∂(h)g)`.
pub fn bar1(cm: &MatrixCrossedModule, a: &NervePt) -> NervePt {
    debug_assert!(a.level() == 1);
    NervePt { hs: vec![a.hs[0].inv()], g: target(cm, a) }
}

/// Prepends an arrow at the target end (the new `a₁`).
pub fn prepend_arrow(cm: &MatrixCrossedModule, x: &NervePt, u: &NervePt) -> NervePt {
    debug_assert!(x.level() == 1);
    debug_assert!(
        x.g.v.sub(&target(cm, u).v).norm_inf() < 1e-8,
        "prepended arrow not composable"
    );
    let mut hs = Vec::with_capacity(u.level() + 1);
    hs.push(x.hs[0].clone());
    hs.extend_from_slice(&u.hs);
    NervePt { hs, g: u.g.clone() }
}

/// Appends an arrow at the source end (the new `a_{p+1}`).
pub fn append_arrow(cm: &MatrixCrossedModule, u: &NervePt, x: &NervePt) -> NervePt {
    debug_assert!(x.level() == 1);
    debug_assert!(
        target(cm, x).v.sub(&u.g.v).norm_inf() < 1e-8,
        "appended arrow not composable"
    );
    let mut hs = u.hs.clone();
    hs.push(x.hs[0].clone());
    NervePt { hs, g: x.g.clone() }
}

/// An algebra element of `g_p = Lie(G_p)` as a unit-based jet.
pub fn alg_elt(cm: &MatrixCrossedModule, h_dirs: Vec<Mat>, g_dir: Mat) -> NervePt {
    let hs = h_dirs
        .into_iter()
        .map(|d| JMat::new(Mat::eye(cm.hspec.n), d))
        .collect();
    NervePt { hs, g: JMat::new(Mat::eye(cm.gspec.n), g_dir) }
}

pub fn zero_alg(cm: &MatrixCrossedModule, p: usize) -> NervePt {
    unit(cm, p)
}

/// `y ∈ h` embedded at slot `beta` (1-based) of `g_p`; slot 1 spans
/// `ker ∂̂₀`.
pub fn y_slot(cm: &MatrixCrossedModule, p: usize, beta: usize, y: &Mat) -> NervePt {
    assert!((1..=p).contains(&beta));
    let mut e = unit(cm, p);
    e.hs[beta - 1] = JMat::new(Mat::eye(cm.hspec.n), y.clone());
    e
}

/// `x ∈ g₀` embedded as `σ̂₀^p(x) ∈ g_p`.
pub fn x_slot(cm: &MatrixCrossedModule, p: usize, x: &Mat) -> NervePt {
    let mut e = unit(cm, p);
    e.g = JMat::new(Mat::eye(cm.gspec.n), x.clone());
    e
}

/// One-parameter curve `c(t)` through the identity of `G_p` with initial
/// velocity the given algebra element: slot-wise exponentials. For elements
/// concentrated in a single slot this is the exact one-parameter subgroup.
pub fn slot_exp(cm: &MatrixCrossedModule, xi: &NervePt, t: f64) -> NervePt {
    let hs = xi.hs.iter().map(|h| JMat::point(h.d.scale(t).expm())).collect();
    NervePt { hs, g: JMat::point(xi.g.d.scale(t).expm()) }
}

/// Right-translation of an algebra element to the point `u`:
/// the tangent `ξ ⋆ 0_u` at `u` (jet form).
pub fn right_translate(cm: &MatrixCrossedModule, xi: &NervePt, u: &NervePt) -> NervePt {
    mult(cm, xi, &u.value())
}

/// Translates a tangent at `u` back to the identity and returns the algebra
/// element `X ⋆ 0_{u⁻¹}` (jet at the unit).
pub fn to_frame(cm: &MatrixCrossedModule, at_u: &NervePt) -> NervePt {
    let ui = inv(cm, &at_u.value());
    mult(cm, at_u, &ui)
}

pub fn random_elt(
    cm: &MatrixCrossedModule,
    p: usize,
    rng: &mut impl Rng,
    scale: f64,
) -> NervePt {
    let hs = (0..p)
        .map(|_| JMat::point(cm.hspec.random_elt(rng, scale)))
        .collect();
    NervePt { hs, g: JMat::point(cm.gspec.random_elt(rng, scale)) }
}

/// Random algebra element of `g_p` with Gaussian coordinates.
pub fn random_alg(
    cm: &MatrixCrossedModule,
    p: usize,
    rng: &mut impl Rng,
    scale: f64,
) -> NervePt {
    let mut hdirs = Vec::with_capacity(p);
    for _ in 0..p {
        let c: Vec<f64> = (0..cm.hspec.dim()).map(|_| scale * gauss(rng)).collect();
        hdirs.push(cm.hspec.alg_from_coords(&c));
    }
    let c: Vec<f64> = (0..cm.gspec.dim()).map(|_| scale * gauss(rng)).collect();
    alg_elt(cm, hdirs, cm.gspec.alg_from_coords(&c))
}

fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Nerve Lie algebra bracket on `g_p` in the generator convention, computed
/// arrow-wise from the semidirect structure. Exact.
pub fn alg_bracket(
    cm: &MatrixCrossedModule,
    alg: &crate::lie2alg::CrossedModuleAlgData,
    xi: &NervePt,
    zeta: &NervePt,
) -> NervePt {
    let p = xi.level();
    assert_eq!(p, zeta.level());
    // arrow-wise: a_i = (η_i, v_i) with v_i = dmap(η_{i+1} + ... + η_p) + v
    let xi_arrows = arrow_alg_parts(cm, alg, xi);
    let ze_arrows = arrow_alg_parts(cm, alg, zeta);
    // semidirect bracket per arrow in the generator convention:
    // [(y,x),(y',x')] = ([y,y']_h + ρ(x)y' − ρ(x')y, [x,x']_g)
    let nh = cm.hspec.dim();
    let mut hdirs = Vec::with_capacity(p);
    for i in 0..p {
        let (y, x) = &xi_arrows[i];
        let (y2, x2) = &ze_arrows[i];
        let mut out = alg.h.bracket(y, y2);
        let t1 = alg.act(x, y2);
        let t2 = alg.act(x2, y);
        for k in 0..nh {
            out[k] += t1[k] - t2[k];
        }
        hdirs.push(cm.hspec.alg_from_coords(&out));
    }
    let gx = cm.gspec.coords_of(&xi.g.d);
    let gz = cm.gspec.coords_of(&zeta.g.d);
    let gb = alg.g.bracket(&gx, &gz);
    alg_elt(cm, hdirs, cm.gspec.alg_from_coords(&gb))
}

fn arrow_alg_parts(
    cm: &MatrixCrossedModule,
    alg: &crate::lie2alg::CrossedModuleAlgData,
    xi: &NervePt,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let p = xi.level();
    let mut out = Vec::with_capacity(p);
    let mut vg = cm.gspec.coords_of(&xi.g.d);
    // walk from the source end accumulating dmap parts
    let mut parts = vec![(vec![], vec![]); p];
    for i in (0..p).rev() {
        let y = cm.hspec.coords_of(&xi.hs[i].d);
        parts[i] = (y.clone(), vg.clone());
        let dy = alg.dpartial(&y);
        for k in 0..vg.len() {
            vg[k] += dy[k];
        }
    }
    out.extend(parts);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group2::{so3, MatrixCrossedModule};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn conj_so3() -> MatrixCrossedModule {
        MatrixCrossedModule::conjugation(so3())
    }

    #[test]
    fn unit_is_neutral() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = random_elt(&cm, 3, &mut rng, 0.3);
        let e = unit(&cm, 3);
        assert!(mult(&cm, &u, &e).dist_value(&u) < 1e-14);
        assert!(mult(&cm, &e, &u).dist_value(&u) < 1e-14);
        let ui = inv(&cm, &u);
        assert!(mult(&cm, &u, &ui).dist_value(&e) < 1e-12);
    }

    #[test]
    fn level_one_semidirect_formula() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_elt(&cm, 1, &mut rng, 0.3);
        let v = random_elt(&cm, 1, &mut rng, 0.3);
        let prod = mult(&cm, &u, &v);
        // (h,g)·(h',g') = (h·(h')^g, gg')
        let want_h = u.hs[0].mul(&cm.alpha_j(&u.g, &v.hs[0]));
        assert!(prod.hs[0].v.sub(&want_h.v).norm_inf() < 1e-13);
        assert!(prod.g.v.sub(&u.g.mul(&v.g).v).norm_inf() < 1e-13);
    }

    #[test]
    fn associativity_on_random_triples() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in 1..=3 {
            for _ in 0..20 {
                let a = random_elt(&cm, p, &mut rng, 0.3);
                let b = random_elt(&cm, p, &mut rng, 0.3);
                let c = random_elt(&cm, p, &mut rng, 0.3);
                let l = mult(&cm, &mult(&cm, &a, &b), &c);
                let r = mult(&cm, &a, &mult(&cm, &b, &c));
                assert!(l.dist_value(&r) < 1e-12);
            }
        }
    }

    #[test]
    fn faces_are_homomorphisms() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in 1..=4 {
            for i in 0..=p {
                for _ in 0..5 {
                    let a = random_elt(&cm, p, &mut rng, 0.3);
                    let b = random_elt(&cm, p, &mut rng, 0.3);
                    let l = face(&cm, i, &mult(&cm, &a, &b));
                    let r = mult(&cm, &face(&cm, i, &a), &face(&cm, i, &b));
                    assert!(l.dist_value(&r) < 1e-12, "face {i} level {p}");
                }
            }
        }
    }

    #[test]
    fn simplicial_identities_of_nerve() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 2..=4 {
            for _ in 0..10 {
                let u = random_elt(&cm, p, &mut rng, 0.3);
                for i in 0..p {
                    for j in i + 1..=p {
                        let l = face(&cm, i, &face(&cm, j, &u));
                        let r = face(&cm, j - 1, &face(&cm, i, &u));
                        assert!(l.dist_value(&r) < 1e-12, "d{i} d{j} at level {p}");
                    }
                }
                for j in 0..p {
                    for i in 0..=p + 1 {
                        let s = degen(&cm, j, &u);
                        let ds = face(&cm, i, &s);
                        if i == j || i == j + 1 {
                            assert!(ds.dist_value(&u) < 1e-13);
                        } else if i < j {
                            let want = degen(&cm, j - 1, &face(&cm, i, &u));
                            assert!(ds.dist_value(&want) < 1e-13);
                        } else {
                            let want = degen(&cm, j, &face(&cm, i - 1, &u));
                            assert!(ds.dist_value(&want) < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn groupoid_composition_via_faces() {
        // (h₂, ∂(h₁)g) ⋈ (h₁, g) = (h₂h₁, g), recovered as d₁ of the
        // corresponding 2-simplex
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = random_elt(&cm, 2, &mut rng, 0.3);
        let a1 = face(&cm, 2, &u); // (h₁, ∂(h₂)g): target-end arrow
        let a2 = face(&cm, 0, &u); // (h₂, g): source-end arrow
        let comp = join1(&cm, &a1, &a2);
        let d1 = face(&cm, 1, &u);
        assert!(comp.dist_value(&d1) < 1e-13);
    }

    #[test]
    fn exchange_law() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let u = random_elt(&cm, 2, &mut rng, 0.3);
            let v = random_elt(&cm, 2, &mut rng, 0.3);
            let (a, b) = (face(&cm, 2, &u), face(&cm, 0, &u));
            let (c, d) = (face(&cm, 2, &v), face(&cm, 0, &v));
            let lhs = mult(&cm, &join1(&cm, &a, &b), &join1(&cm, &c, &d));
            let rhs = join1(&cm, &mult(&cm, &a, &c), &mult(&cm, &b, &d));
            assert!(lhs.dist_value(&rhs) < 1e-12);
        }
    }

    #[test]
    fn tangent_of_mult_matches_finite_difference() {
        let cm = conj_so3();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let u = random_elt(&cm, 2, &mut rng, 0.3);
        let v = random_elt(&cm, 2, &mut rng, 0.3);
        let du = random_alg(&cm, 2, &mut rng, 0.5);
        // curve u(t) = slot_exp(t·du) ⊻ u, tangent at t=0 is jet-exact
        let jet_u = mult(&cm, &{
            let mut e = unit(&cm, 2);
            e.hs.iter_mut().zip(&du.hs).for_each(|(a, b)| *a = JMat::new(a.v.clone(), b.d.clone()));
            e.g = JMat::new(e.g.v.clone(), du.g.d.clone());
            e
        }, &u);
        let prod = mult(&cm, &jet_u, &v);
        for comp in 0..2 {
            for r in 0..3 {
                for c in 0..3 {
                    let num = crate::numcore::curve_derivative(
                        |t| {
                            let ut = mult(&cm, &slot_exp(&cm, &du, t), &u);
                            mult(&cm, &ut, &v).hs[comp].v.at(r, c)
                        },
                        0.0,
                    )
                    .unwrap();
                    let exact = prod.hs[comp].d.at(r, c);
                    assert!((num - exact).abs() < 1e-6, "{num} vs {exact}");
                }
            }
        }
    }
}
