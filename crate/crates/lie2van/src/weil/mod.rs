//! The Weil algebra `W^{•,•}(h → g₀)` of a strict Lie 2-algebra: block
//! tensors in `Λ^k g₀* ⊗ S^l h* ⊗ S^a ġ₀* ⊗ Λ^b ḣ*`, the two anticommuting
//! differentials `δ` and `d`, and the graded product.

pub mod symb;

use crate::lie2alg::{basis, Lie2AlgebraData};
use crate::numcore::Tensor;
use std::collections::BTreeMap;
use symb::{mono_eval, Coeff, DeltaData, Element, Monomial};

/// An element of the Weil algebra of `h → g₀`, stored blockwise. Block
/// `(k, l, a, b)` has bidegree `(q, r) = (k+2l+a+2b, a+b)`; the tensor has
/// `k` antisymmetric `g₀`-slots, `l` symmetric `h`-slots, `a` symmetric
/// shifted `g₀`-slots and `b` antisymmetric shifted `h`-slots.
#[derive(Clone, Debug)]
pub struct WeilElement {
    pub ng: usize,
    pub nh: usize,
    pub blocks: BTreeMap<(usize, usize, usize, usize), Tensor>,
}

impl WeilElement {
    pub fn zero(ng: usize, nh: usize) -> Self {
        WeilElement { ng, nh, blocks: BTreeMap::new() }
    }

    pub fn block_dims(&self, key: (usize, usize, usize, usize)) -> Vec<usize> {
        let (k, l, a, b) = key;
        let mut dims = vec![self.ng; k];
        dims.extend(std::iter::repeat(self.nh).take(l));
        dims.extend(std::iter::repeat(self.ng).take(a));
        dims.extend(std::iter::repeat(self.nh).take(b));
        dims
    }

    /// Inserts a block, enforcing the symmetry types by projection.
    pub fn set_block(&mut self, key: (usize, usize, usize, usize), t: Tensor) {
        assert_eq!(t.dims, self.block_dims(key), "Weil block dims for {key:?}");
        let (k, l, a, b) = key;
        let xs: Vec<usize> = (0..k).collect();
        let ys: Vec<usize> = (k..k + l).collect();
        let zs: Vec<usize> = (k + l..k + l + a).collect();
        let ws: Vec<usize> = (k + l + a..k + l + a + b).collect();
        let t = t
            .symmetrize(&xs, true)
            .symmetrize(&ys, false)
            .symmetrize(&zs, false)
            .symmetrize(&ws, true);
        if t.norm_inf() > 0.0 {
            self.blocks.insert(key, t);
        }
    }

    pub fn scalar(ng: usize, nh: usize, v: f64) -> Self {
        let mut e = WeilElement::zero(ng, nh);
        e.set_block((0, 0, 0, 0), Tensor::scalar(v));
        e
    }

    pub fn norm_inf(&self) -> f64 {
        self.blocks.values().fold(0.0, |m, t| m.max(t.norm_inf()))
    }

    pub fn add(&self, other: &WeilElement) -> WeilElement {
        let mut out = self.clone();
        for (k, t) in &other.blocks {
            match out.blocks.get_mut(k) {
                Some(have) => *have = have.add(t),
                None => {
                    out.blocks.insert(*k, t.clone());
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &WeilElement) -> WeilElement {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> WeilElement {
        let mut out = self.clone();
        for t in out.blocks.values_mut() {
            *t = t.scale(s);
        }
        out
    }

    /// Multilinear evaluation of the `(k,l,a,b)` block.
    pub fn eval_block(
        &self,
        key: (usize, usize, usize, usize),
        xs: &[Vec<f64>],
        ys: &[Vec<f64>],
        zs: &[Vec<f64>],
        ws: &[Vec<f64>],
    ) -> f64 {
        let Some(t) = self.blocks.get(&key) else { return 0.0 };
        let (k, l, a, _b) = key;
        let mut total = 0.0;
        t.for_each(|idx, v| {
            if v == 0.0 {
                return;
            }
            let mut w = v;
            for (s, x) in xs.iter().enumerate() {
                w *= x[idx[s]];
            }
            for (s, y) in ys.iter().enumerate() {
                w *= y[idx[k + s]];
            }
            for (s, z) in zs.iter().enumerate() {
                w *= z[idx[k + l + s]];
            }
            for (s, wv) in ws.iter().enumerate() {
                w *= wv[idx[k + l + a + s]];
            }
            total += w;
        });
        total
    }

    /// Converts to the monomial representation (coefficients divided by the
    /// evaluation multiplicities of the symmetric groups).
    pub fn to_element(&self) -> Element<f64> {
        let mut e = Element::zero();
        for (&(k, l, a, b), t) in &self.blocks {
            t.for_each(|idx, v| {
                if v == 0.0 {
                    return;
                }
                let xs = &idx[..k];
                let ys = &idx[k..k + l];
                let zs = &idx[k + l..k + l + a];
                let ws = &idx[k + l + a..];
                // only canonical index tuples name a monomial
                if !strictly_increasing(xs) || !weakly_increasing(ys) || !weakly_increasing(zs)
                    || !strictly_increasing(ws)
                {
                    return;
                }
                let m = Monomial {
                    xs: xs.iter().map(|&i| i as u8).collect(),
                    ys: ys.iter().map(|&i| i as u8).collect(),
                    zs: zs.iter().map(|&i| i as u8).collect(),
                    ws: ws.iter().map(|&i| i as u8).collect(),
                };
                let mult = sym_mult(ys) * sym_mult(zs);
                // the tensor is fully (anti)symmetrized, so the canonical
                // entry carries the monomial coefficient times 1/mult of the
                // full symmetric-group evaluation; antisymmetric groups
                // contribute factor 1 on distinct sorted indices
                e.add_term(m, v / mult);
            });
        }
        e
    }

    pub fn from_element(e: &Element<f64>, ng: usize, nh: usize) -> WeilElement {
        let mut grouped: BTreeMap<(usize, usize, usize, usize), Vec<(&Monomial, f64)>> =
            BTreeMap::new();
        for (m, &c) in &e.terms {
            grouped.entry(m.block()).or_default().push((m, c));
        }
        let mut out = WeilElement::zero(ng, nh);
        for (key, terms) in grouped {
            let mut t = Tensor::zeros(out.block_dims(key));
            let (k, l, a, b) = key;
            let dims = t.dims.clone();
            let mut fill = Tensor::zeros(dims);
            fill.for_each(|_, _| {});
            let template = t.clone();
            template.for_each(|idx, _| {
                let xs: Vec<Vec<f64>> = idx[..k].iter().map(|&i| basis(ng, i)).collect();
                let ys: Vec<Vec<f64>> = idx[k..k + l].iter().map(|&i| basis(nh, i)).collect();
                let zs: Vec<Vec<f64>> =
                    idx[k + l..k + l + a].iter().map(|&i| basis(ng, i)).collect();
                let ws: Vec<Vec<f64>> =
                    idx[k + l + a..k + l + a + b].iter().map(|&i| basis(nh, i)).collect();
                let mut v = 0.0;
                for (m, c) in &terms {
                    v += c * mono_eval(m, &xs, &ys, &zs, &ws);
                }
                t.set(idx, v);
            });
            out.set_block(key, t);
        }
        out
    }
}

fn strictly_increasing(idx: &[usize]) -> bool {
    idx.windows(2).all(|w| w[0] < w[1])
}

fn weakly_increasing(idx: &[usize]) -> bool {
    idx.windows(2).all(|w| w[0] <= w[1])
}

fn sym_mult(idx: &[usize]) -> f64 {
    // product of factorials of index multiplicities
    let mut mult = 1.0;
    let mut run = 1usize;
    for w in idx.windows(2) {
        if w[0] == w[1] {
            run += 1;
            mult *= run as f64;
        } else {
            run = 1;
        }
    }
    mult
}

/// The point-level structure data: brackets of the Lie 2-algebra, no
/// anchor.
pub struct PointData<'a> {
    pub alg: &'a Lie2AlgebraData,
}

impl DeltaData<f64> for PointData<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.alg.v0.dim, self.alg.v1_dim)
    }
    fn c_gg(&self, a: usize, b: usize, c: usize) -> f64 {
        self.alg.v0.c_at(a, b, c)
    }
    fn j_map(&self, c: usize, e: usize) -> f64 {
        self.alg.l1[c * self.alg.v1_dim + e]
    }
    fn r_mix(&self, a: usize, f: usize, e: usize) -> f64 {
        self.alg.l2_gh[(a * self.alg.v1_dim + f) * self.alg.v1_dim + e]
    }
    fn anchor_lie(&self, _c: &f64, _a: usize) -> Option<f64> {
        None
    }
    fn anchor_contract(&self, _c: &f64, _a: usize) -> Option<f64> {
        None
    }
}

/// The shift differential `d`: degree `(0,1)`, sends each unshifted
/// generator to its shifted copy.
pub fn weil_d(w: &WeilElement, alg: &Lie2AlgebraData) -> WeilElement {
    let _ = alg;
    WeilElement::from_element(&w.to_element().d_shift(), w.ng, w.nh)
}

/// The Chevalley–Eilenberg Lie-derivative differential: degree `(1,0)`.
pub fn weil_delta(w: &WeilElement, alg: &Lie2AlgebraData) -> WeilElement {
    let data = PointData { alg };
    WeilElement::from_element(&w.to_element().delta(&data), w.ng, w.nh)
}

/// Graded-commutative product.
pub fn weil_product(u: &WeilElement, v: &WeilElement) -> WeilElement {
    assert_eq!((u.ng, u.nh), (v.ng, v.nh), "algebra mismatch");
    WeilElement::from_element(&u.to_element().mul(&v.to_element()), u.ng, u.nh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie2alg::samples::{coadjoint_cm, so3_gen, tangent_cm};
    use crate::lie2alg::{ce_differential, to_lie2, CECochain};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_weil(
        alg: &Lie2AlgebraData,
        rng: &mut impl Rng,
        deg_cap: usize,
    ) -> WeilElement {
        let (ng, nh) = (alg.v0.dim, alg.v1_dim);
        let mut e = WeilElement::zero(ng, nh);
        for k in 0..=2usize {
            for l in 0..=1usize {
                for a in 0..=1usize {
                    for b in 0..=1usize {
                        if k + 2 * l + a + 2 * b + (a + b) > deg_cap {
                            continue;
                        }
                        let dims = e.block_dims((k, l, a, b));
                        let mut t = Tensor::zeros(dims);
                        let vals: Vec<f64> =
                            (0..t.a.len()).map(|_| rng.gen::<f64>() - 0.5).collect();
                        t.a = vals;
                        e.set_block((k, l, a, b), t);
                    }
                }
            }
        }
        e
    }

    #[test]
    fn d_of_shifted_generator_vanishes_and_d_shifts() {
        let alg = to_lie2(&coadjoint_cm(&so3_gen()));
        let mut w = WeilElement::zero(3, 3);
        let mut t = Tensor::zeros(vec![3]);
        t.set(&[1], 2.0);
        w.set_block((0, 0, 1, 0), t.clone());
        assert!(weil_d(&w, &alg).norm_inf() == 0.0);
        let mut w = WeilElement::zero(3, 3);
        w.set_block((1, 0, 0, 0), t);
        let dw = weil_d(&w, &alg);
        assert_eq!(dw.blocks.len(), 1);
        assert!((dw.blocks[&(0, 0, 1, 0)].at(&[1]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn total_differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for cm in [coadjoint_cm(&so3_gen()), tangent_cm(&so3_gen())] {
            let alg = to_lie2(&cm);
            for _ in 0..4 {
                let w = random_weil(&alg, &mut rng, 6);
                let dd = weil_d(&weil_d(&w, &alg), &alg);
                assert!(dd.norm_inf() < 1e-12, "d² = {:e}", dd.norm_inf());
                let ss = weil_delta(&weil_delta(&w, &alg), &alg);
                assert!(ss.norm_inf() < 1e-10, "δ² = {:e}", ss.norm_inf());
                let anti = weil_delta(&weil_d(&w, &alg), &alg)
                    .add(&weil_d(&weil_delta(&w, &alg), &alg));
                assert!(anti.norm_inf() < 1e-10, "δd+dδ = {:e}", anti.norm_inf());
            }
        }
    }

    #[test]
    fn delta_on_coadjoint_alpha_has_no_h_component() {
        // ℓ₁ = 0 for the coadjoint module, so δ(α) has no β-part
        let alg = to_lie2(&coadjoint_cm(&so3_gen()));
        let mut w = WeilElement::zero(3, 3);
        let mut t = Tensor::zeros(vec![3]);
        t.set(&[0], 1.0);
        w.set_block((1, 0, 0, 0), t);
        let dw = weil_delta(&w, &alg);
        assert!(!dw.blocks.contains_key(&(0, 1, 0, 0)));
        assert!(dw.blocks.contains_key(&(2, 0, 0, 0)));
    }

    #[test]
    fn product_axioms() {
        let alg = to_lie2(&tangent_cm(&so3_gen()));
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let one = WeilElement::scalar(3, 3, 1.0);
        let v = random_weil(&alg, &mut rng, 4);
        assert!(weil_product(&one, &v).sub(&v).norm_inf() < 1e-12);
        // α ∧ α = 0 for a degree-1 generator
        let mut a = WeilElement::zero(3, 3);
        let mut t = Tensor::zeros(vec![3]);
        t.set(&[2], 1.0);
        a.set_block((1, 0, 0, 0), t);
        assert!(weil_product(&a, &a).norm_inf() == 0.0);
        // β·β survives (even generator)
        let mut b = WeilElement::zero(3, 3);
        let mut t = Tensor::zeros(vec![3]);
        t.set(&[1], 1.0);
        b.set_block((0, 1, 0, 0), t);
        assert!(weil_product(&b, &b).norm_inf() > 0.5);
        // graded commutativity and associativity on random elements
        let u = random_weil(&alg, &mut rng, 4);
        let w = random_weil(&alg, &mut rng, 4);
        let assoc = weil_product(&weil_product(&u, &v), &w)
            .sub(&weil_product(&u, &weil_product(&v, &w)));
        assert!(assoc.norm_inf() < 1e-12);
    }

    #[test]
    fn leibniz_for_both_differentials() {
        let alg = to_lie2(&tangent_cm(&so3_gen()));
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        // u of pure odd degree 1 to make the sign definite
        let mut u = WeilElement::zero(3, 3);
        let mut t = Tensor::zeros(vec![3]);
        t.set(&[0], 0.7);
        t.set(&[2], -0.3);
        u.set_block((1, 0, 0, 0), t);
        let v = random_weil(&alg, &mut rng, 4);
        for diff in [weil_d, weil_delta] {
            let lhs = diff(&weil_product(&u, &v), &alg);
            let rhs = weil_product(&diff(&u, &alg), &v)
                .add(&weil_product(&u, &diff(&v, &alg)).scale(-1.0));
            assert!(lhs.sub(&rhs).norm_inf() < 1e-10);
        }
    }

    #[test]
    fn ce_row_matches_ce_differential() {
        // δ restricted to blocks with a = b = 0, projected back to
        // a = b = 0, is the Chevalley-Eilenberg differential
        for cm in [coadjoint_cm(&so3_gen()), tangent_cm(&so3_gen())] {
            let alg = to_lie2(&cm);
            let mut rng = ChaCha8Rng::seed_from_u64(44);
            for (k, l) in [(1usize, 0usize), (0, 1), (2, 0), (1, 1), (2, 1)] {
                let mut dims = vec![3; k];
                dims.extend(std::iter::repeat(3).take(l));
                let mut t = Tensor::zeros(dims);
                t.a = (0..t.a.len()).map(|_| rng.gen::<f64>() - 0.5).collect();
                let eta = CECochain::new(k, l, t, 3, 3);
                let mut w = WeilElement::zero(3, 3);
                w.set_block((k, l, 0, 0), eta.coeffs.clone());
                let dw = weil_delta(&w, &alg);
                let (up, down) = ce_differential(&eta, &alg);
                if let Some(b) = dw.blocks.get(&(k + 1, l, 0, 0)) {
                    assert!(b.sub(&up.coeffs).norm_inf() < 1e-12, "up block ({k},{l})");
                } else {
                    assert!(up.coeffs.norm_inf() < 1e-12);
                }
                if k >= 1 {
                    if let Some(b) = dw.blocks.get(&(k - 1, l + 1, 0, 0)) {
                        assert!(b.sub(&down.coeffs).norm_inf() < 1e-12, "down block ({k},{l})");
                    } else {
                        assert!(down.coeffs.norm_inf() < 1e-12);
                    }
                }
            }
        }
    }
}
