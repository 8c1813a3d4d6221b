//! The simplicial splitting `ε: W_•G → W_•(dec G)` of `W_• d₀`, built by
//! the recursion
//! `ε₀(g) = s₀(g)`,
//! `ε₁(γ; g) = (s₀γ; γ⁻¹ ⊻ s₀d₀(γ) ⊻ s₀(g))`,
//! `ε_p = (s₀∘pr_p; (∂̄₀ᵈᵉᶜ∘ε₁∘∂₂∘⋯∘∂_p, pr_{p-1}); ∂̄₀ᵈᵉᶜ∘ε_{p-1}∘∂₀)`.

use super::{w_face, wbar_d0, NerveGroup, SGroup, Stack};
use crate::group2::nerve;

/// `ε_p` on a `W_pG`-stack (length `p+1`); the output is a
/// `W_p(dec G)`-stack of the same length whose slot `j` is a nerve element
/// of level `p+1-j`.
pub fn epsilon(k: &NerveGroup, s: &Stack) -> Stack {
    let p = s.len() - 1;
    let cm = &*k.0;
    match p {
        0 => vec![nerve::degen(cm, 0, &s[0])],
        1 => {
            let gamma = &s[0];
            let g = &s[1];
            let top = nerve::degen(cm, 0, gamma);
            let a = nerve::inv(cm, gamma);
            let b = nerve::degen(cm, 0, &nerve::face(cm, 0, gamma));
            let c = nerve::degen(cm, 0, g);
            let x = nerve::mult(cm, &nerve::mult(cm, &a, &b), &c);
            vec![top, x]
        }
        _ => {
            let top = nerve::degen(cm, 0, &s[0]);
            // middle: prepend ∂̄₀ᵈᵉᶜ ε₁ ∂₂⋯∂_p(γ⃗) to pr_{p-1}(γ⃗)
            let mut down = s.clone();
            for i in (2..=p).rev() {
                down = w_face(k, i, &down);
            }
            let e1 = epsilon(k, &down);
            let arrow = &wbar_d0(&e1)[0];
            let middle = nerve::prepend_arrow(cm, arrow, &s[1]);
            // tail: ∂̄₀ᵈᵉᶜ ε_{p-1} ∂₀(γ⃗)
            let tail = wbar_d0(&epsilon(k, &w_face(k, 0, s)));
            let mut out = Vec::with_capacity(p + 1);
            out.push(top);
            out.push(middle);
            out.extend(tail);
            out
        }
    }
}

/// `W_• d₀: W_p(dec G) → W_pG`, the slot-wise face `d₀`.
pub fn w_d0(k: &NerveGroup, s: &Stack) -> Stack {
    s.iter().map(|slot| nerve::face(&k.0, 0, slot)).collect()
}

/// The crossed-module coordinates of `ε`: the extra `H`-factors
/// `μ_p = (1, μ_p¹, …, μ_p^p)` with `μ_p^j(γ⃗)` the `H`-part of the extra
/// arrow in slot `j` of `ε_p(γ⃗)` relative to `W_pG`.
///
/// In the conventions of this crate the closed form at `p = 1` comes out as
/// `μ₁¹(h, g₁; g₀) = (h⁻¹)^{g₁⁻¹}`: the slot-1 component of `ε₁` splits as
/// `(μ₁¹(γ⃗), d₀-part)` with the `H`-twist taken at the arrow's own source.
pub fn mu(k: &NerveGroup, s: &Stack) -> Vec<crate::numcore::JMat> {
    let e = epsilon(k, s);
    // slot j of ε has level p+1-j; its first H-coordinate is the extra arrow
    e.iter().map(|slot| slot.hs[0].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group2::{so3, MatrixCrossedModule};
    use crate::simplicial::{random_stack, stack_dist, unit_stack, w_degen};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::rc::Rc;

    fn setup() -> NerveGroup {
        NerveGroup(Rc::new(MatrixCrossedModule::conjugation(so3())))
    }

    #[test]
    fn units_map_to_units() {
        let k = setup();
        for p in 0..=4 {
            let u = unit_stack(&k, p + 1);
            let e = epsilon(&k, &u);
            for (j, slot) in e.iter().enumerate() {
                assert_eq!(slot.level(), p + 1 - j);
                assert!(slot.dist_value(&k.unit(p + 1 - j)) < 1e-14);
            }
        }
    }

    #[test]
    fn splits_w_d0() {
        let k = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in 0..=4 {
            for _ in 0..10 {
                let s = random_stack(&k, p + 1, &mut rng, 0.3);
                let back = w_d0(&k, &epsilon(&k, &s));
                assert!(stack_dist(&back, &s) < 1e-10, "p = {p}");
            }
        }
    }

    #[test]
    fn compatible_with_faces_and_degeneracies() {
        let k = setup();
        let dec = crate::simplicial::DecGroup(Rc::new(NerveGroup(k.0.clone())));
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for p in 1..=4 {
            for _ in 0..5 {
                let s = random_stack(&k, p + 1, &mut rng, 0.3);
                for i in 0..=p {
                    let l = w_face(&dec, i, &epsilon(&k, &s));
                    let r = epsilon(&k, &w_face(&k, i, &s));
                    assert!(stack_dist(&l, &r) < 1e-10, "∂_{i} at p = {p}");
                }
                if p <= 3 {
                    for i in 0..=p {
                        let l = w_degen(&dec, i, &epsilon(&k, &s));
                        let r = epsilon(&k, &w_degen(&k, i, &s));
                        assert!(stack_dist(&l, &r) < 1e-10, "σ_{i} at p = {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon1_closed_form() {
        // ε₁'s extra arrow is ((h⁻¹)^{g₁⁻¹}, g₀)
        let cm = Rc::new(MatrixCrossedModule::conjugation(so3()));
        let k = NerveGroup(cm.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let s = random_stack(&k, 2, &mut rng, 0.3);
        let e = epsilon(&k, &s);
        let h = &s[0].hs[0];
        let g1 = &s[0].g;
        let want = cm.alpha_j(&g1.inv(), &h.inv());
        assert!(e[1].hs[0].v.sub(&want.v).norm_inf() < 1e-12);
        assert!(e[1].g.v.sub(&s[1].g.v).norm_inf() < 1e-12);
    }
}
