//! The perturbation-lemma zig-zag: for a normalized form `ω` on `W̄_pG`,
//! `ι* ∘ (δ ∘ h₀*)^p ∘ ∂̄₀* ω` computed level by level. On normalized
//! input the higher homotopies vanish, so `(1 + δ∘h)⁻¹` collapses to this
//! finite alternation.

use super::element::LevelElement;
use super::maps::{h0_star, iota_star};
use super::{vertical_delta, Ctx, LevelData};
use crate::simplicial::FormField;
use crate::weil::WeilElement;
use std::rc::Rc;

/// Runs the zig-zag for a normalized `r`-form at level `p` and returns the
/// Weil-algebra element of bidegree `(p, r)`.
pub fn perturbation_zigzag(ctx: &Ctx, omega: &FormField) -> WeilElement {
    let p = omega.level;
    let r = omega.r;
    let ev = omega.ev.clone();
    // ∂̄₀*: drop the top slot of a W_pG-stack
    let mut e = LevelElement::from_form(
        p,
        r,
        Rc::new(move |s, dirs| {
            let base = s[1..].to_vec();
            let cut: Vec<crate::simplicial::StackDir> = dirs
                .iter()
                .map(|d| crate::simplicial::StackDir { slots: d.slots[1..].to_vec() })
                .collect();
            ev(&base, &cut)
        }),
    );
    for _ in 0..p {
        e = h0_star(ctx, &e);
        let data = LevelData::new(ctx, e.level);
        e = vertical_delta(&data, &e);
    }
    iota_star(ctx, &e)
}
