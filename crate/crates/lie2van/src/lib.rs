//! Numerical verification toolkit for the simplicial differentiation of
//! strict Lie 2-groups and the associated van Est map.
//!
//! A strict Lie 2-group is fed in as a crossed module of matrix Lie groups
//! `(G, H, ∂, α)`. The crate builds the nerve `G_• ≅ H^•⋊G`, the
//! classifying construction `W̄G`, its universal bundle `WG = dec(W̄G)` with
//! the simplicial splitting `ε`, the simplicial 2-term algebroid over
//! `W_•G` with its double complex, the homotopy operators driving the
//! perturbation-lemma zig-zag, and the van Est map `Φ` into the Weil
//! algebra of the associated Lie 2-algebra. Every identity is checked
//! pointwise at configurable tolerances; see the `verify` module and the
//! CLI crate for the runnable suites.

pub mod algebroid;
pub mod coadjoint;
pub mod group2;
pub mod lie2alg;
pub mod numcore;
pub mod simplicial;
pub mod vanest;
pub mod verify;
pub mod weil;
