//! Normal-form calculus in the free graded-commutative algebra on the
//! generators of the Weil model of a 2-term complex: `α` (odd, bidegree
//! (1,0)), `β` (even, (2,0)) and their shifted copies `ż = dα` (even,
//! (1,1)), `ẇ = dβ` (odd, (2,1)).
//!
//! The differentials are derivations determined on generators by
//! `δα = -½[·,·]*αα - ℓ₁*β`, `δβ = -ℓ₂*αβ`, `δ(ż) = -d(δα)`,
//! `δ(ẇ) = -d(δβ)`, plus anchor terms on coefficients at positive levels.
//! All other signs come out of the normal-form sort, so nothing downstream
//! hand-codes Koszul bookkeeping.

use crate::numcore::{perm_sign, permutations};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    X, // α
    Y, // β
    Z, // ż
    W, // ẇ
}

impl Kind {
    pub fn odd(self) -> bool {
        matches!(self, Kind::X | Kind::W)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Factor {
    pub kind: Kind,
    pub idx: u8,
}

/// Canonical monomial: factor lists per kind, sorted (strictly for odd
/// kinds, weakly for even kinds).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub xs: Vec<u8>,
    pub ys: Vec<u8>,
    pub zs: Vec<u8>,
    pub ws: Vec<u8>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn block(&self) -> (usize, usize, usize, usize) {
        (self.xs.len(), self.ys.len(), self.zs.len(), self.ws.len())
    }

    /// Bidegree `(q, r)` with `q = k + 2l + a + 2b`, `r = a + b`.
    pub fn bidegree(&self) -> (usize, usize) {
        let (k, l, a, b) = self.block();
        (k + 2 * l + a + 2 * b, a + b)
    }

    pub fn factors(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        out.extend(self.xs.iter().map(|&i| Factor { kind: Kind::X, idx: i }));
        out.extend(self.ys.iter().map(|&i| Factor { kind: Kind::Y, idx: i }));
        out.extend(self.zs.iter().map(|&i| Factor { kind: Kind::Z, idx: i }));
        out.extend(self.ws.iter().map(|&i| Factor { kind: Kind::W, idx: i }));
        out
    }
}

/// Sorts an arbitrary factor sequence into the canonical monomial,
/// computing the Koszul sign; `None` when an odd factor repeats.
pub fn assemble(seq: &[Factor]) -> Option<(f64, Monomial)> {
    let mut fs = seq.to_vec();
    let mut sign = 1.0;
    // insertion sort, counting transpositions of odd pairs
    for i in 1..fs.len() {
        let mut j = i;
        while j > 0 && fs[j] < fs[j - 1] {
            if fs[j].kind.odd() && fs[j - 1].kind.odd() {
                sign = -sign;
            }
            fs.swap(j, j - 1);
            j -= 1;
        }
    }
    let mut m = Monomial::one();
    for (i, f) in fs.iter().enumerate() {
        if i > 0 && f.kind.odd() && fs[i - 1] == *f {
            return None;
        }
        match f.kind {
            Kind::X => m.xs.push(f.idx),
            Kind::Y => m.ys.push(f.idx),
            Kind::Z => m.zs.push(f.idx),
            Kind::W => m.ws.push(f.idx),
        }
    }
    Some((sign, m))
}

/// Graded-commutative product of canonical monomials.
pub fn mono_mul(a: &Monomial, b: &Monomial) -> Option<(f64, Monomial)> {
    let mut seq = a.factors();
    seq.extend(b.factors());
    assemble(&seq)
}

/// The shift derivation `d`: `α ↦ ż`, `β ↦ ẇ`, shifted generators to zero,
/// as a list of signed factor sequences.
pub fn d_mono(m: &Monomial) -> Vec<(f64, Monomial)> {
    let fs = m.factors();
    let mut out = Vec::new();
    for i in 0..fs.len() {
        let shifted = match fs[i].kind {
            Kind::X => Some(Kind::Z),
            Kind::Y => Some(Kind::W),
            _ => None,
        };
        let Some(kind) = shifted else { continue };
        let mut sign = 1.0;
        for f in &fs[..i] {
            if f.kind.odd() {
                sign = -sign;
            }
        }
        let mut seq = fs.clone();
        seq[i] = Factor { kind, idx: fs[i].idx };
        if let Some((s2, mono)) = assemble(&seq) {
            out.push((sign * s2, mono));
        }
    }
    out
}

/// Coefficients an element can carry: scalars for the point-level Weil
/// algebra, form-valued evaluators for the algebroid levels.
pub trait Coeff: Clone + 'static {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, s: f64) -> Self;
    /// parity of the coefficient in the Koszul sense (form degree mod 2)
    fn parity(&self) -> usize;
    fn is_zero(&self) -> bool {
        false
    }
}

impl Coeff for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, s: f64) -> Self {
        self * s
    }
    fn parity(&self) -> usize {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Structure data feeding the differential: brackets of the 2-term complex
/// and, at positive levels, the anchor action on coefficients.
pub trait DeltaData<C: Coeff> {
    /// (# α-generators, # β-generators)
    fn dims(&self) -> (usize, usize);
    /// `[e_a, e_b]^c`
    fn c_gg(&self, a: usize, b: usize, c: usize) -> f64;
    /// `(ℓ₁ u_e)^c`
    fn j_map(&self, c: usize, e: usize) -> f64;
    /// `ℓ₂(e_a, u_f)^e`
    fn r_mix(&self, a: usize, f: usize, e: usize) -> f64;
    /// Lie derivative of a coefficient along the anchor of `e_a`
    fn anchor_lie(&self, c: &C, a: usize) -> Option<C>;
    /// contraction of a coefficient form with the anchor of `e_a`
    fn anchor_contract(&self, c: &C, a: usize) -> Option<C>;
}

/// A sum of coefficient-weighted canonical monomials.
#[derive(Clone)]
pub struct Element<C: Coeff> {
    pub terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Element<C> {
    fn default() -> Self {
        Element { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Element<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => *old = old.add(&c),
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(s));
        }
        out
    }

    /// The differential `δ` as a derivation over the generator rules plus
    /// the anchor terms on coefficients.
    pub fn delta(&self, data: &impl DeltaData<C>) -> Element<C> {
        let mut out = Element::zero();
        for (m, coeff) in &self.terms {
            let pc = coeff.parity();
            // coefficient part: δc = Σ_a α^a (L_{ρa} c) − Σ_a ż^a (ι_{ρa} c),
            // normal-formed as (±L c)·X_a·m and (ι c)·Z_a·m
            let (na, _) = data.dims();
            for a in 0..na {
                if let Some(lc) = data.anchor_lie(coeff, a) {
                    let sgn = if pc % 2 == 0 { 1.0 } else { -1.0 };
                    let mut seq = vec![Factor { kind: Kind::X, idx: a as u8 }];
                    seq.extend(m.factors());
                    if let Some((s2, mono)) = assemble(&seq) {
                        out.add_term(mono, lc.scale(sgn * s2));
                    }
                }
                if let Some(ic) = data.anchor_contract(coeff, a) {
                    let mut seq = vec![Factor { kind: Kind::Z, idx: a as u8 }];
                    seq.extend(m.factors());
                    if let Some((s2, mono)) = assemble(&seq) {
                        out.add_term(mono, ic.scale(s2));
                    }
                }
            }
            // generator part with the Leibniz prefix signs
            let fs = m.factors();
            for i in 0..fs.len() {
                let mut prefix = if pc % 2 == 0 { 1.0 } else { -1.0 };
                for f in &fs[..i] {
                    if f.kind.odd() {
                        prefix = -prefix;
                    }
                }
                for (gc, repl) in delta_gen(data, fs[i]) {
                    let mut seq = Vec::with_capacity(fs.len() + 1);
                    seq.extend_from_slice(&fs[..i]);
                    seq.extend(repl.iter().copied());
                    seq.extend_from_slice(&fs[i + 1..]);
                    if let Some((s2, mono)) = assemble(&seq) {
                        out.add_term(mono, coeff.scale(prefix * gc * s2));
                    }
                }
            }
        }
        out
    }
}

impl Element<f64> {
    /// The shift differential `d` for scalar coefficients.
    pub fn d_shift(&self) -> Element<f64> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            for (s, mono) in d_mono(m) {
                out.add_term(mono, c * s);
            }
        }
        out
    }

    pub fn mul(&self, other: &Element<f64>) -> Element<f64> {
        let mut out = Element::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((s, m)) = mono_mul(m1, m2) {
                    out.add_term(m, c1 * c2 * s);
                }
            }
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// δ on a single generator, as signed replacement factor sequences.
fn delta_gen<C: Coeff>(data: &impl DeltaData<C>, f: Factor) -> Vec<(f64, Vec<Factor>)> {
    let (na, nh) = data.dims();
    let mut out = Vec::new();
    match f.kind {
        Kind::X => {
            let c = f.idx as usize;
            for a in 0..na {
                for b in a + 1..na {
                    let v = data.c_gg(a, b, c);
                    if v != 0.0 {
                        out.push((
                            -v,
                            vec![
                                Factor { kind: Kind::X, idx: a as u8 },
                                Factor { kind: Kind::X, idx: b as u8 },
                            ],
                        ));
                    }
                }
            }
            for e in 0..nh {
                let v = data.j_map(c, e);
                if v != 0.0 {
                    out.push((-v, vec![Factor { kind: Kind::Y, idx: e as u8 }]));
                }
            }
        }
        Kind::Y => {
            let e = f.idx as usize;
            for a in 0..na {
                for ff in 0..nh {
                    let v = data.r_mix(a, ff, e);
                    if v != 0.0 {
                        out.push((
                            -v,
                            vec![
                                Factor { kind: Kind::X, idx: a as u8 },
                                Factor { kind: Kind::Y, idx: ff as u8 },
                            ],
                        ));
                    }
                }
            }
        }
        // δ(shifted) = -d(δ(unshifted)), expanded through the factor lists
        Kind::Z => {
            let base = delta_gen(data, Factor { kind: Kind::X, idx: f.idx });
            out.extend(minus_d_of(base));
        }
        Kind::W => {
            let base = delta_gen(data, Factor { kind: Kind::Y, idx: f.idx });
            out.extend(minus_d_of(base));
        }
    }
    out
}

fn minus_d_of(terms: Vec<(f64, Vec<Factor>)>) -> Vec<(f64, Vec<Factor>)> {
    let mut out = Vec::new();
    for (c, fs) in terms {
        for i in 0..fs.len() {
            let kind = match fs[i].kind {
                Kind::X => Kind::Z,
                Kind::Y => Kind::W,
                _ => continue,
            };
            let mut sign = -1.0;
            for f in &fs[..i] {
                if f.kind.odd() {
                    sign = -sign;
                }
            }
            let mut seq = fs.clone();
            seq[i] = Factor { kind, idx: fs[i].idx };
            out.push((c * sign, seq));
        }
    }
    out
}

/// Multilinear evaluation of a monomial on coordinate tuples: full
/// antisymmetrization on the odd groups, full symmetrization on the even
/// ones, no factorial normalization.
pub fn mono_eval(
    m: &Monomial,
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    zs: &[Vec<f64>],
    ws: &[Vec<f64>],
) -> f64 {
    if m.xs.len() != xs.len() || m.ys.len() != ys.len() || m.zs.len() != zs.len()
        || m.ws.len() != ws.len()
    {
        return 0.0;
    }
    group_eval(&m.xs, xs, true)
        * group_eval(&m.ys, ys, false)
        * group_eval(&m.zs, zs, false)
        * group_eval(&m.ws, ws, true)
}

fn group_eval(idx: &[u8], args: &[Vec<f64>], odd: bool) -> f64 {
    let n = idx.len();
    if n == 0 {
        return 1.0;
    }
    let perms = permutations(n).expect("evaluation group size");
    let mut total = 0.0;
    for p in &perms {
        let mut term = if odd { perm_sign(p) as f64 } else { 1.0 };
        for (a, &pa) in p.iter().enumerate() {
            term *= args[pa][idx[a] as usize];
            if term == 0.0 {
                break;
            }
        }
        total += term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_square_is_zero() {
        let a = Factor { kind: Kind::X, idx: 1 };
        assert!(assemble(&[a, a]).is_none());
        let w = Factor { kind: Kind::W, idx: 0 };
        assert!(assemble(&[w, w]).is_none());
    }

    #[test]
    fn even_square_survives() {
        let b = Factor { kind: Kind::Y, idx: 2 };
        let (s, m) = assemble(&[b, b]).unwrap();
        assert_eq!(s, 1.0);
        assert_eq!(m.ys, vec![2, 2]);
    }

    #[test]
    fn koszul_sign_of_odd_swap() {
        let a = Factor { kind: Kind::X, idx: 1 };
        let b = Factor { kind: Kind::X, idx: 0 };
        let (s, m) = assemble(&[a, b]).unwrap();
        assert_eq!(s, -1.0);
        assert_eq!(m.xs, vec![0, 1]);
        // odd-even swaps carry no sign
        let y = Factor { kind: Kind::Y, idx: 0 };
        let (s, _) = assemble(&[a, y]).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn d_squares_to_zero() {
        let (_, m) = assemble(&[
            Factor { kind: Kind::X, idx: 0 },
            Factor { kind: Kind::X, idx: 1 },
            Factor { kind: Kind::Y, idx: 0 },
        ])
        .unwrap();
        let mut e = Element::<f64>::zero();
        e.add_term(m, 1.0);
        let dd = e.d_shift().d_shift();
        assert!(dd.norm_inf() < 1e-15);
    }
}
