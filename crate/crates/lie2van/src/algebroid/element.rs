//! Elements of the level complexes: sums of fiber-generator monomials with
//! form-valued coefficient evaluators on `W_level G`.

use super::Ctx;
use crate::simplicial::{random_dir, Stack, StackDir};
use crate::weil::symb::{mono_eval, Coeff, Element, Monomial};
use rand::Rng;
use std::rc::Rc;

/// A base `s`-form as an evaluator `(point, s tangents) → ℝ`.
#[derive(Clone)]
pub struct FormCoeff {
    pub s: usize,
    pub f: Rc<dyn Fn(&Stack, &[StackDir]) -> f64>,
}

impl FormCoeff {
    pub fn constant(v: f64) -> Self {
        FormCoeff { s: 0, f: Rc::new(move |_, _| v) }
    }
}

impl Coeff for FormCoeff {
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.s, other.s, "form-degree mismatch in coefficient sum");
        let (a, b) = (self.f.clone(), other.f.clone());
        FormCoeff { s: self.s, f: Rc::new(move |p, d| a(p, d) + b(p, d)) }
    }
    fn scale(&self, s: f64) -> Self {
        let a = self.f.clone();
        FormCoeff { s: self.s, f: Rc::new(move |p, d| s * a(p, d)) }
    }
    fn parity(&self) -> usize {
        self.s % 2
    }
}

/// An element of bidegree `(q, r)` of the form-level complex at one level:
/// every monomial has `q = k + 2l + a + 2b` and its coefficient degree is
/// `s = r - a - b`.
#[derive(Clone)]
pub struct LevelElement {
    pub level: usize,
    pub q: usize,
    pub r: usize,
    pub e: Element<FormCoeff>,
}

impl LevelElement {
    pub fn zero(level: usize, q: usize, r: usize) -> Self {
        LevelElement { level, q, r, e: Element::zero() }
    }

    pub fn add_term(&mut self, m: Monomial, c: FormCoeff) {
        let (qm, rm) = m.bidegree();
        assert_eq!(qm, self.q, "monomial q-degree");
        assert_eq!(rm + c.s, self.r, "monomial r-degree");
        self.e.add_term(m, c);
    }

    pub fn add(&self, other: &LevelElement) -> LevelElement {
        assert_eq!((self.level, self.q, self.r), (other.level, other.q, other.r));
        LevelElement { level: self.level, q: self.q, r: self.r, e: self.e.add(&other.e) }
    }

    pub fn scale(&self, s: f64) -> LevelElement {
        LevelElement { level: self.level, q: self.q, r: self.r, e: self.e.scale(s) }
    }

    pub fn sub(&self, other: &LevelElement) -> LevelElement {
        self.add(&other.scale(-1.0))
    }

    /// A plain `r`-form on the stack level, as a `q = 0` element.
    pub fn from_form(
        level: usize,
        r: usize,
        f: Rc<dyn Fn(&Stack, &[StackDir]) -> f64>,
    ) -> LevelElement {
        let mut e = LevelElement::zero(level, 0, r);
        e.add_term(Monomial::one(), FormCoeff { s: r, f });
        e
    }
}

/// Evaluates an element on frame-coordinate tuples and base tangents. Only
/// the monomials whose block matches the argument shape contribute.
#[allow(clippy::too_many_arguments)]
pub fn eval_element(
    elt: &LevelElement,
    base: &Stack,
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    zs: &[Vec<f64>],
    ws: &[Vec<f64>],
    dirs: &[StackDir],
) -> f64 {
    let mut total = 0.0;
    for (m, c) in &elt.e.terms {
        if c.s != dirs.len() {
            continue;
        }
        let g = mono_eval(m, xs, ys, zs, ws);
        if g == 0.0 {
            continue;
        }
        total += g * (c.f)(base, dirs);
    }
    total
}

/// Builds a random element of bidegree `(q, r)` at a level: a few random
/// monomials in each admissible block with smooth random coefficients.
pub fn random_element(
    ctx: &Ctx,
    level: usize,
    q: usize,
    r: usize,
    rng: &mut impl Rng,
) -> LevelElement {
    let na = ctx.na(level);
    let nh = ctx.nh_dim();
    let mut out = LevelElement::zero(level, q, r);
    for k in 0..=q.min(3) {
        for l in 0..=(q.saturating_sub(k)) / 2 {
            for a in 0..=r.min(q.saturating_sub(k + 2 * l)) {
                let rem = q as isize - (k + 2 * l + a) as isize;
                if rem < 0 || rem % 2 != 0 {
                    continue;
                }
                let b = (rem / 2) as usize;
                if a + b > r {
                    continue;
                }
                let s = r - a - b;
                // a couple of random monomials in this block
                for _ in 0..2 {
                    let mut xs: Vec<u8> = pick_distinct(rng, na, k);
                    xs.sort_unstable();
                    let mut ys: Vec<u8> = (0..l).map(|_| rng.gen_range(0..nh) as u8).collect();
                    ys.sort_unstable();
                    let mut zsv: Vec<u8> = (0..a).map(|_| rng.gen_range(0..na) as u8).collect();
                    zsv.sort_unstable();
                    let mut wsv: Vec<u8> = pick_distinct(rng, nh, b);
                    wsv.sort_unstable();
                    if xs.len() < k || wsv.len() < b {
                        continue;
                    }
                    let m = Monomial { xs, ys, zs: zsv, ws: wsv };
                    out.e.add_term(m, random_coeff(rng, s));
                }
            }
        }
    }
    out
}

fn pick_distinct(rng: &mut impl Rng, n: usize, k: usize) -> Vec<u8> {
    if k > n {
        return Vec::new();
    }
    let mut all: Vec<u8> = (0..n as u8).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    all.truncate(k);
    all
}

/// Smooth random coefficient: a trigonometric function of a few matrix
/// entries times an antisymmetrized product of linear tangent functionals.
pub fn random_coeff(rng: &mut impl Rng, s: usize) -> FormCoeff {
    let w1: f64 = rng.gen_range(-1.0..1.0);
    let w2: f64 = rng.gen_range(-1.0..1.0);
    let w3: f64 = rng.gen_range(-1.0..1.0);
    let lin: Vec<Vec<f64>> = (0..s)
        .map(|_| (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    FormCoeff {
        s,
        f: Rc::new(move |stack: &Stack, dirs: &[StackDir]| {
            let mut x = 0.0;
            let mut c = 0usize;
            for p in stack {
                for h in &p.hs {
                    for v in &h.v.a {
                        x += match c % 3 {
                            0 => w1 * v,
                            1 => w2 * v,
                            _ => w3 * v,
                        };
                        c += 1;
                    }
                }
                for v in &p.g.v.a {
                    x += w2 * v;
                    c += 1;
                }
            }
            let scalar = (x * 0.3).sin() + 0.5 * w1;
            if s == 0 {
                return scalar;
            }
            // det of the pairing matrix λ_i(V_j): antisymmetric in dirs
            let mat: Vec<Vec<f64>> = (0..s)
                .map(|i| dirs.iter().map(|d| pair_dir(&lin[i], d)).collect())
                .collect();
            scalar * det(&mat)
        }),
    }
}

fn pair_dir(weights: &[f64], d: &StackDir) -> f64 {
    let mut acc = 0.0;
    let mut c = 0usize;
    for (hd, gd) in &d.slots {
        for m in hd {
            for v in &m.a {
                acc += weights[c % weights.len()] * v;
                c += 1;
            }
        }
        for v in &gd.a {
            acc += weights[(c + 7) % weights.len()] * v;
            c += 1;
        }
    }
    acc
}

fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut total = 0.0;
            for p in crate::numcore::permutations(n).unwrap() {
                let mut t = crate::numcore::perm_sign(&p) as f64;
                for (i, &pi) in p.iter().enumerate() {
                    t *= m[i][pi];
                }
                total += t;
            }
            total
        }
    }
}

/// Max |difference| between two elements over random evaluation samples.
pub fn element_distance(
    ctx: &Ctx,
    a: &LevelElement,
    b: &LevelElement,
    rng: &mut impl Rng,
    samples: usize,
) -> f64 {
    assert_eq!((a.level, a.q, a.r), (b.level, b.q, b.r));
    let mut worst: f64 = 0.0;
    let na = ctx.na(a.level);
    let nh = ctx.nh_dim();
    for _ in 0..samples {
        let base = crate::simplicial::random_stack(&ctx.k, a.level + 1, rng, 0.3);
        // one random argument shape per admissible block of the bidegree
        for k in 0..=a.q.min(3) {
            for l in 0..=(a.q.saturating_sub(k)) / 2 {
                for aa in 0..=a.r {
                    let rem = a.q as isize - (k + 2 * l + aa) as isize;
                    if rem < 0 || rem % 2 != 0 {
                        continue;
                    }
                    let bb = (rem / 2) as usize;
                    if aa + bb > a.r {
                        continue;
                    }
                    let s = a.r - aa - bb;
                    let xs = rand_vecs(rng, k, na);
                    let ys = rand_vecs(rng, l, nh);
                    let zs = rand_vecs(rng, aa, na);
                    let ws = rand_vecs(rng, bb, nh);
                    let dirs: Vec<StackDir> =
                        (0..s).map(|_| random_dir(&ctx.k, &base, rng, 0.8)).collect();
                    let va = eval_element(a, &base, &xs, &ys, &zs, &ws, &dirs);
                    let vb = eval_element(b, &base, &xs, &ys, &zs, &ws, &dirs);
                    worst = worst.max((va - vb).abs());
                }
            }
        }
    }
    worst
}

fn rand_vecs(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}
