use super::perm::{perm_sign, permutations};

/// Small dense tensor with an arbitrary list of index dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub dims: Vec<usize>,
    pub a: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product::<usize>().max(1);
        Tensor { dims, a: vec![0.0; len] }
    }

    pub fn scalar(v: f64) -> Self {
        Tensor { dims: vec![], a: vec![v] }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut o = 0;
        for (i, &d) in idx.iter().zip(&self.dims) {
            debug_assert!(*i < d);
            o = o * d + i;
        }
        o
    }

    pub fn at(&self, idx: &[usize]) -> f64 {
        self.a[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.a[o] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.a[o] += v;
    }

    pub fn scale(&self, s: f64) -> Tensor {
        Tensor { dims: self.dims.clone(), a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dims, other.dims);
        Tensor {
            dims: self.dims.clone(),
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.add(&other.scale(-1.0))
    }

    pub fn norm_inf(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Iterates all multi-indices, calling `f(idx, value)`.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut idx = vec![0usize; self.dims.len()];
        for (flat, &v) in self.a.iter().enumerate() {
            let mut rem = flat;
            for k in (0..self.dims.len()).rev() {
                idx[k] = rem % self.dims[k];
                rem /= self.dims[k];
            }
            f(&idx, v);
        }
    }

    /// Symmetrizes (`sign = false`) or antisymmetrizes (`sign = true`) over
    /// the index slots in `slots`, averaging over the slot permutations.
    pub fn symmetrize(&self, slots: &[usize], sign: bool) -> Tensor {
        if slots.len() < 2 {
            return self.clone();
        }
        let perms = permutations(slots.len()).expect("symmetrize slot count");
        let mut out = Tensor::zeros(self.dims.clone());
        let norm = 1.0 / perms.len() as f64;
        self.for_each(|idx, _| {
            let mut acc = 0.0;
            for p in &perms {
                let mut src = idx.to_vec();
                for (a, &pa) in p.iter().enumerate() {
                    src[slots[a]] = idx[slots[pa]];
                }
                let s = if sign { perm_sign(p) as f64 } else { 1.0 };
                acc += s * self.at(&src);
            }
            out.set(idx, acc * norm);
        });
        out
    }

    /// Max deviation from (anti)symmetry over the given slots.
    pub fn symmetry_residual(&self, slots: &[usize], sign: bool) -> f64 {
        self.sub(&self.symmetrize(slots, sign)).norm_inf()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisymmetrize_kills_symmetric_part() {
        let mut t = Tensor::zeros(vec![2, 2]);
        t.set(&[0, 1], 1.0);
        t.set(&[1, 0], 1.0);
        let anti = t.symmetrize(&[0, 1], true);
        assert_eq!(anti.norm_inf(), 0.0);
        assert!(t.symmetry_residual(&[0, 1], false) == 0.0);
    }

    #[test]
    fn indexing_round_trip() {
        let mut t = Tensor::zeros(vec![2, 3, 2]);
        t.set(&[1, 2, 0], 5.0);
        assert_eq!(t.at(&[1, 2, 0]), 5.0);
        let mut count = 0;
        t.for_each(|_, _| count += 1);
        assert_eq!(count, 12);
    }
}
