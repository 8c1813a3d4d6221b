use super::NumError;

/// Dense row-major matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:+.4e} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, a: Vec<f64>) -> Result<Self, NumError> {
        if rows == 0 || cols == 0 || a.len() != rows * cols {
            return Err(NumError::Shape(format!("{}x{} with {} entries", rows, cols, a.len())));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(NumError::NonFinite("matrix entry".into()));
        }
        Ok(Mat { rows, cols, a })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, a: vec![0.0; rows * cols] }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        Mat { rows, cols, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn same_shape(&self, other: &Mat) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert!(self.same_shape(other), "add shape mismatch");
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        Mat { rows: self.rows, cols: self.cols, a }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert!(self.same_shape(other), "sub shape mismatch");
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect();
        Mat { rows: self.rows, cols: self.cols, a }
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self.at(i, k);
                if v == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.a[i * other.cols + j] += v * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn norm_inf(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_inner(&self, other: &Mat) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    /// Commutator `self*other - other*self`.
    pub fn comm(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Solves `self * x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &Mat) -> Result<Mat, NumError> {
        assert!(self.is_square() && self.rows == b.rows);
        let n = self.rows;
        let m = b.cols;
        let mut aug = vec![0.0; n * (n + m)];
        for i in 0..n {
            for j in 0..n {
                aug[i * (n + m) + j] = self.at(i, j);
            }
            for j in 0..m {
                aug[i * (n + m) + n + j] = b.at(i, j);
            }
        }
        let w = n + m;
        for col in 0..n {
            let mut piv = col;
            let mut best = aug[col * w + col].abs();
            for r in col + 1..n {
                let v = aug[r * w + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-300 {
                return Err(NumError::Singular);
            }
            if piv != col {
                for j in 0..w {
                    aug.swap(col * w + j, piv * w + j);
                }
            }
            let d = aug[col * w + col];
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = aug[r * w + col] / d;
                if f == 0.0 {
                    continue;
                }
                for j in col..w {
                    aug[r * w + j] -= f * aug[col * w + j];
                }
            }
        }
        let mut x = Mat::zeros(n, m);
        for i in 0..n {
            let d = aug[i * w + i];
            for j in 0..m {
                x.set(i, j, aug[i * w + n + j] / d);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat, NumError> {
        self.solve(&Mat::eye(self.rows))
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor series.
    ///
    /// Entries of interest stay O(1); the series is run to machine precision.
    pub fn expm(&self) -> Mat {
        assert!(self.is_square());
        let norm = self.norm_inf() * self.rows as f64;
        let mut s = 0u32;
        let mut scaled = self.clone();
        if norm > 0.5 {
            s = (norm / 0.5).log2().ceil() as u32;
            scaled = self.scale(0.5f64.powi(s as i32));
        }
        let n = self.rows;
        let mut term = Mat::eye(n);
        let mut sum = Mat::eye(n);
        for k in 1..=24 {
            term = term.mul(&scaled).scale(1.0 / k as f64);
            sum = sum.add(&term);
            if term.norm_inf() < 1e-18 {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// A point of a matrix manifold together with one tangent direction.
#[derive(Clone, Debug)]
pub struct TangentAt {
    pub base: Mat,
    pub dir: Mat,
}

impl TangentAt {
    pub fn new(base: Mat, dir: Mat) -> Result<Self, NumError> {
        if !base.same_shape(&dir) {
            return Err(NumError::Shape("base/dir shapes differ".into()));
        }
        Ok(TangentAt { base, dir })
    }
}

/// Exact differential of matrix multiplication: base `A·B`,
/// direction `dA·B + A·dB`.
pub fn tangent_of_product(a: &TangentAt, b: &TangentAt) -> TangentAt {
    TangentAt {
        base: a.base.mul(&b.base),
        dir: a.dir.mul(&b.base).add(&a.base.mul(&b.dir)),
    }
}

/// Exact differential of matrix inversion: base `A⁻¹`,
/// direction `-A⁻¹·dA·A⁻¹`.
pub fn tangent_of_inverse(a: &TangentAt) -> TangentAt {
    let inv = a.base.inverse().expect("tangent_of_inverse: singular base");
    TangentAt { dir: inv.mul(&a.dir).mul(&inv).scale(-1.0), base: inv }
}

/// First-order jet of a matrix: a value and the derivative of that value
/// along one curve parameter. Products and inverses propagate the
/// derivative exactly, so chains of group operations have exact tangents.
#[derive(Clone, Debug)]
pub struct JMat {
    pub v: Mat,
    pub d: Mat,
}

impl JMat {
    pub fn point(v: Mat) -> Self {
        let d = Mat::zeros(v.rows, v.cols);
        JMat { v, d }
    }

    pub fn new(v: Mat, d: Mat) -> Self {
        assert!(v.same_shape(&d));
        JMat { v, d }
    }

    pub fn eye(n: usize) -> Self {
        JMat::point(Mat::eye(n))
    }

    pub fn mul(&self, other: &JMat) -> JMat {
        JMat {
            v: self.v.mul(&other.v),
            d: self.d.mul(&other.v).add(&self.v.mul(&other.d)),
        }
    }

    pub fn inv(&self) -> JMat {
        let vi = self.v.inverse().expect("JMat::inv: singular");
        let d = vi.mul(&self.d).mul(&vi).scale(-1.0);
        JMat { v: vi, d }
    }

    pub fn add(&self, other: &JMat) -> JMat {
        JMat { v: self.v.add(&other.v), d: self.d.add(&other.d) }
    }

    pub fn sub(&self, other: &JMat) -> JMat {
        JMat { v: self.v.sub(&other.v), d: self.d.sub(&other.d) }
    }

    pub fn scale(&self, s: f64) -> JMat {
        JMat { v: self.v.scale(s), d: self.d.scale(s) }
    }

    pub fn transpose(&self) -> JMat {
        JMat { v: self.v.transpose(), d: self.d.transpose() }
    }

    pub fn drop_dir(&self) -> JMat {
        JMat::point(self.v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::curve_derivative;

    #[test]
    fn expm_agrees_with_rotation() {
        // exp of the standard so(3) generator about z is a rotation matrix
        let mut x = Mat::zeros(3, 3);
        let t = 0.7;
        x.set(0, 1, -t);
        x.set(1, 0, t);
        let r = x.expm();
        assert!((r.at(0, 0) - t.cos()).abs() < 1e-14);
        assert!((r.at(1, 0) - t.sin()).abs() < 1e-14);
        assert!((r.at(2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tangent_of_product_zero_and_identity() {
        let i = Mat::eye(3);
        let z = Mat::zeros(3, 3);
        let a = TangentAt::new(i.clone(), z.clone()).unwrap();
        let b = TangentAt::new(i.clone(), z.clone()).unwrap();
        let p = tangent_of_product(&a, &b);
        assert_eq!(p.dir.norm_inf(), 0.0);

        let x = Mat::from_fn(3, 3, |i, j| (i * 3 + j) as f64 * 0.1);
        let y = Mat::from_fn(3, 3, |i, j| ((i + j) % 3) as f64 * 0.2 - 0.1);
        let a = TangentAt::new(i.clone(), x.clone()).unwrap();
        let b = TangentAt::new(i.clone(), y.clone()).unwrap();
        let p = tangent_of_product(&a, &b);
        assert!(p.dir.sub(&x.add(&y)).norm_inf() < 1e-15);
    }

    #[test]
    fn tangent_of_product_matches_finite_difference() {
        let a0 = Mat::from_fn(3, 3, |i, j| if i == j { 1.2 } else { 0.1 * (i as f64 - j as f64) });
        let da = Mat::from_fn(3, 3, |i, j| ((i + 2 * j) % 4) as f64 * 0.3 - 0.4);
        let b0 = Mat::from_fn(3, 3, |i, j| if i == j { 0.9 } else { 0.05 * (i + j) as f64 });
        let db = Mat::from_fn(3, 3, |i, j| ((2 * i + j) % 3) as f64 * 0.2 - 0.1);
        let exact = tangent_of_product(
            &TangentAt::new(a0.clone(), da.clone()).unwrap(),
            &TangentAt::new(b0.clone(), db.clone()).unwrap(),
        );
        for i in 0..3 {
            for j in 0..3 {
                let num = curve_derivative(
                    |t| {
                        let at = a0.add(&da.scale(t));
                        let bt = b0.add(&db.scale(t));
                        at.mul(&bt).at(i, j)
                    },
                    0.0,
                )
                .unwrap();
                assert!((num - exact.dir.at(i, j)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn jet_inverse_is_exact() {
        let a0 = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 0.3 });
        let da = Mat::from_fn(2, 2, |i, j| (i as f64 + 1.0) * 0.1 * (j as f64 - 0.5));
        let jet = JMat::new(a0.clone(), da.clone()).inv();
        for i in 0..2 {
            for j in 0..2 {
                let num = curve_derivative(
                    |t| a0.add(&da.scale(t)).inverse().unwrap().at(i, j),
                    0.0,
                )
                .unwrap();
                assert!((num - jet.d.at(i, j)).abs() < 1e-8);
            }
        }
    }
}
