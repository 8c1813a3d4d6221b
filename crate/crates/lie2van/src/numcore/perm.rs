use super::NumError;

/// Largest symmetric-group degree iterated exhaustively (factorial cost).
pub const MAX_PERM_DEGREE: usize = 6;

/// Sign of a permutation given as the image list `perm[i] = σ(i)`.
pub fn perm_sign(perm: &[usize]) -> i32 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut sign = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `{0..n-1}`, capped at degree [`MAX_PERM_DEGREE`].
pub fn permutations(n: usize) -> Result<Vec<Vec<usize>>, NumError> {
    if n > MAX_PERM_DEGREE {
        return Err(NumError::Capacity(format!(
            "permutation degree {} exceeds cap {}",
            n, MAX_PERM_DEGREE
        )));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(&mut cur, n, &mut out);
    Ok(out)
}

fn heap(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(cur, k - 1, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// A permutation of `{0..k+l+a+b-1}` together with the block sizes
/// `(k, l, a, b)` of the four slot groups it permutes.
#[derive(Clone, Debug)]
pub struct BlockPermutation {
    pub sizes: (usize, usize, usize, usize),
    pub perm: Vec<usize>,
}

impl BlockPermutation {
    pub fn new(sizes: (usize, usize, usize, usize), perm: Vec<usize>) -> Result<Self, NumError> {
        let n = sizes.0 + sizes.1 + sizes.2 + sizes.3;
        if perm.len() != n {
            return Err(NumError::Shape(format!("perm length {} vs block total {}", perm.len(), n)));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(NumError::Shape("not a bijection".into()));
            }
            seen[p] = true;
        }
        Ok(BlockPermutation { sizes, perm })
    }

    fn block_ranges(&self) -> [std::ops::Range<usize>; 4] {
        let (k, l, a, b) = self.sizes;
        [0..k, k..k + l, k + l..k + l + a, k + l + a..k + l + a + b]
    }
}

/// The block sign of the factorization `σ = σ' ∘ σ_w ∘ σ_z ∘ σ_y ∘ σ_x`:
/// the product of the ordinary signs of the two antisymmetric block
/// factors (x and w) and the graded sign of the residual shuffle `σ'`,
/// where the x- and w-items are odd and the y- and z-items even. This is
/// the Koszul sign of `σ` on the graded arguments: only transpositions of
/// two odd items contribute.
pub fn block_sign(p: &BlockPermutation) -> i32 {
    let (k, l, a, b) = p.sizes;
    let odd = |pos: usize| pos < k || pos >= k + l + a;
    let _ = b;
    let n = p.perm.len();
    let mut sign = 1;
    for i in 0..n {
        for j in i + 1..n {
            // items at output positions i < j came from perm[i], perm[j];
            // they were inverted iff perm[i] > perm[j]
            if p.perm[i] > p.perm[j] && odd(p.perm[i]) && odd(p.perm[j]) {
                sign = -sign;
            }
        }
    }
    sign
}
