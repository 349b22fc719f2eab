//! Dense complex helpers shared by the rest of the crate.
//!
//! Two-particle operators live on `C^N ⊗ C^N` with basis `|ij⟩ = |i⟩⊗|j⟩`
//! flattened row-major: index `i * N + j`, first factor slow.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_error(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let d = a.nrows();
    let mut worst = 0.0f64;
    for r in 0..d {
        for c in r..d {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// Only the lower triangle is read. The matrix is first split into the
/// connected components of its sparsity pattern (an exact permutation
/// similarity), and each block is solved separately; real symmetric blocks
/// take the real-arithmetic path. Structured states such as Bell mixtures
/// reduce to tiny blocks, so `N² = 1024` costs milliseconds instead of a
/// minute.
pub fn eigvalsh(a: &CMatrix) -> Vec<f64> {
    assert!(a.is_square(), "eigvalsh needs a square matrix");
    let mut vals = Vec::with_capacity(a.nrows());
    for block in sparsity_blocks(a) {
        let sub = CMatrix::from_fn(block.len(), block.len(), |r, c| a[(block[r], block[c])]);
        vals.extend(dense_eigvalsh(&sub));
    }
    vals.sort_by(f64::total_cmp);
    vals
}

fn dense_eigvalsh(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 1 {
        return vec![a[(0, 0)].re];
    }
    if a.iter().all(|z| z.im == 0.0) {
        let re = a.map(|z| z.re);
        re.symmetric_eigenvalues().iter().copied().collect()
    } else {
        a.clone().symmetric_eigenvalues().iter().copied().collect()
    }
}

/// Index sets of the connected components of the graph with an edge `i — j`
/// wherever the lower-triangle entry `a[(i, j)]` is nonzero.
fn sparsity_blocks(a: &CMatrix) -> Vec<Vec<usize>> {
    let d = a.nrows();
    let mut parent: Vec<usize> = (0..d).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for c in 0..d {
        for r in c + 1..d {
            if a[(r, c)] != ZERO {
                let (x, y) = (root(&mut parent, r), root(&mut parent, c));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; d];
    for i in 0..d {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    eigvalsh(a)[0]
}

/// `½‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * eigvalsh(&(a - b)).iter().map(|v| v.abs()).sum::<f64>()
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Permutation matrix exchanging the two factors of `C^n ⊗ C^n`.
pub fn swap_operator(n: usize) -> CMatrix {
    let mut s = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(j * n + i, i * n + j)] = ONE;
        }
    }
    s
}

/// `(u ⊗ u) ρ (u ⊗ u)†`.
pub fn conjugate_both(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    let uu = kron(u, u);
    &uu * rho * uu.adjoint()
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn unitarity_error(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

/// Integer square root for perfect squares.
pub fn exact_sqrt(d: usize) -> Option<usize> {
    let r = (d as f64).sqrt().round() as usize;
    (r * r == d).then_some(r)
}
