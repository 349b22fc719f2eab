//! Spectral and information-theoretic diagnostics of two-particle states.

mod search;

pub use search::{
    cloning_grid_search, entropy_minimizer, entropy_minimizer_in, CloningSearchResult,
    MinimizerResult,
};

use num_complex::Complex64;

use crate::bloch::{bloch_rotation, generator_entries, BlochVector};
use crate::covmap::{apply, MapParams};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::{DensityMatrix, SPECTRAL_TOL};

/// Eigenvalues below this are a hard error for entropy.
pub const NEGATIVE_EIG_LIMIT: f64 = -1e-8;

/// `−Σ λ ln λ` in nats, with `0 ln 0 = 0`.
///
/// Eigenvalues in `[−1e−8, 0)` are treated as zero; anything lower is rejected.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn entropy_of_spectrum(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigs {
        if l < NEGATIVE_EIG_LIMIT {
            return Err(Error::NotAState(l));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s.max(0.0))
}

/// Which tensor factor to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

impl TryFrom<u8> for Factor {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Factor::First),
            2 => Ok(Factor::Second),
            _ => Err(Error::validation(format!(
                "tensor factor must be 1 or 2, got {v}"
            ))),
        }
    }
}

pub(crate) fn factor_dim(rho: &DensityMatrix) -> Result<usize> {
    linalg::exact_sqrt(rho.dim())
        .filter(|&n| n >= 2)
        .ok_or_else(|| {
            Error::validation(format!("dimension {} is not N² for any N ≥ 2", rho.dim()))
        })
}

/// Reduced state after tracing out `traced`.
pub fn partial_trace(rho: &DensityMatrix, traced: Factor) -> Result<DensityMatrix> {
    let n = factor_dim(rho)?;
    let m = rho.matrix();
    let out = CMatrix::from_fn(n, n, |a, b| {
        (0..n)
            .map(|t| match traced {
                Factor::Second => m[(a * n + t, b * n + t)],
                Factor::First => m[(t * n + a, t * n + b)],
            })
            .sum()
    });
    Ok(DensityMatrix::from_trusted(out))
}

/// Transpose of the second factor: `⟨ac|ρ^Γ|bd⟩ = ⟨ad|ρ|bc⟩`.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<CMatrix> {
    let n = factor_dim(rho)?;
    let m = rho.matrix();
    Ok(CMatrix::from_fn(n * n, n * n, |r, c| {
        let (a, cc) = (r / n, r % n);
        let (b, d) = (c / n, c % n);
        m[(a * n + d, b * n + cc)]
    }))
}

/// Smallest eigenvalue of the partial transpose; negative certifies entanglement.
pub fn partial_transpose_min_eig(rho: &DensityMatrix) -> Result<f64> {
    Ok(linalg::min_eigenvalue(&partial_transpose(rho)?))
}

/// Largest entrywise deviation of either marginal from `1/N`.
pub fn marginal_distance(rho: &DensityMatrix) -> Result<f64> {
    let n = factor_dim(rho)?;
    let mixed = DensityMatrix::maximally_mixed(n);
    let d1 = linalg::max_abs_diff(partial_trace(rho, Factor::Second)?.matrix(), mixed.matrix());
    let d2 = linalg::max_abs_diff(partial_trace(rho, Factor::First)?.matrix(), mixed.matrix());
    Ok(d1.max(d2))
}

/// Expansion `1⊗1/N² + α¹_ij A_ij⊗1 + α²_ij 1⊗A_ij + K_ijrs A_ij⊗A_rs`.
///
/// The generators are dependent, so the coefficients carry a gauge. Here they
/// are the minimum-norm ones: `α¹`, `α²` are traceless and `K` is traceless in
/// each index pair (`Σ_i K_iirs = Σ_r K_ijrr = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyDecomposition {
    n: usize,
    pub alpha1: CMatrix,
    pub alpha2: CMatrix,
    /// `K_ijrs` at `((i·N + j)·N + r)·N + s`, 0-based.
    k: Vec<Complex64>,
}

impl TwoPartyDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `K_ijrs`, 1-based.
    pub fn k(&self, i: usize, j: usize, r: usize, s: usize) -> Result<Complex64> {
        let n = self.n;
        for idx in [i, j, r, s] {
            if idx == 0 || idx > n {
                return Err(Error::Index { i: idx, j: idx, n });
            }
        }
        Ok(self.k[(((i - 1) * n + (j - 1)) * n + (r - 1)) * n + (s - 1)])
    }

    pub fn k_tensor(&self) -> &[Complex64] {
        &self.k
    }

    /// Sums the expansion back into a matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.n;
        let d = n * n;
        let gens: Vec<_> = (0..d)
            .map(|idx| generator_entries(idx / n, idx % n, n))
            .collect();
        let mut out = linalg::identity(d);
        out.unscale_mut(d as f64);
        for (ij, entries) in gens.iter().enumerate() {
            for &(r, c, v) in entries {
                let a1 = self.alpha1[(ij / n, ij % n)] * v;
                let a2 = self.alpha2[(ij / n, ij % n)] * v;
                for t in 0..n {
                    out[(r * n + t, c * n + t)] += a1;
                    out[(t * n + r, t * n + c)] += a2;
                }
            }
        }
        for ij in 0..d {
            for rs in 0..d {
                let coef = self.k[ij * d + rs];
                if coef == linalg::ZERO {
                    continue;
                }
                for &(r1, c1, v1) in &gens[ij] {
                    for &(r2, c2, v2) in &gens[rs] {
                        out[(r1 * n + r2, c1 * n + c2)] += coef * (v1 * v2);
                    }
                }
            }
        }
        out
    }
}

pub fn two_party_decompose(rho: &DensityMatrix) -> Result<TwoPartyDecomposition> {
    let n = factor_dim(rho)?;
    let nf = n as f64;
    let m = rho.matrix();
    let traceless = |x: CMatrix| {
        let t = linalg::trace(&x) / nf;
        &x - linalg::identity(n) * t
    };
    // E_ab = A_ab + δ_ab 1/N turns ρ = Σ ρ_(ac),(bd) E_ab⊗E_cd into the
    // expansion; the projections below remove the gauge directions.
    let alpha1 = traceless(partial_trace(rho, Factor::Second)?.into_matrix()).unscale(nf);
    let alpha2 = traceless(partial_trace(rho, Factor::First)?.into_matrix()).unscale(nf);

    let raw = |a: usize, b: usize, c: usize, d: usize| m[(a * n + c, b * n + d)];
    let mut first_trace = vec![linalg::ZERO; n * n]; // Σ_e K_eecd
    let mut second_trace = vec![linalg::ZERO; n * n]; // Σ_f K_abff
    let mut full = linalg::ZERO;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = raw(a, b, c, d);
                    if a == b {
                        first_trace[c * n + d] += v;
                    }
                    if c == d {
                        second_trace[a * n + b] += v;
                    }
                    if a == b && c == d {
                        full += v;
                    }
                }
            }
        }
    }
    let mut k = Vec::with_capacity(n * n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = raw(a, b, c, d);
                    if a == b {
                        v -= first_trace[c * n + d] / nf;
                    }
                    if c == d {
                        v -= second_trace[a * n + b] / nf;
                    }
                    if a == b && c == d {
                        v += full / (nf * nf);
                    }
                    k.push(v);
                }
            }
        }
    }
    Ok(TwoPartyDecomposition {
        n,
        alpha1,
        alpha2,
        k,
    })
}

/// Minimal `ε` with `ρ = (1 − ε)·1/d + ε ρ₁` and `ρ₁` a state: `1 − d·λ_min`.
///
/// `λ_min` within `1e−10` of zero is taken as zero, and the result is clipped
/// to `[0, 1]` with values below `1e−12` reported as exactly 0.
pub fn epsilon_separation(rho: &DensityMatrix) -> Result<f64> {
    let mut lmin = rho.min_eigenvalue();
    if lmin < NEGATIVE_EIG_LIMIT {
        return Err(Error::NotAState(lmin));
    }
    if lmin.abs() <= SPECTRAL_TOL {
        lmin = 0.0;
    }
    let eps = (1.0 - rho.dim() as f64 * lmin).clamp(0.0, 1.0);
    Ok(if eps < 1e-12 { 0.0 } else { eps })
}

/// Trace distance between `apply(params, R_U m)` and `(U⊗U) apply(params, m) (U⊗U)†`.
pub fn verify_covariance(params: &MapParams, m: &BlochVector, u: &CMatrix) -> Result<f64> {
    let rotated = bloch_rotation(u)?.apply(m)?;
    let lhs = apply(params, &rotated)?;
    let rhs = linalg::conjugate_both(u, apply(params, m)?.matrix());
    Ok(linalg::trace_distance(lhs.matrix(), &rhs))
}
