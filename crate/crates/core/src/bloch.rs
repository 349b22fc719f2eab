//! SU(N) generators and the generalized Bloch encoding.
//!
//! The generators are `(A_ij)_kl = δ_ki δ_jl − δ_ij δ_kl / N`, i.e.
//! `A_ij = E_ij − δ_ij 1/N`. A state is written
//! `ρ = (1/N)(1 + Σ_ij m_ij A_ij)`.
//!
//! The `N²` generators are linearly dependent (`Σ_i A_ii = 0`), so `m` is only
//! fixed up to `m → m + c·1`. This crate uses the gauge `Tr m = N`, which
//! makes the coefficients of a state `m = N ρ` and sends the pure state `|1⟩`
//! to `m_ij = N δ_i1 δ_j1`. The map family in [`crate::covmap`] is sensitive
//! to this choice through its `beta` term.
//!
//! All public indices are 1-based; storage is 0-based.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dimension, Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::state::{gaussian, DensityMatrix, MatrixJson, ALGEBRAIC_TOL};

/// Unitarity tolerance for inputs to [`bloch_rotation`].
pub const UNITARY_TOL: f64 = 1e-8;

fn check_index(i: usize, j: usize, n: usize) -> Result<()> {
    if i == 0 || j == 0 || i > n || j > n {
        Err(Error::Index { i, j, n })
    } else {
        Ok(())
    }
}

/// The generator `A_ij` (1-based) as a dense `N×N` matrix.
pub fn generator(i: usize, j: usize, n: usize) -> Result<CMatrix> {
    check_dimension(n)?;
    check_index(i, j, n)?;
    Ok(generator_unchecked(i - 1, j - 1, n))
}

pub(crate) fn generator_unchecked(i: usize, j: usize, n: usize) -> CMatrix {
    let inv_n = 1.0 / n as f64;
    CMatrix::from_fn(n, n, |k, l| {
        let a = if k == i && l == j { 1.0 } else { 0.0 };
        let b = if i == j && k == l { inv_n } else { 0.0 };
        Complex64::new(a - b, 0.0)
    })
}

/// Nonzero entries `(row, col, value)` of `A_ij`, 0-based.
pub(crate) fn generator_entries(i: usize, j: usize, n: usize) -> Vec<(usize, usize, f64)> {
    if i != j {
        return vec![(i, j, 1.0)];
    }
    let inv_n = 1.0 / n as f64;
    (0..n)
        .map(|k| (k, k, if k == i { 1.0 - inv_n } else { -inv_n }))
        .collect()
}

/// All `N²` generators, entry `(i, j)` holding `A_ij`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    n: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn new(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let generators = (0..n * n)
            .map(|idx| generator_unchecked(idx / n, idx % n, n))
            .collect();
        Ok(GeneratorBasis { n, generators })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `A_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Result<&CMatrix> {
        check_index(i, j, self.n)?;
        Ok(&self.generators[(i - 1) * self.n + (j - 1)])
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &CMatrix {
        &self.generators[i * self.n + j]
    }

    /// Largest violation of `Tr A_ij = 0`, `A_ij† = A_ji` and the entry formula.
    pub fn algebra_error(&self) -> f64 {
        let n = self.n;
        let inv_n = 1.0 / n as f64;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let a = self.at(i, j);
                worst = worst.max(linalg::trace(a).norm());
                worst = worst.max(linalg::max_abs_diff(&a.adjoint(), self.at(j, i)));
                for k in 0..n {
                    for l in 0..n {
                        let d_ki = (k == i) as u8 as f64;
                        let d_jl = (j == l) as u8 as f64;
                        let d_ij = (i == j) as u8 as f64;
                        let d_kl = (k == l) as u8 as f64;
                        let expect = d_ki * d_jl - d_ij * d_kl * inv_n;
                        worst = worst.max((a[(k, l)] - Complex64::new(expect, 0.0)).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Generalized Bloch vector: an `N×N` coefficient array with `m_ij = m_ji*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    m: CMatrix,
}

impl BlochVector {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::validation(format!(
                "Bloch coefficients must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        check_dimension(m.nrows())?;
        let scale = linalg::max_abs(&m).max(1.0);
        let herm = linalg::hermiticity_error(&m);
        if herm > ALGEBRAIC_TOL * scale {
            return Err(Error::validation(format!(
                "Bloch coefficients violate m_ij = conj(m_ji) (deviation {herm:e})"
            )));
        }
        Ok(BlochVector { m })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(BlochVector {
            m: CMatrix::zeros(n, n),
        })
    }

    /// `m_ij = N δ_i1 δ_j1`, the encoding of `|1⟩⟨1|`.
    pub fn canonical(n: usize) -> Result<Self> {
        check_dimension(n)?;
        let mut m = CMatrix::zeros(n, n);
        m[(0, 0)] = Complex64::new(n as f64, 0.0);
        Ok(BlochVector { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// `m_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Result<Complex64> {
        check_index(i, j, self.dim())?;
        Ok(self.m[(i - 1, j - 1)])
    }

    pub fn coefficients(&self) -> &CMatrix {
        &self.m
    }

    /// `p·self + (1 − p)·other`.
    pub fn mix(&self, other: &BlochVector, p: f64) -> Result<BlochVector> {
        if self.dim() != other.dim() {
            return Err(Error::validation(format!(
                "cannot mix Bloch vectors of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(BlochVector {
            m: self.m.scale(p) + other.m.scale(1.0 - p),
        })
    }

    pub fn to_json(&self) -> BlochJson {
        BlochJson {
            m: MatrixJson::from(&self.m),
        }
    }
}

/// `{"m": {"d": .., "re": [..], "im": [..]}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochJson {
    pub m: MatrixJson,
}

impl TryFrom<BlochJson> for BlochVector {
    type Error = Error;

    fn try_from(value: BlochJson) -> Result<Self> {
        BlochVector::new(value.m.to_matrix()?)
    }
}

/// Bloch coefficients of `rho` in the `Tr m = N` gauge, i.e. `m = N ρ`.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochVector> {
    let n = rho.dim();
    check_dimension(n)?;
    Ok(BlochVector {
        m: rho.matrix().scale(n as f64),
    })
}

/// `(1/N)(1 + Σ m_ij A_ij)`, summed over the generators.
///
/// Positivity is not checked; see [`DensityMatrix::is_physical`].
pub fn bloch_compose(m: &BlochVector) -> DensityMatrix {
    let n = m.dim();
    let mut acc = linalg::identity(n);
    for i in 0..n {
        for j in 0..n {
            let coef = m.m[(i, j)];
            if coef == ZERO {
                continue;
            }
            for (r, c, v) in generator_entries(i, j, n) {
                acc[(r, c)] += coef * v;
            }
        }
    }
    acc.unscale_mut(n as f64);
    DensityMatrix::from_trusted(acc)
}

/// `Σ_ij m_ij m_ji − (Σ_i m_ii)² / N − N²(1 − 1/N)`; zero exactly for pure states.
///
/// The first two terms are invariant under `m → m + c·1`, so the residual does
/// not depend on the gauge.
pub fn purity_residual(m: &BlochVector) -> f64 {
    let n = m.dim() as f64;
    let c = &m.m;
    let mut quad = ZERO;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            quad += c[(i, j)] * c[(j, i)];
        }
    }
    let tr = linalg::trace(c);
    (quad - tr * tr / n).re - n * n * (1.0 - 1.0 / n)
}

/// Haar-distributed `N×N` unitary, deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    check_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(haar_unitary_with(n, &mut rng))
}

/// QR of a complex Ginibre matrix with the phases of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary_with<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Linear action `m'_ij = R_ijkl m_kl` induced by `ρ → U ρ U†`.
///
/// Stored as an `N²×N²` matrix acting on row-major `vec(m)`; in the
/// `Tr m = N` gauge this is `U ⊗ conj(U)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochRotation {
    n: usize,
    r: CMatrix,
}

impl BlochRotation {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.r
    }

    /// `R_ijkl`, 1-based.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Result<Complex64> {
        check_index(i, j, self.n)?;
        check_index(k, l, self.n)?;
        let n = self.n;
        Ok(self.r[((i - 1) * n + (j - 1), (k - 1) * n + (l - 1))])
    }

    pub fn apply(&self, m: &BlochVector) -> Result<BlochVector> {
        let n = self.n;
        if m.dim() != n {
            return Err(Error::validation(format!(
                "rotation of dimension {n} applied to Bloch vector of dimension {}",
                m.dim()
            )));
        }
        let flat = nalgebra::DVector::from_fn(n * n, |idx, _| m.m[(idx / n, idx % n)]);
        let out = &self.r * flat;
        Ok(BlochVector {
            m: CMatrix::from_fn(n, n, |i, j| out[i * n + j]),
        })
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &BlochRotation) -> Result<BlochRotation> {
        if self.n != first.n {
            return Err(Error::validation(
                "composing rotations of different dimension",
            ));
        }
        Ok(BlochRotation {
            n: self.n,
            r: &self.r * &first.r,
        })
    }
}

pub fn bloch_rotation(u: &CMatrix) -> Result<BlochRotation> {
    if !u.is_square() {
        return Err(Error::validation("rotation generator must be square"));
    }
    let n = u.nrows();
    check_dimension(n)?;
    let err = linalg::unitarity_error(u);
    if err > UNITARY_TOL {
        return Err(Error::validation(format!(
            "matrix is not unitary (deviation {err:e})"
        )));
    }
    Ok(BlochRotation {
        n,
        r: u.kronecker(&u.map(|z| z.conj())),
    })
}
