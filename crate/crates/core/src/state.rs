//! Density matrices and the JSON matrix schema.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Hermiticity and trace tolerance applied at construction.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Eigenvalues down to this value still count as non-negative.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace matrix.
///
/// Positivity is not enforced: the map family is routinely evaluated outside
/// its physical region. Use [`DensityMatrix::is_physical`] to check it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::validation(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() == 0 {
            return Err(Error::validation("density matrix is empty"));
        }
        let scale = linalg::max_abs(&mat).max(1.0);
        let herm = linalg::hermiticity_error(&mat);
        if herm > ALGEBRAIC_TOL * scale {
            return Err(Error::validation(format!(
                "matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = linalg::trace(&mat);
        if (tr - Complex64::new(1.0, 0.0)).norm() > ALGEBRAIC_TOL * scale * mat.nrows() as f64 {
            return Err(Error::validation(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityMatrix { mat })
    }

    /// Wraps a matrix already known to be Hermitian with unit trace.
    pub(crate) fn from_trusted(mat: CMatrix) -> Self {
        debug_assert!(mat.is_square());
        DensityMatrix { mat }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let w = Complex64::new(1.0 / d as f64, 0.0);
        DensityMatrix::from_trusted(linalg::identity(d) * w)
    }

    /// `|ψ⟩⟨ψ|` for a vector normalized on the way in.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::validation(
                "state vector has zero or non-finite norm",
            ));
        }
        let v = psi.unscale(norm);
        Ok(DensityMatrix::from_trusted(linalg::outer(&v)))
    }

    /// Pure state drawn uniformly from the unit sphere of `C^d`.
    pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        DensityMatrix::pure(&random_unit_vector(d, rng)).expect("gaussian vector is nonzero")
    }

    /// Full-rank mixed state `G G† / Tr(G G†)` with `G` complex Ginibre.
    pub fn random_mixed<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
        let mut w = &g * g.adjoint();
        let tr = linalg::trace(&w).re;
        w.unscale_mut(tr);
        DensityMatrix::from_trusted(hermitize(w))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.mat[(r, c)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.mat)
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue() >= -SPECTRAL_TOL
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for Hermitian ρ
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        linalg::trace_distance(&self.mat, &other.mat)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(&self.mat)
    }
}

impl TryFrom<MatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(value: MatrixJson) -> Result<Self> {
        DensityMatrix::new(value.to_matrix()?)
    }
}

/// `{"d": int, "re": [...], "im": [...]}` with row-major entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let len = self.d * self.d;
        if self.re.len() != len || self.im.len() != len {
            return Err(Error::validation(format!(
                "expected {len} entries for d = {}, got re: {}, im: {}",
                self.d,
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(CMatrix::from_fn(self.d, self.d, |r, c| {
            Complex64::new(self.re[r * self.d + c], self.im[r * self.d + c])
        }))
    }
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        assert!(m.is_square(), "matrix schema is for square matrices");
        let d = m.nrows();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        MatrixJson { d, re, im }
    }
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Symmetrizes away round-off: `(a + a†) / 2`.
pub(crate) fn hermitize(a: CMatrix) -> CMatrix {
    (&a + a.adjoint()).scale(0.5)
}
