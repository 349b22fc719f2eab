//! The optimal universal cloner and the optimal universal entangler.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::covmap::MapParams;
use crate::error::{check_dimension, Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    /// `(|ij⟩ − |ji⟩)/√2`
    PsiMinus,
    /// `(|ij⟩ + |ji⟩)/√2`
    PsiPlus,
    /// `(|ii⟩ + |jj⟩)/√2`
    PhiPlus,
    /// `(|ii⟩ − |jj⟩)/√2`
    PhiMinus,
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PsiMinus => "psi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
        })
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi_minus" => Ok(BellKind::PsiMinus),
            "psi_plus" => Ok(BellKind::PsiPlus),
            "phi_plus" => Ok(BellKind::PhiPlus),
            "phi_minus" => Ok(BellKind::PhiMinus),
            other => Err(Error::validation(format!("unknown Bell family {other:?}"))),
        }
    }
}

/// Bell vector of the given family on `|i⟩, |j⟩` (1-based, `i < j`).
pub fn bell_state(kind: BellKind, i: usize, j: usize, n: usize) -> Result<CVector> {
    check_dimension(n)?;
    if i == 0 || j == 0 || i > n || j > n || i >= j {
        return Err(Error::Index { i, j, n });
    }
    let (i, j) = (i - 1, j - 1);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CVector::zeros(n * n);
    let (a, b, sign) = match kind {
        BellKind::PsiMinus => (i * n + j, j * n + i, -1.0),
        BellKind::PsiPlus => (i * n + j, j * n + i, 1.0),
        BellKind::PhiPlus => (i * n + i, j * n + j, 1.0),
        BellKind::PhiMinus => (i * n + i, j * n + j, -1.0),
    };
    v[a] = h;
    v[b] = h * sign;
    Ok(v)
}

/// All `N(N−1)/2` antisymmetric Bell vectors, ordered by `(i, j)`.
pub fn antisymmetric_bell_states(n: usize) -> Result<Vec<CVector>> {
    check_dimension(n)?;
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(bell_state(BellKind::PsiMinus, i, j, n)?);
        }
    }
    Ok(out)
}

/// Projector `(1 − SWAP)/2` onto the antisymmetric subspace.
pub fn antisymmetric_projector(n: usize) -> Result<CMatrix> {
    check_dimension(n)?;
    let s = linalg::swap_operator(n);
    Ok((linalg::identity(n * n) - s).scale(0.5))
}

/// `rho += w |psi⟩⟨psi|`, touching only the support of `psi`.
fn add_projector(rho: &mut CMatrix, psi: &CVector, w: f64) {
    let support: Vec<usize> = (0..psi.len()).filter(|&k| psi[k] != linalg::ZERO).collect();
    for &r in &support {
        for &c in &support {
            rho[(r, c)] += psi[r] * psi[c].conj() * w;
        }
    }
}

/// Cloner parameters: `2·alpha·m_11 = (N+2)/[N(N+1)]`, `beta·m_11 = 1/(2N+2)`,
/// `C = 0`, stored with `m_11 = N` divided out.
pub fn cloning_params(n: usize) -> Result<MapParams> {
    check_dimension(n)?;
    let nf = n as f64;
    let alpha = (nf + 2.0) / (2.0 * nf * nf * (nf + 1.0));
    let beta = 1.0 / (2.0 * nf * (nf + 1.0));
    MapParams::new(n, alpha, beta, 0.0)
}

/// Weight of `|11⟩⟨11|` in the cloner output, `2/(N+1)`.
pub fn cloning_probability(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok(2.0 / (n as f64 + 1.0))
}

/// `P11 |11⟩⟨11| + (1−P11)/(N−1) Σ_{j≥2} |ψ⁺_1j⟩⟨ψ⁺_1j|`.
pub fn cloning_output(n: usize) -> Result<DensityMatrix> {
    let p11 = cloning_probability(n)?;
    let mut rho = CMatrix::zeros(n * n, n * n);
    rho[(0, 0)] = Complex64::new(p11, 0.0);
    let w = (1.0 - p11) / (n as f64 - 1.0);
    for j in 2..=n {
        add_projector(&mut rho, &bell_state(BellKind::PsiPlus, 1, j, n)?, w);
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// Entangler parameters: `alpha = beta = 0`, `C = −1/[N(N−1)]`.
pub fn entangling_params(n: usize) -> Result<MapParams> {
    check_dimension(n)?;
    let nf = n as f64;
    MapParams::new(n, 0.0, 0.0, -1.0 / (nf * (nf - 1.0)))
}

/// Uniform mixture `2/[N(N−1)] Σ_{i<j} |ψ⁻_ij⟩⟨ψ⁻_ij|` of antisymmetric Bell states.
pub fn entangled_output(n: usize) -> Result<DensityMatrix> {
    let states = antisymmetric_bell_states(n)?;
    let w = 1.0 / states.len() as f64;
    let mut rho = CMatrix::zeros(n * n, n * n);
    for psi in &states {
        add_projector(&mut rho, psi, w);
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// `ln(N(N−1)/2)`, the entropy of the entangler output in nats.
pub fn optimal_entropy(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let nf = n as f64;
    Ok((nf * (nf - 1.0) / 2.0).ln())
}

/// `ln N² − ln(N(N−1)/2) = ln 2 + ln(N/(N−1))`: distance in entropy from the
/// maximally mixed two-particle state. Tends to one bit.
pub fn entropy_gap(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let nf = n as f64;
    Ok(std::f64::consts::LN_2 + (nf / (nf - 1.0)).ln())
}
