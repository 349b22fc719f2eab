//! The covariant, linear, permutation-invariant two-particle map family.
//!
//! For parameters `(alpha, beta, C)` and a Bloch vector `m` the output is
//!
//! ```text
//! ρ = 1⊗1/N² + alpha m_ij (A_ij⊗1 + 1⊗A_ij) + C A_ij⊗A_ji
//!            + beta m_il A_ij⊗A_jl + beta m_li A_ji⊗A_lj
//! ```
//!
//! `A_ij⊗A_ji` is the only product invariant under `U⊗U`; `A_ij⊗A_jl` and its
//! adjoint carry one free index pair and rotate like `m`.
//!
//! On the canonical input `m_ij = N δ_i1 δ_j1` the output is block diagonal
//! and fixed by four numbers, see [`canonical_coefficients`].

mod region;

pub use region::{critical_points, region_scan, CriticalPoint, Interval, RegionPoint, RegionScan};

use serde::{Deserialize, Serialize};

use crate::bloch::{generator_entries, BlochVector};
use crate::error::{check_dimension, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;
use num_complex::Complex64;

/// A constraint slack at or above this value counts as satisfied.
pub const MARGIN_TOL: f64 = -1e-12;

/// One member `(alpha, beta, C)` of the family at dimension `N`.
///
/// `alpha` and `beta` are the bare coefficients; the canonical-input
/// products are `alpha·m_11 = alpha·N` and `beta·m_11 = beta·N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl MapParams {
    pub fn new(n: usize, alpha: f64, beta: f64, c: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(alpha.is_finite() && beta.is_finite() && c.is_finite()) {
            return Err(Error::validation(format!(
                "map parameters must be finite, got alpha = {alpha}, beta = {beta}, C = {c}"
            )));
        }
        Ok(MapParams { n, alpha, beta, c })
    }

    /// Builds parameters from `(alpha·m_11, beta·m_11, C)` with `m_11 = N`.
    pub fn from_products(n: usize, alpha_m11: f64, beta_m11: f64, c: f64) -> Result<Self> {
        let nf = n as f64;
        MapParams::new(n, alpha_m11 / nf, beta_m11 / nf, c)
    }

    pub fn alpha_m11(&self) -> f64 {
        self.alpha * self.n as f64
    }

    pub fn beta_m11(&self) -> f64 {
        self.beta * self.n as f64
    }
}

fn check_same_dim(params: &MapParams, m: &BlochVector) -> Result<()> {
    if params.n != m.dim() {
        Err(Error::validation(format!(
            "map dimension {} does not match Bloch vector dimension {}",
            params.n,
            m.dim()
        )))
    } else {
        Ok(())
    }
}

/// Evaluates the map on `m`. The result always has unit trace; it is positive
/// only inside the physical region.
pub fn apply(params: &MapParams, m: &BlochVector) -> Result<DensityMatrix> {
    check_same_dim(params, m)?;
    Ok(DensityMatrix::from_trusted(assemble(
        params,
        m.coefficients(),
    )))
}

fn assemble(params: &MapParams, m: &CMatrix) -> CMatrix {
    let n = params.n;
    let d = n * n;
    let gens: Vec<Vec<(usize, usize, f64)>> = (0..d)
        .map(|idx| generator_entries(idx / n, idx % n, n))
        .collect();
    let gen = |i: usize, j: usize| &gens[i * n + j];

    let mut out = linalg::identity(d);
    out.unscale_mut(d as f64);

    // out += s · (a ⊗ b) for sparse a, b
    let add_kron =
        |out: &mut CMatrix, a: &[(usize, usize, f64)], b: &[(usize, usize, f64)], s: Complex64| {
            for &(r1, c1, v1) in a {
                for &(r2, c2, v2) in b {
                    out[(r1 * n + r2, c1 * n + c2)] += s * (v1 * v2);
                }
            }
        };

    if params.alpha != 0.0 {
        for i in 0..n {
            for j in 0..n {
                let s = m[(i, j)] * params.alpha;
                if s == linalg::ZERO {
                    continue;
                }
                for &(r, c, v) in gen(i, j) {
                    for t in 0..n {
                        out[(r * n + t, c * n + t)] += s * v;
                        out[(t * n + r, t * n + c)] += s * v;
                    }
                }
            }
        }
    }

    if params.c != 0.0 {
        let s = Complex64::new(params.c, 0.0);
        for i in 0..n {
            for j in 0..n {
                add_kron(&mut out, gen(i, j), gen(j, i), s);
            }
        }
    }

    if params.beta != 0.0 {
        for i in 0..n {
            for l in 0..n {
                let s_fwd = m[(i, l)] * params.beta;
                let s_adj = m[(l, i)] * params.beta;
                for j in 0..n {
                    if s_fwd != linalg::ZERO {
                        add_kron(&mut out, gen(i, j), gen(j, l), s_fwd);
                    }
                    if s_adj != linalg::ZERO {
                        add_kron(&mut out, gen(j, i), gen(l, j), s_adj);
                    }
                }
            }
        }
    }
    out
}

/// The numbers fixing the output on the canonical input `m_11 = N`:
///
/// - `m11 = ⟨11|ρ|11⟩`
/// - `m12 = ⟨1j|ρ|1j⟩ = ⟨j1|ρ|j1⟩`
/// - `m23 = ⟨ij|ρ|ij⟩` for `i ≠ j`, both `≥ 2`
/// - `cross = ⟨1j|ρ|j1⟩ = C + beta·m_11`
///
/// together with `C = ⟨ij|ρ|ji⟩` and `⟨jj|ρ|jj⟩ = m23 + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalCoefficients {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M11")]
    pub m11: f64,
    #[serde(rename = "M12")]
    pub m12: f64,
    #[serde(rename = "M23")]
    pub m23: f64,
    pub cross: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

pub fn canonical_coefficients(params: &MapParams) -> CanonicalCoefficients {
    let nf = params.n as f64;
    let a = params.alpha_m11();
    let b = params.beta_m11();
    let c = params.c;
    let m23 = 1.0 / (nf * nf) - 2.0 * a / nf - c / nf + 2.0 * b / (nf * nf);
    let m12 = m23 + a - 2.0 * b / nf;
    let k = 1.0 - 1.0 / nf;
    let m11 = 1.0 / (nf * nf) + 2.0 * a * k + c * k + 2.0 * b * k * k;
    CanonicalCoefficients {
        n: params.n,
        m11,
        m12,
        m23,
        cross: c + b,
        c,
    }
}

impl CanonicalCoefficients {
    /// `M11 + 2(N−1)M12 + (N−1)(M23 + C) + (N−1)(N−2)M23`, which must be 1.
    pub fn trace(&self) -> f64 {
        let k = self.n as f64 - 1.0;
        self.m11 + 2.0 * k * self.m12 + k * (self.m23 + self.c) + k * (k - 1.0) * self.m23
    }

    /// Eigenvalue families with multiplicities; zero-multiplicity families are omitted.
    pub fn spectrum(&self) -> Vec<(EigenFamily, f64, usize)> {
        EigenFamily::ALL
            .iter()
            .map(|&f| (f, f.value(self), f.multiplicity(self.n)))
            .filter(|&(_, _, mult)| mult > 0)
            .collect()
    }

    /// The full spectrum as a sorted multiset of length `N²`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .spectrum()
            .into_iter()
            .flat_map(|(_, v, mult)| std::iter::repeat_n(v, mult))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// The distinct eigenvalue lines of the canonical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EigenFamily {
    /// `|11⟩`
    M11,
    /// `|jj⟩` and `(|ij⟩ + |ji⟩)/√2` for `2 ≤ i < j`
    M23PlusC,
    /// `(|1j⟩ + |j1⟩)/√2`
    M12PlusCross,
    /// `(|1j⟩ − |j1⟩)/√2`
    M12MinusCross,
    /// `(|ij⟩ − |ji⟩)/√2` for `2 ≤ i < j`
    M23MinusC,
}

impl EigenFamily {
    pub const ALL: [EigenFamily; 5] = [
        EigenFamily::M11,
        EigenFamily::M23PlusC,
        EigenFamily::M12PlusCross,
        EigenFamily::M12MinusCross,
        EigenFamily::M23MinusC,
    ];

    pub fn value(self, k: &CanonicalCoefficients) -> f64 {
        match self {
            EigenFamily::M11 => k.m11,
            EigenFamily::M23PlusC => k.m23 + k.c,
            EigenFamily::M12PlusCross => k.m12 + k.cross,
            EigenFamily::M12MinusCross => k.m12 - k.cross,
            EigenFamily::M23MinusC => k.m23 - k.c,
        }
    }

    pub fn multiplicity(self, n: usize) -> usize {
        let k = n - 1;
        match self {
            EigenFamily::M11 => 1,
            // |jj⟩ for j ≥ 2 plus the symmetric pairs among j ≥ 2
            EigenFamily::M23PlusC => k + k * (k - 1) / 2,
            EigenFamily::M12PlusCross | EigenFamily::M12MinusCross => k,
            EigenFamily::M23MinusC => k * (k - 1) / 2,
        }
    }
}

/// The four non-negativity constraints on the canonical output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityFlags {
    /// Slacks of `M23 ≥ |C|`, `M12 ≥ |cross|`, `M23 + C ≥ 0`, `M11 ≥ 0`.
    pub slacks: [f64; 4],
    pub margin: f64,
}

impl PositivityFlags {
    pub fn flags(&self) -> [bool; 4] {
        self.slacks.map(|s| s >= MARGIN_TOL)
    }

    pub fn is_physical(&self) -> bool {
        self.margin >= MARGIN_TOL
    }
}

/// Evaluates the four constraints. At `N = 2` there is no `i<j` block among
/// `j ≥ 2`, so the first constraint only requires `M23 + C ≥ 0`.
pub fn positivity_flags(k: &CanonicalCoefficients) -> PositivityFlags {
    let first = if k.n >= 3 {
        k.m23 - k.c.abs()
    } else {
        k.m23 + k.c
    };
    let slacks = [first, k.m12 - k.cross.abs(), k.m23 + k.c, k.m11];
    let margin = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    PositivityFlags { slacks, margin }
}

pub fn is_physical(params: &MapParams) -> bool {
    positivity_flags(&canonical_coefficients(params)).is_physical()
}

/// Max-norm deviation of the map from linearity on the mixture `p·m1 + (1−p)·m2`.
pub fn verify_linearity(
    params: &MapParams,
    m1: &BlochVector,
    m2: &BlochVector,
    p: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!(
            "mixing weight {p} outside [0, 1]"
        )));
    }
    check_same_dim(params, m1)?;
    check_same_dim(params, m2)?;
    let mixed = apply(params, &m1.mix(m2, p)?)?;
    let r1 = apply(params, m1)?;
    let r2 = apply(params, m2)?;
    let combo = r1.matrix().scale(p) + r2.matrix().scale(1.0 - p);
    Ok(linalg::max_abs_diff(mixed.matrix(), &combo))
}

/// Max-norm deviation of `SWAP·ρ·SWAP` from `ρ`.
pub fn permutation_deviation(rho: &DensityMatrix) -> Result<f64> {
    let n = linalg::exact_sqrt(rho.dim())
        .ok_or_else(|| Error::validation(format!("dimension {} is not a square", rho.dim())))?;
    let s = linalg::swap_operator(n);
    Ok(linalg::max_abs_diff(
        &(&s * rho.matrix() * &s),
        rho.matrix(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::bloch_decompose;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Block layout of the canonical output, written out entry by entry.
    fn canonical_oracle(k: &CanonicalCoefficients) -> CMatrix {
        let n = k.n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut o = CMatrix::zeros(n * n, n * n);
        let set = |o: &mut CMatrix, r: usize, c: usize, v: f64| o[(r, c)] = Complex64::new(v, 0.0);
        set(&mut o, 0, 0, k.m11);
        for j in 1..n {
            set(&mut o, idx(j, j), idx(j, j), k.m23 + k.c);
            set(&mut o, idx(0, j), idx(0, j), k.m12);
            set(&mut o, idx(j, 0), idx(j, 0), k.m12);
            set(&mut o, idx(0, j), idx(j, 0), k.cross);
            set(&mut o, idx(j, 0), idx(0, j), k.cross);
        }
        for i in 1..n {
            for j in i + 1..n {
                set(&mut o, idx(i, j), idx(i, j), k.m23);
                set(&mut o, idx(j, i), idx(j, i), k.m23);
                set(&mut o, idx(i, j), idx(j, i), k.c);
                set(&mut o, idx(j, i), idx(i, j), k.c);
            }
        }
        o
    }

    fn random_params(n: usize, rng: &mut impl Rng) -> MapParams {
        MapParams::from_products(
            n,
            rng.random_range(-0.3..0.3),
            rng.random_range(-0.3..0.3),
            rng.random_range(-0.3..0.3),
        )
        .unwrap()
    }

    #[test]
    fn zero_params_give_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=4 {
            let p = MapParams::new(n, 0.0, 0.0, 0.0).unwrap();
            let m = bloch_decompose(&DensityMatrix::random_pure(n, &mut rng)).unwrap();
            let out = apply(&p, &m).unwrap();
            let expect = DensityMatrix::maximally_mixed(n * n);
            assert!(linalg::max_abs_diff(out.matrix(), expect.matrix()) < 1e-15);
        }
    }

    #[test]
    fn canonical_output_matches_block_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..=6 {
            for _ in 0..5 {
                let p = random_params(n, &mut rng);
                let k = canonical_coefficients(&p);
                let out = apply(&p, &BlochVector::canonical(n).unwrap()).unwrap();
                let err = linalg::max_abs_diff(out.matrix(), &canonical_oracle(&k));
                assert!(err < 1e-12, "n = {n}, err = {err:e}");
                assert!((k.trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coefficients_golden_fixture() {
        let k = canonical_coefficients(&MapParams::new(3, 0.0, 0.0, -1.0 / 6.0).unwrap());
        assert!(k.m11.abs() < 1e-15);
        assert!((k.m12 - 1.0 / 6.0).abs() < 1e-15);
        assert!((k.m23 - 1.0 / 6.0).abs() < 1e-15);
        assert!((k.cross + 1.0 / 6.0).abs() < 1e-15);

        for n in 2..=5 {
            let k = canonical_coefficients(&MapParams::new(n, 0.0, 0.0, 0.0).unwrap());
            let q = 1.0 / (n * n) as f64;
            assert_eq!((k.m11, k.m12, k.m23, k.cross), (q, q, q, 0.0));
        }
    }

    #[test]
    fn flags_at_reference_points() {
        let grey = positivity_flags(&canonical_coefficients(
            &MapParams::from_products(3, 0.0, 0.0, -1.0 / 6.0).unwrap(),
        ));
        assert!(grey.margin.abs() < 1e-12);
        for s in grey.slacks {
            assert!(s.abs() < 1e-12);
        }
        assert!(grey.is_physical());

        for n in 2..=6 {
            let origin = positivity_flags(&canonical_coefficients(
                &MapParams::new(n, 0.0, 0.0, 0.0).unwrap(),
            ));
            assert!((origin.margin - 1.0 / (n * n) as f64).abs() < 1e-15);
            assert_eq!(origin.flags(), [true; 4]);
        }

        let p = MapParams::from_products(3, 0.0, 0.0, 1.0).unwrap();
        let bad = positivity_flags(&canonical_coefficients(&p));
        assert!(!bad.is_physical());
        assert!(
            apply(&p, &BlochVector::canonical(3).unwrap())
                .unwrap()
                .min_eigenvalue()
                < -1e-9
        );
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = MapParams::new(3, 0.0, 0.0, 0.0).unwrap();
        let m = BlochVector::canonical(2).unwrap();
        assert!(matches!(apply(&p, &m), Err(Error::Validation(_))));
        assert!(MapParams::new(3, f64::NAN, 0.0, 0.0).is_err());
        assert!(matches!(
            MapParams::new(1, 0.0, 0.0, 0.0),
            Err(Error::Dimension(1))
        ));
    }

    #[test]
    fn linearity_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 3;
        let p = random_params(n, &mut rng);
        let m1 = bloch_decompose(&DensityMatrix::random_pure(n, &mut rng)).unwrap();
        let m2 = bloch_decompose(&DensityMatrix::random_pure(n, &mut rng)).unwrap();
        assert_eq!(verify_linearity(&p, &m1, &m2, 1.0).unwrap(), 0.0);
        assert!(verify_linearity(&p, &m1, &m2, 1.5).is_err());

        let neg = BlochVector::new(m1.coefficients().scale(-1.0)).unwrap();
        let half = apply(&p, &m1.mix(&neg, 0.5).unwrap()).unwrap();
        let at_zero = apply(&p, &BlochVector::zero(n).unwrap()).unwrap();
        assert!(linalg::max_abs_diff(half.matrix(), at_zero.matrix()) < 1e-15);
        assert!(verify_linearity(&p, &m1, &neg, 0.5).unwrap() < 1e-12);
    }

    #[test]
    fn params_json_is_flat() {
        let p = MapParams::new(3, 0.25, -0.5, 0.125).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"N":3,"alpha":0.25,"beta":-0.5,"C":0.125}"#);
    }
}
