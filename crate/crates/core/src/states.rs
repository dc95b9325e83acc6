//! The N-qudit Werner-Popescu family
//! `ρ(x) = (1 - x) I/d^N + x |Φ⟩⟨Φ|` with `|Φ⟩ = d^{-1/2} Σ_k |k⟩^{⊗N}`,
//! together with closed-form spectra of the state, of its `N - 1` party
//! marginal and of the sandwiched operator
//! `Γ = (I_A ⊗ ρ_B)^{(1-q)/2q} ρ (I_A ⊗ ρ_B)^{(1-q)/2q}`.
//!
//! The closed forms are the fast path used by the entropy and threshold
//! code; the dense constructors exist so the closed forms can be checked.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, sandwich, ComplexMatrix, DensityMatrix, PowerMode, Spectrum};

/// Default cap on `d^N` for dense construction.
pub const DEFAULT_DENSE_CAP: u64 = 10_000;

// Keeps every d^N exactly representable as f64.
const MAX_GLOBAL_DIM: u64 = 1 << 53;

/// One member `(d, N, x)` of the Werner-Popescu family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerPopescuParams {
    levels: u32,
    parties: u32,
    mixing: f64,
    dense_cap: u64,
}

impl WernerPopescuParams {
    pub fn new(levels: u32, parties: u32, mixing: f64) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParams(format!("d = {levels} must be at least 2")));
        }
        if parties < 2 {
            return Err(Error::InvalidParams(format!("N = {parties} must be at least 2")));
        }
        if !(0.0..=1.0).contains(&mixing) {
            return Err(Error::InvalidParams(format!("x = {mixing} must lie in [0, 1]")));
        }
        match u64::from(levels).checked_pow(parties) {
            Some(dim) if dim <= MAX_GLOBAL_DIM => {}
            _ => return Err(Error::InvalidParams(format!("d^N = {levels}^{parties} is too large"))),
        }
        Ok(Self {
            levels,
            parties,
            mixing,
            dense_cap: DEFAULT_DENSE_CAP,
        })
    }

    pub fn with_dense_cap(mut self, cap: u64) -> Self {
        self.dense_cap = cap;
        self
    }

    /// Same `(d, N)` at a different mixing parameter.
    pub fn with_mixing(self, mixing: f64) -> Result<Self> {
        Ok(Self::new(self.levels, self.parties, mixing)?.with_dense_cap(self.dense_cap))
    }

    /// `d`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `N`.
    pub fn parties(&self) -> u32 {
        self.parties
    }

    /// `x`.
    pub fn mixing(&self) -> f64 {
        self.mixing
    }

    pub fn dense_cap(&self) -> u64 {
        self.dense_cap
    }

    /// `d^N`.
    pub fn global_dim(&self) -> u64 {
        u64::from(self.levels).pow(self.parties)
    }

    /// `d^{N-1}`, the dimension of the marginal on parties `2..N`.
    pub fn marginal_dim(&self) -> u64 {
        u64::from(self.levels).pow(self.parties - 1)
    }

    fn check_dense(&self) -> Result<usize> {
        let dim = self.global_dim();
        if dim > self.dense_cap {
            return Err(Error::DimensionCapExceeded {
                dim,
                cap: self.dense_cap,
            });
        }
        Ok(dim as usize)
    }
}

/// Closed-form spectra of `ρ` and of its marginal `ρ_B` on parties `2..N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpectrum {
    /// `(1 - x)/d^N`.
    pub lambda1: f64,
    /// `(1 + (d^N - 1)x)/d^N`.
    pub lambda2: f64,
    /// `(1 - x)/d^{N-1}`.
    pub eta1: f64,
    /// `(1 + (d^{N-2} - 1)x)/d^{N-1}`.
    pub eta2: f64,
    pub mult_lambda1: u64,
    pub mult_lambda2: u64,
    pub mult_eta1: u64,
    pub mult_eta2: u64,
}

impl StateSpectrum {
    pub fn global(&self) -> Spectrum {
        Spectrum::from_pairs([
            (self.lambda1, self.mult_lambda1 as usize),
            (self.lambda2, self.mult_lambda2 as usize),
        ])
    }

    pub fn marginal(&self) -> Spectrum {
        Spectrum::from_pairs([
            (self.eta1, self.mult_eta1 as usize),
            (self.eta2, self.mult_eta2 as usize),
        ])
    }
}

pub fn state_spectrum(params: &WernerPopescuParams) -> StateSpectrum {
    let d = u64::from(params.levels);
    let global = params.global_dim();
    let marginal = params.marginal_dim();
    let x = params.mixing;
    let (gd, md) = (global as f64, marginal as f64);
    let inner = (marginal / d) as f64; // d^{N-2}
    StateSpectrum {
        lambda1: (1.0 - x) / gd,
        lambda2: (1.0 + (gd - 1.0) * x) / gd,
        eta1: (1.0 - x) / md,
        eta2: (1.0 + (inner - 1.0) * x) / md,
        mult_lambda1: global - 1,
        mult_lambda2: 1,
        mult_eta1: marginal - d,
        mult_eta2: d,
    }
}

/// The three nonzero eigenvalue families of `Γ` at index `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichSpectrum {
    pub q: f64,
    /// `λ1 η1^{(1-q)/q}`; `None` when its block is empty (`N = 2`).
    pub gamma1: Option<f64>,
    /// `λ1 η2^{(1-q)/q}`.
    pub gamma2: f64,
    /// `λ2 η2^{(1-q)/q}`.
    pub gamma3: f64,
    /// `d^N - d^2`.
    pub mult1: u64,
    /// `d^2 - 1`.
    pub mult2: u64,
    pub mult3: u64,
}

impl SandwichSpectrum {
    pub fn to_spectrum(&self) -> Spectrum {
        let mut pairs = vec![(self.gamma2, self.mult2 as usize), (self.gamma3, self.mult3 as usize)];
        if let Some(g1) = self.gamma1 {
            pairs.push((g1, self.mult1 as usize));
        }
        Spectrum::from_pairs(pairs)
    }

    /// `Σ mult · γ^q` evaluated directly.
    pub fn trace_power(&self) -> f64 {
        let q = self.q;
        self.gamma1.map_or(0.0, |g| self.mult1 as f64 * g.powf(q))
            + self.mult2 as f64 * self.gamma2.powf(q)
            + self.mult3 as f64 * self.gamma3.powf(q)
    }
}

/// Closed-form spectrum of the sandwiched operator.
///
/// At `x = 1` the marginal block carrying `η1` vanishes, so for `q > 1`
/// (negative sandwich exponent) and `N ≥ 3` this returns
/// [`Error::SingularNegativePower`].
pub fn sandwich_spectrum(params: &WernerPopescuParams, q: f64) -> Result<SandwichSpectrum> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidOrder(q));
    }
    let s = state_spectrum(params);
    let p = (1.0 - q) / q;
    let d2 = u64::from(params.levels).pow(2);
    let mult1 = params.global_dim() - d2;

    let gamma1 = if mult1 == 0 {
        None
    } else if s.eta1 == 0.0 && p < 0.0 {
        return Err(Error::SingularNegativePower { eigenvalue: 0.0 });
    } else {
        Some(s.lambda1 * s.eta1.powf(p))
    };
    Ok(SandwichSpectrum {
        q,
        gamma1,
        gamma2: s.lambda1 * s.eta2.powf(p),
        gamma3: s.lambda2 * s.eta2.powf(p),
        mult1,
        mult2: d2 - 1,
        mult3: 1,
    })
}

/// `|Φ⟩ = d^{-1/2} Σ_k |k⟩^{⊗N}` using the default dense cap.
pub fn ghz_vector(levels: u32, parties: u32) -> Result<Vec<Complex64>> {
    ghz_vector_for(&WernerPopescuParams::new(levels, parties, 0.0)?)
}

fn ghz_vector_for(params: &WernerPopescuParams) -> Result<Vec<Complex64>> {
    let dim = params.check_dense()?;
    let d = params.levels as usize;
    // |k…k⟩ sits at k (d^{N-1} + … + d + 1) = k (d^N - 1)/(d - 1).
    let step = (dim - 1) / (d - 1);
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..d {
        v[k * step] = amp;
    }
    Ok(v)
}

/// Dense `ρ(x)` on `N` subsystems of dimension `d`.
pub fn werner_popescu(params: &WernerPopescuParams) -> Result<DensityMatrix> {
    let dim = params.check_dense()?;
    let x = params.mixing;
    let phi = ghz_vector_for(params)?;
    let matrix = ComplexMatrix::identity(dim)
        .scale((1.0 - x) / dim as f64)
        .add(&ComplexMatrix::outer(&phi).scale(x));
    Ok(DensityMatrix::from_parts_unchecked(
        matrix,
        vec![params.levels as usize; params.parties as usize],
    ))
}

/// Dense `Γ = (I_A ⊗ ρ_B)^{(1-q)/2q} ρ (I_A ⊗ ρ_B)^{(1-q)/2q}`.
pub fn sandwich_matrix(params: &WernerPopescuParams, q: f64, mode: PowerMode) -> Result<ComplexMatrix> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidOrder(q));
    }
    let rho = werner_popescu(params)?;
    let keep: Vec<usize> = (2..=params.parties as usize).collect();
    let rho_b = partial_trace(&rho, &keep)?;
    let outer = kron(&ComplexMatrix::identity(params.levels as usize), rho_b.matrix());
    sandwich(rho.matrix(), &outer, (1.0 - q) / (2.0 * q), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigvalsh;

    fn params(d: u32, n: u32, x: f64) -> WernerPopescuParams {
        WernerPopescuParams::new(d, n, x).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(WernerPopescuParams::new(1, 3, 0.1).is_err());
        assert!(WernerPopescuParams::new(3, 1, 0.1).is_err());
        assert!(WernerPopescuParams::new(3, 3, 1.5).is_err());
        assert!(WernerPopescuParams::new(3, 3, f64::NAN).is_err());
        assert!(WernerPopescuParams::new(10, 40, 0.1).is_err());
    }

    #[test]
    fn ghz_qubits() {
        let v = ghz_vector(2, 3).unwrap();
        let s = 1.0 / 2f64.sqrt();
        for (i, a) in v.iter().enumerate() {
            let expected = if i == 0 || i == 7 { s } else { 0.0 };
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn ghz_qutrits() {
        let v = ghz_vector(3, 2).unwrap();
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
        for i in [0, 4, 8] {
            assert!((v[i].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        let v = ghz_vector(3, 3).unwrap();
        let support: Vec<usize> = (0..27).filter(|&i| v[i].norm() > 0.0).collect();
        assert_eq!(support, vec![0, 13, 26]);
    }

    #[test]
    fn dense_cap_enforced() {
        let p = params(4, 4, 0.2).with_dense_cap(100);
        assert!(matches!(
            werner_popescu(&p),
            Err(Error::DimensionCapExceeded { dim: 256, cap: 100 })
        ));
    }

    #[test]
    fn state_endpoints() {
        let rho = werner_popescu(&params(3, 2, 0.0)).unwrap();
        let diff = rho.matrix().sub(&ComplexMatrix::identity(9).scale(1.0 / 9.0)).max_abs();
        assert!(diff < 1e-16);

        let rho = werner_popescu(&params(3, 2, 1.0)).unwrap();
        let w = rho.eigenvalues().unwrap();
        assert_eq!(w.iter().filter(|&&v| v.abs() > 1e-12).count(), 1);
        assert!((w[8] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qutrit_pair_spectrum() {
        let rho = werner_popescu(&params(3, 2, 0.5)).unwrap();
        let s = rho.spectrum().unwrap();
        assert_eq!(s.pairs().len(), 2);
        assert_eq!(s.pairs()[0].1, 8);
        assert!((s.pairs()[0].0 - 0.5 / 9.0).abs() < 1e-14);
        assert!((s.pairs()[1].0 - 5.0 / 9.0).abs() < 1e-14);
        assert!(s.approx_eq(&state_spectrum(&params(3, 2, 0.5)).global(), 1e-12));
    }

    #[test]
    fn closed_form_values() {
        let s = state_spectrum(&params(3, 3, 0.1));
        assert!((s.lambda1 - 0.9 / 27.0).abs() < 1e-16);
        assert!((s.lambda2 - 3.6 / 27.0).abs() < 1e-16);
        assert!((s.eta1 - 0.1).abs() < 1e-16);
        assert!((s.eta2 - 1.2 / 9.0).abs() < 1e-16);
        assert_eq!((s.mult_lambda1, s.mult_eta1, s.mult_eta2), (26, 6, 3));

        let s = state_spectrum(&params(4, 3, 0.0));
        assert_eq!(s.lambda1, s.lambda2);
        assert_eq!(s.eta1, s.eta2);

        let s = state_spectrum(&params(4, 3, 1.0));
        assert_eq!((s.lambda1, s.lambda2, s.eta1, s.eta2), (0.0, 1.0, 0.0, 0.25));
    }

    #[test]
    fn spectra_normalized() {
        for d in 2..=6 {
            for n in 2..=5 {
                for x in [0.0, 0.3, 1.0] {
                    let s = state_spectrum(&params(d, n, x));
                    assert!((s.global().weighted_sum() - 1.0).abs() < 1e-13);
                    let m = s.mult_eta1 as f64 * s.eta1 + s.mult_eta2 as f64 * s.eta2;
                    assert!((m - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn marginals_of_dense_state() {
        let p = params(3, 3, 0.1);
        let rho = werner_popescu(&p).unwrap();
        let rho_b = partial_trace(&rho, &[2, 3]).unwrap();
        assert!(rho_b
            .spectrum()
            .unwrap()
            .approx_eq(&state_spectrum(&p).marginal(), 1e-12));
        let rho_a = partial_trace(&rho, &[1]).unwrap();
        let diff = rho_a
            .matrix()
            .sub(&ComplexMatrix::identity(3).scale(1.0 / 3.0))
            .max_abs();
        assert!(diff < 1e-15);
    }

    #[test]
    fn sandwich_blocks() {
        let g = sandwich_spectrum(&params(4, 2, 0.3), 2.0).unwrap();
        assert_eq!(g.gamma1, None);
        assert_eq!((g.mult1, g.mult2, g.mult3), (0, 15, 1));
        // (1/4)^{(1-q)/q} = 2 at q = 2.
        assert!((g.gamma2 - 0.7 / 16.0 * 2.0).abs() < 1e-15);
        assert!((g.gamma3 - 5.5 / 16.0 * 2.0).abs() < 1e-15);

        let x: f64 = 0.2;
        let q: f64 = 3.0;
        let g = sandwich_spectrum(&params(3, 3, x), q).unwrap();
        let expected = (1.0 - x) / 27.0 * ((1.0 + 2.0 * x) / 9.0).powf((1.0 - q) / q);
        assert!((g.gamma2 - expected).abs() < 1e-15);
        assert_eq!((g.mult1, g.mult2), (18, 8));
    }

    #[test]
    fn sandwich_at_unit_order_is_state() {
        let p = params(3, 3, 0.1);
        let s = state_spectrum(&p);
        let g = sandwich_spectrum(&p, 1.0 + 1e-9).unwrap();
        assert!((g.gamma1.unwrap() - s.lambda1).abs() < 1e-9);
        assert!((g.gamma2 - s.lambda1).abs() < 1e-9);
        assert!((g.gamma3 - s.lambda2).abs() < 1e-9);
    }

    #[test]
    fn sandwich_singular_at_pure_state() {
        assert!(matches!(
            sandwich_spectrum(&params(3, 3, 1.0), 2.0),
            Err(Error::SingularNegativePower { .. })
        ));
        // No η1 block for N = 2 and no negative power for q < 1.
        assert!(sandwich_spectrum(&params(3, 2, 1.0), 2.0).is_ok());
        assert!(sandwich_spectrum(&params(3, 3, 1.0), 0.5).is_ok());
        assert!(matches!(
            sandwich_matrix(&params(3, 3, 1.0), 2.0, PowerMode::Strict),
            Err(Error::SingularNegativePower { .. })
        ));
        assert!(sandwich_matrix(&params(3, 3, 1.0), 2.0, PowerMode::SupportRestricted).is_ok());
    }

    #[test]
    fn dense_sandwich_examples() {
        // x = 0: Γ = d^{(N-1)(q-1)/q} / d^N · I.
        let q = 2.5;
        let g = sandwich_matrix(&params(3, 3, 0.0), q, PowerMode::Strict).unwrap();
        let scalar = 3f64.powf(2.0 * (q - 1.0) / q) / 27.0;
        assert!(g.sub(&ComplexMatrix::identity(27).scale(scalar)).max_abs() < 1e-14);

        // d = 3, N = 2, q = 2, x = 0.3: (1/3)^{-1/2} = sqrt 3.
        let g = sandwich_matrix(&params(3, 2, 0.3), 2.0, PowerMode::Strict).unwrap();
        let w = eigvalsh(&g).unwrap();
        let s3 = 3f64.sqrt();
        for v in &w[..8] {
            assert!((v - 0.7 / 9.0 * s3).abs() < 1e-12);
        }
        assert!((w[8] - 3.4 / 9.0 * s3).abs() < 1e-12);
        assert!((w[0] - 0.134715).abs() < 1e-6 && (w[8] - 0.654330).abs() < 1e-6);

        let g = sandwich_matrix(&params(2, 3, 0.4), 1.0, PowerMode::Strict).unwrap();
        assert!((g.trace().re - 1.0).abs() < 1e-14);
    }
}
