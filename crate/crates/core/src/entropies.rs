//! Tsallis-type entropy functionals.
//!
//! Two sign conventions coexist and are kept exactly as defined:
//!
//! * relative entropies ([`tsallis_relative`], [`sandwiched_tsallis_relative`])
//!   divide by `q - 1`:
//!   `D̃_q(ρ‖σ) = (Tr[(σ^{(1-q)/2q} ρ σ^{(1-q)/2q})^q] - 1)/(q - 1)`;
//! * the conditional forms ([`cstre`], CSTRE) divide by `1 - q`:
//!   `D̃_q(ρ_AB‖ρ_B) = (Q̃_q - 1)/(1 - q)` with
//!   `Q̃_q = Tr[((I_A ⊗ ρ_B)^{(1-q)/2q} ρ_AB (I_A ⊗ ρ_B)^{(1-q)/2q})^q]`.
//!
//! With this convention a negative conditional value signals entanglement
//! across the `1 : N-1` cut, and so does a negative Abe-Rajagopal entropy
//! `S_q(A|B) = (1 - Tr ρ_AB^q / Tr ρ_B^q)/(q - 1)`.
//!
//! `q = 1` is never fed to the generic formulas: the conditional functions
//! route it to the von Neumann conditional entropy, the relative ones
//! reject it.
//!
//! Every functional has a dense path working on a [`DensityMatrix`] and,
//! for the Werner-Popescu family, a closed-form path over the spectra in
//! [`crate::states`]. Above `q = 30` the closed forms switch to
//! log-sum-exp evaluation of `ln Q̃_q`.

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, frac_power, kron, partial_trace, sandwich, ComplexMatrix, DensityMatrix, PowerMode};
use crate::states::{sandwich_spectrum, state_spectrum, WernerPopescuParams};

/// Above this index the closed forms are evaluated in the log domain.
pub const LOG_DOMAIN_Q: f64 = 30.0;

/// Entropic index: finite `q > 0` or the `q → ∞` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(f64),
    Infinity,
}

impl Order {
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            Ok(Order::Infinity)
        } else if q > 0.0 && q.is_finite() {
            Ok(Order::Finite(q))
        } else {
            Err(Error::InvalidOrder(q))
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Order::Finite(q) => Some(q),
            Order::Infinity => None,
        }
    }

    /// The value as `f64`, with `Infinity` mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Which marginal is conditioned on. `A` is party 1, `B` is parties `2..N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conditioning {
    /// `D̃(ρ‖ρ_A)`, `S(B|A)`.
    A,
    /// `D̃(ρ‖ρ_B)`, `S(A|B)`.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntropyCriterion {
    /// Conditional sandwiched Tsallis relative entropy.
    Cstre(Conditioning),
    /// Abe-Rajagopal q-conditional entropy.
    Ar(Conditioning),
    /// von Neumann conditional entropy (the shared `q → 1` limit).
    VonNeumann(Conditioning),
    /// Minimum eigenvalue of the partial transpose over party 1.
    Ppt,
}

impl EntropyCriterion {
    pub const CSTRE_B: Self = EntropyCriterion::Cstre(Conditioning::B);
    pub const CSTRE_A: Self = EntropyCriterion::Cstre(Conditioning::A);
    pub const AR_A_GIVEN_B: Self = EntropyCriterion::Ar(Conditioning::B);
    pub const AR_B_GIVEN_A: Self = EntropyCriterion::Ar(Conditioning::A);

    pub fn conditioning(self) -> Option<Conditioning> {
        match self {
            EntropyCriterion::Cstre(c) | EntropyCriterion::Ar(c) | EntropyCriterion::VonNeumann(c) => Some(c),
            EntropyCriterion::Ppt => None,
        }
    }

    /// Criterion actually evaluated at index `q`: `q = 1` maps to von Neumann.
    pub fn at_order(self, q: f64) -> Self {
        match self {
            EntropyCriterion::Cstre(c) | EntropyCriterion::Ar(c) if q == 1.0 => EntropyCriterion::VonNeumann(c),
            other => other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EntropyCriterion::Cstre(Conditioning::B) => "cstre_b",
            EntropyCriterion::Cstre(Conditioning::A) => "cstre_a",
            EntropyCriterion::Ar(Conditioning::B) => "ar_a_given_b",
            EntropyCriterion::Ar(Conditioning::A) => "ar_b_given_a",
            EntropyCriterion::VonNeumann(Conditioning::B) => "vn_a_given_b",
            EntropyCriterion::VonNeumann(Conditioning::A) => "vn_b_given_a",
            EntropyCriterion::Ppt => "ppt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Dense,
    LogDomain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
    pub order: Order,
    pub method: Method,
}

/// A criterion at a fixed index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyQuery {
    pub order: Order,
    pub criterion: EntropyCriterion,
}

impl EntropyQuery {
    pub fn new(criterion: EntropyCriterion, q: f64) -> Result<Self> {
        Ok(Self {
            order: Order::new(q)?,
            criterion,
        })
    }

    /// Closed-form value on a Werner-Popescu state.
    pub fn evaluate_wp(&self, params: &WernerPopescuParams) -> Result<EntropyValue> {
        match self.order {
            Order::Finite(q) => wp_entropy(params, self.criterion, q),
            Order::Infinity => Err(Error::Unsupported(
                "entropy values at q = ∞; use the asymptotic threshold".into(),
            )),
        }
    }

    /// Dense value on an arbitrary bipartite state (party 1 versus the rest).
    pub fn evaluate_dense(&self, rho: &DensityMatrix) -> Result<f64> {
        let q = self
            .order
            .finite()
            .ok_or_else(|| Error::Unsupported("dense evaluation at q = ∞".into()))?;
        match self.criterion.at_order(q) {
            EntropyCriterion::Cstre(c) => cstre(rho, c, q),
            EntropyCriterion::Ar(c) => ar_conditional(rho, c, q),
            EntropyCriterion::VonNeumann(c) => von_neumann_conditional(rho, c),
            EntropyCriterion::Ppt => Err(Error::Unsupported("PPT is not an entropy".into())),
        }
    }
}

fn check_finite_order(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOrder(q))
    }
}

fn check_relative_order(q: f64) -> Result<()> {
    check_finite_order(q)?;
    if q == 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    Ok(())
}

fn check_same_shape(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

/// `Σ w^q` over the (clamped nonnegative) eigenvalues.
fn trace_power(values: &[f64], q: f64) -> f64 {
    values.iter().map(|&w| w.max(0.0).powf(q)).sum()
}

fn x_ln_x(w: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        w * w.ln()
    }
}

/// `ln Σ exp(t_i)`; `-∞` terms are ignored.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

/// `(Tr[ρ^q σ^{1-q}] - 1)/(q - 1)`.
pub fn tsallis_relative(rho: &DensityMatrix, sigma: &DensityMatrix, q: f64) -> Result<f64> {
    check_relative_order(q)?;
    check_same_shape(rho, sigma)?;
    let a = frac_power(rho.matrix(), q, PowerMode::Strict)?;
    let b = frac_power(sigma.matrix(), 1.0 - q, PowerMode::Strict)?;
    Ok((a.matmul(&b).trace().re - 1.0) / (q - 1.0))
}

/// `(Tr[(σ^{(1-q)/2q} ρ σ^{(1-q)/2q})^q] - 1)/(q - 1)`.
pub fn sandwiched_tsallis_relative(rho: &DensityMatrix, sigma: &DensityMatrix, q: f64) -> Result<f64> {
    check_relative_order(q)?;
    check_same_shape(rho, sigma)?;
    let gamma = sandwich(rho.matrix(), sigma.matrix(), (1.0 - q) / (2.0 * q), PowerMode::Strict)?;
    Ok((trace_power(&eigvalsh(&gamma)?, q) - 1.0) / (q - 1.0))
}

fn bipartition(rho: &DensityMatrix) -> Result<(usize, usize)> {
    let dims = rho.dims();
    if dims.len() < 2 {
        return Err(Error::BadSubsystemIndex {
            index: 2,
            parties: dims.len(),
        });
    }
    Ok((dims[0], dims[1..].iter().product()))
}

/// Reduced state on the conditioning side.
pub fn marginal(rho: &DensityMatrix, conditioning: Conditioning) -> Result<DensityMatrix> {
    bipartition(rho)?;
    match conditioning {
        Conditioning::A => partial_trace(rho, &[1]),
        Conditioning::B => {
            let keep: Vec<usize> = (2..=rho.dims().len()).collect();
            partial_trace(rho, &keep)
        }
    }
}

/// `I_A ⊗ ρ_B` or `ρ_A ⊗ I_B`.
pub fn conditioning_operator(rho: &DensityMatrix, conditioning: Conditioning) -> Result<ComplexMatrix> {
    let (da, db) = bipartition(rho)?;
    let m = marginal(rho, conditioning)?;
    Ok(match conditioning {
        Conditioning::A => kron(m.matrix(), &ComplexMatrix::identity(db)),
        Conditioning::B => kron(&ComplexMatrix::identity(da), m.matrix()),
    })
}

/// `Q̃_q`, the trace of the `q`-th power of the conditional sandwich.
pub fn conditional_sandwich_trace(
    rho: &DensityMatrix,
    conditioning: Conditioning,
    q: f64,
    mode: PowerMode,
) -> Result<f64> {
    check_finite_order(q)?;
    let outer = conditioning_operator(rho, conditioning)?;
    let gamma = sandwich(rho.matrix(), &outer, (1.0 - q) / (2.0 * q), mode)?;
    Ok(trace_power(&eigvalsh(&gamma)?, q))
}

/// Dense CSTRE `(Q̃_q - 1)/(1 - q)`; `q = 1` gives the von Neumann
/// conditional entropy.
pub fn cstre(rho: &DensityMatrix, conditioning: Conditioning, q: f64) -> Result<f64> {
    cstre_with_mode(rho, conditioning, q, PowerMode::Strict)
}

/// [`cstre`] with an explicit treatment of singular marginals.
pub fn cstre_with_mode(rho: &DensityMatrix, conditioning: Conditioning, q: f64, mode: PowerMode) -> Result<f64> {
    check_finite_order(q)?;
    if q == 1.0 {
        return von_neumann_conditional(rho, conditioning);
    }
    let trace = conditional_sandwich_trace(rho, conditioning, q, mode)?;
    Ok((trace - 1.0) / (1.0 - q))
}

/// Dense Abe-Rajagopal conditional entropy; `q = 1` gives von Neumann.
pub fn ar_conditional(rho: &DensityMatrix, conditioning: Conditioning, q: f64) -> Result<f64> {
    check_finite_order(q)?;
    if q == 1.0 {
        return von_neumann_conditional(rho, conditioning);
    }
    let global = trace_power(&rho.eigenvalues()?, q);
    let local = trace_power(&marginal(rho, conditioning)?.eigenvalues()?, q);
    Ok((1.0 - global / local) / (q - 1.0))
}

/// `S(ρ) = -Σ w ln w` (natural log, `0 ln 0 = 0`).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(-rho.eigenvalues()?.into_iter().map(x_ln_x).sum::<f64>())
}

/// `S(A|B) = S(ρ) - S(ρ_B)` or `S(B|A) = S(ρ) - S(ρ_A)`.
pub fn von_neumann_conditional(rho: &DensityMatrix, conditioning: Conditioning) -> Result<f64> {
    Ok(von_neumann_entropy(rho)? - von_neumann_entropy(&marginal(rho, conditioning)?)?)
}

/// Tsallis entropy `(1 - Tr ρ^q)/(q - 1)`.
pub fn tsallis_entropy(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_relative_order(q)?;
    Ok((1.0 - trace_power(&rho.eigenvalues()?, q)) / (q - 1.0))
}

// Closed forms on the Werner-Popescu family.

/// `ln Tr ρ^q` and `ln Tr ρ_B^q` from the closed-form spectra.
fn wp_log_state_traces(params: &WernerPopescuParams, q: f64) -> (f64, f64) {
    let s = state_spectrum(params);
    let global = log_sum_exp(&[(s.mult_lambda1 as f64).ln() + q * s.lambda1.ln(), q * s.lambda2.ln()]);
    let mut local_terms = vec![(s.mult_eta2 as f64).ln() + q * s.eta2.ln()];
    if s.mult_eta1 > 0 {
        local_terms.push((s.mult_eta1 as f64).ln() + q * s.eta1.ln());
    }
    (global, log_sum_exp(&local_terms))
}

/// `ln` of the trace functional whose departure from 1 the criterion
/// measures: `ln Q̃_q` for CSTRE, `ln(Tr ρ^q / Tr ρ_marginal^q)` for AR.
///
/// Conditioning on A uses `ρ_A = I_d/d`, for which CSTRE and AR share
/// `Q̃_q = d^{q-1} Tr ρ^q`.
pub fn wp_log_trace(params: &WernerPopescuParams, criterion: EntropyCriterion, q: f64) -> Result<f64> {
    check_relative_order(q)?;
    let ln_d = f64::from(params.levels()).ln();
    match criterion {
        EntropyCriterion::Cstre(Conditioning::B) => {
            // Surfaces the singular-marginal error.
            sandwich_spectrum(params, q)?;
            let s = state_spectrum(params);
            let d2 = f64::from(params.levels()).powi(2);
            let mult1 = params.global_dim() as f64 - d2;
            // ln(mult · γ^q) with γ^q = λ^q η^{1-q}.
            let term = |mult: f64, lambda: f64, eta: f64| {
                if lambda == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    mult.ln() + q * lambda.ln() + (1.0 - q) * eta.ln()
                }
            };
            let mut terms = vec![term(d2 - 1.0, s.lambda1, s.eta2), term(1.0, s.lambda2, s.eta2)];
            if mult1 > 0.0 {
                terms.push(term(mult1, s.lambda1, s.eta1));
            }
            Ok(log_sum_exp(&terms))
        }
        EntropyCriterion::Cstre(Conditioning::A) | EntropyCriterion::Ar(Conditioning::A) => {
            let (global, _) = wp_log_state_traces(params, q);
            Ok((q - 1.0) * ln_d + global)
        }
        EntropyCriterion::Ar(Conditioning::B) => {
            let (global, local) = wp_log_state_traces(params, q);
            Ok(global - local)
        }
        EntropyCriterion::VonNeumann(_) | EntropyCriterion::Ppt => Err(Error::Unsupported(format!(
            "{} has no trace functional",
            criterion.label()
        ))),
    }
}

/// Shared tail of the CSTRE and AR closed forms: both equal
/// `(T - 1)/(1 - q)` for their respective trace functional `T`.
fn from_trace(plain: impl FnOnce() -> f64, log_trace: f64, q: f64) -> EntropyValue {
    if q > LOG_DOMAIN_Q {
        EntropyValue {
            value: -log_trace.exp_m1() / (q - 1.0),
            order: Order::Finite(q),
            method: Method::LogDomain,
        }
    } else {
        EntropyValue {
            value: (plain() - 1.0) / (1.0 - q),
            order: Order::Finite(q),
            method: Method::ClosedForm,
        }
    }
}

/// Closed-form CSTRE on `ρ(x)`; `q = 1` gives the von Neumann value.
pub fn cstre_wp_closed_form(params: &WernerPopescuParams, q: f64, conditioning: Conditioning) -> Result<EntropyValue> {
    check_finite_order(q)?;
    if q == 1.0 {
        return Ok(von_neumann_wp_closed_form(params, conditioning));
    }
    match conditioning {
        Conditioning::B => {
            let gamma = sandwich_spectrum(params, q)?;
            let log_trace = wp_log_trace(params, EntropyCriterion::CSTRE_B, q)?;
            Ok(from_trace(|| gamma.trace_power(), log_trace, q))
        }
        // ρ_A is maximally mixed: the sandwich is a scalar multiple of ρ.
        Conditioning::A => ar_wp_closed_form(params, q, Conditioning::A),
    }
}

/// Closed-form Abe-Rajagopal entropy on `ρ(x)`; `q = 1` gives von Neumann.
pub fn ar_wp_closed_form(params: &WernerPopescuParams, q: f64, conditioning: Conditioning) -> Result<EntropyValue> {
    check_finite_order(q)?;
    if q == 1.0 {
        return Ok(von_neumann_wp_closed_form(params, conditioning));
    }
    let s = state_spectrum(params);
    let d = f64::from(params.levels());
    let global = || s.mult_lambda1 as f64 * s.lambda1.powf(q) + s.lambda2.powf(q);
    let log_trace = wp_log_trace(params, EntropyCriterion::Ar(conditioning), q)?;
    let plain = || match conditioning {
        Conditioning::A => global() * d.powf(q - 1.0),
        Conditioning::B => global() / (s.mult_eta1 as f64 * s.eta1.powf(q) + s.mult_eta2 as f64 * s.eta2.powf(q)),
    };
    Ok(from_trace(plain, log_trace, q))
}

/// Closed-form von Neumann conditional entropy on `ρ(x)`.
pub fn von_neumann_wp_closed_form(params: &WernerPopescuParams, conditioning: Conditioning) -> EntropyValue {
    let s = state_spectrum(params);
    let global = -(s.mult_lambda1 as f64 * x_ln_x(s.lambda1) + x_ln_x(s.lambda2));
    let local = match conditioning {
        Conditioning::A => f64::from(params.levels()).ln(),
        Conditioning::B => -(s.mult_eta1 as f64 * x_ln_x(s.eta1) + s.mult_eta2 as f64 * x_ln_x(s.eta2)),
    };
    EntropyValue {
        value: global - local,
        order: Order::Finite(1.0),
        method: Method::ClosedForm,
    }
}

/// Closed-form value of any entropic criterion at finite `q`.
pub fn wp_entropy(params: &WernerPopescuParams, criterion: EntropyCriterion, q: f64) -> Result<EntropyValue> {
    check_finite_order(q)?;
    match criterion.at_order(q) {
        EntropyCriterion::Cstre(c) => cstre_wp_closed_form(params, q, c),
        EntropyCriterion::Ar(c) => ar_wp_closed_form(params, q, c),
        EntropyCriterion::VonNeumann(c) => Ok(von_neumann_wp_closed_form(params, c)),
        EntropyCriterion::Ppt => Err(Error::Unsupported("PPT is not an entropy".into())),
    }
}

/// Finite quantity with the same sign as the criterion value.
///
/// For `q ≠ 1` this is `ln T/(1 - q)`, which agrees with the entropy to
/// first order near its zero and never overflows; for `q = 1` it is the
/// von Neumann conditional entropy itself.
pub fn wp_margin(params: &WernerPopescuParams, criterion: EntropyCriterion, q: f64) -> Result<f64> {
    check_finite_order(q)?;
    match criterion.at_order(q) {
        EntropyCriterion::VonNeumann(c) => Ok(von_neumann_wp_closed_form(params, c).value),
        EntropyCriterion::Ppt => Err(Error::Unsupported("PPT margin needs the dense oracle".into())),
        other => Ok(wp_log_trace(params, other, q)? / (1.0 - q)),
    }
}
