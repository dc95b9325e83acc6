//! Separability thresholds of the Werner-Popescu family in its `1 : N-1` cut.
//!
//! A threshold `x*` is the zero crossing in `x` of a criterion at fixed `q`:
//! below it the criterion is nonnegative (no entanglement detected), above it
//! negative. Finite-`q` crossings are found by bisection on the closed forms.
//! The `q → ∞` limit is solved exactly from the largest eigenvalue of the
//! limiting sandwich, and the partial-transpose oracle is bisected on the
//! dense minimum eigenvalue.

use num_rational::Ratio;

use crate::entropies::{wp_margin, Conditioning, EntropyCriterion, Order};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, partial_transpose};
use crate::states::{werner_popescu, WernerPopescuParams, DEFAULT_DENSE_CAP};

/// Bracket width at which bisection stops.
pub const X_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;
/// Upper end of the initial bracket; keeps clear of the singular `x = 1`.
pub const BRACKET_HI: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub x_tol: f64,
    pub max_iterations: usize,
    /// Cap on `d^N` for the dense partial-transpose oracle.
    pub dense_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            x_tol: X_TOL,
            max_iterations: MAX_ITERATIONS,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub criterion: EntropyCriterion,
    pub order: Order,
    pub x_star: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `|criterion(x*)|`.
    pub residual: f64,
    /// Set when the zero was hit exactly on a bracket end.
    pub at_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub q: f64,
    pub x_star: f64,
}

/// One grid point of a traced curve; failures are kept in place.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub q: f64,
    pub result: Result<ThresholdResult>,
}

impl CurveSample {
    pub fn point(&self) -> Option<CurvePoint> {
        self.result.as_ref().ok().map(|r| CurvePoint {
            q: self.q,
            x_star: r.x_star,
        })
    }
}

/// Outcome of [`bisect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    pub exact: Option<f64>,
}

impl Bisection {
    pub fn root(&self) -> f64 {
        self.exact.unwrap_or(0.5 * (self.lo + self.hi))
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Requires `f(lo)` and `f(hi)` to have strictly opposite signs (an exact
/// zero at an end is returned as such). Stops once `hi - lo <= x_tol`.
pub fn bisect(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iterations: usize,
) -> Result<Bisection> {
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    for (end, value) in [(lo, f_lo), (hi, f_hi)] {
        if value == 0.0 {
            return Ok(Bisection {
                lo: end,
                hi: end,
                iterations: 0,
                exact: Some(end),
            });
        }
    }
    let opposite = (f_lo > 0.0 && f_hi < 0.0) || (f_lo < 0.0 && f_hi > 0.0);
    if !opposite {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    let mut iterations = 0;
    while hi - lo > x_tol {
        if iterations == max_iterations {
            return Err(Error::ToleranceNotReached {
                iterations,
                width: hi - lo,
            });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Bisection {
                lo: mid,
                hi: mid,
                iterations,
                exact: Some(mid),
            });
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bisection {
        lo,
        hi,
        iterations,
        exact: None,
    })
}

fn check_family(levels: u32, parties: u32) -> Result<WernerPopescuParams> {
    WernerPopescuParams::new(levels, parties, 0.0)
}

/// Zero crossing of `criterion` in `x` at index `q`.
///
/// `Order::Infinity` is answered by [`asymptotic_threshold`], `q = 1` by the
/// von Neumann crossing and [`EntropyCriterion::Ppt`] by [`ppt_threshold`].
pub fn find_threshold(levels: u32, parties: u32, criterion: EntropyCriterion, order: Order) -> Result<ThresholdResult> {
    find_threshold_with(levels, parties, criterion, order, &SearchOptions::default())
}

pub fn find_threshold_with(
    levels: u32,
    parties: u32,
    criterion: EntropyCriterion,
    order: Order,
    options: &SearchOptions,
) -> Result<ThresholdResult> {
    find_threshold_in(levels, parties, criterion, order, options, BRACKET_HI)
}

fn find_threshold_in(
    levels: u32,
    parties: u32,
    criterion: EntropyCriterion,
    order: Order,
    options: &SearchOptions,
    upper: f64,
) -> Result<ThresholdResult> {
    let family = check_family(levels, parties)?;
    if criterion == EntropyCriterion::Ppt {
        return ppt_threshold_with(levels, parties, options);
    }
    let q = match order {
        Order::Infinity => {
            let x = asymptotic_threshold(levels, parties, criterion)?;
            return Ok(ThresholdResult {
                criterion,
                order,
                x_star: x,
                bracket: (x, x),
                iterations: 0,
                residual: 0.0,
                at_boundary: false,
            });
        }
        Order::Finite(q) => q,
    };
    let effective = criterion.at_order(q);
    let margin = |x: f64| wp_margin(&family.with_mixing(x)?, effective, q);
    let b = bisect(margin, 0.0, upper, options.x_tol, options.max_iterations)?;
    let x_star = b.root();
    let residual = match effective {
        EntropyCriterion::VonNeumann(_) => margin(x_star)?.abs(),
        _ => crate::entropies::wp_entropy(&family.with_mixing(x_star)?, effective, q)?
            .value
            .abs(),
    };
    Ok(ThresholdResult {
        criterion: effective,
        order,
        x_star,
        bracket: (b.lo, b.hi),
        iterations: b.iterations,
        residual,
        at_boundary: b.exact.is_some_and(|x| x == 0.0 || x == upper),
    })
}

/// Affine function `(a + b x)/scale` with integer coefficients.
#[derive(Debug, Clone, Copy)]
struct Affine {
    constant: i128,
    slope: i128,
}

impl Affine {
    fn at(&self, x: Ratio<i128>) -> Ratio<i128> {
        Ratio::from_integer(self.constant) + x * self.slope
    }
}

/// Largest `x ∈ [0, 1]` with `num(x) <= den(x)` for every limiting
/// eigenvalue ratio `num/den`, in exact rational arithmetic.
fn largest_feasible(ratios: &[(Affine, Affine)]) -> Result<Ratio<i128>> {
    let one = Ratio::from_integer(1);
    let zero = Ratio::from_integer(0);
    let mut best = one;
    for (num, den) in ratios {
        if num.at(zero) > den.at(zero) {
            return Err(Error::Unsupported(
                "limiting criterion is violated already at x = 0".into(),
            ));
        }
        if num.at(one) > den.at(one) {
            // num - den is affine, nonpositive at 0 and positive at 1.
            let crossing = Ratio::new(den.constant - num.constant, num.slope - den.slope);
            best = best.min(crossing);
        }
    }
    Ok(best)
}

/// Exact `q → ∞` separability threshold.
///
/// For CSTRE this is the largest `x` at which every eigenvalue of the
/// limiting sandwich `(I⊗ρ_B)^{-1/2} ρ (I⊗ρ_B)^{-1/2}` (that is, each
/// `λ/η` pairing of the closed-form families) stays at or below one. For
/// AR it is the largest `x` with `λ_max(ρ) <= λ_max(ρ_B)`. Both come out
/// as `1/(1 + d^{N-1})` when conditioning on parties `2..N`.
pub fn asymptotic_threshold(levels: u32, parties: u32, criterion: EntropyCriterion) -> Result<f64> {
    check_family(levels, parties)?;
    let d = i128::from(levels);
    let global = d.pow(parties);
    let marginal = global / d;
    let inner = marginal / d;
    // Scaled by d^N so every coefficient is an integer:
    // d^N λ1 = 1 - x, d^N λ2 = 1 + (d^N - 1)x,
    // d^N η1 = d (1 - x), d^N η2 = d (1 + (d^{N-2} - 1)x).
    let lambda1 = Affine { constant: 1, slope: -1 };
    let lambda2 = Affine {
        constant: 1,
        slope: global - 1,
    };
    let eta1 = Affine { constant: d, slope: -d };
    let eta2 = Affine {
        constant: d,
        slope: d * (inner - 1),
    };
    // d^N (1/d) for the maximally mixed single-party marginal.
    let mixed_a = Affine {
        constant: marginal,
        slope: 0,
    };

    let ratios: Vec<(Affine, Affine)> = match criterion {
        EntropyCriterion::Cstre(Conditioning::B) => {
            let mut r = vec![(lambda1, eta2), (lambda2, eta2)];
            if marginal > d {
                r.push((lambda1, eta1));
            }
            r
        }
        // λ_max(ρ) = λ2 and λ_max(ρ_B) = η2 for every x in [0, 1].
        EntropyCriterion::Ar(Conditioning::B) => vec![(lambda2, eta2)],
        EntropyCriterion::Cstre(Conditioning::A) => vec![(lambda1, mixed_a), (lambda2, mixed_a)],
        EntropyCriterion::Ar(Conditioning::A) => vec![(lambda2, mixed_a)],
        EntropyCriterion::VonNeumann(_) | EntropyCriterion::Ppt => {
            return Err(Error::Unsupported(format!(
                "{} has no q -> infinity limit",
                criterion.label()
            )))
        }
    };
    let x = largest_feasible(&ratios)?;
    Ok(*x.numer() as f64 / *x.denom() as f64)
}

/// `1/(1 + d^{N-1})`, evaluated directly.
pub fn threshold_formula(levels: u32, parties: u32) -> f64 {
    1.0 / (1.0 + f64::from(levels).powi(parties as i32 - 1))
}

/// Minimum eigenvalue of the partial transpose over party 1 of `ρ(x)`.
pub fn ppt_min_eigenvalue(params: &WernerPopescuParams) -> Result<f64> {
    let rho = werner_popescu(params)?;
    Ok(eigvalsh(&partial_transpose(&rho, &[1])?)?[0])
}

/// PPT oracle threshold: bisection on the dense minimum eigenvalue.
pub fn ppt_threshold(levels: u32, parties: u32) -> Result<ThresholdResult> {
    ppt_threshold_with(levels, parties, &SearchOptions::default())
}

pub fn ppt_threshold_with(levels: u32, parties: u32, options: &SearchOptions) -> Result<ThresholdResult> {
    let family = check_family(levels, parties)?.with_dense_cap(options.dense_cap);
    let dim = family.global_dim();
    if dim > options.dense_cap {
        return Err(Error::DimensionCapExceeded {
            dim,
            cap: options.dense_cap,
        });
    }
    let min_eig = |x: f64| ppt_min_eigenvalue(&family.with_mixing(x)?);
    let b = bisect(min_eig, 0.0, BRACKET_HI, options.x_tol, options.max_iterations)?;
    let x_star = b.root();
    Ok(ThresholdResult {
        criterion: EntropyCriterion::Ppt,
        order: Order::Infinity,
        x_star,
        bracket: (b.lo, b.hi),
        iterations: b.iterations,
        residual: min_eig(x_star)?.abs(),
        at_boundary: false,
    })
}

/// Implicit curve `x*(q)` over an ascending grid.
///
/// Each search is warm-started just above the previous crossing and falls
/// back to the full bracket when that upper end does not bracket a root.
pub fn trace_curve(levels: u32, parties: u32, criterion: EntropyCriterion, q_grid: &[f64]) -> Result<Vec<CurveSample>> {
    trace_curve_with(levels, parties, criterion, q_grid, &SearchOptions::default())
}

pub fn trace_curve_with(
    levels: u32,
    parties: u32,
    criterion: EntropyCriterion,
    q_grid: &[f64],
    options: &SearchOptions,
) -> Result<Vec<CurveSample>> {
    check_family(levels, parties)?;
    if q_grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidParams("q grid must be strictly ascending".into()));
    }
    let mut previous: Option<f64> = None;
    let mut samples = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let result = Order::new(q).and_then(|order| {
            if let Some(prev) = previous {
                let upper = (prev + 1e-6).min(BRACKET_HI);
                match find_threshold_in(levels, parties, criterion, order, options, upper) {
                    Err(Error::NoSignChange { .. }) => {}
                    other => return other,
                }
            }
            find_threshold_in(levels, parties, criterion, order, options, BRACKET_HI)
        });
        if let Ok(r) = &result {
            previous = Some(r.x_star);
        }
        samples.push(CurveSample { q, result });
    }
    Ok(samples)
}

/// `count` points from `start` to `end` inclusive, linear or logarithmic.
pub fn grid(start: f64, end: f64, count: usize, logarithmic: bool) -> Result<Vec<f64>> {
    if count == 0 || !(start.is_finite() && end.is_finite()) || end < start {
        return Err(Error::InvalidParams(format!(
            "grid [{start}, {end}] with {count} points"
        )));
    }
    if logarithmic && start <= 0.0 {
        return Err(Error::InvalidParams("logarithmic grid needs a positive start".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let steps = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / steps;
            if i == count - 1 {
                end
            } else if logarithmic {
                (start.ln() + t * (end.ln() - start.ln())).exp()
            } else {
                start + t * (end - start)
            }
        })
        .collect())
}
