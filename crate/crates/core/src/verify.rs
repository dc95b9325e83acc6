//! Self-check report: reproduces the reference thresholds and checks the
//! closed forms against the dense and partial-transpose routes.

use std::fmt;
use std::time::Instant;

use crate::entropies::{
    cstre_wp_closed_form, von_neumann_wp_closed_form, wp_entropy, Conditioning, EntropyCriterion, Method, Order,
};
use crate::error::Result;
use crate::linalg::{eigvalsh, PowerMode, Spectrum};
use crate::separability::{asymptotic_threshold, find_threshold, ppt_threshold, threshold_formula};
use crate::states::{sandwich_matrix, sandwich_spectrum, WernerPopescuParams};

/// `(d, N, x*)` for `q → ∞`, rounded to four decimals.
pub const REFERENCE_ASYMPTOTIC: [(u32, u32, f64); 16] = [
    (3, 2, 0.25),
    (3, 3, 0.1),
    (3, 4, 0.0357),
    (3, 5, 0.0121),
    (4, 2, 0.2),
    (4, 3, 0.0588),
    (4, 4, 0.0153),
    (4, 5, 0.0039),
    (5, 2, 0.1666),
    (5, 3, 0.0384),
    (5, 4, 0.0079),
    (5, 5, 0.0016),
    (6, 2, 0.1428),
    (6, 3, 0.0270),
    (6, 4, 0.0046),
    (6, 5, 0.0007),
];

/// `(d, N, x*_CSTRE, x*_AR)` at `q = 2`, rounded to four decimals.
pub const REFERENCE_Q2: [(u32, u32, f64, f64); 9] = [
    (3, 3, 0.3837, 0.3162),
    (3, 4, 0.3114, 0.1889),
    (3, 5, 0.2744, 0.1104),
    (4, 3, 0.3108, 0.2425),
    (4, 4, 0.2396, 0.1240),
    (4, 5, 0.2116, 0.0623),
    (5, 3, 0.2610, 0.1961),
    (5, 4, 0.1943, 0.0890),
    (5, 5, 0.1730, 0.0399),
];

/// von Neumann crossing for `d = 3`, `N = 4`.
pub const REFERENCE_VON_NEUMANN_3_4: f64 = 0.5633;

pub const MONOTONE_GRID: [f64; 8] = [1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0, 1e3];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        name: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn table_pairs() -> impl Iterator<Item = (u32, u32)> {
    (3..=6).flat_map(|d| (2..=5).map(move |n| (d, n)))
}

pub fn check_asymptotic_thresholds() -> Check {
    timed("asymptotic thresholds", || {
        let mut worst = 0.0f64;
        for &(d, n, published) in &REFERENCE_ASYMPTOTIC {
            let x = asymptotic_threshold(d, n, EntropyCriterion::CSTRE_B)?;
            if x != threshold_formula(d, n) {
                return Ok((false, format!("d={d} N={n}: {x} is not 1/(1+d^(N-1))")));
            }
            worst = worst.max((x - published).abs());
        }
        Ok((worst <= 5e-4, format!("max deviation from reference {worst:.2e}")))
    })
}

fn ar_q2_oracle(d: u32, n: u32) -> f64 {
    // Tr ρ^2 = Tr ρ_B^2 as a quadratic a x^2 + b x + c = 0.
    let big = f64::from(d).powi(n as i32);
    let m = big / f64::from(d);
    let k = m / f64::from(d);
    let df = f64::from(d);
    // Tr ρ^2 = (1 + (D-1) x^2)/D.
    // Tr ρ_B^2 = ((M-d)(1-x)^2 + d(1+(K-1)x)^2)/M^2.
    let a = (big - 1.0) / big - ((m - df) + df * (k - 1.0).powi(2)) / (m * m);
    let b = -(-2.0 * (m - df) + 2.0 * df * (k - 1.0)) / (m * m);
    let c = 1.0 / big - (m - df + df) / (m * m);
    let disc = (b * b - 4.0 * a * c).sqrt();
    [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
        .into_iter()
        .filter(|r| (0.0..1.0).contains(r))
        .fold(f64::NAN, f64::max)
}

pub fn check_q2_crossings() -> Check {
    timed("q = 2 crossings", || {
        let mut worst = 0.0f64;
        let mut oracle_worst = 0.0f64;
        for &(d, n, cstre_ref, ar_ref) in &REFERENCE_Q2 {
            let c = find_threshold(d, n, EntropyCriterion::CSTRE_B, Order::Finite(2.0))?.x_star;
            let a = find_threshold(d, n, EntropyCriterion::AR_A_GIVEN_B, Order::Finite(2.0))?.x_star;
            worst = worst.max((c - cstre_ref).abs()).max((a - ar_ref).abs());
            oracle_worst = oracle_worst.max((a - ar_q2_oracle(d, n)).abs());
        }
        Ok((
            worst <= 1e-3 && oracle_worst <= 1e-9,
            format!("max deviation {worst:.2e}, AR vs quadratic oracle {oracle_worst:.2e}"),
        ))
    })
}

pub fn check_von_neumann_crossing() -> Check {
    timed("von Neumann crossing d=3 N=4", || {
        let x = find_threshold(3, 4, EntropyCriterion::VonNeumann(Conditioning::B), Order::Finite(1.0))?.x_star;
        Ok(((x - REFERENCE_VON_NEUMANN_3_4).abs() <= 5e-4, format!("x* = {x:.6}")))
    })
}

/// Dense `Γ` spectra against the closed-form families for all `d^N <= dense_limit`.
pub fn check_sandwich_spectra(dense_limit: u64) -> Check {
    timed("sandwich spectra", || {
        let mut cases = 0;
        let mut worst = 0.0f64;
        for d in 2u32.. {
            if u64::from(d).pow(2) > dense_limit {
                break;
            }
            for n in 2u32.. {
                if u64::from(d).pow(n) > dense_limit {
                    break;
                }
                for x in [0.1, 0.5, 0.9] {
                    for q in [0.5, 2.0, 5.0] {
                        let p = WernerPopescuParams::new(d, n, x)?;
                        let closed = sandwich_spectrum(&p, q)?.to_spectrum();
                        let dense = Spectrum::from_values(&eigvalsh(&sandwich_matrix(&p, q, PowerMode::Strict)?)?);
                        if dense.pairs().len() != closed.pairs().len()
                            || dense.pairs().iter().zip(closed.pairs()).any(|(a, b)| a.1 != b.1)
                        {
                            return Ok((false, format!("d={d} N={n} x={x} q={q}: multiplicities differ")));
                        }
                        for (a, b) in dense.pairs().iter().zip(closed.pairs()) {
                            worst = worst.max((a.0 - b.0).abs());
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok((
            worst <= 1e-9,
            format!("{cases} cases, max eigenvalue error {worst:.2e}"),
        ))
    })
}

pub fn check_ppt_oracle() -> Check {
    timed("PPT oracle", || {
        let mut worst = 0.0f64;
        for (d, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            let ppt = ppt_threshold(d, n)?.x_star;
            let asym = asymptotic_threshold(d, n, EntropyCriterion::CSTRE_B)?;
            worst = worst.max((ppt - asym).abs());
        }
        Ok((worst <= 1e-8, format!("max |x_ppt - x_inf| = {worst:.2e}")))
    })
}

pub fn check_limits_and_conventions() -> Check {
    timed("limits and conventions", || {
        let mut continuity = 0.0f64;
        let mut equivalence = 0.0f64;
        for d in 2..=4 {
            for n in 2..=3 {
                for x in [0.2, 0.6] {
                    let p = WernerPopescuParams::new(d, n, x)?;
                    let vn = von_neumann_wp_closed_form(&p, Conditioning::B).value;
                    for q in [1.0 - 1e-4, 1.0 + 1e-4] {
                        let c = cstre_wp_closed_form(&p, q, Conditioning::B)?.value;
                        continuity = continuity.max((c - vn).abs());
                    }
                    for q in [0.5, 2.0, 3.0, 50.0] {
                        let c = wp_entropy(&p, EntropyCriterion::CSTRE_A, q)?.value;
                        let a = wp_entropy(&p, EntropyCriterion::AR_B_GIVEN_A, q)?.value;
                        equivalence = equivalence.max((c - a).abs());
                    }
                }
            }
        }
        let mut monotone = true;
        let mut convergence = 0.0f64;
        for (d, n) in table_pairs() {
            for criterion in [EntropyCriterion::CSTRE_B, EntropyCriterion::AR_A_GIVEN_B] {
                let xs = MONOTONE_GRID
                    .iter()
                    .map(|&q| find_threshold(d, n, criterion, Order::Finite(q)).map(|r| r.x_star))
                    .collect::<Result<Vec<f64>>>()?;
                monotone &= xs.windows(2).all(|w| w[0] >= w[1]);
                let far = find_threshold(d, n, criterion, Order::Finite(1e6))?.x_star;
                convergence = convergence.max((far - threshold_formula(d, n)).abs());
            }
        }
        Ok((
            continuity <= 1e-3 && equivalence <= 1e-10 && monotone && convergence <= 1e-4,
            format!(
                "q->1 gap {continuity:.2e}, CSTRE/AR on A gap {equivalence:.2e}, monotone {monotone}, q=1e6 gap {convergence:.2e}"
            ),
        ))
    })
}

pub fn check_large_q_stability() -> Check {
    timed("large-q stability", || {
        let q = 1e6;
        for (d, n) in table_pairs() {
            let th = threshold_formula(d, n);
            for criterion in [EntropyCriterion::CSTRE_B, EntropyCriterion::AR_A_GIVEN_B] {
                let below = wp_entropy(&WernerPopescuParams::new(d, n, th * (1.0 - 1e-4))?, criterion, q)?;
                let above = wp_entropy(&WernerPopescuParams::new(d, n, th * (1.0 + 1e-4))?, criterion, q)?;
                let ok = below.method == Method::LogDomain
                    && below.value.is_finite()
                    && above.value.is_finite()
                    && below.value > 0.0
                    && above.value < 0.0;
                if !ok {
                    return Ok((
                        false,
                        format!("d={d} N={n} {}: {} / {}", criterion.label(), below.value, above.value),
                    ));
                }
            }
        }
        Ok((true, "finite with a sign change for all 16 pairs".into()))
    })
}

/// All checks in order.
pub fn run_all(dense_limit: u64) -> Vec<Check> {
    vec![
        check_asymptotic_thresholds(),
        check_q2_crossings(),
        check_von_neumann_crossing(),
        check_sandwich_spectra(dense_limit),
        check_ppt_oracle(),
        check_limits_and_conventions(),
        check_large_q_stability(),
    ]
}
