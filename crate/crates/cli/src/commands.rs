use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};
use tsallis_sep::entropies::{wp_entropy, Conditioning, EntropyCriterion, Order};
use tsallis_sep::error::Error;
use tsallis_sep::separability::{
    find_threshold_with, grid, ppt_min_eigenvalue, ppt_threshold_with, threshold_formula, trace_curve_with,
};
use tsallis_sep::states::{sandwich_spectrum, WernerPopescuParams};
use tsallis_sep::verify;

use crate::args::{ConditioningArg, Criterion, CriterionArg, Family, Scale};
use crate::config::Settings;
use crate::output::{Cell, RunManifest, Table};
use crate::CliError;

/// A finished table and whether any cell failed.
pub struct Report {
    pub table: Table,
    pub manifest: RunManifest,
    pub failed: bool,
}

const TABLE_D: [u32; 4] = [3, 4, 5, 6];
const TABLE_N: [u32; 4] = [2, 3, 4, 5];
const TABLE3_D: [u32; 3] = [3, 4, 5];
const TABLE3_N: [u32; 3] = [3, 4, 5];

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn criterion(arg: CriterionArg, conditioning: ConditioningArg) -> EntropyCriterion {
    let c = match conditioning {
        ConditioningArg::A => Conditioning::A,
        ConditioningArg::B => Conditioning::B,
    };
    match arg {
        CriterionArg::Cstre => EntropyCriterion::Cstre(c),
        CriterionArg::Ar => EntropyCriterion::Ar(c),
        CriterionArg::Vn => EntropyCriterion::VonNeumann(c),
        CriterionArg::Ppt => EntropyCriterion::Ppt,
    }
}

/// `(d, N)` cells in input order, validated up front.
fn cells(family: &Family, d: &[u32], n: &[u32]) -> Result<Vec<(u32, u32)>, CliError> {
    let ds = family.d.as_deref().unwrap_or(d);
    let ns = family.n.as_deref().unwrap_or(n);
    let mut out = Vec::new();
    for &d in ds {
        for &n in ns {
            WernerPopescuParams::new(d, n, 0.0).map_err(usage)?;
            out.push((d, n));
        }
    }
    Ok(out)
}

fn pool(settings: &Settings) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn order(q: f64) -> Result<Order, CliError> {
    Order::new(q).map_err(usage)
}

/// A criterion that stays nonnegative on the whole bracket means the
/// separability range is all of [0, 1): a result, not a failure.
fn is_failure(e: &Error) -> bool {
    !matches!(e, Error::NoSignChange { f_lo, f_hi, .. } if *f_lo >= 0.0 && *f_hi >= 0.0)
}

fn threshold_cell(r: &Result<f64, Error>, failed: &mut bool) -> Cell {
    match r {
        Ok(x) => Cell::Num(*x),
        Err(e) => {
            *failed |= is_failure(e);
            Cell::Marker(e.kind())
        }
    }
}

fn base_parameters(settings: &Settings) -> BTreeMap<String, Value> {
    BTreeMap::from([
        ("x_tol".into(), json!(settings.search.x_tol)),
        ("max_iterations".into(), json!(settings.search.max_iterations)),
        ("dense_cap".into(), json!(settings.search.dense_cap)),
    ])
}

fn list_parameters(params: &mut BTreeMap<String, Value>, cells: &[(u32, u32)]) {
    let mut ds: Vec<u32> = cells.iter().map(|c| c.0).collect();
    ds.dedup();
    let mut ns: Vec<u32> = cells.iter().map(|c| c.1).collect();
    ns.sort_unstable();
    ns.dedup();
    params.insert("d".into(), json!(ds));
    params.insert("N".into(), json!(ns));
}

pub fn table1(family: &Family, q: f64, x: f64, settings: &Settings) -> Result<Report, CliError> {
    let cells = cells(family, &TABLE_D, &TABLE_N)?;
    order(q)?;
    let params: Vec<WernerPopescuParams> = cells
        .iter()
        .map(|&(d, n)| WernerPopescuParams::new(d, n, x).map_err(usage))
        .collect::<Result<_, _>>()?;
    let spectra: Vec<_> = pool(settings)?.install(|| params.par_iter().map(|p| sandwich_spectrum(p, q)).collect());

    let mut table = Table::new(&["d", "N", "gamma1", "mult1", "gamma2", "mult2", "gamma3", "mult3"]);
    let mut failed = false;
    for (&(d, n), s) in cells.iter().zip(spectra) {
        let mut row = vec![Cell::Int(d.into()), Cell::Int(n.into())];
        match s {
            Ok(s) => row.extend([
                s.gamma1.map_or(Cell::Blank, Cell::Num),
                Cell::Int(s.mult1),
                Cell::Num(s.gamma2),
                Cell::Int(s.mult2),
                Cell::Num(s.gamma3),
                Cell::Int(s.mult3),
            ]),
            Err(e) => {
                failed = true;
                row.extend(std::iter::repeat_n(Cell::Marker(e.kind()), 6));
            }
        }
        table.rows.push(row);
    }
    let mut p = base_parameters(settings);
    list_parameters(&mut p, &cells);
    p.insert("q".into(), json!(q));
    p.insert("x".into(), json!(x));
    Ok(Report {
        table,
        manifest: RunManifest::new("table1", p),
        failed,
    })
}

pub fn table2(family: &Family, arg: CriterionArg, settings: &Settings) -> Result<Report, CliError> {
    let cells = cells(family, &TABLE_D, &TABLE_N)?;
    let c = match arg {
        CriterionArg::Vn => return Err(CliError::Usage("table2 has no q → ∞ limit for vn".into())),
        other => criterion(other, ConditioningArg::B),
    };
    let search = settings.search;
    let results: Vec<Result<f64, Error>> = pool(settings)?.install(|| {
        cells
            .par_iter()
            .map(|&(d, n)| match c {
                EntropyCriterion::Ppt => ppt_threshold_with(d, n, &search).map(|r| r.x_star),
                _ => find_threshold_with(d, n, c, Order::Infinity, &search).map(|r| r.x_star),
            })
            .collect()
    });
    let mut table = Table::new(&["d", "N", "x_threshold", "formula"]);
    let mut failed = false;
    for (&(d, n), r) in cells.iter().zip(&results) {
        table.rows.push(vec![
            Cell::Int(d.into()),
            Cell::Int(n.into()),
            threshold_cell(r, &mut failed),
            Cell::Num(threshold_formula(d, n)),
        ]);
    }
    let mut p = base_parameters(settings);
    list_parameters(&mut p, &cells);
    p.insert("criterion".into(), json!(c.label()));
    Ok(Report {
        table,
        manifest: RunManifest::new("table2", p),
        failed,
    })
}

pub fn table3(family: &Family, q: f64, settings: &Settings) -> Result<Report, CliError> {
    let cells = cells(family, &TABLE3_D, &TABLE3_N)?;
    let o = order(q)?;
    let search = settings.search;
    let jobs: Vec<(u32, u32, EntropyCriterion)> = cells
        .iter()
        .flat_map(|&(d, n)| {
            [
                (d, n, EntropyCriterion::CSTRE_B),
                (d, n, EntropyCriterion::AR_A_GIVEN_B),
            ]
        })
        .collect();
    let results: Vec<Result<f64, Error>> = pool(settings)?.install(|| {
        jobs.par_iter()
            .map(|&(d, n, c)| find_threshold_with(d, n, c, o, &search).map(|r| r.x_star))
            .collect()
    });
    let mut table = Table::new(&["d", "N", "x_cstre", "x_ar"]);
    let mut failed = false;
    for (&(d, n), pair) in cells.iter().zip(results.chunks(2)) {
        table.rows.push(vec![
            Cell::Int(d.into()),
            Cell::Int(n.into()),
            threshold_cell(&pair[0], &mut failed),
            threshold_cell(&pair[1], &mut failed),
        ]);
    }
    let mut p = base_parameters(settings);
    list_parameters(&mut p, &cells);
    p.insert("q".into(), json!(q));
    Ok(Report {
        table,
        manifest: RunManifest::new("table3", p),
        failed,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn curve(
    d: u32,
    n: u32,
    crit: &Criterion,
    q_min: f64,
    q_max: f64,
    points: usize,
    scale: Scale,
    settings: &Settings,
) -> Result<Report, CliError> {
    WernerPopescuParams::new(d, n, 0.0).map_err(usage)?;
    if q_min.is_nan() || q_min <= 0.0 {
        return Err(CliError::Usage(format!("curve needs q-min > 0, got {q_min}")));
    }
    let c = match crit.criterion {
        CriterionArg::Cstre | CriterionArg::Ar => criterion(crit.criterion, crit.conditioning),
        other => return Err(CliError::Usage(format!("curve needs cstre or ar, got {other:?}"))),
    };
    let qs = grid(q_min, q_max, points, scale == Scale::Log).map_err(usage)?;
    if qs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("curve grid must be strictly ascending".into()));
    }
    // Warm starts make the trace sequential by construction.
    let samples = trace_curve_with(d, n, c, &qs, &settings.search).map_err(usage)?;
    let mut table = Table::new(&["q", "x_star"]);
    let mut failed = false;
    for s in &samples {
        let r = s.result.as_ref().map(|r| r.x_star).map_err(Clone::clone);
        table.rows.push(vec![Cell::Num(s.q), threshold_cell(&r, &mut failed)]);
    }
    let mut p = base_parameters(settings);
    p.insert("d".into(), json!(d));
    p.insert("N".into(), json!(n));
    p.insert("criterion".into(), json!(c.label()));
    p.insert("q_min".into(), json!(q_min));
    p.insert("q_max".into(), json!(q_max));
    p.insert("points".into(), json!(points));
    p.insert(
        "scale".into(),
        json!(if scale == Scale::Log { "log" } else { "linear" }),
    );
    Ok(Report {
        table,
        manifest: RunManifest::new("curve", p),
        failed,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn scan(
    d: u32,
    n: u32,
    crit: &Criterion,
    q: f64,
    x_min: f64,
    x_max: f64,
    points: usize,
    settings: &Settings,
) -> Result<Report, CliError> {
    WernerPopescuParams::new(d, n, 0.0).map_err(usage)?;
    if !(0.0..=1.0).contains(&x_min) || !(0.0..=1.0).contains(&x_max) {
        return Err(CliError::Usage(format!("x range [{x_min}, {x_max}] outside [0, 1]")));
    }
    let c = criterion(crit.criterion, crit.conditioning);
    if c != EntropyCriterion::Ppt {
        order(q)?;
    }
    let xs = grid(x_min, x_max, points, false).map_err(usage)?;
    let cap = settings.search.dense_cap;
    let values: Vec<Result<f64, Error>> = pool(settings)?.install(|| {
        xs.par_iter()
            .map(|&x| {
                let p = WernerPopescuParams::new(d, n, x)?.with_dense_cap(cap);
                match c {
                    EntropyCriterion::Ppt => ppt_min_eigenvalue(&p),
                    _ => wp_entropy(&p, c, q).map(|v| v.value),
                }
            })
            .collect()
    });
    let mut table = Table::new(&["x", "value"]);
    let mut failed = false;
    for (&x, v) in xs.iter().zip(&values) {
        let cell = match v {
            Ok(v) => Cell::Num(*v),
            Err(e) => {
                failed = true;
                Cell::Marker(e.kind())
            }
        };
        table.rows.push(vec![Cell::Num(x), cell]);
    }
    let mut p = base_parameters(settings);
    p.insert("d".into(), json!(d));
    p.insert("N".into(), json!(n));
    p.insert("criterion".into(), json!(c.label()));
    p.insert("q".into(), json!(q));
    p.insert("x_min".into(), json!(x_min));
    p.insert("x_max".into(), json!(x_max));
    p.insert("points".into(), json!(points));
    Ok(Report {
        table,
        manifest: RunManifest::new("scan", p),
        failed,
    })
}

/// Prints one line per check; true when all pass.
pub fn verify_report(dense_limit: u64) -> bool {
    let checks = verify::run_all(dense_limit);
    for c in &checks {
        println!("{c}");
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed", checks.len());
    passed == checks.len()
}
