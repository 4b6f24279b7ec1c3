use std::fmt;

use serde::Serialize;

use lame_qes::algebraize::lame_potential;
use lame_qes::fixtures::{fixture_for, Fixture};
use lame_qes::verify::{
    band_scan as scan, classify_spectrum, hill_discriminant, state_residual, Classification, DEFAULT_GRID_N, EDGE_TOL,
    ODE_TOL, RESIDUAL_TOL,
};
use lame_qes::{band_edge_spectrum, BandEdgeState, EllipticModulus, LameParameters, Modulus, SpectrumResult};

use crate::config::ConfigFile;
use crate::output::{g17, write_csv, write_json, Format, G17};
use crate::{BandScanArgs, CheckArgs, CommonArgs, PotentialArgs, SpectrumArgs, VerifyArgs};

pub const FIXTURE_TOL: f64 = 1e-8;
const FIXTURE_GRID: usize = 401;

#[derive(Debug)]
pub enum Failure {
    /// Bad or inadmissible input.
    Invalid(String),
    /// The computation ran but a check did not hold.
    Verification(String),
    Internal(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 2,
            Self::Verification(_) => 3,
            Self::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Invalid(m) => write!(f, "{m}"),
            Self::Verification(m) => write!(f, "verification failed: {m}"),
            Self::Internal(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Internal(e)
    }
}

impl From<lame_qes::Error> for Failure {
    fn from(e: lame_qes::Error) -> Self {
        Self::Internal(e.into())
    }
}

struct Setup {
    params: LameParameters,
    modulus: Modulus,
    format: Format,
    config: ConfigFile,
}

fn setup(common: &CommonArgs, default_format: Format) -> Result<Setup, Failure> {
    let config = match &common.config {
        Some(path) => ConfigFile::load(path).map_err(|e| Failure::Invalid(format!("{e:#}")))?,
        None => ConfigFile::default(),
    };
    let rational = |flag: &Option<String>, from_file: Option<crate::config::RationalValue>, key: &str| {
        match (flag, from_file) {
            (Some(v), _) => Ok(v.clone()),
            (None, Some(v)) => v.into_string(key).map_err(|e| Failure::Invalid(e.to_string())),
            (None, None) => Err(Failure::Invalid(format!("--{key} is required (flag or config key)"))),
        }
    };
    let m = rational(&common.m, config.m.clone(), "m")?;
    let l = rational(&common.l, config.l.clone(), "l")?;
    let params = LameParameters::parse(&m, &l).map_err(|e| Failure::Invalid(e.to_string()))?;
    let k2 = common
        .k2
        .or(config.k2)
        .ok_or_else(|| Failure::Invalid("--k2 is required (flag or config key)".into()))?;
    let modulus = EllipticModulus::new(k2).map_err(|e| Failure::Invalid(e.to_string()))?;
    let format = match (common.format, &config.format) {
        (Some(f), _) => f,
        (None, Some(s)) => s.parse().map_err(|e: anyhow::Error| Failure::Invalid(e.to_string()))?,
        (None, None) => default_format,
    };
    Ok(Setup {
        params,
        modulus,
        format,
        config,
    })
}

struct Checks {
    grid: usize,
    residual_tol: f64,
    edge_tol: f64,
    ode_tol: f64,
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Invalid(format!("{name} must be positive, got {v}")))
    }
}

fn checks(args: &CheckArgs, config: &ConfigFile) -> Result<Checks, Failure> {
    let grid = args.grid.or(config.grid).unwrap_or(DEFAULT_GRID_N);
    if grid < 101 {
        return Err(Failure::Invalid(format!("grid must have at least 101 points, got {grid}")));
    }
    Ok(Checks {
        grid,
        residual_tol: positive("residual-tol", args.residual_tol.or(config.residual_tol).unwrap_or(RESIDUAL_TOL))?,
        edge_tol: positive("edge-tol", args.edge_tol.or(config.edge_tol).unwrap_or(EDGE_TOL))?,
        ode_tol: positive("ode-tol", args.ode_tol.or(config.ode_tol).unwrap_or(ODE_TOL))?,
    })
}

#[derive(Serialize)]
struct StateRow {
    label: usize,
    energy: G17,
    degeneracy: usize,
    family: String,
    classification: &'static str,
    residual: G17,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<G17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    determinant: Option<G17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture_deviation: Option<G17>,
}

#[derive(Serialize)]
struct SpectrumReport {
    m: String,
    l: String,
    k2: G17,
    states: Vec<StateRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
}

struct Analysis {
    spectrum: SpectrumResult,
    residuals: Vec<f64>,
    classes: Vec<(Classification, f64, f64)>,
}

fn analyse(s: &Setup, c: &Checks) -> Result<Analysis, Failure> {
    let spectrum = band_edge_spectrum(&s.params, &s.modulus)?;
    let residuals = spectrum
        .states
        .iter()
        .map(|st| state_residual(st, &s.params, &s.modulus, c.grid))
        .collect();
    let classes = if c.ode_tol == ODE_TOL {
        classify_spectrum(&spectrum, c.edge_tol)?
            .into_iter()
            .map(|cl| (cl.class, cl.sample.delta, cl.sample.determinant))
            .collect()
    } else {
        spectrum
            .states
            .iter()
            .map(|st| {
                let d = hill_discriminant(st.energy, &s.params, &s.modulus, c.ode_tol)?;
                Ok((lame_qes::verify::classify(d.delta, st.degeneracy, c.edge_tol), d.delta, d.determinant))
            })
            .collect::<lame_qes::Result<Vec<_>>>()?
    };
    Ok(Analysis {
        spectrum,
        residuals,
        classes,
    })
}

fn rows(a: &Analysis, detailed: bool, fixture_devs: Option<&[f64]>) -> Vec<StateRow> {
    a.spectrum
        .states
        .iter()
        .enumerate()
        .map(|(i, st)| StateRow {
            label: st.label,
            energy: G17(st.energy),
            degeneracy: st.degeneracy,
            family: st.family.to_string(),
            classification: a.classes[i].0.as_str(),
            residual: G17(a.residuals[i]),
            delta: detailed.then_some(G17(a.classes[i].1)),
            determinant: detailed.then_some(G17(a.classes[i].2)),
            fixture_deviation: fixture_devs.map(|d| G17(d[i])),
        })
        .collect()
}

fn emit(s: &Setup, rows: Vec<StateRow>, passed: Option<bool>) -> Result<(), Failure> {
    match s.format {
        Format::Json => write_json(&SpectrumReport {
            m: s.params.m().to_string(),
            l: s.params.l().to_string(),
            k2: G17(s.modulus.k2()),
            states: rows,
            passed,
        })?,
        Format::Csv => {
            let detailed = rows.first().is_some_and(|r| r.delta.is_some());
            let with_fixture = rows.first().is_some_and(|r| r.fixture_deviation.is_some());
            let mut header = vec!["label", "energy", "degeneracy", "family", "classification", "residual"];
            if detailed {
                header.extend(["delta", "determinant"]);
            }
            if with_fixture {
                header.push("fixture_deviation");
            }
            let cells = rows.into_iter().map(|r| {
                let mut v = vec![
                    r.label.to_string(),
                    g17(r.energy.0),
                    r.degeneracy.to_string(),
                    r.family,
                    r.classification.to_string(),
                    g17(r.residual.0),
                ];
                v.extend(r.delta.map(|x| g17(x.0)));
                v.extend(r.determinant.map(|x| g17(x.0)));
                v.extend(r.fixture_deviation.map(|x| g17(x.0)));
                v
            });
            write_csv(&header, cells)?
        }
    }
    Ok(())
}

fn residual_failures(a: &Analysis, tol: f64) -> Vec<String> {
    a.spectrum
        .states
        .iter()
        .zip(&a.residuals)
        .filter(|(_, r)| !(**r < tol))
        .map(|(st, r)| format!("state {} (E = {}) has residual {r:e} >= {tol:e}", st.label, g17(st.energy)))
        .collect()
}

pub fn spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let s = setup(&args.common, Format::Json)?;
    let c = checks(&args.check, &s.config)?;
    let a = analyse(&s, &c)?;
    emit(&s, rows(&a, false, None), None)?;
    let failures = residual_failures(&a, c.residual_tol);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

/// Largest relative sup-norm distance of `target` from the span of `basis`.
fn span_distance(basis: &[Vec<f64>], target: &[f64]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for _ in 0..2 {
            for u in &ortho {
                let c = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= c * ui);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            v.iter_mut().for_each(|vi| *vi /= n);
            ortho.push(v);
        }
    }
    let mut r = target.to_vec();
    for u in &ortho {
        let c = dot(u, &r);
        r.iter_mut().zip(u).for_each(|(ri, ui)| *ri -= c * ui);
    }
    let scale = target.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    r.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / scale
}

/// Relative energy error against the nearest closed-form level, combined
/// with how far that level's functions sit from the state's span.
fn fixture_deviation(state: &BandEdgeState, fixture: &Fixture, modulus: &Modulus) -> f64 {
    let k2 = modulus.k2();
    let Some(level) = fixture
        .levels
        .iter()
        .min_by(|a, b| ((a.energy)(k2) - state.energy).abs().total_cmp(&((b.energy)(k2) - state.energy).abs()))
    else {
        return f64::INFINITY;
    };
    let e = (level.energy)(k2);
    let energy_dev = (state.energy - e).abs() / e.abs().max(1.0);
    let xs: Vec<f64> = (0..FIXTURE_GRID)
        .map(|i| modulus.half_period() * i as f64 / (FIXTURE_GRID - 1) as f64)
        .collect();
    let basis: Vec<Vec<f64>> = state.samplers.iter().map(|w| xs.iter().map(|&x| w.eval(x)).collect()).collect();
    level
        .functions
        .iter()
        .map(|f| span_distance(&basis, &xs.iter().map(|&x| f(x, modulus)).collect::<Vec<_>>()))
        .fold(energy_dev, f64::max)
}

pub fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let s = setup(&args.common, Format::Json)?;
    let c = checks(&args.check, &s.config)?;
    let a = analyse(&s, &c)?;
    let mut failures = residual_failures(&a, c.residual_tol);
    for (st, cl) in a.spectrum.states.iter().zip(&a.classes) {
        if cl.0 == Classification::Inconsistent {
            failures.push(format!("state {} (E = {}) has inconsistent discriminant {}", st.label, g17(st.energy), g17(cl.1)));
        }
    }
    let devs = if args.fixtures || s.config.fixtures.unwrap_or(false) {
        match fixture_for(&s.params) {
            Ok(fixture) => {
                let d: Vec<f64> = a
                    .spectrum
                    .states
                    .iter()
                    .map(|st| fixture_deviation(st, &fixture, &s.modulus))
                    .collect();
                for (st, dev) in a.spectrum.states.iter().zip(&d) {
                    if !(*dev < FIXTURE_TOL) {
                        failures.push(format!("state {} deviates from its closed form by {dev:e}", st.label));
                    }
                }
                Some(d)
            }
            Err(e) => {
                eprintln!("warning: {e}");
                None
            }
        }
    } else {
        None
    };
    emit(&s, rows(&a, true, devs.as_deref()), Some(failures.is_empty()))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

#[derive(Serialize)]
struct ScanPoint {
    energy: G17,
    delta: G17,
    determinant: G17,
}

#[derive(Serialize)]
struct ScanReport {
    m: String,
    l: String,
    k2: G17,
    samples: Vec<ScanPoint>,
}

pub fn band_scan(args: BandScanArgs) -> Result<(), Failure> {
    let s = setup(&args.common, Format::Csv)?;
    let e_min = args.e_min.or(s.config.e_min).unwrap_or(0.0);
    let e_max = args.e_max.or(s.config.e_max).unwrap_or(10.0);
    let samples = args.samples.or(s.config.samples).unwrap_or(201);
    let tol = positive("ode-tol", args.ode_tol.or(s.config.ode_tol).unwrap_or(ODE_TOL))?;
    if !(e_min.is_finite() && e_max.is_finite() && e_min <= e_max) || samples == 0 {
        return Err(Failure::Invalid(format!(
            "need finite e-min <= e-max and at least one sample (got {e_min}, {e_max}, {samples})"
        )));
    }
    let points = scan(&s.params, &s.modulus, e_min, e_max, samples, tol)?;
    match s.format {
        Format::Json => write_json(&ScanReport {
            m: s.params.m().to_string(),
            l: s.params.l().to_string(),
            k2: G17(s.modulus.k2()),
            samples: points
                .iter()
                .map(|p| ScanPoint {
                    energy: G17(p.energy),
                    delta: G17(p.delta),
                    determinant: G17(p.determinant),
                })
                .collect(),
        })?,
        Format::Csv => write_csv(
            &["energy", "delta", "determinant"],
            points.iter().map(|p| vec![g17(p.energy), g17(p.delta), g17(p.determinant)]),
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct PotentialPoint {
    x: G17,
    v: G17,
}

#[derive(Serialize)]
struct PotentialReport {
    m: String,
    l: String,
    k2: G17,
    points: Vec<PotentialPoint>,
}

pub fn potential(args: PotentialArgs) -> Result<(), Failure> {
    let s = setup(&args.common, Format::Csv)?;
    let samples = args.samples.or(s.config.samples).unwrap_or(201);
    if samples < 2 {
        return Err(Failure::Invalid(format!("need at least 2 samples, got {samples}")));
    }
    let span = s.modulus.half_period();
    let points: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let x = span * i as f64 / (samples - 1) as f64;
            (x, lame_potential(x, &s.params, &s.modulus))
        })
        .collect();
    match s.format {
        Format::Json => write_json(&PotentialReport {
            m: s.params.m().to_string(),
            l: s.params.l().to_string(),
            k2: G17(s.modulus.k2()),
            points: points.iter().map(|&(x, v)| PotentialPoint { x: G17(x), v: G17(v) }).collect(),
        })?,
        Format::Csv => write_csv(&["x", "v"], points.iter().map(|&(x, v)| vec![g17(x), g17(v)]))?,
    }
    Ok(())
}
