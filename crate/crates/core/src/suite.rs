//! Verification suites behind the command-line front end, and the report
//! envelope they produce.

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coherent::{
    check_eigen_relation, check_normalization, completeness_check, minimal_cutoff, CoherentParams,
    CompletenessConfig, MeasurePrefactor, Normalization,
};
use crate::error::{QoscError, Result};
use crate::fock::relations::{algebra_suite, AlgebraMargins};
use crate::fock::{CheckReport, Expectation, FockSpace};
use crate::qcore::{
    factorial_weight, jackson_integral, q_exp_product, q_exp_series, q_factorial, Polynomial, QParam,
    DEFAULT_SERIES_TOL,
};
use crate::qqm::{self, SpectrumEntry};
use crate::tolerance;
use crate::weyl::{self, Ordering, WeylParams};

/// Seed of the sampling generator; fixed so reports are reproducible.
pub const SAMPLE_SEED: u64 = 0x5eed_0a11;
/// Random points per q for the q-exponential checks.
pub const QFUNCTION_SAMPLES: usize = 200;
/// Random parameter vectors for the coherent-state checks.
pub const COHERENT_SAMPLES: usize = 50;
/// Random `|z_i|^2` are drawn from `[0, COHERENT_FRACTION / (1-q)]`.
pub const COHERENT_FRACTION: f64 = 0.4;
/// Highest n for which the Jackson integral is compared with `[n]!`.
pub const JACKSON_MAX_ORDER: usize = 8;
/// Deformation parameters of the classical-limit checks.
pub const CLASSICAL_SPECTRUM_Q: f64 = 1.0 - 1e-6;
pub const CLASSICAL_COMMUTATOR_Q: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

/// Configuration shared by every command, with the command-specific
/// parameters that were supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub q: f64,
    pub modes: usize,
    pub cutoff: usize,
    /// Overrides every check tolerance when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Sector margin; each suite has its own default when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<usize>,
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: 0.5,
            modes: 2,
            cutoff: 5,
            tol: None,
            margin: None,
            format: OutputFormat::Json,
            output: None,
            z: None,
            s: None,
            t: None,
            levels: None,
            degeneracy_tol: None,
            sweep: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        QParam::new(self.q)?;
        if self.modes == 0 {
            return Err(QoscError::InvalidParameter("modes must be at least 1".into()));
        }
        if self.cutoff < 2 {
            return Err(QoscError::InvalidParameter(format!(
                "cutoff must be at least 2, got {}",
                self.cutoff
            )));
        }
        if let Some(m) = self.margin {
            if m > self.cutoff {
                return Err(QoscError::InvalidParameter(format!(
                    "margin {m} exceeds cutoff {}",
                    self.cutoff
                )));
            }
        }
        for (name, v) in [("tol", self.tol), ("degeneracy-tol", self.degeneracy_tol)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(QoscError::InvalidParameter(format!("{name} must be positive, got {v}")));
                }
            }
        }
        for (name, v) in [("z", &self.z), ("s", &self.s), ("t", &self.t)] {
            if let Some(v) = v {
                if v.len() != self.modes {
                    return Err(QoscError::InvalidParameter(format!(
                        "{name} has {} values for {} modes",
                        v.len(),
                        self.modes
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn qp(&self) -> Result<QParam> {
        QParam::new(self.q)
    }

    pub fn space(&self) -> Result<FockSpace> {
        FockSpace::new(self.modes, self.cutoff)
    }

    fn margin_or(&self, default: usize) -> usize {
        self.margin.unwrap_or(default)
    }
}

/// `q0:q1:steps`, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub q0: f64,
    pub q1: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn new(q0: f64, q1: f64, steps: usize) -> Result<Self> {
        for q in [q0, q1] {
            QParam::new(q)?;
        }
        if steps == 0 || (steps == 1 && q0 != q1) {
            return Err(QoscError::InvalidParameter(format!(
                "sweep needs at least {} steps",
                if steps == 0 { 1 } else { 2 }
            )));
        }
        Ok(Sweep { q0, q1, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.q0];
        }
        let h = (self.q1 - self.q0) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.q1 } else { self.q0 + h * k as f64 }).collect()
    }
}

impl std::str::FromStr for Sweep {
    type Err = QoscError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || QoscError::InvalidParameter(format!("sweep must be q0:q1:steps, got '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad());
        };
        Sweep::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: f64,
    pub label: crate::fock::MultiIndex,
    pub energy_numeric: f64,
    pub energy_closed_form: f64,
    pub energy_printed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    fn of(checks: &[CheckReport]) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<SpectrumEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Relations,
    Qfunctions,
    Spectrum,
    Coherent,
    Completeness,
    Weyl,
    Commutator,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Relations => "relations",
            Command::Qfunctions => "qfunctions",
            Command::Spectrum => "spectrum",
            Command::Coherent => "coherent",
            Command::Completeness => "completeness",
            Command::Weyl => "weyl",
            Command::Commutator => "commutator",
            Command::Report => "report",
        }
    }
}

/// Runs `command` and assembles the report. Configuration problems are
/// returned as errors; identity failures are recorded in the report.
pub fn run(command: Command, config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let mut spectrum = None;
    let mut sweep = None;
    let mut checks = match command {
        Command::Relations => relations(config)?,
        Command::Qfunctions => qfunctions(&config.qp()?),
        Command::Spectrum => {
            let (checks, entries) = spectrum_suite(config)?;
            spectrum = Some(entries);
            checks
        }
        Command::Coherent => coherent(config)?,
        Command::Completeness => completeness(config)?,
        Command::Weyl => weyl_suite(config)?,
        Command::Commutator => commutator(config)?,
        Command::Report => {
            let mut all = relations(config)?;
            all.extend(qfunctions(&config.qp()?));
            all.extend(coherent(config)?);
            all.extend(completeness(config)?);
            all.extend(weyl_suite(config)?);
            all.extend(commutator(config)?);
            let (checks, entries) = spectrum_suite(config)?;
            all.extend(checks);
            spectrum = Some(entries);
            if let Some(s) = &config.sweep {
                sweep = Some(sweep_rows(config, s)?);
            }
            all
        }
    };
    if let Some(tol) = config.tol {
        checks = checks.into_iter().map(|c| c.with_tolerance(tol)).collect();
    }
    Ok(Report {
        command: command.name().to_string(),
        config: config.clone(),
        summary: Summary::of(&checks),
        checks,
        spectrum,
        sweep,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Defining relations, the number-operator relation and the scale-product
/// commutator.
pub fn relations(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let margins = config.margin.map(AlgebraMargins::uniform).unwrap_or_default();
    algebra_suite(&config.space()?, &config.qp()?, margins)
}

fn random_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
}

/// q-difference recurrence and series/product agreement on random points of
/// `|x| < 0.9/(1-q)`, and the Jackson integral of `x^n / exp_q(qx)`.
pub fn qfunctions(qp: &QParam) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ qp.q().to_bits());
    let q = qp.q();
    let mut recurrence = Ok(0.0f64);
    let mut agreement = Ok(0.0f64);
    for _ in 0..QFUNCTION_SAMPLES {
        let x = random_disc(&mut rng, 0.9 * qp.radius());
        let eval = || -> Result<(f64, f64)> {
            let e = q_exp_series(x, qp, DEFAULT_SERIES_TOL)?;
            let e_q = q_exp_series(x * q, qp, DEFAULT_SERIES_TOL)?;
            let p = q_exp_product(x, qp, DEFAULT_SERIES_TOL)?;
            let scale = 1.0 + e.norm();
            Ok((
                (e_q - (1.0 - (1.0 - q) * x) * e).norm() / scale,
                (e - p).norm() / scale,
            ))
        };
        match eval() {
            Ok((r, a)) => {
                recurrence = recurrence.map(|w| w.max(r));
                agreement = agreement.map(|w| w.max(a));
            }
            Err(e) => {
                recurrence = Err(e.clone());
                agreement = Err(e);
                break;
            }
        }
    }
    let report = |id: String, eq: &str, r: Result<f64>, tol: f64| match r {
        Ok(v) => CheckReport::scalar(id, eq, v, tol),
        Err(e) => CheckReport::failed(id, eq, &e, tol),
    };
    let mut out = vec![
        report(
            format!("exp_q(qx) = (1-(1-q)x) exp_q(x), {QFUNCTION_SAMPLES} points, q = {q}"),
            "Eq(12)",
            recurrence,
            tolerance::Q_EXP,
        ),
        report(
            format!("series = product form of exp_q, {QFUNCTION_SAMPLES} points, q = {q}"),
            "Eq(13)",
            agreement,
            tolerance::Q_EXP,
        ),
    ];
    let jackson = (0..=JACKSON_MAX_ORDER).try_fold(0.0f64, |worst, n| {
        let value = jackson_integral(|x| factorial_weight(n, x, qp, 1e-17), qp, 1e-17)?;
        let exact = q_factorial(n, qp);
        Ok(worst.max((value - exact).abs() / exact))
    });
    out.push(report(
        format!("int_0^(1/(1-q)) x^n / exp_q(qx) d_qx = [n]!, n <= {JACKSON_MAX_ORDER}, q = {q}"),
        "Eq(17)",
        jackson,
        tolerance::IDENTITY,
    ));
    out
}

fn coherent_checks(params: &CoherentParams, n_modes: usize) -> Result<Vec<CheckReport>> {
    let cutoff = minimal_cutoff(params, tolerance::COHERENT_TAIL * 1e-2)?;
    let space = FockSpace::new(n_modes, cutoff)?;
    let mut out = vec![check_normalization(params, &space, Normalization::Corrected)?];
    for mode in 1..=n_modes {
        out.push(check_eigen_relation(mode, params, &space)?);
    }
    Ok(out)
}

/// Normalization and lowering relation for the configured `z`, or for
/// `COHERENT_SAMPLES` random parameter vectors (worst case per check).
pub fn coherent(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let qp = config.qp()?;
    let n = config.modes;
    let raise_note = |needed: usize| {
        (needed > config.cutoff).then(|| format!("cutoff raised from {} to {needed} for the tail bound", config.cutoff))
    };
    if let Some(z) = &config.z {
        let params = CoherentParams::new(z.clone(), qp)?;
        let needed = minimal_cutoff(&params, tolerance::COHERENT_TAIL * 1e-2)?.max(config.cutoff);
        let space = FockSpace::new(n, needed)?;
        let mut out = vec![check_normalization(&params, &space, Normalization::Corrected)?];
        for mode in 1..=n {
            out.push(check_eigen_relation(mode, &params, &space)?);
        }
        if z.iter().any(|zi| zi.norm() > 0.0) {
            out.push(check_normalization(&params, &space, Normalization::AsPrinted)?.expecting(Expectation::Mismatch));
        }
        if let Some(note) = raise_note(needed) {
            out = out.into_iter().map(|r| r.with_note(note.clone())).collect();
        }
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ qp.q().to_bits() ^ n as u64);
    let mut worst: Vec<CheckReport> = Vec::new();
    let mut largest_cutoff = 0;
    for _ in 0..COHERENT_SAMPLES {
        let z: Vec<Complex64> = (0..n).map(|_| random_disc(&mut rng, (COHERENT_FRACTION * qp.radius()).sqrt())).collect();
        let params = CoherentParams::new(z, qp)?;
        let reports = coherent_checks(&params, n)?;
        largest_cutoff = largest_cutoff.max(reports[0].cutoff);
        if worst.is_empty() {
            worst = reports;
        } else {
            for (w, r) in worst.iter_mut().zip(reports) {
                if r.max_residual > w.max_residual || r.max_residual.is_nan() {
                    *w = r;
                }
            }
        }
    }
    Ok(worst
        .into_iter()
        .map(|r| {
            let id = format!("{}, worst of {COHERENT_SAMPLES} random z", r.id);
            CheckReport { id, ..r }.with_note(format!(
                "|z_i|^2 <= {COHERENT_FRACTION}/(1-q); cutoff per sample from the tail bound, up to {largest_cutoff}"
            ))
        })
        .collect())
}

/// Resolved identity with the per-plane measure and normalized states,
/// plus the printed measure and printed normalization for comparison.
pub fn completeness(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let qp = config.qp()?;
    let space = config.space()?;
    let mut cfg = CompletenessConfig::for_space(&space);
    cfg.margin = config.margin_or(cfg.margin);
    let mut out = vec![completeness_check(&space, &cfg, &qp)?];
    let printed_measure = completeness_check(
        &space,
        &CompletenessConfig {
            measure: MeasurePrefactor::AsPrinted,
            ..cfg
        },
        &qp,
    )?;
    out.push(if config.modes == 2 {
        printed_measure.with_note("1/pi^2 coincides with 1/pi^n for n = 2")
    } else {
        printed_measure.expecting(Expectation::Mismatch)
    });
    out.push(
        completeness_check(
            &space,
            &CompletenessConfig {
                normalization: Normalization::AsPrinted,
                ..cfg
            },
            &qp,
        )?
        .expecting(Expectation::Mismatch),
    );
    Ok(out)
}

/// Shift, power and Weyl-Heisenberg identities on the margin-`M/2` sector.
pub fn weyl_suite(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let qp = config.qp()?;
    let space = config.space()?;
    let n = config.modes;
    let margin = config.margin_or(config.cutoff / 2).max(1);
    let s = config.s.clone().unwrap_or_else(|| vec![Complex64::new(0.3, 0.0); n]);
    let t = config.t.clone().unwrap_or_else(|| vec![Complex64::new(0.2, 0.0); n]);
    let coefficients = [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(-0.5, 1.0),
        Complex64::new(1.0, 0.0),
    ];
    let degree = (margin - 1).min(3);
    let f = Polynomial::new(coefficients[..=degree].to_vec());
    let power = margin.min(2);
    let mut out = Vec::new();
    for mode in 1..=n {
        out.push(weyl::check_shift_identity(mode, &f, &space, &qp, margin)?);
        out.push(weyl::check_exp_shift_identity(mode, t[mode - 1], &space, &qp, margin)?);
        out.push(weyl::check_power_identity(mode, t[mode - 1], power, &space, &qp, margin)?);
        out.push(weyl::check_q_commutation(mode, &space, &qp)?);
    }
    let params = WeylParams::new(s, t, qp)?;
    out.extend(weyl::check_weyl_relation(
        &params,
        &space,
        margin,
        &[Ordering::Ascending, Ordering::Descending],
    )?);
    Ok(out)
}

/// Hamiltonian forms, q-canonical commutator, scale-operator form and the
/// classical limit.
pub fn commutator(config: &RunConfig) -> Result<Vec<CheckReport>> {
    let qp = config.qp()?;
    let space = config.space()?;
    let margin = config.margin_or(2);
    let mut out = qqm::check_hamiltonian_forms(&space, &qp, margin)?;
    for mode in 1..=config.modes {
        out.extend(qqm::check_canonical_commutator(mode, &space, &qp, margin)?);
    }
    out.extend(qqm::check_scale_form(&space, &qp, config.margin_or(1))?);
    out.extend(qqm::classical_limit_checks(
        config.modes,
        config.cutoff,
        CLASSICAL_SPECTRUM_Q,
        CLASSICAL_COMMUTATOR_Q,
    )?);
    Ok(out)
}

/// Spectrum checks and the sorted in-sector levels, limited to `levels`.
pub fn spectrum_suite(config: &RunConfig) -> Result<(Vec<CheckReport>, Vec<SpectrumEntry>)> {
    let qp = config.qp()?;
    let space = config.space()?;
    let margin = config.margin_or(1);
    let mut checks = qqm::check_spectrum(&space, &qp, margin)?;
    if config.modes == 1 && config.cutoff <= 10 {
        let dense = qqm::dense_sector_eigenvalues(&space, &qp, margin)?;
        let dev = dense
            .iter()
            .enumerate()
            .map(|(m, e)| (e - qqm::energy_corrected(&vec![m].into(), &qp)).abs())
            .fold(0.0, f64::max);
        checks.push(CheckReport::new(
            "dense eigenvalues of (P^2+X^2)/2 = [m] + q^m/2",
            "Eq(31)",
            &crate::fock::SafeSector::new(&space, margin),
            dev,
            tolerance::SPECTRUM,
        ));
    }
    let mut entries = qqm::spectrum(
        &space,
        &qp,
        margin,
        config.degeneracy_tol.unwrap_or(tolerance::DEGENERACY),
    )?;
    if let Some(k) = config.levels {
        entries.truncate(k);
    }
    Ok((checks, entries))
}

/// Level flow `E(nu)` over the sweep grid, one row per `(q, label)`.
pub fn sweep_rows(config: &RunConfig, sweep: &Sweep) -> Result<Vec<SweepRow>> {
    let space = config.space()?;
    let margin = config.margin_or(1);
    let mut rows = Vec::new();
    for q in sweep.points() {
        let qp = QParam::new(q)?;
        for e in qqm::spectrum(&space, &qp, margin, tolerance::DEGENERACY)? {
            rows.push(SweepRow {
                q,
                label: e.label,
                energy_numeric: e.energy_numeric,
                energy_closed_form: e.energy_closed_form,
                energy_printed: e.energy_printed,
            });
        }
    }
    Ok(rows)
}
