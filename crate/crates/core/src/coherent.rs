//! Coherent states `|z_1, ..., z_n>` of the covariant oscillators and the
//! numerical resolution of the identity they generate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QoscError, Result};
use crate::fock::{
    build_annihilator, CheckReport, FockSpace, LinearMap, SafeSector, StateVector,
};
use crate::qcore::{
    jackson_integral, q_exp_inverse_product, q_exp_product, q_factorial, QParam,
    DEFAULT_SERIES_TOL,
};
use crate::tolerance;

/// Normalization constant `c(z)` in front of the coherent-state series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `prod_i exp_q(|z_i|^2)^{-1/2}`: gives `<z|z> = 1`.
    Corrected,
    /// `prod_i exp_q(|z_i|^2)`, the printed constant; does not normalize.
    AsPrinted,
    /// `c = 1`.
    Unnormalized,
}

/// Prefactor of the completeness measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurePrefactor {
    /// `1/pi^n`, one factor per complex plane.
    PerPlane,
    /// `1/pi^2` for every n, as printed.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentParams {
    z: Vec<Complex64>,
    qp: QParam,
}

impl CoherentParams {
    /// Requires `|z_i|^2 < 1/(1-q)` for every mode.
    pub fn new(z: Vec<Complex64>, qp: QParam) -> Result<Self> {
        for zi in &z {
            let x = zi.norm_sqr();
            if x.is_nan() || x >= qp.radius() {
                return Err(QoscError::Domain {
                    modulus: x,
                    radius: qp.radius(),
                });
            }
        }
        Ok(CoherentParams { z, qp })
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    pub fn qp(&self) -> &QParam {
        &self.qp
    }

    /// `(z_1, ..., z_i, sqrt(q) z_{i+1}, ..., sqrt(q) z_n)`
    pub fn rescaled_tail(&self, mode: usize) -> CoherentParams {
        let s = self.qp.q().sqrt();
        let z = self
            .z
            .iter()
            .enumerate()
            .map(|(k, &zk)| if k + 1 > mode { zk * s } else { zk })
            .collect();
        CoherentParams { z, qp: self.qp }
    }

    fn check_space(&self, space: &FockSpace) -> Result<()> {
        if self.z.len() != space.n_modes() {
            return Err(QoscError::ModeCount {
                expected: space.n_modes(),
                got: self.z.len(),
            });
        }
        Ok(())
    }
}

/// `sum_{m > cutoff} x^m/[m]!` relative to `exp_q(x)`, summed over modes;
/// bounds the norm squared dropped by the truncation.
pub fn tail_bound(params: &CoherentParams, cutoff: usize) -> Result<f64> {
    let qp = &params.qp;
    let mut total = 0.0;
    for zi in &params.z {
        let x = zi.norm_sqr();
        if x == 0.0 {
            continue;
        }
        let ratio = x / qp.int(cutoff + 2);
        if ratio >= 1.0 {
            return Ok(f64::INFINITY);
        }
        let first = x.powi(cutoff as i32 + 1) / q_factorial(cutoff + 1, qp);
        let inv_exp = q_exp_inverse_product(Complex64::new(x, 0.0), qp, DEFAULT_SERIES_TOL)?.re;
        total += first / (1.0 - ratio) * inv_exp;
    }
    Ok(total)
}

/// Smallest cutoff whose dropped tail is below `limit`.
pub fn minimal_cutoff(params: &CoherentParams, limit: f64) -> Result<usize> {
    for cutoff in 1..=2_000 {
        if tail_bound(params, cutoff)? < limit {
            return Ok(cutoff);
        }
    }
    Err(QoscError::Convergence {
        what: "coherent-state cutoff search",
        terms: 2_000,
    })
}

fn normalization_constant(params: &CoherentParams, normalization: Normalization) -> Result<f64> {
    let qp = &params.qp;
    let mut c = 1.0;
    for zi in &params.z {
        let x = Complex64::new(zi.norm_sqr(), 0.0);
        c *= match normalization {
            Normalization::Corrected => q_exp_inverse_product(x, qp, DEFAULT_SERIES_TOL)?.re.sqrt(),
            Normalization::AsPrinted => q_exp_product(x, qp, DEFAULT_SERIES_TOL)?.re,
            Normalization::Unnormalized => 1.0,
        };
    }
    Ok(c)
}

/// Coefficients `z^m / sqrt([m]!)` per mode, `m = 0..=cutoff`.
fn mode_tables(params: &CoherentParams, cutoff: usize) -> Vec<Vec<Complex64>> {
    params
        .z
        .iter()
        .map(|&zi| {
            let mut row = Vec::with_capacity(cutoff + 1);
            let mut c = Complex64::new(1.0, 0.0);
            row.push(c);
            for m in 1..=cutoff {
                c = c * zi / params.qp.int(m).sqrt();
                row.push(c);
            }
            row
        })
        .collect()
}

fn series_vector(params: &CoherentParams, space: &FockSpace, c: f64) -> StateVector {
    let tables = mode_tables(params, space.cutoff());
    let amplitudes = (0..space.dim())
        .map(|k| {
            (1..=space.n_modes()).fold(Complex64::new(c, 0.0), |acc, mode| {
                acc * tables[mode - 1][space.occupation(k, mode)]
            })
        })
        .collect();
    StateVector::new(amplitudes)
}

/// Normalized coherent state on `space`; fails when the cutoff drops more
/// than `1e-12` of the norm squared.
pub fn coherent_state(params: &CoherentParams, space: &FockSpace) -> Result<StateVector> {
    coherent_state_with(params, space, Normalization::Corrected)
}

pub fn coherent_state_with(
    params: &CoherentParams,
    space: &FockSpace,
    normalization: Normalization,
) -> Result<StateVector> {
    params.check_space(space)?;
    let tail = tail_bound(params, space.cutoff())?;
    if tail.is_nan() || tail >= tolerance::COHERENT_TAIL {
        return Err(QoscError::InsufficientCutoff {
            cutoff: space.cutoff(),
            tail_bound: tail,
            limit: tolerance::COHERENT_TAIL,
        });
    }
    let c = normalization_constant(params, normalization)?;
    Ok(series_vector(params, space, c))
}

/// `|<z|z> - 1|` for the given normalization.
pub fn check_normalization(
    params: &CoherentParams,
    space: &FockSpace,
    normalization: Normalization,
) -> Result<CheckReport> {
    let state = coherent_state_with(params, space, normalization)?;
    let deviation = (state.norm_sqr() - 1.0).abs();
    let tag = match normalization {
        Normalization::Corrected => "c = prod exp_q(|z|^2)^(-1/2)",
        Normalization::AsPrinted => "c = prod exp_q(|z|^2) (printed)",
        Normalization::Unnormalized => "c = 1",
    };
    Ok(
        CheckReport::scalar(format!("<z|z> = 1, {tag}"), "Eq(14)", deviation, tolerance::IDENTITY)
            .with_sector(space.cutoff(), 0, space.dim()),
    )
}

/// `a_i |z> = z_i |z_1, ..., z_i, sqrt(q) z_{i+1}, ..., sqrt(q) z_n>`.
///
/// Both sides are the `c = 1` series: the normalized states differ by the
/// factor `c(z)/c(z')` because rescaling changes the normalization. Rows are
/// compared on the margin-1 sector, where lowering from the truncated state
/// is exact.
pub fn check_eigen_relation(mode: usize, params: &CoherentParams, space: &FockSpace) -> Result<CheckReport> {
    space.check_mode(mode)?;
    let psi = coherent_state_with(params, space, Normalization::Unnormalized)?;
    let rescaled = params.rescaled_tail(mode);
    let target = coherent_state_with(&rescaled, space, Normalization::Unnormalized)?;
    let lowered = build_annihilator(space, &params.qp, mode)?.apply(psi.amplitudes());
    let zi = params.z[mode - 1];
    let sector = SafeSector::new(space, 1);
    let residual = sector
        .indices()
        .map(|k| (lowered[k] - zi * target.amplitudes()[k]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(CheckReport::new(
        format!("a{mode}|z> = z{mode}|z'> (tail rescaled by sqrt(q))"),
        "Eq(9)",
        &sector,
        residual,
        tolerance::IDENTITY,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessConfig {
    pub radial_tol: f64,
    pub margin: usize,
    pub measure: MeasurePrefactor,
    pub normalization: Normalization,
}

impl CompletenessConfig {
    /// Per-plane measure, normalized states, margin `cutoff/2`.
    pub fn for_space(space: &FockSpace) -> Self {
        CompletenessConfig {
            radial_tol: 1e-16,
            margin: space.cutoff() / 2,
            measure: MeasurePrefactor::PerPlane,
            normalization: Normalization::Corrected,
        }
    }
}

/// Deviation of the resolved identity from `I` on a sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedIdentity {
    pub max_diagonal_deviation: f64,
    pub max_off_diagonal: f64,
}

impl ResolvedIdentity {
    pub fn max_deviation(&self) -> f64 {
        self.max_diagonal_deviation.max(self.max_off_diagonal)
    }
}

/// Factors `1 - (1-q) q^n x` closer to zero than this count as a pole.
const POLE_TOL: f64 = 1e-12;

/// Radial weight `c(x)^2 exp_q(x) / exp_q(qx)` for `x = |z|^2`, times
/// `x^{(m+m')/2}`.
///
/// For normalized states the `exp_q(x)` of the measure cancels against
/// `c(x)^2` exactly; this keeps the boundary node `x = 1/(1-q)`, where
/// `exp_q(x)` has its first pole, finite.
fn radial_weight(x: f64, power: f64, normalization: Normalization, qp: &QParam, tol: f64) -> Result<f64> {
    let inv_qx = q_exp_inverse_product(Complex64::new(qp.q() * x, 0.0), qp, tol)?.re;
    let extra = match normalization {
        Normalization::Corrected => 1.0,
        Normalization::AsPrinted => q_exp_product(Complex64::new(x, 0.0), qp, POLE_TOL)?.re.powi(3),
        Normalization::Unnormalized => q_exp_product(Complex64::new(x, 0.0), qp, POLE_TOL)?.re,
    };
    Ok(x.powf(power) * inv_qx * extra)
}

/// `int |z><z| mu d^2z_1 ... d^2z_n` on the sector.
///
/// With `z = sqrt(x) e^{i theta}`, `d^2 z = dx dtheta / 2`. The phase integral
/// uses a uniform trapezoid rule with `2 cutoff + 2` nodes, exact for the
/// phase differences that occur; the radial integral is a Jackson integral
/// over `[0, 1/(1-q)]`.
pub fn resolved_identity(space: &FockSpace, cfg: &CompletenessConfig, qp: &QParam) -> Result<ResolvedIdentity> {
    let cutoff = space.cutoff();
    let n = space.n_modes();
    let nodes = 2 * cutoff + 2;
    let angular: Vec<Complex64> = (0..=2 * cutoff)
        .map(|d| {
            let shift = d as f64 - cutoff as f64;
            let h = 2.0 * PI / nodes as f64;
            (0..nodes)
                .map(|k| Complex64::from_polar(h, shift * k as f64 * h))
                .sum()
        })
        .collect();
    // radial[m][m'] = int x^{(m+m')/2} / sqrt([m]![m']!) w(x) d_q x
    let top = cutoff - cfg.margin.min(cutoff);
    let mut radial = vec![vec![0.0; top + 1]; top + 1];
    #[allow(clippy::needless_range_loop)]
    for m in 0..=top {
        for mp in m..=top {
            let power = (m + mp) as f64 / 2.0;
            let integral = jackson_integral(
                |x| radial_weight(x, power, cfg.normalization, qp, cfg.radial_tol),
                qp,
                cfg.radial_tol,
            )?;
            let v = integral / (q_factorial(m, qp) * q_factorial(mp, qp)).sqrt();
            radial[m][mp] = v;
            radial[mp][m] = v;
        }
    }
    let prefactor = match cfg.measure {
        MeasurePrefactor::PerPlane => PI.powi(-(n as i32)),
        MeasurePrefactor::AsPrinted => PI.powi(-2),
    };
    let sector = SafeSector::new(space, cfg.margin);
    let labels: Vec<_> = sector.indices().map(|k| space.decode(k)).collect();
    let mut result = ResolvedIdentity {
        max_diagonal_deviation: 0.0,
        max_off_diagonal: 0.0,
    };
    for a in &labels {
        for b in &labels {
            let mut entry = Complex64::new(prefactor, 0.0);
            for mode in 1..=n {
                let (m, mp) = (a.get(mode), b.get(mode));
                entry *= angular[m + cutoff - mp] * 0.5 * radial[m][mp];
            }
            if a == b {
                result.max_diagonal_deviation = result.max_diagonal_deviation.max((entry - 1.0).norm());
            } else {
                result.max_off_diagonal = result.max_off_diagonal.max(entry.norm());
            }
        }
    }
    Ok(result)
}

/// Completeness of the coherent states as a residual report.
pub fn completeness_check(space: &FockSpace, cfg: &CompletenessConfig, qp: &QParam) -> Result<CheckReport> {
    let sector = SafeSector::new(space, cfg.margin);
    let measure = match cfg.measure {
        MeasurePrefactor::PerPlane => "1/pi^n",
        MeasurePrefactor::AsPrinted => "1/pi^2 (printed)",
    };
    let norm = match cfg.normalization {
        Normalization::Corrected => "exp_q^(-1/2)",
        Normalization::AsPrinted => "exp_q (printed)",
        Normalization::Unnormalized => "1",
    };
    let id = format!("int |z><z| mu d^2z = I, measure {measure}, c = {norm}");
    let equation = "Eq(15)";
    match resolved_identity(space, cfg, qp) {
        Ok(r) => Ok(CheckReport::new(id, equation, &sector, r.max_deviation(), tolerance::COMPLETENESS)
            .with_note(format!("max off-diagonal {:.1e}", r.max_off_diagonal))),
        Err(err @ (QoscError::Pole { .. } | QoscError::Evaluation { .. })) => {
            Ok(CheckReport::failed(id, equation, &err, tolerance::COMPLETENESS)
                .with_sector(space.cutoff(), cfg.margin, sector.len()))
        }
        Err(err) => Err(err),
    }
}
