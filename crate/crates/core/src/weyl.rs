//! q-exponentials of operators and the reordering identities that lead to
//! the q-deformed Weyl-Heisenberg relation.
//!
//! Identities whose left side runs `exp_q(t a†_i)` into `exp_q(s a_i)` need
//! intermediate occupations above the cutoff. They are evaluated on a working
//! space enlarged by guard levels, chosen from an explicit bound on the
//! dropped amplitudes, and compared on the original sector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QoscError, Result};
use crate::fock::{
    check_relation, scale_product_label, CheckReport, FockSpace, ModeOperators, OpProduct, OperatorMatrix, SafeSector,
};
use crate::qcore::{q_derivative, Polynomial, QParam, MAX_TERMS};
use crate::tolerance;

/// Largest `|s_i|`, `|t_i|` accepted by [`WeylParams`].
pub const PARAMETER_WINDOW: f64 = 0.5;

/// `exp_q(c A) = sum_k (c A)^k / [k]!`.
///
/// Terminates exactly when a term vanishes (nilpotent `A`), otherwise once
/// the largest entry of a term falls below `tol` after at least five terms.
pub fn qexp_operator(c: Complex64, a: &OperatorMatrix, qp: &QParam, tol: f64) -> Result<OperatorMatrix> {
    qexp_operator_with_terms(c, a, qp, tol).map(|(m, _)| m)
}

/// As [`qexp_operator`], also returning the index of the first term not
/// added (the vanishing term for nilpotent `A`).
pub fn qexp_operator_with_terms(
    c: Complex64,
    a: &OperatorMatrix,
    qp: &QParam,
    tol: f64,
) -> Result<(OperatorMatrix, usize)> {
    let step = a.scale(c);
    let mut sum = OperatorMatrix::identity(a.dim());
    let mut term = sum.clone();
    for k in 1..MAX_TERMS {
        term = term.mul(&step)?.scale_real(1.0 / qp.int(k));
        if term.nnz() == 0 {
            return Ok((sum, k));
        }
        sum = sum.add(&term)?;
        if k >= 5 && term.max_abs() < tol {
            return Ok((sum, k + 1));
        }
    }
    Err(QoscError::Convergence {
        what: "operator q-exponential",
        terms: MAX_TERMS,
    })
}

/// `f(A) = sum_k f_k A^k`
pub fn polynomial_of(f: &Polynomial, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    let dim = a.dim();
    let mut out = OperatorMatrix::zeros(dim);
    for &c in f.coefficients().iter().rev() {
        out = out.mul(a)?.add(&OperatorMatrix::identity(dim).scale(c))?;
    }
    Ok(out)
}

fn require_margin(margin: usize, required: usize) -> Result<()> {
    if margin < required {
        return Err(QoscError::MarginInsufficient { margin, required });
    }
    Ok(())
}

const OPERATOR_TOL: f64 = 1e-18;

/// `a_i f(a†_i) = f(q a†_i) a_i + (Df)(a†_i) Q_{i+1} ... Q_n`; needs
/// `margin >= deg f + 1`.
pub fn check_shift_identity(
    mode: usize,
    f: &Polynomial,
    space: &FockSpace,
    qp: &QParam,
    margin: usize,
) -> Result<CheckReport> {
    space.check_mode(mode)?;
    require_margin(margin, f.degree().unwrap_or(0) + 1)?;
    let ops = ModeOperators::new(space, qp)?;
    let (a, ad) = (ops.annihilator(mode), ops.creator(mode));
    let lhs = a.mul(&polynomial_of(f, ad)?)?;
    let f_q = polynomial_of(&f.rescale(Complex64::new(qp.q(), 0.0)), ad)?;
    let df = polynomial_of(&q_derivative(f, qp), ad)?;
    let rhs = f_q.mul(a)?.add(&df.mul(ops.scale_product(mode + 1))?)?;
    let deg = f.degree().map_or("0".to_string(), |d| d.to_string());
    check_relation(
        format!(
            "a{mode} f(a+{mode}) = f(q a+{mode}) a{mode} + Df(a+{mode}) {}, deg f = {deg}",
            scale_product_label(mode + 1, space.n_modes())
        ),
        "Eq(18)",
        &lhs,
        &rhs,
        &SafeSector::new(space, margin),
        tolerance::SHIFT,
    )
}

/// `a_i exp_q(t a†_i) = exp_q(q t a†_i) a_i + t exp_q(t a†_i) Q_{i+1} ... Q_n`.
pub fn check_exp_shift_identity(
    mode: usize,
    t: Complex64,
    space: &FockSpace,
    qp: &QParam,
    margin: usize,
) -> Result<CheckReport> {
    space.check_mode(mode)?;
    require_margin(margin, 1)?;
    let ops = ModeOperators::new(space, qp)?;
    let (a, ad) = (ops.annihilator(mode), ops.creator(mode));
    let e_t = qexp_operator(t, ad, qp, OPERATOR_TOL)?;
    let e_qt = qexp_operator(t * qp.q(), ad, qp, OPERATOR_TOL)?;
    let lhs = a.mul(&e_t)?;
    let rhs = e_qt.mul(a)?.add(&e_t.mul(ops.scale_product(mode + 1))?.scale(t))?;
    check_relation(
        format!(
            "a{mode} exp_q(t a+{mode}) = exp_q(qt a+{mode}) a{mode} + t exp_q(t a+{mode}) {}",
            scale_product_label(mode + 1, space.n_modes())
        ),
        "Eq(19)",
        &lhs,
        &rhs,
        &SafeSector::new(space, margin),
        tolerance::POWER,
    )
}

/// `a_i^m exp_q(t a†_i) = exp_q(t a†_i) (a_i + t Q_i ... Q_n)^m`; needs
/// `margin >= m`.
pub fn check_power_identity(
    mode: usize,
    t: Complex64,
    m: usize,
    space: &FockSpace,
    qp: &QParam,
    margin: usize,
) -> Result<CheckReport> {
    space.check_mode(mode)?;
    require_margin(margin, m)?;
    let ops = ModeOperators::new(space, qp)?;
    let (a, ad) = (ops.annihilator(mode), ops.creator(mode));
    let e_t = qexp_operator(t, ad, qp, OPERATOR_TOL)?;
    let shifted = a.add_scaled(ops.scale_product(mode), t)?;
    let lhs = a.pow(m).mul(&e_t)?;
    let rhs = e_t.mul(&shifted.pow(m))?;
    check_relation(
        format!(
            "a{mode}^{m} exp_q(t a+{mode}) = exp_q(t a+{mode}) (a{mode} + t {})^{m}",
            scale_product_label(mode, space.n_modes())
        ),
        "Eq(20)",
        &lhs,
        &rhs,
        &SafeSector::new(space, margin),
        tolerance::POWER,
    )
}

/// `a_i Q_i - q Q_i a_i = 0` on the full basis.
pub fn check_q_commutation(mode: usize, space: &FockSpace, qp: &QParam) -> Result<CheckReport> {
    let ops = ModeOperators::new(space, qp)?;
    let lhs = ops.annihilator(mode).mul(ops.scale(mode))?;
    let rhs = ops.scale(mode).mul(ops.annihilator(mode))?.scale_real(qp.q());
    check_relation(
        format!("a{mode} Q{mode} - q Q{mode} a{mode} = 0"),
        "Eq(22)",
        &lhs,
        &rhs,
        &SafeSector::full(space),
        tolerance::Q_COMMUTATION,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylParams {
    s: Vec<Complex64>,
    t: Vec<Complex64>,
    qp: QParam,
}

impl WeylParams {
    pub fn new(s: Vec<Complex64>, t: Vec<Complex64>, qp: QParam) -> Result<Self> {
        if s.len() != t.len() {
            return Err(QoscError::InvalidParameter(format!(
                "{} values of s but {} values of t",
                s.len(),
                t.len()
            )));
        }
        if let Some(v) = s.iter().chain(&t).find(|v| v.norm() > PARAMETER_WINDOW) {
            return Err(QoscError::InvalidParameter(format!(
                "|{v}| exceeds the parameter window {PARAMETER_WINDOW}"
            )));
        }
        Ok(WeylParams { s, t, qp })
    }

    pub fn s(&self) -> &[Complex64] {
        &self.s
    }

    pub fn t(&self) -> &[Complex64] {
        &self.t
    }

    pub fn qp(&self) -> &QParam {
        &self.qp
    }
}

/// Order of the mode factors in the products over `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `i = 1, ..., n` left to right.
    Ascending,
    /// `i = n, ..., 1` left to right.
    Descending,
}

fn ln_q_factorials(qp: &QParam, up_to: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(0.0);
    for k in 1..=up_to {
        out.push(out[k - 1] + qp.int(k).ln());
    }
    out
}

/// Upper bound on the amplitude lost when `exp_q(s a_i) exp_q(t a†_i)`
/// passes through occupations above `work_cutoff`, for sector columns and
/// rows at most `top` quanta per mode.
fn excursion_bound(s: f64, t: f64, top: usize, work_cutoff: usize, qp: &QParam) -> f64 {
    if s == 0.0 || t == 0.0 {
        return 0.0;
    }
    let horizon = work_cutoff + 2_000;
    let lf = ln_q_factorials(qp, horizon);
    let (ls, lt) = (s.ln(), t.ln());
    let mut total = 0.0;
    for level in work_cutoff + 1..=horizon {
        let mut worst = f64::NEG_INFINITY;
        for from in 0..=top {
            for to in 0..=top {
                let ln = (level - from) as f64 * lt + (level - to) as f64 * ls + lf[level]
                    - lf[level - from]
                    - lf[level - to]
                    - 0.5 * (lf[from] + lf[to]);
                worst = worst.max(ln);
            }
        }
        let term = worst.exp();
        total += term;
        if term < 1e-30 * total.max(1e-300) || term < 1e-300 {
            break;
        }
    }
    total
}

/// Extra occupation levels needed so the truncated evaluation of the Weyl
/// identities stays below `tol * 1e-4` on the sector.
pub fn guard_levels(params: &WeylParams, cutoff: usize, margin: usize, tol: f64) -> usize {
    let top = cutoff.saturating_sub(margin);
    let target = tol * 1e-4;
    (0..=256)
        .find(|&g| {
            params
                .s
                .iter()
                .zip(&params.t)
                .map(|(s, t)| excursion_bound(s.norm(), t.norm(), top, cutoff + g, &params.qp))
                .sum::<f64>()
                <= target
        })
        .unwrap_or(256)
}

/// Residual reports for the per-mode reordering identities and the full
/// Weyl-Heisenberg relation in each requested ordering.
pub fn check_weyl_relation(
    params: &WeylParams,
    space: &FockSpace,
    margin: usize,
    orderings: &[Ordering],
) -> Result<Vec<CheckReport>> {
    let n = space.n_modes();
    if params.s.len() != n {
        return Err(QoscError::ModeCount {
            expected: n,
            got: params.s.len(),
        });
    }
    require_margin(margin, 1)?;
    let qp = &params.qp;
    let guard = guard_levels(params, space.cutoff(), margin, tolerance::WEYL);
    let work = FockSpace::new(n, space.cutoff() + guard)?;
    let sector = SafeSector::new(&work, margin + guard);
    let ops = ModeOperators::new(&work, qp)?;

    struct ModeFactors {
        e_a: OperatorMatrix,
        e_ad: OperatorMatrix,
        e_scale: OperatorMatrix,
        e_shifted: OperatorMatrix,
    }
    let factors: Vec<ModeFactors> = (1..=n)
        .map(|i| {
            let (s, t) = (params.s[i - 1], params.t[i - 1]);
            let shifted = ops.annihilator(i).add_scaled(ops.scale_product(i), t)?;
            Ok(ModeFactors {
                e_a: qexp_operator(s, ops.annihilator(i), qp, OPERATOR_TOL)?,
                e_ad: qexp_operator(t, ops.creator(i), qp, OPERATOR_TOL)?,
                e_scale: qexp_operator(s * t, ops.scale_product(i), qp, OPERATOR_TOL)?,
                e_shifted: qexp_operator(s, &shifted, qp, OPERATOR_TOL)?,
            })
        })
        .collect::<Result<_>>()?;

    let note = format!("guard levels {guard}");
    let relabel = |r: CheckReport| {
        let columns = SafeSector::new(space, margin).len();
        r.with_sector(space.cutoff(), margin, columns).with_note(note.clone())
    };
    let mut out = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let i = i + 1;
        let q_i = scale_product_label(i, n);
        let lhs = OpProduct::new(vec![&f.e_a, &f.e_ad]);
        let rhs = OpProduct::new(vec![&f.e_ad, &f.e_shifted]);
        out.push(relabel(check_relation(
            format!("exp_q(s{i} a{i}) exp_q(t{i} a+{i}) = exp_q(t{i} a+{i}) exp_q(s{i} a{i} + s{i} t{i} {q_i})"),
            "Eq(21)",
            &lhs,
            &rhs,
            &sector,
            tolerance::WEYL,
        )?));
        let rhs = OpProduct::new(vec![&f.e_ad, &f.e_scale, &f.e_a]);
        out.push(relabel(check_relation(
            format!("exp_q(s{i} a{i}) exp_q(t{i} a+{i}) = exp_q(t{i} a+{i}) exp_q(s{i} t{i} {q_i}) exp_q(s{i} a{i})"),
            "Eq(22)",
            &lhs,
            &rhs,
            &sector,
            tolerance::WEYL,
        )?));
    }
    for &ordering in orderings {
        let modes: Vec<usize> = match ordering {
            Ordering::Ascending => (0..n).collect(),
            Ordering::Descending => (0..n).rev().collect(),
        };
        let lhs = OpProduct::new(modes.iter().flat_map(|&k| [&factors[k].e_a, &factors[k].e_ad]).collect());
        let rhs = OpProduct::new(
            modes
                .iter()
                .flat_map(|&k| [&factors[k].e_ad, &factors[k].e_scale, &factors[k].e_a])
                .collect(),
        );
        let label = match ordering {
            Ordering::Ascending => "ascending",
            Ordering::Descending => "descending",
        };
        out.push(relabel(check_relation(
            format!("prod_i exp_q(s a) exp_q(t a+) = prod_i exp_q(t a+) exp_q(st Q...) exp_q(s a), {label}"),
            "Eq(23)",
            &lhs,
            &rhs,
            &sector,
            tolerance::WEYL,
        )?));
    }
    Ok(out)
}
