use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::LinearMap;
use super::space::SafeSector;
use crate::error::{QoscError, Result};

/// Whether a check is expected to reproduce an identity or to expose a
/// mismatch (used for printed formulas that disagree with the numerics).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Match,
    Mismatch,
}

mod float_or_label {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Label(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            v if v.is_finite() => Repr::Number(v),
            v if v.is_nan() => Repr::Label("nan".into()),
            v if v > 0.0 => Repr::Label("inf".into()),
            _ => Repr::Label("-inf".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Label(l) => match l.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("unexpected residual '{other}'"))),
            },
        }
    }
}

/// Outcome of one identity verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// Equation tag, e.g. `Eq(7)`.
    pub equation: String,
    pub cutoff: usize,
    pub margin: usize,
    pub columns: usize,
    /// Infinite when the check could not be evaluated; json writes it as
    /// the string "inf".
    #[serde(with = "float_or_label")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub expect: Expectation,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(
        id: impl Into<String>,
        equation: impl Into<String>,
        sector: &SafeSector,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        Self::scalar(id, equation, max_residual, tolerance)
            .with_sector(sector.space().cutoff(), sector.margin(), sector.len())
    }

    /// Report for a check that is not tied to a Fock sector.
    pub fn scalar(
        id: impl Into<String>,
        equation: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        let mut r = CheckReport {
            id: id.into(),
            equation: equation.into(),
            cutoff: 0,
            margin: 0,
            columns: 0,
            max_residual,
            tolerance,
            expect: Expectation::Match,
            passed: false,
            note: None,
        };
        r.evaluate();
        r
    }

    /// Report for a check that could not be evaluated at all.
    pub fn failed(id: impl Into<String>, equation: impl Into<String>, err: &QoscError, tolerance: f64) -> Self {
        Self::scalar(id, equation, f64::INFINITY, tolerance).with_note(err.to_string())
    }

    pub fn with_sector(mut self, cutoff: usize, margin: usize, columns: usize) -> Self {
        self.cutoff = cutoff;
        self.margin = margin;
        self.columns = columns;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn expecting(mut self, expect: Expectation) -> Self {
        self.expect = expect;
        self.evaluate();
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.evaluate();
        self
    }

    fn evaluate(&mut self) {
        let within = self.max_residual < self.tolerance;
        self.passed = match self.expect {
            Expectation::Match => within,
            Expectation::Mismatch => !within,
        };
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<8} {:<48} M={:<3} margin={:<3} residual={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.equation,
            self.id,
            self.cutoff,
            self.margin,
            self.max_residual,
            self.tolerance
        )?;
        if self.expect == Expectation::Mismatch {
            write!(f, " (expected mismatch)")?;
        }
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

/// Largest sector-restricted column norm of `lhs - rhs`, over sector columns.
pub fn sector_residual(lhs: &dyn LinearMap, rhs: &dyn LinearMap, sector: &SafeSector) -> Result<f64> {
    let dim = sector.space().dim();
    for d in [lhs.dim(), rhs.dim()] {
        if d != dim {
            return Err(QoscError::DimensionMismatch { left: d, right: dim });
        }
    }
    let rows: Vec<bool> = (0..dim).map(|i| sector.contains(i)).collect();
    let mut worst = 0.0f64;
    let mut unit = vec![Complex64::new(0.0, 0.0); dim];
    for col in sector.indices() {
        unit[col] = Complex64::new(1.0, 0.0);
        let l = lhs.apply(&unit);
        let r = rhs.apply(&unit);
        unit[col] = Complex64::new(0.0, 0.0);
        let norm = l
            .iter()
            .zip(&r)
            .zip(&rows)
            .filter(|(_, &keep)| keep)
            .map(|((a, b), _)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(norm);
    }
    Ok(worst)
}

/// Compares `lhs` and `rhs` on `sector`; passes iff the residual is below
/// `tolerance`.
pub fn check_relation(
    id: impl Into<String>,
    equation: impl Into<String>,
    lhs: &dyn LinearMap,
    rhs: &dyn LinearMap,
    sector: &SafeSector,
    tolerance: f64,
) -> Result<CheckReport> {
    let residual = sector_residual(lhs, rhs, sector)?;
    Ok(CheckReport::new(id, equation, sector, residual, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockSpace, OperatorMatrix};

    #[test]
    fn identity_against_itself() {
        let s = FockSpace::new(2, 3).unwrap();
        let id = OperatorMatrix::identity(s.dim());
        let r = check_relation("I = I", "-", &id, &id, &SafeSector::full(&s), 1e-12).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert!(r.passed);
        assert_eq!(r.columns, 16);
    }

    #[test]
    fn dimension_mismatch() {
        let s = FockSpace::new(2, 3).unwrap();
        let a = OperatorMatrix::identity(16);
        let b = OperatorMatrix::identity(9);
        assert!(matches!(
            check_relation("x", "-", &a, &b, &SafeSector::full(&s), 1e-12),
            Err(QoscError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residual_ignores_rows_outside_sector() {
        let s = FockSpace::new(1, 3).unwrap();
        // differs only in row 3, which is outside the margin-1 sector
        let a = OperatorMatrix::from_triplets(4, vec![(3, 0, Complex64::new(5.0, 0.0))]);
        let z = OperatorMatrix::zeros(4);
        let r = check_relation("x", "-", &a, &z, &SafeSector::new(&s, 1), 1e-12).unwrap();
        assert!(r.passed);
        let r = check_relation("x", "-", &a, &z, &SafeSector::full(&s), 1e-12).unwrap();
        assert!(!r.passed);
        assert_eq!(r.max_residual, 5.0);
    }

    #[test]
    fn infinite_residual_round_trips() {
        let r = CheckReport::scalar("x", "-", f64::INFINITY, 1e-10).expecting(Expectation::Mismatch);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"max_residual\":\"inf\""), "{json}");
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let finite: CheckReport = serde_json::from_str(&serde_json::to_string(&CheckReport::scalar("x", "-", 1.5e-13, 1e-10)).unwrap()).unwrap();
        assert_eq!(finite.max_residual, 1.5e-13);
    }

    #[test]
    fn mismatch_expectation_inverts_verdict() {
        let r = CheckReport::scalar("x", "-", 0.5, 1e-10).expecting(Expectation::Mismatch);
        assert!(r.passed);
        let r = CheckReport::scalar("x", "-", 0.0, 1e-10).expecting(Expectation::Mismatch);
        assert!(!r.passed);
    }
}
