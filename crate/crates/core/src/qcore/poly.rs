use num_complex::Complex64;

use super::QParam;

/// Polynomial with complex coefficients, `coefficients[k]` multiplying `x^k`.
///
/// Trailing zero coefficients are trimmed on construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); k + 1];
        coefficients[k] = c;
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `f(c x)`
    pub fn rescale(&self, c: Complex64) -> Polynomial {
        let mut scale = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coefficients.len());
        for &a in &self.coefficients {
            out.push(a * scale);
            scale *= c;
        }
        Polynomial::new(out)
    }

    /// Truncated `exp_q(t x)`: `sum_{k<=degree} t^k x^k / [k]!`.
    pub fn q_exp_truncated(t: Complex64, degree: usize, qp: &QParam) -> Polynomial {
        let mut coefficients = Vec::with_capacity(degree + 1);
        let mut c = Complex64::new(1.0, 0.0);
        coefficients.push(c);
        for k in 1..=degree {
            c = c * t / qp.int(k);
            coefficients.push(c);
        }
        Polynomial::new(coefficients)
    }
}

/// q-derivative on coefficients: `x^n -> [n] x^(n-1)`.
pub fn q_derivative(f: &Polynomial, qp: &QParam) -> Polynomial {
    Polynomial::new(
        f.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * qp.int(n))
            .collect(),
    )
}
