//! Scalar q-arithmetic: q-numbers, q-factorials, the q-exponential in series
//! and product form, the q-derivative on polynomials and the Jackson integral
//! over `[0, 1/(1-q)]`.

mod dd;
mod poly;

pub use poly::{q_derivative, Polynomial};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QoscError, Result};
use dd::{CDd, Dd};

/// Default truncation tolerance for series and products.
pub const DEFAULT_SERIES_TOL: f64 = 1e-15;
/// Hard cap on the number of series terms or quadrature nodes.
pub const MAX_TERMS: usize = 10_000;
const MIN_TERMS: usize = 5;
/// Below this factor size the remaining product is summed in closed form.
const PRODUCT_TAIL_SWITCH: f64 = 1e-3;

/// Deformation parameter, restricted to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam {
    q: f64,
    radius: f64,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QoscError::InvalidQ(q));
        }
        Ok(QParam {
            q,
            radius: 1.0 / (1.0 - q),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Convergence radius 1/(1-q) of the q-exponential series.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `q^k` for an integer exponent.
    pub fn pow(&self, k: usize) -> f64 {
        self.q.powi(k as i32)
    }

    /// `[n]` for a nonnegative integer.
    pub fn int(&self, n: usize) -> f64 {
        q_number(n as f64, self)
    }
}

impl TryFrom<f64> for QParam {
    type Error = QoscError;
    fn try_from(q: f64) -> Result<Self> {
        QParam::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(qp: QParam) -> f64 {
        qp.q
    }
}

/// `[x] = (q^x - 1)/(q - 1)`.
///
/// Evaluated as `expm1(x ln q)/(q - 1)` so the q -> 1 limit keeps full
/// relative precision; `q - 1` is exact for q in [1/2, 1).
pub fn q_number(x: f64, qp: &QParam) -> f64 {
    let qm1 = qp.q - 1.0;
    (x * qm1.ln_1p()).exp_m1() / qm1
}

/// `[m]! = [1][2]...[m]`, with `[0]! = 1`.
pub fn q_factorial(m: usize, qp: &QParam) -> f64 {
    (1..=m).map(|k| qp.int(k)).product()
}

/// `exp_q(x) = sum_n x^n/[n]!`, valid for `|x| < 1/(1-q)`.
///
/// Terms are accumulated in double-double precision. Summation stops once at
/// least five terms are in and the geometric bound on the remaining tail is
/// below `tol * |partial sum|`.
pub fn q_exp_series(x: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    let modulus = x.norm();
    // Terms decay like (|x|/radius)^n; reject inputs whose tail cannot fall
    // below tol within the term cap as outside the usable domain.
    let reachable = (MAX_TERMS as f64) * (modulus / qp.radius).ln() <= tol.max(f64::MIN_POSITIVE).ln();
    if modulus.is_nan() || modulus >= qp.radius || !reachable {
        return Err(QoscError::Domain {
            modulus,
            radius: qp.radius,
        });
    }
    let mut sum = CDd::ONE;
    let mut term = CDd::ONE;
    // q^n and [n+1] = 1 + q + ... + q^n
    let mut q_pow = Dd::ONE;
    let mut q_num = Dd::ONE;
    for n in 0..MAX_TERMS {
        // term currently holds x^n/[n]!; next is x^(n+1)/[n+1]!
        term = term.mul_c64(x.re, x.im).div_real(q_num);
        sum = sum.add(term);
        q_pow = q_pow.mul_f64(qp.q);
        q_num = q_num + q_pow;
        if n + 2 >= MIN_TERMS {
            let ratio = modulus / q_num.to_f64();
            if ratio < 1.0 {
                let tail = term.abs_approx() * ratio / (1.0 - ratio);
                if tail <= tol * sum.abs_approx() {
                    return Ok(Complex64::new(sum.re.to_f64(), sum.im.to_f64()));
                }
            }
        }
    }
    Err(QoscError::Convergence {
        what: "q-exponential series",
        terms: MAX_TERMS,
    })
}

/// `1/exp_q(x) = prod_{n>=0} (1 - (1-q) q^n x)`.
///
/// Finite everywhere (it vanishes on the poles of `exp_q`). Once the factor
/// deviation drops below 1e-3 the remaining product is folded in through
/// `ln prod_{n>=N}(1 - e q^(n-N)) = -sum_k e^k / (k (1 - q^k))`.
pub fn q_exp_inverse_product(x: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    let (prod, _) = inverse_product(x, qp, tol)?;
    Ok(prod)
}

/// Returns the truncated product together with the smallest factor modulus.
fn inverse_product(x: Complex64, qp: &QParam, tol: f64) -> Result<(Complex64, (usize, f64))> {
    let q = qp.q;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut eps = x * (1.0 - q);
    let mut smallest = (0usize, f64::INFINITY);
    let mut n = 0usize;
    while eps.norm() > PRODUCT_TAIL_SWITCH {
        let factor = Complex64::new(1.0, 0.0) - eps;
        if factor.norm() < smallest.1 {
            smallest = (n, factor.norm());
        }
        prod *= factor;
        eps *= q;
        n += 1;
        if n > MAX_TERMS * 100 {
            return Err(QoscError::Convergence {
                what: "q-exponential product",
                terms: n,
            });
        }
    }
    let ln_q = (q - 1.0).ln_1p();
    let mut log_tail = Complex64::new(0.0, 0.0);
    let mut eps_k = eps;
    for k in 1..=MAX_TERMS {
        let one_minus_qk = -(k as f64 * ln_q).exp_m1();
        let term = eps_k / (k as f64 * one_minus_qk);
        log_tail -= term;
        if term.norm() <= tol * 1e-3 || eps_k.norm() == 0.0 {
            break;
        }
        eps_k *= eps;
    }
    if smallest.1 > (1.0 - eps.norm()) {
        smallest = (n, 1.0 - eps.norm());
    }
    Ok((prod * log_tail.exp(), smallest))
}

/// `exp_q(x) = prod_{n>=0} 1/(1 - (1-q) q^n x)`.
///
/// Fails with a pole error when some factor `1 - (1-q) q^n x` is within `tol`
/// of zero.
pub fn q_exp_product(x: Complex64, qp: &QParam, tol: f64) -> Result<Complex64> {
    let (prod, (index, denominator)) = inverse_product(x, qp, tol)?;
    if denominator <= tol {
        return Err(QoscError::Pole { index, denominator });
    }
    Ok(prod.inv())
}

/// Jackson integral `int_0^{1/(1-q)} f(x) d_q x
///   = (1/(1-q)) (1-q) sum_k q^k f(q^k/(1-q))`.
///
/// Nodes are consumed until `|term| <= tol * |sum|` (at least five nodes).
/// Any evaluation error of `f` is propagated.
pub fn jackson_integral<F>(f: F, qp: &QParam, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let scale = qp.radius * (1.0 - qp.q);
    let mut sum = 0.0;
    let mut weight = 1.0;
    for k in 0..MAX_TERMS {
        let node = qp.radius * weight;
        let value = f(node)?;
        if !value.is_finite() {
            return Err(QoscError::Evaluation {
                x: node,
                reason: format!("non-finite value {value}"),
            });
        }
        let term = scale * weight * value;
        sum += term;
        if k + 1 >= MIN_TERMS && term.abs() <= tol * sum.abs() {
            return Ok(sum);
        }
        weight *= qp.q;
    }
    Err(QoscError::Convergence {
        what: "Jackson integral",
        terms: MAX_TERMS,
    })
}

/// The weight `x^n / exp_q(qx)` whose Jackson integral over `[0, 1/(1-q)]`
/// is `[n]!`. `exp_q(qx)^{-1}` comes from the product form.
pub fn factorial_weight(n: usize, x: f64, qp: &QParam, tol: f64) -> Result<f64> {
    let inv = q_exp_inverse_product(Complex64::new(qp.q * x, 0.0), qp, tol)?;
    Ok(x.powi(n as i32) * inv.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(q: f64) -> QParam {
        QParam::new(q).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_q_outside_unit_interval() {
        for q in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(QParam::new(q).is_err());
        }
        assert!(qp(0.3).radius() > 1.0);
    }

    #[test]
    fn q_number_values() {
        let p = qp(0.5);
        assert_eq!(q_number(0.0, &p), 0.0);
        assert!((q_number(1.0, &p) - 1.0).abs() < 1e-15);
        assert!((q_number(3.0, &p) - (1.0 + 0.5 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn q_number_is_bounded_by_radius() {
        let p = qp(0.7);
        for k in 0..200 {
            assert!(q_number(k as f64 * 0.37, &p) < p.radius());
        }
    }

    #[test]
    fn q_factorial_values() {
        let p = qp(0.5);
        assert_eq!(q_factorial(0, &p), 1.0);
        assert!((q_factorial(1, &p) - 1.0).abs() < 1e-15);
        assert!((q_factorial(3, &p) - 1.0 * 1.5 * 1.75).abs() < 1e-14);
    }

    #[test]
    fn series_at_zero_is_one() {
        let v = q_exp_series(c(0.0), &qp(0.5), 1e-15).unwrap();
        assert_eq!(v, c(1.0));
    }

    #[test]
    fn series_against_brute_force() {
        let p = qp(0.5);
        // 60 terms of x^n/[n]! summed directly
        let mut brute = 0.0;
        let mut fact = 1.0;
        for n in 0..60 {
            if n > 0 {
                fact *= (1.0 - 0.5f64.powi(n)) / 0.5;
            }
            brute += 1.0 / fact;
        }
        let v = q_exp_series(c(1.0), &p, 1e-15).unwrap();
        assert!((v.re - brute).abs() < 1e-12);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn series_rejects_radius() {
        for x in [1.999, 2.0] {
            match q_exp_series(c(x), &qp(0.5), 1e-15) {
                Err(QoscError::Domain { radius, .. }) => assert_eq!(radius, 2.0),
                other => panic!("expected domain error, got {other:?}"),
            }
        }
        assert!(q_exp_series(c(1.99), &qp(0.5), 1e-15).is_ok());
        assert!(q_exp_series(Complex64::new(0.0, -2.5), &qp(0.5), 1e-15).is_err());
    }

    #[test]
    fn product_values_and_pole() {
        let p = qp(0.5);
        assert_eq!(q_exp_product(c(0.0), &p, 1e-12).unwrap(), c(1.0));
        let s = q_exp_series(c(1.0), &p, 1e-15).unwrap();
        let pr = q_exp_product(c(1.0), &p, 1e-12).unwrap();
        assert!((s - pr).norm() < 1e-12);
        assert!(matches!(
            q_exp_product(c(2.0), &p, 1e-12),
            Err(QoscError::Pole { index: 0, .. })
        ));
        // second pole of the grid: (1-q) q x = 1
        assert!(matches!(
            q_exp_product(c(4.0), &p, 1e-12),
            Err(QoscError::Pole { index: 1, .. })
        ));
        // beyond the series radius but off the pole grid the product is finite
        assert!(q_exp_product(c(3.0), &p, 1e-12).unwrap().re.is_finite());
    }

    #[test]
    fn inverse_product_vanishes_on_pole() {
        let p = qp(0.5);
        let v = q_exp_inverse_product(c(2.0), &p, 1e-15).unwrap();
        assert_eq!(v, c(0.0));
    }

    #[test]
    fn product_near_q_one_uses_tail_formula() {
        let p = qp(1.0 - 1e-6);
        let v = q_exp_product(c(1.5), &p, 1e-12).unwrap();
        assert!((v.re - 1.5f64.exp()).abs() < 1e-4 * 1.5f64.exp());
    }

    #[test]
    fn jackson_factorials() {
        for (q, n, tol) in [(0.5, 0, 1e-12), (0.5, 3, 1e-10), (0.9, 5, 1e-10)] {
            let p = qp(q);
            let v = jackson_integral(|x| factorial_weight(n, x, &p, 1e-16), &p, 1e-16).unwrap();
            let expect = q_factorial(n, &p);
            assert!((v - expect).abs() < tol * expect, "q={q} n={n}: {v} vs {expect}");
        }
        let p = qp(0.5);
        let v = jackson_integral(|x| factorial_weight(3, x, &p, 1e-16), &p, 1e-16).unwrap();
        assert!((v - 2.625).abs() < 1e-10);
    }

    #[test]
    fn jackson_propagates_failure() {
        let p = qp(0.5);
        let r = jackson_integral(
            |x| {
                if x < 0.5 {
                    Err(QoscError::Evaluation {
                        x,
                        reason: "boom".into(),
                    })
                } else {
                    Ok(1.0)
                }
            },
            &p,
            1e-15,
        );
        assert!(matches!(r, Err(QoscError::Evaluation { .. })));
    }

    #[test]
    fn repeated_calls_are_bitwise_identical() {
        let p = qp(0.9);
        let x = Complex64::new(-3.1, 4.7);
        let a = q_exp_series(x, &p, 1e-15).unwrap();
        let b = q_exp_series(x, &p, 1e-15).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
        let a = q_exp_product(x, &p, 1e-15).unwrap();
        let b = q_exp_product(x, &p, 1e-15).unwrap();
        assert_eq!(a, b);
    }
}
