use crate::error::{Error, Result};
use crate::laplace::GrowthSpec;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Every solution with this growth vanishes.
    UniqueForced,
    /// A nonzero solution with this growth exists.
    NontrivialExists,
    /// Neither is established.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UniqueForced => "UniqueForced",
            Verdict::NontrivialExists => "NontrivialExists",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub verdict: Verdict,
    pub theorem: &'static str,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.verdict, self.theorem)
    }
}

/// Uniqueness verdict for unilateral solutions bounded by
/// `exp(theta1 x^q + theta2 |y|^q)` in the spacelike quarter-plane.
pub fn regime_classify(q: f64, theta1: f64, theta2: f64) -> Result<Regime> {
    let spec = GrowthSpec::new(q, theta1, theta2)?;
    let unique = |ok: bool, theorem| Regime {
        verdict: if ok { Verdict::UniqueForced } else { Verdict::Unknown },
        theorem,
    };
    Ok(if q == 1.0 {
        if theta1 * theta2 < 1.0 {
            Regime {
                verdict: Verdict::UniqueForced,
                theorem: "Thm-main-1-0",
            }
        } else {
            Regime {
                verdict: Verdict::NontrivialExists,
                theorem: "Thm-main-1-1",
            }
        }
    } else if q < 0.5 {
        unique(true, "Thm-main-2")
    } else if q == 0.5 {
        unique(theta1 * theta2 < 2.0 * PI, "Thm-main-3")
    } else {
        let qpp = spec.qpp.expect("q > 1/2");
        let lhs = theta1.powf(1.0 / q) * theta2.powf(1.0 / qpp);
        let rhs = (1.0 / q).powf(1.0 / q) * (1.0 / qpp).powf(1.0 / qpp) * (PI / (2.0 * q)).sin().powi(2);
        unique(lhs < rhs, "Thm-main-1-2")
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YStar {
    pub y_star: f64,
    pub psi_min: f64,
    pub e: f64,
}

fn qpp_of(q: f64) -> Result<f64> {
    if !(q > 0.5 && q < 1.0) {
        return Err(Error::Domain(format!("q must lie in (1/2, 1), got {q}")));
    }
    Ok(q / (2.0 * q - 1.0))
}

/// `psi(y) = theta2 |y|^{q''} - |y| sigma'`.
pub fn psi(y: f64, sigma_prime: f64, theta2: f64, q: f64) -> Result<f64> {
    let qpp = qpp_of(q)?;
    Ok(theta2 * y.abs().powf(qpp) - y.abs() * sigma_prime)
}

/// Minimizer and minimum of [`psi`] over `y < 0`, with
/// `psi_min = -E sigma'^{q/(1-q)}`.
pub fn y_star_min(sigma_prime: f64, theta2: f64, q: f64) -> Result<YStar> {
    let qpp = qpp_of(q)?;
    if !(sigma_prime > 0.0 && theta2 > 0.0) {
        return Err(Error::Domain(format!(
            "sigma' and theta2 must be positive, got {sigma_prime} and {theta2}"
        )));
    }
    let y_star = -(sigma_prime / (theta2 * qpp)).powf(1.0 / (qpp - 1.0));
    let e = (1.0 / q - 1.0) * (qpp * theta2).powf((1.0 - 2.0 * q) / (1.0 - q));
    let psi_min = -e * sigma_prime.powf(q / (1.0 - q));
    Ok(YStar { y_star, psi_min, e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: f64, t1: f64, t2: f64) -> Verdict {
        regime_classify(q, t1, t2).unwrap().verdict
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(regime_classify(1.0, 0.5, 1.5).unwrap().to_string(), "UniqueForced Thm-main-1-0");
        assert_eq!(v(1.0, 1.0, 1.0), Verdict::NontrivialExists);
        assert_eq!(v(0.3, 1e6, 1e6), Verdict::UniqueForced);
        assert_eq!(v(0.75, 0.5, 0.5), Verdict::UniqueForced);
        assert_eq!(v(0.5, 2.0, 3.0), Verdict::UniqueForced);
        assert_eq!(v(0.5, 2.0, 3.2), Verdict::Unknown);
        assert!(regime_classify(1.5, 1.0, 1.0).is_err());
        assert!(regime_classify(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn threshold_at_three_quarters() {
        let rhs = (4.0f64 / 3.0).powf(4.0 / 3.0) * (2.0f64 / 3.0).powf(2.0 / 3.0) * 0.75;
        assert!((rhs - 0.8400).abs() < 1e-4);
        let t = rhs.sqrt();
        assert_eq!(v(0.75, 0.999 * t, 0.999 * t), Verdict::UniqueForced);
        assert_eq!(v(0.75, 1.001 * t, 1.001 * t), Verdict::Unknown);
    }

    #[test]
    fn y_star_example() {
        let r = y_star_min(1.5, 1.0, 0.75).unwrap();
        assert!((r.y_star + 1.0).abs() < 1e-12);
        assert!((r.psi_min + 0.5).abs() < 1e-12);
        assert!((r.e - 1.0 / 3.0 / 2.25).abs() < 1e-15);
        assert!((psi(r.y_star, 1.5, 1.0, 0.75).unwrap() - r.psi_min).abs() < 1e-12);
        assert!(y_star_min(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn y_star_scaling() {
        let (q, theta2) = (0.8, 1.7);
        let qpp = q / (2.0 * q - 1.0);
        let base = y_star_min(0.9, theta2, q).unwrap().y_star;
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = y_star_min(lambda * 0.9, theta2, q).unwrap().y_star;
            let expected = lambda.powf(1.0 / (qpp - 1.0)) * base;
            assert!((scaled - expected).abs() < 1e-12 * expected.abs());
        }
    }
}
