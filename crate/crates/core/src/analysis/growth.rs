use crate::error::{Error, Result};
use crate::quadrature::adaptive_gauss_kronrod;
use rayon::prelude::*;

/// Constants of the bound
/// `int_0^inf exp(theta t^q - sigma t) dt
///   <= (A sigma^{-q/(2(1-q))} + B) exp(D sigma^{-q/(1-q)}) / sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

fn check_q_theta(q: f64, theta: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q must lie in (0, 1), got {q}")));
    }
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Domain(format!("theta must be positive, got {theta}")));
    }
    Ok(())
}

pub fn bound_constants(q: f64, theta: f64) -> Result<BoundConstants> {
    check_q_theta(q, theta)?;
    let qt = q * theta;
    let a = 2f64.powf(1.0 - q / 2.0)
        * qt.powf(1.0 / (2.0 * (1.0 - q)))
        * (2.0 * std::f64::consts::PI / (1.0 - q)).sqrt();
    let b = 4.0 / (1.0 - q);
    let d = (1.0 - q) * theta * qt.powf(q / (1.0 - q));
    Ok(BoundConstants { a, b, d })
}

/// Natural logarithm of the bound, finite even where the bound overflows.
pub fn log_lemma_bound(q: f64, theta: f64, sigma: f64) -> Result<f64> {
    let BoundConstants { a, b, d } = bound_constants(q, theta)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let prefactor = a * sigma.powf(-q / (2.0 * (1.0 - q))) + b;
    Ok(-sigma.ln() + prefactor.ln() + d * sigma.powf(-q / (1.0 - q)))
}

pub fn lemma_bound(q: f64, theta: f64, sigma: f64) -> Result<f64> {
    Ok(log_lemma_bound(q, theta, sigma)?.exp())
}

const REL_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 2000;

/// `((1 + u)^q - 1) / q - u`, accurate near `u = 0`.
fn relative_exponent(q: f64, u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut coeff = (q - 1.0) / 2.0;
        let mut power = u * u;
        let mut sum = coeff * power;
        for k in 2..60 {
            coeff *= (q - k as f64) / (k as f64 + 1.0);
            power *= u;
            let term = coeff * power;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (q * u.ln_1p()).exp_m1() / q - u
    }
}

/// `ln int_0^inf exp(theta t^q - sigma t) dt`.
///
/// With `t = t0 (1 + u)`, `t0 = (q theta / sigma)^{1/(1-q)}` the maximizer,
/// the exponent is `phi(t0) + sigma t0 g(u)` where `g` is computed without
/// cancellation; `exp(sigma t0 g(u))` is integrated adaptively on pieces that
/// grow geometrically away from the peak, and beyond the cutoff the concave
/// exponent is bounded by its tangent.
pub fn log_growth_integral(q: f64, theta: f64, sigma: f64) -> Result<f64> {
    check_q_theta(q, theta)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let t0 = (q * theta / sigma).powf(1.0 / (1.0 - q));
    let scale = sigma * t0;
    let peak = scale * (1.0 / q - 1.0);
    let g = |u: f64| scale * relative_exponent(q, u);
    let dg = |u: f64| scale * ((1.0 + u).powf(q - 1.0) - 1.0);
    let scaled = |u: f64| g(u).exp();
    let width = (1.0 / (scale * (1.0 - q))).sqrt();

    let mut breaks = vec![-1.0];
    let mut inner: Vec<f64> = (0..)
        .map(|k| -width * 2f64.powi(k))
        .take_while(|&b| b > -1.0)
        .collect();
    inner.reverse();
    breaks.extend(inner);
    breaks.push(0.0);

    // The scaled integral is at least of order `width`, so this floor is far
    // below the requested relative accuracy.
    let floor = 1e-16 * width.min(1.0);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += adaptive_gauss_kronrod(scaled, w[0], w[1], REL_TOL, floor, MAX_INTERVALS)?.value;
    }
    let mut right = 0.0;
    let mut k = 0;
    loop {
        let next = width * 2f64.powi(k);
        total += adaptive_gauss_kronrod(scaled, right, next, REL_TOL, floor, MAX_INTERVALS)?.value;
        right = next;
        k += 1;
        let tail = g(right).exp() / -dg(right);
        if tail <= 1e-17 * total {
            break;
        }
        if k > 2000 {
            return Err(Error::Convergence(format!(
                "growth integral tail did not decay for q={q}, theta={theta}, sigma={sigma}"
            )));
        }
    }
    Ok(peak + t0.ln() + total.ln())
}

/// `int_0^inf exp(theta t^q - sigma t) dt`; `inf` when it exceeds the f64
/// range, in which case [`log_growth_integral`] is still finite.
pub fn numeric_growth_integral(q: f64, theta: f64, sigma: f64) -> Result<f64> {
    Ok(log_growth_integral(q, theta, sigma)?.exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSweepRow {
    pub q: f64,
    pub theta: f64,
    pub sigma: f64,
    pub integral: f64,
    pub bound: f64,
    pub log_integral: f64,
    pub log_bound: f64,
    /// Dominance, decided on the logarithms.
    pub ok: bool,
}

/// Integral against bound over the tensor product of the parameter lists,
/// in `q`-major order.
pub fn bound_sweep(qs: &[f64], thetas: &[f64], sigmas: &[f64]) -> Result<Vec<BoundSweepRow>> {
    let cells: Vec<(f64, f64, f64)> = qs
        .iter()
        .flat_map(|&q| thetas.iter().flat_map(move |&t| sigmas.iter().map(move |&s| (q, t, s))))
        .collect();
    cells
        .par_iter()
        .map(|&(q, theta, sigma)| {
            let log_integral = log_growth_integral(q, theta, sigma)?;
            let log_bound = log_lemma_bound(q, theta, sigma)?;
            Ok(BoundSweepRow {
                q,
                theta,
                sigma,
                integral: log_integral.exp(),
                bound: log_bound.exp(),
                log_integral,
                log_bound,
                ok: log_integral <= log_bound,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnqaResult {
    /// `int_delta^1 sqrt(kappa(t) / t) dt` with `kappa(t) = D t^{-q/(1-q)}`.
    pub value: f64,
    /// Whether the integral stays bounded as `delta -> 0`, i.e. `q < 1/2`.
    pub converges: bool,
    /// The `delta -> 0` limit when it exists.
    pub limit: Option<f64>,
}

/// The integrand is `sqrt(D) t^{-p}` with `p = 1/(2(1-q))`; it is integrated
/// in the variable `s = ln t`.
pub fn anqa_integral(q: f64, theta: f64, delta: f64) -> Result<AnqaResult> {
    let BoundConstants { d, .. } = bound_constants(q, theta)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let root = d.sqrt();
    let p = 1.0 / (2.0 * (1.0 - q));
    let value = adaptive_gauss_kronrod(|s| root * ((1.0 - p) * s).exp(), delta.ln(), 0.0, 1e-13, 0.0, MAX_INTERVALS)?.value;
    let converges = q < 0.5;
    Ok(AnqaResult {
        value,
        converges,
        limit: converges.then(|| root / (1.0 - p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_at_half() {
        let c = bound_constants(0.5, 1.0).unwrap();
        let a = 2f64.powf(0.75) * 0.5 * (4.0 * std::f64::consts::PI).sqrt();
        assert!((c.a - a).abs() < 1e-14);
        assert!((c.a - 2.98088).abs() < 1e-4);
        assert_eq!(c.b, 8.0);
        assert!((c.d - 0.25).abs() < 1e-15);
        for theta in [0.3, 2.0, 7.0] {
            let d = bound_constants(0.5, theta).unwrap().d;
            assert!((d - theta * theta / 4.0).abs() < 1e-13 * d);
        }
        assert!(bound_constants(0.0, 1.0).is_err());
        assert!(bound_constants(1.0, 1.0).is_err());
    }

    #[test]
    fn b_grows_without_bound_as_q_approaches_one() {
        let bs: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&q| bound_constants(q, 1.0).unwrap().b).collect();
        assert!(bs.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn growth_integral_limits() {
        let v = numeric_growth_integral(0.5, 1e-12, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = numeric_growth_integral(0.3, 1e-12, 4.0).unwrap();
        assert!((v - 0.25).abs() < 1e-10);
    }

    #[test]
    fn sharp_peaks_do_not_overflow() {
        let l = log_growth_integral(0.9, 2.0, 0.1).unwrap();
        assert!(l.is_finite() && l > 1e10);
        assert!(l <= log_lemma_bound(0.9, 2.0, 0.1).unwrap());
        assert_eq!(numeric_growth_integral(0.9, 2.0, 0.1).unwrap(), f64::INFINITY);
    }

    #[test]
    fn anqa_limits_and_flags() {
        let r = anqa_integral(0.3, 1.0, 1e-12).unwrap();
        assert!(r.converges);
        let limit = r.limit.unwrap();
        let d = bound_constants(0.3, 1.0).unwrap().d;
        assert!((limit - d.sqrt() / (1.0 - 1.0 / 1.4)).abs() < 1e-12);
        assert!((r.value - limit).abs() < 1e-3 * limit);
        assert!(!anqa_integral(0.5, 1.0, 0.1).unwrap().converges);
        assert!(!anqa_integral(0.7, 1.0, 0.1).unwrap().converges);
        let half = anqa_integral(0.5, 1.0, 1e-6).unwrap();
        assert!((half.value - 0.5 * 1e6f64.ln()).abs() < 1e-10);
    }
}
