use crate::error::{Error, Result};

/// `beta(y) = y exp(theta2 sqrt(y))` for `y >= 0`.
pub fn beta(theta2: f64, y: f64) -> f64 {
    y * (theta2 * y.sqrt()).exp()
}

/// Two-term expansion `(t log^2 t - 2 t log t log log t) / theta2^2`.
pub fn beta_asymptotic(theta2: f64, t: f64) -> f64 {
    let l = t.ln();
    (t * l * l - 2.0 * t * l * l.ln()) / (theta2 * theta2)
}

const REL_TOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `beta*(t) = sup_{y >= 0} (y t - beta(y))`, by golden-section search on a
/// bracket `[0, y_hi]` whose right end is doubled until the objective
/// decreases.
pub fn legendre_conjugate_beta(theta2: f64, t: f64) -> Result<f64> {
    if !(theta2 > 0.0 && theta2.is_finite()) {
        return Err(Error::Domain(format!("theta2 must be positive, got {theta2}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let h = |y: f64| y * t - beta(theta2, y);
    if t <= 1.0 {
        // y t - beta(y) <= y (t - 1) <= 0 with equality at y = 0.
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while h(2.0 * hi) >= h(hi) {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::Convergence(format!("no bracket for beta*({t})")));
        }
    }
    let (mut a, mut b) = (0.0, 2.0 * hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut hc, mut hd) = (h(c), h(d));
    for _ in 0..400 {
        if (b - a) <= REL_TOL * 0.5 * (a + b) {
            break;
        }
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - INV_PHI * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + INV_PHI * (b - a);
            hd = h(d);
        }
    }
    if (b - a) > REL_TOL * 0.5 * (a + b) {
        return Err(Error::Convergence(format!("golden section stalled for beta*({t})")));
    }
    Ok(h(0.5 * (a + b)).max(hc).max(hd).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The maximizer satisfies `t = e^s (1 + s/2)` with `s = theta sqrt(y)`,
    /// giving `beta* = s^3 e^s / (2 theta^2)`.
    fn newton_oracle(theta: f64, t: f64) -> f64 {
        let mut s: f64 = t.ln().max(1.0);
        for _ in 0..100 {
            let g = s.exp() * (1.0 + s / 2.0) - t;
            let dg = s.exp() * (1.5 + s / 2.0);
            s -= g / dg;
        }
        s.powi(3) * s.exp() / (2.0 * theta * theta)
    }

    #[test]
    fn matches_stationarity_oracle() {
        for theta in [0.5, 1.0, 3.0] {
            for t in [1.5, 10.0, 1e3, 1e6, 1e8] {
                let v = legendre_conjugate_beta(theta, t).unwrap();
                let o = newton_oracle(theta, t);
                assert!((v - o).abs() <= 1e-9 * o, "theta={theta} t={t}: {v} vs {o}");
            }
        }
    }

    #[test]
    fn vanishes_up_to_one() {
        assert_eq!(legendre_conjugate_beta(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(legendre_conjugate_beta(2.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn fenchel_inequality() {
        for t in [2.0, 50.0, 1e4] {
            let b = legendre_conjugate_beta(1.0, t).unwrap();
            for k in 0..200 {
                let y = 0.05 * k as f64 * k as f64;
                assert!(b >= y * t - beta(1.0, y) - 1e-12 * b.abs());
            }
        }
    }
}
