use crate::error::{Error, Result};

const MAX_PROBES: f64 = 5e7;

/// A finite sample of a set `Y` in the negative half-line, tested for
/// covering `[probe_depth, y1]` by the intervals `[y - M R(y, q), y + M R(y, q)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringSpec {
    pub ys: Vec<f64>,
    pub m: f64,
    pub q: f64,
    pub y1: f64,
    pub probe_depth: f64,
}

impl CoveringSpec {
    pub fn new(ys: Vec<f64>, m: f64, q: f64, y1: f64, probe_depth: f64) -> Result<Self> {
        if ys.iter().any(|y| !(y.is_finite() && *y <= 0.0)) {
            return Err(Error::Spec("Y must consist of finite nonpositive reals".into()));
        }
        if ys.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Spec("Y must be strictly decreasing".into()));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Spec(format!("M must be positive, got {m}")));
        }
        if !(q > 0.5 && q < 1.0) {
            return Err(Error::Spec(format!("q must lie in (1/2, 1), got {q}")));
        }
        if !(y1 < 0.0 && probe_depth < y1 && probe_depth.is_finite()) {
            return Err(Error::Spec(format!(
                "need probe_depth < y1 < 0, got probe_depth = {probe_depth}, y1 = {y1}"
            )));
        }
        Ok(Self {
            ys,
            m,
            q,
            y1,
            probe_depth,
        })
    }

    fn qpp(&self) -> f64 {
        self.q / (2.0 * self.q - 1.0)
    }
}

/// `R(y, q) = |y| min(1, |y|^{-q''/2})` with `q'' = q / (2q - 1)`.
pub fn covering_radius(y: f64, q: f64) -> f64 {
    let qpp = q / (2.0 * q - 1.0);
    let a = y.abs();
    a * a.powf(-qpp / 2.0).min(1.0)
}

/// Largest probe point of `[probe_depth, y1]` left uncovered, if any.
///
/// Probes are the regular grid with step `min M R / 4` over the intervals
/// meeting the window, plus the midpoint of every gap in the union of
/// intervals, so an uncovered stretch is always exhibited and the answer is
/// monotone in `M`.
pub fn q_covering_witness(spec: &CoveringSpec) -> Result<Option<f64>> {
    let (lo, hi) = (spec.probe_depth, spec.y1);
    let qpp = spec.qpp();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut step = f64::INFINITY;
    for &y in &spec.ys {
        let a = y.abs();
        let r = spec.m * a * a.powf(-qpp / 2.0).min(1.0);
        let (l, u) = (y - r, y + r);
        if u < lo || l > hi {
            continue;
        }
        intervals.push((l, u));
        if r > 0.0 {
            step = step.min(r / 4.0);
        }
    }
    if !step.is_finite() {
        return Err(Error::Spec("no interval of positive radius meets the probe window".into()));
    }
    let count = ((hi - lo) / step).ceil();
    if count > MAX_PROBES {
        return Err(Error::Spec(format!("probe grid of {count} points is too fine")));
    }

    intervals.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (l, u) in intervals {
        match merged.last_mut() {
            Some(last) if l <= last.1 => last.1 = last.1.max(u),
            _ => merged.push((l, u)),
        }
    }

    let mut probes: Vec<f64> = (0..=count as usize).map(|k| (lo + step * k as f64).min(hi)).collect();
    probes.push(hi);
    let mut cursor = lo;
    let gap_probe = |a: f64, b: f64, probes: &mut Vec<f64>| {
        if b > a {
            probes.push(0.5 * (a + b));
        } else if a == b {
            probes.push(a);
        }
    };
    for &(l, u) in &merged {
        if l > cursor {
            gap_probe(cursor.max(lo), l.min(hi), &mut probes);
        }
        cursor = cursor.max(u);
    }
    if cursor < hi {
        gap_probe(cursor.max(lo), hi, &mut probes);
    }

    let covered = |p: f64| {
        let i = merged.partition_point(|iv| iv.0 <= p);
        i > 0 && merged[i - 1].1 >= p
    };
    Ok(probes
        .into_iter()
        .filter(|&p| p >= lo && p <= hi && !covered(p))
        .max_by(f64::total_cmp))
}

pub fn q_covering_check(spec: &CoveringSpec) -> Result<bool> {
    Ok(q_covering_witness(spec)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_cover() {
        let ys: Vec<f64> = (0..=200).map(|k| -(k as f64)).collect();
        let spec = CoveringSpec::new(ys, 1.0, 0.75, -1.0, -200.0).unwrap();
        assert!(q_covering_check(&spec).unwrap());
    }

    #[test]
    fn powers_of_two_leave_gaps() {
        let ys: Vec<f64> = (0..=12).map(|n| -(2f64.powi(n))).collect();
        let spec = CoveringSpec::new(ys, 1.0, 0.75, -1.0, -4096.0).unwrap();
        let w = q_covering_witness(&spec).unwrap().unwrap();
        let r4 = 4f64.powf(0.25);
        let r8 = 8f64.powf(0.25);
        assert!(w < -4.0 - r4 && w > -8.0 + r8, "{w}");
    }

    #[test]
    fn dense_sample_covers_for_small_m() {
        let ys: Vec<f64> = (0..=10_000).map(|k| -0.01 * k as f64).collect();
        for m in [0.01, 0.1, 1.0] {
            let spec = CoveringSpec::new(ys.clone(), m, 0.75, -1.0, -99.0).unwrap();
            assert!(q_covering_check(&spec).unwrap(), "M={m}");
        }
    }

    #[test]
    fn radius_formula() {
        assert_eq!(covering_radius(-0.5, 0.75), 0.5);
        assert!((covering_radius(-16.0, 0.75) - 2.0).abs() < 1e-14);
        assert_eq!(covering_radius(0.0, 0.75), 0.0);
    }

    #[test]
    fn invalid_specs() {
        assert!(CoveringSpec::new(vec![-1.0, -0.5], 1.0, 0.75, -1.0, -2.0).is_err());
        assert!(CoveringSpec::new(vec![1.0], 1.0, 0.75, -1.0, -2.0).is_err());
        assert!(CoveringSpec::new(vec![-1.0], 1.0, 0.5, -1.0, -2.0).is_err());
        assert!(CoveringSpec::new(vec![-1.0], 1.0, 0.75, -1.0, -0.5).is_err());
        let far = CoveringSpec::new(vec![-100.0], 1.0, 0.75, -1.0, -2.0).unwrap();
        assert!(q_covering_witness(&far).is_err());
    }
}
