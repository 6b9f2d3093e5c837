//! Gauss-Legendre rules: fixed-order composite panels and an adaptive
//! Gauss-Kronrod integrator for semi-infinite integrals.

use crate::error::{Error, Result};
use crate::summation::{ComplexSum, NeumaierSum};
use num_complex::Complex64;
use std::sync::OnceLock;

pub const MIN_NODES: usize = 4;
pub const MAX_NODES: usize = 16;

/// Density of the composite Gauss-Legendre rule used for every convolution
/// and double integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    panels_per_unit: usize,
    nodes_per_panel: usize,
}

impl QuadratureSpec {
    pub fn new(panels_per_unit: usize, nodes_per_panel: usize) -> Result<Self> {
        if panels_per_unit == 0 {
            return Err(Error::Spec("panels_per_unit must be at least 1".into()));
        }
        if !(MIN_NODES..=MAX_NODES).contains(&nodes_per_panel) {
            return Err(Error::Spec(format!(
                "nodes_per_panel must lie in {MIN_NODES}..={MAX_NODES}, got {nodes_per_panel}"
            )));
        }
        Ok(Self {
            panels_per_unit,
            nodes_per_panel,
        })
    }

    pub fn panels_per_unit(&self) -> usize {
        self.panels_per_unit
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn rule(&self) -> &'static GaussLegendre {
        GaussLegendre::cached(self.nodes_per_panel)
    }

    /// Number of panels used on a segment of the given length.
    pub fn panel_count(&self, length: f64) -> usize {
        ((length.abs() * self.panels_per_unit as f64).ceil() as usize).max(1)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels_per_unit: 8,
            nodes_per_panel: 8,
        }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn cached(n: usize) -> &'static GaussLegendre {
        static TABLE: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
        let table = TABLE.get_or_init(|| (0..=MAX_NODES.max(32)).map(|k| GaussLegendre::new(k.max(1))).collect());
        match table.get(n) {
            Some(rule) => rule,
            None => panic!("no cached Gauss-Legendre rule with {n} nodes"),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to [a, b]. Reversed intervals yield negative
    /// weights so that oriented integrals come out right.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Segment endpoints of the oriented interval from `a` to `b`, split at every
/// break point lying strictly inside.
pub fn segments(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    if a == b {
        return Vec::new();
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&c| c.is_finite() && c > lo && c < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut points = Vec::with_capacity(cuts.len() + 2);
    points.push(lo);
    points.extend(cuts);
    points.push(hi);
    if a > b {
        points.reverse();
    }
    points.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Composite rule for the oriented integral from `a` to `b`.
pub fn composite_nodes(a: f64, b: f64, breaks: &[f64], spec: &QuadratureSpec) -> Vec<(f64, f64)> {
    let rule = spec.rule();
    let mut out = Vec::new();
    for (s0, s1) in segments(a, b, breaks) {
        let panels = spec.panel_count(s1 - s0);
        let h = (s1 - s0) / panels as f64;
        for p in 0..panels {
            let l = s0 + h * p as f64;
            let r = if p + 1 == panels { s1 } else { l + h };
            out.extend(rule.mapped(l, r));
        }
    }
    out
}

/// Oriented integral of a real integrand by the composite rule.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> f64 {
    let mut acc = NeumaierSum::new();
    for (t, w) in composite_nodes(a, b, breaks, spec) {
        acc.add(w * f(t));
    }
    acc.value()
}

/// Fallible complex variant of [`integrate`].
pub fn try_integrate_complex<F: FnMut(f64) -> Result<Complex64>>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut acc = ComplexSum::new();
    for (t, w) in composite_nodes(a, b, breaks, spec) {
        acc.add(f(t)? * w);
    }
    Ok(acc.value())
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let err = ((kronrod - gauss) * half).abs();
    (kronrod * half, err)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Globally adaptive Gauss-Kronrod integration of `f` over the finite
/// interval [a, b]; the interval with the largest error estimate is bisected
/// until the total estimate drops below `max(abs_tol, rel_tol * |value|)`.
pub fn adaptive_gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<AdaptiveResult> {
    let (v, e) = gauss_kronrod_15(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Convergence(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(AdaptiveResult {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Convergence(format!(
                "adaptive quadrature exhausted {max_intervals} intervals (error {error:e}, value {value:e})"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (l, r, _, _) = pieces.swap_remove(worst);
        let m = 0.5 * (l + r);
        if m <= l || m >= r {
            return Err(Error::Convergence(format!(
                "adaptive quadrature cannot bisect [{l}, {r}] further"
            )));
        }
        let (v1, e1) = gauss_kronrod_15(&mut f, l, m);
        let (v2, e2) = gauss_kronrod_15(&mut f, m, r);
        pieces.push((l, m, v1, e1));
        pieces.push((m, r, v2, e2));
    }
}
