//! Boundary data for the characteristic Goursat problem.

use crate::error::{Error, Result};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

/// Growth metadata `|f(t)| <= constant * exp(theta * t^q)` for `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub constant: f64,
    pub theta: f64,
    pub q: f64,
}

impl GrowthBound {
    pub fn new(constant: f64, theta: f64, q: f64) -> Result<Self> {
        if !(constant >= 0.0 && constant.is_finite()) {
            return Err(Error::Metadata(format!("growth constant must be finite and >= 0, got {constant}")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::Metadata(format!("growth rate must be finite and >= 0, got {theta}")));
        }
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Metadata(format!("growth exponent must lie in (0, 1], got {q}")));
        }
        Ok(Self { constant, theta, q })
    }

    /// Bounded data, `|f| <= constant`.
    pub fn bounded(constant: f64) -> Self {
        Self {
            constant,
            theta: 0.0,
            q: 1.0,
        }
    }
}

/// A real function of one real variable usable as Goursat data or as a
/// Laplace-transform profile.
pub trait BoundaryData: Send + Sync {
    fn value(&self, t: f64) -> f64;

    /// Points where the function fails to be smooth. Quadrature panels are
    /// split there.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }

    fn growth(&self) -> Option<GrowthBound> {
        None
    }

    /// Whether `value` is computed from interpolated samples, which loosens
    /// the corner-compatibility tolerance.
    fn is_tabulated(&self) -> bool {
        false
    }
}

impl<T: BoundaryData + ?Sized> BoundaryData for &T {
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }
    fn kinks(&self) -> Vec<f64> {
        (**self).kinks()
    }
    fn growth(&self) -> Option<GrowthBound> {
        (**self).growth()
    }
    fn is_tabulated(&self) -> bool {
        (**self).is_tabulated()
    }
}

impl<T: BoundaryData + ?Sized> BoundaryData for Arc<T> {
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }
    fn kinks(&self) -> Vec<f64> {
        (**self).kinks()
    }
    fn growth(&self) -> Option<GrowthBound> {
        (**self).growth()
    }
    fn is_tabulated(&self) -> bool {
        (**self).is_tabulated()
    }
}

/// Sorted sample table with linear interpolation and constant extension
/// beyond the end nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(Error::Spec(format!(
                "table needs matching nonempty node/value lists ({} nodes, {} values)",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Spec("table entries must be finite".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Spec("table nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, values })
    }

    /// Reads a two-column `t,value` CSV; blank lines, `#` comments and a
    /// non-numeric header line are skipped.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("{}:{}: expected two columns", path.display(), lineno + 1)));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(t), Ok(v)) => {
                    nodes.push(t);
                    values.push(v);
                }
                _ if nodes.is_empty() => continue, // header
                _ => {
                    return Err(Error::Parse(format!(
                        "{}:{}: non-numeric row `{line}`",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.nodes.len();
        if t <= self.nodes[0] {
            return self.values[0];
        }
        if t >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        let i = self.nodes.partition_point(|&x| x <= t) - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let w = (t - x0) / (x1 - x0);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

/// The formula families available as boundary data.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Zero,
    One,
    /// `t -> min(max(t, 0), 1)`
    Ramp,
    /// `c0 + c1 t + c2 t^2 + ...`
    Poly(Vec<f64>),
    /// `t -> sin(k t)`
    Sin(f64),
    /// `t -> exp(-(t - c)^2 / (2 s^2))`
    Gauss { center: f64, width: f64 },
    Table(Table),
}

/// Boundary data: a function kind plus optional growth metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    kind: FunctionKind,
    growth: Option<GrowthBound>,
}

impl BoundaryFunction {
    pub fn new(kind: FunctionKind) -> Result<Self> {
        match &kind {
            FunctionKind::Poly(c) if c.is_empty() || c.iter().any(|v| !v.is_finite()) => {
                return Err(Error::Spec("polynomial needs at least one finite coefficient".into()))
            }
            FunctionKind::Sin(k) if !k.is_finite() => {
                return Err(Error::Spec("sin frequency must be finite".into()))
            }
            FunctionKind::Gauss { center, width } if !center.is_finite() || !(*width > 0.0 && width.is_finite()) => {
                return Err(Error::Spec("gauss needs a finite center and positive width".into()))
            }
            _ => {}
        }
        Ok(Self { kind, growth: None })
    }

    pub fn zero() -> Self {
        Self { kind: FunctionKind::Zero, growth: None }
    }

    pub fn one() -> Self {
        Self { kind: FunctionKind::One, growth: None }
    }

    pub fn ramp() -> Self {
        Self { kind: FunctionKind::Ramp, growth: None }
    }

    pub fn poly(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(FunctionKind::Poly(coeffs))
    }

    pub fn sin(frequency: f64) -> Result<Self> {
        Self::new(FunctionKind::Sin(frequency))
    }

    pub fn gauss(center: f64, width: f64) -> Result<Self> {
        Self::new(FunctionKind::Gauss { center, width })
    }

    pub fn table(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            kind: FunctionKind::Table(Table::new(nodes, values)?),
            growth: None,
        })
    }

    pub fn with_growth(mut self, growth: GrowthBound) -> Self {
        self.growth = Some(growth);
        self
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            FunctionKind::Zero => 0.0,
            FunctionKind::One => 1.0,
            FunctionKind::Ramp => t.clamp(0.0, 1.0),
            FunctionKind::Poly(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci),
            FunctionKind::Sin(k) => (k * t).sin(),
            FunctionKind::Gauss { center, width } => {
                let z = (t - center) / width;
                (-0.5 * z * z).exp()
            }
            FunctionKind::Table(table) => table.eval(t),
        }
    }

    /// Declared metadata, or the intrinsic bound for the bounded kinds.
    pub fn growth_bound(&self) -> Option<GrowthBound> {
        if self.growth.is_some() {
            return self.growth;
        }
        match &self.kind {
            FunctionKind::Zero => Some(GrowthBound::bounded(0.0)),
            FunctionKind::One
            | FunctionKind::Ramp
            | FunctionKind::Sin(_)
            | FunctionKind::Gauss { .. } => Some(GrowthBound::bounded(1.0)),
            FunctionKind::Table(t) => Some(GrowthBound::bounded(
                t.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            )),
            FunctionKind::Poly(c) if c.len() == 1 => Some(GrowthBound::bounded(c[0].abs())),
            FunctionKind::Poly(_) => None,
        }
    }
}

impl BoundaryData for BoundaryFunction {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            FunctionKind::Ramp => vec![0.0, 1.0],
            FunctionKind::Table(t) => t.nodes().to_vec(),
            _ => Vec::new(),
        }
    }

    fn growth(&self) -> Option<GrowthBound> {
        self.growth_bound()
    }

    fn is_tabulated(&self) -> bool {
        matches!(self.kind, FunctionKind::Table(_))
    }
}

impl fmt::Display for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Zero => write!(f, "zero"),
            FunctionKind::One => write!(f, "one"),
            FunctionKind::Ramp => write!(f, "ramp"),
            FunctionKind::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            FunctionKind::Sin(k) => write!(f, "sin:{k}"),
            FunctionKind::Gauss { center, width } => write!(f, "gauss:{center},{width}"),
            FunctionKind::Table(t) => write!(f, "table[{} nodes]", t.nodes().len()),
        }
    }
}

/// Parses `zero | one | ramp | poly:c0,c1,... | sin:k | gauss:c,s | csv:PATH`.
impl FromStr for BoundaryFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = match text.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (text, None),
        };
        let numbers = |r: &str| -> Result<Vec<f64>> {
            r.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("`{s}` is not a number in `{text}`")))
                })
                .collect()
        };
        match (head, rest) {
            ("zero", None) => Ok(Self::zero()),
            ("one", None) => Ok(Self::one()),
            ("ramp", None) => Ok(Self::ramp()),
            ("poly", Some(r)) => Self::poly(numbers(r)?),
            ("sin", Some(r)) => match numbers(r)?.as_slice() {
                [k] => Self::sin(*k),
                _ => Err(Error::Parse(format!("sin takes one frequency: `{text}`"))),
            },
            ("gauss", Some(r)) => match numbers(r)?.as_slice() {
                [c, s] => Self::gauss(*c, *s),
                _ => Err(Error::Parse(format!("gauss takes center,width: `{text}`"))),
            },
            ("csv", Some(path)) if !path.is_empty() => Ok(Self {
                kind: FunctionKind::Table(Table::from_csv_path(Path::new(path))?),
                growth: None,
            }),
            _ => Err(Error::Parse(format!(
                "unrecognised function spec `{text}` (expected zero | one | ramp | poly:c0,c1,... | sin:k | gauss:c,s | csv:PATH)"
            ))),
        }
    }
}

/// `f - shift`, used to split Goursat data into corner and unilateral parts.
#[derive(Debug, Clone, Copy)]
pub struct Shifted<D> {
    pub inner: D,
    pub shift: f64,
}

impl<D: BoundaryData> BoundaryData for Shifted<D> {
    fn value(&self, t: f64) -> f64 {
        self.inner.value(t) - self.shift
    }
    fn kinks(&self) -> Vec<f64> {
        self.inner.kinks()
    }
    fn growth(&self) -> Option<GrowthBound> {
        self.inner.growth().map(|g| GrowthBound {
            constant: g.constant + self.shift.abs(),
            ..g
        })
    }
    fn is_tabulated(&self) -> bool {
        self.inner.is_tabulated()
    }
}

/// Closure-backed data with optional kinks and growth metadata.
pub struct FnData<F> {
    func: F,
    kinks: Vec<f64>,
    growth: Option<GrowthBound>,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnData<F> {
    pub fn new(func: F) -> Self {
        Self {
            func,
            kinks: Vec::new(),
            growth: None,
        }
    }

    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    pub fn with_growth(mut self, growth: GrowthBound) -> Self {
        self.growth = Some(growth);
        self
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> BoundaryData for FnData<F> {
    fn value(&self, t: f64) -> f64 {
        (self.func)(t)
    }
    fn kinks(&self) -> Vec<f64> {
        self.kinks.clone()
    }
    fn growth(&self) -> Option<GrowthBound> {
        self.growth
    }
}
