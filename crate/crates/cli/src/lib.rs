//! Command-line front end for the Goursat workbench.
//!
//! Every subcommand validates its flags before computing, writes CSV once
//! (atomically, to `--out` or stdout) and prints a one-line summary.
//! Exit codes: 0 success, 1 usage, parse or I/O error, 2 non-convergence,
//! 3 violated precondition.

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use goursat_core::analysis::{
    beta_asymptotic, bound_sweep, lemma_bound, log_growth_integral, log_lemma_bound, anqa_integral,
    legendre_conjugate_beta, q_covering_witness, regime_classify, CoveringSpec,
};
use goursat_core::grid::{fmt17, probe_rectangles};
use goursat_core::laplace::{evolution_rows, laplace, laplace_auto};
use goursat_core::picard::{glue_residual, picard_iterate, quadrature_residual};
use goursat_core::riemann::riemann_solve;
use goursat_core::{
    eval_biv_bessel, BoundaryFunction, CharacteristicLine, Complex64, Error, Field, Grid, GrowthBound,
    QuadratureSpec, SeriesParams,
};
use std::fmt::Write as _;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONVERGENCE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "goursat", version, about = "Klein-Gordon u_xy + u = 0 workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the bivariate Bessel function J_{a,0}(x, y).
    Bessel(BesselArgs),
    /// Solve the Goursat problem on [0, xmax] x [ymin, 0] and write the field.
    Solve(SolveArgs),
    /// Quadrature-identity residuals on probe rectangles.
    Residual(ResidualArgs),
    /// Straddling residual of two fields glued along a characteristic line.
    Glue(GlueArgs),
    /// Laplace transform of boundary data at one frequency.
    Laplace(LaplaceArgs),
    /// Compare transformed rows with the evolution law.
    EvolveCheck(EvolveArgs),
    /// Classify a growth regime.
    Regime(RegimeArgs),
    /// Growth integral against its closed-form bound over a parameter grid.
    BoundSweep(SweepArgs),
    /// Asymptotic q-covering check of a set of nonpositive points.
    Covering(CoveringArgs),
    /// Legendre conjugate of beta(y) = y log^2(-y) at several t.
    Legendre(LegendreArgs),
    /// Growth integral, bound and ANQA integral for one parameter set.
    GrowthDemo(GrowthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Gauss-Legendre panels per unit length.
    #[arg(long, default_value_t = 8)]
    pub panels: usize,
    /// Nodes per panel.
    #[arg(long, default_value_t = 8)]
    pub nodes: usize,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec, Error> {
        QuadratureSpec::new(self.panels, self.nodes)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub xmax: f64,
    #[arg(long)]
    pub ymin: f64,
    #[arg(long, default_value_t = 41)]
    pub nx: usize,
    #[arg(long, default_value_t = 41)]
    pub ny: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid, Error> {
        if !(self.xmax >= 0.0) || !(self.ymin <= 0.0) {
            return Err(Error::Domain(format!(
                "the grid needs xmax >= 0 and ymin <= 0, got xmax={} ymin={}",
                self.xmax, self.ymin
            )));
        }
        Grid::uniform((0.0, self.xmax), self.nx, (self.ymin, 0.0), self.ny)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Riemann,
    Picard,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[arg(long, default_value_t = 0)]
    pub a: u32,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
    /// Relative stopping tolerance of the series.
    #[arg(long, default_value_t = 1e-16)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_terms: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Data on y = 0 (`zero | one | ramp | poly:c0,c1,... | sin:k | gauss:c,s | csv:PATH`).
    #[arg(long)]
    pub f: String,
    /// Data on x = 0, same grammar.
    #[arg(long)]
    pub g: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Method::Riemann)]
    pub method: Method,
    /// Picard sup-norm tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    /// Field CSV to check; otherwise the field is solved from --f/--g.
    #[arg(long, conflicts_with_all = ["f", "g"])]
    pub field: Option<PathBuf>,
    #[arg(long, requires = "g")]
    pub f: Option<String>,
    #[arg(long, requires = "f")]
    pub g: Option<String>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub ymin: Option<f64>,
    #[arg(long, default_value_t = 41)]
    pub nx: usize,
    #[arg(long, default_value_t = 41)]
    pub ny: usize,
    #[arg(long, value_enum, default_value_t = Method::Riemann)]
    pub method: Method,
    /// Probe points per axis; rectangles span every pair.
    #[arg(long, default_value_t = 5)]
    pub probes: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GlueArgs {
    #[arg(long)]
    pub lower: PathBuf,
    #[arg(long)]
    pub upper: PathBuf,
    /// `h:C` for the line y = C, `v:C` for x = C.
    #[arg(long)]
    pub line: String,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct LaplaceArgs {
    #[arg(long)]
    pub f: String,
    /// Frequency such as `2`, `1+1i` or `0.5-3i`.
    #[arg(long)]
    pub zeta: String,
    /// Truncation point; chosen from the tail bound when omitted.
    #[arg(long)]
    pub xmax: Option<f64>,
    /// Growth metadata `C,theta,q` overriding the built-in bound.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub growth: Option<Vec<f64>>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, default_value = "ramp")]
    pub f: String,
    #[arg(long, default_value_t = 30.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = -2.0)]
    pub ymin: f64,
    #[arg(long, default_value_t = 5)]
    pub nx: usize,
    #[arg(long, default_value_t = 5)]
    pub ny: usize,
    #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "2".to_string(), "1+1i".to_string()])]
    pub zetas: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, -1.0, -2.0])]
    pub ys: Vec<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub theta1: f64,
    #[arg(long)]
    pub theta2: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    pub qs: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub thetas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    pub sigmas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoveringArgs {
    /// Points of the set, all nonpositive.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub ys: Vec<f64>,
    #[arg(long)]
    pub m: f64,
    #[arg(long)]
    pub q: f64,
    /// Start of the ray that must be covered.
    #[arg(long)]
    pub y1: f64,
    /// Deepest point probed.
    #[arg(long)]
    pub depth: f64,
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    #[arg(long, default_value_t = 1.0)]
    pub theta2: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1e3, 1e4, 1e6, 1e8])]
    pub t: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Lower limit of the ANQA integral.
    #[arg(long, default_value_t = 1e-8)]
    pub delta: f64,
}

/// Parses argv (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cmd = Cli::command().mut_subcommands(|sc| sc.allow_negative_numbers(true));
    let matches = cmd.try_get_matches_from(argv)?;
    Cli::from_arg_matches(&matches)
}

/// Result of a command: CSV body (if any) and the summary line.
#[derive(Debug, Default)]
pub struct Output {
    pub csv: Option<String>,
    pub out: Option<PathBuf>,
    pub summary: String,
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Convergence(_) => EXIT_CONVERGENCE,
        e if e.is_precondition() => EXIT_PRECONDITION,
        _ => EXIT_USAGE,
    }
}

/// Full entry point: parse, run, report. Returns the process exit code.
pub fn main_with_args(argv: &[String]) -> u8 {
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let header = argv_comment(argv);
    match run(&cli.command, &header) {
        Ok(output) => match emit(&output) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn argv_comment(argv: &[String]) -> String {
    let mut parts = vec!["goursat".to_string()];
    parts.extend(argv.iter().skip(1).cloned());
    format!("argv: {}", parts.join(" "))
}

fn emit(output: &Output) -> Result<(), Error> {
    match (&output.csv, &output.out) {
        (Some(csv), Some(path)) => {
            write_atomic(path, csv)?;
            println!("{}", output.summary);
        }
        (Some(csv), None) => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(csv.as_bytes())?;
            stdout.flush()?;
            eprintln!("{}", output.summary);
        }
        (None, _) => println!("{}", output.summary),
    }
    Ok(())
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

pub fn parse_function(text: &str) -> Result<BoundaryFunction, Error> {
    text.parse()
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(text: &str) -> Result<Complex64, Error> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("`{text}` is not a complex number (try 1, 2i or 1+1i)"));
    let num = |p: &str| -> Result<f64, Error> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
        None => (0.0, num(body)?),
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_line(text: &str) -> Result<CharacteristicLine, Error> {
    let bad = || Error::Parse(format!("`{text}` is not a line (expected h:C or v:C)"));
    let (kind, value) = text.split_once(':').ok_or_else(bad)?;
    let c: f64 = value.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "h" => Ok(CharacteristicLine::Horizontal(c)),
        "v" => Ok(CharacteristicLine::Vertical(c)),
        _ => Err(bad()),
    }
}

fn finite(name: &str, v: f64) -> Result<f64, Error> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("--{name} must be finite, got {v}")))
    }
}

fn read_field(path: &Path) -> Result<Field, Error> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Field::read_csv(BufReader::new(file))
}

fn field_csv(field: &Field, header: &str) -> Result<String, Error> {
    let mut buf = Vec::new();
    field.write_csv(&mut buf, &[header.to_string()])?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

fn solve_field(
    f: &BoundaryFunction,
    g: &BoundaryFunction,
    grid: &Grid,
    method: Method,
    quad: &QuadratureSpec,
    tol: f64,
    max_iter: usize,
) -> Result<(Field, String), Error> {
    match method {
        Method::Riemann => Ok((riemann_solve(f, g, grid, quad)?, "riemann".into())),
        Method::Picard => {
            let (field, report) = picard_iterate(f, g, grid, quad, tol, max_iter)?;
            if !report.converged {
                return Err(Error::Convergence(format!(
                    "picard did not reach tol {tol} in {} iterations (last update {:e})",
                    report.iterations, report.final_update_sup
                )));
            }
            Ok((field, format!("picard iterations={}", report.iterations)))
        }
    }
}

/// Executes one parsed command.
pub fn run(command: &Command, header: &str) -> Result<Output, Error> {
    match command {
        Command::Bessel(a) => {
            let params = SeriesParams::new(a.rel_tol, a.max_terms)?;
            let v = eval_biv_bessel(a.a, finite("x", a.x)?, finite("y", a.y)?, &params)?;
            Ok(Output {
                summary: format!(
                    "J_{{{},0}}({}, {}) = {} (est_error {:e})",
                    a.a,
                    a.x,
                    a.y,
                    fmt17(v.value),
                    v.est_error
                ),
                ..Output::default()
            })
        }
        Command::Solve(a) => {
            let f = parse_function(&a.f)?;
            let g = parse_function(&a.g)?;
            let grid = a.grid.grid()?;
            let quad = a.quad.spec()?;
            let (field, how) = solve_field(&f, &g, &grid, a.method, &quad, a.tol, a.max_iter)?;
            Ok(Output {
                csv: Some(field_csv(&field, header)?),
                out: a.out.clone(),
                summary: format!(
                    "solved {}x{} grid with {how}: sup |u| = {:e}",
                    grid.nx(),
                    grid.ny(),
                    field.sup_norm()
                ),
            })
        }
        Command::Residual(a) => {
            let quad = a.quad.spec()?;
            let field = match (&a.field, &a.f, &a.g) {
                (Some(path), _, _) => read_field(path)?,
                (None, Some(f), Some(g)) => {
                    let (xmax, ymin) = match (a.xmax, a.ymin) {
                        (Some(x), Some(y)) => (x, y),
                        _ => return Err(Error::Parse("--xmax and --ymin are required with --f/--g".into())),
                    };
                    let grid = GridArgs { xmax, ymin, nx: a.nx, ny: a.ny }.grid()?;
                    solve_field(&parse_function(f)?, &parse_function(g)?, &grid, a.method, &quad, 1e-9, 50)?.0
                }
                _ => return Err(Error::Parse("give either --field or both --f and --g".into())),
            };
            if a.probes < 2 {
                return Err(Error::Spec("--probes must be at least 2".into()));
            }
            let rects = probe_rectangles(field.grid(), a.probes);
            let mut csv = format!("# {header}\na,a2,b,b2,re,im,abs\n");
            let mut worst = 0.0_f64;
            for r in &rects {
                let res = quadrature_residual(&field, r, &quad)?;
                worst = worst.max(res.norm());
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    fmt17(r.a),
                    fmt17(r.a2),
                    fmt17(r.b),
                    fmt17(r.b2),
                    fmt17(res.re),
                    fmt17(res.im),
                    fmt17(res.norm())
                );
            }
            Ok(Output {
                csv: Some(csv),
                out: a.out.clone(),
                summary: format!("max residual {worst:e} over {} rectangles", rects.len()),
            })
        }
        Command::Glue(a) => {
            let line = parse_line(&a.line)?;
            let quad = a.quad.spec()?;
            let lower = read_field(&a.lower)?;
            let upper = read_field(&a.upper)?;
            let r = glue_residual(&lower, &upper, line, &quad)?;
            Ok(Output { summary: format!("glue residual {r:e}"), ..Output::default() })
        }
        Command::Laplace(a) => {
            let mut f = parse_function(&a.f)?;
            if let Some(g) = &a.growth {
                f = f.with_growth(GrowthBound::new(g[0], g[1], g[2])?);
            }
            let zeta = parse_complex(&a.zeta)?;
            let quad = a.quad.spec()?;
            let ev = match a.xmax {
                Some(x) => laplace(&f, zeta, finite("xmax", x)?, &quad)?,
                None => laplace_auto(&f, zeta, &quad)?,
            };
            Ok(Output {
                summary: format!(
                    "L[{f}]({}) = {} {} i (tail bound {:e}, x_max {})",
                    a.zeta,
                    fmt17(ev.value.re),
                    fmt17(ev.value.im),
                    ev.tail_bound,
                    fmt17(ev.x_max)
                ),
                ..Output::default()
            })
        }
        Command::EvolveCheck(a) => {
            let f = parse_function(&a.f)?;
            let grid = GridArgs { xmax: a.xmax, ymin: a.ymin, nx: a.nx, ny: a.ny }.grid()?;
            let quad = a.quad.spec()?;
            let zetas = a.zetas.iter().map(|z| parse_complex(z)).collect::<Result<Vec<_>, _>>()?;
            let rows = evolution_rows(&f, &grid, &quad, &zetas, &a.ys)?;
            let mut csv = format!("# {header}\nre_zeta,im_zeta,y,re_lhs,im_lhs,re_rhs,im_rhs,deviation\n");
            let mut worst = 0.0_f64;
            for r in &rows {
                worst = worst.max(r.deviation);
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    fmt17(r.zeta.re),
                    fmt17(r.zeta.im),
                    fmt17(r.y),
                    fmt17(r.lhs.re),
                    fmt17(r.lhs.im),
                    fmt17(r.rhs.re),
                    fmt17(r.rhs.im),
                    fmt17(r.deviation)
                );
            }
            Ok(Output {
                csv: Some(csv),
                out: a.out.clone(),
                summary: format!("max evolution deviation {worst:e} over {} rows", rows.len()),
            })
        }
        Command::Regime(a) => {
            let r = regime_classify(a.q, a.theta1, a.theta2)?;
            let csv = a.out.as_ref().map(|_| {
                format!(
                    "# {header}\nq,theta1,theta2,verdict,theorem\n{},{},{},{},{}\n",
                    fmt17(a.q),
                    fmt17(a.theta1),
                    fmt17(a.theta2),
                    r.verdict,
                    r.theorem
                )
            });
            Ok(Output { csv, out: a.out.clone(), summary: r.to_string() })
        }
        Command::BoundSweep(a) => {
            let rows = bound_sweep(&a.qs, &a.thetas, &a.sigmas)?;
            let mut csv = format!("# {header}\nq,theta,sigma,integral,bound,ok\n");
            for r in &rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    fmt17(r.q),
                    fmt17(r.theta),
                    fmt17(r.sigma),
                    fmt17(r.integral),
                    fmt17(r.bound),
                    r.ok
                );
            }
            let bad = rows.iter().filter(|r| !r.ok).count();
            Ok(Output {
                csv: Some(csv),
                out: a.out.clone(),
                summary: format!("{} cells, {bad} violations", rows.len()),
            })
        }
        Command::Covering(a) => {
            let spec = CoveringSpec::new(a.ys.clone(), a.m, a.q, a.y1, a.depth)?;
            let summary = match q_covering_witness(&spec)? {
                None => "true".to_string(),
                Some(y) => format!("false (first uncovered point {})", fmt17(y)),
            };
            Ok(Output { summary, ..Output::default() })
        }
        Command::Legendre(a) => {
            let mut csv = format!("# {header}\nt,beta_star,asymptotic\n");
            for &t in &a.t {
                let b = legendre_conjugate_beta(a.theta2, t)?;
                let _ = writeln!(csv, "{},{},{}", fmt17(t), fmt17(b), fmt17(beta_asymptotic(a.theta2, t)));
            }
            Ok(Output {
                csv: Some(csv),
                out: a.out.clone(),
                summary: format!("beta* at {} points, theta2 = {}", a.t.len(), a.theta2),
            })
        }
        Command::GrowthDemo(a) => {
            let log_i = log_growth_integral(a.q, a.theta, a.sigma)?;
            let log_b = log_lemma_bound(a.q, a.theta, a.sigma)?;
            let bound = lemma_bound(a.q, a.theta, a.sigma)?;
            let anqa = anqa_integral(a.q, a.theta, a.delta)?;
            let limit = anqa.limit.map_or("diverges".to_string(), fmt17);
            Ok(Output {
                summary: format!(
                    "integral {} bound {} (log {} <= {}: {}) anqa({}) {} limit {limit}",
                    fmt17(log_i.exp()),
                    fmt17(bound),
                    fmt17(log_i),
                    fmt17(log_b),
                    log_i <= log_b,
                    a.delta,
                    fmt17(anqa.value)
                ),
                ..Output::default()
            })
        }
    }
}
