//! The `gl3` command-line driver: argument parsing, command dispatch and result files.

pub mod config;
pub mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gl3_core::arith::{kloosterman, weil_bound};
use gl3_core::circle::{delta_eval, CircleConfig};
use gl3_core::gl3::{
    afe_value, d3_full_table, d3_table, gamma_pm, load_coefficients, stirling_phi, voronoi_check, AfeConfig, CoefficientTable, GFactor,
    GL3Params, Sign,
};
use gl3_core::jet::Jet;
use gl3_core::oscillatory::weight::{standard_u, standard_v};
use gl3_core::oscillatory::{
    derivative_test_bound, fm_stationary_point, fourier_mellin_exact, fourier_mellin_main, huxley_boundary, huxley_stationary, quad_osc_1d,
    PhaseSpec, SmoothWeight,
};
use gl3_core::pipeline::{bound_scan, s_direct, s_pm_circle, snc_assemble, PipelineConfig};
use gl3_core::special::zeta::zeta;
use gl3_core::{Cplx, Error, Result};
use output::{cplx, Cell, Format, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "gl3", version, about = "Numerical experiments for the delta method on GL(3) L-functions")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// `key = value` file; flags on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for sampled grids.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Record wall-clock time in the metadata (the output is then no longer reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightName {
    /// The plateau weight `U` on `[1/2, 5/2]`.
    U,
    /// The bump weight `V` on `[1, 2]`.
    V,
}

impl WeightName {
    fn weight(self) -> SmoothWeight<f64> {
        match self {
            WeightName::U => standard_u(),
            WeightName::V => standard_v(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kloosterman sums S(a, b; c) over a range of moduli with their Weil-bound margins.
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// Single modulus; overrides the range.
        #[arg(long)]
        c: Option<i64>,
        #[arg(long, default_value_t = 1)]
        c_min: i64,
        #[arg(long, default_value_t = 10)]
        c_max: i64,
    },
    /// The circle-method expansion of δ(n = 0).
    Delta {
        /// Single n; overrides the range.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        n_max: i64,
        /// Farey parameter Q.
        #[arg(long, default_value_t = 4)]
        q: i64,
    },
    /// Fourier–Mellin transforms: exact value, stationary-phase main term and residual.
    Udagger {
        #[arg(long, value_enum, default_value_t = WeightName::U)]
        weight: WeightName,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![-16.0, -64.0, -256.0, -1024.0, -4096.0])]
        r: Vec<f64>,
        /// Imaginary parts of s. Without `--beta` and `--x-star`, `--samples` stationary points are
        /// drawn inside the support of the weight and used for every r.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
        /// Stationary points x*; each gives β = 2π x* r for every r.
        #[arg(long, value_delimiter = ',')]
        x_star: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
    },
    /// Stationary-phase and first-derivative expansions for f = T x² against the quadrature oracle.
    HuxleyDemo {
        #[arg(long, value_delimiter = ',', default_values_t = vec![100.0, 1000.0, 10000.0])]
        t: Vec<f64>,
    },
    /// γ±(σ + iτ) and the normalized Stirling factors Φ±(τ).
    Gamma3 {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![-0.5])]
        sigma: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = vec![10.0])]
        tau: Vec<f64>,
        #[arg(long, default_value_t = 1.0 / 3.0, allow_hyphen_values = true)]
        nu1: f64,
        #[arg(long, default_value_t = 1.0 / 3.0, allow_hyphen_values = true)]
        nu2: f64,
    },
    /// Both sides of the GL(3) Voronoi formula on a coefficient file.
    Voronoi {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1])]
        q: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        a: i64,
        /// Centre of the log-Gaussian test weight (default: well inside the table's range).
        #[arg(long)]
        center: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        width: f64,
    },
    /// L(1/2 + it) by the approximate functional equation; with the built-in d₃ table also ζ³.
    Afe {
        #[arg(long, value_delimiter = ',', default_values_t = vec![5.0, 10.0, 20.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long)]
        table: Option<PathBuf>,
        /// Truncation as a multiple of the suggested length.
        #[arg(long, default_value_t = 20)]
        length_factor: u64,
        /// Gaussian scale of the pole-killing G.
        #[arg(long, default_value_t = 0.25)]
        g_scale: f64,
    },
    /// S(N) directly and through the circle-method split S⁺ + S⁻; optionally the S(N, C) assembly.
    Pipeline {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        q: i64,
        /// Also assemble S(N, C) for this dyadic block (requires Q inside its window).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        r_max_factor: Option<f64>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// |S(N)| against N^{3/4} t^{3/10} over a grid of N.
    Scan {
        #[arg(long)]
        t: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<f64>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Format(_) | Error::Io(_) | Error::InsufficientData(_) | Error::NonCuspidal(_) | Error::Normalization(_) => 2,
        Error::WindowViolation(_) => 3,
        Error::BudgetExceeded(_) => 4,
        _ => 1,
    }
}

/// Parses `args` (after merging the config file), runs the command and writes the result.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let started = Instant::now();
    let mut table = gl3_core::sweep::with_workers(cli.common.workers, || run(&cli.command, &cli.common))??;
    table.meta("seed", cli.common.seed);
    if cli.common.timing {
        table.meta("runtime_s", started.elapsed().as_secs_f64());
    }
    let text = table.render(cli.common.format)?;
    match &cli.common.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(Error::from)
        }
    }
}

/// Runs one command and returns its table.
pub fn run(cmd: &Command, common: &Common) -> Result<Table> {
    match cmd {
        Command::Kloosterman { a, b, c, c_min, c_max } => {
            let (lo, hi) = c.map_or((*c_min, *c_max), |c| (c, c));
            cmd_kloosterman(*a, *b, lo, hi)
        }
        Command::Delta { n, n_min, n_max, q } => {
            let (lo, hi) = n.map_or((*n_min, *n_max), |n| (n, n));
            cmd_delta(lo, hi, *q)
        }
        Command::Udagger { weight, r, beta, x_star, samples, sigma, tol } => cmd_udagger(*weight, r, beta, x_star, *samples, *sigma, *tol, common.seed),
        Command::HuxleyDemo { t } => cmd_huxley(t),
        Command::Gamma3 { sigma, tau, nu1, nu2 } => cmd_gamma3(sigma, tau, GL3Params::from_real(*nu1, *nu2)),
        Command::Voronoi { table, q, a, center, width } => cmd_voronoi(table, q, *a, *center, *width),
        Command::Afe { t, sigma, table, length_factor, g_scale } => cmd_afe(t, *sigma, table.as_ref(), *length_factor, *g_scale),
        Command::Pipeline { n, t, q, c, r_max_factor, table } => cmd_pipeline(*n, *t, *q, *c, *r_max_factor, table.as_ref()),
        Command::Scan { t, n_grid, table } => cmd_scan(*t, n_grid, table.as_ref(), common.seed),
    }
}

pub fn cmd_kloosterman(a: i64, b: i64, c_min: i64, c_max: i64) -> Result<Table> {
    if c_min < 1 {
        return Err(Error::InvalidArgument(format!("moduli must be positive (c_min = {c_min})")));
    }
    let mut t = Table::new("kloosterman", &["a", "b", "c", "re", "im", "abs", "weil_bound", "margin"]);
    for c in c_min..=c_max {
        let s = kloosterman(a, b, c);
        let w = weil_bound(a, b, c);
        let [re, im] = cplx(s);
        t.push(vec![a.into(), b.into(), c.into(), re, im, s.norm().into(), w.into(), (w - s.norm()).into()]);
    }
    Ok(t)
}

pub fn cmd_delta(n_min: i64, n_max: i64, q: i64) -> Result<Table> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("Q = {q} must be positive")));
    }
    let cfg = CircleConfig::new(q);
    let mut t = Table::new("delta", &["n", "q", "delta", "expected", "residual"]);
    for n in n_min..=n_max {
        let d = delta_eval(n, &cfg);
        let want = if n == 0 { 1.0 } else { 0.0 };
        t.push(vec![n.into(), q.into(), d.into(), want.into(), (d - want).abs().into()]);
    }
    Ok(t)
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
fn log_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in pts {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let den = n * sxx - sx * sx;
    if den == 0.0 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / den;
    Some((slope, (sy - slope * sx) / n))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_udagger(weight: WeightName, rs: &[f64], betas: &[f64], x_star: &[f64], samples: usize, sigma: f64, tol: f64, seed: u64) -> Result<Table> {
    let u = weight.weight();
    let (lo, hi) = u.support;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // the same stationary points at every r, so that the fit sees one profile per point
    let xs: Vec<f64> = if x_star.is_empty() {
        (0..samples).map(|_| rng.gen_range(lo + 0.05 * (hi - lo)..hi - 0.05 * (hi - lo))).collect()
    } else {
        x_star.to_vec()
    };
    let mut jobs = Vec::new();
    for &r in rs {
        if r == 0.0 {
            return Err(Error::InvalidArgument("r = 0 is excluded".into()));
        }
        if betas.is_empty() {
            jobs.extend(xs.iter().map(|&x| (r, std::f64::consts::TAU * x * r)));
        } else {
            jobs.extend(betas.iter().map(|&b| (r, b)));
        }
    }
    let rows = gl3_core::sweep::try_ordered_map(&jobs, |&(r, beta)| -> Result<(f64, f64, Cplx, f64, Cplx)> {
        let s = Cplx::new(sigma, beta);
        let ex = fourier_mellin_exact(&u, r, s, tol)?;
        Ok((r, beta, ex.value, ex.err_est, fourier_mellin_main(&u, r, s)))
    })?;
    let mut t = Table::new(
        "udagger",
        &["r", "beta", "sigma", "x_star", "in_support", "exact_re", "exact_im", "main_re", "main_im", "residual", "quad_err"],
    );
    let mut fit = Vec::new();
    for (r, beta, ex, err, main) in rows {
        let xs = fm_stationary_point(r, beta);
        let inside = xs > lo && xs < hi;
        let res = (ex - main).norm();
        if inside && res > 0.0 {
            fit.push((r.abs().min(beta.abs()), res));
        }
        let [er, ei] = cplx(ex);
        let [mr, mi] = cplx(main);
        t.push(vec![r.into(), beta.into(), sigma.into(), xs.into(), inside.into(), er, ei, mr, mi, res.into(), err.into()]);
    }
    let f = log_fit(&fit);
    t.meta("weight", format!("{weight:?}"));
    t.meta("fit_exponent", f.map(|f| f.0));
    t.meta("fit_constant", f.map(|f| f.1.exp()));
    t.meta("fit_points", fit.len());
    Ok(t)
}

pub fn cmd_huxley(ts: &[f64]) -> Result<Table> {
    let mut t = Table::new(
        "huxley-demo",
        &["kind", "t", "oracle_re", "oracle_im", "expansion_re", "expansion_im", "difference", "envelope", "ratio", "second_derivative_bound"],
    );
    for &tt in ts {
        if !(tt >= 1.0) {
            return Err(Error::InvalidArgument(format!("T = {tt} must be at least 1")));
        }
        let f = PhaseSpec::from_jet(move |x: Jet<f64>| (x * x).scale(tt));
        // stationary point at 0, inside the support of a bump
        let g = SmoothWeight::bump(-1.0, 1.0);
        let fs = f.clone().scales(tt, 1.0, 0.25);
        let (main, _) = huxley_stationary(&g, &fs, -1.0, 1.0)?;
        let oracle = quad_osc_1d(&g, &fs, -1.0, 1.0, 1e-11)?;
        let bound = derivative_test_bound(&g, &fs, -1.0, 1.0, 2)?;
        push_expansion(&mut t, "stationary", tt, oracle.value, main.value, main.err_est, bound);
        // no stationary point; flat weight with endpoints at 1/2 and 3/2
        let g = SmoothWeight::one(0.5, 1.5);
        let fb = f.scales(tt, 1.0, 1.0);
        let bnd = huxley_boundary(&g, &fb, 0.5, 1.5)?;
        let oracle = quad_osc_1d(&g, &fb, 0.5, 1.5, 1e-11)?;
        let bound = derivative_test_bound(&g, &fb, 0.5, 1.5, 1)?;
        push_expansion(&mut t, "boundary", tt, oracle.value, bnd.value, bnd.err_est, bound);
    }
    Ok(t)
}

fn push_expansion(t: &mut Table, kind: &str, tt: f64, oracle: Cplx, main: Cplx, env: f64, bound: f64) {
    let d = (oracle - main).norm();
    let [or, oi] = cplx(oracle);
    let [mr, mi] = cplx(main);
    t.push(vec![kind.into(), tt.into(), or, oi, mr, mi, d.into(), env.into(), (d / env).into(), bound.into()]);
}

pub fn cmd_gamma3(sigmas: &[f64], taus: &[f64], p: GL3Params) -> Result<Table> {
    let mut t = Table::new(
        "gamma3",
        &[
            "sigma", "tau", "gamma_plus_re", "gamma_plus_im", "gamma_minus_re", "gamma_minus_im", "phi_plus_re", "phi_plus_im", "phi_minus_re",
            "phi_minus_im",
        ],
    );
    for &sigma in sigmas {
        for &tau in taus {
            let s = Cplx::new(sigma, tau);
            let mut row: Vec<Cell> = vec![sigma.into(), tau.into()];
            for sign in Sign::BOTH {
                row.extend(cplx(gamma_pm(s, sign, &p)?));
            }
            for sign in Sign::BOTH {
                row.extend(cplx(stirling_phi(tau, sign, &p)?));
            }
            t.push(row);
        }
    }
    t.meta("nu1", p.nu1.re);
    t.meta("nu2", p.nu2.re);
    Ok(t)
}

pub fn cmd_voronoi(path: &PathBuf, qs: &[i64], a: i64, center: Option<f64>, width: f64) -> Result<Table> {
    let table = load_coefficients(path)?;
    let depth = table.first_row_depth() as f64;
    let center = center.unwrap_or((depth / (2.0 * (width * 80f64.sqrt()).exp())).max(1.0));
    let h = SmoothWeight::log_gaussian(center, width);
    if h.support.1 > depth {
        return Err(Error::InsufficientData(format!("test weight reaches {} but the first row stops at {depth}", h.support.1)));
    }
    let mut t = Table::new(
        "voronoi",
        &["q", "a", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "budget", "within_budget", "dual_terms", "y_cut"],
    );
    for &q in qs {
        let rep = voronoi_check(&table, a, q, &h)?;
        let [lr, li] = cplx(rep.lhs);
        let [rr, ri] = cplx(rep.rhs);
        t.push(vec![
            q.into(),
            a.into(),
            lr,
            li,
            rr,
            ri,
            rep.residual.into(),
            rep.budget.into(),
            rep.within_budget().into(),
            rep.dual.terms.into(),
            rep.dual.y_cut.into(),
        ]);
    }
    t.meta("table", table.source.clone());
    t.meta("weight_center", center);
    t.meta("weight_width", width);
    Ok(t)
}

fn read_table(path: Option<&PathBuf>, fallback: impl FnOnce() -> CoefficientTable) -> Result<(CoefficientTable, bool)> {
    match path {
        Some(p) => Ok((load_coefficients(p)?, false)),
        None => Ok((fallback(), true)),
    }
}

pub fn cmd_afe(ts: &[f64], sigma: f64, path: Option<&PathBuf>, factor: u64, g_scale: f64) -> Result<Table> {
    let longest = ts.iter().map(|&t| factor * AfeConfig::suggested_length(t)).max().unwrap_or(1);
    let (table, builtin) = read_table(path, || d3_table(longest))?;
    let mut t = Table::new("afe", &["t", "value_re", "value_im", "err_est", "truncation", "zeta3_re", "zeta3_im", "difference"]);
    for &tt in ts {
        let s = Cplx::new(sigma, tt);
        let len = factor * AfeConfig::suggested_length(tt);
        let cfg = AfeConfig::new(s, len).with_g(GFactor::PoleKilling { scale: g_scale });
        let r = afe_value(&table, &table.params, &cfg)?;
        for w in &r.warnings {
            eprintln!("warning: t = {tt}: {w}");
        }
        let oracle = builtin.then(|| {
            let z = zeta(s);
            z * z * z
        });
        let [vr, vi] = cplx(r.value);
        t.push(vec![
            tt.into(),
            vr,
            vi,
            r.err_est.into(),
            len.into(),
            oracle.map(|z| z.re).into(),
            oracle.map(|z| z.im).into(),
            oracle.map(|z| (z - r.value).norm()).into(),
        ]);
    }
    t.meta("table", table.source.clone());
    t.meta("g_scale", g_scale);
    Ok(t)
}

pub fn cmd_pipeline(n: f64, tt: f64, q: i64, c: Option<f64>, r_max_factor: Option<f64>, path: Option<&PathBuf>) -> Result<Table> {
    let mut cfg = PipelineConfig::new(n, tt, q)?;
    if let Some(f) = r_max_factor {
        cfg.r_max_factor = f;
    }
    cfg.check_desk()?;
    let (table, builtin) = read_table(path, || d3_table((3.0 * n).ceil() as u64))?;
    let (u, v) = (standard_u(), standard_v());
    let direct = s_direct(&table, &cfg, &v)?;
    let split = s_pm_circle(&table, &cfg, &u, &v)?;
    let mut cols = vec![
        "n", "t", "q", "in_window", "direct_re", "direct_im", "s_plus_re", "s_plus_im", "s_minus_re", "s_minus_im", "total_re", "total_im",
        "residual", "err_est", "nodes", "farey_terms",
    ];
    let mut row: Vec<Cell> = vec![n.into(), tt.into(), q.into(), cfg.in_window().into()];
    row.extend(cplx(direct));
    row.extend(cplx(split.s_plus));
    row.extend(cplx(split.s_minus));
    row.extend(cplx(split.total));
    row.extend([(split.total - direct).norm().into(), split.err_est.into(), split.nodes.into(), split.farey_terms.into()]);
    if let Some(c) = c {
        let full = if builtin { d3_full_table(cfg.n_max().ceil() as u64) } else { table.clone() };
        let rep = snc_assemble(&full, &cfg, c, &u, &v)?;
        cols.extend(["c", "snc_total_re", "snc_total_im", "snc_direct_re", "snc_direct_im", "snc_quad_err", "s2_abs", "s2_envelope", "tau_nodes"]);
        row.push(c.into());
        row.extend(cplx(rep.total));
        row.extend(cplx(rep.direct));
        row.extend([rep.quad_err.into(), rep.s2.norm().into(), rep.s2_envelope.into(), rep.tau_nodes.into()]);
    }
    let mut t = Table::new("pipeline", &cols);
    t.push(row);
    t.meta("table", table.source.clone());
    t.meta("eps", cfg.eps);
    t.meta("r_max_factor", cfg.r_max_factor);
    t.meta("tol", cfg.tol);
    Ok(t)
}

pub fn cmd_scan(tt: f64, grid: &[f64], path: Option<&PathBuf>, seed: u64) -> Result<Table> {
    let n_top = grid.iter().cloned().fold(0.0, f64::max);
    let (table, _) = read_table(path, || d3_table((3.0 * n_top).ceil().max(1.0) as u64))?;
    let rep = bound_scan(&table, tt, grid, &standard_v(), Some(seed))?;
    let mut t = Table::new(
        "scan",
        &["n", "t", "q", "q_nominal", "clamped", "window_empty", "abs_s", "envelope", "ratio", "terms", "budget"],
    );
    for r in &rep.rows {
        t.push(vec![
            r.n.into(),
            r.t.into(),
            r.q.into(),
            r.q_nominal.into(),
            r.clamped.into(),
            r.window_empty.into(),
            r.abs_s.into(),
            r.envelope.into(),
            r.ratio.into(),
            r.terms.into(),
            r.budget.into(),
        ]);
    }
    t.meta("scan_schema_version", rep.schema_version as u64);
    t.meta("eps", rep.metadata.eps);
    t.meta("table", rep.metadata.table_source.clone());
    t.meta("table_truncation", rep.metadata.table_truncation);
    t.meta("first_row_depth", rep.metadata.first_row_depth);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&Error::Format("x".into())), 2);
        assert_eq!(exit_code(&Error::Io("x".into())), 2);
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 2);
        assert_eq!(exit_code(&Error::WindowViolation("x".into())), 3);
        assert_eq!(exit_code(&Error::BudgetExceeded("x".into())), 4);
        assert_eq!(exit_code(&Error::QuadratureNonConvergence { tol: 1e-9, err_est: 1.0, nodes: 3 }), 1);
    }

    #[test]
    fn log_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [16.0, 64.0, 256.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(-1.5))).collect();
        let (s, c) = log_fit(&pts).unwrap();
        assert!((s + 1.5).abs() < 1e-12 && (c.exp() - 3.0).abs() < 1e-10);
        assert!(log_fit(&pts[..1]).is_none());
    }
}
