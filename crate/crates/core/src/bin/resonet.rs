//! Command-line front end: netlist-driven S-parameter sweeps, mode tables,
//! decay-rate/coupling extraction, resonator time simulation, and ideal
//! coupler tables, all emitted as deterministic CSV.

// `!(v > 0.0)` rejects NaN along with non-positive values; the positive
// comparison clippy suggests would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand, ValueEnum};
use resonet::coupled_lines::backward_coupler_smatrix;
use resonet::csvout::{self, Table};
use resonet::extract::{self, Topology};
use resonet::netlist::{parse_netlist, Netlist};
use resonet::resonator::{integrate, EomKind, ResonatorParams};
use resonet::solver::{self, frequency_grid, Sweep};
use resonet::{Error, Result, C64};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "resonet",
    version,
    about = "Microwave resonator-coupling analysis on SPICE-like netlists"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// S-parameter sweep over a frequency grid.
    Sweep(SweepArgs),
    /// Complex eigenmodes of the matched-terminated network.
    Modes(ModesArgs),
    /// Parameter extraction from a swept S-parameter.
    Extract(ExtractArgs),
    /// Time-domain trajectory of a lumped resonator mode.
    Timesim(TimesimArgs),
    /// Ideal coupled-line coupler S-parameters versus electrical length.
    Coupler(CouplerArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Netlist file path.
    #[arg(long)]
    netlist: PathBuf,
    /// Lower edge of the frequency window (Hz).
    #[arg(long)]
    fmin: f64,
    /// Upper edge of the frequency window (Hz).
    #[arg(long)]
    fmax: f64,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; written atomically. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Number of grid points (>= 2).
    #[arg(long, default_value_t = 1001)]
    points: usize,
    /// S-parameter pairs to emit, e.g. "11,21" or "1:1,2:1".
    /// Defaults to every port pair in row-major order.
    #[arg(long)]
    pairs: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ModesArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(subcommand)]
    what: ExtractWhat,
}

#[derive(Subcommand)]
enum ExtractWhat {
    /// Energy decay rate of an isolated resonance.
    Kappa(KappaArgs),
    /// Coupling coefficient from normal-mode peak splitting.
    Zeta(ZetaArgs),
}

#[derive(Args)]
struct KappaArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Number of grid points (>= 2).
    #[arg(long, default_value_t = 1601)]
    points: usize,
    /// S-parameter pair to analyze, e.g. "11" or "2:1".
    #[arg(long, default_value = "11")]
    pair: String,
    /// Extraction method.
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// -4 / (reflection phase slope) at the inflection.
    PhaseSlope,
    /// Separation of the +-90 degree reflection-phase points.
    PhaseWidth,
    /// 3 dB width of a transmission peak (doubly loaded): kappa_total.
    #[value(name = "3db-doubly")]
    Db3Doubly,
    /// 3 dB width of a transmission dip (side coupled): kappa = 2 x width.
    #[value(name = "3db-side")]
    Db3Side,
    /// Least-squares Lorentzian fit of the reflection phase.
    Lorentzian,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Number of grid points (>= 2).
    #[arg(long, default_value_t = 2001)]
    points: usize,
    /// S-parameter pair carrying the two peaks, e.g. "21".
    #[arg(long, default_value = "21")]
    pair: String,
    /// Bare resonance frequency of the first resonator (Hz).
    #[arg(long)]
    f01: f64,
    /// Bare resonance frequency of the second resonator (Hz).
    #[arg(long)]
    f02: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TimesimArgs {
    /// Inductance (H).
    #[arg(long)]
    l: f64,
    /// Capacitance (F).
    #[arg(long)]
    c: f64,
    /// Series resistance (ohm).
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Shunt conductance (S).
    #[arg(long, default_value_t = 0.0)]
    g: f64,
    /// Initial mode amplitude, real part (sqrt(J)).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    re_a0: f64,
    /// Initial mode amplitude, imaginary part (sqrt(J)).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    im_a0: f64,
    /// End time (s). Defaults to 50 oscillation periods.
    #[arg(long)]
    tmax: Option<f64>,
    /// Time step (s). Defaults to 1/256 of the oscillation period.
    #[arg(long)]
    dt: Option<f64>,
    /// Equation of motion to advance.
    #[arg(long, value_enum, default_value_t = Eom::Exact)]
    eom: Eom,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Eom {
    /// Full dynamics including the conjugate-coupling ripple.
    Exact,
    /// Rotating-wave approximation.
    Rwa,
}

#[derive(Args)]
struct CouplerArgs {
    /// Line-line coupling coefficient zeta (|zeta| < 1).
    #[arg(long, allow_negative_numbers = true)]
    zeta: f64,
    /// Maximum electrical length of the table (degrees).
    #[arg(long)]
    theta: f64,
    /// Number of length samples from 0 to theta inclusive.
    #[arg(long, default_value_t = 91)]
    points: usize,
    /// Coupler sense: backward (coupled port 2) or forward (port 4).
    #[arg(long, value_enum, default_value_t = Sense::Backward)]
    kind: Sense,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sense {
    Backward,
    Forward,
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .parse_default_env()
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                resonet::ErrorClass::Parse => 1u8,
                resonet::ErrorClass::Numeric => 2u8,
                resonet::ErrorClass::FeatureNotFound => 3u8,
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Modes(a) => cmd_modes(a),
        Command::Extract(a) => match a.what {
            ExtractWhat::Kappa(k) => cmd_extract_kappa(k),
            ExtractWhat::Zeta(z) => cmd_extract_zeta(z),
        },
        Command::Timesim(a) => cmd_timesim(a),
        Command::Coupler(a) => cmd_coupler(a),
    }
}

fn load_netlist(path: &PathBuf) -> Result<Netlist> {
    let text = std::fs::read_to_string(path)?;
    parse_netlist(&text)
}

fn emit(out: &OutArgs, content: &str) -> Result<()> {
    let Format::Csv = out.format;
    match &out.out {
        Some(path) => csvout::write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Parse one pair token: "21" (two digits) or "2:1"; 1-based port indices.
fn parse_pair(token: &str, port_count: usize) -> Result<(usize, usize)> {
    let bad = || {
        Error::invalid(format!(
            "bad S-parameter pair '{token}', expected e.g. 21 or 2:1"
        ))
    };
    let (row, col) = if let Some((r, c)) = token.split_once(':') {
        (
            r.parse::<usize>().map_err(|_| bad())?,
            c.parse::<usize>().map_err(|_| bad())?,
        )
    } else {
        let digits: Vec<char> = token.chars().collect();
        if digits.len() != 2 || !digits.iter().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        (
            digits[0].to_digit(10).unwrap() as usize,
            digits[1].to_digit(10).unwrap() as usize,
        )
    };
    if row == 0 || col == 0 || row > port_count || col > port_count {
        return Err(Error::invalid(format!(
            "pair '{token}' out of range for {port_count} port(s)"
        )));
    }
    Ok((row - 1, col - 1))
}

fn parse_pairs(arg: Option<&str>, port_count: usize) -> Result<Vec<(usize, usize)>> {
    match arg {
        Some(s) => s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| parse_pair(t, port_count))
            .collect(),
        None => {
            let mut all = Vec::with_capacity(port_count * port_count);
            for r in 0..port_count {
                for c in 0..port_count {
                    all.push((r, c));
                }
            }
            Ok(all)
        }
    }
}

fn warn_skipped(swept: &Sweep) {
    if !swept.skipped_hz().is_empty() {
        let list: Vec<String> = swept.skipped_hz().iter().map(|f| format!("{f}")).collect();
        log::warn!(
            "{} singular sample(s) skipped at: {} Hz",
            list.len(),
            list.join(", ")
        );
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let net = load_netlist(&a.grid.netlist)?;
    let pairs = parse_pairs(a.pairs.as_deref(), net.port_count())?;
    if pairs.is_empty() {
        return Err(Error::invalid("no S-parameter pairs requested"));
    }
    let grid = frequency_grid(a.grid.fmin, a.grid.fmax, a.points)?;
    let swept = solver::sweep(&net, &grid)?;
    warn_skipped(&swept);

    let mut headers = vec!["freq_hz".to_string()];
    for &(r, c) in &pairs {
        headers.push(format!("re_S{}{}", r + 1, c + 1));
        headers.push(format!("im_S{}{}", r + 1, c + 1));
    }
    let mut table = Table::new(&headers);
    for (i, &f) in swept.freqs_hz().iter().enumerate() {
        let s = swept.s_matrix(i);
        let mut row = Vec::with_capacity(headers.len());
        row.push(f);
        for &(r, c) in &pairs {
            let v = s.at(r, c);
            row.push(v.re);
            row.push(v.im);
        }
        table.push_row(&row);
    }
    emit(&a.out, &table.render())
}

fn cmd_modes(a: ModesArgs) -> Result<()> {
    let net = load_netlist(&a.grid.netlist)?;
    let modes = solver::find_modes(&net, (a.grid.fmin, a.grid.fmax))?;
    let mut table = Table::new(&["f_r_hz", "kappa_over_2pi_hz"]);
    for m in &modes {
        table.push_row(&[m.f_r_hz(), m.kappa_over_2pi_hz()]);
    }
    emit(&a.out, &table.render())
}

fn swept_trace(grid: &GridArgs, points: usize, pair: &str) -> Result<resonet::ComplexTrace> {
    let net = load_netlist(&grid.netlist)?;
    let (r, c) = parse_pair(pair, net.port_count())?;
    let freqs = frequency_grid(grid.fmin, grid.fmax, points)?;
    let swept = solver::sweep(&net, &freqs)?;
    warn_skipped(&swept);
    swept.trace(r, c)
}

fn cmd_extract_kappa(a: KappaArgs) -> Result<()> {
    let trace = swept_trace(&a.grid, a.points, &a.pair)?;
    let fit = match a.method {
        Method::PhaseSlope => extract::kappa_from_phase_slope(&trace)?,
        Method::PhaseWidth => extract::kappa_from_phase_width(&trace)?,
        Method::Db3Doubly => extract::kappa_from_3db(&trace, Topology::DoublyLoaded)?,
        Method::Db3Side => extract::kappa_from_3db(&trace, Topology::SideCoupled)?,
        Method::Lorentzian => extract::lorentzian_phase_fit(&trace)?,
    };
    let mut table = Table::new(&["f0_hz", "kappa_over_2pi_hz", "residual"]);
    table.push_row(&[
        fit.omega0 / (2.0 * PI),
        fit.kappa / (2.0 * PI),
        fit.residual,
    ]);
    emit(&a.out, &table.render())
}

fn cmd_extract_zeta(a: ZetaArgs) -> Result<()> {
    let trace = swept_trace(&a.grid, a.points, &a.pair)?;
    let zeta = extract::zeta_from_peak_splitting(&trace, 2.0 * PI * a.f01, 2.0 * PI * a.f02)?;
    let mut table = Table::new(&["zeta"]);
    table.push_row(&[zeta]);
    emit(&a.out, &table.render())
}

fn cmd_timesim(a: TimesimArgs) -> Result<()> {
    let params = ResonatorParams::with_loss(a.l, a.c, a.r, a.g)?;
    let period = 2.0 * PI / params.omega0();
    let dt = a.dt.unwrap_or(period / 256.0);
    let tmax = a.tmax.unwrap_or(50.0 * period);
    let kind = match a.eom {
        Eom::Exact => EomKind::Exact,
        Eom::Rwa => EomKind::Rwa,
    };
    let path = integrate(kind, C64::new(a.re_a0, a.im_a0), (0.0, tmax), dt, &params)?;
    let mut table = Table::new(&["time_s", "re_a", "im_a"]);
    for (t, v) in path.axis().iter().zip(path.values()) {
        table.push_row(&[*t, v.re, v.im]);
    }
    emit(&a.out, &table.render())
}

fn cmd_coupler(a: CouplerArgs) -> Result<()> {
    if a.points < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 length samples, got {}",
            a.points
        )));
    }
    if !(a.theta > 0.0) || !a.theta.is_finite() {
        return Err(Error::invalid(format!(
            "theta must be positive, got {}",
            a.theta
        )));
    }
    let mut table = Table::new(&[
        "theta_deg",
        "re_S11",
        "im_S11",
        "re_S21",
        "im_S21",
        "re_S31",
        "im_S31",
        "re_S41",
        "im_S41",
    ]);
    for i in 0..a.points {
        let theta_deg = a.theta * i as f64 / (a.points - 1) as f64;
        let theta = theta_deg.to_radians();
        let row_s: [C64; 4] = match a.kind {
            Sense::Backward => {
                let s = backward_coupler_smatrix(a.zeta, theta)?;
                [s.at(0, 0), s.at(0, 1), s.at(0, 2), s.at(0, 3)]
            }
            Sense::Forward => {
                // Matched-impedance pair: no reflection, no backward wave;
                // the modal phases beta(1 -+ zeta) L interfere at the
                // through and forward-coupled ports.
                if !(a.zeta.abs() < 1.0) {
                    return Err(Error::CouplingOutOfRange { value: a.zeta });
                }
                let ph = |t: f64| C64::new(0.0, -t).exp();
                let s31 = 0.5 * (ph(theta * (1.0 - a.zeta)) + ph(theta * (1.0 + a.zeta)));
                let s41 = 0.5 * (ph(theta * (1.0 - a.zeta)) - ph(theta * (1.0 + a.zeta)));
                [C64::new(0.0, 0.0), C64::new(0.0, 0.0), s31, s41]
            }
        };
        let mut row = vec![theta_deg];
        for v in row_s {
            row.push(v.re);
            row.push(v.im);
        }
        table.push_row(&row);
    }
    emit(&a.out, &table.render())
}
