//! Command-line front end.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical domain error, 4 I/O
//! error, 5 bracket/search failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::correlations::quantum_discord;
use crate::device::{thermal_state, DeviceParams, EffectiveParams, ThermalSpec};
use crate::error::Error;
use crate::qmath::Subsystem;
use crate::sweep::{
    esd_temperature, figure_preset, optimal_ratio, sweep_1d, sweep_2d, Axis, CriticalPoint,
    Figure, Fixed, Measure, SweepRow, SweepSpec, DEFAULT_ESD_TOL, DEFAULT_STEPS_1D,
    DEFAULT_STEPS_2D,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_BRACKET: i32 = 5;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(Error),
    Io(String),
    Bracket(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
            CliError::Bracket(_) => EXIT_BRACKET,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(e) => write!(f, "numerical error: {e}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Bracket(m) => write!(f, "search failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Bracket(m) => CliError::Bracket(m),
            Error::InvalidSpec(m) | Error::InvalidParameter(m) => CliError::Config(m),
            other => CliError::Numeric(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "jqdiscord",
    version,
    about = "Thermal quantum discord and entanglement of a two-qubit Josephson charge-qubit circuit"
)]
pub struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (figure: CSV path; other commands: copy of stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV
    #[arg(long, global = true)]
    emit_plot_script: bool,
    /// Read effective Hamiltonian coefficients instead of device controls
    #[arg(long, global = true)]
    dimensionless: bool,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation measures of a single thermal state
    #[command(allow_negative_numbers = true)]
    Report(ParamArgs),
    /// Reproduce one of the preset figure sweeps
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
    },
    /// Locate the sudden-death temperature or the discord-maximizing coupling ratio
    #[command(allow_negative_numbers = true)]
    Critical {
        #[arg(value_enum)]
        kind: CriticalArg,
        /// Upper end of the temperature bracket for `esd`, K
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        /// Bracket width at which `esd` stops, K
        #[arg(long, default_value_t = DEFAULT_ESD_TOL)]
        tol: f64,
        /// Ratio bracket for `ratio`
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 50.0])]
        bracket: Vec<f64>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Generic one- or two-axis sweep
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        variable: String,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        steps: Option<usize>,
        /// Second (outer) axis for a surface sweep
        #[arg(long)]
        y_variable: Option<String>,
        #[arg(long)]
        y_start: Option<f64>,
        #[arg(long)]
        y_stop: Option<f64>,
        #[arg(long)]
        y_steps: Option<usize>,
        /// Comma-separated measures (default: discord)
        #[arg(long, value_delimiter = ',')]
        measures: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig2a => Figure::Fig2a,
            FigureArg::Fig2b => Figure::Fig2b,
            FigureArg::Fig3 => Figure::Fig3,
            FigureArg::Fig4 => Figure::Fig4,
            FigureArg::Fig5 => Figure::Fig5,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriticalArg {
    Esd,
    Ratio,
}

/// Physical and effective parameters; each overrides the config file field of the same name.
#[derive(Debug, Default, Args)]
struct ParamArgs {
    /// Temperature, K
    #[arg(long = "temp", visible_alias = "temperature-k")]
    temperature_k: Option<f64>,
    /// ε₁ = ε₂, K (implies --dimensionless)
    #[arg(long)]
    eps: Option<f64>,
    /// J₁₂, K (implies --dimensionless)
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    eps1_k: Option<f64>,
    #[arg(long)]
    eps2_k: Option<f64>,
    #[arg(long)]
    ej1_k: Option<f64>,
    #[arg(long)]
    ej2_k: Option<f64>,
    #[arg(long)]
    j12_k: Option<f64>,
    /// Shared inductance, H
    #[arg(long)]
    l_h: Option<f64>,
    #[arg(long)]
    c_f: Option<f64>,
    #[arg(long)]
    c_j0_f: Option<f64>,
    #[arg(long)]
    e_j0_k: Option<f64>,
    #[arg(long)]
    n: Option<i64>,
    /// Sets both gate voltages, V
    #[arg(long)]
    v_x: Option<f64>,
    #[arg(long)]
    v_x1_v: Option<f64>,
    #[arg(long)]
    v_x2_v: Option<f64>,
    #[arg(long)]
    phi_e: Option<f64>,
    /// Sets both local fluxes, Φ₀
    #[arg(long)]
    phi_x: Option<f64>,
    #[arg(long)]
    phi_x1: Option<f64>,
    #[arg(long)]
    phi_x2: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
}

impl ParamArgs {
    fn has_effective(&self) -> bool {
        [
            self.eps,
            self.j,
            self.eps1_k,
            self.eps2_k,
            self.ej1_k,
            self.ej2_k,
            self.j12_k,
        ]
        .iter()
        .any(Option::is_some)
    }

    fn has_device(&self) -> bool {
        [
            self.l_h,
            self.c_f,
            self.c_j0_f,
            self.e_j0_k,
            self.v_x,
            self.v_x1_v,
            self.v_x2_v,
            self.phi_e,
            self.phi_x,
            self.phi_x1,
            self.phi_x2,
            self.xi,
        ]
        .iter()
        .any(Option::is_some)
            || self.n.is_some()
    }

    fn apply_effective(&self, e: &mut EffectiveParams) {
        if let Some(x) = self.eps {
            e.eps1 = x;
            e.eps2 = x;
        }
        if let Some(x) = self.j {
            e.j12 = x;
        }
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(x) = src {
                *dst = x;
            }
        };
        set(&mut e.eps1, self.eps1_k);
        set(&mut e.eps2, self.eps2_k);
        set(&mut e.ej1, self.ej1_k);
        set(&mut e.ej2, self.ej2_k);
        set(&mut e.j12, self.j12_k);
    }

    fn apply_device(&self, d: &mut DeviceParams) {
        if let Some(v) = self.v_x {
            *d = d.with_voltage(v);
        }
        if let Some(p) = self.phi_x {
            *d = d.with_phi_x(p);
        }
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(x) = src {
                *dst = x;
            }
        };
        set(&mut d.l_h, self.l_h);
        set(&mut d.c_f, self.c_f);
        set(&mut d.c_j0_f, self.c_j0_f);
        set(&mut d.e_j0_k, self.e_j0_k);
        set(&mut d.v_x1_v, self.v_x1_v);
        set(&mut d.v_x2_v, self.v_x2_v);
        set(&mut d.phi_e, self.phi_e);
        set(&mut d.phi_x1, self.phi_x1);
        set(&mut d.phi_x2, self.phi_x2);
        set(&mut d.xi, self.xi);
        if let Some(n) = self.n {
            d.n = n;
        }
    }
}

/// On-disk JSON configuration.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub device: Option<DeviceParams>,
    pub effective: Option<EffectiveParams>,
    pub thermal: Option<ThermalSpec>,
    pub measures: Option<Vec<Measure>>,
    pub output_path: Option<PathBuf>,
    pub emit_plot_script: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved run configuration: exactly one of `device` / `effective` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub device: Option<DeviceParams>,
    pub effective: Option<EffectiveParams>,
    pub thermal: ThermalSpec,
    pub measures: Vec<Measure>,
    pub output_path: Option<PathBuf>,
    pub emit_plot_script: bool,
}

impl RunConfig {
    pub fn fixed(&self) -> Fixed {
        match (self.effective, self.device) {
            (Some(e), _) => Fixed::Effective(e),
            (None, Some(d)) => Fixed::Device(d),
            (None, None) => Fixed::Device(DeviceParams::default()),
        }
    }

    pub fn effective_params(&self) -> CliResult<EffectiveParams> {
        match self.fixed() {
            Fixed::Effective(e) => {
                e.validate()?;
                Ok(e)
            }
            Fixed::Device(d) => Ok(d.effective()?),
        }
    }
}

fn resolve(cli: &Cli, params: &ParamArgs) -> CliResult<RunConfig> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let want_effective = cli.dimensionless || params.has_effective() || file.effective.is_some();
    let want_device = params.has_device() || file.device.is_some();
    if want_effective && want_device {
        return Err(CliError::Config(
            "give either device parameters or effective (dimensionless) parameters, not both"
                .into(),
        ));
    }
    let (device, effective) = if want_effective {
        let mut e = file.effective.unwrap_or_default();
        params.apply_effective(&mut e);
        (None, Some(e))
    } else {
        let mut d = file.device.unwrap_or_default();
        params.apply_device(&mut d);
        (Some(d), None)
    };
    let mut thermal = file.thermal.unwrap_or_default();
    if let Some(t) = params.temperature_k {
        thermal.temperature_k = t;
    }
    thermal
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(RunConfig {
        device,
        effective,
        thermal,
        measures: file.measures.unwrap_or_else(|| vec![Measure::Discord]),
        output_path: cli.out.clone().or(file.output_path),
        emit_plot_script: cli.emit_plot_script || file.emit_plot_script.unwrap_or(false),
    })
}

/// `%.9g`-style formatting: 9 significant digits, '.' decimal point, no grouping.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let fixed = format!("{:.*}", (8 - exp) as usize, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

const REPORT_HEADER: &str =
    "mutual_information,classical_correlation,discord,concurrence,eof,theta_opt,phi_opt";

/// Header plus one row for the correlation report of `config`'s state.
pub fn report_csv(config: &RunConfig) -> CliResult<String> {
    let eff = config.effective_params()?;
    let rho = thermal_state(&eff, config.thermal)?;
    let r = quantum_discord(&rho, Subsystem::First)?;
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    out.push_str(&csv_line(
        &[
            r.mutual_information,
            r.classical_correlation,
            r.discord,
            r.concurrence,
            r.eof,
            r.optimal_measurement.theta,
            r.optimal_measurement.phi,
        ]
        .map(format_float),
    ));
    Ok(out)
}

fn rows_csv(header: &[String], label: Option<&str>, rows: &[SweepRow], out: &mut String) {
    if out.is_empty() {
        out.push_str(&csv_line(header));
    }
    for r in rows {
        let mut fields: Vec<String> = Vec::with_capacity(header.len());
        if let Some(l) = label {
            fields.push(l.to_string());
        }
        fields.extend(r.axis.iter().chain(&r.values).map(|&x| format_float(x)));
        out.push_str(&csv_line(&fields));
    }
}

fn header_for(spec_x: &SweepSpec, spec_y: Option<&SweepSpec>, with_series: bool) -> Vec<String> {
    let mut h = Vec::new();
    if with_series {
        h.push("series".to_string());
    }
    h.push(spec_x.variable.name().to_string());
    if let Some(y) = spec_y {
        h.push(y.variable.name().to_string());
    }
    h.extend(spec_x.measures.iter().map(|m| m.name().to_string()));
    h
}

/// CSV text for each output file of a figure, as `(file suffix, content, header)`.
/// Single-file figures have an empty suffix; surface figures get one file per series.
pub fn figure_csvs(which: Figure) -> CliResult<Vec<(String, String, Vec<String>)>> {
    let presets = figure_preset(which);
    let surface = presets.iter().any(|p| p.y.is_some());
    let mut files = Vec::new();
    if surface {
        for (k, p) in presets.iter().enumerate() {
            let rows = p.run()?;
            let header = header_for(&p.x, p.y.as_ref(), true);
            let mut text = String::new();
            rows_csv(&header, Some(&p.label), &rows, &mut text);
            let suffix = format!("_{}", (b'a' + k as u8) as char);
            files.push((suffix, text, header));
        }
    } else {
        let header = header_for(&presets[0].x, None, true);
        let mut text = String::new();
        for p in &presets {
            let rows = p.run()?;
            rows_csv(&header, Some(&p.label), &rows, &mut text);
        }
        files.push((String::new(), text, header));
    }
    Ok(files)
}

fn with_suffix(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Gnuplot script plotting every measure column of a CSV written by this tool.
pub fn gnuplot_script(csv: &Path, header: &[String], labels: &[String], surface: bool) -> String {
    let file = csv
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let has_series = header.first().map(|h| h == "series").unwrap_or(false);
    let first_axis = usize::from(has_series) + 1;
    let mut s = String::new();
    s.push_str("# generated by jqdiscord\n");
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!(
        "set terminal pngcairo size 900,600\nset output '{}'\n",
        with_suffix(Path::new(&file), "", "png").display()
    ));
    s.push_str(&format!("set xlabel '{}'\n", header[first_axis - 1]));
    if surface {
        let z = first_axis + 2;
        s.push_str(&format!("set ylabel '{}'\n", header[first_axis]));
        s.push_str("set view map\nset palette rgbformulae 33,13,10\n");
        s.push_str(&format!(
            "splot '{file}' every ::1 using {}:{}:{z} with points pt 5 ps 0.6 palette title '{}'\n",
            first_axis,
            first_axis + 1,
            header[z - 1]
        ));
        return s;
    }
    s.push_str("set key outside right\n");
    let mut clauses = Vec::new();
    for col in first_axis + 1..=header.len() {
        let measure = &header[col - 1];
        if has_series {
            for l in labels {
                clauses.push(format!(
                    "'{file}' every ::1 using {first_axis}:(strcol(1) eq '{l}' ? ${col} : 1/0) with lines title '{measure} {l}'"
                ));
            }
        } else {
            clauses.push(format!(
                "'{file}' every ::1 using {first_axis}:{col} with lines title '{measure}'"
            ));
        }
    }
    let _ = writeln!(s, "plot {}", clauses.join(", \\\n     "));
    s
}

fn critical_csv(cp: &CriticalPoint) -> String {
    let mut s = String::from("kind,location,value_at,bracket_lo,bracket_hi,iterations,boundary\n");
    s.push_str(&csv_line(&[
        cp.kind.name().to_string(),
        format_float(cp.location),
        format_float(cp.value_at),
        format_float(cp.bracket.0),
        format_float(cp.bracket.1),
        cp.iterations.to_string(),
        cp.boundary.to_string(),
    ]));
    s
}

fn parse_axis(name: &str) -> CliResult<Axis> {
    name.parse::<Axis>().map_err(CliError::from)
}

fn emit(text: &str, config: &RunConfig, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(p) = &config.output_path {
        write_file(p, text)?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    match &cli.command {
        Command::Report(params) => {
            let config = resolve(cli, params)?;
            emit(&report_csv(&config)?, &config, stdout)
        }
        Command::Figure { which } => {
            let config = resolve(cli, &ParamArgs::default())?;
            let figure: Figure = (*which).into();
            let out = config
                .output_path
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", figure.name())));
            let presets = figure_preset(figure);
            let surface = presets.iter().any(|p| p.y.is_some());
            let labels: Vec<String> = presets.into_iter().map(|p| p.label).collect();
            for (suffix, text, header) in figure_csvs(figure)? {
                let path = if suffix.is_empty() {
                    out.clone()
                } else {
                    with_suffix(&out, &suffix, "csv")
                };
                write_file(&path, &text)?;
                let _ = writeln!(stdout, "{}", path.display());
                if config.emit_plot_script {
                    let script_path = with_suffix(&path, "", "gp");
                    write_file(&script_path, &gnuplot_script(&path, &header, &labels, surface))?;
                    let _ = writeln!(stdout, "{}", script_path.display());
                }
            }
            Ok(())
        }
        Command::Critical {
            kind,
            t_max,
            tol,
            bracket,
            params,
        } => {
            let config = resolve(cli, params)?;
            let cp = match kind {
                CriticalArg::Esd => esd_temperature(&config.effective_params()?, *t_max, *tol)?,
                CriticalArg::Ratio => {
                    optimal_ratio(config.thermal.temperature_k, (bracket[0], bracket[1]))?
                }
            };
            emit(&critical_csv(&cp), &config, stdout)
        }
        Command::Sweep {
            variable,
            start,
            stop,
            steps,
            y_variable,
            y_start,
            y_stop,
            y_steps,
            measures,
            params,
        } => {
            let config = resolve(cli, params)?;
            let measures = if measures.is_empty() {
                config.measures.clone()
            } else {
                measures
                    .iter()
                    .map(|m| m.trim().parse::<Measure>())
                    .collect::<Result<Vec<_>, _>>()?
            };
            let spec_x = SweepSpec {
                variable: parse_axis(variable)?,
                start: *start,
                stop: *stop,
                steps: steps.unwrap_or(if y_variable.is_some() {
                    DEFAULT_STEPS_2D
                } else {
                    DEFAULT_STEPS_1D
                }),
                fixed: config.fixed(),
                thermal: config.thermal,
                measures,
            };
            let spec_y = match y_variable {
                None => None,
                Some(v) => Some(SweepSpec {
                    variable: parse_axis(v)?,
                    start: y_start.ok_or_else(|| CliError::Config("--y-start missing".into()))?,
                    stop: y_stop.ok_or_else(|| CliError::Config("--y-stop missing".into()))?,
                    steps: y_steps.unwrap_or(DEFAULT_STEPS_2D),
                    ..spec_x.clone()
                }),
            };
            let rows = match &spec_y {
                None => sweep_1d(&spec_x)?,
                Some(y) => sweep_2d(&spec_x, y)?,
            };
            let header = header_for(&spec_x, spec_y.as_ref(), false);
            let mut text = String::new();
            rows_csv(&header, None, &rows, &mut text);
            emit(&text, &config, stdout)?;
            if config.emit_plot_script {
                let csv = config
                    .output_path
                    .clone()
                    .ok_or_else(|| CliError::Config("--emit-plot-script needs --out".into()))?;
                let script = gnuplot_script(&csv, &header, &[], spec_y.is_some());
                write_file(&with_suffix(&csv, "", "gp"), &script)?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs the command, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_CONFIG
                }
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Config("--threads must be >= 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| execute(&cli, &mut buf));
                let _ = stdout.write_all(&buf);
                r
            }
            Err(e) => Err(CliError::Config(format!("thread pool: {e}"))),
        },
        None => {
            let mut buf = Vec::new();
            let r = execute(&cli, &mut buf);
            let _ = stdout.write_all(&buf);
            r
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "jqdiscord: {e}");
            e.exit_code()
        }
    }
}
