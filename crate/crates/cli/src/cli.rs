//! The `fastimd` command.
//!
//! Exit codes: 0 on success, 1 when processing fails (the message names the
//! failing stage), 2 on usage errors.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fastimd::{
    build_eef_with, decompose_image_with, decompose_with, fit_curve, imd_step_with, sample_eef, select_control,
    ControlPoints, EefOptions, EefResult, KnotPlacement, ScanOrder, Selector, Series,
};

use crate::error::FormatError;
use crate::pnm::{read_image, write_fluctuation_image, write_image};
use crate::series_csv::{modes_table, read_series_csv, Layout, ReadOptions, Table};
use crate::svg::{write_plot_svg, PlotSpec};
use crate::write::write_atomic;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fastimd",
    version,
    about = "Equivalent effect functions and fast intrinsic mode decomposition"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a time series into trend/fluctuation modes.
    Decompose {
        #[command(flatten)]
        input: SeriesInput,
        #[command(flatten)]
        spline: SplineArgs,
        /// Upper bound on the number of modes.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        max_modes: u32,
        /// Also write one SVG per mode.
        #[arg(long)]
        plot: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Fit a series with the EEF over its extrema and inflexion points.
    Fit {
        #[command(flatten)]
        input: SeriesInput,
        /// Spline degree, 3 or 5.
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long)]
        plot: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Resample a series with the EEF over a subset of its samples.
    Sample {
        #[command(flatten)]
        input: SeriesInput,
        /// Spline degree, 3 or 5.
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[command(flatten)]
        selector: SelectorArgs,
        #[arg(long)]
        plot: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Decompose a PGM/PPM image into 2D modes.
    Image {
        /// Input PGM or PPM file.
        input: PathBuf,
        #[command(flatten)]
        spline: SplineArgs,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        max_modes: u32,
        /// Scan order: rows first (hv) or columns first (vh).
        #[arg(long, value_enum, default_value_t = Scan::Hv)]
        scan: Scan,
        #[command(flatten)]
        out: OutDir,
    },
    /// Raw EEF of a series. Without a selector the control points of the
    /// first decomposition step are used.
    Eef {
        #[command(flatten)]
        input: SeriesInput,
        #[command(flatten)]
        spline: SplineArgs,
        #[command(flatten)]
        selector: OptionalSelectorArgs,
        #[arg(long)]
        plot: bool,
        #[command(flatten)]
        out: OutDir,
    },
}

#[derive(Debug, Args)]
pub struct SeriesInput {
    /// Input CSV file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = LayoutArg::Generic)]
    pub layout: LayoutArg,
    /// Value column by header name or 0-based index.
    #[arg(long)]
    pub value_column: Option<String>,
    /// Use sample indices instead of the file's times.
    #[arg(long)]
    pub uniform_index: bool,
}

#[derive(Debug, Args)]
pub struct SplineArgs {
    /// Spline degree, 2 to 5.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(2..=5))]
    pub degree: u8,
    /// Knot offset between samples for even degrees, in (0, 1).
    #[arg(long, default_value_t = 0.5, value_parser = parse_alpha)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SelectorArgs {
    /// Use every N-th sample plus the last one.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Comma separated sample indices; both ends are always added.
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct OptionalSelectorArgs {
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct OutDir {
    /// Output directory, created when missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Generic,
    Yahoo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scan {
    Hv,
    Vh,
}

fn parse_alpha(text: &str) -> Result<f64, String> {
    let alpha: f64 = text.parse().map_err(|_| format!("{text:?} is not a number"))?;
    KnotPlacement::new(alpha).map_err(|_| "alpha must lie strictly between 0 and 1".to_owned())?;
    Ok(alpha)
}

/// A failed processing stage.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub source: FormatError,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.source)
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, StageError>;
}

impl<T, E: Into<FormatError>> Stage<T> for Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T, StageError> {
        self.map_err(|e| StageError {
            stage,
            source: e.into(),
        })
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Messages go to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(message) = validate(&cli) {
        eprintln!("error: {message}\n\nFor more information, try '--help'.");
        return EXIT_USAGE;
    }
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("fastimd: {e}");
            EXIT_FAILURE
        }
    }
}

fn validate(cli: &Cli) -> Result<(), String> {
    let (input, degree) = match &cli.command {
        Command::Decompose { input, .. } | Command::Eef { input, .. } => (&input.input, None),
        Command::Fit { input, degree, .. } | Command::Sample { input, degree, .. } => (&input.input, Some(*degree)),
        Command::Image { input, .. } => (input, None),
    };
    if !input.is_file() {
        return Err(format!("input file {} does not exist", input.display()));
    }
    if let Some(d) = degree {
        if d != 3 && d != 5 {
            return Err(format!("--degree must be 3 or 5 for this command, got {d}"));
        }
    }
    if let Command::Sample { selector, .. } = &cli.command {
        if selector.stride == Some(0) {
            return Err("--stride must be at least 1".into());
        }
    }
    Ok(())
}

fn read_input(input: &SeriesInput) -> Result<Series, StageError> {
    let options = ReadOptions {
        layout: match input.layout {
            LayoutArg::Generic => Layout::Generic,
            LayoutArg::Yahoo => Layout::YahooDaily,
        },
        value_column: input.value_column.clone(),
        uniform_index: input.uniform_index,
    };
    read_series_csv(&input.input, &options).stage("reading input")
}

fn eef_options(spline: &SplineArgs) -> Result<EefOptions, StageError> {
    Ok(EefOptions {
        degree: usize::from(spline.degree),
        placement: KnotPlacement::new(spline.alpha).stage("configuring spline")?,
        ..EefOptions::default()
    })
}

fn prepare_out(out: &OutDir) -> Result<&Path, StageError> {
    std::fs::create_dir_all(&out.out).stage("preparing output directory")?;
    Ok(&out.out)
}

fn selector(stride: Option<usize>, indices: &Option<Vec<usize>>) -> Option<Selector> {
    match (stride, indices) {
        (Some(s), _) => Some(Selector::Periodic(s)),
        (None, Some(list)) => Some(Selector::Explicit(list.clone())),
        (None, None) => None,
    }
}

fn control_flags(control: &ControlPoints, len: usize) -> Vec<f64> {
    let mut flags = vec![0.0; len];
    for &i in control.indices() {
        flags[i] = 1.0;
    }
    flags
}

fn series_of(original: &Series, values: &[f64]) -> Result<Series, StageError> {
    original.with_values(values.to_vec()).stage("plotting")
}

/// Runs a parsed command and returns the text printed on success.
pub fn run(cli: &Cli) -> Result<String, StageError> {
    match &cli.command {
        Command::Decompose {
            input,
            spline,
            max_modes,
            plot,
            out,
        } => {
            let series = read_input(input)?;
            let options = eef_options(spline)?;
            let stack = decompose_with(&series, &options, *max_modes as usize).stage("decomposition")?;
            let dir = prepare_out(out)?;
            modes_table(&stack)
                .write(&dir.join("modes.csv"))
                .stage("writing modes.csv")?;
            if *plot {
                for mode in &stack.modes {
                    let n = mode.index;
                    let trend = PlotSpec::new(format!("Mode {n}"))
                        .with("Original", stack.original.clone())
                        .with(format!("Trend {n}"), mode.trend.clone());
                    write_plot_svg(&trend, &dir.join(format!("mode_{n}.svg"))).stage("writing plots")?;
                    let fluct = PlotSpec::new(format!("Fluctuation {n}"))
                        .with(format!("Fluctuation {n}"), mode.fluctuation.clone());
                    write_plot_svg(&fluct, &dir.join(format!("fluctuation_{n}.svg"))).stage("writing plots")?;
                }
            }
            Ok(format!(
                "modes: {}\ntermination: {:?}\n",
                stack.modes.len(),
                stack.terminated
            ))
        }
        Command::Fit {
            input,
            degree,
            plot,
            out,
        } => {
            let series = read_input(input)?;
            let fit = fit_curve(&series, *degree).stage("fitting")?;
            let dir = prepare_out(out)?;
            let mut table = Table::new();
            table.push("time", series.times().to_vec());
            table.push("Original", series.values().to_vec());
            table.push("Fitted", fit.fitted_samples.values().to_vec());
            table.push(
                "Residual",
                series.minus(&fit.fitted_samples).stage("fitting")?.values().to_vec(),
            );
            table.push("Control", control_flags(&fit.control, series.len()));
            table.write(&dir.join("fit.csv")).stage("writing fit.csv")?;
            let report = format!(
                "degree: {degree}\nsamples: {}\ncontrol points: {}\nrms error: {}\ncompression ratio: {}\n",
                series.len(),
                fit.control.len(),
                fit.rms_error,
                fit.compression_ratio
            );
            write_atomic(&dir.join("fit_report.txt"), report.as_bytes()).stage("writing fit_report.txt")?;
            if *plot {
                let spec = PlotSpec::new("Fit")
                    .with("Original", series.clone())
                    .with("Fitted", fit.fitted_samples.clone());
                write_plot_svg(&spec, &dir.join("fit.svg")).stage("writing plots")?;
            }
            Ok(report)
        }
        Command::Sample {
            input,
            degree,
            selector: args,
            plot,
            out,
        } => {
            let series = read_input(input)?;
            let selector = selector(args.stride, &args.indices).expect("clap requires a selector");
            let control = select_control(&selector, series.len(), *degree).stage("sampling")?;
            let eef = sample_eef(&series, &selector, *degree).stage("sampling")?;
            let dir = prepare_out(out)?;
            eef_table(&series, &eef, &control)
                .write(&dir.join("sample.csv"))
                .stage("writing sample.csv")?;
            if *plot {
                let spec = PlotSpec::new("Equivalent effect sampling")
                    .with("Original", series.clone())
                    .with("EEF", eef.eef_samples.clone());
                write_plot_svg(&spec, &dir.join("sample.svg")).stage("writing plots")?;
            }
            Ok(format!("control points: {}\n", control.len()))
        }
        Command::Eef {
            input,
            spline,
            selector: args,
            plot,
            out,
        } => {
            let series = read_input(input)?;
            let options = eef_options(spline)?;
            let control = match selector(args.stride, &args.indices) {
                Some(sel) => select_control(&sel, series.len(), options.degree).stage("selecting control points")?,
                None => {
                    imd_step_with(&series, &options, None)
                        .stage("selecting control points")?
                        .control
                }
            };
            let eef = build_eef_with(&series, &control, &options).stage("building EEF")?;
            let dir = prepare_out(out)?;
            eef_table(&series, &eef, &control)
                .write(&dir.join("eef.csv"))
                .stage("writing eef.csv")?;
            if *plot {
                let spec = PlotSpec::new("Equivalent effect function")
                    .with("Original", series.clone())
                    .with("EEF", eef.eef_samples.clone());
                write_plot_svg(&spec, &dir.join("eef.svg")).stage("writing plots")?;
                let integral = series_of(&series, &eef.cumulative)?;
                let spec = PlotSpec::new("Running integral").with("Integral", integral);
                write_plot_svg(&spec, &dir.join("integral.svg")).stage("writing plots")?;
            }
            Ok(format!("control points: {}\n", control.len()))
        }
        Command::Image {
            input,
            spline,
            max_modes,
            scan,
            out,
        } => {
            let image = read_image(input).stage("reading input")?;
            let options = eef_options(spline)?;
            let order = match scan {
                Scan::Hv => ScanOrder::HorizontalFirst,
                Scan::Vh => ScanOrder::VerticalFirst,
            };
            let modes = decompose_image_with(&image, &options, *max_modes as usize, order).stage("decomposition")?;
            let dir = prepare_out(out)?;
            for mode in &modes {
                let n = mode.index;
                write_image(&mode.trend, &dir.join(format!("mode_{n}_trend.pgm"))).stage("writing images")?;
                write_fluctuation_image(&mode.fluctuation, &dir.join(format!("mode_{n}_fluctuation.pgm")))
                    .stage("writing images")?;
            }
            Ok(format!("modes: {}\n", modes.len()))
        }
    }
}

fn eef_table(series: &Series, eef: &EefResult, control: &ControlPoints) -> Table {
    let mut table = Table::new();
    table.push("time", series.times().to_vec());
    table.push("Original", series.values().to_vec());
    table.push("Integral", eef.cumulative.clone());
    table.push("EEF", eef.eef_samples.values().to_vec());
    table.push("Difference", eef.difference.values().to_vec());
    table.push("Control", control_flags(control, series.len()));
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use fastimd::cumulative_integral;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn alpha_range() {
        assert!(parse_alpha("0.3").is_ok());
        assert!(parse_alpha("0").is_err());
        assert!(parse_alpha("1.5").is_err());
        assert!(parse_alpha("x").is_err());
    }

    #[test]
    fn integral_column_matches_core() {
        let s = Series::uniform(vec![0.0, 1.0, 4.0, 9.0, 16.0, 9.0, 4.0]).unwrap();
        let c = ControlPoints::with_endpoints(vec![3], s.len()).unwrap();
        let eef = build_eef_with(&s, &c, &EefOptions::with_degree(3)).unwrap();
        let t = eef_table(&s, &eef, &c);
        assert_eq!(t.column("Integral").unwrap(), cumulative_integral(&s).as_slice());
        assert_eq!(t.column("Control").unwrap(), &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    }
}
