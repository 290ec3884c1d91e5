//! `lorentz-shape`: invariants, reconstruction, matching and self-similar
//! curves from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure. Errors are
//! reported on stderr as `{"error", "message", "exit_code"}`.

mod spec;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorentz_shape::frenet::structure_residual;
use lorentz_shape::io::{load_curve_file, write_curve, write_table, Format};
use lorentz_shape::matching::{DEFAULT_RESIDUAL_TOL, DEFAULT_THRESHOLD};
use lorentz_shape::reconstruction::round_trip_field;
use lorentz_shape::{
    eigenstructure, frenet, generate, hypersurface_residual, match_curves, pshape, reconstruct, verify_selfsimilar,
    Error, MatchOptions, Result, SelfSimilarSpec,
};
use serde_json::json;

use crate::spec::{read_json, ReconstructFile};

#[derive(Parser)]
#[command(name = "lorentz-shape", version, about = "Similarity invariants of non-null curves in Minkowski space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; defaults to the extension of --out, else csv.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

impl Output {
    fn format(&self) -> Format {
        match (self.format, &self.out) {
            (Some(f), _) => f.into(),
            (None, Some(p)) => Format::from_path(p),
            (None, None) => Format::Csv,
        }
    }

    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args)]
struct MatchFlags {
    /// Largest signature distance accepted as a match.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD, value_parser = positive)]
    threshold: f64,
    /// Largest pointwise residual of the recovered map.
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL, value_parser = positive)]
    residual_tol: f64,
}

impl MatchFlags {
    fn options(&self) -> MatchOptions {
        MatchOptions { threshold: self.threshold, residual_tol: self.residual_tol, ..MatchOptions::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Frenet curvatures and p-shape curvatures of a sampled curve.
    Invariants {
        curve: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Frame diagnostics JSON; printed to stdout when --out is given.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
    },
    /// Integrate the frame equations from prescribed invariants.
    Reconstruct {
        spec: PathBuf,
        /// Integrator step in sigma; overrides the spec file.
        #[arg(long, value_parser = positive)]
        step: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether two curves are similar and recover the map.
    Match {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        flags: MatchFlags,
    },
    /// Sample the closed-form self-similar curve of a spec.
    Selfsimilar {
        spec: PathBuf,
        /// Sigma range as start:end.
        #[arg(long, default_value = "0:2", value_parser = parse_range, allow_hyphen_values = true)]
        range: (f64, f64),
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[command(flatten)]
        output: Output,
        /// Eigenstructure report JSON; printed to stdout when --out is given.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Round-trip reconstruction and self-similarity checks of a curve.
    Verify {
        curve: PathBuf,
        spec: PathBuf,
        /// Largest accepted deviation of each p-shape curvature.
        #[arg(long, default_value_t = 1e-5, value_parser = positive)]
        tol: f64,
        #[command(flatten)]
        flags: MatchFlags,
    },
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected start:end")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("empty range {a}:{b}"))
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn write_json_file(path: &Path, v: &serde_json::Value) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, v).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(f)?;
    Ok(())
}

/// Writes a JSON side report to `path`, or to stdout when the main output
/// went to a file.
fn side_report(path: Option<&Path>, main_to_file: bool, v: &serde_json::Value) -> Result<()> {
    match path {
        Some(p) => write_json_file(p, v),
        None if main_to_file => print_json(v),
        None => Ok(()),
    }
}

fn cmd_invariants(curve: &Path, output: &Output, diagnostics: Option<&Path>) -> Result<()> {
    let c = load_curve_file(curve)?.resample_uniform();
    let f = frenet(&c)?;
    let sig = pshape(&f)?;
    let n = f.dim();
    let mut header = vec!["t".to_string(), "s".to_string(), "sigma".to_string()];
    header.extend((1..n).map(|j| format!("kappa{j}")));
    header.extend((1..n).map(|i| format!("ktilde{i}")));
    let rows = (0..f.len()).map(|j| {
        let mut r = vec![f.params()[j], f.arc_length()[j], sig.sigma()[j]];
        r.extend((1..n).map(|k| f.kappa(k)[j]));
        r.extend((1..n).map(|i| sig.ktilde(i)[j]));
        r
    });
    match output.format() {
        Format::Csv => write_table(output.sink()?, &header, rows)?,
        Format::Json => {
            let rows: Vec<Vec<f64>> = rows.collect();
            let cols: serde_json::Map<String, serde_json::Value> = header
                .iter()
                .enumerate()
                .map(|(k, h)| (h.clone(), json!(rows.iter().map(|r| r[k]).collect::<Vec<_>>())))
                .collect();
            let mut sink = output.sink()?;
            serde_json::to_writer_pretty(&mut sink, &cols).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    let diag = json!({
        "dim": n,
        "samples": f.len(),
        "eps": f.eps(),
        "e1": format!("{:?}", f.e1_character()).to_lowercase(),
        "span_dim": f.span_dim(),
        "orthonormality_residual": f.orthonormality_residual(),
        "structure_residual": structure_residual(&f, &sig),
        "confident_samples": [f.confident_range().start, f.confident_range().end],
    });
    side_report(diagnostics, output.out.is_some(), &diag)
}

fn cmd_reconstruct(path: &Path, step: Option<f64>, output: &Output) -> Result<()> {
    let file: ReconstructFile = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut spec = file.into_spec(base)?;
    if let Some(h) = step {
        spec = spec.with_step(h);
    }
    let rec = reconstruct(&spec)?;
    write_curve(output.sink()?, &rec.curve, output.format())
}

fn cmd_match(a: &Path, b: &Path, flags: &MatchFlags) -> Result<()> {
    let (ca, cb) = (load_curve_file(a)?, load_curve_file(b)?);
    let rep = match_curves(&ca.resample_uniform(), &cb.resample_uniform(), &flags.options())?;
    print_json(&rep.to_json())
}

fn cmd_selfsimilar(
    path: &Path,
    range: (f64, f64),
    samples: usize,
    output: &Output,
    report: Option<&Path>,
) -> Result<()> {
    let spec: SelfSimilarSpec = read_json(path)?;
    spec.validate()?;
    let es = eigenstructure(&spec)?;
    let c = generate(&spec, range, samples)?;
    let resid = hypersurface_residual(&c, &spec)?;
    write_curve(output.sink()?, &c, output.format())?;
    let rep = json!({
        "eigenstructure": es,
        "hypersurface_residual": resid,
        "sigma_range": [range.0, range.1],
        "samples": samples,
    });
    side_report(report, output.out.is_some(), &rep)
}

fn cmd_verify(curve: &Path, spec: &Path, tol: f64, flags: &MatchFlags) -> Result<()> {
    let c = load_curve_file(curve)?.resample_uniform();
    let spec: SelfSimilarSpec = read_json(spec)?;
    spec.validate()?;
    let f = frenet(&c)?;
    let rt = round_trip_field(&f)?;
    let ss = verify_selfsimilar(&c, &spec, &flags.options())?;
    let passed = ss.passed(tol) && rt.max_deviation <= flags.residual_tol;
    print_json(&json!({
        "passed": passed,
        "round_trip": {
            "max_deviation": rt.max_deviation,
            "sigma_range": [rt.sigma_range.0, rt.sigma_range.1],
            "samples_compared": rt.samples_compared,
        },
        "selfsimilar": ss,
        "tolerance": tol,
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Invariants { curve, output, diagnostics } => cmd_invariants(&curve, &output, diagnostics.as_deref()),
        Command::Reconstruct { spec, step, output } => cmd_reconstruct(&spec, step, &output),
        Command::Match { a, b, flags } => cmd_match(&a, &b, &flags),
        Command::Selfsimilar { spec, range, samples, output, report } => {
            cmd_selfsimilar(&spec, range, samples, &output, report.as_deref())
        }
        Command::Verify { curve, spec, tol, flags } => cmd_verify(&curve, &spec, tol, &flags),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            let payload = json!({ "error": e.name(), "message": e.to_string(), "exit_code": code });
            eprintln!("{payload}");
            ExitCode::from(code)
        }
    }
}
