//! Command-line front end: build the models, run verification suites,
//! render reports.
//!
//! Exit codes: 0 success, 1 verification finding (an expectation
//! mismatch), 2 usage error, 3 internal error.

mod jobs;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stgq::report::RunReport;

#[derive(Parser)]
#[command(name = "stgq", about = "finite quadrangle models and verification suites", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and write it to a geometry/group/family file.
    Build {
        /// w | h3 | heisenberg | suzuki-tits | coset | classical-family | suzuki-family
        #[arg(long)]
        model: String,
        #[arg(long)]
        q: usize,
        /// Heisenberg dimension parameter.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write the report artifact.
    Verify {
        /// gq | kantor | stgq | benson | star | moufang | averaging | ar1 |
        /// semifield | twist | frattini | pcp | all
        #[arg(long)]
        suite: String,
        /// w | h3 | suzuki-tits
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        q: Option<usize>,
        /// geometry file input (alternative to --model)
        #[arg(long)]
        geometry: Option<PathBuf>,
        /// family file input (alternative to --model)
        #[arg(long)]
        group: Option<PathBuf>,
        /// base point id; defaults to the elation point
        #[arg(long)]
        point: Option<usize>,
        /// unlock the long-running checks
        #[arg(long)]
        deep: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// report artifact path
        #[arg(long, default_value = "stgq_run.json")]
        out: PathBuf,
        /// expected-results file (`check:subject=verdict` lines)
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Render the report artifact written by a previous verify run.
    Report {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// artifact path (the verify --out path)
        #[arg(long, default_value = "stgq_run.json")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal: {m}"),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Build { model, q, n, out } => build(&model, q, n, out),
        Command::Verify { suite, model, q, geometry, group, point, deep, format, out, expect } => {
            let ctx = suites::Context::resolve(model.as_deref(), q, geometry, group, point, deep)?;
            let report = suites::run_suite(&suite, &ctx)?;
            let json = report.render_json();
            std::fs::write(&out, &json)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", out.display())))?;
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{json}"),
            }
            if let Some(path) = expect {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let mismatches = check_expectations(&report, &text)?;
                if !mismatches.is_empty() {
                    for m in &mismatches {
                        eprintln!("expectation mismatch: {m}");
                    }
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Report { format, out } => {
            let text = std::fs::read_to_string(&out)
                .map_err(|e| CliError::Usage(format!("no run artifact at {}: {e}", out.display())))?;
            let report = parse_artifact(&text)?;
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{}", report.render_json()),
            }
            Ok(0)
        }
    }
}

fn build(model: &str, q: usize, n: usize, out: Option<PathBuf>) -> Result<u8, CliError> {
    use stgq::io::{write_family, write_geometry, write_group};
    let usage = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
    let (default_name, content, summary) = match model {
        "w" => {
            let m = stgq::classical::build_w(q).map_err(|e| usage(&e))?;
            let comment = format!("symplectic quadrangle W({q}); form X0Y3 + X1Y2 - X2Y1 - X3Y0");
            let (s, t) = m.geometry.order().unwrap();
            (
                format!("w{q}.geom"),
                write_geometry(&m.geometry, Some(&comment)),
                format!("W({q}): order ({s},{t}), {} points, {} lines", m.geometry.n_points(), m.geometry.n_lines()),
            )
        }
        "h3" => {
            let m = stgq::classical::build_h3(q).map_err(|e| usage(&e))?;
            let comment = format!(
                "hermitian quadrangle H(3,{}); form X0^(q+1) + X1^(q+1) + X2^(q+1) + X3^(q+1) = 0",
                q * q
            );
            let (s, t) = m.geometry.order().unwrap();
            (
                format!("h3_{q}.geom"),
                write_geometry(&m.geometry, Some(&comment)),
                format!("H(3,{}): order ({s},{t}), {} points, {} lines", q * q, m.geometry.n_points(), m.geometry.n_lines()),
            )
        }
        "heisenberg" => {
            let g = stgq::grp::heisenberg(n, q).map_err(|e| usage(&e))?;
            (format!("heisenberg_{n}_{q}.grp"), write_group(&g), format!("H_{n}({q}): order {}", g.order()))
        }
        "suzuki-tits" => {
            let g = stgq::grp::suzuki_tits_group(q).map_err(|e| usage(&e))?;
            (format!("suzuki_tits_{q}.grp"), write_group(&g), format!("Suzuki-Tits group at q={q}: order {}", g.order()))
        }
        "classical-family" => {
            let fam = stgq::kantor::classical_w_family(q).map_err(|e| usage(&e))?;
            (
                format!("w{q}.kantor"),
                write_family(&fam),
                format!("classical family: type ({},{}) in a group of order {}", fam.s, fam.t, fam.group.order()),
            )
        }
        "suzuki-family" => {
            let fam = stgq::kantor::suzuki_tits_family(q).map_err(|e| usage(&e))?;
            (
                format!("suzuki_{q}.kantor"),
                write_family(&fam),
                format!("Suzuki-Tits family: type ({},{}) in a group of order {}", fam.s, fam.t, fam.group.order()),
            )
        }
        "coset" => {
            let fam = if q % 2 == 1 {
                stgq::kantor::classical_w_family(q).map_err(|e| usage(&e))?
            } else {
                stgq::kantor::suzuki_tits_family(q).map_err(|e| usage(&e))?
            };
            let cg = stgq::kantor::coset_geometry(&fam);
            let comment = format!(
                "coset geometry of the type ({},{}) family; point 0 is the elation point",
                fam.s, fam.t
            );
            (
                format!("coset_{q}.geom"),
                write_geometry(&cg.geometry, Some(&comment)),
                format!("coset geometry: {} points, {} lines", cg.geometry.n_points(), cg.geometry.n_lines()),
            )
        }
        other => return Err(CliError::Usage(format!("unknown model `{other}`"))),
    };
    let path = out.unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("{summary}");
    println!("wrote {}", path.display());
    Ok(0)
}

/// Expected-results files: one `check:subject=verdict` per line.
fn check_expectations(report: &RunReport, text: &str) -> Result<Vec<String>, CliError> {
    let mut mismatches = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, want) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expectation line {} is not key=verdict", ln + 1)))?;
        let (check, subject) = key
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("expectation key `{key}` is not check:subject")))?;
        match report
            .records
            .iter()
            .find(|r| r.check == check.trim() && r.subject == subject.trim())
        {
            None => mismatches.push(format!("{key}: no such record")),
            Some(r) if r.verdict != want.trim() => {
                mismatches.push(format!("{key}: got `{}`, expected `{}`", r.verdict, want.trim()))
            }
            Some(_) => {}
        }
    }
    Ok(mismatches)
}

/// Reads a run artifact back into a RunReport.
fn parse_artifact(text: &str) -> Result<RunReport, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad artifact: {e}")))?;
    let mut report = RunReport::new(value["command"].as_str().unwrap_or_default());
    let records = value["records"]
        .as_array()
        .ok_or_else(|| CliError::Usage("artifact has no records".into()))?;
    for r in records {
        let mut rec = stgq::report::CheckRecord::new(
            r["check"].as_str().unwrap_or_default(),
            r["subject"].as_str().unwrap_or_default(),
            r["verdict"].as_str().unwrap_or_default().to_string(),
        );
        if let Some(ws) = r["witnesses"].as_array() {
            for w in ws {
                rec.witnesses.push(w.as_str().unwrap_or_default().to_string());
            }
        }
        if let Some(ps) = r["parameters"].as_object() {
            for (k, v) in ps {
                rec.parameters.push((k.clone(), v.as_str().unwrap_or_default().to_string()));
            }
        }
        rec.wall_time_ms = r["wall_time_ms"].as_u64().unwrap_or(0) as u128;
        report.push(rec);
    }
    Ok(report)
}
