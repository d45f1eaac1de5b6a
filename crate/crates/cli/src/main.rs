use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigidum_core::pipeline::{self, Command, Exit, ExperimentConfig, Outcome, RunOptions};

#[derive(Parser)]
#[command(name = "rigidum", version, about = "Build and certify rigid systems of glued torsion-free modules")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the designated elements.
    Validate(Common),
    /// Validate and write one presentation per module.
    Build(Common),
    /// Build and write indecomposability, rank and non-isomorphism certificates.
    Certify(Common),
    /// Certify and write a human-readable summary.
    Report(Common),
    /// Compare the membership decision with the brute-force oracle.
    OracleCheck(Common),
    /// Replay the certificates in an output directory.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Depth of the bounded divisibility cross-check.
    #[arg(long)]
    depth: Option<u32>,
    /// Oracle coefficient bound.
    #[arg(long)]
    coeff: Option<u32>,
    /// Oracle exponent bound.
    #[arg(long)]
    exp: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(path: &Path) -> Result<ExperimentConfig, (Exit, String)> {
    let text = fs::read_to_string(path).map_err(|e| (Exit::Io, format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text).map_err(|e| (Exit::Config, e))
}

fn out_dir(flag: Option<PathBuf>, cfg: Option<&ExperimentConfig>) -> PathBuf {
    flag.or_else(|| cfg.and_then(|c| c.output.clone()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_files(dir: &Path, files: &BTreeMap<String, String>) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for (name, text) in files {
        let p = dir.join(name);
        fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn read_bundle(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut files = BTreeMap::new();
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    for entry in entries {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.ends_with(".json") {
            let text = fs::read_to_string(entry.path()).map_err(|e| format!("{name}: {e}"))?;
            files.insert(name, text);
        }
    }
    Ok(files)
}

fn finish(outcome: Outcome, dir: &Path) -> ExitCode {
    if let Err(e) = write_files(dir, &outcome.files) {
        eprintln!("error: {e}");
        return ExitCode::from(Exit::Io.code() as u8);
    }
    for m in &outcome.messages {
        if outcome.exit == Exit::Ok {
            println!("{m}");
        } else {
            eprintln!("{m}");
        }
    }
    if let Some(s) = outcome.files.get("summary.txt") {
        print!("{s}");
    }
    ExitCode::from(outcome.exit.code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, cmd) = match cli.command {
        Cmd::Validate(c) => (c, Command::Validate),
        Cmd::Build(c) => (c, Command::Build),
        Cmd::Certify(c) => (c, Command::Certify),
        Cmd::Report(c) => (c, Command::Report),
        Cmd::OracleCheck(c) => (c, Command::OracleCheck),
        Cmd::Verify(v) => {
            let cfg = match v.config.as_deref().map(load_config).transpose() {
                Ok(c) => c,
                Err((exit, msg)) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(exit.code() as u8);
                }
            };
            let dir = out_dir(v.out, cfg.as_ref());
            let files = match read_bundle(&dir) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(Exit::Io.code() as u8);
                }
            };
            return finish(pipeline::verify_bundle(&files), &dir);
        }
    };
    let cfg = match load_config(&common.config) {
        Ok(c) => c,
        Err((exit, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(exit.code() as u8);
        }
    };
    let opts = RunOptions {
        depth: common.depth,
        coeff: common.coeff,
        exp: common.exp,
        limits: None,
    };
    let outcome = pipeline::run(&cfg, cmd, opts);
    finish(outcome, &out_dir(common.out, Some(&cfg)))
}
