//! Subcommands of the `gft` binary. Each returns its full output and exit
//! code so that the binary itself only prints.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gft_core::exactlin::Mat;
use gft_core::fusion::validate_fusion;
use gft_core::outcome::Outcome;
use gft_core::scheme::validate;
use gft_core::transform::{
    is_regular, khat, FusionKernel, Kernel, MatMorphismFamily, Membership, SchemeKernel,
};

use crate::checks::{is_known_check, run_checks, RunOptions, DEFAULT_SEED};
use crate::parse::{parse_dims_matrix, parse_morphism, parse_vector, write_fusion, write_scheme};
use crate::report::{exit_code, render, CheckReport, Document, EntryReport, Format};
use crate::source::{resolve, CorpusEntry, CorpusObject};

pub const REPORT_FORMAT: &str = "gft-report v1";

#[derive(Debug, Parser)]
#[command(
    name = "gft",
    version,
    about = "Exact checks for graphic Fourier transforms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a scheme or fusion ring.
    Validate {
        src: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print intersection numbers or fusion multiplicities.
    Numbers { src: String },
    /// Run the verification suite.
    Check {
        #[arg(required = true)]
        srcs: Vec<String>,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Append wall-clock milliseconds to each check.
        #[arg(long)]
        timings: bool,
    },
    /// Print K̂(f) for a dimension vector.
    Transform {
        src: String,
        #[arg(long)]
        vector: String,
    },
    /// Test the regular-morphism equation for a morphism file.
    Regular {
        src: String,
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Decide whether a dimension matrix lies in the image of K̂.
    Wiener {
        src: String,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Write a generated family to a file.
    Gen {
        spec: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: String,
    pub code: u8,
}

impl Run {
    fn new(output: String, code: u8) -> Self {
        Run { output, code }
    }
}

/// A single ERROR record, exit code 2.
fn input_error(source: &str, check: &str, message: impl Into<String>, format: Format) -> Run {
    let doc = Document {
        format: REPORT_FORMAT,
        seed: DEFAULT_SEED,
        entries: vec![EntryReport {
            source: source.to_string(),
            reports: vec![CheckReport::error(check, message)],
        }],
    };
    Run::new(render(&doc, format), 2)
}

fn single(check: &str, outcome: Outcome) -> Run {
    let report = CheckReport::from_outcome(check, outcome, None);
    let code = u8::from(report.is_bad());
    Run::new(format!("{}\n", report.text_line()), code)
}

/// Builds the kernel of a validated entry.
pub fn build_kernel(entry: &CorpusEntry) -> Result<Box<dyn Kernel>, String> {
    match &entry.object {
        CorpusObject::Scheme {
            matrix,
            tensor,
            kernel_bumps,
        } => {
            let scheme = validate(matrix).map_err(|e| e.to_string())?;
            let mut k = match tensor {
                Some(t) => SchemeKernel::with_tensor(&scheme, t.clone()),
                None => SchemeKernel::new(&scheme).map_err(|e| e.to_string())?,
            };
            for &(s, x, y) in kernel_bumps {
                k.bump_weight(s, x, y);
            }
            Ok(Box::new(k))
        }
        CorpusObject::Fusion(data) => {
            let ring = validate_fusion(data.clone()).map_err(|e| e.to_string())?;
            Ok(Box::new(
                FusionKernel::new(&ring).map_err(|e| e.to_string())?,
            ))
        }
    }
}

fn grid_text(side: usize, at: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for x in 0..side {
        let row: Vec<String> = (0..side).map(|y| at(x * side + y)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn execute(cli: &Cli) -> Run {
    match &cli.command {
        Command::Validate { src, format } => check(
            std::slice::from_ref(src),
            Some(vec!["validate".to_string()]),
            DEFAULT_SEED,
            *format,
            false,
        ),
        Command::Numbers { src } => numbers(src),
        Command::Check {
            srcs,
            only,
            seed,
            format,
            timings,
        } => check(srcs, only.clone(), *seed, *format, *timings),
        Command::Transform { src, vector } => transform(src, vector),
        Command::Regular { src, morphism } => regular(src, morphism),
        Command::Wiener { src, matrix } => wiener(src, matrix),
        Command::Gen { spec, output } => generate(spec, output),
    }
}

pub fn check(
    srcs: &[String],
    only: Option<Vec<String>>,
    seed: u64,
    format: Format,
    timings: bool,
) -> Run {
    if let Some(bad) = only.iter().flatten().find(|n| !is_known_check(n)) {
        return input_error(
            "--only",
            "arguments",
            format!("unknown check `{bad}`"),
            format,
        );
    }
    let opts = RunOptions {
        only,
        seed,
        timings,
    };
    let mut unreadable = false;
    let entries = srcs
        .iter()
        .map(|src| match resolve(src) {
            Ok(entry) => EntryReport {
                source: src.clone(),
                reports: run_checks(&entry, &opts),
            },
            Err(e) => {
                unreadable = true;
                EntryReport {
                    source: src.clone(),
                    reports: vec![CheckReport::error("parse", e.to_string())],
                }
            }
        })
        .collect();
    let doc = Document {
        format: REPORT_FORMAT,
        seed,
        entries,
    };
    let code = if unreadable { 2 } else { exit_code(&doc) as u8 };
    Run::new(render(&doc, format), code)
}

fn numbers(src: &str) -> Run {
    let entry = match resolve(src) {
        Ok(e) => e,
        Err(e) => return input_error(src, "parse", e.to_string(), Format::Text),
    };
    let mut out = String::new();
    match &entry.object {
        CorpusObject::Scheme { matrix, .. } => {
            let scheme = match validate(matrix) {
                Ok(s) => s,
                Err(e) => return single("validate", Outcome::error(e.to_string())),
            };
            let tensor = match scheme.intersection_numbers() {
                Ok(t) => t,
                Err(e) => return single("validate", Outcome::error(e.to_string())),
            };
            let inv: Vec<String> = scheme
                .involution()
                .as_slice()
                .iter()
                .map(usize::to_string)
                .collect();
            out.push_str(&format!("classes {}\n", scheme.classes()));
            out.push_str(&format!("involution {}\n", inv.join(" ")));
            for (s, t, r, v) in tensor.nonzero() {
                out.push_str(&format!("N {s} {t} {r} {v}\n"));
            }
        }
        CorpusObject::Fusion(data) => {
            out.push_str(&format!("objects {}\n", data.names.join(" ")));
            for (x, y, z, v) in data.tensor.nonzero() {
                let n = &data.names;
                out.push_str(&format!("N {} {} {} {v}\n", n[x], n[y], n[z]));
            }
        }
    }
    Run::new(out, 0)
}

fn kernel_for(src: &str) -> Result<Box<dyn Kernel>, Run> {
    let entry = resolve(src).map_err(|e| input_error(src, "parse", e.to_string(), Format::Text))?;
    build_kernel(&entry).map_err(|e| single("validate", Outcome::error(e)))
}

fn transform(src: &str, vector: &str) -> Run {
    let k = match kernel_for(src) {
        Ok(k) => k,
        Err(run) => return run,
    };
    let f = match parse_vector(vector) {
        Ok(f) => f,
        Err(e) => return input_error(vector, "parse", format!("--vector: {e}"), Format::Text),
    };
    match khat(k.as_ref(), &f) {
        Ok(obj) => Run::new(grid_text(obj.side(), |c| obj.at(c).to_string()), 0),
        Err(e) => input_error(vector, "transform", e.to_string(), Format::Text),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Run> {
    fs::read_to_string(path).map_err(|e| {
        let p = path.display().to_string();
        input_error(&p, "parse", format!("{p}: {e}"), Format::Text)
    })
}

fn regular(src: &str, path: &PathBuf) -> Run {
    let k = match kernel_for(src) {
        Ok(k) => k,
        Err(run) => return run,
    };
    let text = match read_file(path) {
        Ok(t) => t,
        Err(run) => return run,
    };
    let p = path.display().to_string();
    let spec = match parse_morphism(&text) {
        Ok(s) => s,
        Err(e) => return input_error(&p, "parse", format!("{p}: {e}"), Format::Text),
    };
    let k = k.as_ref();
    let (source, target) = match (khat(k, &spec.source), khat(k, &spec.target)) {
        (Ok(s), Ok(t)) => (s, t),
        (Err(e), _) | (_, Err(e)) => {
            return input_error(&p, "parse", format!("{p}: {e}"), Format::Text)
        }
    };
    let side = source.side();
    let mut mats: Vec<Mat> = (0..side * side)
        .map(|c| Mat::zeros(target.at(c), source.at(c)))
        .collect();
    for block in &spec.cells {
        if block.x >= side || block.y >= side {
            let msg = format!(
                "{p}: line {}: cell ({},{}) is outside the {side}x{side} grid",
                block.line, block.x, block.y
            );
            return input_error(&p, "parse", msg, Format::Text);
        }
        let c = block.x * side + block.y;
        let (rows, cols) = (target.at(c), source.at(c));
        let found_cols = block.rows.first().map_or(0, Vec::len);
        if block.rows.len() != rows || (rows > 0 && found_cols != cols) {
            let msg = format!(
                "{p}: line {}: cell ({},{}) needs a {rows}x{cols} block, found {}x{found_cols}",
                block.line,
                block.x,
                block.y,
                block.rows.len()
            );
            return input_error(&p, "parse", msg, Format::Text);
        }
        let entries = block.rows.iter().flatten().cloned().collect();
        mats[c] = Mat::from_entries(rows, cols, entries).expect("block shape checked");
    }
    let outcome = MatMorphismFamily::new(source, target, mats)
        .map_err(|e| e.to_string())
        .and_then(|alpha| {
            is_regular(k, &spec.source, &spec.target, &alpha).map_err(|e| e.to_string())
        })
        .unwrap_or_else(Outcome::error);
    single("regular", outcome)
}

fn wiener(src: &str, path: &PathBuf) -> Run {
    let k = match kernel_for(src) {
        Ok(k) => k,
        Err(run) => return run,
    };
    let text = match read_file(path) {
        Ok(t) => t,
        Err(run) => return run,
    };
    let p = path.display().to_string();
    let target = match parse_dims_matrix(&text) {
        Ok(m) => m,
        Err(e) => return input_error(&p, "parse", format!("{p}: {e}"), Format::Text),
    };
    match k.wiener_membership(&target) {
        Ok(Membership::Member(sols)) => {
            let mut run = single("wiener", Outcome::pass());
            for f in sols {
                run.output.push_str(&format!("SOLUTION {f}\n"));
            }
            run
        }
        Ok(Membership::NotMember(w)) => single("wiener", Outcome::fail(w)),
        Err(e) => input_error(&p, "wiener", e.to_string(), Format::Text),
    }
}

fn generate(spec: &str, output: &PathBuf) -> Run {
    if !spec.starts_with("gen:") {
        return input_error(
            spec,
            "parse",
            format!("`{spec}` is not a generator spec"),
            Format::Text,
        );
    }
    let entry = match resolve(spec) {
        Ok(e) => e,
        Err(e) => return input_error(spec, "parse", e.to_string(), Format::Text),
    };
    let text = match &entry.object {
        CorpusObject::Scheme { matrix, .. } => write_scheme(matrix),
        CorpusObject::Fusion(data) => write_fusion(data),
    };
    match fs::write(output, text) {
        Ok(()) => Run::new(format!("wrote {}\n", output.display()), 0),
        Err(e) => input_error(
            spec,
            "write",
            format!("{}: {e}", output.display()),
            Format::Text,
        ),
    }
}
