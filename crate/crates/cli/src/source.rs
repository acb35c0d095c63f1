//! Resolving a command-line source (file path or `gen:` spec) into a
//! corpus entry.

use std::fs;
use std::path::Path;

use gft_core::fusion::{gen_fibonacci, gen_group_fusion, gen_ising, FusionData};
use gft_core::scheme::{gen_cyclic, gen_group, gen_hamming, gen_johnson, ClassMatrix};
use gft_core::IntersectionTensor;
use thiserror::Error;

use crate::parse::{detect_format, parse_fusion, parse_group, parse_scheme, ParseError};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: unrecognised format (expected `scheme v1` or `fusion v1`)")]
    UnknownFormat { path: String },
    #[error("bad generator `{spec}`: {message}")]
    Generator { spec: String, message: String },
}

/// What a source resolves to, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusObject {
    /// A class matrix, optionally paired with a replacement tensor that the
    /// checks use instead of the computed intersection numbers.
    Scheme {
        matrix: ClassMatrix,
        tensor: Option<IntersectionTensor>,
        /// Extra kernel weights `K(s,x,y) += 1` applied before the
        /// transform checks run.
        kernel_bumps: Vec<(usize, usize, usize)>,
    },
    Fusion(FusionData),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub source: String,
    pub object: CorpusObject,
}

impl CorpusEntry {
    pub fn scheme(source: impl Into<String>, matrix: ClassMatrix) -> Self {
        CorpusEntry {
            source: source.into(),
            object: CorpusObject::Scheme {
                matrix,
                tensor: None,
                kernel_bumps: Vec::new(),
            },
        }
    }

    pub fn fusion(source: impl Into<String>, data: FusionData) -> Self {
        CorpusEntry {
            source: source.into(),
            object: CorpusObject::Fusion(data),
        }
    }
}

fn read(path: &str) -> Result<String, SourceError> {
    fs::read_to_string(Path::new(path)).map_err(|e| SourceError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn parse_err(path: &str) -> impl Fn(ParseError) -> SourceError + '_ {
    move |source| SourceError::Parse {
        path: path.to_string(),
        source,
    }
}

fn params(spec: &str, raw: &str, count: usize) -> Result<Vec<usize>, SourceError> {
    let bad = |message: String| SourceError::Generator {
        spec: spec.to_string(),
        message,
    };
    let vals = raw
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("`{p}` is not a natural number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != count {
        return Err(bad(format!(
            "expected {count} parameter(s), found {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn generate(spec: &str) -> Result<CorpusObject, SourceError> {
    let bad = |message: String| SourceError::Generator {
        spec: spec.to_string(),
        message,
    };
    let body = &spec["gen:".len()..];
    let (family, arg) = body.split_once(':').unwrap_or((body, ""));
    let scheme = |cm: Result<ClassMatrix, _>| {
        cm.map(|matrix| CorpusObject::Scheme {
            matrix,
            tensor: None,
            kernel_bumps: Vec::new(),
        })
        .map_err(|e: gft_core::SchemeError| bad(e.to_string()))
    };
    match family {
        "cyclic" => scheme(gen_cyclic(params(spec, arg, 1)?[0])),
        "hamming" => {
            let p = params(spec, arg, 2)?;
            scheme(gen_hamming(p[0], p[1]))
        }
        "johnson" => {
            let p = params(spec, arg, 2)?;
            scheme(gen_johnson(p[0], p[1]))
        }
        "group" => {
            if arg.is_empty() {
                return Err(bad("missing group table file".into()));
            }
            let group = parse_group(&read(arg)?).map_err(parse_err(arg))?;
            scheme(gen_group(&group))
        }
        "fibonacci" if arg.is_empty() => Ok(CorpusObject::Fusion(gen_fibonacci().into_data())),
        "ising" if arg.is_empty() => Ok(CorpusObject::Fusion(gen_ising().into_data())),
        "zn" => {
            let n = params(spec, arg, 1)?[0];
            let ring = gen_group_fusion(n).map_err(|e| bad(e.to_string()))?;
            Ok(CorpusObject::Fusion(ring.into_data()))
        }
        _ => Err(bad(format!("unknown family `{family}`"))),
    }
}

/// Resolves `gen:<family>[:<params>]` or a path to a `scheme v1` /
/// `fusion v1` file.
pub fn resolve(src: &str) -> Result<CorpusEntry, SourceError> {
    let object = if src.starts_with("gen:") {
        generate(src)?
    } else {
        let text = read(src)?;
        match detect_format(&text).as_deref() {
            Some("scheme") => CorpusObject::Scheme {
                matrix: parse_scheme(&text).map_err(parse_err(src))?,
                tensor: None,
                kernel_bumps: Vec::new(),
            },
            Some("fusion") => CorpusObject::Fusion(parse_fusion(&text).map_err(parse_err(src))?),
            _ => {
                return Err(SourceError::UnknownFormat {
                    path: src.to_string(),
                })
            }
        }
    };
    Ok(CorpusEntry {
        source: src.to_string(),
        object,
    })
}
