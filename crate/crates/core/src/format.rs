//! JSON function files.
//!
//! ```json
//! {"lattice": {"cube": 2}, "repr": "composed",
//!  "payload": {"F": "0110", "g": [["10"], ["01"]]}}
//! ```
//!
//! `lattice` is `{"cube": n}` or `{"file": path}` (a `lattice v1` text file,
//! resolved relative to the function file). Payloads: `dense` is a bit
//! string in element-id order, `mdnf` a list of element names, `xor` a list
//! of mdnf payloads, `composed` an outer bit string `F` of length `2^d` plus
//! `d` mdnf payloads `g`. Minimal elements are written in canonical order.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfn::{
    BoolFn, BoolFnError, ComposedTarget, DenseFunction, Function, MonotoneDnf, XorHypothesis,
};
use crate::families::FamilySpec;
use crate::lattice::{Lattice, LatticeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed function file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("lattice file {path}: {source}")]
    LatticeFile { path: PathBuf, source: LatticeError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
    #[error("`{0}` is not a bit string")]
    BadBits(String),
    #[error("lattice has {elements} elements, above the cap of 2^{max_n}; raise --max-n")]
    SizeCap { elements: usize, max_n: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeRef {
    Cube(u32),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedPayload {
    #[serde(rename = "F")]
    pub outer: String,
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "repr", content = "payload", rename_all = "lowercase")]
pub enum Payload {
    Dense(String),
    Mdnf(Vec<String>),
    Xor(Vec<Vec<String>>),
    Composed(ComposedPayload),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub lattice: LatticeRef,
    #[serde(flatten)]
    pub body: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

/// A parsed function file.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub lattice_ref: LatticeRef,
    pub function: Function,
    pub family: Option<FamilySpec>,
}

fn bits_to_string(bits: impl IntoIterator<Item = bool>) -> String {
    bits.into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>, FormatError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(FormatError::BadBits(s.to_string())),
        })
        .collect()
}

fn mdnf_payload(g: &MonotoneDnf) -> Vec<String> {
    g.minimals().iter().map(|&m| g.lattice().name(m)).collect()
}

fn parse_mdnf(lattice: &Arc<Lattice>, names: &[String]) -> Result<MonotoneDnf, FormatError> {
    let elems = names
        .iter()
        .map(|s| lattice.parse_elem(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonotoneDnf::new(lattice.clone(), elems)?)
}

impl Payload {
    pub fn from_function(f: &Function) -> Self {
        match f {
            Function::Dense(f) => {
                Payload::Dense(bits_to_string(f.lattice().elements().map(|x| f.eval(x))))
            }
            Function::Mdnf(g) => Payload::Mdnf(mdnf_payload(g)),
            Function::Xor(h) => Payload::Xor(h.levels().iter().map(mdnf_payload).collect()),
            Function::Composed(c) => Payload::Composed(ComposedPayload {
                outer: bits_to_string(c.outer().iter().copied()),
                g: c.inner().iter().map(mdnf_payload).collect(),
            }),
        }
    }

    pub fn to_function(&self, lattice: &Arc<Lattice>) -> Result<Function, FormatError> {
        Ok(match self {
            Payload::Dense(bits) => Function::Dense(DenseFunction::from_bits(
                lattice.clone(),
                &parse_bits(bits)?,
            )?),
            Payload::Mdnf(names) => Function::Mdnf(parse_mdnf(lattice, names)?),
            Payload::Xor(levels) => Function::Xor(XorHypothesis::new(
                lattice.clone(),
                levels
                    .iter()
                    .map(|g| parse_mdnf(lattice, g))
                    .collect::<Result<_, _>>()?,
            )?),
            Payload::Composed(c) => Function::Composed(ComposedTarget::new(
                lattice.clone(),
                parse_bits(&c.outer)?,
                c.g.iter()
                    .map(|g| parse_mdnf(lattice, g))
                    .collect::<Result<_, _>>()?,
            )?),
        })
    }
}

impl FunctionFile {
    pub fn new(lattice: LatticeRef, function: &Function, family: Option<FamilySpec>) -> Self {
        Self {
            lattice,
            body: Payload::from_function(function),
            family,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("function files serialize");
        s.push('\n');
        s
    }
}

/// Reference for writing functions on `lattice`: cubes are written inline,
/// explicit lattices point at `fallback`.
pub fn lattice_ref_for(lattice: &Lattice, fallback: Option<&Path>) -> LatticeRef {
    match (lattice.cube_dim(), fallback) {
        (Some(n), _) => LatticeRef::Cube(n),
        (None, Some(p)) => LatticeRef::File(p.to_path_buf()),
        (None, None) => LatticeRef::File(PathBuf::from("lattice.txt")),
    }
}

/// Builds the lattice a reference names, refusing more than `2^max_n`
/// elements.
pub fn resolve_lattice(
    r: &LatticeRef,
    base: &Path,
    max_n: u32,
) -> Result<Arc<Lattice>, FormatError> {
    let lattice = match r {
        LatticeRef::Cube(n) => {
            if *n > max_n {
                return Err(FormatError::SizeCap {
                    elements: 1usize.checked_shl(*n).unwrap_or(usize::MAX),
                    max_n,
                });
            }
            Lattice::cube(*n)?
        }
        LatticeRef::File(p) => {
            let path = base.join(p);
            let text = fs::read_to_string(&path).map_err(|source| FormatError::Io {
                path: path.clone(),
                source,
            })?;
            Lattice::parse(&text).map_err(|source| FormatError::LatticeFile { path, source })?
        }
    };
    if (lattice.len() as u128) > 1u128 << max_n {
        return Err(FormatError::SizeCap {
            elements: lattice.len(),
            max_n,
        });
    }
    Ok(Arc::new(lattice))
}

/// Parses function-file JSON; lattice files resolve against `base`.
pub fn parse_function(text: &str, base: &Path, max_n: u32) -> Result<Loaded, FormatError> {
    let file: FunctionFile = serde_json::from_str(text)?;
    let lattice = resolve_lattice(&file.lattice, base, max_n)?;
    let function = file.body.to_function(&lattice)?;
    Ok(Loaded {
        lattice_ref: file.lattice,
        function,
        family: file.family,
    })
}

pub fn load_function(path: &Path, max_n: u32) -> Result<Loaded, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_function(&text, base, max_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Elem;

    #[test]
    fn composed_round_trip() {
        let text = r#"{"lattice": {"cube": 2}, "repr": "composed",
            "payload": {"F": "0110", "g": [["10"], ["01"]]}}"#;
        let loaded = parse_function(text, Path::new("."), 22).unwrap();
        let f = &loaded.function;
        let truth: Vec<bool> = f.lattice().elements().map(|x| f.eval(x)).collect();
        assert_eq!(truth, [false, true, true, false]);
        let out = FunctionFile::new(loaded.lattice_ref.clone(), f, None).to_json();
        let again = parse_function(&out, Path::new("."), 22).unwrap();
        assert_eq!(&again.function, f);
        assert!(out.contains("\"repr\": \"composed\""));
    }

    #[test]
    fn dense_and_xor() {
        let dense = r#"{"lattice": {"cube": 2}, "repr": "dense", "payload": "0110"}"#;
        let f = parse_function(dense, Path::new("."), 22).unwrap().function;
        assert!(f.eval(Elem(1)) && !f.eval(Elem(3)));
        let xor = r#"{"lattice": {"cube": 2}, "repr": "xor", "payload": [["01", "10"], ["11"]]}"#;
        let h = parse_function(xor, Path::new("."), 22).unwrap().function;
        assert_eq!(h.to_dense(), f.to_dense());
    }

    #[test]
    fn errors() {
        let short = r#"{"lattice": {"cube": 2}, "repr": "dense", "payload": "011"}"#;
        assert!(matches!(
            parse_function(short, Path::new("."), 22),
            Err(FormatError::BoolFn(BoolFnError::WrongLength { .. }))
        ));
        let big = r#"{"lattice": {"cube": 25}, "repr": "mdnf", "payload": []}"#;
        assert!(matches!(
            parse_function(big, Path::new("."), 22),
            Err(FormatError::SizeCap { max_n: 22, .. })
        ));
        let bad = r#"{"lattice": {"cube": 2}, "repr": "mdnf", "payload": ["2x"]}"#;
        assert!(matches!(
            parse_function(bad, Path::new("."), 22),
            Err(FormatError::Lattice(_))
        ));
    }
}
