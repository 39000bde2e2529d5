//! JSON documents for n-categories and n-functors.
//!
//! An n-category file has the fields `cells`, `comp`, `idn`, `n`, `src` and
//! `tgt`. `cells[l]` lists the level-`l` cell names. `src[l - 1]`,
//! `tgt[l - 1]` map each level-`l` cell to a level-`l - 1` cell and
//! `idn[l - 1]` maps each level-`l - 1` cell to its identity. `comp` is keyed
//! by `"j,i"`; each table maps `"later|earlier"` to the composite, where
//! `later ∘_i earlier` means `earlier` first.
//!
//! A functor file has `dom`, `cod` (a path relative to the file, or an inline
//! n-category document) and `maps`, one name-to-name object per level.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ncat_galois::{validate_ncat, FunctorError, NCat, NFunctor, RawNCat, RawNFunctor, ValidationError};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field {field}: {message}")]
    Field { path: String, field: String, message: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: ValidationError },
    #[error("{path}: {source}")]
    InvalidFunctor { path: String, source: FunctorError },
}

/// Serialized form of an n-category, with fields in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NCatFile {
    pub cells: Vec<Vec<String>>,
    #[serde(default)]
    pub comp: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub idn: Vec<BTreeMap<String, String>>,
    pub n: usize,
    #[serde(default)]
    pub src: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub tgt: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatRef {
    Path(String),
    Inline(Box<NCatFile>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NFunctorFile {
    pub cod: CatRef,
    pub dom: CatRef,
    pub maps: Vec<BTreeMap<String, String>>,
}

impl NCatFile {
    pub fn from_ncat(c: &NCat) -> Self {
        let raw = c.to_raw();
        let comp = raw
            .comp
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&(j, i), t)| {
                let table = t.iter().map(|((a, b), r)| (format!("{a}|{b}"), r.clone())).collect();
                (format!("{j},{i}"), table)
            })
            .collect();
        NCatFile {
            cells: raw.cells,
            comp,
            idn: raw.idn,
            n: raw.n,
            src: raw.src,
            tgt: raw.tgt,
        }
    }

    /// Splits keys and builds the name-based tables, reporting the field of
    /// the first malformed entry.
    pub fn to_raw(&self, path: &str) -> Result<RawNCat, FormatError> {
        let field = |field: String, message: String| FormatError::Field { path: path.into(), field, message };
        let mut comp = BTreeMap::new();
        for (key, table) in &self.comp {
            let (j, i) = parse_level_pair(key).ok_or_else(|| field(format!("comp.{key:?}"), "expected \"j,i\"".into()))?;
            if j > self.n || i >= j {
                return Err(field(format!("comp.{key:?}"), format!("not a level pair i < j <= {}", self.n)));
            }
            let names: &[String] = &self.cells[j];
            let mut out = BTreeMap::new();
            for (pair, r) in table {
                let (a, b) = split_pair(pair, names).map_err(|m| field(format!("comp.{key:?}.{pair:?}"), m))?;
                out.insert((a, b), r.clone());
            }
            comp.insert((j, i), out);
        }
        Ok(RawNCat {
            n: self.n,
            cells: self.cells.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            idn: self.idn.clone(),
            comp,
        })
    }

    pub fn to_ncat(&self, path: &str) -> Result<NCat, FormatError> {
        if self.cells.len() != self.n + 1 {
            return Err(FormatError::Field {
                path: path.into(),
                field: "cells".into(),
                message: format!("expected {} levels for n = {}", self.n + 1, self.n),
            });
        }
        validate_ncat(&self.to_raw(path)?).map_err(|source| FormatError::Invalid { path: path.into(), source })
    }
}

fn parse_level_pair(key: &str) -> Option<(usize, usize)> {
    let (j, i) = key.split_once(',')?;
    Some((j.trim().parse().ok()?, i.trim().parse().ok()?))
}

/// Splits `later|earlier`. Names may contain `|`, so every split point is
/// tried and exactly one must give two known names.
fn split_pair(key: &str, names: &[String]) -> Result<(String, String), String> {
    let known = |s: &str| names.iter().any(|n| n == s);
    let splits: Vec<(String, String)> = key
        .match_indices('|')
        .map(|(k, _)| (&key[..k], &key[k + 1..]))
        .filter(|(a, b)| known(a) && known(b))
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    match splits.len() {
        1 => Ok(splits.into_iter().next().unwrap()),
        0 => Err("expected \"later|earlier\" with two cells of this level".into()),
        _ => Err("ambiguous pair key".into()),
    }
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn parse_ncat(text: &str, path: &str) -> Result<NCat, FormatError> {
    parse::<NCatFile>(text, path)?.to_ncat(path)
}

pub fn read_ncat(path: &Path) -> Result<NCat, FormatError> {
    parse_ncat(&read_text(path)?, &path.display().to_string())
}

fn resolve_ref(r: &CatRef, base: &Path, path: &str, which: &str) -> Result<NCat, FormatError> {
    match r {
        CatRef::Path(p) => read_ncat(&base.join(p)),
        CatRef::Inline(doc) => doc.to_ncat(&format!("{path}: {which}")),
    }
}

/// Parses a functor document; relative `dom`/`cod` paths are resolved
/// against `base`.
pub fn parse_nfunctor(text: &str, path: &str, base: &Path) -> Result<NFunctor, FormatError> {
    let doc: NFunctorFile = parse(text, path)?;
    let dom = Arc::new(resolve_ref(&doc.dom, base, path, "dom")?);
    let cod = Arc::new(resolve_ref(&doc.cod, base, path, "cod")?);
    RawNFunctor { maps: doc.maps }
        .resolve(&dom, &cod)
        .map_err(|source| FormatError::InvalidFunctor { path: path.into(), source })
}

pub fn read_nfunctor(path: &Path) -> Result<NFunctor, FormatError> {
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_nfunctor(&read_text(path)?, &path.display().to_string(), &base)
}

pub fn ncat_to_string(c: &NCat) -> String {
    let mut s = serde_json::to_string_pretty(&NCatFile::from_ncat(c)).expect("serializable");
    s.push('\n');
    s
}

/// A functor document with both ends inline.
pub fn nfunctor_to_string(f: &NFunctor) -> String {
    let doc = NFunctorFile {
        cod: CatRef::Inline(Box::new(NCatFile::from_ncat(f.cod()))),
        dom: CatRef::Inline(Box::new(NCatFile::from_ncat(f.dom()))),
        maps: f.to_raw().maps,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// A functor document referring to its ends by path.
pub fn nfunctor_to_string_with_paths(f: &NFunctor, dom: &str, cod: &str) -> String {
    let doc = NFunctorFile { cod: CatRef::Path(cod.into()), dom: CatRef::Path(dom.into()), maps: f.to_raw().maps };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}
