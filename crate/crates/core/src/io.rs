//! JSON files for functions, function sets and `QSet`s.
//!
//! Output goes through [`serde_json::Value`], whose maps are ordered, so
//! keys come out sorted and equal values print byte-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog;
use crate::clone::{FunctionSet, GeneratorSet};
use crate::error::{Error, Result};
use crate::func::FiniteFunction;
use crate::galois::QSet;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionFile {
    k: usize,
    n: usize,
    table: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionSetFile {
    k: usize,
    closed_up_to: Option<usize>,
    functions: Vec<FunctionFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QSetFile {
    k: usize,
    m: usize,
    rows: Vec<Vec<u8>>,
}

impl From<&FiniteFunction> for FunctionFile {
    fn from(f: &FiniteFunction) -> Self {
        FunctionFile { k: f.k(), n: f.arity(), table: f.table().to_vec() }
    }
}

impl TryFrom<FunctionFile> for FiniteFunction {
    type Error = Error;

    fn try_from(f: FunctionFile) -> Result<Self> {
        FiniteFunction::new(f.k, f.n, f.table)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value).map_err(|e| Error::input(format!("serialize: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::input(format!("serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("bad {what}: {e}")))
}

pub fn function_to_value(f: &FiniteFunction) -> Value {
    serde_json::to_value(FunctionFile::from(f)).expect("plain struct")
}

pub fn function_to_json(f: &FiniteFunction) -> Result<String> {
    to_json(&function_to_value(f))
}

pub fn function_from_json(text: &str) -> Result<FiniteFunction> {
    parse::<FunctionFile>(text, "function file")?.try_into()
}

pub fn function_set_to_value(set: &FunctionSet) -> Value {
    let file = FunctionSetFile {
        k: set.k(),
        closed_up_to: set.closed_up_to(),
        functions: set.iter().map(FunctionFile::from).collect(),
    };
    serde_json::to_value(file).expect("plain struct")
}

pub fn function_set_to_json(set: &FunctionSet) -> Result<String> {
    to_json(&function_set_to_value(set))
}

pub fn function_set_from_json(text: &str) -> Result<FunctionSet> {
    let file: FunctionSetFile = parse(text, "function set file")?;
    let fs = file.functions.into_iter().map(FiniteFunction::try_from).collect::<Result<Vec<_>>>()?;
    FunctionSet::new(file.k, file.closed_up_to, fs)
}

pub fn qset_to_json(h: &QSet) -> Result<String> {
    to_json(h)
}

pub fn qset_from_json(text: &str) -> Result<QSet> {
    let file: QSetFile = parse(text, "set file")?;
    let h = QSet::new(file.k, file.m, file.rows)?;
    if h.is_empty() {
        return Err(Error::input("H must be nonempty"));
    }
    Ok(h)
}

/// Generators from either a function set file or a single function file.
pub fn generators_from_json(text: &str) -> Result<GeneratorSet> {
    let v: Value = parse(text, "generator file")?;
    if v.get("functions").is_some() {
        Ok(function_set_from_json(text)?.to_generators())
    } else {
        let f = function_from_json(text)?;
        GeneratorSet::new(f.k(), [f])
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

/// A generator source: `catalog:<k>/<name>` or a path to a JSON file.
/// Returns the generators and a display name.
pub fn load_generators(source: &str) -> Result<(GeneratorSet, String)> {
    if let Some(spec) = source.strip_prefix("catalog:") {
        let e = catalog::lookup(spec)?;
        return Ok((e.gens, e.name));
    }
    let path = Path::new(source);
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| source.into());
    Ok((generators_from_json(&read_text(path)?)?, name))
}

pub fn load_function(path: &Path) -> Result<FiniteFunction> {
    function_from_json(&read_text(path)?)
}

pub fn load_qset(path: &Path) -> Result<QSet> {
    qset_from_json(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::uv_symmetric;
    use crate::clone::DEFAULT_CAP;

    #[test]
    fn function_round_trip_and_key_order() {
        let f = FiniteFunction::new(3, 2, vec![0, 1, 0, 1, 1, 2, 0, 2, 2]).unwrap();
        let s = function_to_json(&f).unwrap();
        assert_eq!(function_from_json(&s).unwrap(), f);
        let (k, n, t) = (s.find("\"k\"").unwrap(), s.find("\"n\"").unwrap(), s.find("\"table\"").unwrap());
        assert!(k < n && n < t);
    }

    #[test]
    fn bad_length_is_rejected() {
        assert!(function_from_json(r#"{"k":2,"n":2,"table":[0,1,1]}"#).is_err());
        assert!(function_from_json(r#"{"k":2,"n":1,"table":[0,1],"x":1}"#).is_err());
    }

    #[test]
    fn function_set_round_trip() {
        let fs = FunctionSet::generate(&uv_symmetric(), 2, DEFAULT_CAP).unwrap();
        let s = function_set_to_json(&fs).unwrap();
        let back = function_set_from_json(&s).unwrap();
        assert_eq!(back, fs);
        assert_eq!(function_set_to_json(&back).unwrap(), s);
        assert_eq!(generators_from_json(&s).unwrap(), fs.to_generators());
    }

    #[test]
    fn qset_round_trip() {
        let h = QSet::new(3, 2, [vec![2, 0], vec![0, 1]]).unwrap();
        let s = qset_to_json(&h).unwrap();
        assert_eq!(qset_from_json(&s).unwrap(), h);
        assert!(qset_from_json(r#"{"k":3,"m":2,"rows":[]}"#).is_err());
        assert!(qset_from_json(r#"{"k":3,"m":2,"rows":[[0,3]]}"#).is_err());
    }

    #[test]
    fn catalog_sources() {
        let (g, name) = load_generators("catalog:3/uv").unwrap();
        assert_eq!((g, name.as_str()), (uv_symmetric(), "uv"));
        assert!(load_generators("catalog:3/nope").is_err());
    }
}
