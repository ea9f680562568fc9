//! Reading JSON artifacts and dispatching on their schema tag.

use std::fmt;
use std::io::Read;
use std::path::Path;

use clusterform::bicat::{Bicategory, BicategoryDoc, BICAT_SCHEMA};
use clusterform::fincat::{CategoryDoc, FINCAT_SCHEMA};
use clusterform::formcore::{Form, FormDoc, FORM_SCHEMA};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// An input or usage problem; always exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

pub enum Doc {
    Category(CategoryDoc),
    Form(FormDoc),
    Bicat(BicategoryDoc),
}

/// Reads a path, or stdin for `-`.
pub fn read_text(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Doc, InputError> {
    let text = read_text(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let schema = value
        .get("schema")
        .and_then(Value::as_str)
        .ok_or_else(|| input_error(format!("{}: missing \"schema\" tag", path.display())))?
        .to_string();
    match schema.as_str() {
        FINCAT_SCHEMA => Ok(Doc::Category(decode(path, value)?)),
        FORM_SCHEMA => Ok(Doc::Form(decode(path, value)?)),
        BICAT_SCHEMA => Ok(Doc::Bicat(decode(path, value)?)),
        other => Err(input_error(format!(
            "{}: unsupported schema {other:?} (expected {FINCAT_SCHEMA}, {FORM_SCHEMA} or {BICAT_SCHEMA})",
            path.display()
        ))),
    }
}

fn decode<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T, InputError> {
    serde_json::from_value(v).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

pub fn load_form(path: &Path) -> Result<Form, InputError> {
    match load(path)? {
        Doc::Form(doc) => {
            Form::from_doc(&doc).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        _ => Err(input_error(format!(
            "{}: expected a {FORM_SCHEMA} document",
            path.display()
        ))),
    }
}

pub fn load_bicat(doc: &BicategoryDoc, path: &Path) -> Result<Bicategory, InputError> {
    Bicategory::from_doc(doc).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let f = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(f.path(), text).unwrap();
        f
    }

    #[test]
    fn schema_tag_is_required() {
        assert!(load(write("{}").path()).is_err());
        assert!(load(write("not json").path()).is_err());
        assert!(load(write(r#"{"schema":"report/1"}"#).path()).is_err());
    }

    #[test]
    fn form_documents_load() {
        let form = clusterform::zoo::zoo_form("subsets", 1).unwrap();
        let f = write(&serde_json::to_string(&form.to_doc()).unwrap());
        assert!(matches!(load(f.path()), Ok(Doc::Form(_))));
        assert_eq!(
            load_form(f.path()).unwrap().fiber_sizes(),
            form.fiber_sizes()
        );
    }
}
