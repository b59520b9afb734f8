//! Model JSON files and input-kind detection.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frd::FrequencyResponseData;
use crate::lti::TransferFunction;
use crate::system::System;

/// `{"name", "units", "num", "den"}`, coefficients in descending powers of s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub units: String,
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl ModelFile {
    pub fn new(name: impl Into<String>, tf: &TransferFunction) -> Self {
        Self {
            name: name.into(),
            units: tf.units().to_string(),
            num: tf.num().to_vec(),
            den: tf.den().to_vec(),
        }
    }

    pub fn to_tf(&self) -> Result<TransferFunction> {
        Ok(TransferFunction::new(&self.num, &self.den)?.with_units(&self.units))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub(crate) fn json_error(path: &Path, err: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: err.line() as u64,
        column: err.column(),
        message: err.to_string(),
    }
}

pub fn read_model(path: impl AsRef<Path>) -> Result<ModelFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let model: ModelFile = serde_json::from_str(&text).map_err(|e| json_error(path, e))?;
    model.to_tf().map_err(|e| Error::io(path, e))?;
    Ok(model)
}

pub fn write_model(path: impl AsRef<Path>, model: &ModelFile) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model.to_json() + "\n").map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Model,
    Data,
}

impl InputKind {
    /// `.json` is a model, `.csv` is data.
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(InputKind::Model),
            "csv" => Some(InputKind::Data),
            _ => None,
        }
    }
}

/// Loads a model or measured response; `kind` overrides extension detection.
pub fn load_system(path: impl AsRef<Path>, kind: Option<InputKind>) -> Result<System> {
    let path = path.as_ref();
    let kind = kind
        .or_else(|| InputKind::from_extension(path))
        .ok_or_else(|| {
            Error::io(
                path,
                "cannot tell model from data by extension (expected .json or .csv)",
            )
        })?;
    match kind {
        InputKind::Model => Ok(System::Model(
            read_model(path)?.to_tf().map_err(|e| Error::io(path, e))?,
        )),
        InputKind::Data => Ok(System::Data(FrequencyResponseData::from_csv(path)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let tf = TransferFunction::new(&[2.0, 1.0], &[1.0, 3.0, 2.0])
            .unwrap()
            .with_units("N/N");
        write_model(&path, &ModelFile::new("plant", &tf)).unwrap();
        let back = read_model(&path).unwrap();
        assert_eq!(back.name, "plant");
        assert_eq!(back.to_tf().unwrap(), tf);
        assert_eq!(load_system(&path, None).unwrap(), System::Model(tf));
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\n  \"num\": [1],\n  \"den\": [1, oops]\n}").unwrap();
        match read_model(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        std::fs::write(&path, r#"{"num": [1], "den": [0]}"#).unwrap();
        assert!(matches!(read_model(&path), Err(Error::Io { .. })));
        let missing = dir.path().join("missing.json");
        let err = load_system(&missing, None).unwrap_err();
        assert!(err.to_string().contains("missing.json"));
        assert!(load_system(dir.path().join("x.txt"), None).is_err());
    }
}
