//! JSON matrix files: `{"dim": d, "field": "R" | "C", "data": [[re, im], …]}`
//! with `d²` entries in row-major order.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use superdyn::{CMatrix, Field};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub field: String,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMatrix) -> Self {
        Self {
            dim: a.dim(),
            field: field_tag(a.field()).to_string(),
            data: a.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        let field = match self.field.as_str() {
            "R" => Field::Real,
            "C" => Field::Complex,
            other => return Err(format!("field must be \"R\" or \"C\", got {other:?}")),
        };
        let data = self
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        CMatrix::new(self.dim, field, data).map_err(|e| e.to_string())
    }

    /// One line of JSON; the field order is fixed.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

pub fn field_tag(f: Field) -> &'static str {
    match f {
        Field::Real => "R",
        Field::Complex => "C",
    }
}

/// A loaded matrix with the SHA-256 of the file bytes.
pub struct Loaded {
    pub matrix: CMatrix,
    pub digest: String,
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let matrix = parse(&bytes).map_err(|e| match e {
        ParseError::Json(e) => CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        ParseError::Invalid(message) => CliError::Invalid {
            path: path.to_path_buf(),
            message,
        },
    })?;
    Ok(Loaded { matrix, digest })
}

pub enum ParseError {
    Json(serde_json::Error),
    Invalid(String),
}

pub fn parse(bytes: &[u8]) -> Result<CMatrix, ParseError> {
    let file: MatrixFile = serde_json::from_slice(bytes).map_err(ParseError::Json)?;
    file.to_matrix().map_err(ParseError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_field_and_entries() {
        let a = superdyn::generators::diag_circle(1.0, &[1.0 / 3.0, 0.5]).unwrap();
        let text = MatrixFile::from_matrix(&a).to_json();
        let b = match parse(text.as_bytes()) {
            Ok(b) => b,
            Err(_) => panic!("round trip failed"),
        };
        assert_eq!(a, b);
        assert!(text.starts_with("{\"dim\":2,\"field\":\"C\",\"data\":[["));
    }

    #[test]
    fn rejects_imaginary_part_in_real_file() {
        let text = r#"{"dim":1,"field":"R","data":[[1.0,0.5]]}"#;
        assert!(matches!(parse(text.as_bytes()), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let text = "{\"dim\": 2,\n \"field\": \"C\",\n \"data\": [[1, 0],, ]}";
        match parse(text.as_bytes()) {
            Err(ParseError::Json(e)) => assert_eq!((e.line(), e.column()), (3, 18)),
            _ => panic!("expected a syntax error"),
        }
    }

    #[test]
    fn wrong_length_is_invalid() {
        let text = r#"{"dim":2,"field":"C","data":[[1.0,0.0]]}"#;
        assert!(matches!(parse(text.as_bytes()), Err(ParseError::Invalid(_))));
    }
}
