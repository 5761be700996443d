//! JSON forms of complexes and serde helpers for exact numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{CellComplex, ComplexError, SimplicialComplex};
use crate::scalar::{fmt_rat, parse_rat};
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A simplicial complex as its maximal simplices, with optional rational
/// vertex coordinates written as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<BTreeMap<usize, Vec<String>>>,
}

impl ComplexJson {
    pub fn from_complex(x: &SimplicialComplex, name: Option<String>) -> Self {
        let coords = x.coords().map(|c| c.iter().map(|(v, p)| (*v, p.iter().map(fmt_rat).collect())).collect());
        Self { name, dim: Some(x.dim()), simplices: x.maximal_simplices(), coords }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, IoError> {
        let x = SimplicialComplex::new(&self.simplices)?;
        if let Some(d) = self.dim {
            if d != x.dim() {
                return Err(IoError::Parse(format!(
                    "declared dimension {d} but the simplices span dimension {}",
                    x.dim()
                )));
            }
        }
        match &self.coords {
            None => Ok(x),
            Some(c) => {
                let coords = c
                    .iter()
                    .map(|(v, p)| Ok((*v, p.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?)))
                    .collect::<Result<BTreeMap<_, _>, String>>()
                    .map_err(IoError::Parse)?;
                Ok(x.with_coords(coords)?)
            }
        }
    }
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex, IoError> {
    let j: ComplexJson = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    j.to_complex()
}

pub fn complex_to_json(x: &SimplicialComplex, name: Option<String>) -> String {
    serde_json::to_string_pretty(&ComplexJson::from_complex(x, name)).expect("serializable")
}

pub fn ser_int<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rat<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(v))
}

pub fn ser_opt_rat<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_ints<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}
