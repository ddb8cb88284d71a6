//! JSON encoding of models, classes, forms and matrices.
//!
//! ```json
//! {"model": {"type": "rational", "n": 3}, "coeffs": [1, -1, -1, 0]}
//! {"model": {"type": "ruled", "genus": 2, "n": 1}, "coeffs": [2, "3/2", "-1/2"]}
//! {"model": {"type": "rational", "n": 1}, "matrix": [[1, 0], [0, 1]]}
//! ```
//!
//! Coefficients are JSON integers or strings holding an integer or `p/q`.
//! Integers outside the `i64` range are written as strings.

use std::fmt;
use std::str::FromStr;

use lagsphere_core::twist::IsometryMatrix;
use lagsphere_core::{FormClass, HomClass, Int, LatticeError, LatticeModel, Rational};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelJson {
    Rational { n: usize },
    Ruled { genus: u32, n: usize },
}

impl From<LatticeModel> for ModelJson {
    fn from(m: LatticeModel) -> Self {
        match m {
            LatticeModel::Rational { n } => Self::Rational { n },
            LatticeModel::Ruled { genus, n } => Self::Ruled { genus, n },
        }
    }
}

impl ModelJson {
    pub fn to_model(self) -> Result<LatticeModel, JsonError> {
        match self {
            Self::Rational { n } => Ok(LatticeModel::rational(n)),
            Self::Ruled { genus: 0, .. } => Err(JsonError::Model("ruled genus must be at least 1".into())),
            Self::Ruled { genus, n } => Ok(LatticeModel::ruled(genus, n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub model: ModelJson,
    pub coeffs: Vec<Coeff>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub model: ModelJson,
    pub matrix: Vec<Vec<Coeff>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JsonError {
    Syntax(String),
    Model(String),
    BadCoefficient { index: usize, text: String },
    NonInteger { index: usize },
    Lattice(LatticeError),
}

impl fmt::Display for JsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(msg) => write!(f, "invalid JSON: {msg}"),
            Self::Model(msg) => write!(f, "invalid model: {msg}"),
            Self::BadCoefficient { index, text } => {
                write!(f, "coefficient {index} is not an integer or p/q: {text:?}")
            }
            Self::NonInteger { index } => write!(f, "coefficient {index} must be an integer"),
            Self::Lattice(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for JsonError {}

impl From<LatticeError> for JsonError {
    fn from(e: LatticeError) -> Self {
        Self::Lattice(e)
    }
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        Self::Syntax(e.to_string())
    }
}

pub fn int_coeff(v: &Int) -> Coeff {
    v.to_i64().map_or_else(|| Coeff::Text(v.to_string()), Coeff::Int)
}

pub fn rational_coeff(v: &Rational) -> Coeff {
    if v.is_integer() {
        int_coeff(&v.to_integer())
    } else {
        Coeff::Text(v.to_string())
    }
}

fn parse_rational(index: usize, c: &Coeff) -> Result<Rational, JsonError> {
    let bad = |text: &str| JsonError::BadCoefficient {
        index,
        text: text.to_owned(),
    };
    match c {
        Coeff::Int(v) => Ok(Rational::from(Int::from(*v))),
        Coeff::Text(t) => {
            let t = t.trim();
            let (p, q) = match t.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (t, "1"),
            };
            let p = Int::from_str(p).map_err(|_| bad(t))?;
            let q = Int::from_str(q).map_err(|_| bad(t))?;
            if q.is_zero() {
                return Err(bad(t));
            }
            Ok(Rational::new(p, q))
        }
    }
}

fn parse_int(index: usize, c: &Coeff) -> Result<Int, JsonError> {
    let r = parse_rational(index, c)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(JsonError::NonInteger { index })
    }
}

pub fn class_to_json(x: &HomClass) -> ClassJson {
    ClassJson {
        model: x.model().into(),
        coeffs: x.coeffs().iter().map(int_coeff).collect(),
    }
}

pub fn class_from_json(j: &ClassJson) -> Result<HomClass, JsonError> {
    let model = j.model.to_model()?;
    let coeffs = j
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| parse_int(i, c))
        .collect::<Result<_, _>>()?;
    Ok(HomClass::new(model, coeffs)?)
}

pub fn form_to_json(x: &FormClass) -> ClassJson {
    ClassJson {
        model: x.model().into(),
        coeffs: x.coeffs().iter().map(rational_coeff).collect(),
    }
}

pub fn form_from_json(j: &ClassJson) -> Result<FormClass, JsonError> {
    let model = j.model.to_model()?;
    let coeffs = j
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| parse_rational(i, c))
        .collect::<Result<_, _>>()?;
    Ok(FormClass::new(model, coeffs)?)
}

pub fn matrix_to_json(m: &IsometryMatrix) -> MatrixJson {
    MatrixJson {
        model: m.model().into(),
        matrix: m
            .entries()
            .rows()
            .map(|row| row.iter().map(int_coeff).collect())
            .collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<IsometryMatrix, JsonError> {
    let model = j.model.to_model()?;
    let rows = j
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, c)| parse_int(i, c))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IsometryMatrix::from_rows(model, rows)?)
}

pub fn parse_class_json(text: &str) -> Result<HomClass, JsonError> {
    class_from_json(&serde_json::from_str(text)?)
}

pub fn parse_form_json(text: &str) -> Result<FormClass, JsonError> {
    form_from_json(&serde_json::from_str(text)?)
}

pub fn parse_matrix_json(text: &str) -> Result<IsometryMatrix, JsonError> {
    matrix_from_json(&serde_json::from_str(text)?)
}
