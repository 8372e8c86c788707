use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::block::BlockMatrix;
use crate::bounds::{self, BoundName, InequalityReport};
use crate::dense::Matrix;
use crate::error::{Error, Result};

/// Serialized input of one bound evaluation.
///
/// ```json
/// {"kind": "matrices", "matrices": [ {matrix}, ... ]}
/// {"kind": "split", "matrix": {matrix}, "split": 2}
/// {"kind": "blocks", "factors": [ {block matrix}, ... ]}
/// {"kind": "array", "rows": [[1.5, 2.0], [3.0, 1.0]]}
/// {"kind": "powers", "values": [2.0, 3.0], "q": 4}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Matrices { matrices: Vec<Matrix> },
    Split { matrix: Matrix, split: usize },
    Blocks { factors: Vec<BlockMatrix> },
    Array { rows: Vec<Vec<f64>> },
    Powers { values: Vec<f64>, q: u32 },
}

impl Instance {
    fn kind(&self) -> &'static str {
        match self {
            Instance::Matrices { .. } => "matrices",
            Instance::Split { .. } => "split",
            Instance::Blocks { .. } => "blocks",
            Instance::Array { .. } => "array",
            Instance::Powers { .. } => "powers",
        }
    }
}

fn mismatch(bound: BoundName, expected: &str, inst: &Instance) -> Error {
    Error::ShapeMismatch(format!("bound `{bound}` expects {expected}, got a `{}` instance", inst.kind()))
}

/// Evaluates `bound` on a serialized instance.
pub fn evaluate(bound: BoundName, inst: &Instance, tol: f64) -> Result<InequalityReport> {
    use BoundName::*;
    match (bound, inst) {
        (Hadamard, Instance::Matrices { matrices }) if matrices.len() == 1 => {
            bounds::hadamard_ineq(&matrices[0], tol)
        }
        (Fischer, Instance::Split { matrix, split }) => bounds::fischer_ineq(matrix, *split, tol),
        (Oppenheim | OppenheimSchur | Chen, Instance::Matrices { matrices }) if matrices.len() == 2 => {
            let (a, b) = (&matrices[0], &matrices[1]);
            match bound {
                Oppenheim => bounds::oppenheim_ineq(a, b, tol),
                OppenheimSchur => bounds::oppenheim_schur_ineq(a, b, tol),
                _ => bounds::chen_bound(a, b, tol),
            }
        }
        (Kim | Thm21, Instance::Blocks { factors }) if factors.len() == 2 => {
            if bound == Kim {
                bounds::kim_bound(&factors[0], &factors[1], tol)
            } else {
                bounds::thm21_bound(&factors[0], &factors[1], tol)
            }
        }
        (Thm24, Instance::Blocks { factors }) => bounds::thm24_bound(factors, tol),
        (Thm25, Instance::Blocks { factors }) => bounds::thm25_ineq(factors, tol),
        (Coro26, Instance::Matrices { matrices }) => bounds::coro26_bound(matrices, tol),
        (Coro27, Instance::Matrices { matrices }) => bounds::coro27_ineq(matrices, tol),
        (Lemma23, Instance::Array { rows }) => bounds::lemma23_check(rows, tol),
        (Coro24, Instance::Powers { values, q }) => bounds::coro24_check(values, *q, tol),
        _ => Err(mismatch(bound, expected_shape(bound), inst)),
    }
}

pub(crate) fn expected_shape(bound: BoundName) -> &'static str {
    use BoundName::*;
    match bound {
        Hadamard => "one matrix",
        Fischer => "a matrix with a split row",
        Oppenheim | OppenheimSchur | Chen => "two matrices",
        Kim | Thm21 => "two block matrices",
        Thm24 | Thm25 => "a list of block matrices",
        Coro26 | Coro27 => "a list of matrices",
        Lemma23 => "an array of rows",
        Coro24 => "values with an exponent q",
    }
}

/// Re-evaluates an instance stored as JSON. The file may hold a bare instance or
/// a recorded violation (an object with an `instance` field).
pub fn replay(path: &Path, bound: BoundName, tol: f64) -> Result<InequalityReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let inst = parse_instance(&text)?;
    evaluate(bound, &inst, tol)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let inner = match value.get("instance") {
        Some(inst) => inst.clone(),
        None => value,
    };
    Ok(serde_json::from_value(inner)?)
}
