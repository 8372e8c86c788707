//! Assembles a bound's input from the files passed to `bound --inputs`.

use std::fs;
use std::path::PathBuf;

use serde_json::Value;

use blockdet::block::partition;
use blockdet::bounds::BoundName;
use blockdet::harness::{parse_instance, Instance};
use blockdet::{BlockMatrix, Error, Matrix};

fn read(path: &PathBuf) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn matrix(v: Value) -> Result<Matrix, Error> {
    if v.get("blocks").is_some() {
        return Ok(serde_json::from_value::<BlockMatrix>(v)?.flatten());
    }
    Ok(serde_json::from_value(v)?)
}

fn block_matrix(v: Value, n: Option<usize>) -> Result<BlockMatrix, Error> {
    if v.get("blocks").is_some() {
        return Ok(serde_json::from_value(v)?);
    }
    let m: Matrix = serde_json::from_value(v)?;
    let n = n.unwrap_or(m.rows());
    if n == 0 || m.rows() % n != 0 {
        return Err(Error::DimensionMismatch(format!("cannot split dimension {} into {n} block rows", m.rows())));
    }
    let k = m.rows() / n;
    partition(&m, n, k, k)
}

fn one(values: Vec<Value>, bound: BoundName) -> Result<Value, Error> {
    let count = values.len();
    let mut it = values.into_iter();
    match (it.next(), count) {
        (Some(v), 1) => Ok(v),
        _ => Err(Error::ShapeMismatch(format!("bound `{bound}` takes exactly one input file, got {count}"))),
    }
}

fn missing(flag: &str, bound: BoundName) -> Error {
    Error::InvalidConfig(format!("bound `{bound}` needs {flag}"))
}

/// A single file holding an instance (or a recorded violation) is used as is;
/// otherwise the files are read as the bound's matrices in order.
pub fn build_instance(
    bound: BoundName,
    paths: &[PathBuf],
    split: Option<usize>,
    q: Option<u32>,
    n: Option<usize>,
) -> Result<Instance, Error> {
    let values = paths.iter().map(read).collect::<Result<Vec<_>, _>>()?;
    if let [v] = values.as_slice() {
        if v.get("kind").is_some() || v.get("instance").is_some() {
            return parse_instance(&v.to_string());
        }
    }
    use BoundName::*;
    Ok(match bound {
        Hadamard | Oppenheim | OppenheimSchur | Chen | Coro26 | Coro27 => {
            Instance::Matrices { matrices: values.into_iter().map(matrix).collect::<Result<_, _>>()? }
        }
        Fischer => {
            let split = split.ok_or_else(|| missing("--split", bound))?;
            Instance::Split { matrix: matrix(one(values, bound)?)?, split }
        }
        Kim | Thm21 | Thm24 | Thm25 => Instance::Blocks {
            factors: values.into_iter().map(|v| block_matrix(v, n)).collect::<Result<_, _>>()?,
        },
        Lemma23 => Instance::Array { rows: serde_json::from_value(one(values, bound)?)? },
        Coro24 => {
            let q = q.ok_or_else(|| missing("--q", bound))?;
            Instance::Powers { values: serde_json::from_value(one(values, bound)?)?, q }
        }
    })
}
