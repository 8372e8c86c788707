//! `{"rows": r, "cols": c, "entries": [...]}` with row-major entries given either as
//! plain numbers (real) or `[re, im]` pairs. Doubles are written in shortest
//! round-trip form, so a parse of the output reproduces every bit.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Matrix, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let real = self.is_real();
        let entries = self
            .entries()
            .iter()
            .map(|z| if real { Entry::Real(z.re) } else { Entry::Complex([z.re, z.im]) })
            .collect();
        MatrixJson { rows: self.rows(), cols: self.cols(), entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let entries = raw
            .entries
            .into_iter()
            .map(|e| match e {
                Entry::Real(x) => Scalar::new(x, 0.0),
                Entry::Complex([re, im]) => Scalar::new(re, im),
            })
            .collect();
        Matrix::new(raw.rows, raw.cols, entries).map_err(serde::de::Error::custom)
    }
}
