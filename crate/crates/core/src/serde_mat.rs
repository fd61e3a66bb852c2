//! JSON helpers: complex matrices as row-major arrays of `[re, im]` pairs.

use crate::su3::CMat3;
use crate::C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Row-major `[re, im]` rows of a 3x3 complex matrix.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

/// Convert a complex 3x3 matrix to its JSON layout.
pub fn to_json(m: &CMat3) -> MatrixJson {
    (0..3)
        .map(|i| (0..3).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Parse the JSON layout back into a matrix.
pub fn from_json(rows: &MatrixJson) -> Result<CMat3, String> {
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        return Err("expected a 3x3 array of [re, im] pairs".into());
    }
    Ok(CMat3::from_fn(|i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// Serialize a [`CMat3`] field in the `[re, im]` layout.
pub fn serialize<S: Serializer>(m: &CMat3, s: S) -> Result<S::Ok, S::Error> {
    to_json(m).serialize(s)
}

/// Deserialize a [`CMat3`] field from the `[re, im]` layout.
pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat3, D::Error> {
    let rows = MatrixJson::deserialize(d)?;
    from_json(&rows).map_err(serde::de::Error::custom)
}
