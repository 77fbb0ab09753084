//! JSON interchange: complex matrices as `[[[re, im], ...], ...]` and a
//! canonical writer that prints every float with 17 significant digits.

use std::io;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

use crate::linalg::CMat;

/// Rows of `[re, im]` pairs.
pub fn cmat_to_rows(m: &CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn cmat_from_rows(rows: &[Vec<Complex64>]) -> Result<CMat, String> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err("ragged complex matrix".into());
    }
    if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err("non-finite complex matrix entry".into());
    }
    Ok(CMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// Serde adapter for a single complex matrix.
pub mod cmat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        cmat_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let rows = Vec::<Vec<Complex64>>::deserialize(d)?;
        cmat_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of complex matrices.
pub mod cmat_list {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(cmat_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMat>, D::Error> {
        Vec::<Vec<Vec<Complex64>>>::deserialize(d)?
            .iter()
            .map(|rows| cmat_from_rows(rows))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Compact JSON with floats as `d.dddddddddddddddde±x`. Non-finite values
/// become `null`.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_null<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(writer)
    }
}

/// Deterministic rendering: struct field order, 17 significant digits.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_digits() {
        let text = to_canonical_json(&serde_json::json!({"x": 0.1, "n": 3, "v": [1.0, -2.5e-300]}));
        assert_eq!(text, r#"{"x":1.0000000000000001e-1,"n":3,"v":[1.0000000000000000e0,-2.5000000000000000e-300]}"#);
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1);
        assert_eq!(to_canonical_json(&f64::NAN), "null");
    }

    #[test]
    fn complex_matrix_rows() {
        let m = CMat::from_fn(2, 1, |i, _| Complex64::new(i as f64, -1.0));
        let text = serde_json::to_string(&cmat_to_rows(&m)).unwrap();
        assert_eq!(text, "[[[0.0,-1.0]],[[1.0,-1.0]]]");
        let rows: Vec<Vec<Complex64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(cmat_from_rows(&rows).unwrap(), m);
        assert!(cmat_from_rows(&[vec![Complex64::new(0.0, 0.0)], vec![]]).is_err());
    }
}
