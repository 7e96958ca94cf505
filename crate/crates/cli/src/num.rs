//! Floating output: 17 significant digits, `inf` for `+∞`.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Serializes as a JSON number with 17 significant digits, `"inf"` for
/// infinities, and `null` for NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_nan() {
            s.serialize_none()
        } else if x.is_infinite() {
            s.serialize_str(&fmt17(x))
        } else {
            RawValue::from_string(fmt17(x)).map_err(serde::ser::Error::custom)?.serialize(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        let x = std::f64::consts::SQRT_2;
        assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn json_numbers() {
        let v = vec![Num(0.5), Num(f64::INFINITY), Num(f64::NAN)];
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[5.0000000000000000e-1,"inf",null]"#);
    }
}
