//! Serialization helpers that round floats to 12 significant digits.

use serde::ser::SerializeSeq;
use serde::Serializer;

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round12(*x))
}

pub fn sig12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round12(*v)),
        None => s.serialize_none(),
    }
}

pub fn sig12_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&round12(*x))?;
    }
    seq.end()
}

pub fn sig12_vecs<S: Serializer>(xs: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        let rounded: Vec<f64> = x.iter().map(|v| round12(*v)).collect();
        seq.serialize_element(&rounded)?;
    }
    seq.end()
}

/// `x` printed with 12 significant digits, for CSV output.
pub fn csv12(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else if r.is_finite() {
        format!("{r}")
    } else {
        String::from("nan")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(2.0 / 3.0 * 1e-20), 6.66666666667e-21);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(csv12(1.25), "1.25");
        assert_eq!(csv12(4.99e-9), "4.99e-9");
        assert!(round12(f64::INFINITY).is_infinite());
    }
}
