//! Serde adapters that keep `±∞` and NaN intact in formats without them.
//!
//! JSON has no infinities, and `serde_json` writes them as `null`, which then
//! fails to read back. Finite values are written as numbers and the others as
//! the strings `"inf"`, `"-inf"` and `"nan"`. Use with
//! `#[serde(with = "crate::nonfinite::float")]` (or `option`, `vec`).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Tag(String),
}

fn to_repr(x: f64) -> Repr {
    if x.is_finite() {
        Repr::Num(x)
    } else if x.is_nan() {
        Repr::Tag("nan".into())
    } else if x > 0.0 {
        Repr::Tag("inf".into())
    } else {
        Repr::Tag("-inf".into())
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
    match r {
        Repr::Num(x) => Ok(x),
        Repr::Tag(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(E::custom(format!("expected a number, \"inf\", \"-inf\" or \"nan\", found \"{other}\""))),
        },
    }
}

pub mod float {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(to_repr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|&v| to_repr(v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Debug, Serialize, Deserialize)]
    struct Sample {
        #[serde(with = "super::float")]
        a: f64,
        #[serde(with = "super::option")]
        b: Option<f64>,
        #[serde(with = "super::option")]
        c: Option<f64>,
        #[serde(with = "super::vec")]
        d: Vec<f64>,
    }

    #[test]
    fn round_trips_through_json() {
        let s = Sample {
            a: f64::INFINITY,
            b: Some(f64::NEG_INFINITY),
            c: None,
            d: vec![0.1, f64::NAN, -2.5e-300, f64::INFINITY],
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"a":"inf","b":"-inf","c":null,"d":[0.1,"nan",-2.5e-300,"inf"]}"#);
        let back: Sample = serde_json::from_str(&text).unwrap();
        assert_eq!(back.a, f64::INFINITY);
        assert_eq!(back.b, Some(f64::NEG_INFINITY));
        assert_eq!(back.c, None);
        assert_eq!(back.d[0], 0.1);
        assert!(back.d[1].is_nan());
        assert_eq!(back.d[2], -2.5e-300);
    }

    #[test]
    fn rejects_unknown_tags() {
        assert!(serde_json::from_str::<Sample>(r#"{"a":"infinity","b":null,"c":null,"d":[]}"#).is_err());
    }
}
