//! Complex number helpers shared by the serialised forms and the command line.

use serde::{Deserialize, Serialize};

use crate::C64;

/// `[re, im]`, the wire form of a complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair(pub [f64; 2]);

impl From<C64> for ComplexPair {
    fn from(z: C64) -> Self {
        ComplexPair([z.re, z.im])
    }
}

impl From<ComplexPair> for C64 {
    fn from(p: ComplexPair) -> Self {
        C64::new(p.0[0], p.0[1])
    }
}

/// Parses `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {t:?} in {s:?}: {e}"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse(re)?, parse(im)?)),
        None => Ok(C64::new(parse(s)?, 0.0)),
    }
}

pub(crate) mod pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<ComplexPair> = v.iter().map(|&z| z.into()).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<ComplexPair>::deserialize(d)?;
        Ok(pairs.into_iter().map(C64::from).collect())
    }
}

pub(crate) mod pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        ComplexPair::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        Ok(ComplexPair::deserialize(d)?.into())
    }
}

/// Real segment `[-2, 2]` test with tolerance on both the imaginary part and
/// the endpoints.
pub(crate) fn in_segment(z: C64, tol: f64) -> bool {
    z.im.abs() <= tol && z.re >= -2.0 - tol && z.re <= 2.0 + tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_reals() {
        assert_eq!(parse_complex("3,0").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex(" -1.5 , 2 ").unwrap(), C64::new(-1.5, 2.0));
        assert_eq!(parse_complex("2.5").unwrap(), C64::new(2.5, 0.0));
        assert!(parse_complex("x,1").is_err());
    }

    #[test]
    fn segment_edges() {
        assert!(in_segment(C64::new(2.0, 0.0), 1e-9));
        assert!(in_segment(C64::new(-2.0 - 1e-10, 1e-10), 1e-9));
        assert!(!in_segment(C64::new(2.1, 0.0), 1e-9));
        assert!(!in_segment(C64::new(0.0, 1e-6), 1e-9));
    }
}
