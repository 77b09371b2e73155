//! JSON instance files.
//!
//! ```json
//! {"v": 1, "name": "binary", "p": [[0, 0], [1, 0]], "q": [[-0.25, 0], [0, 0], [1, 0]], "c": [0, 0]}
//! ```
//!
//! Coefficients are `[re, im]` pairs in ascending order.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::InstanceSpec;
use crate::poly::{Polynomial, RationalFunction};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: Vec<[f64; 2]>,
    pub q: Vec<[f64; 2]>,
    #[serde(default)]
    pub c: [f64; 2],
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn to_pairs(coeffs: &[Complex64]) -> Vec<[f64; 2]> {
    coeffs.iter().map(|z| [z.re, z.im]).collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInstance(e.to_string()))?;
        if file.v != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                file.v
            )));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance files always serialize")
    }

    pub fn from_parts(name: Option<String>, r: &RationalFunction, c: Complex64) -> Self {
        Self {
            v: SCHEMA_VERSION,
            name,
            p: to_pairs(r.numerator().coeffs()),
            q: to_pairs(r.denominator().coeffs()),
            c: [c.re, c.im],
        }
    }

    /// Validated `(r, c)`. Coefficients must be finite and `q` nonzero.
    pub fn to_instance(&self) -> Result<(RationalFunction, Complex64)> {
        let all = self.p.iter().chain(&self.q).chain(std::iter::once(&self.c));
        if all.flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInstance("non-finite coefficient".into()));
        }
        let r = RationalFunction::new(Polynomial::new(to_complex(&self.p)), Polynomial::new(to_complex(&self.q)))?;
        Ok((r, Complex64::new(self.c[0], self.c[1])))
    }
}

impl From<&InstanceSpec> for InstanceFile {
    fn from(spec: &InstanceSpec) -> Self {
        Self::from_parts(Some(spec.name.clone()), &spec.r, spec.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::mpw;

    #[test]
    fn parse_binary() {
        let text = r#"{"v": 1, "p": [[0, 0], [1, 0]], "q": [[-0.25, 0], [0, 0], [1, 0]], "c": [0, 0]}"#;
        let (r, c) = InstanceFile::from_json(text).unwrap().to_instance().unwrap();
        assert_eq!(r, mpw(2, 0.5).unwrap().r);
        assert_eq!(c, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn round_trip() {
        let spec = mpw(3, 0.7).unwrap();
        let file = InstanceFile::from(&spec);
        let back = InstanceFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_instance().unwrap(), (spec.r, spec.c));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(InstanceFile::from_json("{").is_err());
        assert!(InstanceFile::from_json(r#"{"v": 2, "p": [[1, 0]], "q": [[1, 0]]}"#).is_err());
        assert!(InstanceFile::from_json(r#"{"v": 1, "p": [[1, 0]], "q": [[1, 0]], "x": 0}"#).is_err());
        let zero_q = InstanceFile::from_json(r#"{"v": 1, "p": [[1, 0]], "q": [[0, 0]]}"#).unwrap();
        assert!(matches!(zero_q.to_instance(), Err(Error::ZeroDenominator)));
        let common = InstanceFile::from_json(r#"{"v": 1, "p": [[-1, 0], [1, 0]], "q": [[-1, 0], [0, 0], [1, 0]]}"#).unwrap();
        assert!(matches!(common.to_instance(), Err(Error::NotCoprime { .. })));
        assert!(InstanceFile::read(Path::new("/nonexistent/instance.json")).is_err());
    }
}
