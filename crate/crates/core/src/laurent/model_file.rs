use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{LaurentError, LaurentPolynomial};
use crate::mp::parse_rational;

/// On-disk model: `{"num_vars": m, "terms": [{"exp": [..], "coeff": "p/q"}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub num_vars: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub exp: Vec<i64>,
    /// Decimal integer or `p/q` string.
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelFileError {
    /// The document is not valid JSON or does not match the schema.
    #[error("malformed model file: {0}")]
    Malformed(String),
    /// Well-formed JSON describing an invalid polynomial.
    #[error("invalid model: {0}")]
    Invalid(#[from] LaurentError),
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        serde_json::from_str(text).map_err(|e| ModelFileError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serializes")
    }

    pub fn from_polynomial(f: &LaurentPolynomial) -> Self {
        Self {
            num_vars: f.num_vars(),
            terms: f
                .terms()
                .iter()
                .map(|(e, c)| TermRecord {
                    exp: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<LaurentPolynomial, ModelFileError> {
        let mut terms: Vec<(Vec<i64>, Rational)> = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = parse_rational(&t.coeff)
                .map_err(|e| ModelFileError::Malformed(format!("terms[{i}].coeff: {e}")))?;
            terms.push((t.exp.clone(), coeff));
        }
        Ok(LaurentPolynomial::new(self.num_vars, terms)?)
    }
}

impl LaurentPolynomial {
    /// Parses the JSON model format.
    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        ModelFile::from_json(text)?.to_polynomial()
    }

    pub fn to_json(&self) -> String {
        ModelFile::from_polynomial(self).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"num_vars": 2, "terms": [
            {"exp": [1, 0], "coeff": "1"},
            {"exp": [0, 1], "coeff": "3/2"},
            {"exp": [-1, -1], "coeff": "2"}]}"#;
        let f = LaurentPolynomial::from_json(text).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.coefficient(&[0, 1]), Some(&Rational::from((3, 2))));
        let again = LaurentPolynomial::from_json(&f.to_json()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn rejects_bad_input() {
        let dup =
            r#"{"num_vars": 1, "terms": [{"exp": [1], "coeff": "1"}, {"exp": [1], "coeff": "2"}]}"#;
        assert_eq!(
            LaurentPolynomial::from_json(dup),
            Err(ModelFileError::Invalid(LaurentError::DuplicateExponent(
                vec![1]
            )))
        );
        let neg = r#"{"num_vars": 1, "terms": [{"exp": [1], "coeff": "-1"}]}"#;
        assert!(matches!(
            LaurentPolynomial::from_json(neg),
            Err(ModelFileError::Invalid(
                LaurentError::NegativeCoefficient { .. }
            ))
        ));
        let missing = r#"{"num_vars": 1, "terms": [{"exp": [1]}]}"#;
        match LaurentPolynomial::from_json(missing) {
            Err(ModelFileError::Malformed(msg)) => assert!(msg.contains("coeff"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_coeff = r#"{"num_vars": 1, "terms": [{"exp": [1], "coeff": "one"}]}"#;
        match LaurentPolynomial::from_json(bad_coeff) {
            Err(ModelFileError::Malformed(msg)) => assert!(msg.contains("terms[0].coeff"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let dims = r#"{"num_vars": 2, "terms": [{"exp": [1], "coeff": "1"}]}"#;
        assert!(matches!(
            LaurentPolynomial::from_json(dims),
            Err(ModelFileError::Invalid(
                LaurentError::DimensionMismatch { .. }
            ))
        ));
    }
}
