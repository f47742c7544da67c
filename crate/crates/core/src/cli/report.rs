//! JSON reports. Floats are written in exponent form with 17 significant
//! digits; non-finite values (an absent guarantee) become `null` and read
//! back as infinity.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::selection::SelectionResult;

pub const SCHEMA_VERSION: u32 = 1;

pub(crate) mod precise {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            let n: serde_json::Number = format!("{v:.16e}")
                .parse()
                .expect("exponent-form float is a JSON number");
            n.serialize(s)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Hex SHA-256 of the input file's bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input_digest: String,
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub indices: Vec<usize>,
    #[serde(with = "precise")]
    pub fro_sq_selected: f64,
    #[serde(with = "precise")]
    pub spec_sq_selected: f64,
    #[serde(with = "precise")]
    pub fro_sq_full: f64,
    #[serde(with = "precise")]
    pub spec_sq_full: f64,
    #[serde(with = "precise")]
    pub bound_fro: f64,
    #[serde(with = "precise")]
    pub bound_spec: f64,
    pub seed: Option<u64>,
    pub rounds: Option<usize>,
    #[serde(with = "precise")]
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn from_selection(r: &SelectionResult, input_digest: String, n: usize, m: usize, k: usize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "select".into(),
            input_digest,
            algo: r.algo.into(),
            n,
            m,
            k,
            indices: r.indices.indices().to_vec(),
            fro_sq_selected: r.fro_sq_selected,
            spec_sq_selected: r.spec_sq_selected,
            fro_sq_full: r.fro_sq_full,
            spec_sq_full: r.spec_sq_full,
            bound_fro: r.bound_fro,
            bound_spec: r.bound_spec,
            seed: r.seed,
            rounds: r.rounds,
            elapsed_ms: r.elapsed_ms,
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeReport {
    pub schema_version: u32,
    pub command: String,
    pub input_digest: String,
    pub algo: String,
    pub n_vertices: usize,
    pub m: usize,
    pub edges: Vec<usize>,
    #[serde(with = "precise")]
    pub stretch_direct: f64,
    #[serde(with = "precise")]
    pub stretch_trace: f64,
    #[serde(with = "precise")]
    pub stretch_subset: f64,
    /// `(n - 1)(m - n + 2)`.
    #[serde(with = "precise")]
    pub stretch_bound: f64,
    #[serde(with = "precise")]
    pub weight_product: f64,
    pub seed: Option<u64>,
    #[serde(with = "precise")]
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct One(#[serde(with = "precise")] f64);

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = serde_json::to_string(&One(0.1)).unwrap();
        assert_eq!(s, "1.0000000000000001e-1");
        let back: One = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, 0.1);
        assert_eq!(serde_json::to_string(&One(f64::INFINITY)).unwrap(), "null");
        assert!(serde_json::from_str::<One>("null").unwrap().0.is_infinite());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
