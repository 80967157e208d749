//! Shared report plumbing: schema version, input hashing, optional run statistics.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::rootsys::SIGN_CONVENTION;

pub const SCHEMA_VERSION: u32 = 1;

/// Version string folded into input hashes and cache keys.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of the canonical JSON of `input` together with the sign convention
/// and code version.
pub fn input_hash<T: Serialize>(input: &T) -> String {
    let body = serde_json::to_string(&serde_json::json!({
        "input": input,
        "sign_convention": SIGN_CONVENTION,
        "code_version": CODE_VERSION,
    }))
    .expect("serializable input");
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Wall-clock and memory figures; only attached to reports on request so that
/// default output stays byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub wall_ms: u64,
    /// peak resident set size in KiB, where the platform reports it
    pub peak_rss_kib: Option<u64>,
}

impl RunStats {
    pub fn since(start: std::time::Instant) -> Self {
        RunStats {
            wall_ms: start.elapsed().as_millis() as u64,
            peak_rss_kib: peak_rss_kib(),
        }
    }
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

/// JSON description of the report formats, printed by `--schema`.
pub fn schema() -> serde_json::Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "CriterionReport": {
            "schema_version": "integer",
            "input_hash": "hex sha256 of the canonical input",
            "type_label": "string, e.g. A2",
            "p": "prime",
            "gamma": "weight in fundamental coordinates, 2(p-1)rho",
            "condition": "\"condition2\" | \"v0\"",
            "verdict": "boolean",
            "witness": "object of named witness values",
            "stats": "optional {wall_ms, peak_rss_kib}"
        },
        "G2Report": {
            "schema_version": "integer",
            "input_hash": "hex sha256 of the canonical input",
            "p": "prime",
            "exploration": "true when p < 11; no certification is claimed",
            "steps": "array of {name, verdict, detail}",
            "overall": "conjunction of the step verdicts",
            "certified": "overall and not exploration",
            "status": "\"certified\" | \"failed\" | \"exploration only\"",
            "stats": "optional {wall_ms, peak_rss_kib}"
        },
        "RootTable": {
            "type_label": "string",
            "cartan": "array of rows",
            "roots": "array of {index, root: comma-joined simple-root coordinates, height, pairings: comma-joined <beta, alpha_i^vee>}",
            "jacobi": "boolean"
        },
        "EssentialTable": {
            "type_label": "string",
            "lambda": "weight",
            "p": "0 for the rationals",
            "order": "monomial order name",
            "count": "integer",
            "weyl_dimension": "decimal string",
            "entries": "array of {s: comma-joined tuple, degree}",
            "oracle": "optional {agrees, missing_from_table, missing_from_sweep}"
        },
        "FiltrationReport": {
            "type_label": "string",
            "lambda": "weight",
            "mu": "optional weight",
            "p": "0 for the rationals",
            "levels": "array of {n, dim}",
            "graded": "array of graded dimensions",
            "full_dim": "integer",
            "note": "optional string"
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let a = input_hash(&serde_json::json!({"p": 11}));
        assert_eq!(a, input_hash(&serde_json::json!({"p": 11})));
        assert_ne!(a, input_hash(&serde_json::json!({"p": 13})));
        assert_eq!(a.len(), 64);
    }
}
