//! A request document: what the flags of every subcommand, or a `--json-in` file, resolve to.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Request {
    pub command: String,
    pub algebra: Option<String>,
    /// Parameter values as `num/den` strings or integers.
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    /// Structure equations such as `(f^{16},0,0,0,0,0)`, instead of a catalog name.
    pub equations: Option<String>,
    /// `example1`, `table3`, `gk`, `kahler`, `skt`, or explicit pairs `Jf1=f6, ...`.
    pub structure: Option<String>,
    /// Diagonal of the metric.
    pub metric: Option<Vec<String>>,
    pub a: Option<String>,
    pub v: Option<Vec<String>>,
    /// Row-major entries of `A`.
    #[serde(rename = "A")]
    pub a_matrix: Option<Vec<String>>,
    pub s: Option<String>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub alignment: bool,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub samples: Option<usize>,
    pub csv: Option<String>,
    #[serde(default)]
    pub uncorrected: bool,
}
