//! Run configuration: flat `key = value` lines, `#` comments.
//!
//! ```text
//! p = 5
//! vars = x, y, z
//! relation = x^3 + y^3 + z^3
//! gens = x; y; z
//! q = 5, 25, 125
//! ```

use std::collections::BTreeMap;

use hkslope::hk::{frobenius_exponent, HkOptions};
use hkslope::ring::IdealSpec;
use hkslope::{Rational, SetupError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("`{key}`: {msg}")]
    Value { key: &'static str, msg: String },
    #[error("{q} is not a power of p = {p}")]
    NotPowerOfP { q: u64, p: u64 },
    #[error(transparent)]
    Setup(#[from] SetupError),
}

const KEYS: &[&str] = &[
    "p",
    "vars",
    "relation",
    "gens",
    "q",
    "e",
    "max_degree",
    "max_matrix_dim",
    "consecutive_zeros",
    "max_e",
    "window_k",
    "denominator_bound",
    "parallel",
    "per_degree_csv",
    "summary_csv",
];

/// Largest `dim R_m` eliminated unless the config raises it.
pub const DEFAULT_MAX_MATRIX_DIM: usize = 10_000;

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// The file as read, echoed into every output.
    pub text: String,
    pub p: u64,
    pub vars: Vec<String>,
    pub relation: Option<String>,
    pub gens: Vec<String>,
    pub qs: Vec<u64>,
    pub max_degree: Option<usize>,
    pub max_matrix_dim: Option<usize>,
    pub consecutive_zeros: Option<usize>,
    pub max_e: u32,
    pub window_k: Option<Rational>,
    pub denominator_bound: Option<u128>,
    pub parallel: bool,
    pub per_degree_csv: Option<String>,
    pub summary_csv: Option<String>,
}

fn number<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, ConfigError> {
    v.trim().parse().map_err(|_| ConfigError::Value { key, msg: format!("`{v}` is not a valid number") })
}

fn list(v: &str, sep: char) -> Vec<&str> {
    v.split(sep).map(str::trim).filter(|s| !s.is_empty()).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(ConfigError::UnknownKey { line: i + 1, key: k.into() });
            }
            if map.insert(k, v.trim()).is_some() {
                return Err(ConfigError::Duplicate { line: i + 1, key: k.into() });
            }
        }
        let get = |k: &'static str| map.get(k).copied();
        let need = |k: &'static str| get(k).ok_or(ConfigError::Missing(k));

        let p: u64 = number("p", need("p")?)?;
        let vars: Vec<String> = list(need("vars")?, ',').into_iter().map(String::from).collect();
        let gens: Vec<String> = list(need("gens")?, ';').into_iter().map(String::from).collect();
        let qs = match (get("q"), get("e")) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Value { key: "e", msg: "give either `q` or `e`, not both".into() })
            }
            (Some(q), None) => list(q, ',').into_iter().map(|s| number("q", s)).collect::<Result<Vec<u64>, _>>()?,
            (None, Some(e)) => {
                let (lo, hi) =
                    e.split_once("..").ok_or(ConfigError::Value { key: "e", msg: "expected `a..b`".into() })?;
                let (lo, hi): (u32, u32) = (number("e", lo)?, number("e", hi)?);
                (lo..=hi)
                    .map(|k| p.checked_pow(k).ok_or(ConfigError::Value { key: "e", msg: "overflow".into() }))
                    .collect::<Result<_, _>>()?
            }
            (None, None) => Vec::new(),
        };
        if !(2..1 << 31).contains(&p) {
            return Err(ConfigError::Value { key: "p", msg: format!("{p} is out of range") });
        }
        for &q in &qs {
            if frobenius_exponent(p as u32, q).is_none() {
                return Err(ConfigError::NotPowerOfP { q, p });
            }
        }
        let mut qs = qs;
        qs.sort_unstable();
        qs.dedup();
        let opt = |k: &'static str| get(k).map(|v| number::<usize>(k, v)).transpose();
        Ok(RunConfig {
            text: text.to_string(),
            p,
            vars,
            relation: get("relation").map(String::from),
            gens,
            qs,
            max_degree: opt("max_degree")?,
            max_matrix_dim: Some(opt("max_matrix_dim")?.unwrap_or(DEFAULT_MAX_MATRIX_DIM)),
            consecutive_zeros: opt("consecutive_zeros")?,
            max_e: get("max_e").map(|v| number("max_e", v)).transpose()?.unwrap_or(3),
            window_k: get("window_k")
                .map(|v| {
                    hkslope::rational::parse_rational(v)
                        .map_err(|e| ConfigError::Value { key: "window_k", msg: e.to_string() })
                })
                .transpose()?,
            denominator_bound: get("denominator_bound").map(|v| number("denominator_bound", v)).transpose()?,
            parallel: match get("parallel") {
                None | Some("true") => true,
                Some("false") => false,
                Some(v) => return Err(ConfigError::Value { key: "parallel", msg: format!("`{v}` is not true/false") }),
            },
            per_degree_csv: get("per_degree_csv").map(String::from),
            summary_csv: get("summary_csv").map(String::from),
        })
    }

    pub fn ideal(&self) -> Result<IdealSpec, ConfigError> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let gens: Vec<&str> = self.gens.iter().map(String::as_str).collect();
        Ok(IdealSpec::from_text(self.p, &vars, self.relation.as_deref(), &gens)?)
    }

    pub fn hk_options(&self) -> HkOptions {
        HkOptions {
            consecutive_zeros: self.consecutive_zeros,
            max_degree: self.max_degree,
            max_matrix_dim: self.max_matrix_dim,
            parallel: self.parallel,
        }
    }

    /// The config as `# `-prefixed lines.
    pub fn echo(&self) -> String {
        let mut out = String::from("# config\n");
        for line in self.text.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let c = RunConfig::parse(
            "# smooth cubic\np = 5\nvars = x, y, z\nrelation = x^3 + y^3 + z^3\ngens = x; y; z\nq = 25, 5\nwindow_k = 12\nparallel = false\n",
        )
        .unwrap();
        assert_eq!(c.qs, vec![5, 25]);
        assert_eq!(c.gens, vec!["x", "y", "z"]);
        assert_eq!(c.relation.as_deref(), Some("x^3 + y^3 + z^3"));
        assert!(!c.parallel);
        assert_eq!(c.max_e, 3);
        assert_eq!(c.ideal().unwrap().n(), 3);
        assert!(c.echo().starts_with("# config\n# # smooth cubic\n# p = 5\n"));
    }

    #[test]
    fn exponent_range() {
        let c = RunConfig::parse("p = 3\nvars = x, y\ngens = x; y\ne = 1..3\n").unwrap();
        assert_eq!(c.qs, vec![3, 9, 27]);
    }

    #[test]
    fn rejects_bad_input() {
        let e = RunConfig::parse("p = 2\nvars = x,y\ngens = x; y\nq = 6\n").unwrap_err();
        assert!(matches!(e, ConfigError::NotPowerOfP { q: 6, p: 2 }));
        assert!(matches!(RunConfig::parse("p = 2\ncolour = red\n"), Err(ConfigError::UnknownKey { line: 2, .. })));
        assert!(matches!(RunConfig::parse("p = 2\np = 3\n"), Err(ConfigError::Duplicate { .. })));
        assert!(matches!(RunConfig::parse("p 2\n"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(RunConfig::parse("vars = x\n"), Err(ConfigError::Missing("p"))));
        let c = RunConfig::parse("p = 2\nvars = x, y\ngens = x^2; x^3\n").unwrap();
        assert!(matches!(c.ideal(), Err(ConfigError::Setup(_))));
    }
}
