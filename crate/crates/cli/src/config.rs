use crate::error::CliError;
use serde::Serialize;
use std::collections::BTreeMap;

pub const TOLERANCES: &[(&str, f64)] = &[
    ("closed_form", 1e-6),
    ("cocycle", 1e-8),
    ("dedup", 1e-6),
    ("detect", 1e-8),
    ("holcalc_first", 1e-6),
    ("holcalc_second", 1e-5),
    ("quaternion", 1e-8),
    ("rank", 1e-8),
    ("residual", 1e-10),
    ("span", 1e-8),
];

pub const BOUNDS: &[(&str, u64)] = &[
    ("closed_form_n", 128),
    ("closed_form_per_case", 3),
    ("eigen_max_len", 4),
    ("family_base_len", 2),
    ("family_k", 12),
    ("fingerprint_len", 3),
    ("holcalc_n", 256),
    ("holcalc_trials", 100),
    ("max_iter", 200),
    ("quaternion_trials", 1000),
    ("short_word_len", 4),
    ("span_max_len", 6),
    ("span_max_power", 12),
    ("starts", 256),
];

/// Effective run settings, echoed into every artifact.
///
/// Keys are `seed`, `tol.<name>` and `bound.<name>`; `paths` records the
/// input and output paths given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub bounds: BTreeMap<String, u64>,
    pub paths: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerances: TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            bounds: BOUNDS.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            paths: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Validation(format!("config key `{key}`: {what} `{value}`"));
        if key == "seed" {
            self.seed = value.parse().map_err(|_| bad("expected an unsigned integer, got"))?;
        } else if let Some(name) = key.strip_prefix("tol.") {
            let slot = self.tolerances.get_mut(name).ok_or_else(|| bad("unknown tolerance, value"))?;
            let v: f64 = value.parse().map_err(|_| bad("expected a number, got"))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad("tolerance must be positive, got"));
            }
            *slot = v;
        } else if let Some(name) = key.strip_prefix("bound.") {
            let slot = self.bounds.get_mut(name).ok_or_else(|| bad("unknown bound, value"))?;
            *slot = value.parse().map_err(|_| bad("expected an unsigned integer, got"))?;
        } else {
            return Err(bad("unknown key, value"));
        }
        Ok(())
    }

    /// Apply a flat `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("config line {}: expected `key = value`", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn bound(&self, name: &str) -> usize {
        self.bounds[name] as usize
    }

    pub fn path(&mut self, name: &str, value: &str) {
        self.paths.insert(name.to_string(), value.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nseed = 9\ntol.rank = 1e-6\n\nbound.starts=12 # trailing").unwrap();
        assert_eq!((c.seed, c.tol("rank"), c.bound("starts")), (9, 1e-6, 12));
        assert_eq!(c.tol("residual"), 1e-10);
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut c = RunConfig::default();
        assert!(c.set("tol.nope", "1").is_err());
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("tol.rank", "-1").is_err());
        assert!(c.apply_text("seed 3").is_err());
    }
}
