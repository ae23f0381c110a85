//! Run configuration as `key = value` lines.
//!
//! ```text
//! # comment
//! input = scans/thorax.mcwl      # or `phantom` for a seeded synthetic volume
//! output_dir = out
//! methods = none, block, mesh, graph
//! grid_size = 8
//! block_size = 8
//! search_range = 8
//! knn = 25
//! update_variant = transpose    # or eq5
//! distances = subpixel          # or rounded
//! seed = 0
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use edgelift_core::motion::MAX_SEARCH_RANGE;
use edgelift_core::{DistanceMode, Method, Params, UpdateVariant};

use crate::{Error, Result};

/// `input` value selecting a generated phantom instead of a file.
pub const PHANTOM_INPUT: &str = "phantom";

pub const KEYS: [&str; 10] = [
    "input",
    "output_dir",
    "methods",
    "grid_size",
    "block_size",
    "search_range",
    "knn",
    "update_variant",
    "distances",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub input: Option<String>,
    pub output_dir: PathBuf,
    pub methods: Vec<Method>,
    pub params: Params,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            input: None,
            output_dir: PathBuf::from("edgelift-out"),
            methods: Method::ALL.to_vec(),
            params: Params::default(),
            seed: 0,
        }
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn positive(key: &str, value: &str) -> Result<usize> {
    match number::<usize>(key, value)? {
        0 => Err(Error::Config(format!("{key} must be positive"))),
        n => Ok(n),
    }
}

impl Config {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Config> {
        let mut config = Config::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Config> {
        let path = path.as_ref();
        Config::parse(&fs::read_to_string(path).map_err(Error::io(path))?)
    }

    /// Sets one key; unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let p = &mut self.params;
        match key {
            "input" => self.input = Some(value.to_string()).filter(|v| !v.is_empty()),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "methods" => {
                let methods = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(Method::from_str)
                    .collect::<edgelift_core::Result<Vec<_>>>()?;
                if methods.is_empty() {
                    return Err(Error::Config("methods must name at least one method".into()));
                }
                let mut unique = Vec::new();
                for m in methods {
                    if !unique.contains(&m) {
                        unique.push(m);
                    }
                }
                self.methods = unique;
            }
            "grid_size" => p.grid_size = positive(key, value)?,
            "block_size" => p.block_size = positive(key, value)?,
            "search_range" => {
                let range: u8 = number(key, value)?;
                if range > MAX_SEARCH_RANGE {
                    return Err(Error::Config(format!("search_range must be <= {MAX_SEARCH_RANGE}")));
                }
                p.search_range = range;
            }
            "knn" => p.knn = positive(key, value)?,
            "update_variant" => p.update = UpdateVariant::from_str(value)?,
            "distances" => p.distances = DistanceMode::from_str(value)?,
            "seed" => self.seed = number(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Canonical text form; parsing it yields the same configuration.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let methods: Vec<_> = self.methods.iter().map(|m| m.name()).collect();
        let mut out = String::new();
        if let Some(input) = &self.input {
            writeln!(out, "input = {input}").unwrap();
        }
        writeln!(out, "output_dir = {}", self.output_dir.display()).unwrap();
        writeln!(out, "methods = {}", methods.join(", ")).unwrap();
        writeln!(out, "grid_size = {}", p.grid_size).unwrap();
        writeln!(out, "block_size = {}", p.block_size).unwrap();
        writeln!(out, "search_range = {}", p.search_range).unwrap();
        writeln!(out, "knn = {}", p.knn).unwrap();
        writeln!(out, "update_variant = {}", p.update.name()).unwrap();
        writeln!(out, "distances = {}", p.distances.name()).unwrap();
        writeln!(out, "seed = {}", self.seed).unwrap();
        out
    }

    /// Parameters for one method.
    pub fn params_for(&self, method: Method) -> Params {
        self.params.with_method(method)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_reference_setup() {
        let c = Config::default();
        assert_eq!(c.params.grid_size, 8);
        assert_eq!(c.params.block_size, 8);
        assert_eq!(c.params.search_range, 8);
        assert_eq!(c.params.knn, 25);
        assert_eq!(c.methods, Method::ALL.to_vec());
    }

    #[test]
    fn parse_and_roundtrip() {
        let c = Config::parse(
            "# run\ninput = a.mcwl\nmethods = mesh, graph,mesh\nknn=9 # small\nupdate_variant = eq5\ndistances = rounded\nseed = 12\n",
        )
        .unwrap();
        assert_eq!(c.input.as_deref(), Some("a.mcwl"));
        assert_eq!(c.methods, vec![Method::Mesh, Method::Graph]);
        assert_eq!(c.params.knn, 9);
        assert_eq!(c.params.update, UpdateVariant::Eq5);
        assert_eq!(c.params.distances, DistanceMode::Rounded);
        assert_eq!(c.seed, 12);
        assert_eq!(Config::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("knn").is_err());
        assert!(Config::parse("knn = 0").is_err());
        assert!(Config::parse("search_range = 200").is_err());
        assert!(Config::parse("methods = wavelet").is_err());
        assert!(Config::parse("methods = ,").is_err());
        assert!(Config::parse("update_variant = both").is_err());
    }
}
