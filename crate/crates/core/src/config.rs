//! Size caps and other tunables.
//!
//! A config file holds `key = value` lines; `#` starts a comment. The
//! environment variable `GALMCK_MAXORDER` overrides both order caps.

use std::path::Path;
use std::sync::RwLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest group order for which a character table is computed.
    pub max_table_order: u64,
    /// Largest order of an inertia group for projective representation work.
    pub max_proj_order: u64,
    /// Largest group order for which elements are listed explicitly.
    pub max_enum_order: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_table_order: 5000,
            max_proj_order: 600,
            max_enum_order: 200_000,
            seed: 0,
            threads: 0,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let value = value.trim();
            let num = || -> Result<u64> {
                value
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {value:?}", lineno + 1)))
            };
            match key.trim() {
                "max_table_order" => cfg.max_table_order = num()?,
                "max_proj_order" => cfg.max_proj_order = num()?,
                "max_enum_order" => cfg.max_enum_order = num()?,
                "seed" => cfg.seed = num()?,
                "threads" => cfg.threads = num()? as usize,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn with_env(mut self) -> Self {
        if let Ok(v) = std::env::var("GALMCK_MAXORDER") {
            if let Ok(n) = v.trim().parse::<u64>() {
                self.max_table_order = n;
                self.max_proj_order = n;
            }
        }
        self
    }
}

static CURRENT: RwLock<Option<Config>> = RwLock::new(None);

thread_local! {
    static OVERRIDE: std::cell::RefCell<Option<Config>> = const { std::cell::RefCell::new(None) };
}

/// Run `f` with `cfg` in effect on the current thread only.
pub fn scoped<T>(cfg: Config, f: impl FnOnce() -> T) -> T {
    let prev = OVERRIDE.with(|o| o.replace(Some(cfg)));
    let out = f();
    OVERRIDE.with(|o| *o.borrow_mut() = prev);
    out
}

pub fn current() -> Config {
    if let Some(c) = OVERRIDE.with(|o| o.borrow().clone()) {
        return c;
    }
    if let Some(c) = CURRENT.read().unwrap().as_ref() {
        return c.clone();
    }
    let c = Config::default().with_env();
    *CURRENT.write().unwrap() = Some(c.clone());
    c
}

pub fn install(cfg: Config) {
    *CURRENT.write().unwrap() = Some(cfg);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_file() {
        let c = Config::parse("# caps\nmax_table_order = 100\nseed=7 # trailing\n").unwrap();
        assert_eq!(c.max_table_order, 100);
        assert_eq!(c.seed, 7);
        assert_eq!(c.max_proj_order, 600);
        assert!(Config::parse("bogus = 1").is_err());
        assert!(Config::parse("seed").is_err());
    }
}
