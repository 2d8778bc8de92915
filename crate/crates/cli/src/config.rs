//! Optional TOML config file. Keys are the long flag names; flags win.

use std::path::Path;
use std::str::FromStr;

use crate::Failure;

#[derive(Debug, Default)]
pub struct Config {
    table: toml::Table,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok(Self { table })
    }

    fn raw(&self, key: &str) -> Result<Option<String>, Failure> {
        let Some(value) = self.table.get(key) else {
            return Ok(None);
        };
        match value {
            toml::Value::String(s) => Ok(Some(s.clone())),
            toml::Value::Integer(i) => Ok(Some(i.to_string())),
            toml::Value::Boolean(b) => Ok(Some(b.to_string())),
            other => Err(Failure::input(format!(
                "config key `{key}`: unsupported value {other}"
            ))),
        }
    }

    /// The flag value if given, else the config value parsed with `parse`.
    pub fn pick_with<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, Failure> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key)? {
            Some(s) => parse(&s)
                .map(Some)
                .map_err(|e| Failure::input(format!("config key `{key}`: {e}"))),
            None => Ok(None),
        }
    }

    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.pick_with(flag, key, |s| s.parse::<T>().map_err(|e| e.to_string()))
    }

    /// Boolean switches: set by the flag or by `key = true`.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, Failure> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

pub fn parse_enum<T: clap::ValueEnum>(s: &str) -> Result<T, String> {
    T::from_str(s, false)
}
