use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Mask, SearchState};
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: &str = "ap-extremal-search/1";

/// On-disk form. Integers are decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointDoc {
    version: String,
    spec: String,
    cursor: String,
    total_units: String,
    incumbent: Option<String>,
    witnesses: Vec<String>,
    examined: String,
}

pub fn checkpoint_save(state: &SearchState, path: &Path) -> Result<()> {
    let doc = CheckpointDoc {
        version: state.version.clone(),
        spec: state.spec_echo.clone(),
        cursor: state.cursor.to_string(),
        total_units: state.total_units.to_string(),
        incumbent: state.best.map(|b| b.to_string()),
        witnesses: state.witnesses.iter().map(|m| m.to_string()).collect(),
        examined: state.examined.to_string(),
    };
    let text = serde_json::to_string_pretty(&doc).expect("checkpoint serializes");
    // Write-then-rename so an interrupted save never leaves a torn file.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text + "\n")?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_resume(path: &Path) -> Result<SearchState> {
    let corrupt = |reason: String| Error::CheckpointCorrupt {
        path: path.to_path_buf(),
        reason,
    };
    let text = fs::read_to_string(path)?;
    let raw: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    // Check the version before the schema so old files get the right error.
    match raw.get("version").and_then(|v| v.as_str()) {
        Some(v) if v == CHECKPOINT_VERSION => {}
        Some(v) => {
            return Err(Error::CheckpointVersion {
                path: path.to_path_buf(),
                found: v.to_string(),
                expected: CHECKPOINT_VERSION.to_string(),
            })
        }
        None => return Err(corrupt("missing version tag".into())),
    }
    let doc: CheckpointDoc = serde_json::from_value(raw).map_err(|e| corrupt(e.to_string()))?;
    let int = |field: &str, s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| corrupt(format!("{field} is not a decimal integer: `{s}`")))
    };
    let witnesses = doc
        .witnesses
        .iter()
        .map(|w| {
            w.parse::<Mask>()
                .map_err(|_| corrupt(format!("bad witness mask `{w}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let state = SearchState {
        version: doc.version,
        spec_echo: doc.spec,
        cursor: int("cursor", &doc.cursor)?,
        total_units: int("total_units", &doc.total_units)?,
        best: doc.incumbent.as_deref().map(|s| int("incumbent", s)).transpose()?,
        witnesses,
        examined: int("examined", &doc.examined)?,
    };
    if state.cursor > state.total_units {
        return Err(corrupt("cursor beyond the last unit".into()));
    }
    Ok(state)
}
