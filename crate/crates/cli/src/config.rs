//! Tolerances from a TOML file, overridden by `--set key=value` flags.

use std::path::Path;

use trigcurve::Tolerances;

use crate::input::ParseError;

pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Tolerances, ParseError> {
    let mut table = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
            text.parse::<toml::Table>().map_err(|e| ParseError(format!("{}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };
    for item in overrides {
        let parsed = item
            .parse::<toml::Table>()
            .map_err(|e| ParseError(format!("--set {item:?}: expected key=value ({})", e.message())))?;
        table.extend(parsed);
    }
    let known = toml::Table::try_from(Tolerances::default()).expect("tolerances serialize to a table");
    if let Some(key) = table.keys().find(|k| !known.contains_key(*k)) {
        return Err(ParseError(format!("unknown tolerance {key:?}")));
    }
    table.try_into().map_err(|e: toml::de::Error| ParseError(format!("config: {}", e.message())))
}
