use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::WeilError;

/// Textual presentation of a Weil algebra: variables, relations, and the
/// nilpotency witness `k` (so the ideal is `<relations> + m^k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilPresentation {
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub nilpotency: u32,
}

impl WeilPresentation {
    pub fn new<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        relations: impl IntoIterator<Item = S>,
        nilpotency: u32,
    ) -> Self {
        WeilPresentation {
            variables: variables.into_iter().map(Into::into).collect(),
            relations: relations.into_iter().map(Into::into).collect(),
            nilpotency,
        }
    }

    /// Named presets: `real`, `dual`, `d2`, and `jetK` (`R[t]/(t^(K+1))`).
    pub fn preset(name: &str) -> Result<WeilPresentation, WeilError> {
        let p = match name {
            "real" | "R" => WeilPresentation::new(Vec::<String>::new(), vec![], 1),
            "dual" => WeilPresentation::new(["x"], ["x^2"], 2),
            "d2" => WeilPresentation::new(["x", "y"], ["x^2", "y^2", "x*y"], 2),
            _ => {
                let order: u32 = name
                    .strip_prefix("jet")
                    .and_then(|s| s.parse().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| WeilError::UnknownPreset(name.to_string()))?;
                WeilPresentation::new(
                    vec!["t".to_string()],
                    vec![format!("t^{}", order + 1)],
                    order + 1,
                )
            }
        };
        Ok(p)
    }

    /// Parse TOML (`.toml`) or JSON (anything else).
    pub fn from_str_with_ext(text: &str, ext: Option<&str>) -> Result<WeilPresentation, WeilError> {
        match ext {
            Some("toml") => toml::from_str(text).map_err(|e| WeilError::Presentation(e.to_string())),
            _ => serde_json::from_str(text).map_err(|e| WeilError::Presentation(e.to_string())),
        }
    }

    pub fn load(path: &Path) -> Result<WeilPresentation, WeilError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WeilError::Presentation(format!("{}: {e}", path.display())))?;
        Self::from_str_with_ext(&text, path.extension().and_then(|e| e.to_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let t = "variables = [\"x\"]\nrelations = [\"x^2\"]\nnilpotency = 2\n";
        let a = WeilPresentation::from_str_with_ext(t, Some("toml")).unwrap();
        let j = r#"{"variables":["x"],"relations":["x^2"],"nilpotency":2}"#;
        let b = WeilPresentation::from_str_with_ext(j, Some("json")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, WeilPresentation::preset("dual").unwrap());
        assert!(WeilPresentation::from_str_with_ext("{", None).is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(WeilPresentation::preset("jet3").unwrap().nilpotency, 4);
        assert!(WeilPresentation::preset("jet0").is_err());
        assert!(WeilPresentation::preset("bogus").is_err());
    }
}
