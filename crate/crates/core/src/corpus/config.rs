use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Languages with bundled abbreviation lists. Anything else must be tagged `other`.
pub const CORPUS_LANGUAGES: [&str; 7] = ["en", "de", "fr", "it", "es", "pl", "ru"];

const BUILTIN_ABBREVIATIONS: [(&str, &str); 7] = [
    ("en", include_str!("../../lang/en.abbrev")),
    ("de", include_str!("../../lang/de.abbrev")),
    ("fr", include_str!("../../lang/fr.abbrev")),
    ("it", include_str!("../../lang/it.abbrev")),
    ("es", include_str!("../../lang/es.abbrev")),
    ("pl", include_str!("../../lang/pl.abbrev")),
    ("ru", include_str!("../../lang/ru.abbrev")),
];

/// Which non-structural marks `preprocess` removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
pub struct StripRules {
    /// Dashes opening a line of dialogue or following an opening quote.
    pub quotation_dashes: bool,
    /// Spanish `¿` and `¡`.
    pub inverted_marks: bool,
    /// Hyphens joining two word characters (`well-known`) stay inside the word.
    /// When false they are split out as dash marks.
    pub intraword_hyphens: bool,
}

impl StripRules {
    fn for_language(code: &str) -> Self {
        StripRules {
            quotation_dashes: matches!(code, "es" | "fr" | "it" | "pl" | "ru"),
            inverted_marks: code == "es",
            intraword_hyphens: true,
        }
    }
}

/// Per-language preprocessing configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct LangConfig {
    language_code: String,
    abbreviations: BTreeSet<String>,
    strip: StripRules,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LangConfigFile {
    language_code: String,
    abbreviations: Option<String>,
    strip_quotation_dashes: Option<bool>,
    strip_inverted_marks: Option<bool>,
    strip_intraword_hyphens: Option<bool>,
}

impl LangConfig {
    pub fn new<I, S>(language_code: &str, abbreviations: I, strip: StripRules) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        validate_code(language_code)?;
        let mut set = BTreeSet::new();
        for a in abbreviations {
            let a: String = a.into();
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                return Err(Error::LangConfig(format!(
                    "abbreviation {a:?} is empty or contains whitespace"
                )));
            }
            set.insert(a);
        }
        Ok(LangConfig {
            language_code: language_code.to_string(),
            abbreviations: set,
            strip,
        })
    }

    /// Bundled defaults for one of the corpus languages (or `other`, which has no abbreviations).
    pub fn builtin(language_code: &str) -> Result<Self> {
        validate_code(language_code)?;
        let list = BUILTIN_ABBREVIATIONS
            .iter()
            .find(|(code, _)| *code == language_code)
            .map(|(_, text)| parse_abbreviations(text))
            .unwrap_or_default();
        Self::new(language_code, list, StripRules::for_language(language_code))
    }

    /// Parses a key/value flag file. Missing flags fall back to the builtin
    /// defaults for the language; `abbreviations`, when given, names a
    /// one-token-per-line file resolved by `read_list`.
    pub fn from_toml_str(
        text: &str,
        read_list: impl FnOnce(&str) -> Result<String>,
    ) -> Result<Self> {
        let file: LangConfigFile =
            toml::from_str(text).map_err(|e| Error::LangConfig(e.to_string()))?;
        let base = Self::builtin(&file.language_code)?;
        let abbreviations = match &file.abbreviations {
            Some(name) => parse_abbreviations(&read_list(name)?),
            None => base.abbreviations.iter().cloned().collect(),
        };
        let strip = StripRules {
            quotation_dashes: file
                .strip_quotation_dashes
                .unwrap_or(base.strip.quotation_dashes),
            inverted_marks: file.strip_inverted_marks.unwrap_or(base.strip.inverted_marks),
            intraword_hyphens: file
                .strip_intraword_hyphens
                .unwrap_or(base.strip.intraword_hyphens),
        };
        Self::new(&file.language_code, abbreviations, strip)
    }

    /// Loads a flag file from disk; the abbreviation file path is relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::LangConfig(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, |name| {
            let p = dir.join(name);
            fs::read_to_string(&p).map_err(|e| Error::LangConfig(format!("{}: {e}", p.display())))
        })
    }

    pub fn language_code(&self) -> &str {
        &self.language_code
    }

    pub fn abbreviations(&self) -> &BTreeSet<String> {
        &self.abbreviations
    }

    pub fn strip(&self) -> StripRules {
        self.strip
    }

    pub fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(token)
    }
}

fn validate_code(code: &str) -> Result<()> {
    if code == "other" || CORPUS_LANGUAGES.contains(&code) {
        Ok(())
    } else {
        Err(Error::LangConfig(format!(
            "language code {code:?} is not one of {CORPUS_LANGUAGES:?} or \"other\""
        )))
    }
}

/// One token per line; blank lines and `#` comments are skipped.
pub fn parse_abbreviations(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.trim_end_matches('.').to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lists_are_valid() {
        for code in CORPUS_LANGUAGES {
            let cfg = LangConfig::builtin(code).unwrap();
            assert!(!cfg.abbreviations().is_empty(), "{code}");
        }
        assert!(LangConfig::builtin("other").unwrap().abbreviations().is_empty());
    }

    #[test]
    fn unknown_language_rejected() {
        assert!(matches!(LangConfig::builtin("xx"), Err(Error::LangConfig(_))));
    }

    #[test]
    fn whitespace_abbreviation_rejected() {
        let r = LangConfig::new("en", ["Mr", "a b"], StripRules::for_language("en"));
        assert!(r.is_err());
        let r = LangConfig::new("en", [""], StripRules::for_language("en"));
        assert!(r.is_err());
    }

    #[test]
    fn flag_file_overrides_defaults() {
        let text = r#"
language_code = "es"
abbreviations = "es.txt"
strip_inverted_marks = false
"#;
        let cfg = LangConfig::from_toml_str(text, |name| {
            assert_eq!(name, "es.txt");
            Ok("Sr.\n# comment\n\nDña\n".to_string())
        })
        .unwrap();
        assert!(cfg.is_abbreviation("Sr"));
        assert!(cfg.is_abbreviation("Dña"));
        assert_eq!(cfg.abbreviations().len(), 2);
        assert!(!cfg.strip().inverted_marks);
        assert!(cfg.strip().quotation_dashes);
    }

    #[test]
    fn flag_file_unknown_key_rejected() {
        let r = LangConfig::from_toml_str("language_code = \"en\"\nbogus = 1\n", |_| {
            Ok(String::new())
        });
        assert!(r.is_err());
    }
}
