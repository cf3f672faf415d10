//! Violent, exclusion and bump-up charge lists.

use std::path::Path;

use serde::Deserialize;

use super::code::{ChargeClass, ChargeCode, CodeBody, Derivative, DerivativeAliases};
use crate::error::{ConfigError, Error, ParseError};

const SHIPPED_CATALOG: &str = include_str!("../../../../data/catalog.toml");

/// A catalog entry's code pattern.
///
/// Unstated parts act as wildcards: a pattern without a class matches every
/// class, a pattern without a derivative prefix matches the base offense and
/// (subject to catalog policy) its derivative forms, and the pattern's
/// subdivisions need only be a prefix of the charge's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargePattern {
    pub statute: String,
    pub subdivisions: Vec<String>,
    pub code_body: Option<CodeBody>,
    pub charge_class: Option<ChargeClass>,
    pub derivative: Option<Derivative>,
    pub source: String,
}

impl ChargePattern {
    pub fn parse(text: &str, aliases: &DerivativeAliases) -> Result<ChargePattern, ParseError> {
        let code = ChargeCode::parse_with(text, aliases)?;
        Ok(ChargePattern {
            statute: code.statute,
            subdivisions: code.subdivisions,
            code_body: code.code_body,
            charge_class: match code.charge_class {
                ChargeClass::Unspecified => None,
                c => Some(c),
            },
            derivative: code.derivative.is_derivative().then_some(code.derivative),
            source: code.raw,
        })
    }

    /// Structural match ignoring the derivative form.
    fn matches_offense(&self, charge: &ChargeCode) -> bool {
        self.statute == charge.statute
            && charge.subdivisions.starts_with(&self.subdivisions)
            && match (&self.code_body, &charge.code_body) {
                (Some(p), Some(c)) => p == c,
                _ => true,
            }
            && self.charge_class.is_none_or(|c| c == charge.charge_class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub pattern: ChargePattern,
    /// Offense name the pattern instantiates, e.g. "Murder".
    pub offense: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguousEntry {
    pub entry: CatalogEntry,
    /// Whether a match counts as a bump-up charge.
    pub counts_as_bumpup: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogPolicy {
    /// Attempts, conspiracies etc. of a violent offense are themselves violent.
    pub derivatives_inherit_violence: bool,
}

impl Default for CatalogPolicy {
    fn default() -> Self {
        CatalogPolicy {
            derivatives_inherit_violence: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Violent,
    Exclusion,
    Bumpup,
}

/// The charge lists consulted by the assessment, loaded once and then only
/// read.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChargeCatalog {
    pub violent: Vec<CatalogEntry>,
    pub exclusion: Vec<CatalogEntry>,
    pub bumpup: Vec<CatalogEntry>,
    pub weapon_use_ambiguous: Vec<AmbiguousEntry>,
    pub aliases: DerivativeAliases,
    pub policy: CatalogPolicy,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    policy: PolicyFile,
    #[serde(default)]
    derivative_alias: Vec<AliasFile>,
    #[serde(default)]
    entry: Vec<EntryFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    #[serde(default = "yes")]
    derivatives_inherit_violence: bool,
}

impl Default for PolicyFile {
    fn default() -> Self {
        PolicyFile {
            derivatives_inherit_violence: true,
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AliasFile {
    prefix: String,
    form: Derivative,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    pattern: String,
    category: String,
    #[serde(default)]
    offense: String,
    #[serde(default)]
    weapon_use_ambiguous: bool,
    #[serde(default)]
    counts_as_bumpup: bool,
    #[serde(default)]
    #[allow(dead_code)]
    note: String,
}

impl ChargeCatalog {
    /// The catalog bundled with the crate (`data/catalog.toml`).
    pub fn shipped() -> ChargeCatalog {
        Self::from_toml_str(SHIPPED_CATALOG, "data/catalog.toml")
            .expect("bundled catalog is valid")
    }

    pub fn load(path: &Path) -> Result<ChargeCatalog, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_toml_str(&text, &path.display().to_string())?)
    }

    pub fn from_toml_str(text: &str, name: &str) -> Result<ChargeCatalog, ConfigError> {
        let file: CatalogFile =
            toml::from_str(text).map_err(|e| ConfigError::invalid(name, e.to_string()))?;

        let mut aliases = DerivativeAliases::new();
        for alias in &file.derivative_alias {
            if alias.form == Derivative::None {
                return Err(ConfigError::invalid(
                    name,
                    format!("alias {:?} maps to no derivative form", alias.prefix),
                ));
            }
            aliases.insert(&alias.prefix, alias.form);
        }

        let mut catalog = ChargeCatalog {
            aliases,
            policy: CatalogPolicy {
                derivatives_inherit_violence: file.policy.derivatives_inherit_violence,
            },
            ..Default::default()
        };

        for (i, e) in file.entry.iter().enumerate() {
            let pattern = ChargePattern::parse(&e.pattern, &catalog.aliases).map_err(|err| {
                ConfigError::invalid(name, format!("entry {}: {err}", i + 1))
            })?;
            let category = match e.category.as_str() {
                "violent" => Category::Violent,
                "exclusion" => Category::Exclusion,
                "bumpup" => Category::Bumpup,
                other => {
                    return Err(ConfigError::invalid(
                        name,
                        format!("entry {}: unknown category {other:?}", i + 1),
                    ))
                }
            };
            if category != Category::Violent && pattern.derivative.is_some() {
                return Err(ConfigError::invalid(
                    name,
                    format!(
                        "entry {}: {} patterns cover derivative forms implicitly and may not carry a prefix",
                        i + 1,
                        e.category
                    ),
                ));
            }
            if e.weapon_use_ambiguous && category != Category::Bumpup {
                return Err(ConfigError::invalid(
                    name,
                    format!("entry {}: weapon_use_ambiguous applies only to bumpup", i + 1),
                ));
            }
            let entry = CatalogEntry {
                pattern,
                offense: e.offense.clone(),
            };
            match category {
                Category::Violent => catalog.violent.push(entry),
                Category::Exclusion => catalog.exclusion.push(entry),
                Category::Bumpup if e.weapon_use_ambiguous => {
                    catalog.weapon_use_ambiguous.push(AmbiguousEntry {
                        entry,
                        counts_as_bumpup: e.counts_as_bumpup,
                    })
                }
                Category::Bumpup => catalog.bumpup.push(entry),
            }
        }
        Ok(catalog)
    }

    /// Parses a charge string with this catalog's derivative aliases.
    pub fn parse(&self, text: &str) -> Result<ChargeCode, ParseError> {
        ChargeCode::parse_with(text, &self.aliases)
    }

    /// Flips the bump-up reading of every ambiguous entry whose pattern text
    /// normalizes to `pattern`. Returns how many entries changed.
    pub fn set_ambiguous_policy(&mut self, pattern: &str, counts_as_bumpup: bool) -> usize {
        let key = super::code::normalize(pattern);
        let mut n = 0;
        for a in &mut self.weapon_use_ambiguous {
            if super::code::normalize(&a.entry.pattern.source) == key {
                a.counts_as_bumpup = counts_as_bumpup;
                n += 1;
            }
        }
        n
    }

    pub fn violent_match(&self, charge: &ChargeCode) -> Option<&CatalogEntry> {
        self.violent.iter().find(|e| {
            let p = &e.pattern;
            if !p.matches_offense(charge) {
                return false;
            }
            match p.derivative {
                Some(d) => d == charge.derivative,
                None => {
                    !charge.derivative.is_derivative() || self.policy.derivatives_inherit_violence
                }
            }
        })
    }

    pub fn exclusion_match(&self, charge: &ChargeCode) -> Option<&CatalogEntry> {
        self.exclusion.iter().find(|e| e.pattern.matches_offense(charge))
    }

    pub fn bumpup_match(&self, charge: &ChargeCode) -> Option<&CatalogEntry> {
        self.bumpup
            .iter()
            .find(|e| e.pattern.matches_offense(charge))
            .or_else(|| {
                self.weapon_use_ambiguous
                    .iter()
                    .find(|a| a.counts_as_bumpup && a.entry.pattern.matches_offense(charge))
                    .map(|a| &a.entry)
            })
    }
}

/// True iff the charge is on the violent list.
pub fn is_violent(charge: &ChargeCode, catalog: &ChargeCatalog) -> bool {
    catalog.violent_match(charge).is_some()
}

/// True iff the charge, or the base offense of a derivative charge, is on the
/// exclusion list.
pub fn is_exclusion_charge(charge: &ChargeCode, catalog: &ChargeCatalog) -> bool {
    catalog.exclusion_match(charge).is_some()
}

/// True iff the charge, or the base offense of a derivative charge, is on the
/// bump-up list. Ambiguous weapon-use entries count only when their policy
/// says so.
pub fn is_bumpup_charge(charge: &ChargeCode, catalog: &ChargeCatalog) -> bool {
    catalog.bumpup_match(charge).is_some()
}
