//! Statute-string parsing.
//!
//! Charge strings in booking and court records follow a loose
//! `<derivative>/<statute><subdivisions> <body> <class> <degree>` shape, for
//! example `187(A) PC F 1` or `664/288 (A) PC F`. Spacing and case vary
//! between sources, so parsing works on a normalized copy and keeps the
//! ingested text in [`ChargeCode::raw`].

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Penal code prefix for an attempted offense.
pub const ATTEMPT_PREFIX: &str = "664";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeBody {
    /// Penal Code
    PC,
    /// Vehicle Code
    VC,
    /// Health & Safety Code
    HS,
    Other(String),
}

impl CodeBody {
    fn from_token(token: &str) -> CodeBody {
        match token {
            "PC" => CodeBody::PC,
            "VC" => CodeBody::VC,
            "HS" | "H&S" | "HSC" => CodeBody::HS,
            other => CodeBody::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChargeClass {
    Felony,
    Misdemeanor,
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivative {
    None,
    Attempt,
    Conspiracy,
    Solicitation,
    FailureToAppearOf,
}

impl Derivative {
    pub fn is_derivative(self) -> bool {
        self != Derivative::None
    }
}

/// Slash-prefix conventions beyond the built-in `664/` attempt prefix.
///
/// Conspiracy, solicitation and FTA-of forms have no single agreed textual
/// encoding, so jurisdictions declare theirs in the catalog file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivativeAliases {
    prefixes: Vec<(String, Derivative)>,
}

impl DerivativeAliases {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `prefix` (the text before the slash). The prefix is
    /// normalized the same way charge strings are.
    pub fn insert(&mut self, prefix: &str, form: Derivative) {
        let key = normalize(prefix).replace(' ', "");
        self.prefixes.retain(|(p, _)| *p != key);
        self.prefixes.push((key, form));
    }

    fn lookup(&self, prefix: &str) -> Option<Derivative> {
        if prefix == ATTEMPT_PREFIX {
            return Some(Derivative::Attempt);
        }
        self.prefixes
            .iter()
            .find(|(p, _)| p == prefix)
            .map(|(_, d)| *d)
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }
}

/// A parsed statute reference.
///
/// Equality and hashing cover the parsed components plus the normalized form
/// of `raw`, so two spellings that differ only in case or spacing compare
/// equal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChargeCode {
    /// Section number including any letter suffix, e.g. `187`, `273.5`, `653F`.
    pub statute: String,
    pub subdivisions: Vec<String>,
    pub code_body: Option<CodeBody>,
    pub charge_class: ChargeClass,
    pub degree: Option<u8>,
    pub derivative: Derivative,
    /// Text as ingested.
    pub raw: String,
}

impl ChargeCode {
    /// Parses with only the built-in `664/` derivative convention.
    pub fn parse(text: &str) -> Result<ChargeCode, ParseError> {
        Self::parse_with(text, &DerivativeAliases::default())
    }

    pub fn parse_with(text: &str, aliases: &DerivativeAliases) -> Result<ChargeCode, ParseError> {
        let norm = normalize(text);
        if norm.is_empty() {
            return Err(ParseError::Empty);
        }

        let (derivative, body) = split_derivative(&norm, aliases)?;
        let mut cur = Cursor::new(body);

        let number = cur.take_while(|c| c.is_ascii_digit() || c == '.');
        if number.is_empty() || !number.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(ParseError::NoStatute(text.to_string()));
        }
        let mut statute = number.trim_end_matches('.').to_string();
        let mut code_body = None;

        // Letters glued to the number: "653F(B)" carries a section suffix,
        // "203PC" a code body.
        let glued = cur.take_while(|c| c.is_ascii_alphabetic() || c == '&');
        if glued.len() == 1 {
            statute.push_str(glued);
        } else if !glued.is_empty() {
            code_body = Some(CodeBody::from_token(glued));
        }

        // A lone letter directly followed by a parenthesis after a space:
        // "273 A(B)" is section 273a, subdivision (b).
        if glued.is_empty() {
            let save = cur.pos;
            cur.skip_spaces();
            let rest = cur.rest().as_bytes();
            if rest.len() >= 2 && rest[0].is_ascii_alphabetic() && rest[1] == b'(' {
                statute.push(rest[0] as char);
                cur.pos += 1;
            } else {
                cur.pos = save;
            }
        }

        let mut subdivisions = Vec::new();
        loop {
            let save = cur.pos;
            cur.skip_spaces();
            if cur.peek() != Some('(') {
                cur.pos = save;
                break;
            }
            cur.pos += 1;
            let inner = cur.take_while(|c| c != ')' && c != '(');
            if cur.peek() != Some(')') {
                return Err(ParseError::Unbalanced(text.to_string()));
            }
            cur.pos += 1;
            let inner = inner.trim();
            if !inner.is_empty() {
                subdivisions.push(inner.replace(' ', ""));
            }
        }

        let mut charge_class = ChargeClass::Unspecified;
        let mut class_seen = false;
        let mut degree = None;
        for token in cur.rest().split_whitespace() {
            match token {
                "F" | "M" if !class_seen => {
                    class_seen = true;
                    charge_class = if token == "F" {
                        ChargeClass::Felony
                    } else {
                        ChargeClass::Misdemeanor
                    };
                }
                t if class_seen && degree.is_none() && is_degree(t) => {
                    degree = t.parse().ok();
                }
                t if code_body.is_none()
                    && !class_seen
                    && t.len() >= 2
                    && t.chars().all(|c| c.is_ascii_alphabetic() || c == '&') =>
                {
                    code_body = Some(CodeBody::from_token(t));
                }
                // Anything else stays only in `raw`.
                _ => {}
            }
        }

        Ok(ChargeCode {
            statute,
            subdivisions,
            code_body,
            charge_class,
            degree,
            derivative,
            raw: text.to_string(),
        })
    }

    /// Uppercased, trimmed, whitespace-collapsed copy of [`raw`](Self::raw).
    pub fn normalized(&self) -> String {
        normalize(&self.raw)
    }

    /// Identity used when comparing charges across data sources: derivative
    /// form, section and subdivisions. Class, degree and code body are
    /// formatted inconsistently between sources and are ignored.
    pub fn section_key(&self) -> SectionKey {
        SectionKey {
            derivative: self.derivative,
            statute: self.statute.clone(),
            subdivisions: self.subdivisions.clone(),
        }
    }

    /// The same offense with the derivative form stripped.
    pub fn base_offense(&self) -> ChargeCode {
        let mut base = self.clone();
        base.derivative = Derivative::None;
        base
    }

    pub fn is_felony(&self) -> bool {
        self.charge_class == ChargeClass::Felony
    }
}

impl PartialEq for ChargeCode {
    fn eq(&self, other: &Self) -> bool {
        self.statute == other.statute
            && self.subdivisions == other.subdivisions
            && self.code_body == other.code_body
            && self.charge_class == other.charge_class
            && self.degree == other.degree
            && self.derivative == other.derivative
            && self.normalized() == other.normalized()
    }
}

impl Eq for ChargeCode {}

impl Hash for ChargeCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.statute.hash(state);
        self.subdivisions.hash(state);
        self.code_body.hash(state);
        self.charge_class.hash(state);
        self.degree.hash(state);
        self.derivative.hash(state);
        self.normalized().hash(state);
    }
}

impl fmt::Display for ChargeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.normalized())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionKey {
    pub derivative: Derivative,
    pub statute: String,
    pub subdivisions: Vec<String>,
}

/// Uppercases, trims and collapses whitespace runs to one space.
pub fn normalize(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

fn is_degree(token: &str) -> bool {
    token.len() <= 2
        && token.chars().all(|c| c.is_ascii_digit())
        && token.parse::<u8>().is_ok_and(|d| d >= 1)
}

fn split_derivative<'a>(
    norm: &'a str,
    aliases: &DerivativeAliases,
) -> Result<(Derivative, &'a str), ParseError> {
    let Some(slash) = norm.find('/') else {
        return Ok((Derivative::None, norm));
    };
    let prefix = norm[..slash].replace(' ', "");
    let looks_like_section = prefix.starts_with(|c: char| c.is_ascii_digit())
        && prefix
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '(' || c == ')');
    if !looks_like_section {
        return Ok((Derivative::None, norm));
    }
    match aliases.lookup(&prefix) {
        Some(form) => Ok((form, norm[slash + 1..].trim_start())),
        None => Err(ParseError::UnknownDerivative {
            prefix,
            raw: norm.to_string(),
        }),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn skip_spaces(&mut self) {
        self.take_while(|c| c == ' ');
    }
}
