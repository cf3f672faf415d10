//! Charge codes and the charge lists that drive exclusions and bump-ups.

mod catalog;
mod code;

pub use catalog::{
    is_bumpup_charge, is_exclusion_charge, is_violent, AmbiguousEntry, CatalogEntry,
    CatalogPolicy, Category, ChargeCatalog, ChargePattern,
};
pub use code::{
    normalize, ChargeClass, ChargeCode, CodeBody, Derivative, DerivativeAliases, SectionKey,
    ATTEMPT_PREFIX,
};

/// Parses a charge string using only the built-in derivative convention.
pub fn parse_charge_code(text: &str) -> Result<ChargeCode, crate::error::ParseError> {
    ChargeCode::parse(text)
}

/// Splits a `;`-separated charge list, skipping blank items.
pub fn split_charge_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty())
}
