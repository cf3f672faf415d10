//! The FTA × NCA decision matrix.

use std::path::Path;

use serde::Deserialize;

use super::level::SupervisionLevel;
use crate::error::{ConfigError, Error};

const DEFAULT_DMF: &str = include_str!("../../../../data/dmf.toml");

/// What a matrix cell yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Level(SupervisionLevel),
    /// Release Not Recommended with a felony or violent misdemeanor charge,
    /// SFPDP-ACM otherwise.
    Split,
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmfConfig {
    /// `cells[fta - 1][nca - 1]`
    cells: [[Cell; 6]; 6],
    split: (u8, u8),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DmfFile {
    matrix: Vec<Vec<u8>>,
    split: SplitFile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitFile {
    fta: u8,
    nca: u8,
}

impl DmfConfig {
    /// The shipped matrix (`data/dmf.toml`).
    pub fn shipped() -> DmfConfig {
        Self::from_toml_str(DEFAULT_DMF, "data/dmf.toml").expect("bundled matrix is valid")
    }

    pub fn load(path: &Path) -> Result<DmfConfig, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_toml_str(&text, &path.display().to_string())?)
    }

    pub fn from_toml_str(text: &str, name: &str) -> Result<DmfConfig, ConfigError> {
        let file: DmfFile =
            toml::from_str(text).map_err(|e| ConfigError::invalid(name, e.to_string()))?;
        if file.matrix.len() != 6 || file.matrix.iter().any(|r| r.len() != 6) {
            return Err(ConfigError::invalid(name, "matrix must be 6 rows of 6 values"));
        }
        let (sf, sn) = (file.split.fta, file.split.nca);
        if !(1..=6).contains(&sf) || !(1..=6).contains(&sn) {
            return Err(ConfigError::invalid(name, "split cell is outside the matrix"));
        }
        let mut cells = [[Cell::Missing; 6]; 6];
        for (i, row) in file.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                cells[i][j] = if (i + 1, j + 1) == (sf as usize, sn as usize) {
                    Cell::Split
                } else {
                    match v {
                        0 => Cell::Missing,
                        r => Cell::Level(SupervisionLevel::from_rank(r).ok_or_else(|| {
                            ConfigError::invalid(
                                name,
                                format!("cell ({}, {}) has rank {r}, expected 0..=4", i + 1, j + 1),
                            )
                        })?),
                    }
                };
            }
        }
        Ok(DmfConfig {
            cells,
            split: (sf, sn),
        })
    }

    /// Builds a matrix directly; `split` overrides whatever `cells` holds there.
    pub fn from_cells(mut cells: [[Cell; 6]; 6], split: (u8, u8)) -> DmfConfig {
        cells[split.0 as usize - 1][split.1 as usize - 1] = Cell::Split;
        DmfConfig { cells, split }
    }

    pub fn cell(&self, fta: u8, nca: u8) -> Result<Cell, ConfigError> {
        let out = || ConfigError::MissingCell { fta, nca };
        if !(1..=6).contains(&fta) || !(1..=6).contains(&nca) {
            return Err(out());
        }
        match self.cells[fta as usize - 1][nca as usize - 1] {
            Cell::Missing => Err(out()),
            c => Ok(c),
        }
    }

    pub fn split_cell(&self) -> (u8, u8) {
        self.split
    }

    pub fn is_split(&self, fta: u8, nca: u8) -> bool {
        (fta, nca) == self.split
    }

    /// Whether every cell is populated and levels never decrease along either
    /// axis. The split cell counts as the interval SFPDP-ACM..=Release Not
    /// Recommended.
    pub fn is_monotone(&self) -> bool {
        let bounds = |c: Cell| match c {
            Cell::Level(l) => Some((l.rank(), l.rank())),
            Cell::Split => Some((3, 4)),
            Cell::Missing => None,
        };
        for i in 0..6 {
            for j in 0..6 {
                let Some((_, hi)) = bounds(self.cells[i][j]) else {
                    return false;
                };
                for (a, b) in [(i + 1, j), (i, j + 1)] {
                    if a == 6 || b == 6 {
                        continue;
                    }
                    match bounds(self.cells[a][b]) {
                        Some((lo, _)) if lo >= hi => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_anchor_cells() {
        let d = DmfConfig::shipped();
        assert_eq!(d.cell(2, 3), Ok(Cell::Level(SupervisionLevel::OrNas)));
        assert_eq!(d.cell(5, 4), Ok(Cell::Split));
        assert_eq!(d.split_cell(), (5, 4));
    }

    #[test]
    fn shipped_is_complete_and_monotone() {
        let d = DmfConfig::shipped();
        for f in 1..=6 {
            for n in 1..=6 {
                assert!(d.cell(f, n).is_ok());
            }
        }
        assert!(d.is_monotone());
    }

    #[test]
    fn monotone_check_catches_decrease() {
        let mut cells = [[Cell::Level(SupervisionLevel::OrNas); 6]; 6];
        cells[0][0] = Cell::Level(SupervisionLevel::OrMinimum);
        assert!(!DmfConfig::from_cells(cells, (5, 4)).is_monotone());
    }

    #[test]
    fn zero_means_missing() {
        let text = DEFAULT_DMF.replacen("[1, 1, 1, 2, 3, 3]", "[0, 1, 1, 2, 3, 3]", 1);
        let d = DmfConfig::from_toml_str(&text, "t").unwrap();
        assert_eq!(d.cell(1, 1), Err(ConfigError::MissingCell { fta: 1, nca: 1 }));
        assert!(!d.is_monotone());
    }

    #[test]
    fn shape_and_rank_validation() {
        assert!(DmfConfig::from_toml_str("matrix = [[1]]\n[split]\nfta = 5\nnca = 4\n", "t").is_err());
        let bad_rank = DEFAULT_DMF.replacen("[1, 1, 1, 2, 3, 3]", "[9, 1, 1, 2, 3, 3]", 1);
        assert!(DmfConfig::from_toml_str(&bad_rank, "t").is_err());
        let bad_split = DEFAULT_DMF.replace("fta = 5", "fta = 7");
        assert!(DmfConfig::from_toml_str(&bad_split, "t").is_err());
    }
}
