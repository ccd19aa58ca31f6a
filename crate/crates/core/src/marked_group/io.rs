//! JSON group files:
//! `{ "rank": 2, "generators": [[[a, b], [c, d]], ...], "peripherals": [[1, 2, -1, -2]], "label": "..." }`.
//!
//! Words are 1-based signed generator indices. Matrices may have any
//! positive determinant and either sign; loading renormalizes them and then
//! normalizes the group.

use serde::{Deserialize, Serialize};

use super::{MarkedGroup, Word};
use crate::moebius::MoebiusMap;
use crate::tol::Tolerances;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub rank: usize,
    pub generators: Vec<[[f64; 2]; 2]>,
    pub peripherals: Vec<Vec<i32>>,
    #[serde(default)]
    pub label: String,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Parse(format!("field `{path}`: {}", e.into_inner()))
        })
    }

    /// Validates, renormalizes every matrix, and normalizes the group.
    pub fn into_group(self, tol: &Tolerances) -> Result<MarkedGroup, Error> {
        if self.generators.len() != self.rank {
            return Err(Error::Parse(format!(
                "field `generators`: expected {} matrices for rank {}, found {}",
                self.rank,
                self.rank,
                self.generators.len()
            )));
        }
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| {
                MoebiusMap::from_rows(*m)
                    .map_err(|e| Error::Parse(format!("field `generators[{i}]`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let peripherals = self
            .peripherals
            .iter()
            .enumerate()
            .map(|(i, letters)| {
                if let Some(bad) = letters
                    .iter()
                    .position(|&x| x == 0 || x.unsigned_abs() as usize > self.rank)
                {
                    return Err(Error::Parse(format!(
                        "field `peripherals[{i}][{bad}]`: letter {} out of range for rank {}",
                        letters[bad], self.rank
                    )));
                }
                Word::new(letters.iter().copied())
            })
            .collect::<Result<Vec<_>, _>>()?;
        MarkedGroup::new(self.label, generators, peripherals, tol)
            .and_then(|g| g.normalize(tol))
            .map_err(|e| match e {
                Error::NotParabolic => {
                    Error::Parse("field `peripherals`: a peripheral word is not parabolic".into())
                }
                other => other,
            })
    }
}

impl MarkedGroup {
    pub fn from_json(text: &str, tol: &Tolerances) -> Result<MarkedGroup, Error> {
        GroupFile::parse(text)?.into_group(tol)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            rank: self.rank(),
            generators: self.generators().iter().map(MoebiusMap::rows).collect(),
            peripherals: self
                .peripherals()
                .iter()
                .map(|w| w.letters().to_vec())
                .collect(),
            label: self.label().to_string(),
        }
    }
}
