//! Serializable report types emitted by the CLI and frozen as regression
//! fixtures.

use serde::{Deserialize, Serialize};

use crate::suite::SuiteOutcome;
use crate::verma::CharacterRow as EngineRow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRowReport {
    pub weight: i64,
    pub depth: i64,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub lambda: i64,
    pub c: String,
    #[serde(rename = "D")]
    pub degree: i64,
    pub rows: Vec<CharacterRowReport>,
}

impl CharacterReport {
    pub fn new(lambda: i64, c: String, degree: i64, rows: &[EngineRow]) -> Self {
        CharacterReport {
            lambda,
            c,
            degree,
            rows: rows
                .iter()
                .map(|r| CharacterRowReport {
                    weight: r.key.h0_weight,
                    depth: r.key.depth,
                    dim_w: r.dim_w,
                    rank: r.rank,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl From<&SuiteOutcome> for SuiteReport {
    fn from(o: &SuiteOutcome) -> Self {
        SuiteReport {
            name: o.name.clone(),
            checks: o.checks,
            failures: o.failures.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lambda: i64,
    pub c: String,
    #[serde(rename = "D")]
    pub degree: i64,
    pub d0: String,
    pub status: String,
    pub suites: Vec<SuiteReport>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularSpaceReport {
    pub weight: i64,
    pub depth: i64,
    pub vectors: Vec<String>,
    /// Every listed vector maps to zero under the coherent-state map.
    pub verified_zero_image: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularReport {
    pub lambda: i64,
    pub c: String,
    #[serde(rename = "D")]
    pub degree: i64,
    pub spaces: Vec<SingularSpaceReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapRowReport {
    pub weight: i64,
    pub depth: i64,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    pub rank: usize,
    #[serde(rename = "imageRank")]
    pub image_rank: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapReport {
    pub lambda: i64,
    pub c: String,
    #[serde(rename = "D")]
    pub degree: i64,
    pub rows: Vec<MapRowReport>,
}
