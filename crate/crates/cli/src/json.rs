//! JSON documents written with `--json`. Every document carries `"schema": "dfilt/1"`.
//! Operators are stored as strings in the input grammar so they can be read back.

use std::sync::Arc;

use dfilt::resolution::{BettiTable, FreeComplex};
use dfilt::weyl::{AlgebraKind, Signature};
use dfilt::{ModuleElement, ShiftedFreeModule};
use serde::{Deserialize, Serialize};

use crate::parse::{parse_operator, ParseError};

pub const SCHEMA: &str = "dfilt/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureJson {
    pub n: usize,
    pub p: usize,
    pub kind: AlgebraKind,
}

impl SignatureJson {
    pub fn of(sig: &Signature) -> Self {
        SignatureJson { n: sig.n, p: sig.p, kind: sig.kind }
    }

    pub fn to_signature(&self) -> Arc<Signature> {
        Arc::new(Signature { n: self.n, p: self.p, kind: self.kind })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub schema: String,
    pub signature: SignatureJson,
    /// `L_0, L_1, …` with their shifts.
    pub modules: Vec<ShiftedFreeModule>,
    /// `maps[i-1][j]` is the image of the `j`-th basis vector of `L_i`.
    pub maps: Vec<Vec<Vec<String>>>,
    /// `(i, k)` labels `∂_t^k e_i` of a restriction complex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<(usize, u32)>>>,
}

impl ComplexJson {
    pub fn of(c: &FreeComplex, labels: Option<Vec<Vec<(usize, u32)>>>) -> Self {
        ComplexJson {
            schema: SCHEMA.into(),
            signature: SignatureJson::of(c.signature()),
            modules: c.modules.clone(),
            maps: c.maps.iter().map(|d| d.iter().map(|r| r.coords.iter().map(|o| o.to_string()).collect()).collect()).collect(),
            labels,
        }
    }

    pub fn to_complex(&self) -> Result<FreeComplex, String> {
        if self.schema != SCHEMA {
            return Err(format!("unsupported schema '{}', expected '{SCHEMA}'", self.schema));
        }
        let sig = self.signature.to_signature();
        let mut maps = Vec::new();
        for (i, d) in self.maps.iter().enumerate() {
            let mut rows = Vec::new();
            for (j, r) in d.iter().enumerate() {
                let coords = r
                    .iter()
                    .map(|s| parse_operator(s, &sig))
                    .collect::<Result<Vec<_>, ParseError>>()
                    .map_err(|e| format!("d_{} row {j}: {e}", i + 1))?;
                rows.push(ModuleElement::new(&sig, coords));
            }
            maps.push(rows);
        }
        FreeComplex::new(&sig, self.modules.clone(), maps).map_err(|e| e.to_string())
    }
}

/// Betti numbers as `[i, j, β_{i,j}]` triples.
pub fn betti_json(b: &BettiTable) -> Vec<(usize, i64, usize)> {
    b.entries.iter().flat_map(|(i, row)| row.iter().map(move |(j, v)| (*i, *j, *v))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub relations: Vec<String>,
    pub names: Vec<String>,
    pub f_shifts: Vec<i64>,
    pub annihilates_generator: bool,
    pub involutive: String,
    pub lifts_exact: bool,
    pub lift_symbols_are_relations: bool,
    pub lift_symbols_generate: bool,
    pub betti: Vec<(usize, i64, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalEquationJson {
    pub b: String,
    /// `(j, P_j)` with `P(s) = Σ s^j P_j`.
    pub p: Vec<(u32, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub k1: i64,
    pub restricted_ranks: Vec<usize>,
    pub presentation: ComplexJson,
    pub expected_relations: Vec<String>,
    pub expected_f_shifts: Vec<i64>,
    pub same_relations: bool,
    pub ranks_match: bool,
    pub shifts_match: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LcReport {
    pub schema: String,
    pub f: String,
    pub weights: Vec<String>,
    pub milnor_number: usize,
    pub b_f: String,
    pub k_prime: i64,
    pub k1: i64,
    pub functional_equation: FunctionalEquationJson,
    pub ann_fs: Vec<String>,
    pub local_cohomology_full: PresentationJson,
    pub local_cohomology: PresentationJson,
    pub strictness: (bool, bool),
    pub restriction: RestrictionJson,
}
