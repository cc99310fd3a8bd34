//! Code-spec JSON: the one external description of a code instance.
//!
//! ```json
//! {"family": "C1", "m": 3, "w": 2, "r": 3, "s": 2}
//! {"family": "C2P", "nbar": 5, "w": 2, "r": 3, "s": 2, "q": 13}
//! ```
//!
//! `family` is one of C0, YB1, YB2 (base codes, s = 1), C1, C2, C2P, C3.
//! C0/C1 take `m` (or an even `nbar` = 2m); the YB-based families take
//! `nbar`. Omitting `q` picks the smallest admissible prime.

use crate::families::{build_c1, build_c2, build_c2prime, build_c3};
use crate::gf::FieldSpec;
use crate::lift::{lift, ArrayCode, Family, LiftSpec};
use crate::msrbase::{build_c0, build_yb1, build_yb2, BuildError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid spec JSON: {0}")]
    Json(String),
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nbar: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub w: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, SpecError> {
        serde_json::from_slice(bytes).map_err(|e| SpecError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn s_or_default(&self) -> usize {
        self.s.unwrap_or(1)
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Replace the field override (CLI `--q`).
    pub fn with_q(mut self, q: Option<u64>) -> Self {
        if q.is_some() {
            self.q = q;
        }
        self
    }

    /// Digit count m for the half-length families (from `m` or an even
    /// `nbar`).
    fn resolve_m(&self) -> Result<usize, SpecError> {
        match (self.m, self.nbar) {
            (Some(m), None) => Ok(m),
            (None, Some(nbar)) if nbar % 2 == 0 && nbar > 0 => Ok(nbar / 2),
            (None, Some(nbar)) => Err(SpecError::Invalid(format!(
                "family {} needs nbar = 2m, got odd nbar = {nbar}",
                self.family
            ))),
            (Some(m), Some(nbar)) if nbar == 2 * m => Ok(m),
            (Some(m), Some(nbar)) => Err(SpecError::Invalid(format!(
                "m = {m} and nbar = {nbar} disagree (need nbar = 2m)"
            ))),
            (None, None) => Err(SpecError::Invalid(format!(
                "family {} needs m or an even nbar",
                self.family
            ))),
        }
    }

    fn resolve_nbar(&self) -> Result<usize, SpecError> {
        if self.m.is_some() {
            return Err(SpecError::Invalid(format!(
                "family {} takes nbar, not m",
                self.family
            )));
        }
        self.nbar
            .ok_or_else(|| SpecError::Invalid(format!("family {} needs nbar", self.family)))
    }

    fn base_field(&self) -> Result<Option<FieldSpec>, SpecError> {
        match self.q {
            None => Ok(None),
            Some(q) => Ok(Some(FieldSpec::new(q).map_err(BuildError::Field)?)),
        }
    }

    fn require_base_s(&self) -> Result<(), SpecError> {
        if self.s_or_default() != 1 {
            return Err(SpecError::Invalid(format!(
                "family {} is a base code and takes s = 1",
                self.family
            )));
        }
        Ok(())
    }

    /// Build the described code. Base families come back as identity lifts
    /// so every instance exposes the same interface.
    pub fn build(&self) -> Result<ArrayCode, SpecError> {
        let code = match self.family {
            Family::C0 => {
                self.require_base_s()?;
                let m = self.resolve_m()?;
                let base = build_c0(m, self.w, self.r, self.base_field()?)?;
                let (r, nbar) = (base.r(), base.nbar());
                lift(base, LiftSpec::identity(r, nbar))?
            }
            Family::Yb1 => {
                self.require_base_s()?;
                let nbar = self.resolve_nbar()?;
                let base = build_yb1(nbar, self.w, self.r, self.base_field()?)?;
                let (r, nbar) = (base.r(), base.nbar());
                lift(base, LiftSpec::identity(r, nbar))?
            }
            Family::Yb2 => {
                self.require_base_s()?;
                let nbar = self.resolve_nbar()?;
                let base = build_yb2(nbar, self.w, self.r, self.base_field()?)?;
                let (r, nbar) = (base.r(), base.nbar());
                lift(base, LiftSpec::identity(r, nbar))?
            }
            Family::C1 => {
                let m = self.resolve_m()?;
                build_c1(m, self.w, self.r, self.s_or_default(), self.q)?
            }
            Family::C2 => {
                let nbar = self.resolve_nbar()?;
                build_c2(nbar, self.w, self.r, self.s_or_default(), self.q)?
            }
            Family::C2Prime => {
                let nbar = self.resolve_nbar()?;
                build_c2prime(nbar, self.w, self.r, self.s_or_default(), self.q)?
            }
            Family::C3 => {
                let nbar = self.resolve_nbar()?;
                build_c3(nbar, self.w, self.r, self.s_or_default(), self.q)?
            }
        };
        Ok(code)
    }
}
