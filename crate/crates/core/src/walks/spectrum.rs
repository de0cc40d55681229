use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_len_bound, max_enum_len, LowAceSearch, RootSet, TannerGraph};
use crate::lifting::LiftedCode;

/// An ACE value or +∞. Every finite value orders below `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ace {
    Finite(u64),
    Inf,
}

impl Ace {
    pub fn is_inf(self) -> bool {
        self == Ace::Inf
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Ace::Finite(v) => Some(v),
            Ace::Inf => None,
        }
    }

    fn from_option(v: Option<u64>) -> Self {
        v.map_or(Ace::Inf, Ace::Finite)
    }
}

impl fmt::Display for Ace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ace::Finite(v) => write!(f, "{v}"),
            Ace::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Ace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "∞" | "+∞" => Ok(Ace::Inf),
            _ => t
                .parse()
                .map(Ace::Finite)
                .map_err(|_| Error::Spectrum(format!("`{t}` is neither an integer nor `inf`"))),
        }
    }
}

impl Serialize for Ace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ace::Finite(v) => s.serialize_u64(*v),
            Ace::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Ace::Finite(v)),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// ACE values for cycle lengths 2, 4, …, 2·depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AceSpectrum(Vec<Ace>);

impl AceSpectrum {
    pub fn new(entries: Vec<Ace>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Spectrum("depth must be at least 1".into()));
        }
        Ok(Self(entries))
    }

    pub fn uniform(depth: usize, value: Ace) -> Self {
        Self(vec![value; depth.max(1)])
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn max_len(&self) -> usize {
        2 * self.0.len()
    }

    pub fn entries(&self) -> &[Ace] {
        &self.0
    }

    /// Entry for cycle length `len` (even, 2 ≤ len ≤ 2·depth).
    pub fn at_len(&self, len: usize) -> Ace {
        self.0[len / 2 - 1]
    }

    pub fn set_len(&mut self, len: usize, value: Ace) {
        self.0[len / 2 - 1] = value;
    }

    /// Pointwise `self ≥ other` over the common depth.
    pub fn dominates(&self, other: &AceSpectrum) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub(crate) fn as_bounds(&self) -> Vec<Option<u64>> {
        self.0.iter().map(|a| a.finite()).collect()
    }
}

impl fmt::Display for AceSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Ace::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for AceSpectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Ace>>>()?;
        Self::new(entries)
    }
}

/// Exact ACE spectrum of depth `d_max`: minimum ACE of the cycles of each length.
pub fn ace_spectrum(g: &TannerGraph, d_max: usize) -> Result<AceSpectrum> {
    ace_spectrum_budgeted(g, d_max, None)
}

pub fn ace_spectrum_budgeted(g: &TannerGraph, d_max: usize, budget: Option<u64>) -> Result<AceSpectrum> {
    if d_max == 0 {
        return Err(Error::Spectrum("depth must be at least 1".into()));
    }
    check_len_bound(2 * d_max, max_enum_len())?;
    let min = LowAceSearch::new(g, 2 * d_max)
        .budget(budget.map(crate::graph::CycleBudget))
        .min_ace()?;
    AceSpectrum::new(min.into_iter().map(Ace::from_option).collect())
}

/// Spectrum of a lifted code, searching only from copy 0 of each base variable.
pub fn lifted_spectrum(code: &LiftedCode, d_max: usize, budget: Option<u64>) -> Result<AceSpectrum> {
    if d_max == 0 {
        return Err(Error::Spectrum("depth must be at least 1".into()));
    }
    check_len_bound(2 * d_max, max_enum_len())?;
    let min = LowAceSearch::new(code.expanded(), 2 * d_max)
        .roots(RootSet::Roots(code.copy_zero_vars()))
        .budget(budget.map(crate::graph::CycleBudget))
        .min_ace()?;
    AceSpectrum::new(min.into_iter().map(Ace::from_option).collect())
}
