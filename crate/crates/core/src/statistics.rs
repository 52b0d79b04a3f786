//! Microstate counting for `n` particles over `k` distinguishable states.
//!
//! Indistinguishable particles are described by occupancy vectors (how many
//! particles sit in each state), which is exactly what a quasi-function from
//! a pure qset to the states can tell apart. Counting those vectors gives
//! Bose-Einstein statistics; adding exclusion gives Fermi-Dirac; weighting
//! each vector by its multinomial coefficient recovers Maxwell-Boltzmann.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cardinal::Cardinal;
use crate::entity::MAtomId;
use crate::error::{Error, Result};
use crate::qset::QSet;

/// Largest `n` and `k` accepted by [`enumerate_occupancies`].
pub const MAX_ENUMERATION: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatKind {
    BoseEinstein,
    FermiDirac,
    MaxwellBoltzmann,
}

impl StatKind {
    pub const ALL: [StatKind; 3] = [StatKind::BoseEinstein, StatKind::FermiDirac, StatKind::MaxwellBoltzmann];

    pub fn short_name(self) -> &'static str {
        match self {
            StatKind::BoseEinstein => "be",
            StatKind::FermiDirac => "fd",
            StatKind::MaxwellBoltzmann => "mb",
        }
    }

    /// At most one particle per state.
    pub fn exclusion(self) -> bool {
        self == StatKind::FermiDirac
    }
}

impl FromStr for StatKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "be" => Ok(StatKind::BoseEinstein),
            "fd" => Ok(StatKind::FermiDirac),
            "mb" => Ok(StatKind::MaxwellBoltzmann),
            other => Err(format!("unknown statistics {other:?}; expected be, fd or mb")),
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Occupation numbers `(n_1, …, n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupancyVector {
    counts: Vec<u64>,
}

impl OccupancyVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::ScaleExceeded(
                "an occupancy vector needs at least one state".into(),
            ));
        }
        Ok(OccupancyVector { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of particles.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of states.
    pub fn k(&self) -> usize {
        self.counts.len()
    }
}

impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn require_states(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::ScaleExceeded("at least one state is required".into()));
    }
    Ok(())
}

/// Every occupancy vector of `n` particles over `k` states, first component
/// descending (so `(2,0)`, `(1,1)`, `(0,2)`).
pub fn enumerate_occupancies(n: u64, k: u64, exclusion: bool) -> Result<Vec<OccupancyVector>> {
    require_states(k)?;
    if n > MAX_ENUMERATION || k > MAX_ENUMERATION {
        return Err(Error::ScaleExceeded(format!(
            "enumeration is limited to n, k <= {MAX_ENUMERATION} (got n={n}, k={k})"
        )));
    }
    let cap = if exclusion { 1 } else { n };
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k as usize);
    fill(n, k as usize, cap, &mut prefix, &mut out);
    Ok(out)
}

fn fill(left: u64, slots: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<OccupancyVector>) {
    if slots == 1 {
        if left <= cap {
            prefix.push(left);
            out.push(OccupancyVector { counts: prefix.clone() });
            prefix.pop();
        }
        return;
    }
    for here in (0..=left.min(cap)).rev() {
        prefix.push(here);
        fill(left - here, slots - 1, cap, prefix, out);
        prefix.pop();
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact binomial coefficient; zero when `r > n`.
pub fn binomial(n: u128, r: u128) -> Result<Cardinal> {
    if r > n {
        return Ok(Cardinal::ZERO);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) is exact; divide out common factors first.
        let den = i + 1;
        let g = gcd(acc, den);
        let factor = (n - i) / (den / g);
        acc = (acc / g)
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("C({n}, {r})")))?;
    }
    Ok(Cardinal::new(acc))
}

/// Number of microstates of `n` particles over `k` states.
pub fn microstate_count(n: u64, k: u64, kind: StatKind) -> Result<Cardinal> {
    require_states(k)?;
    let (n, k) = (u128::from(n), u128::from(k));
    match kind {
        StatKind::BoseEinstein => binomial(n + k - 1, k - 1),
        StatKind::FermiDirac => binomial(k, n),
        StatKind::MaxwellBoltzmann => Cardinal::new(k).checked_pow(Cardinal::new(n)),
    }
}

/// `n! / (n_1! ⋯ n_k!)`: the number of labelled assignments that realise
/// the occupancy vector.
pub fn mb_weight(v: &OccupancyVector) -> Result<Cardinal> {
    let mut total: u128 = 0;
    let mut acc = Cardinal::ONE;
    for &c in v.counts() {
        total += u128::from(c);
        acc = acc.checked_mul(binomial(total, u128::from(c))?)?;
    }
    Ok(acc)
}

/// Number of quasi-functions from a pure single-species qset to `k`
/// distinguishable states.
pub fn quasi_function_count(source: &QSet, k: u64) -> Result<Cardinal> {
    if !source.is_pure() || source.class_count() > 1 {
        return Err(Error::NotPure(format!("{source} is not a pure single-species qset")));
    }
    microstate_count(source.qc().to_count()?, k, StatKind::BoseEinstein)
}

/// Maps a qset of M-atoms onto state indices `0..k`, in canonical order.
#[derive(Debug, Clone)]
pub struct StateCells {
    index: BTreeMap<MAtomId, usize>,
}

impl StateCells {
    pub fn from_qset(states: &QSet) -> Result<Self> {
        if states.atoms().next().is_some() || states.labels().next().is_some() || states.nested().next().is_some() {
            return Err(Error::NotPure(format!("{states}: states must be M-atoms")));
        }
        let index = states.macros().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(StateCells { index })
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index_of(&self, state: &MAtomId) -> Option<usize> {
        self.index.get(state).copied()
    }
}
