//! Quasi-real and strongly quasi-real classes.
//!
//! `s` is quasi-real when `s² = 1` or some `s^j ≠ s` is conjugate to `s`;
//! strongly quasi-real when in addition `s`, `s^j`, `s^{j²}` are pairwise
//! distinct. Exponents are searched over the units modulo `ord(s)`.

use num_integer::Integer;
use serde::Serialize;

use crate::conj::ClassTable;
use crate::error::{GroupError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuasiRealStatus {
    InvolutionOrIdentity,
    StronglyQuasiReal,
    QuasiRealOnly,
    NotQuasiReal,
}

impl QuasiRealStatus {
    pub fn is_quasi_real(self) -> bool {
        self != Self::NotQuasiReal
    }

    pub fn is_strongly_quasi_real(self) -> bool {
        matches!(self, Self::InvolutionOrIdentity | Self::StronglyQuasiReal)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::InvolutionOrIdentity => "involution-or-identity",
            Self::StronglyQuasiReal => "strongly-quasi-real",
            Self::QuasiRealOnly => "quasi-real-only",
            Self::NotQuasiReal => "not-quasi-real",
        }
    }
}

/// Why a class is (strongly) quasi-real.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `s² = 1`; no exponent needed.
    SquareIsOne,
    Exponent(u64),
}

impl Witness {
    pub fn exponent(self) -> Option<u64> {
        match self {
            Witness::SquareIsOne => None,
            Witness::Exponent(j) => Some(j),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiRealReport {
    pub class_index: usize,
    pub order: u64,
    pub status: QuasiRealStatus,
    pub witness: Option<u64>,
    pub strong_witness: Option<u64>,
}

fn units(ord: u64) -> impl Iterator<Item = u64> {
    (2..ord).filter(move |j| j.gcd(&ord) == 1)
}

fn strongly_distinct(j: u64, ord: u64) -> bool {
    let j2 = j * j % ord;
    j % ord != 1 && j2 != 1 && j2 != j % ord
}

/// Smallest `j` with `s^j ∈ O_s`, `s^j ≠ s`.
pub fn quasi_real_witness(table: &ClassTable, i: usize) -> Result<Option<Witness>> {
    table.check_index(i)?;
    let ord = table.class(i).order;
    if ord <= 2 {
        return Ok(Some(Witness::SquareIsOne));
    }
    Ok(units(ord)
        .find(|&j| table.power_of_class(i, j as i64) == i)
        .map(Witness::Exponent))
}

/// Smallest `j` with `s^j ∈ O_s` and `1, j, j²` distinct modulo `ord(s)`.
pub fn strong_quasi_real_witness(table: &ClassTable, i: usize) -> Result<Option<Witness>> {
    table.check_index(i)?;
    let ord = table.class(i).order;
    if ord <= 2 {
        return Ok(Some(Witness::SquareIsOne));
    }
    Ok(units(ord)
        .filter(|&j| strongly_distinct(j, ord))
        .find(|&j| table.power_of_class(i, j as i64) == i)
        .map(Witness::Exponent))
}

/// Checks `s^j ∈ O_s` by a direct conjugacy search on `s` and `s^j`,
/// independently of the power maps; `strong` also checks distinctness of
/// `s`, `s^j`, `s^{j²}` as permutations.
pub fn verify_witness(table: &ClassTable, i: usize, j: u64, strong: bool) -> Result<bool> {
    table.check_index(i)?;
    let s = &table.class(i).representative;
    let sj = s.pow(j as i64);
    if &sj == s {
        return Ok(false);
    }
    if strong {
        let sjj = s.pow((j * j) as i64);
        if &sjj == s || sjj == sj {
            return Ok(false);
        }
    }
    let g = table.group();
    let Some(w) = g.conjugacy_witness(s, &sj)? else {
        return Ok(false);
    };
    Ok(s.conjugate_by(&w) == sj)
}

pub fn class_report(table: &ClassTable, i: usize) -> Result<QuasiRealReport> {
    let ord = table.class(i).order;
    let weak = quasi_real_witness(table, i)?;
    let strong = strong_quasi_real_witness(table, i)?;
    let status = match (ord <= 2, strong, weak) {
        (true, _, _) => QuasiRealStatus::InvolutionOrIdentity,
        (false, Some(_), _) => QuasiRealStatus::StronglyQuasiReal,
        (false, None, Some(_)) => QuasiRealStatus::QuasiRealOnly,
        (false, None, None) => QuasiRealStatus::NotQuasiReal,
    };
    let report = QuasiRealReport {
        class_index: i,
        order: ord,
        status,
        witness: weak.and_then(Witness::exponent),
        strong_witness: strong.and_then(Witness::exponent),
    };
    for (j, is_strong) in [(report.witness, false), (report.strong_witness, true)] {
        if let Some(j) = j {
            if !verify_witness(table, i, j, is_strong)? {
                return Err(GroupError::WitnessMismatch { class: i, exponent: j }.into());
            }
        }
    }
    Ok(report)
}

/// Whether every class is quasi-real, with a verified report per class.
pub fn group_quasi_real(table: &ClassTable) -> Result<(bool, Vec<QuasiRealReport>)> {
    let reports = (0..table.len())
        .map(|i| class_report(table, i))
        .collect::<Result<Vec<_>>>()?;
    let all = reports.iter().all(|r| r.status.is_quasi_real());
    Ok((all, reports))
}
