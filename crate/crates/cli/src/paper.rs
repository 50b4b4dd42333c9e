//! Published classification tables and the row-by-row comparison against
//! computed rows.
//!
//! Rows are matched on (element order, class size, ν1) only; class and
//! character labels are never compared, since they depend on an external
//! numbering.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use nichols_core::classify::{ClassificationRow, TableSource, Verdict};
use serde::{Deserialize, Serialize};

use crate::render::{index_list, Table};
use crate::CliError;

/// Tables 1 to 4 and the group each one describes.
pub fn table_group(table: u8) -> Option<&'static str> {
    match table {
        1 => Some("hs"),
        2 | 3 => Some("co3"),
        4 => Some("sz8"),
        _ => None,
    }
}

#[derive(Clone, Debug, Deserialize)]
struct CsvRow {
    row: String,
    cl_position: usize,
    order: u64,
    class_size: u128,
    j: String,
    nu1: usize,
    nu2: usize,
}

#[derive(Clone, Debug, Deserialize)]
struct Erratum {
    table: u8,
    row: String,
    field: String,
    printed: usize,
    corrected: usize,
    reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedRow {
    pub table: u8,
    pub row: String,
    pub cl_position: usize,
    pub order: u64,
    pub class_size: u128,
    /// Character indices as printed, 1-based.
    pub j: Vec<usize>,
    pub nu1: usize,
    pub nu2: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub corrections: Vec<String>,
}

/// Reads `table<N>.csv` from `dir` and applies matching lines of
/// `errata.csv`, recording each correction on the row.
pub fn load_expected(dir: &Path, table: u8) -> Result<Vec<ExpectedRow>, CliError> {
    let path = dir.join(format!("table{table}.csv"));
    if !path.is_file() {
        return Err(CliError::Missing(path));
    }
    let mut errata: Vec<Erratum> = Vec::new();
    let errata_path = dir.join("errata.csv");
    if errata_path.is_file() {
        for e in csv::Reader::from_path(&errata_path)?.deserialize() {
            let e: Erratum = e?;
            if e.table == table {
                errata.push(e);
            }
        }
    }
    let mut rows = Vec::new();
    for r in csv::Reader::from_path(&path)?.deserialize() {
        let r: CsvRow = r?;
        let j = r
            .j
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| CliError::Usage(format!("{}: bad index {x:?}", path.display()))))
            .collect::<Result<Vec<usize>, _>>()?;
        let mut row = ExpectedRow {
            table,
            row: r.row,
            cl_position: r.cl_position,
            order: r.order,
            class_size: r.class_size,
            j,
            nu1: r.nu1,
            nu2: r.nu2,
            corrections: Vec::new(),
        };
        for e in errata.iter().filter(|e| e.row == row.row) {
            let field = match e.field.as_str() {
                "nu1" => &mut row.nu1,
                "nu2" => &mut row.nu2,
                other => return Err(CliError::Usage(format!("erratum names unknown field {other:?}"))),
            };
            if *field != e.printed {
                return Err(CliError::Usage(format!(
                    "erratum for table {table} row {} expects {} = {}, found {}",
                    row.row, e.field, e.printed, field
                )));
            }
            *field = e.corrected;
            row.corrections.push(format!(
                "{} printed as {}, read as {}: {}",
                e.field, e.printed, e.corrected, e.reason
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputedSummary {
    /// 1-based class index in canonical order.
    pub class: usize,
    pub order: u64,
    pub class_size: u128,
    pub nu1: usize,
    pub nu2: usize,
    pub j_len: usize,
    pub source: String,
}

impl ComputedSummary {
    pub fn of(r: &ClassificationRow) -> Self {
        Self {
            class: r.class_index + 1,
            order: r.element_order,
            class_size: r.class_size,
            nu1: r.nu1,
            nu2: r.nu2,
            j_len: r.j.len(),
            source: source_label(&r.source),
        }
    }
}

pub fn source_label(s: &TableSource) -> String {
    match s {
        TableSource::Computed => "computed".into(),
        TableSource::Ingested(f) => format!("ingested {f}"),
        TableSource::IdentityShortcut => "identity shortcut".into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Match,
    Mismatch,
    Unmatched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowComparison {
    pub expected: ExpectedRow,
    pub computed: Option<ComputedSummary>,
    pub status: RowStatus,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcceptanceReport {
    pub tables: Vec<u8>,
    pub group: String,
    pub seed: u64,
    pub criteria: String,
    pub rows: Vec<RowComparison>,
    /// Computed rows no expected row claimed. Failures only when the loaded
    /// tables are meant to cover every class.
    pub unmatched_computed: Vec<ComputedSummary>,
    pub pass: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

impl AcceptanceReport {
    pub fn failures(&self) -> Vec<&RowComparison> {
        self.rows.iter().filter(|r| r.status != RowStatus::Match).collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "row", "order", "class size", "expected ν1/ν2/#J", "class", "computed ν1/ν2/#J", "source", "status", "notes",
        ]);
        let tables: Vec<String> = self.tables.iter().map(u8::to_string).collect();
        t.preamble.push(format!(
            "tables {} against {} (seed {}, criteria {}): {}",
            tables.join(","),
            self.group,
            self.seed,
            self.criteria,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        for r in &self.rows {
            let e = &r.expected;
            let (class, got, source) = match &r.computed {
                Some(c) => (c.class.to_string(), format!("{}/{}/{}", c.nu1, c.nu2, c.j_len), c.source.clone()),
                None => ("-".into(), "-".into(), "-".into()),
            };
            let status = match r.status {
                RowStatus::Match => "match",
                RowStatus::Mismatch => "MISMATCH",
                RowStatus::Unmatched => "UNMATCHED",
            };
            t.rows.push(vec![
                e.row.clone(),
                e.order.to_string(),
                e.class_size.to_string(),
                format!("{}/{}/{}", e.nu1, e.nu2, e.j.len()),
                class,
                got,
                source,
                status.into(),
                r.notes.join("; "),
            ]);
        }
        for c in &self.unmatched_computed {
            t.preamble.push(format!(
                "computed class {} (order {}, size {}, ν1 {}) has no expected row",
                c.class, c.order, c.class_size, c.nu1
            ));
        }
        t.preamble.push(format!("runtime {:.2} s", self.runtime.as_secs_f64()));
        t
    }
}

/// Why a computed row's `J` differs from the expected one, listing the
/// surviving characters with their `q` and case.
fn j_note(r: &ClassificationRow) -> String {
    let members: Vec<String> = r
        .verdicts
        .iter()
        .filter_map(|v| match v.verdict {
            Verdict::QuasiMinusOne(tag) => Some(format!(
                "χ{} (deg {}, q = {}, {})",
                v.character + 1,
                v.degree.map_or("?".into(), |d| d.to_string()),
                v.q,
                tag.label()
            )),
            Verdict::InfiniteDimensional => None,
        })
        .collect();
    if members.is_empty() {
        "computed J is empty".into()
    } else {
        format!("computed J = {{{}}}: {}", index_list(&r.j), members.join(", "))
    }
}

/// Matches expected rows to computed rows on (order, class size, ν1).
/// Within one signature, pairs agreeing on (ν2, |J|) are taken first, since
/// rows sharing a signature are interchangeable. `complete` says the
/// expected rows cover the whole group, so leftover computed rows fail.
pub fn compare(
    expected: Vec<ExpectedRow>,
    computed: &[ClassificationRow],
    complete: bool,
) -> (Vec<RowComparison>, Vec<ComputedSummary>, bool) {
    type Key = (u64, u128, usize);
    let mut pool: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (i, r) in computed.iter().enumerate() {
        pool.entry((r.element_order, r.class_size, r.nu1)).or_default().push(i);
    }
    let mut assigned: Vec<Option<usize>> = vec![None; expected.len()];
    for pass in 0..2 {
        for (k, e) in expected.iter().enumerate() {
            if assigned[k].is_some() {
                continue;
            }
            let Some(cands) = pool.get_mut(&(e.order, e.class_size, e.nu1)) else {
                continue;
            };
            let pos = cands.iter().position(|&i| {
                pass == 1 || (computed[i].nu2 == e.nu2 && computed[i].j.len() == e.j.len())
            });
            if let Some(p) = pos {
                assigned[k] = Some(cands.remove(p));
            }
        }
    }
    let mut pass = true;
    let mut rows = Vec::with_capacity(expected.len());
    for (e, a) in expected.into_iter().zip(assigned) {
        let mut notes = e.corrections.clone();
        if e.nu1 - e.nu2 != e.j.len() {
            notes.push(format!("expected row has ν1 − ν2 = {} but |J| = {}", e.nu1 - e.nu2, e.j.len()));
        }
        let (computed_row, status) = match a {
            None => {
                notes.push(format!(
                    "no computed class with order {}, size {}, ν1 {}",
                    e.order, e.class_size, e.nu1
                ));
                (None, RowStatus::Unmatched)
            }
            Some(i) => {
                let r = &computed[i];
                let agree = r.nu2 == e.nu2 && r.j.len() == e.j.len() && e.nu1 - e.nu2 == e.j.len();
                if !agree {
                    notes.push(format!("expected J has {} members; {}", e.j.len(), j_note(r)));
                }
                if r.source == TableSource::IdentityShortcut {
                    notes.push("centralizer is the whole group; ν1 is its class count".into());
                }
                (
                    Some(ComputedSummary::of(r)),
                    if agree { RowStatus::Match } else { RowStatus::Mismatch },
                )
            }
        };
        pass &= status == RowStatus::Match;
        rows.push(RowComparison {
            expected: e,
            computed: computed_row,
            status,
            notes,
        });
    }
    let leftover: Vec<ComputedSummary> = pool
        .values()
        .flatten()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|i| ComputedSummary::of(&computed[i]))
        .collect();
    if complete && !leftover.is_empty() {
        pass = false;
    }
    (rows, leftover, pass)
}
