//! The quasi-(-1) predicate and per-class classification rows.
//!
//! For a quasi-real `s` and an irreducible `ρ` of the centralizer with
//! `ρ(s) = q·id`, the Nichols algebra is of quasi-(-1) type when
//!
//! * `s` is strongly quasi-real of even order and `q = -1`, or
//! * `s` has even order, `deg ρ > 1` and `q = -1`, or
//! * `s` has even order, `deg ρ = 1` and `q = -1`, or
//! * `deg ρ = 1` and `q` is a primitive cube root of unity.
//!
//! Characters failing all four give infinite-dimensional Nichols algebras.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::chartab::{dixon_schneider, CharacterTable, DixonConfig};
use crate::conj::{conjugacy_classes_with, ClassTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{CharTableError, ClassifyError, Error, Result};
use crate::group::GroupHandle;
use crate::perm::CycleType;
use crate::quasireal::{class_report, QuasiRealStatus};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriteriaVariant {
    /// The union of the four conditions. The first is subsumed by the
    /// second and third.
    #[default]
    LiteralUnion,
    /// Every `q = -1` route additionally needs `s` strongly quasi-real.
    StrictStrong,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CriteriaConfig {
    pub variant: CriteriaVariant,
}

/// The first condition a surviving character meets, in the order listed in
/// the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    StronglyQrEvenOrder,
    EvenOrderQMinusOneHigherDeg,
    EvenOrderQMinusOneDeg1,
    Deg1PrimitiveCubeRoot,
}

impl CaseTag {
    pub fn label(self) -> &'static str {
        match self {
            CaseTag::StronglyQrEvenOrder => "strongly-qr-even-order",
            CaseTag::EvenOrderQMinusOneHigherDeg => "even-order-q-minus-one-higher-deg",
            CaseTag::EvenOrderQMinusOneDeg1 => "even-order-q-minus-one-deg1",
            CaseTag::Deg1PrimitiveCubeRoot => "deg1-primitive-cube-root",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "case")]
pub enum Verdict {
    QuasiMinusOne(CaseTag),
    InfiniteDimensional,
}

impl Verdict {
    pub fn is_quasi_minus_one(self) -> bool {
        matches!(self, Verdict::QuasiMinusOne(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterVerdict {
    pub character: usize,
    /// `None` only for identity rows classified without a table.
    pub degree: Option<u64>,
    #[serde(serialize_with = "display")]
    pub q: Cyclotomic,
    pub verdict: Verdict,
}

fn display<S: serde::Serializer>(v: &Cyclotomic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Where a row's centralizer table came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "detail")]
pub enum TableSource {
    Computed,
    Ingested(String),
    /// The centralizer of the identity is the whole group, whose class count
    /// is known; every `q` is 1, so no table is needed.
    IdentityShortcut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub class_index: usize,
    pub element_order: u64,
    pub class_size: u128,
    pub centralizer_order: u128,
    /// Position of the class of `s` in the centralizer's class order.
    pub cl_position: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub j: Vec<usize>,
    pub quasi_real: QuasiRealStatus,
    pub source: TableSource,
    pub verdicts: Vec<CharacterVerdict>,
}

impl ClassificationRow {
    /// `(order, ν1, ν2, |J|)`, the part compared against published tables.
    pub fn signature(&self) -> (u64, usize, usize, usize) {
        (self.element_order, self.nu1, self.nu2, self.j.len())
    }
}

/// The quasi-(-1) decision for one character.
pub fn classify_character(
    ord_s: u64,
    status: QuasiRealStatus,
    degree: u64,
    q: &Cyclotomic,
    config: &CriteriaConfig,
) -> std::result::Result<Verdict, ClassifyError> {
    if !status.is_quasi_real() {
        return Err(ClassifyError::PredicateInapplicable);
    }
    let even = ord_s % 2 == 0;
    let minus_one = q == &Cyclotomic::from_integer(-1);
    let strong = status.is_strongly_quasi_real();
    let q_minus_one_ok = match config.variant {
        CriteriaVariant::LiteralUnion => true,
        CriteriaVariant::StrictStrong => strong,
    };
    let tag = if strong && even && minus_one {
        Some(CaseTag::StronglyQrEvenOrder)
    } else if even && degree > 1 && minus_one && q_minus_one_ok {
        Some(CaseTag::EvenOrderQMinusOneHigherDeg)
    } else if degree == 1 && even && minus_one && q_minus_one_ok {
        Some(CaseTag::EvenOrderQMinusOneDeg1)
    } else if degree == 1 && q.root_of_unity_order() == Some(3) {
        Some(CaseTag::Deg1PrimitiveCubeRoot)
    } else {
        None
    };
    Ok(tag.map_or(Verdict::InfiniteDimensional, Verdict::QuasiMinusOne))
}

/// A centralizer table together with the position of the class of `s`.
#[derive(Clone, Debug)]
pub struct ProvidedTable {
    pub table: CharacterTable,
    pub s_class: usize,
    pub source: TableSource,
}

/// Supplies the character table of the centralizer of each class
/// representative.
pub trait TableProvider: Sync {
    fn centralizer_table(&self, classes: &ClassTable, i: usize) -> Result<ProvidedTable>;
}

/// Classifies class `i` against a supplied centralizer table.
pub fn classify_class(
    classes: &ClassTable,
    i: usize,
    provided: &ProvidedTable,
    config: &CriteriaConfig,
) -> Result<ClassificationRow> {
    classes.check_index(i)?;
    let info = classes.class(i);
    let table = &provided.table;
    if table.order() != info.centralizer_order {
        return Err(ClassifyError::DataMismatch {
            table: table.order(),
            computed: info.centralizer_order,
        }
        .into());
    }
    let s_meta = table.classes().get(provided.s_class);
    if s_meta.is_none_or(|c| c.size != 1 || c.order != info.order) {
        return Err(ClassifyError::MissingCentralClass(info.order).into());
    }
    let status = class_report(classes, i)?.status;
    let degrees = table.degrees();
    let mut verdicts = Vec::with_capacity(table.len());
    for (x, &d) in degrees.iter().enumerate() {
        let q = table.scalar_q(x, provided.s_class)?;
        let verdict = if status.is_quasi_real() {
            classify_character(info.order, status, d, &q, config)?
        } else {
            Verdict::InfiniteDimensional
        };
        verdicts.push(CharacterVerdict {
            character: x,
            degree: Some(d),
            q,
            verdict,
        });
    }
    Ok(row(classes, i, provided.s_class, status, provided.source.clone(), verdicts))
}

fn row(
    classes: &ClassTable,
    i: usize,
    cl_position: usize,
    status: QuasiRealStatus,
    source: TableSource,
    verdicts: Vec<CharacterVerdict>,
) -> ClassificationRow {
    let info = classes.class(i);
    let j: Vec<usize> = verdicts
        .iter()
        .filter(|v| v.verdict.is_quasi_minus_one())
        .map(|v| v.character)
        .collect();
    ClassificationRow {
        class_index: i,
        element_order: info.order,
        class_size: info.size,
        centralizer_order: info.centralizer_order,
        cl_position,
        nu1: verdicts.len(),
        nu2: verdicts.len() - j.len(),
        j,
        quasi_real: status,
        source,
        verdicts,
    }
}

/// The identity row: `ν1` is the class count of the group and `q = 1` for
/// every character.
pub fn identity_row(classes: &ClassTable) -> ClassificationRow {
    let verdicts = (0..classes.len())
        .map(|x| CharacterVerdict {
            character: x,
            degree: None,
            q: Cyclotomic::one(),
            verdict: Verdict::InfiniteDimensional,
        })
        .collect();
    row(
        classes,
        0,
        0,
        QuasiRealStatus::InvolutionOrIdentity,
        TableSource::IdentityShortcut,
        verdicts,
    )
}

/// One row per class in canonical order, classes processed in parallel. The
/// identity class falls back to [`identity_row`] when the provider cannot
/// supply the group's own table.
pub fn classify_group(
    classes: &ClassTable,
    provider: &dyn TableProvider,
    config: &CriteriaConfig,
) -> Result<Vec<ClassificationRow>> {
    (0..classes.len())
        .into_par_iter()
        .map(|i| {
            let provided = match provider.centralizer_table(classes, i) {
                Ok(p) => p,
                Err(_) if i == 0 => return Ok(identity_row(classes)),
                Err(e) => return Err(provider_error(i, e)),
            };
            classify_class(classes, i, &provided, config).map_err(|e| provider_error(i, e))
        })
        .collect()
}

fn provider_error(class: usize, e: Error) -> Error {
    ClassifyError::Provider {
        class,
        source: Box::new(e),
    }
    .into()
}

/// Builds the centralizer of class `i` as a group and its class table with
/// the representative distinguished.
pub fn centralizer_classes(classes: &ClassTable, i: usize, seed: u64) -> ClassTable {
    let info = classes.class(i);
    let name = format!("{}-centralizer-{}", classes.group().name(), i + 1);
    let h = GroupHandle::from_chain(name, classes.centralizer(i).clone(), seed);
    conjugacy_classes_with(&h, seed, Some(&info.representative))
}

/// Dixon-Schneider on each centralizer.
#[derive(Clone, Debug, Default)]
pub struct ComputedTables {
    pub config: DixonConfig,
    pub seed: u64,
}

impl ComputedTables {
    /// The table together with the centralizer's class table.
    pub fn compute(&self, classes: &ClassTable, i: usize) -> Result<(ProvidedTable, ClassTable)> {
        let order = classes.class(i).centralizer_order;
        if order > self.config.max_order {
            return Err(CharTableError::Capacity {
                order,
                bound: self.config.max_order,
            }
            .into());
        }
        let hc = centralizer_classes(classes, i, self.seed);
        let table = dixon_schneider(&hc, &self.config)?;
        let s_class = hc.distinguished().expect("the representative was distinguished");
        Ok((
            ProvidedTable {
                table,
                s_class,
                source: TableSource::Computed,
            },
            hc,
        ))
    }
}

impl TableProvider for ComputedTables {
    fn centralizer_table(&self, classes: &ClassTable, i: usize) -> Result<ProvidedTable> {
        Ok(self.compute(classes, i)?.0)
    }
}

/// File name under which the centralizer table of a class is stored.
pub fn table_key(centralizer_order: u128, order: u64, fingerprint: &CycleType) -> String {
    let parts: Vec<String> = fingerprint.0.iter().map(|(l, m)| format!("{l}x{m}")).collect();
    format!("cent{centralizer_order}_ord{order}_{}.ctx", parts.join("-"))
}

/// CTX files in a directory, keyed by [`table_key`]. In each file the class
/// of `s` is the first singleton class of its element order.
#[derive(Clone, Debug)]
pub struct IngestedTables {
    pub dir: PathBuf,
}

impl IngestedTables {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        Self {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    pub fn path_for(&self, classes: &ClassTable, i: usize) -> PathBuf {
        let c = classes.class(i);
        self.dir.join(table_key(c.centralizer_order, c.order, &c.fingerprint))
    }
}

impl TableProvider for IngestedTables {
    fn centralizer_table(&self, classes: &ClassTable, i: usize) -> Result<ProvidedTable> {
        let path = self.path_for(classes, i);
        let table = CharacterTable::ingest(&path)?;
        let order = classes.class(i).order;
        let s_class = table
            .central_class(order)
            .ok_or(ClassifyError::MissingCentralClass(order))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(ProvidedTable {
            table,
            s_class,
            source: TableSource::Ingested(name),
        })
    }
}

/// Ingests where a file exists, otherwise computes within the bound.
pub struct PreferIngested {
    pub ingested: Option<IngestedTables>,
    pub computed: Option<ComputedTables>,
}

impl TableProvider for PreferIngested {
    fn centralizer_table(&self, classes: &ClassTable, i: usize) -> Result<ProvidedTable> {
        if let Some(ing) = &self.ingested {
            if ing.path_for(classes, i).exists() {
                return ing.centralizer_table(classes, i);
            }
        }
        match &self.computed {
            Some(c) => c.centralizer_table(classes, i),
            None => Err(CharTableError::Syntax {
                line: 0,
                message: "no CTX file for this centralizer and table computation is disabled".into(),
            }
            .into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conj::conjugacy_classes;
    use crate::perm::Permutation;

    fn cfg() -> CriteriaConfig {
        CriteriaConfig::default()
    }

    #[test]
    fn predicate_examples() {
        let s = QuasiRealStatus::InvolutionOrIdentity;
        let m1 = Cyclotomic::from_integer(-1);
        assert_eq!(
            classify_character(2, s, 1, &m1, &cfg()).unwrap(),
            Verdict::QuasiMinusOne(CaseTag::StronglyQrEvenOrder)
        );
        let strong = QuasiRealStatus::StronglyQuasiReal;
        let z5 = Cyclotomic::zeta(5);
        assert_eq!(classify_character(5, strong, 1, &z5, &cfg()).unwrap(), Verdict::InfiniteDimensional);
        let z3 = Cyclotomic::zeta(3);
        assert_eq!(
            classify_character(3, QuasiRealStatus::QuasiRealOnly, 1, &z3, &cfg()).unwrap(),
            Verdict::QuasiMinusOne(CaseTag::Deg1PrimitiveCubeRoot)
        );
        let one = Cyclotomic::one();
        assert_eq!(classify_character(4, strong, 2, &one, &cfg()).unwrap(), Verdict::InfiniteDimensional);
        assert_eq!(
            classify_character(4, QuasiRealStatus::NotQuasiReal, 1, &m1, &cfg()),
            Err(ClassifyError::PredicateInapplicable)
        );
    }

    #[test]
    fn variants_differ_only_on_weak_even_classes() {
        let strict = CriteriaConfig {
            variant: CriteriaVariant::StrictStrong,
        };
        let m1 = Cyclotomic::from_integer(-1);
        let weak = QuasiRealStatus::QuasiRealOnly;
        assert_eq!(
            classify_character(4, weak, 2, &m1, &cfg()).unwrap(),
            Verdict::QuasiMinusOne(CaseTag::EvenOrderQMinusOneHigherDeg)
        );
        assert_eq!(classify_character(4, weak, 2, &m1, &strict).unwrap(), Verdict::InfiniteDimensional);
        assert_eq!(
            classify_character(4, weak, 1, &m1, &cfg()).unwrap(),
            Verdict::QuasiMinusOne(CaseTag::EvenOrderQMinusOneDeg1)
        );
        let z3 = Cyclotomic::zeta(3);
        assert_eq!(
            classify_character(6, weak, 1, &z3, &strict).unwrap(),
            Verdict::QuasiMinusOne(CaseTag::Deg1PrimitiveCubeRoot)
        );
    }

    fn s3() -> ClassTable {
        let gens = ["(1,2)", "(1,2,3)"].iter().map(|g| Permutation::parse_cycles(g, 3).unwrap()).collect();
        conjugacy_classes(&GroupHandle::new("s3", gens, 3, 1).unwrap(), 1)
    }

    #[test]
    fn s3_rows() {
        let t = s3();
        let rows = classify_group(&t, &ComputedTables::default(), &cfg()).unwrap();
        let sig: Vec<_> = rows.iter().map(|r| r.signature()).collect();
        // Identity: 3 classes, none survive. Transposition: C2, sign survives.
        // 3-cycle: C3, the two faithful characters have q a primitive cube root.
        assert_eq!(sig, vec![(1, 3, 3, 0), (2, 2, 1, 1), (3, 3, 1, 2)]);
        assert_eq!(rows[0].source, TableSource::Computed);
        for r in &rows {
            assert_eq!(r.nu1 - r.nu2, r.j.len());
        }
    }

    #[test]
    fn identity_shortcut_matches_computation() {
        let t = s3();
        let computed = classify_group(&t, &ComputedTables::default(), &cfg()).unwrap();
        let short = identity_row(&t);
        assert_eq!(short.signature(), computed[0].signature());
        let bounded = ComputedTables {
            config: DixonConfig { max_order: 3 },
            seed: 0,
        };
        let rows = classify_group(&t, &bounded, &cfg()).unwrap();
        assert_eq!(rows[0].source, TableSource::IdentityShortcut);
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let t = s3();
        let provided = ComputedTables::default().centralizer_table(&t, 1).unwrap();
        let err = classify_class(&t, 2, &provided, &cfg()).unwrap_err();
        assert_eq!(err, Error::Classify(ClassifyError::DataMismatch { table: 2, computed: 3 }));
    }

    #[test]
    fn table_keys() {
        let ct = CycleType(vec![(1, 1), (2, 2)]);
        assert_eq!(table_key(8, 2, &ct), "cent8_ord2_1x1-2x2.ctx");
    }
}
