//! Subcommand implementations.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nichols_core::chartab::{dixon_schneider, CharacterTable, DixonConfig};
use nichols_core::classify::{
    classify_group, ClassificationRow, ComputedTables, CriteriaConfig, CriteriaVariant, IngestedTables,
    PreferIngested, ProvidedTable, Verdict,
};
use nichols_core::conj::{conjugacy_classes, conjugacy_classes_with, ClassTable};
use nichols_core::group::GroupHandle;
use nichols_core::perm::Permutation;
use nichols_core::quasireal::group_quasi_real;
use nichols_core::ydmod::{
    braiding_matrix, check_action, check_yd_compatibility, enumerate_class, rep::Representation, YDModule,
};
use nichols_core::GroupError;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{default_tables_dir, load_group, paper_dir};
use crate::paper::{compare, load_expected, source_label, table_group, AcceptanceReport};
use crate::render::{emit, index_list, json, Format, Table};
use crate::{Cli, CliError, Command, Criteria, GroupArgs, TableArgs};

type Result<T> = std::result::Result<T, CliError>;

struct Ctx {
    verbose: bool,
    start: Instant,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[{:8.2}s] {}", self.start.elapsed().as_secs_f64(), msg.as_ref());
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let ctx = Ctx {
        verbose: cli.verbose,
        start: Instant::now(),
    };
    let text = match &cli.command {
        Command::Classes { group, output } => classes_cmd(&ctx, group, output.format)?,
        Command::Quasireal { group, output } => quasireal_cmd(&ctx, group, output.format)?,
        Command::Chartab {
            group,
            output,
            class,
            export,
            all_centralizers,
            force,
            max_group_order,
        } => {
            let config = DixonConfig {
                max_order: *max_group_order,
            };
            match all_centralizers {
                Some(dir) => export_all(&ctx, group, output.format, &config, dir, *force)?,
                None => chartab_cmd(&ctx, group, output.format, &config, *class, export.as_deref())?,
            }
        }
        Command::Classify { group, output, tables } => classify_cmd(&ctx, group, output.format, tables)?,
        Command::Braiding { .. } => {
            let (text, pass) = braiding_cmd(&ctx, &cli.command)?;
            out.write_all(text.as_bytes())?;
            return if pass {
                Ok(())
            } else {
                Err(CliError::Failed("a structural check of the braiding failed".into()))
            };
        }
        Command::VerifyPaper {
            paper_tables,
            group,
            seed,
            paper_dir: dir,
            output,
            tables,
        } => {
            let (text, pass) = verify_cmd(&ctx, paper_tables, group.as_deref(), *seed, dir.clone(), output.format, tables)?;
            out.write_all(text.as_bytes())?;
            return if pass {
                Ok(())
            } else {
                Err(CliError::Failed("published table comparison failed".into()))
            };
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn load(ctx: &Ctx, args: &GroupArgs) -> Result<(GroupHandle, ClassTable)> {
    let group = load_group(&args.group, args.seed)?;
    ctx.log(format!("{}: order {}, degree {}", group.name(), group.order(), group.degree()));
    let classes = conjugacy_classes(&group, args.seed);
    ctx.log(format!("{} conjugacy classes", classes.len()));
    Ok((group, classes))
}

fn class_arg(classes: &ClassTable, one_based: usize) -> Result<usize> {
    if one_based == 0 || one_based > classes.len() {
        return Err(CliError::Usage(format!(
            "class index {one_based} is outside 1..={}",
            classes.len()
        )));
    }
    Ok(one_based - 1)
}

#[derive(Serialize)]
struct ClassView {
    index: usize,
    order: u64,
    size: u128,
    centralizer_order: u128,
    cycle_type: String,
    representative: String,
    /// Prime to the 1-based class of `g^p`.
    powers: BTreeMap<u64, usize>,
}

#[derive(Serialize)]
struct ClassesView {
    group: String,
    order: u128,
    degree: usize,
    seed: u64,
    classes: Vec<ClassView>,
}

fn classes_cmd(ctx: &Ctx, args: &GroupArgs, format: Format) -> Result<String> {
    let (group, classes) = load(ctx, args)?;
    let primes = classes.primes();
    let views: Vec<ClassView> = classes
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| ClassView {
            index: i + 1,
            order: c.order,
            size: c.size,
            centralizer_order: c.centralizer_order,
            cycle_type: c.fingerprint.to_string(),
            representative: c.representative.to_cycle_string(),
            powers: primes
                .iter()
                .map(|&p| (p, classes.prime_power_map(p).expect("prime divides the exponent")[i] + 1))
                .collect(),
        })
        .collect();
    let mut headers = vec!["class".to_string(), "order".into(), "size".into(), "centralizer order".into()];
    headers.extend(primes.iter().map(|p| format!("{p}P")));
    let mut t = Table {
        headers,
        ..Table::default()
    };
    t.preamble.push(format!(
        "{}: order {}, {} classes, seed {}",
        group.name(),
        group.order(),
        classes.len(),
        args.seed
    ));
    for v in &views {
        let mut r = vec![
            v.index.to_string(),
            v.order.to_string(),
            v.size.to_string(),
            v.centralizer_order.to_string(),
        ];
        r.extend(v.powers.values().map(usize::to_string));
        t.rows.push(r);
    }
    let view = ClassesView {
        group: group.name().to_string(),
        order: group.order(),
        degree: group.degree(),
        seed: args.seed,
        classes: views,
    };
    emit(format, &t, &view)
}

#[derive(Serialize)]
struct QuasiRealView {
    class: usize,
    order: u64,
    status: &'static str,
    witness: Option<u64>,
    strong_witness: Option<u64>,
}

#[derive(Serialize)]
struct QuasiRealGroupView {
    group: String,
    seed: u64,
    quasi_real: bool,
    classes: Vec<QuasiRealView>,
}

fn quasireal_cmd(ctx: &Ctx, args: &GroupArgs, format: Format) -> Result<String> {
    let (group, classes) = load(ctx, args)?;
    let (all, reports) = group_quasi_real(&classes)?;
    let views: Vec<QuasiRealView> = reports
        .iter()
        .map(|r| QuasiRealView {
            class: r.class_index + 1,
            order: r.order,
            status: r.status.label(),
            witness: r.witness,
            strong_witness: r.strong_witness,
        })
        .collect();
    let mut t = Table::new(&["class", "order", "status", "witness j", "strong witness j"]);
    t.preamble.push(format!(
        "{}: every class quasi-real: {} (seed {})",
        group.name(),
        if all { "yes" } else { "no" },
        args.seed
    ));
    let opt = |w: Option<u64>| w.map_or("-".into(), |j| j.to_string());
    for v in &views {
        t.rows.push(vec![
            v.class.to_string(),
            v.order.to_string(),
            v.status.into(),
            opt(v.witness),
            opt(v.strong_witness),
        ]);
    }
    let view = QuasiRealGroupView {
        group: group.name().to_string(),
        seed: args.seed,
        quasi_real: all,
        classes: views,
    };
    emit(format, &t, &view)
}

#[derive(Serialize)]
struct TableClassView {
    index: usize,
    order: u64,
    size: u128,
    powers: BTreeMap<u64, usize>,
}

#[derive(Serialize)]
struct CharTableView {
    label: String,
    order: u128,
    conductor: u64,
    /// 1-based class of `s` when the table belongs to a centralizer.
    s_class: Option<usize>,
    classes: Vec<TableClassView>,
    irreducibles: Vec<Vec<String>>,
}

fn render_chartab(table: &CharacterTable, s_class: Option<usize>, format: Format) -> Result<String> {
    let n = table.conductor();
    let mut headers = vec!["χ".to_string()];
    headers.extend((1..=table.len()).map(|c| c.to_string()));
    let mut t = Table {
        headers,
        ..Table::default()
    };
    t.preamble.push(format!(
        "{}: order {}, {} classes, conductor {}",
        table.label(),
        table.order(),
        table.len(),
        n
    ));
    if let Some(s) = s_class {
        t.preamble.push(format!("class of s: {}", s + 1));
    }
    let orders: Vec<String> = table.classes().iter().map(|c| c.order.to_string()).collect();
    let sizes: Vec<String> = table.classes().iter().map(|c| c.size.to_string()).collect();
    t.preamble.push(format!("element orders: {}", orders.join(" ")));
    t.preamble.push(format!("class sizes: {}", sizes.join(" ")));
    let irr: Vec<Vec<String>> = table
        .irreducibles()
        .iter()
        .map(|row| row.iter().map(|v| v.to_ctx_string(n)).collect())
        .collect();
    for (x, row) in irr.iter().enumerate() {
        let mut r = vec![(x + 1).to_string()];
        r.extend(row.iter().cloned());
        t.rows.push(r);
    }
    let view = CharTableView {
        label: table.label().to_string(),
        order: table.order(),
        conductor: n,
        s_class: s_class.map(|s| s + 1),
        classes: table
            .classes()
            .iter()
            .enumerate()
            .map(|(i, c)| TableClassView {
                index: i + 1,
                order: c.order,
                size: c.size,
                powers: c.powers.iter().map(|&(p, k)| (p, k + 1)).collect(),
            })
            .collect(),
        irreducibles: irr,
    };
    emit(format, &t, &view)
}

fn chartab_cmd(
    ctx: &Ctx,
    args: &GroupArgs,
    format: Format,
    config: &DixonConfig,
    class: Option<usize>,
    export: Option<&Path>,
) -> Result<String> {
    let (group, classes) = load(ctx, args)?;
    let (table, s_class) = match class {
        None => {
            if group.order() > config.max_order {
                return Err(nichols_core::Error::from(nichols_core::CharTableError::Capacity {
                    order: group.order(),
                    bound: config.max_order,
                })
                .into());
            }
            (dixon_schneider(&classes, config)?, None)
        }
        Some(c) => {
            let i = class_arg(&classes, c)?;
            let computed = ComputedTables {
                config: config.clone(),
                seed: args.seed,
            };
            let (p, _) = computed.compute(&classes, i)?;
            (p.table, Some(p.s_class))
        }
    };
    ctx.log(format!("table with {} characters", table.len()));
    if let Some(path) = export {
        table.export(path)?;
        ctx.log(format!("wrote {}", path.display()));
    }
    render_chartab(&table, s_class, format)
}

#[derive(Serialize)]
struct ExportLine {
    class: usize,
    order: u64,
    centralizer_order: u128,
    file: Option<String>,
    status: String,
}

/// Writes one CTX file per centralizer, keyed by [`IngestedTables::path_for`].
/// Classes sharing a key must produce identical files. The identity class is
/// skipped when the group is above the bound, since classification never
/// needs its table.
fn export_all(
    ctx: &Ctx,
    args: &GroupArgs,
    format: Format,
    config: &DixonConfig,
    dir: &Path,
    force: bool,
) -> Result<String> {
    let (group, classes) = load(ctx, args)?;
    std::fs::create_dir_all(dir)?;
    let computed = ComputedTables {
        config: config.clone(),
        seed: args.seed,
    };
    let keyed = IngestedTables::new(dir);
    let skip_identity = group.order() > config.max_order;
    let results: Vec<Option<Exported>> = (0..classes.len())
        .into_par_iter()
        .map(|i| {
            if i == 0 && skip_identity {
                return Ok(None);
            }
            let (p, _) = computed.compute(&classes, i)?;
            check_s_first(&p, classes.class(i).order)?;
            ctx.log(format!("class {}: centralizer order {}", i + 1, p.table.order()));
            Ok(Some(Exported {
                path: keyed.path_for(&classes, i),
                text: p.table.to_ctx(),
                signature: q_signature(&p)?,
            }))
        })
        .collect::<std::result::Result<_, nichols_core::Error>>()?;

    // Classes sharing a key reuse the first table. That is sound when the
    // class count and the (degree, q) multiset at s agree, which is all
    // classification reads; any other difference is a collision.
    let mut planned: BTreeMap<PathBuf, (usize, &String)> = BTreeMap::new();
    let mut equivalent = vec![false; results.len()];
    for (i, r) in results.iter().enumerate() {
        let Some(e) = r else { continue };
        match planned.get(&e.path) {
            None => {
                planned.insert(e.path.clone(), (i, &e.text));
            }
            Some(&(first, text)) => {
                let f = results[first].as_ref().expect("planned entries exist");
                if *text != e.text {
                    if f.signature != e.signature {
                        return Err(CliError::Io(format!(
                            "classes {} and {} share the key {} but classify differently",
                            first + 1,
                            i + 1,
                            e.path.display()
                        )));
                    }
                    equivalent[i] = true;
                }
            }
        }
    }
    let mut status: BTreeMap<PathBuf, &'static str> = BTreeMap::new();
    for (path, (_, text)) in &planned {
        let s = match std::fs::read_to_string(path) {
            Ok(old) if old == **text => "unchanged",
            Ok(_) if !force => {
                return Err(CliError::Io(format!(
                    "{} exists with different content; pass --force to replace it",
                    path.display()
                )))
            }
            Ok(_) => "replaced",
            Err(_) => "written",
        };
        if s != "unchanged" {
            std::fs::write(path, text)?;
        }
        status.insert(path.clone(), s);
    }

    let mut lines = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let c = classes.class(i);
        let (file, st) = match r {
            None => (None, "skipped: the centralizer is the whole group, above the bound".to_string()),
            Some(Exported { path, .. }) => {
                let first = planned[path].0;
                let st = if first == i {
                    status[path].to_string()
                } else if equivalent[i] {
                    format!("uses the table of class {}: same class count and (degree, q) multiset", first + 1)
                } else {
                    format!("same table as class {}", first + 1)
                };
                (path.file_name().map(|f| f.to_string_lossy().into_owned()), st)
            }
        };
        lines.push(ExportLine {
            class: i + 1,
            order: c.order,
            centralizer_order: c.centralizer_order,
            file,
            status: st,
        });
    }
    let mut t = Table::new(&["class", "order", "centralizer order", "file", "status"]);
    t.preamble.push(format!(
        "{}: {} centralizer tables in {} (seed {})",
        group.name(),
        planned.len(),
        dir.display(),
        args.seed
    ));
    for l in &lines {
        t.rows.push(vec![
            l.class.to_string(),
            l.order.to_string(),
            l.centralizer_order.to_string(),
            l.file.clone().unwrap_or_else(|| "-".into()),
            l.status.clone(),
        ]);
    }
    emit(format, &t, &lines)
}

struct Exported {
    path: PathBuf,
    text: String,
    signature: Vec<(u64, String)>,
}

/// Sorted `(degree, q)` over all characters.
fn q_signature(p: &ProvidedTable) -> std::result::Result<Vec<(u64, String)>, nichols_core::Error> {
    let degrees = p.table.degrees();
    let mut sig = Vec::with_capacity(degrees.len());
    for (x, d) in degrees.into_iter().enumerate() {
        sig.push((d, p.table.scalar_q(x, p.s_class)?.to_string()));
    }
    sig.sort();
    Ok(sig)
}

/// Ingestion takes the first singleton class of the right order as `s`, so
/// exported tables must put `s` there.
fn check_s_first(p: &ProvidedTable, order: u64) -> std::result::Result<(), nichols_core::Error> {
    if p.table.central_class(order) != Some(p.s_class) {
        return Err(nichols_core::CharTableError::Invariant(format!(
            "class of s is {} but the first singleton of order {order} is {:?}",
            p.s_class + 1,
            p.table.central_class(order).map(|c| c + 1)
        ))
        .into());
    }
    Ok(())
}

fn criteria(c: Criteria) -> CriteriaConfig {
    CriteriaConfig {
        variant: match c {
            Criteria::Literal => CriteriaVariant::LiteralUnion,
            Criteria::Strict => CriteriaVariant::StrictStrong,
        },
    }
}

fn criteria_label(c: Criteria) -> &'static str {
    match c {
        Criteria::Literal => "literal",
        Criteria::Strict => "strict",
    }
}

/// `--tables` alone ingests only, `--compute-tables` alone computes only,
/// both prefer files. With neither, the group's shipped table directory is
/// used when present and the rest is computed.
fn provider(args: &TableArgs, group: &GroupHandle, seed: u64) -> Result<PreferIngested> {
    let computed = ComputedTables {
        config: DixonConfig {
            max_order: args.max_group_order,
        },
        seed,
    };
    let ingest = |dir: &PathBuf| -> Result<IngestedTables> {
        if !dir.is_dir() {
            return Err(CliError::Missing(dir.clone()));
        }
        Ok(IngestedTables::new(dir))
    };
    Ok(match (&args.tables, args.compute_tables) {
        (Some(dir), false) => PreferIngested {
            ingested: Some(ingest(dir)?),
            computed: None,
        },
        (Some(dir), true) => PreferIngested {
            ingested: Some(ingest(dir)?),
            computed: Some(computed),
        },
        (None, true) => PreferIngested {
            ingested: None,
            computed: Some(computed),
        },
        (None, false) => PreferIngested {
            ingested: default_tables_dir(group.name()).map(IngestedTables::new),
            computed: Some(computed),
        },
    })
}

#[derive(Serialize)]
struct VerdictView {
    character: usize,
    degree: Option<u64>,
    q: String,
    verdict: Verdict,
}

#[derive(Serialize)]
struct RowView {
    class: usize,
    cl_position: usize,
    order: u64,
    class_size: u128,
    centralizer_order: u128,
    quasi_real: &'static str,
    j: Vec<usize>,
    nu1: usize,
    nu2: usize,
    source: String,
    characters: Vec<VerdictView>,
}

#[derive(Serialize)]
struct ClassifyView {
    group: String,
    order: u128,
    seed: u64,
    criteria: &'static str,
    rows: Vec<RowView>,
}

fn row_view(r: &ClassificationRow) -> RowView {
    RowView {
        class: r.class_index + 1,
        cl_position: r.cl_position + 1,
        order: r.element_order,
        class_size: r.class_size,
        centralizer_order: r.centralizer_order,
        quasi_real: r.quasi_real.label(),
        j: r.j.iter().map(|x| x + 1).collect(),
        nu1: r.nu1,
        nu2: r.nu2,
        source: source_label(&r.source),
        characters: r
            .verdicts
            .iter()
            .map(|v| VerdictView {
                character: v.character + 1,
                degree: v.degree,
                q: v.q.to_string(),
                verdict: v.verdict,
            })
            .collect(),
    }
}

fn j_cell(r: &ClassificationRow) -> String {
    if r.quasi_real.is_quasi_real() {
        index_list(&r.j)
    } else {
        "not quasi-real".into()
    }
}

fn classify_rows(
    ctx: &Ctx,
    group: &GroupHandle,
    classes: &ClassTable,
    args: &TableArgs,
    seed: u64,
) -> Result<Vec<ClassificationRow>> {
    let p = provider(args, group, seed)?;
    if let Some(ing) = &p.ingested {
        ctx.log(format!("ingesting from {}", ing.dir.display()));
    }
    let rows = classify_group(classes, &p, &criteria(args.criteria))?;
    ctx.log(format!("classified {} classes", rows.len()));
    Ok(rows)
}

fn classify_cmd(ctx: &Ctx, args: &GroupArgs, format: Format, tables: &TableArgs) -> Result<String> {
    let (group, classes) = load(ctx, args)?;
    let rows = classify_rows(ctx, &group, &classes, tables, args.seed)?;
    let md_table = || {
        let mut t = Table::new(&["class", "cl-position", "order", "J", "ν1", "ν2"]);
        t.preamble.push(format!(
            "{}: order {}, seed {}, criteria {}",
            group.name(),
            group.order(),
            args.seed,
            criteria_label(tables.criteria)
        ));
        for r in &rows {
            t.rows.push(vec![
                (r.class_index + 1).to_string(),
                (r.cl_position + 1).to_string(),
                r.element_order.to_string(),
                j_cell(r),
                r.nu1.to_string(),
                r.nu2.to_string(),
            ]);
        }
        t
    };
    let csv_table = || {
        let mut t = Table::new(&[
            "class",
            "cl_position",
            "order",
            "class_size",
            "centralizer_order",
            "quasi_real",
            "j",
            "nu1",
            "nu2",
            "source",
            "q",
            "cases",
        ]);
        for r in &rows {
            let q: Vec<String> = r.verdicts.iter().map(|v| v.q.to_string()).collect();
            let cases: Vec<String> = r
                .verdicts
                .iter()
                .filter_map(|v| match v.verdict {
                    Verdict::QuasiMinusOne(tag) => Some(format!("{}:{}", v.character + 1, tag.label())),
                    Verdict::InfiniteDimensional => None,
                })
                .collect();
            t.rows.push(vec![
                (r.class_index + 1).to_string(),
                (r.cl_position + 1).to_string(),
                r.element_order.to_string(),
                r.class_size.to_string(),
                r.centralizer_order.to_string(),
                r.quasi_real.label().into(),
                index_list(&r.j),
                r.nu1.to_string(),
                r.nu2.to_string(),
                source_label(&r.source),
                q.join(" "),
                cases.join(" "),
            ]);
        }
        t
    };
    match format {
        Format::Md => Ok(md_table().markdown()),
        Format::Csv => csv_table().csv(),
        Format::Json => json(&ClassifyView {
            group: group.name().to_string(),
            order: group.order(),
            seed: args.seed,
            criteria: criteria_label(tables.criteria),
            rows: rows.iter().map(row_view).collect(),
        }),
    }
}

#[derive(Serialize)]
struct EntryView {
    row: usize,
    col: usize,
    value: String,
}

#[derive(Serialize)]
struct BraidingEmit {
    group: String,
    seed: u64,
    s: String,
    class_size: usize,
    rep_dimension: usize,
    dimension: usize,
    conductor: u64,
    q: String,
    /// Row and column index `((i·d + v)·m·d + j·d + w) + 1` for the basis
    /// vector `g_i e_v ⊗ g_j e_w`, all indices 0-based inside.
    basis: &'static str,
    entries: Vec<EntryView>,
}

#[derive(Serialize)]
struct BraidingReport {
    group: String,
    seed: u64,
    s: String,
    class_size: usize,
    rep_dimension: usize,
    dimension: usize,
    q: String,
    simple: bool,
    invertible: bool,
    braid_equation: Option<bool>,
    yd_compatible: Option<bool>,
    action: Option<bool>,
}

fn braiding_cmd(ctx: &Ctx, cmd: &Command) -> Result<(String, bool)> {
    let Command::Braiding {
        group: args,
        output,
        class_rep,
        class_index,
        char,
        rep,
        check_braid,
        check_yd,
        emit: emit_path,
        class_size_cap,
        dimension_cap,
        sample,
        max_group_order,
    } = cmd
    else {
        unreachable!("dispatched on the braiding variant")
    };
    let group = load_group(&args.group, args.seed)?;
    let s = match (class_rep, class_index) {
        (Some(text), _) => {
            let s = Permutation::parse_cycles(text, group.degree()).map_err(nichols_core::Error::from)?;
            if !group.contains(&s)? {
                return Err(nichols_core::Error::from(GroupError::NotInGroup(s.to_cycle_string())).into());
            }
            s
        }
        (None, Some(c)) => {
            let classes = conjugacy_classes(&group, args.seed);
            let i = class_arg(&classes, *c)?;
            classes.class(i).representative.clone()
        }
        (None, None) => return Err(CliError::Usage("pass --class-rep or --class-index".into())),
    };
    let chain = group.centralizer(&s)?;
    let h = GroupHandle::from_chain(format!("{}-centralizer", group.name()), chain, args.seed);
    ctx.log(format!("centralizer order {}", h.order()));
    let rho = match (char, rep) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Representation::parse(&text, &h)?
        }
        (Some(spec), None) => {
            let config = DixonConfig {
                max_order: *max_group_order,
            };
            if h.order() > config.max_order {
                return Err(nichols_core::Error::from(nichols_core::CharTableError::Capacity {
                    order: h.order(),
                    bound: config.max_order,
                })
                .into());
            }
            let hc = conjugacy_classes_with(&h, args.seed, Some(&s));
            let table = dixon_schneider(&hc, &config)?;
            let x = match spec.trim().parse::<usize>() {
                Ok(k) if k >= 1 && k <= table.len() => k - 1,
                Ok(k) => {
                    return Err(CliError::Usage(format!(
                        "character index {k} is outside 1..={}",
                        table.len()
                    )))
                }
                Err(_) => table.find_character(spec)?,
            };
            Representation::linear(hc, table, x)?
        }
        (None, None) => return Err(CliError::Usage("pass --char or --rep".into())),
    };
    let enumeration = enumerate_class(&group, &s, *class_size_cap)?;
    ctx.log(format!("class of size {}", enumeration.len()));
    let module = YDModule::new(group.clone(), enumeration, rho)?;
    let c = braiding_matrix(&module, *dimension_cap)?;
    let braid = check_braid.then(|| c.check_braid_equation());
    let (yd, action) = if *check_yd {
        (
            Some(check_yd_compatibility(&module, *sample, args.seed)),
            Some(check_action(&module, *sample, args.seed)),
        )
    } else {
        (None, None)
    };
    let report = BraidingReport {
        group: group.name().to_string(),
        seed: args.seed,
        s: s.to_cycle_string(),
        class_size: c.class_size(),
        rep_dimension: c.rep_dimension(),
        dimension: c.dimension(),
        q: module.q().to_string(),
        simple: module.is_simple(),
        invertible: c.is_invertible(),
        braid_equation: braid,
        yd_compatible: yd,
        action,
    };
    if let Some(path) = emit_path {
        let entries = c.entries();
        let conductor = entries
            .iter()
            .fold(1u64, |a, (_, _, v)| a.lcm(&v.conductor()));
        let view = BraidingEmit {
            group: report.group.clone(),
            seed: args.seed,
            s: report.s.clone(),
            class_size: c.class_size(),
            rep_dimension: c.rep_dimension(),
            dimension: c.dimension(),
            conductor,
            q: module.q().to_ctx_string(conductor.max(module.q().conductor())),
            basis: "g_i e_v (x) g_j e_w at ((i*d + v)*m*d + j*d + w) + 1",
            entries: entries
                .into_iter()
                .map(|(r, col, v)| EntryView {
                    row: r + 1,
                    col: col + 1,
                    value: v.to_ctx_string(conductor),
                })
                .collect(),
        };
        std::fs::write(path, json(&view)?)?;
        ctx.log(format!("wrote {}", path.display()));
    }
    let mut t = Table::new(&["property", "value"]);
    t.preamble.push(format!("{}: s = {} (seed {})", report.group, report.s, args.seed));
    let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
    let opt = |b: Option<bool>| b.map_or("not checked".into(), yes);
    for (k, v) in [
        ("class size m", report.class_size.to_string()),
        ("representation dimension d", report.rep_dimension.to_string()),
        ("module dimension", report.dimension.to_string()),
        ("q", report.q.clone()),
        ("simple", yes(report.simple)),
        ("braiding invertible", yes(report.invertible)),
        ("braid equation", opt(report.braid_equation)),
        ("YD compatibility", opt(report.yd_compatible)),
        ("group action", opt(report.action)),
    ] {
        t.rows.push(vec![k.into(), v]);
    }
    let failed = [report.braid_equation, report.yd_compatible, report.action]
        .iter()
        .any(|b| *b == Some(false))
        || !report.invertible;
    Ok((emit(output.format, &t, &report)?, !failed))
}

fn verify_cmd(
    ctx: &Ctx,
    paper_tables: &[u8],
    group: Option<&str>,
    seed: u64,
    dir: Option<PathBuf>,
    format: Format,
    tables: &TableArgs,
) -> Result<(String, bool)> {
    let start = Instant::now();
    let mut numbers = paper_tables.to_vec();
    numbers.sort_unstable();
    numbers.dedup();
    let expected_group = table_group(numbers[0]).expect("range-checked by the parser");
    if let Some(other) = numbers.iter().find(|&&n| table_group(n) != Some(expected_group)) {
        return Err(CliError::Usage(format!(
            "table {other} describes a different group than table {}",
            numbers[0]
        )));
    }
    let spec = group.unwrap_or(expected_group);
    let dir = dir.unwrap_or_else(paper_dir);
    let mut expected = Vec::new();
    for &n in &numbers {
        expected.extend(load_expected(&dir, n)?);
    }
    let (g, classes) = load(ctx, &GroupArgs { group: spec.to_string(), seed })?;
    let rows = classify_rows(ctx, &g, &classes, tables, seed)?;
    let complete = expected.len() == classes.len();
    let (comparisons, leftover, pass) = compare(expected, &rows, complete);
    let report = AcceptanceReport {
        tables: numbers,
        group: g.name().to_string(),
        seed,
        criteria: criteria_label(tables.criteria).to_string(),
        rows: comparisons,
        unmatched_computed: leftover,
        pass,
        runtime: start.elapsed(),
    };
    let text = emit(format, &report.table(), &report)?;
    Ok((text, report.pass))
}
