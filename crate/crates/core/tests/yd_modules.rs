//! Yetter-Drinfeld modules and braidings on shipped groups.

use std::path::PathBuf;

use nichols_core::classify::ComputedTables;
use nichols_core::conj::{conjugacy_classes, ClassTable};
use nichols_core::cyclotomic::Cyclotomic;
use nichols_core::group::GroupHandle;
use nichols_core::perm::{GeneratorFile, Permutation};
use nichols_core::ydmod::rep::Representation;
use nichols_core::ydmod::{
    braiding_matrix, check_action, check_yd_compatibility, decompose, enumerate_class, YDModule,
    DEFAULT_CLASS_CAP, DEFAULT_DIMENSION_CAP,
};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load(name: &str) -> (GroupHandle, ClassTable) {
    let g = GroupHandle::load(&data(&format!("{name}.gens")), 1).unwrap();
    let c = conjugacy_classes(&g, 1);
    (g, c)
}

fn linear_module(g: &GroupHandle, c: &ClassTable, i: usize, character: usize) -> YDModule {
    let (p, hc) = ComputedTables::default().compute(c, i).unwrap();
    let rho = Representation::linear(hc, p.table, character).unwrap();
    let e = enumerate_class(g, &c.class(i).representative, DEFAULT_CLASS_CAP).unwrap();
    YDModule::new(g.clone(), e, rho).unwrap()
}

/// Multiset of the diagonal blocks' scalars.
fn diagonal_scalars(c: &nichols_core::ydmod::BraidingMatrix) -> Vec<String> {
    let mut v: Vec<String> = (0..c.class_size()).map(|i| c.block(i, i)[0][0].to_string()).collect();
    v.sort();
    v
}

#[test]
fn s3_decomposition_is_exhaustively_consistent() {
    let (g, c) = load("s3");
    let s = &c.class(1).representative;
    let e = enumerate_class(&g, s, 10).unwrap();
    assert_eq!(e.len(), 3);
    let mut cases = 0;
    g.chain().for_each_element(|h| {
        for i in 0..e.len() {
            let (j, gamma) = decompose(h, i, &e).unwrap();
            assert!(gamma.commutes_with(s));
            assert_eq!(h.compose(&e.reps[i]), e.reps[j].compose(&gamma));
            cases += 1;
        }
    });
    assert_eq!(cases, 18);
}

#[test]
fn sz8_order_seven_class_enumerates() {
    let (g, c) = load("sz8");
    let i = (0..c.len()).find(|&i| c.class(i).order == 7).unwrap();
    let e = enumerate_class(&g, &c.class(i).representative, DEFAULT_CLASS_CAP).unwrap();
    assert_eq!(e.len(), 4160);
    assert!(e.verify());
}

#[test]
fn sz8_involution_braiding() {
    let (g, c) = load("sz8");
    let (p, _) = ComputedTables::default().compute(&c, 1).unwrap();
    // A linear character with q = -1 and the trivial one.
    let minus = (0..p.table.len())
        .find(|&x| p.table.degrees()[x] == 1 && p.table.scalar_q(x, p.s_class).unwrap() == Cyclotomic::from_integer(-1));
    for x in [Some(0), minus].into_iter().flatten() {
        let m = linear_module(&g, &c, 1, x);
        assert_eq!(m.dimension(), 455);
        let b = braiding_matrix(&m, DEFAULT_DIMENSION_CAP).unwrap();
        assert!(b.check_braid_equation());
        assert!(check_yd_compatibility(&m, 200, 1));
        assert!(check_action(&m, 200, 1));
        assert!(diagonal_scalars(&b).iter().all(|q| *q == m.q().to_string()));
    }
}

#[test]
fn renumbering_preserves_braid_truth_and_diagonal() {
    let (g, c) = load("s4");
    let i = (0..c.len()).find(|&i| c.class(i).order == 2 && c.class(i).size == 6).unwrap();
    let m = linear_module(&g, &c, i, 1);
    let b = braiding_matrix(&m, DEFAULT_DIMENSION_CAP).unwrap();

    // The same class numbered from the generators in reverse order.
    let file: GeneratorFile = std::fs::read_to_string(data("s4.gens")).unwrap().parse().unwrap();
    let mut gens = file.generators.clone();
    gens.reverse();
    let g2 = GroupHandle::new("s4-reversed", gens, file.degree, 1).unwrap();
    let s: &Permutation = m.enumeration.s();
    let e2 = enumerate_class(&g2, s, DEFAULT_CLASS_CAP).unwrap();
    assert_eq!(e2.len(), m.enumeration.len());
    let m2 = YDModule::new(g2, e2, m.rho.clone()).unwrap();
    let b2 = braiding_matrix(&m2, DEFAULT_DIMENSION_CAP).unwrap();
    assert_eq!(b.check_braid_equation(), b2.check_braid_equation());
    assert_eq!(diagonal_scalars(&b), diagonal_scalars(&b2));
}

#[test]
fn s4_two_dimensional_module_from_file() {
    let (g, _) = load("s4");
    let s = Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap();
    let h = GroupHandle::from_chain("centralizer", g.centralizer(&s).unwrap(), 1);
    let text = std::fs::read_to_string(data("reps/s4-2a-deg2.rep")).unwrap();
    let rho = Representation::parse(&text, &h).unwrap();
    let e = enumerate_class(&g, &s, 10).unwrap();
    let m = YDModule::new(g, e, rho).unwrap();
    assert_eq!(m.dimension(), 6);
    assert!(m.is_simple());
    let b = braiding_matrix(&m, DEFAULT_DIMENSION_CAP).unwrap();
    assert!(b.is_invertible());
    assert!(b.check_braid_equation());
    assert!(check_yd_compatibility(&m, 100, 1));
}
