//! Writes the generator files in `data/`.
//!
//! Usage: `nichols-datagen <out-dir> [group...]` where groups are any of
//! `small sz8 hs co3` (default: all).

mod golay;
mod graph;
mod suzuki;

use std::path::{Path, PathBuf};

use graph::Graph;
use nichols_core::chain::StabilizerChain;
use nichols_core::perm::{GeneratorFile, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_260_101;

fn write(dir: &Path, name: &str, comment: &str, degree: usize, generators: Vec<Permutation>) {
    let file = GeneratorFile { degree, generators };
    let text = format!("# {comment}\n{}", file.render());
    let path = dir.join(format!("{name}.gens"));
    std::fs::write(&path, text).expect("write generator file");
    println!("wrote {}", path.display());
}

fn order(gens: &[Permutation], degree: usize) -> u128 {
    StabilizerChain::build(gens, degree, None, SEED, None)
        .expect("consistent degrees")
        .order()
}

fn cyc(text: &str, n: usize) -> Permutation {
    Permutation::parse_cycles(text, n).expect("valid cycle notation")
}

fn quaternion_regular() -> Vec<Permutation> {
    // Units ±1, ±i, ±j, ±k as (sign, axis) with axis 0 = real part.
    fn mul(a: (i8, u8), b: (i8, u8)) -> (i8, u8) {
        let (s, axis) = match (a.1, b.1) {
            (0, x) | (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        };
        (a.0 * b.0 * s, axis)
    }
    let elems: Vec<(i8, u8)> = [1i8, -1]
        .iter()
        .flat_map(|&s| (0..4u8).map(move |a| (s, a)))
        .collect();
    let idx = |e: (i8, u8)| elems.iter().position(|&x| x == e).unwrap() as u32;
    [(1, 1), (1, 2)]
        .iter()
        .map(|&g| {
            Permutation::from_images(elems.iter().map(|&x| idx(mul(g, x))).collect()).unwrap()
        })
        .collect()
}

fn small(dir: &Path) {
    for n in 3..=6usize {
        let gens = vec![cyc("(1,2)", n), Permutation::from_cycles(n, &[(0..n as u32).collect()]).unwrap()];
        write(dir, &format!("s{n}"), &format!("symmetric group on {n} points"), n, gens);
    }
    write(dir, "d4", "dihedral group of order 8 on the square's vertices", 4, vec![cyc("(1,2,3,4)", 4), cyc("(1,3)", 4)]);
    let q8 = quaternion_regular();
    assert_eq!(order(&q8, 8), 8);
    write(dir, "q8", "quaternion group in its regular representation", 8, q8);
    let a5 = vec![cyc("(1,2)(3,4)", 5), cyc("(1,3,5)", 5)];
    assert_eq!(order(&a5, 5), 60);
    write(dir, "a5", "alternating group on 5 points", 5, a5);
}

fn sz8(dir: &Path, rng: &mut ChaCha8Rng) {
    let mut gens = Vec::new();
    loop {
        gens.extend(suzuki::generators(rng, 1));
        let o = order(&gens, 65);
        println!("sz8: {} generators, order {o}", gens.len());
        if o == 29_120 && gens.len() >= 2 {
            break;
        }
    }
    write(dir, "sz8", "Sz(8) on the 65 points of the Tits ovoid in PG(3,8)", 65, gens);
}

fn perm_of(map: &[usize]) -> Permutation {
    Permutation::from_images(map.iter().map(|&x| x as u32).collect()).expect("graph isomorphisms are bijective")
}

fn random_automorphisms(g: &Graph, fixed: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Permutation {
    loop {
        if let Some(m) = g.random_isomorphism(g, fixed, rng, 200_000) {
            return perm_of(&m);
        }
    }
}

/// Derived subgroup, generated by random commutators, until `target` is reached.
fn derived(gens: &[Permutation], degree: usize, target: u128, rng: &mut ChaCha8Rng) -> Vec<Permutation> {
    let chain = StabilizerChain::build(gens, degree, None, SEED, None).unwrap();
    let mut out: Vec<Permutation> = Vec::new();
    loop {
        let a = chain.random_element(rng);
        let b = chain.random_element(rng);
        let c = a.inverse().compose(&b.inverse()).compose(&a).compose(&b);
        if c.is_identity() {
            continue;
        }
        out.push(c);
        if out.len() >= 2 {
            let o = order(&out, degree);
            println!("derived: {} generators, order {o}", out.len());
            if o == target {
                return out;
            }
        }
    }
}

fn hs(dir: &Path, rng: &mut ChaCha8Rng) {
    let hexads = golay::hexads();
    let g = Graph::from_fn(100, |a, b| match (a, b) {
        (0, 1..=22) => true,
        (1..=22, 1..=22) | (0, _) => false,
        (1..=22, _) => hexads[b - 23] >> (a - 1) & 1 == 1,
        _ => hexads[a - 23] & hexads[b - 23] == 0,
    });
    assert_eq!(g.srg_parameters(), Some((22, 0, 6)));
    let mut auts = Vec::new();
    loop {
        auts.push(random_automorphisms(&g, &[], rng));
        let o = order(&auts, 100);
        println!("hs:2: {} automorphisms, order {o}", auts.len());
        if o == 88_704_000 {
            break;
        }
    }
    let gens = derived(&auts, 100, 44_352_000, rng);
    write(dir, "hs", "HS on the 100 vertices of the Higman-Sims graph", 100, gens);
}

fn co3(dir: &Path, rng: &mut ChaCha8Rng) {
    let heptads = golay::heptads();
    let g = Graph::from_fn(276, |a, b| match (a < 23, b < 23) {
        (true, true) => false,
        (true, false) => heptads[b - 23] >> a & 1 == 1,
        (false, true) => heptads[a - 23] >> b & 1 == 1,
        (false, false) => (heptads[a - 23] & heptads[b - 23]).count_ones() == 1,
    });
    let d0 = g.descendant(0);
    assert_eq!(d0.srg_parameters(), Some((112, 30, 56)), "descendant at a point");
    let w = 23 + rng.gen_range(0..253);
    let dw = g.descendant(w);
    assert_eq!(dw.srg_parameters(), Some((112, 30, 56)), "descendant at a block");
    // Lift a map between descendants (vertices renumbered without u and w).
    let lift = |m: &[usize], u: usize, w: usize| -> Permutation {
        let from: Vec<usize> = (0..276).filter(|&v| v != u).collect();
        let to: Vec<usize> = (0..276).filter(|&v| v != w).collect();
        let mut images = vec![0usize; 276];
        images[u] = w;
        for (i, &x) in m.iter().enumerate() {
            images[from[i]] = to[x];
        }
        perm_of(&images)
    };
    let mut gens = Vec::new();
    for _ in 0..2 {
        let m = loop {
            if let Some(m) = d0.random_isomorphism(&d0, &[], rng, 200_000) {
                break m;
            }
        };
        gens.push(lift(&m, 0, 0));
    }
    let m = loop {
        if let Some(m) = d0.random_isomorphism(&dw, &[], rng, 200_000) {
            break m;
        }
    };
    gens.push(lift(&m, 0, w));
    loop {
        let o = order(&gens, 276);
        println!("co3: {} generators, order {o}", gens.len());
        if o == 495_766_656_000 {
            break;
        }
        assert!(o < 495_766_656_000, "two-graph automorphism group too large");
        let m = loop {
            if let Some(m) = d0.random_isomorphism(&d0, &[], rng, 200_000) {
                break m;
            }
        };
        gens.push(lift(&m, 0, 0));
    }
    write(dir, "co3", "Co3 on the 276 vertices of its regular two-graph", 276, gens);
}

fn main() {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "data".into()));
    let groups: Vec<String> = args.collect();
    let want = |g: &str| groups.is_empty() || groups.iter().any(|x| x == g);
    std::fs::create_dir_all(&dir).expect("create output directory");
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(SEED + k);
    if want("small") {
        small(&dir);
    }
    if want("sz8") {
        sz8(&dir, &mut rng(1));
    }
    if want("hs") {
        hs(&dir, &mut rng(2));
    }
    if want("co3") {
        co3(&dir, &mut rng(3));
    }
}
