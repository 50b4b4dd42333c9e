//! Dixon-Schneider: irreducible characters from common eigenvectors of the
//! class matrices over a prime field, lifted to cyclotomics through
//! eigenvalue multiplicities.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::fp::{is_prime, Fp, Matrix};
use super::{CharacterTable, ClassMeta, Provenance};
use crate::conj::{prime_divisors, ClassTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::CharTableError;
use crate::perm::Permutation;

/// Largest group order accepted by default.
pub const DEFAULT_MAX_ORDER: u128 = 10_000_000;

#[derive(Clone, Debug)]
pub struct DixonConfig {
    pub max_order: u128,
}

impl Default for DixonConfig {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

type Result<T> = std::result::Result<T, CharTableError>;

fn ceil_sqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest prime `p ≡ 1 (mod exponent)` above `2·√|G|·max class size` that
/// does not divide `|G|`.
pub fn choose_prime(order: u128, exponent: u64, max_class: u128) -> Result<u64> {
    const CUTOFF: u128 = 1 << 62;
    let bound = 2 * ceil_sqrt(order) * max_class;
    let e = exponent as u128;
    let mut p = (bound / e + 1) * e + 1;
    while p < CUTOFF {
        if is_prime(p as u64) && order % p != 0 {
            return Ok(p as u64);
        }
        p += e;
    }
    Err(CharTableError::NoPrime(CUTOFF as u64))
}

fn class_elements(table: &ClassTable, i: usize) -> Vec<Permutation> {
    let rep = &table.class(i).representative;
    let gens = table.group().generators();
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(rep.clone());
    let mut out = vec![rep.clone()];
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = x.conjugate_by(g);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
    }
    assert_eq!(out.len() as u128, table.class(i).size, "class enumeration is incomplete");
    out
}

/// Rows of the class matrix `A[c][r] = #{x ∈ C_j : x⁻¹ g_r ∈ C_c}` mod p,
/// computed on demand. Counting triples gives
/// `A[c][r] = |C_c|/|C_r| · #{x ∈ C_j : x g_c ∈ C_r}`, so a row costs one
/// membership test per element of `C_j`.
struct ClassMatrix<'t> {
    table: &'t ClassTable,
    f: Fp,
    elements: Vec<Permutation>,
    size_inv: &'t [u64],
    rows: HashMap<usize, Vec<u64>>,
}

impl<'t> ClassMatrix<'t> {
    fn new(table: &'t ClassTable, j: usize, f: Fp, size_inv: &'t [u64]) -> Self {
        Self {
            table,
            f,
            elements: class_elements(table, j),
            size_inv,
            rows: HashMap::new(),
        }
    }

    fn row(&mut self, c: usize) -> &[u64] {
        let (table, f) = (self.table, self.f);
        let elements = &self.elements;
        let size_inv = self.size_inv;
        self.rows.entry(c).or_insert_with(|| {
            let g = &table.class(c).representative;
            let k = table.len();
            let counts = elements
                .par_chunks(256)
                .map(|chunk| {
                    let mut counts = vec![0u64; k];
                    for x in chunk {
                        counts[table.class_of_member(&x.compose(g))] += 1;
                    }
                    counts
                })
                .reduce(
                    || vec![0u64; k],
                    |mut a, b| {
                        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                        a
                    },
                );
            let cc = f.from_u128(table.class(c).size);
            counts
                .iter()
                .zip(size_inv)
                .map(|(&n, &inv)| f.mul(f.mul(n % f.p, cc), inv))
                .collect()
        })
    }
}

/// An invariant subspace as echelon rows with their pivot columns.
struct Space {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn split(f: Fp, space: Space, a: &mut ClassMatrix<'_>, rng: &mut ChaCha8Rng) -> Result<Vec<Space>> {
    let m = space.rows.len();
    if m == 1 {
        return Ok(vec![space]);
    }
    let k = a.table.len();
    // Restriction R with A·b_i = Σ_t R[t][i] b_t, read off at the pivots.
    let r: Matrix = space
        .pivots
        .iter()
        .map(|&c| {
            let row = a.row(c);
            space
                .rows
                .iter()
                .map(|b| row.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))))
                .collect()
        })
        .collect();
    let roots = f.roots(&f.char_poly(&r), rng);
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let shifted: Matrix = (0..m)
            .map(|t| (0..m).map(|i| if t == i { f.sub(r[t][i], lambda) } else { r[t][i] }).collect())
            .collect();
        let ns = f.null_space(&shifted, m);
        let lifted: Vec<Vec<u64>> = ns
            .iter()
            .map(|u| {
                let mut v = vec![0u64; k];
                for (ui, b) in u.iter().zip(&space.rows) {
                    if *ui != 0 {
                        for (x, y) in v.iter_mut().zip(b) {
                            *x = f.add(*x, f.mul(*ui, *y));
                        }
                    }
                }
                v
            })
            .collect();
        total += lifted.len();
        let (rows, pivots) = f.echelon(lifted);
        out.push(Space { rows, pivots });
    }
    if total != m {
        return Err(CharTableError::Splitting(format!(
            "eigenspaces of dimension {total} inside an invariant subspace of dimension {m}"
        )));
    }
    Ok(out)
}

/// The irreducible characters of the group of `table`, in the class order of
/// `table`.
pub fn dixon_schneider(table: &ClassTable, config: &DixonConfig) -> Result<CharacterTable> {
    let group = table.group();
    let order = group.order();
    if order > config.max_order {
        return Err(CharTableError::Capacity {
            order,
            bound: config.max_order,
        });
    }
    let k = table.len();
    let exponent = table.exponent();
    let sizes: Vec<u128> = table.classes().iter().map(|c| c.size).collect();
    let max_class = *sizes.iter().max().unwrap();
    let f = Fp::new(choose_prime(order, exponent, max_class)?);
    let size_inv: Vec<u64> = sizes.iter().map(|&c| f.inv(f.from_u128(c))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(table.seed());

    let mut spaces = vec![Space {
        rows: (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect(),
        pivots: (0..k).collect(),
    }];
    let mut by_size: Vec<usize> = (1..k).collect();
    by_size.sort_by_key(|&j| (sizes[j], j));
    for j in by_size {
        if spaces.iter().all(|s| s.rows.len() == 1) {
            break;
        }
        let mut a = ClassMatrix::new(table, j, f, &size_inv);
        let mut next = Vec::new();
        for s in spaces {
            next.extend(split(f, s, &mut a, &mut rng)?);
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(CharTableError::Splitting(format!(
            "class matrices split the centre into {} pieces, expected {k}",
            spaces.len()
        )));
    }

    let inverse_class: Vec<usize> = (0..k).map(|r| table.power_of_class(r, -1)).collect();
    let order_p = f.from_u128(order);
    let z = f.primitive_root_of_unity(exponent);
    let powers: Vec<Vec<usize>> = (0..k)
        .map(|r| (0..table.class(r).order).map(|l| table.power_of_class(r, l as i64)).collect())
        .collect();
    let degree_candidates: Vec<u128> = (1..=ceil_sqrt(order)).filter(|d| order % d == 0 && d * d <= order).collect();

    let mut irr = Vec::with_capacity(k);
    for space in &spaces {
        let w = &space.rows[0];
        if w[0] == 0 {
            return Err(CharTableError::Splitting("eigenvector vanishes at the identity class".into()));
        }
        let w0 = f.inv(w[0]);
        let omega: Vec<u64> = w.iter().map(|&x| f.mul(x, w0)).collect();
        let s = (0..k).fold(0, |acc, r| {
            f.add(acc, f.mul(f.mul(omega[r], omega[inverse_class[r]]), size_inv[r]))
        });
        let d_sq = f.mul(order_p, f.inv(s));
        let d = *degree_candidates
            .iter()
            .find(|&&d| f.from_u128(d * d) == d_sq)
            .ok_or_else(|| CharTableError::Splitting("no admissible character degree".into()))?;
        let dp = f.from_u128(d);
        let chi: Vec<u64> = (0..k).map(|r| f.mul(f.mul(omega[r], dp), size_inv[r])).collect();
        let mut row = Vec::with_capacity(k);
        for r in 0..k {
            let o = table.class(r).order;
            let zo = f.pow(z, exponent / o);
            let o_inv = f.inv(o % f.p);
            let mut terms = Vec::new();
            let mut total = 0u128;
            for e in 0..o {
                let mut m = 0u64;
                for l in 0..o {
                    let root = f.pow(zo, (o - (e * l) % o) % o);
                    m = f.add(m, f.mul(chi[powers[r][l as usize]], root));
                }
                let m = f.mul(m, o_inv);
                if m as u128 > d {
                    return Err(CharTableError::Splitting(format!(
                        "eigenvalue multiplicity {m} exceeds the degree {d}"
                    )));
                }
                total += m as u128;
                if m != 0 {
                    terms.push((e, BigRational::from_integer(BigInt::from(m))));
                }
            }
            if total != d {
                return Err(CharTableError::Splitting("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(Cyclotomic::from_terms(o, terms));
        }
        irr.push(row);
    }

    let primes = prime_divisors(exponent);
    let classes = (0..k)
        .map(|i| ClassMeta {
            order: table.class(i).order,
            size: sizes[i],
            powers: primes
                .iter()
                .map(|&p| (p, table.prime_power_map(p).expect("prime maps cover the exponent")[i]))
                .collect(),
        })
        .collect();
    CharacterTable::new(group.name(), order, classes, irr, Provenance::Computed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conj::conjugacy_classes;
    use crate::group::GroupHandle;

    fn table(gens: &[&str], n: usize) -> CharacterTable {
        let gens = gens.iter().map(|g| Permutation::parse_cycles(g, n).unwrap()).collect();
        let g = GroupHandle::new("t", gens, n, 5).unwrap();
        dixon_schneider(&conjugacy_classes(&g, 5), &DixonConfig::default()).unwrap()
    }

    #[test]
    fn cyclic_of_order_two() {
        let t = table(&["(1,2)"], 2);
        let vals: Vec<Vec<String>> = t.irreducibles().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        assert_eq!(vals, vec![vec!["1", "1"], vec!["1", "-1"]]);
    }

    #[test]
    fn small_symmetric_and_alternating_degrees() {
        assert_eq!(table(&["(1,2)", "(1,2,3)"], 3).degrees(), vec![1, 1, 2]);
        assert_eq!(table(&["(1,2)", "(1,2,3,4)"], 4).degrees(), vec![1, 1, 2, 3, 3]);
        assert_eq!(table(&["(1,2)(3,4)", "(1,3,5)"], 5).degrees(), vec![1, 3, 3, 4, 5]);
    }

    #[test]
    fn cyclic_of_order_five_has_primitive_values() {
        let t = table(&["(1,2,3,4,5)"], 5);
        assert_eq!(t.degrees(), vec![1; 5]);
        let conductors: Vec<u64> = t.irreducibles().iter().map(|r| r[1].conductor()).collect();
        assert_eq!(conductors, vec![1, 5, 5, 5, 5]);
    }

    #[test]
    fn prime_choice() {
        let p = choose_prime(24, 12, 8).unwrap();
        assert_eq!(p % 12, 1);
        assert!(p as u128 > 2 * 5 * 8);
        assert_eq!(p, 97);
    }

    #[test]
    fn capacity_error() {
        let gens = vec![Permutation::parse_cycles("(1,2)", 3).unwrap(), Permutation::parse_cycles("(1,2,3)", 3).unwrap()];
        let g = GroupHandle::new("s3", gens, 3, 1).unwrap();
        let err = dixon_schneider(&conjugacy_classes(&g, 1), &DixonConfig { max_order: 5 }).unwrap_err();
        assert!(matches!(err, CharTableError::Capacity { order: 6, bound: 5 }));
    }
}
