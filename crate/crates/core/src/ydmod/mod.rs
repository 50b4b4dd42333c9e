//! The Yetter-Drinfeld module `M(O_s, ρ)` and its braiding.
//!
//! With `O_s = {t_1 = s, …, t_m}` and `g_i s g_i⁻¹ = t_i`, the module has
//! basis `g_i v` graded by `t_i`, and `h` acts by `h·(g_i v) = g_j (γ·v)`
//! where `h g_i = g_j γ`, `γ ∈ G^s`. The braiding is
//! `c(g_i v ⊗ g_j w) = t_i·(g_j w) ⊗ g_i v`.

pub mod rep;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;

pub use rep::{Matrix, Representation};

use crate::cyclotomic::Cyclotomic;
use crate::error::{GroupError, Result, YdError};
use crate::group::{GroupHandle, RandomState};
use crate::perm::Permutation;

pub const DEFAULT_CLASS_CAP: usize = 10_000;
pub const DEFAULT_DIMENSION_CAP: usize = 512;
/// Compatibility checks run over every `(h, i)` up to this many pairs.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000;

/// A numeration `t_1 = s, …, t_m` of a conjugacy class with `g_i s g_i⁻¹ = t_i`.
#[derive(Clone, Debug)]
pub struct ClassEnumeration {
    pub elements: Vec<Permutation>,
    pub reps: Vec<Permutation>,
    pub lookup: HashMap<Permutation, usize>,
}

impl ClassEnumeration {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn s(&self) -> &Permutation {
        &self.elements[0]
    }

    /// `g_i ▷ s = t_i` for every `i`, and the lookup inverts the numeration.
    pub fn verify(&self) -> bool {
        let s = self.s();
        self.reps[0].is_identity()
            && self.lookup.len() == self.len()
            && self
                .elements
                .iter()
                .zip(&self.reps)
                .enumerate()
                .all(|(i, (t, g))| s.conjugate_by(g) == *t && self.lookup.get(t) == Some(&i))
    }
}

/// Breadth-first conjugation orbit of `s` under the group's generators.
pub fn enumerate_class(group: &GroupHandle, s: &Permutation, cap: usize) -> Result<ClassEnumeration> {
    if !group.contains(s)? {
        return Err(GroupError::NotInGroup(s.to_cycle_string()).into());
    }
    let mut e = ClassEnumeration {
        elements: vec![s.clone()],
        reps: vec![group.identity()],
        lookup: HashMap::from([(s.clone(), 0)]),
    };
    let mut head = 0;
    while head < e.elements.len() {
        for x in group.generators() {
            let t = e.elements[head].conjugate_by(x);
            if !e.lookup.contains_key(&t) {
                if e.elements.len() == cap {
                    return Err(YdError::ClassTooLarge { cap }.into());
                }
                e.lookup.insert(t.clone(), e.elements.len());
                e.reps.push(x.compose(&e.reps[head]));
                e.elements.push(t);
            }
        }
        head += 1;
    }
    debug_assert!(e.verify());
    Ok(e)
}

/// The unique `(j, γ)` with `h g_i = g_j γ` and `γ ∈ G^s`.
pub fn decompose(h: &Permutation, i: usize, e: &ClassEnumeration) -> Result<(usize, Permutation)> {
    let t = e.elements[i].conjugate_by(h);
    let j = *e.lookup.get(&t).ok_or_else(|| YdError::NotInClass(t.to_cycle_string()))?;
    let gamma = e.reps[j].inverse().compose(h).compose(&e.reps[i]);
    if !gamma.commutes_with(e.s()) {
        return Err(YdError::NotInCentralizer.into());
    }
    Ok((j, gamma))
}

#[derive(Clone, Debug)]
pub struct YDModule {
    pub group: GroupHandle,
    pub enumeration: ClassEnumeration,
    pub rho: Representation,
    q: Cyclotomic,
}

impl YDModule {
    pub fn new(group: GroupHandle, enumeration: ClassEnumeration, rho: Representation) -> Result<Self> {
        let q = rho.central_scalar(enumeration.s())?;
        Ok(Self {
            group,
            enumeration,
            rho,
            q,
        })
    }

    /// `m·d`.
    pub fn dimension(&self) -> usize {
        self.enumeration.len() * self.rho.dimension()
    }

    /// The scalar by which `s` acts.
    pub fn q(&self) -> &Cyclotomic {
        &self.q
    }

    /// `h·(g_i e_a)` as the grading index `j` and the coordinates of `γ·e_a`.
    pub fn act(&self, h: &Permutation, i: usize, a: usize) -> Result<(usize, Vec<Cyclotomic>)> {
        let (j, gamma) = decompose(h, i, &self.enumeration)?;
        let m = self.rho.image(&gamma)?;
        Ok((j, m.iter().map(|row| row[a].clone()).collect()))
    }

    /// A graded submodule is fixed by its degree-`s` part, which must be
    /// `G^s`-stable, and the grading orbit is a single class. So the module
    /// is simple exactly when `ρ` is irreducible.
    pub fn is_simple(&self) -> bool {
        self.enumeration.verify() && self.rho.is_irreducible()
    }
}

/// The braiding as one `d×d` block per pair `(i, j)`:
/// `c(g_i e_a ⊗ g_j e_b) = Σ_l R_ij[l][b] g_{j'} e_l ⊗ g_i e_a` with
/// `t_i g_j = g_{j'} γ` and `R_ij = ρ(γ)`.
#[derive(Clone, Debug)]
pub struct BraidingMatrix {
    m: usize,
    d: usize,
    target: Vec<u32>,
    block: Vec<u32>,
    blocks: Vec<Matrix>,
}

pub fn braiding_matrix(module: &YDModule, cap: usize) -> Result<BraidingMatrix> {
    let dim = module.dimension();
    if dim > cap {
        return Err(YdError::DimensionTooLarge { dim, cap }.into());
    }
    let e = &module.enumeration;
    let m = e.len();
    let mut seen: HashMap<Permutation, u32> = HashMap::new();
    let mut blocks = Vec::new();
    let mut target = Vec::with_capacity(m * m);
    let mut block = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let (jp, gamma) = decompose(&e.elements[i], j, e)?;
            let b = match seen.get(&gamma) {
                Some(&b) => b,
                None => {
                    let b = blocks.len() as u32;
                    blocks.push(module.rho.image(&gamma)?);
                    seen.insert(gamma, b);
                    b
                }
            };
            target.push(jp as u32);
            block.push(b);
        }
    }
    Ok(BraidingMatrix {
        m,
        d: module.rho.dimension(),
        target,
        block,
        blocks,
    })
}

type Triple = (usize, usize, usize);

impl BraidingMatrix {
    /// `m·d`; the matrix itself is square of side `(m·d)²`.
    pub fn dimension(&self) -> usize {
        self.m * self.d
    }

    pub fn class_size(&self) -> usize {
        self.m
    }

    pub fn rep_dimension(&self) -> usize {
        self.d
    }

    /// `j'` with `t_i g_j = g_{j'} γ`.
    pub fn target(&self, i: usize, j: usize) -> usize {
        self.target[i * self.m + j] as usize
    }

    /// `ρ(γ)` for the pair `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[self.block[i * self.m + j] as usize]
    }

    /// Overwrites `R_ij[l][b]`, leaving other pairs sharing the block alone.
    pub fn set_coefficient(&mut self, i: usize, j: usize, l: usize, b: usize, v: Cyclotomic) {
        let mut blk = self.block(i, j).clone();
        blk[l][b] = v;
        self.block[i * self.m + j] = self.blocks.len() as u32;
        self.blocks.push(blk);
    }

    /// `c` applied to `e_p ⊗ e_q` of `V ⊗ V`.
    fn apply(&self, p: usize, q: usize) -> impl Iterator<Item = (usize, usize, &Cyclotomic)> + '_ {
        let d = self.d;
        let i = p / d;
        let (j, b) = (q / d, q % d);
        let jp = self.target(i, j);
        self.block(i, j)
            .iter()
            .enumerate()
            .filter(move |(_, row)| !row[b].is_zero())
            .map(move |(l, row)| (jp * d + l, p, &row[b]))
    }

    /// Nonzero entries `(row, column, value)` in the tensor basis ordered
    /// by `(i, v, j, w)`, sorted by row then column.
    pub fn entries(&self) -> Vec<(usize, usize, Cyclotomic)> {
        let n = self.dimension();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for (x, y, v) in self.apply(p, q) {
                    out.push((x * n + y, p * n + q, v.clone()));
                }
            }
        }
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    /// The pair map `(i, j) ↦ (j', i)` is a bijection and every block is
    /// invertible.
    pub fn is_invertible(&self) -> bool {
        let bijective = (0..self.m).all(|i| {
            let mut hit = vec![false; self.m];
            (0..self.m).all(|j| !std::mem::replace(&mut hit[self.target(i, j)], true))
        });
        let mut used: Vec<u32> = self.block.clone();
        used.sort_unstable();
        used.dedup();
        bijective && used.iter().all(|&b| rep::is_invertible(&self.blocks[b as usize]))
    }

    /// Exact check of `(c⊗1)(1⊗c)(c⊗1) = (1⊗c)(c⊗1)(1⊗c)` together with
    /// invertibility.
    pub fn check_braid_equation(&self) -> bool {
        if !self.is_invertible() {
            return false;
        }
        match self.root_exponents() {
            Some((order, exps)) => self.braid_roots(order, &exps),
            None => self.braid_generic(),
        }
    }

    /// For `d = 1` with every block a root of unity: `(L, k_b)` with block
    /// `b` equal to `ζ_L^{k_b}`.
    fn root_exponents(&self) -> Option<(u64, Vec<u64>)> {
        if self.d != 1 {
            return None;
        }
        let orders = self
            .blocks
            .iter()
            .map(|b| b[0][0].root_of_unity_order())
            .collect::<Option<Vec<u64>>>()?;
        let l = orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o));
        let powers: HashMap<Cyclotomic, u64> = (0..l).map(|k| (Cyclotomic::root_of_unity(l, k as i64), k)).collect();
        let exps = self.blocks.iter().map(|b| powers[&b[0][0]]).collect();
        Some((l, exps))
    }

    fn braid_roots(&self, l: u64, exps: &[u64]) -> bool {
        let m = self.m;
        let q = |i: usize, j: usize| exps[self.block[i * m + j] as usize];
        (0..m).into_par_iter().all(|x| {
            (0..m).all(|y| {
                let xy = self.target(x, y);
                (0..m).all(|z| {
                    let xz = self.target(x, z);
                    let yz = self.target(y, z);
                    let left = self.target(xy, xz);
                    let right = self.target(x, yz);
                    let cl = q(x, y) + q(x, z) + q(xy, xz);
                    let cr = q(y, z) + q(x, yz) + q(x, y);
                    left == right && cl % l == cr % l
                })
            })
        })
    }

    fn on_first(&self, v: &BTreeMap<Triple, Cyclotomic>) -> BTreeMap<Triple, Cyclotomic> {
        let mut out = BTreeMap::new();
        for (&(p, q, r), c) in v {
            for (x, y, w) in self.apply(p, q) {
                add_into(&mut out, (x, y, r), c * w);
            }
        }
        out
    }

    fn on_second(&self, v: &BTreeMap<Triple, Cyclotomic>) -> BTreeMap<Triple, Cyclotomic> {
        let mut out = BTreeMap::new();
        for (&(p, q, r), c) in v {
            for (x, y, w) in self.apply(q, r) {
                add_into(&mut out, (p, x, y), c * w);
            }
        }
        out
    }

    fn braid_generic(&self) -> bool {
        let n = self.dimension();
        (0..n).into_par_iter().all(|p| {
            (0..n).all(|q| {
                (0..n).all(|r| {
                    let v = BTreeMap::from([((p, q, r), Cyclotomic::one())]);
                    let left = self.on_first(&self.on_second(&self.on_first(&v)));
                    let right = self.on_second(&self.on_first(&self.on_second(&v)));
                    left == right
                })
            })
        })
    }
}

fn add_into(map: &mut BTreeMap<Triple, Cyclotomic>, key: Triple, v: Cyclotomic) {
    let sum = match map.remove(&key) {
        Some(old) => &old + &v,
        None => v,
    };
    if !sum.is_zero() {
        map.insert(key, sum);
    }
}

/// Elements `h` for the compatibility checks: all of `G` when `|G|·m` is
/// small, otherwise `sample` seeded random elements.
fn probe_elements(module: &YDModule, sample: usize, seed: u64) -> Vec<Permutation> {
    let g = &module.group;
    if g.order() * module.enumeration.len() as u128 <= EXHAUSTIVE_LIMIT {
        let mut all = Vec::new();
        g.chain().for_each_element(|x| all.push(x.clone()));
        all
    } else {
        let mut state = RandomState::new(seed);
        (0..sample).map(|_| g.random_element(&mut state)).collect()
    }
}

/// `δ(h·(g_i v)) = (h t_i h⁻¹) ⊗ h·(g_i v)`: the action moves degree `t_i`
/// to degree `h t_i h⁻¹`, with `h g_i = g_j γ` and `γ ∈ G^s`.
pub fn check_yd_compatibility(module: &YDModule, sample: usize, seed: u64) -> bool {
    let e = &module.enumeration;
    probe_elements(module, sample, seed).par_iter().all(|h| {
        (0..e.len()).all(|i| match decompose(h, i, e) {
            Ok((j, gamma)) => {
                e.elements[j] == e.elements[i].conjugate_by(h)
                    && h.compose(&e.reps[i]) == e.reps[j].compose(&gamma)
                    && module.rho.image(&gamma).is_ok()
            }
            Err(_) => false,
        })
    })
}

/// `(h₁h₂)·x = h₁·(h₂·x)` on `sample` seeded random triples.
pub fn check_action(module: &YDModule, sample: usize, seed: u64) -> bool {
    let e = &module.enumeration;
    let mut state = RandomState::new(seed);
    (0..sample).all(|_| {
        let h1 = module.group.random_element(&mut state);
        let h2 = module.group.random_element(&mut state);
        let i = state.rng().gen_range(0..e.len());
        let step = || -> Result<bool> {
            let (j, g2) = decompose(&h2, i, e)?;
            let (k, g1) = decompose(&h1, j, e)?;
            let (k2, g12) = decompose(&h1.compose(&h2), i, e)?;
            let lhs = module.rho.image(&g12)?;
            let rhs = rep::mat_mul(&module.rho.image(&g1)?, &module.rho.image(&g2)?);
            Ok(k == k2 && g12 == g1.compose(&g2) && lhs == rhs)
        };
        step().unwrap_or(false)
    })
}
