//! Conjugacy classes: random search certified by the class-size sum, power
//! maps, and a seed-independent canonical class order.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_integer::Integer;

use crate::backtrack::conjugating_element_in_adapted;
use crate::chain::StabilizerChain;
use crate::error::{GroupError, Result};
use crate::group::{GroupHandle, RandomState};
use crate::perm::{CycleType, Permutation};

/// Number of shortlex words tried when separating tied classes.
const RANK_WORD_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub representative: Permutation,
    pub size: u128,
    pub order: u64,
    pub centralizer_order: u128,
    pub fingerprint: CycleType,
}

/// Conjugacy classes of a group in canonical order.
#[derive(Clone, Debug)]
pub struct ClassTable {
    group: GroupHandle,
    classes: Vec<ClassInfo>,
    centralizers: Vec<StabilizerChain>,
    adapted: Vec<OnceLock<StabilizerChain>>,
    by_type: HashMap<CycleType, Vec<usize>>,
    /// Orbit of each point under the group.
    point_orbit: Vec<u32>,
    by_orbit_type: HashMap<Vec<u64>, Vec<usize>>,
    /// Power maps for every prime up to the largest element order.
    prime_maps: BTreeMap<u64, Vec<usize>>,
    distinguished: Option<usize>,
    seed: u64,
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Classes found so far, before canonical ordering.
struct Partial<'g> {
    group: &'g GroupHandle,
    reps: Vec<Permutation>,
    adapted: Vec<StabilizerChain>,
    centralizers: Vec<StabilizerChain>,
    by_type: HashMap<CycleType, Vec<usize>>,
    covered: u128,
}

impl<'g> Partial<'g> {
    fn identify(&self, x: &Permutation, complete: bool) -> Option<usize> {
        let cands = self.by_type.get(&x.cycle_type())?;
        if complete && cands.len() == 1 {
            return Some(cands[0]);
        }
        for (k, &i) in cands.iter().enumerate() {
            if complete && k + 1 == cands.len() {
                return Some(i);
            }
            if conjugating_element_in_adapted(&self.adapted[i], &self.reps[i], x).is_some() {
                return Some(i);
            }
        }
        None
    }

    /// Adds `x` and its powers as new classes where needed.
    fn absorb(&mut self, x: Permutation) {
        let mut work = vec![x];
        while let Some(y) = work.pop() {
            if self.identify(&y, false).is_some() {
                continue;
            }
            let adapted = self.group.adapted_chain(&y);
            let cent = self.group.centralizer_in(&adapted, &y);
            self.covered += self.group.order() / cent.order();
            let i = self.reps.len();
            self.by_type.entry(y.cycle_type()).or_default().push(i);
            let ord = y.order() as i64;
            for k in 2..ord {
                work.push(y.pow(k));
            }
            self.reps.push(y);
            self.adapted.push(adapted);
            self.centralizers.push(cent);
        }
    }
}

/// Conjugacy classes by seeded random search.
pub fn conjugacy_classes(group: &GroupHandle, seed: u64) -> ClassTable {
    conjugacy_classes_with(group, seed, None)
}

/// As [`conjugacy_classes`]; the class of `distinguished` (a central element
/// when the group is a centralizer) is placed first among classes of equal
/// order and size.
pub fn conjugacy_classes_with(
    group: &GroupHandle,
    seed: u64,
    distinguished: Option<&Permutation>,
) -> ClassTable {
    let mut partial = Partial {
        group,
        reps: Vec::new(),
        adapted: Vec::new(),
        centralizers: Vec::new(),
        by_type: HashMap::new(),
        covered: 0,
    };
    partial.absorb(group.identity());
    for g in group.generators() {
        partial.absorb(g.clone());
    }
    if let Some(d) = distinguished {
        partial.absorb(d.clone());
    }
    let mut state = RandomState::new(seed);
    while partial.covered < group.order() {
        let x = group.random_element(&mut state);
        partial.absorb(x);
    }
    assert_eq!(partial.covered, group.order(), "class sizes overshoot the group order");
    finish(partial, distinguished, seed)
}

fn finish(partial: Partial<'_>, distinguished: Option<&Permutation>, seed: u64) -> ClassTable {
    let group = partial.group;
    let k = partial.reps.len();
    let orders: Vec<u64> = partial.reps.iter().map(|r| r.order()).collect();
    let max_order = orders.iter().copied().max().unwrap_or(1);
    let primes = primes_up_to(max_order);
    let raw_maps: BTreeMap<u64, Vec<usize>> = primes
        .iter()
        .map(|&p| {
            let m = (0..k)
                .map(|i| {
                    partial
                        .identify(&partial.reps[i].pow(p as i64), true)
                        .expect("complete class list")
                })
                .collect();
            (p, m)
        })
        .collect();
    let dist_raw = distinguished.map(|d| partial.identify(d, true).expect("distinguished element lies in the group"));
    let sizes: Vec<u128> = partial
        .centralizers
        .iter()
        .map(|c| group.order() / c.order())
        .collect();
    let types: Vec<CycleType> = partial.reps.iter().map(|r| r.cycle_type()).collect();
    let order = canonical_order(
        &orders,
        &sizes,
        &types,
        dist_raw,
        &raw_maps,
        group.generators(),
        group.degree(),
        |x| partial.identify(x, true),
    );
    // order[new] = raw
    let mut new_of = vec![0usize; k];
    for (new, &raw) in order.iter().enumerate() {
        new_of[raw] = new;
    }
    let mut reps = partial.reps;
    let mut adapted = partial.adapted;
    let mut cents = partial.centralizers;
    let mut slots: Vec<Option<(Permutation, StabilizerChain, StabilizerChain)>> = (0..k)
        .map(|_| None)
        .collect();
    for raw in (0..k).rev() {
        slots[raw] = Some((reps.pop().unwrap(), adapted.pop().unwrap(), cents.pop().unwrap()));
    }
    let mut classes = Vec::with_capacity(k);
    let mut centralizers = Vec::with_capacity(k);
    let mut adapted_cells = Vec::with_capacity(k);
    for &raw in &order {
        let (rep, ad, c) = slots[raw].take().unwrap();
        classes.push(ClassInfo {
            size: sizes[raw],
            order: orders[raw],
            centralizer_order: c.order(),
            fingerprint: types[raw].clone(),
            representative: rep,
        });
        centralizers.push(c);
        let cell = OnceLock::new();
        let _ = cell.set(ad);
        adapted_cells.push(cell);
    }
    let prime_maps = raw_maps
        .into_iter()
        .map(|(p, m)| (p, order.iter().map(|&raw| new_of[m[raw]]).collect()))
        .collect();
    let mut by_type: HashMap<CycleType, Vec<usize>> = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        by_type.entry(c.fingerprint.clone()).or_default().push(i);
    }
    let point_orbit = point_orbits(group.generators(), group.degree());
    let mut by_orbit_type: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        by_orbit_type
            .entry(orbit_cycle_type(&point_orbit, &c.representative))
            .or_default()
            .push(i);
    }
    ClassTable {
        group: group.clone(),
        classes,
        centralizers,
        adapted: adapted_cells,
        by_type,
        point_orbit,
        by_orbit_type,
        prime_maps,
        distinguished: dist_raw.map(|r| new_of[r]),
        seed,
    }
}

fn point_orbits(gens: &[Permutation], degree: usize) -> Vec<u32> {
    let mut orbit = vec![u32::MAX; degree];
    let mut next = 0;
    for start in 0..degree {
        if orbit[start] != u32::MAX {
            continue;
        }
        orbit[start] = next;
        let mut stack = vec![start as u32];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = g.image(x) as usize;
                if orbit[y] == u32::MAX {
                    orbit[y] = next;
                    stack.push(y as u32);
                }
            }
        }
        next += 1;
    }
    orbit
}

/// Cycle type of `x` refined by the group's point orbits, a class invariant
/// finer than the plain cycle type.
fn orbit_cycle_type(point_orbit: &[u32], x: &Permutation) -> Vec<u64> {
    let mut seen = vec![false; point_orbit.len()];
    let mut key = Vec::new();
    for start in 0..point_orbit.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut y = start;
        while !seen[y] {
            seen[y] = true;
            len += 1;
            y = x.image(y as u32) as usize;
        }
        key.push(((point_orbit[start] as u64) << 32) | len);
    }
    key.sort_unstable();
    key
}

/// Canonical class order: element order, class size, the distinguished class
/// first, cycle type, canonical images under prime power maps, and finally
/// the first `(word, exponent)` in a shortlex walk over the generators whose
/// power lands in the class. Returns raw indices in canonical order.
#[allow(clippy::too_many_arguments)]
pub fn canonical_order(
    orders: &[u64],
    sizes: &[u128],
    types: &[CycleType],
    distinguished: Option<usize>,
    prime_maps: &BTreeMap<u64, Vec<usize>>,
    generators: &[Permutation],
    degree: usize,
    classify: impl Fn(&Permutation) -> Option<usize>,
) -> Vec<usize> {
    let k = orders.len();
    let mut by_order: Vec<usize> = (0..k).collect();
    by_order.sort_by_key(|&i| orders[i]);
    let mut canon: Vec<Option<usize>> = vec![None; k];
    let mut result: Vec<usize> = Vec::with_capacity(k);
    let mut start = 0;
    while start < k {
        let m = orders[by_order[start]];
        let end = start + by_order[start..].iter().take_while(|&&i| orders[i] == m).count();
        let group: Vec<usize> = by_order[start..end].to_vec();
        let primes = prime_divisors(m);
        type Key = (u128, bool, CycleType, Vec<usize>);
        let key = |i: usize| -> Key {
            let images = primes
                .iter()
                .map(|p| canon[prime_maps[p][i]].expect("lower orders are placed first"))
                .collect();
            (sizes[i], Some(i) != distinguished, types[i].clone(), images)
        };
        let mut keyed: Vec<(Key, usize)> = group.iter().map(|&i| (key(i), i)).collect();
        keyed.sort();
        let mut tied: Vec<usize> = Vec::new();
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 {
                tied.push(w[0].1);
                tied.push(w[1].1);
            }
        }
        tied.sort_unstable();
        tied.dedup();
        let ranks = if tied.is_empty() {
            HashMap::new()
        } else {
            first_hits(&tied, types, generators, degree, &classify)
        };
        let mut full: Vec<(Key, (usize, u64), usize)> = keyed
            .into_iter()
            .map(|(key, i)| (key, ranks.get(&i).copied().unwrap_or((0, 0)), i))
            .collect();
        full.sort();
        for (_, _, i) in full {
            canon[i] = Some(result.len());
            result.push(i);
        }
        start = end;
    }
    result
}

/// For each class in `targets`, the first shortlex word `w` (index) and
/// exponent `e` with `w^e` in the class.
fn first_hits(
    targets: &[usize],
    types: &[CycleType],
    generators: &[Permutation],
    degree: usize,
    classify: &impl Fn(&Permutation) -> Option<usize>,
) -> HashMap<usize, (usize, u64)> {
    let mut ranks = HashMap::new();
    let wanted: std::collections::HashSet<&CycleType> = targets.iter().map(|&i| &types[i]).collect();
    let gens: Vec<&Permutation> = generators.iter().filter(|g| !g.is_identity()).collect();
    assert!(!gens.is_empty(), "tied classes in a trivial group");
    let mut layer = vec![Permutation::identity(degree)];
    let mut index = 0usize;
    loop {
        let mut next = Vec::with_capacity(layer.len() * gens.len());
        for w in &layer {
            let ord = w.order();
            let mut power = w.clone();
            for e in 1..=ord {
                if wanted.contains(&power.cycle_type()) {
                    if let Some(c) = classify(&power) {
                        if targets.contains(&c) && !ranks.contains_key(&c) {
                            ranks.insert(c, (index, e));
                            if ranks.len() == targets.len() {
                                return ranks;
                            }
                        }
                    }
                }
                power = power.compose(w);
            }
            index += 1;
            assert!(index < RANK_WORD_LIMIT, "could not separate tied classes");
            if next.len() < RANK_WORD_LIMIT {
                for g in &gens {
                    next.push(w.compose(g));
                }
            }
        }
        layer = next;
    }
}

impl ClassTable {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &ClassInfo {
        &self.classes[i]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the class of the distinguished element, if one was given.
    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn centralizer(&self, i: usize) -> &StabilizerChain {
        &self.centralizers[i]
    }

    /// Chain adapted to the representative of class `i`.
    pub fn adapted_chain(&self, i: usize) -> &StabilizerChain {
        self.adapted[i].get_or_init(|| self.group.adapted_chain(&self.classes[i].representative))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1u64, |acc, c| acc.lcm(&c.order))
    }

    /// Primes dividing the exponent, ascending.
    pub fn primes(&self) -> Vec<u64> {
        prime_divisors(self.exponent())
    }

    /// The `p`-th power map for a prime `p` up to the largest element order.
    pub fn prime_power_map(&self, p: u64) -> Option<&[usize]> {
        self.prime_maps.get(&p).map(|m| m.as_slice())
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(GroupError::BadClassIndex {
                index: i,
                count: self.len(),
            }
            .into())
        }
    }

    /// Class of `representative_i^k`, composed from prime power maps.
    pub fn power_of_class(&self, i: usize, k: i64) -> usize {
        let ord = self.classes[i].order;
        let mut e = k.rem_euclid(ord as i64) as u64;
        if e == 0 {
            return 0;
        }
        let mut c = i;
        let mut p = 2;
        while e > 1 {
            while e % p == 0 {
                c = self.prime_maps[&p][c];
                e /= p;
            }
            p += 1;
        }
        c
    }

    /// The map `i ↦ class_of(representative_i^k)`, composed from prime maps
    /// and checked against direct computation on the representatives.
    pub fn power_map(&self, k: i64) -> Result<Vec<usize>> {
        let composed: Vec<usize> = (0..self.len()).map(|i| self.power_of_class(i, k)).collect();
        for (i, &c) in composed.iter().enumerate() {
            let direct = self.class_of(&self.classes[i].representative.pow(k))?;
            assert_eq!(direct, c, "power map {k} disagrees on class {i}");
        }
        Ok(composed)
    }

    /// Index of the class containing `x`.
    pub fn class_of(&self, x: &Permutation) -> Result<usize> {
        if !self.group.contains(x)? {
            return Err(GroupError::NotInGroup(x.to_cycle_string()).into());
        }
        Ok(self.class_of_member(x))
    }

    /// As [`class_of`](Self::class_of) for an element known to lie in the group.
    pub fn class_of_member(&self, x: &Permutation) -> usize {
        let cands = self
            .by_orbit_type
            .get(&orbit_cycle_type(&self.point_orbit, x))
            .expect("every orbit cycle type of the group has a class");
        for &i in &cands[..cands.len() - 1] {
            let rep = &self.classes[i].representative;
            if conjugating_element_in_adapted(self.adapted_chain(i), rep, x).is_some() {
                return i;
            }
        }
        cands[cands.len() - 1]
    }

    /// Whether some other class shares the cycle type of class `i`.
    pub fn type_is_shared(&self, i: usize) -> bool {
        self.by_type[&self.classes[i].fingerprint].len() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn group(gens: &[&str], n: usize) -> GroupHandle {
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(g, n).unwrap())
            .collect();
        GroupHandle::new("test", gens, n, 3).unwrap()
    }

    #[test]
    fn s4_classes() {
        let g = group(&["(1,2)", "(1,2,3,4)"], 4);
        let t = conjugacy_classes(&g, 1);
        let summary: Vec<(u64, u128)> = t.classes().iter().map(|c| (c.order, c.size)).collect();
        assert_eq!(summary, vec![(1, 1), (2, 3), (2, 6), (3, 8), (4, 6)]);
        assert_eq!(t.primes(), vec![2, 3]);
        let sq = t.prime_power_map(2).unwrap();
        assert_eq!(sq, &[0, 0, 0, 3, 1]);
    }

    #[test]
    fn d4_square_of_four_cycle_is_central() {
        let g = group(&["(1,2,3,4)", "(1,3)"], 4);
        let t = conjugacy_classes(&g, 2);
        assert_eq!(t.len(), 5);
        let r = Permutation::parse_cycles("(1,2,3,4)", 4).unwrap();
        let central = t.class_of(&r.pow(2)).unwrap();
        assert_eq!(t.class(central).size, 1);
        assert_eq!(t.class(central).order, 2);
        assert_eq!(t.class_of(&g.identity()).unwrap(), 0);
    }

    #[test]
    fn power_maps_compose() {
        let g = group(&["(1,2)", "(1,2,3,4,5)"], 5);
        let t = conjugacy_classes(&g, 4);
        for j in 0..8 {
            for k in 0..8 {
                let a = t.power_map(j).unwrap();
                let b = t.power_map(k).unwrap();
                let ab = t.power_map(j * k).unwrap();
                for i in 0..t.len() {
                    assert_eq!(a[b[i]], ab[i]);
                }
            }
        }
        assert_eq!(t.power_map(1).unwrap(), (0..t.len()).collect::<Vec<_>>());
        assert!(t.power_map(0).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn a5_splits_five_cycles_identically_across_seeds() {
        let g = group(&["(1,2)(3,4)", "(1,3,5)"], 5);
        let a = conjugacy_classes(&g, 1);
        let b = conjugacy_classes(&g, 77);
        assert_eq!(a.len(), 5);
        let reps_a: Vec<usize> = a.classes().iter().map(|c| b.class_of(&c.representative).unwrap()).collect();
        assert_eq!(reps_a, vec![0, 1, 2, 3, 4]);
        let fives: HashSet<u128> = a.classes().iter().filter(|c| c.order == 5).map(|c| c.size).collect();
        assert_eq!(fives, HashSet::from([12]));
    }

    #[test]
    fn class_of_rejects_outsiders() {
        let g = group(&["(1,2,3)"], 3);
        let t = conjugacy_classes(&g, 1);
        let x = Permutation::parse_cycles("(1,2)", 3).unwrap();
        assert!(t.class_of(&x).is_err());
    }

    #[test]
    fn distinguished_class_comes_first_among_equals() {
        // C2 x C2 = <(1,2), (3,4)>: three involution classes of size 1.
        let g = group(&["(1,2)", "(3,4)"], 4);
        let d = Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap();
        let t = conjugacy_classes_with(&g, 5, Some(&d));
        assert_eq!(t.distinguished(), Some(1));
        assert_eq!(t.class(1).representative, d);
    }
}
