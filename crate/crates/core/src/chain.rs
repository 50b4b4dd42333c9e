//! Stabilizer chains (bases and strong generating sets).
//!
//! The chain carries a *base order*, a total order on all points. Levels are
//! stored only where the stabilizer of the earlier points moves the level
//! point; every other point is fixed by the stabilizer of the points before
//! it. Backtrack searches rely on that property to prune at every point, not
//! only at base points.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GroupError;
use crate::perm::Permutation;

const NONE: u32 = u32::MAX;

/// Number of product-replacement steps discarded after seeding.
pub const PRODUCT_REPLACEMENT_BURN_IN: usize = 64;
/// Consecutive trivial sifts accepted before the randomized phase stops.
const RANDOM_STREAK: usize = 24;

/// One level of the chain: the orbit of `point` under the stabilizer of all
/// points preceding it in the base order, with a transversal.
#[derive(Clone, Debug)]
pub struct Level {
    position: usize,
    point: u32,
    gens: Vec<usize>,
    orbit: Vec<u32>,
    slot: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
}

impl Level {
    pub fn point(&self) -> u32 {
        self.point
    }

    /// Position of the level point in the chain's base order.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn orbit(&self) -> &[u32] {
        &self.orbit
    }

    #[inline]
    pub fn in_orbit(&self, x: u32) -> bool {
        self.slot[x as usize] != NONE
    }

    /// Transversal element mapping the level point to `x`.
    #[inline]
    pub fn rep(&self, x: u32) -> Option<&Permutation> {
        match self.slot[x as usize] {
            NONE => None,
            k => Some(&self.reps[k as usize]),
        }
    }

    #[inline]
    pub fn inv_rep(&self, x: u32) -> Option<&Permutation> {
        match self.slot[x as usize] {
            NONE => None,
            k => Some(&self.inv_reps[k as usize]),
        }
    }

    /// Indices (into the chain's strong generators) generating this level's group.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gens
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    base_order: Vec<u32>,
    position_of: Vec<u32>,
    strong_gens: Vec<Permutation>,
    first_moved: Vec<usize>,
    levels: Vec<Level>,
}

/// Product replacement ("rattle" variant with an accumulator).
#[derive(Clone, Debug)]
pub struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub fn new(generators: &[Permutation], degree: usize, seed: u64) -> Self {
        let mut slots: Vec<Permutation> = generators.to_vec();
        if slots.is_empty() {
            slots.push(Permutation::identity(degree));
        }
        let base = slots.clone();
        while slots.len() < 10 {
            slots.push(base[slots.len() % base.len()].clone());
        }
        let mut pr = Self {
            slots,
            acc: Permutation::identity(degree),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..PRODUCT_REPLACEMENT_BURN_IN {
            pr.step();
        }
        pr
    }

    fn step(&mut self) {
        let n = self.slots.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if self.rng.gen_bool(0.5) {
            self.slots[j].clone()
        } else {
            self.slots[j].inverse()
        };
        self.slots[i] = if self.rng.gen_bool(0.5) {
            self.slots[i].compose(&other)
        } else {
            other.compose(&self.slots[i])
        };
        let k = self.rng.gen_range(0..n);
        self.acc = self.acc.compose(&self.slots[k]);
    }

    pub fn next_element(&mut self) -> Permutation {
        self.step();
        self.acc.clone()
    }
}

impl StabilizerChain {
    /// Chain of the trivial group on `degree` points.
    pub fn trivial(degree: usize, base_order: Vec<u32>) -> Self {
        let mut position_of = vec![0u32; degree];
        for (i, &x) in base_order.iter().enumerate() {
            position_of[x as usize] = i as u32;
        }
        Self {
            degree,
            base_order,
            position_of,
            strong_gens: Vec::new(),
            first_moved: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Builds a verified chain for `⟨generators⟩`.
    ///
    /// The base order is a seeded shuffle of the points unless `base_order` is
    /// given. When `known_order` is supplied the randomized phase stops as soon
    /// as the orbit product reaches it (which certifies completeness);
    /// otherwise every Schreier generator is sifted before returning.
    pub fn build(
        generators: &[Permutation],
        degree: usize,
        base_order: Option<Vec<u32>>,
        seed: u64,
        known_order: Option<u128>,
    ) -> Result<Self, GroupError> {
        if degree == 0 {
            return Err(GroupError::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_ba5e);
        let base_order = base_order.unwrap_or_else(|| {
            let mut pts: Vec<u32> = (0..degree as u32).collect();
            pts.shuffle(&mut rng);
            pts
        });
        assert_eq!(base_order.len(), degree, "base order must list every point");
        let mut chain = Self::trivial(degree, base_order);
        for g in generators {
            chain.absorb(g.clone());
        }
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        if gens.is_empty() {
            return Ok(chain);
        }
        let mut pr = ProductReplacement::new(&gens, degree, seed);
        let mut streak = 0;
        loop {
            if let Some(target) = known_order {
                let ord = chain.order_checked()?;
                if ord == target {
                    return Ok(chain);
                }
                if ord > target || streak >= 8 * RANDOM_STREAK {
                    break;
                }
            } else if streak >= RANDOM_STREAK {
                break;
            }
            let x = pr.next_element();
            if chain.absorb(x) {
                streak = 0;
            } else {
                streak += 1;
            }
        }
        chain.verify_schreier();
        let found = chain.order_checked()?;
        match known_order {
            Some(expected) if expected != found => {
                Err(GroupError::OrderMismatch { expected, found })
            }
            _ => Ok(chain),
        }
    }

    /// Rebuilds this chain with a different base order. The order is known,
    /// which certifies completeness as soon as the orbit product reaches it.
    pub fn with_base_order(&self, base_order: Vec<u32>, seed: u64) -> Self {
        let order = self.order();
        Self::build(&self.strong_gens, self.degree, Some(base_order), seed, Some(order))
            .expect("rebasing a verified chain cannot fail")
    }

    /// Assembles a chain from a base order and a strong generating set that
    /// is already known to be complete for it.
    pub fn from_strong_generators(
        degree: usize,
        base_order: Vec<u32>,
        strong_gens: Vec<Permutation>,
    ) -> Self {
        let mut chain = Self::trivial(degree, base_order);
        for g in strong_gens {
            if g.is_identity() {
                continue;
            }
            let fm = chain.first_moved_position(&g);
            chain.strong_gens.push(g);
            chain.first_moved.push(fm);
        }
        let last = chain.first_moved.iter().copied().max();
        for p in 0..degree {
            if last.is_none_or(|m| p > m) {
                break;
            }
            let gens: Vec<usize> = (0..chain.strong_gens.len())
                .filter(|&k| chain.first_moved[k] >= p)
                .collect();
            let point = chain.base_order[p];
            if gens
                .iter()
                .any(|&k| chain.strong_gens[k].image(point) != point)
            {
                let mut level = Level {
                    position: p,
                    point,
                    gens,
                    orbit: vec![point],
                    slot: vec![NONE; degree],
                    reps: vec![Permutation::identity(degree)],
                    inv_reps: vec![Permutation::identity(degree)],
                };
                level.slot[point as usize] = 0;
                chain.levels.push(level);
                let li = chain.levels.len() - 1;
                chain.extend_orbit(li, 0);
            }
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_order(&self) -> &[u32] {
        &self.base_order
    }

    pub fn position_of(&self, x: u32) -> usize {
        self.position_of[x as usize] as usize
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong_gens
    }

    /// The base: points of the nontrivial levels.
    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Group order, the product of the fundamental orbit lengths.
    pub fn order(&self) -> u128 {
        self.order_checked().expect("group order overflow")
    }

    pub fn order_checked(&self) -> Result<u128, GroupError> {
        self.levels.iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit.len() as u128)
                .ok_or(GroupError::OrderOverflow)
        })
    }

    fn first_moved_position(&self, g: &Permutation) -> usize {
        self.base_order
            .iter()
            .position(|&x| g.image(x) != x)
            .unwrap_or(self.degree)
    }

    /// Sifts `g` from level `start`; returns the residue and the index of the
    /// first level whose orbit did not contain the image (or `levels.len()`).
    pub fn sift_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        let mut scratch = Vec::with_capacity(self.degree);
        for (li, level) in self.levels.iter().enumerate().skip(start) {
            let y = h.image(level.point);
            match level.slot[y as usize] {
                NONE => return (h, li),
                k => {
                    let inv = &level.inv_reps[k as usize];
                    // h <- inv ∘ h
                    scratch.clear();
                    scratch.extend(h.images().iter().map(|&z| inv.image(z)));
                    h = Permutation::from_images_unchecked(std::mem::take(&mut scratch));
                }
            }
        }
        (h, self.levels.len())
    }

    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        self.sift_from(g, 0)
    }

    /// Membership test.
    pub fn contains(&self, g: &Permutation) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        Ok(self.sift(g).0.is_identity())
    }

    /// Sifts `g` and adds the residue as a strong generator when nontrivial.
    /// Returns whether the chain changed.
    fn absorb(&mut self, g: Permutation) -> bool {
        let (residue, _) = self.sift(&g);
        if residue.is_identity() {
            return false;
        }
        self.add_strong_generator(residue);
        true
    }

    fn add_strong_generator(&mut self, r: Permutation) {
        let p = self.first_moved_position(&r);
        debug_assert!(p < self.degree);
        let idx = self.strong_gens.len();
        self.strong_gens.push(r);
        self.first_moved.push(p);
        // Levels at or before p gain the generator.
        let mut touched = Vec::new();
        let mut has_p = false;
        for (li, level) in self.levels.iter_mut().enumerate() {
            if level.position <= p {
                level.gens.push(idx);
                touched.push((li, level.gens.len() - 1));
                if level.position == p {
                    has_p = true;
                }
            }
        }
        if !has_p {
            let point = self.base_order[p];
            let gens: Vec<usize> = (0..self.strong_gens.len())
                .filter(|&k| self.first_moved[k] >= p)
                .collect();
            let mut level = Level {
                position: p,
                point,
                gens,
                orbit: vec![point],
                slot: vec![NONE; self.degree],
                reps: vec![Permutation::identity(self.degree)],
                inv_reps: vec![Permutation::identity(self.degree)],
            };
            level.slot[point as usize] = 0;
            let insert_at = self
                .levels
                .iter()
                .position(|l| l.position > p)
                .unwrap_or(self.levels.len());
            self.levels.insert(insert_at, level);
            for t in touched.iter_mut() {
                if t.0 >= insert_at {
                    t.0 += 1;
                }
            }
            touched.push((insert_at, 0));
        }
        for (li, first_new_gen) in touched {
            self.extend_orbit(li, first_new_gen);
        }
    }

    /// Extends the orbit of level `li` after generators from `gens[first_new..]`
    /// were appended.
    fn extend_orbit(&mut self, li: usize, first_new: usize) {
        let level = &mut self.levels[li];
        let gens = &self.strong_gens;
        let old_len = level.orbit.len();
        // Old points only need the new generators; new points need all.
        let mut k = 0;
        while k < level.orbit.len() {
            let delta = level.orbit[k];
            let start = if k < old_len { first_new } else { 0 };
            for gi in start..level.gens.len() {
                let s = &gens[level.gens[gi]];
                let y = s.image(delta);
                if level.slot[y as usize] == NONE {
                    let u = s.compose(&level.reps[k]);
                    let uinv = u.inverse();
                    level.slot[y as usize] = level.orbit.len() as u32;
                    level.orbit.push(y);
                    level.reps.push(u);
                    level.inv_reps.push(uinv);
                }
            }
            k += 1;
        }
    }

    /// Deterministic completion: sifts every Schreier generator and adds
    /// nontrivial residues until none remain.
    fn verify_schreier(&mut self) {
        'restart: loop {
            for li in (0..self.levels.len()).rev() {
                let orbit_len = self.levels[li].orbit.len();
                for k in 0..orbit_len {
                    for gi in 0..self.levels[li].gens.len() {
                        let level = &self.levels[li];
                        let s = &self.strong_gens[level.gens[gi]];
                        let y = s.image(level.orbit[k]);
                        let slot = level.slot[y as usize] as usize;
                        let sch = level.inv_reps[slot].compose(&s.compose(&level.reps[k]));
                        if sch.is_identity() {
                            continue;
                        }
                        let (residue, _) = self.sift_from(&sch, li + 1);
                        if !residue.is_identity() {
                            self.add_strong_generator(residue);
                            continue 'restart;
                        }
                    }
                }
            }
            break;
        }
    }

    /// Uniformly random element: a product of random transversal elements.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let k = rng.gen_range(0..level.reps.len());
            g = g.compose(&level.reps[k]);
        }
        g
    }

    /// The unique element with the given images of the base points.
    pub fn element_from_base_images(&self, images: &[u32]) -> Option<Permutation> {
        let mut g = Permutation::identity(self.degree);
        for (level, &img) in self.levels.iter().zip(images) {
            let pre = g.inverse().image(img);
            g = g.compose(level.rep(pre)?);
        }
        Some(g)
    }

    /// Calls `f` on every group element. Intended for small groups.
    pub fn for_each_element<F: FnMut(&Permutation)>(&self, mut f: F) {
        fn rec<F: FnMut(&Permutation)>(
            chain: &StabilizerChain,
            li: usize,
            prefix: &Permutation,
            f: &mut F,
        ) {
            if li == chain.levels.len() {
                f(prefix);
                return;
            }
            for u in &chain.levels[li].reps {
                rec(chain, li + 1, &prefix.compose(u), f);
            }
        }
        rec(self, 0, &Permutation::identity(self.degree), &mut f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    fn closure(gens: &[Permutation], n: usize) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(n);
        let mut queue = vec![id.clone()];
        seen.insert(id);
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 3..=7usize {
            let cyc: Vec<u32> = (0..n as u32).collect();
            let gens = vec![
                p("(1,2)", n),
                Permutation::from_cycles(n, &[cyc]).unwrap(),
            ];
            let chain = StabilizerChain::build(&gens, n, None, 7, None).unwrap();
            let expected: u128 = (1..=n as u128).product();
            assert_eq!(chain.order(), expected);
        }
    }

    #[test]
    fn matches_brute_force_closure() {
        let n = 8;
        let gens = vec![p("(1,2,3,4)(5,6,7,8)", n), p("(1,5)(2,8)(3,7)(4,6)", n)];
        let chain = StabilizerChain::build(&gens, n, None, 1, None).unwrap();
        assert_eq!(chain.order(), closure(&gens, n).len() as u128);
    }

    #[test]
    fn a4_membership() {
        let gens = vec![p("(1,2,3)", 4), p("(1,2)(3,4)", 4)];
        let chain = StabilizerChain::build(&gens, 4, None, 3, None).unwrap();
        assert_eq!(chain.order(), 12);
        let elements = closure(&gens, 4);
        assert!(!elements.contains(&p("(1,2)", 4)));
        assert!(!chain.contains(&p("(1,2)", 4)).unwrap());
        assert!(chain.contains(&Permutation::identity(4)).unwrap());
        for g in &elements {
            assert!(chain.contains(g).unwrap());
        }
        for g in chain.strong_generators() {
            assert!(chain.contains(g).unwrap());
        }
        assert!(chain.contains(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let chain = StabilizerChain::build(&[], 4, None, 0, None).unwrap();
        assert_eq!(chain.order(), 1);
        assert!(chain.contains(&Permutation::identity(4)).unwrap());
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let gens = vec![p("(1,2)", 3), p("(1,2)", 4)];
        assert!(matches!(
            StabilizerChain::build(&gens, 3, None, 0, None),
            Err(GroupError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn rebase_keeps_order_and_honours_base_order() {
        let n = 6;
        let gens = vec![p("(1,2)", n), p("(1,2,3,4,5,6)", n)];
        let chain = StabilizerChain::build(&gens, n, None, 11, None).unwrap();
        let order: Vec<u32> = vec![5, 4, 3, 2, 1, 0];
        let re = chain.with_base_order(order.clone(), 2);
        assert_eq!(re.order(), 720);
        let positions: Vec<usize> = re.levels().iter().map(|l| l.position()).collect();
        let mut sorted = positions.clone();
        sorted.sort();
        assert_eq!(positions, sorted);
        assert_eq!(re.base_order(), &order[..]);
    }

    #[test]
    fn enumeration_visits_every_element_once() {
        let gens = vec![p("(1,2,3)", 4), p("(1,2)(3,4)", 4)];
        let chain = StabilizerChain::build(&gens, 4, None, 9, None).unwrap();
        let mut seen = HashSet::new();
        chain.for_each_element(|g| {
            assert!(seen.insert(g.clone()));
        });
        assert_eq!(seen, closure(&gens, 4));
    }

    #[test]
    fn strong_generator_assembly_matches_build() {
        let n = 5;
        let gens = vec![p("(1,2,3,4,5)", n), p("(1,2,3)", n)];
        let chain = StabilizerChain::build(&gens, n, None, 4, None).unwrap();
        let re = StabilizerChain::from_strong_generators(
            n,
            chain.base_order().to_vec(),
            chain.strong_generators().to_vec(),
        );
        assert_eq!(re.order(), 60);
    }
}
