//! Base-image backtrack for centralizers and conjugating elements.
//!
//! Both searches look for `g` in the group with `g ∘ src = tgt ∘ g`. The
//! chain is rebased to an order that walks the cycles of `src` (longest
//! first), so once the image of a cycle's first point is chosen the rest of
//! the cycle is forced, and every point between two base points is checked as
//! soon as it is determined.

use crate::chain::StabilizerChain;
use crate::perm::Permutation;

/// Base order listing the cycles of `src`, longest first, each walked from
/// its smallest point.
pub fn adapted_base_order(src: &Permutation) -> Vec<u32> {
    let mut cycles = src.cycles();
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    cycles.into_iter().flatten().collect()
}

/// Search state shared by the centralizer and conjugacy searches.
pub struct Search<'a> {
    chain: &'a StabilizerChain,
    src: &'a Permutation,
    tgt: &'a Permutation,
    src_inv: Permutation,
    src_len: Vec<u32>,
    tgt_len: Vec<u32>,
    /// For each level: the end of the position range it determines.
    range_end: Vec<usize>,
}

impl<'a> Search<'a> {
    /// `chain` must use `adapted_base_order(src)` (any order works, but the
    /// pruning assumes cycles are contiguous).
    pub fn new(chain: &'a StabilizerChain, src: &'a Permutation, tgt: &'a Permutation) -> Self {
        let levels = chain.levels();
        let mut range_end = Vec::with_capacity(levels.len());
        for i in 0..levels.len() {
            range_end.push(
                levels
                    .get(i + 1)
                    .map(|l| l.position())
                    .unwrap_or(chain.degree()),
            );
        }
        Self {
            chain,
            src,
            tgt,
            src_inv: src.inverse(),
            src_len: src.cycle_lengths(),
            tgt_len: tgt.cycle_lengths(),
            range_end,
        }
    }

    /// Checks `h ∘ src = tgt ∘ h` on every edge `x → src(x)` whose later
    /// endpoint lies in positions `lo..hi`, the earlier one before `hi`.
    fn consistent(&self, h: &Permutation, lo: usize, hi: usize) -> bool {
        let order = self.chain.base_order();
        for &x in &order[lo..hi] {
            let y = self.src.image(x);
            if self.chain.position_of(y) < hi && h.image(y) != self.tgt.image(h.image(x)) {
                return false;
            }
            let w = self.src_inv.image(x);
            if self.chain.position_of(w) < lo && h.image(x) != self.tgt.image(h.image(w)) {
                return false;
            }
        }
        true
    }

    fn prefix_ok(&self) -> bool {
        let first = self
            .chain
            .levels()
            .first()
            .map(|l| l.position())
            .unwrap_or(self.chain.degree());
        let id = Permutation::identity(self.chain.degree());
        self.consistent(&id, 0, first)
    }

    /// Candidate images for level `li` given the prefix `h`, ascending, as
    /// (image, orbit point) pairs.
    fn candidates(&self, li: usize, h: &Permutation, h_inv: &Permutation) -> Vec<(u32, u32)> {
        let level = &self.chain.levels()[li];
        let beta = level.point();
        let pred = self.src_inv.image(beta);
        if self.chain.position_of(pred) < level.position() {
            let gamma = self.tgt.image(h.image(pred));
            let delta = h_inv.image(gamma);
            return if level.in_orbit(delta) {
                vec![(gamma, delta)]
            } else {
                Vec::new()
            };
        }
        let want = self.src_len[beta as usize];
        let mut out: Vec<(u32, u32)> = level
            .orbit()
            .iter()
            .map(|&d| (h.image(d), d))
            .filter(|&(g, _)| self.tgt_len[g as usize] == want)
            .collect();
        out.sort_unstable();
        out
    }

    fn is_cycle_start(&self, li: usize) -> bool {
        let level = &self.chain.levels()[li];
        let pred = self.src_inv.image(level.point());
        self.chain.position_of(pred) >= level.position()
    }

    fn extend(&self, li: usize, h: &Permutation) -> Option<Permutation> {
        if li == self.chain.levels().len() {
            return Some(h.clone());
        }
        let h_inv = h.inverse();
        for (_, delta) in self.candidates(li, h, &h_inv) {
            if let Some(found) = self.try_branch(li, h, delta) {
                return Some(found);
            }
        }
        None
    }

    fn try_branch(&self, li: usize, h: &Permutation, delta: u32) -> Option<Permutation> {
        let level = &self.chain.levels()[li];
        let h2 = h.compose(level.rep(delta)?);
        if !self.consistent(&h2, level.position(), self.range_end[li]) {
            return None;
        }
        self.extend(li + 1, &h2)
    }

    /// Any `g` in the group with `g ∘ src = tgt ∘ g`.
    pub fn find_any(&self) -> Option<Permutation> {
        if !self.prefix_ok() {
            return None;
        }
        let levels = self.chain.levels();
        if levels.is_empty() {
            return Some(Permutation::identity(self.chain.degree()));
        }
        let id = Permutation::identity(self.chain.degree());
        let cands = self.candidates(0, &id, &id);
        // tgt lies in the group, so tgt^k ∘ g is a solution whenever g is:
        // one image per tgt-cycle suffices at a cycle start.
        let prune = self.is_cycle_start(0);
        let mut seen_cycle = vec![false; self.chain.degree()];
        for (gamma, delta) in cands {
            if prune {
                let mut y = gamma;
                let mut minimum = gamma;
                loop {
                    y = self.tgt.image(y);
                    if y == gamma {
                        break;
                    }
                    minimum = minimum.min(y);
                }
                if seen_cycle[minimum as usize] {
                    continue;
                }
                seen_cycle[minimum as usize] = true;
            }
            if let Some(g) = self.try_branch(0, &id, delta) {
                return Some(g);
            }
        }
        None
    }
}

/// Disjoint-set forest over points with a per-root "failed" flag.
struct Orbits {
    parent: Vec<u32>,
    failed: Vec<bool>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            failed: vec![false; n],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut y = x;
        while self.parent[y as usize] != r {
            let next = self.parent[y as usize];
            self.parent[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.failed[lo as usize] |= self.failed[hi as usize];
        }
    }

    fn absorb(&mut self, g: &Permutation) {
        for x in 0..g.degree() as u32 {
            self.union(x, g.image(x));
        }
    }
}

/// Centralizer of `s` in the group of `chain`, where `chain` uses
/// `adapted_base_order(s)`. Returns a chain on the same base order whose
/// strong generators are lexicographically first solutions, so the result
/// does not depend on how `chain` was randomized.
pub fn centralizer_in_adapted(chain: &StabilizerChain, s: &Permutation) -> StabilizerChain {
    let n = chain.degree();
    let search = Search::new(chain, s, s);
    let levels = chain.levels();
    let first_moved = |g: &Permutation| -> usize {
        chain
            .base_order()
            .iter()
            .position(|&x| g.image(x) != x)
            .unwrap_or(n)
    };
    // (generator, first moved position)
    let mut gens: Vec<(Permutation, usize)> = Vec::new();
    if !s.is_identity() {
        gens.push((s.clone(), first_moved(s)));
    }
    for li in (0..levels.len()).rev() {
        let level = &levels[li];
        let pos = level.position();
        let beta = level.point();
        let mut orbits = Orbits::new(n);
        for (g, fm) in &gens {
            if *fm >= pos {
                orbits.absorb(g);
            }
        }
        let mut targets: Vec<u32> = level.orbit().to_vec();
        targets.sort_unstable();
        for gamma in targets {
            let root = orbits.find(gamma);
            if root == orbits.find(beta) || orbits.failed[root as usize] {
                continue;
            }
            let found = level.rep(gamma).and_then(|u| {
                if search.consistent(u, pos, search.range_end[li]) {
                    search.extend(li + 1, u)
                } else {
                    None
                }
            });
            match found {
                Some(g) => {
                    debug_assert!(g.commutes_with(s));
                    orbits.absorb(&g);
                    gens.push((g, pos));
                }
                None => {
                    let r = orbits.find(gamma);
                    orbits.failed[r as usize] = true;
                }
            }
        }
    }
    StabilizerChain::from_strong_generators(
        n,
        chain.base_order().to_vec(),
        gens.into_iter().map(|(g, _)| g).collect(),
    )
}

/// An element `g` of the group of `chain` with `g ∘ src ∘ g⁻¹ = tgt`, where
/// `chain` uses `adapted_base_order(src)`.
pub fn conjugating_element_in_adapted(
    chain: &StabilizerChain,
    src: &Permutation,
    tgt: &Permutation,
) -> Option<Permutation> {
    if src.cycle_type() != tgt.cycle_type() {
        return None;
    }
    let g = Search::new(chain, src, tgt).find_any()?;
    debug_assert_eq!(&src.conjugate_by(&g), tgt);
    Some(g)
}
