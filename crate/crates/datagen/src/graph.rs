//! Simple graphs as bitset adjacency, with a randomized isomorphism search.

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<Vec<u64>>,
}

fn bit(set: &[u64], x: usize) -> bool {
    set[x / 64] >> (x % 64) & 1 == 1
}

fn count(set: &[u64]) -> u32 {
    set.iter().map(|w| w.count_ones()).sum()
}

fn members(set: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &w) in set.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            adj: vec![vec![0; words]; n],
        }
    }

    pub fn from_fn(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = Self::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if adjacent(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a][b / 64] |= 1 << (b % 64);
        self.adj[b][a / 64] |= 1 << (a % 64);
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        bit(&self.adj[a], b)
    }

    /// `(k, λ, μ)` if the graph is strongly regular.
    pub fn srg_parameters(&self) -> Option<(u32, u32, u32)> {
        let k = count(&self.adj[0]);
        let (mut lambda, mut mu) = (None, None);
        for a in 0..self.n {
            if count(&self.adj[a]) != k {
                return None;
            }
            for b in a + 1..self.n {
                let common: u32 = self.adj[a]
                    .iter()
                    .zip(&self.adj[b])
                    .map(|(x, y)| (x & y).count_ones())
                    .sum();
                let slot = if self.adjacent(a, b) { &mut lambda } else { &mut mu };
                match slot {
                    None => *slot = Some(common),
                    Some(v) if *v == common => {}
                    Some(_) => return None,
                }
            }
        }
        Some((k, lambda.unwrap_or(0), mu.unwrap_or(0)))
    }

    /// Graph obtained by switching with respect to the neighbourhood of `u`
    /// and deleting `u`; vertices keep their order.
    pub fn descendant(&self, u: usize) -> Graph {
        let others: Vec<usize> = (0..self.n).filter(|&v| v != u).collect();
        Graph::from_fn(self.n - 1, |a, b| {
            let (x, y) = (others[a], others[b]);
            self.adjacent(x, y) ^ self.adjacent(u, x) ^ self.adjacent(u, y)
        })
    }

    /// A random isomorphism `self → other` extending `fixed`, by depth-first
    /// search with candidate-set refinement. Gives up after `budget` nodes.
    pub fn random_isomorphism<R: Rng>(
        &self,
        other: &Graph,
        fixed: &[(usize, usize)],
        rng: &mut R,
        budget: usize,
    ) -> Option<Vec<usize>> {
        assert_eq!(self.n, other.n);
        let full: Vec<u64> = {
            let mut v = vec![u64::MAX; self.words];
            let extra = self.words * 64 - self.n;
            if extra > 0 {
                v[self.words - 1] >>= extra;
            }
            v
        };
        let cand = vec![full.clone(); self.n];
        let mut state = Search {
            a: self,
            b: other,
            full,
            nodes: 0,
            budget,
        };
        let mut map = vec![usize::MAX; self.n];
        let mut cand = cand;
        for &(x, y) in fixed {
            if !state.assign(&mut cand, &mut map, x, y) {
                return None;
            }
        }
        state.dfs(&mut cand, &mut map, rng)
    }
}

struct Search<'g> {
    a: &'g Graph,
    b: &'g Graph,
    full: Vec<u64>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn assign(&self, cand: &mut [Vec<u64>], map: &mut [usize], x: usize, y: usize) -> bool {
        if !bit(&cand[x], y) {
            return false;
        }
        map[x] = y;
        let ny = &self.b.adj[y];
        for v in 0..self.a.n {
            if map[v] != usize::MAX {
                continue;
            }
            let c = &mut cand[v];
            if self.a.adjacent(x, v) {
                for (w, m) in c.iter_mut().zip(ny) {
                    *w &= m;
                }
            } else {
                for ((w, m), f) in c.iter_mut().zip(ny).zip(&self.full) {
                    *w &= !m & f;
                }
            }
            c[y / 64] &= !(1 << (y % 64));
            if c.iter().all(|&w| w == 0) {
                return false;
            }
        }
        true
    }

    fn dfs<R: Rng>(&mut self, cand: &mut Vec<Vec<u64>>, map: &mut Vec<usize>, rng: &mut R) -> Option<Vec<usize>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let next = (0..self.a.n)
            .filter(|&v| map[v] == usize::MAX)
            .min_by_key(|&v| count(&cand[v]));
        let Some(v) = next else {
            return Some(map.clone());
        };
        let mut options = members(&cand[v]);
        options.shuffle(rng);
        for y in options {
            let mut c2 = cand.clone();
            let mut m2 = map.clone();
            if self.assign(&mut c2, &mut m2, v, y) {
                if let Some(found) = self.dfs(&mut c2, &mut m2, rng) {
                    return Some(found);
                }
            }
            if self.nodes > self.budget {
                return None;
            }
        }
        None
    }
}
