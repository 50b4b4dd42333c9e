//! Permutations on `{0, .., n-1}` stored as dense image vectors.
//!
//! Products compose right to left: `a.compose(&b)` maps `x` to `a(b(x))`,
//! so conjugation `g ▷ s = g s g⁻¹` is [`Permutation::conjugate_by`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::PermError;

/// A bijection of `{0, .., degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijective);
            }
            seen[x] = true;
        }
        Ok(Self {
            images: images.into_boxed_slice(),
        })
    }

    /// Builds a permutation from an image sequence the caller knows is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Self {
            images: images.into_boxed_slice(),
        }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let xi = x as usize;
                if xi >= degree {
                    return Err(PermError::PointOutOfRange {
                        point: xi + 1,
                        degree,
                    });
                }
                if touched[xi] {
                    return Err(PermError::RepeatedPoint(xi + 1));
                }
                touched[xi] = true;
                images[xi] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self {
            images: images.into_boxed_slice(),
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        let images = other.images.iter().map(|&y| self.images[y as usize]).collect();
        Permutation { images }
    }

    /// In-place `self ← self ∘ other`.
    pub fn compose_assign(&mut self, other: &Permutation, scratch: &mut Vec<u32>) {
        scratch.clear();
        scratch.extend(other.images.iter().map(|&y| self.images[y as usize]));
        self.images.copy_from_slice(scratch);
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `g self g⁻¹`, which sends `g(x)` to `g(self(x))`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            out[g.images[x] as usize] = g.images[y as usize];
        }
        Permutation {
            images: out.into_boxed_slice(),
        }
    }

    /// `self^k` by binary powering; negative `k` powers the inverse.
    pub fn pow(&self, k: i64) -> Permutation {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Disjoint cycles (including fixed points), each starting at its smallest point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            out.push(cycle);
        }
        out
    }

    /// For every point, the length of its cycle.
    pub fn cycle_lengths(&self) -> Vec<u32> {
        let mut lens = vec![0u32; self.degree()];
        for cycle in self.cycles() {
            for &x in &cycle {
                lens[x as usize] = cycle.len() as u32;
            }
        }
        lens
    }

    /// Sorted multiset of cycle lengths as `(length, multiplicity)` pairs.
    pub fn cycle_type(&self) -> CycleType {
        let mut lengths: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        lengths.sort_unstable();
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for l in lengths {
            match parts.last_mut() {
                Some((len, mult)) if *len == l => *mult += 1,
                _ => parts.push((l, 1)),
            }
        }
        CycleType(parts)
    }

    /// Element order, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycle_type()
            .0
            .iter()
            .fold(1u64, |acc, &(len, _)| acc.lcm(&(len as u64)))
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| self.images[b as usize] == other.images[a as usize])
    }

    /// 1-based cycle notation, e.g. `(1,2,3)(4,5)`; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            s.push('(');
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&(x + 1).to_string());
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }

    /// Parses 1-based cycle notation on `degree` points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let cycles = parse_cycle_list(text)?;
        Self::from_cycles(degree, &cycles)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// Cycle type as sorted `(length, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(pub Vec<(u32, u32)>);

impl fmt::Display for CycleType {
    /// Compact form `1^5.2^30`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (len, mult)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{len}^{mult}")?;
        }
        Ok(())
    }
}

/// Parses `(1,2,3)(4,5)` into 0-based cycles. Whitespace is ignored.
pub fn parse_cycle_list(text: &str) -> Result<Vec<Vec<u32>>, PermError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cycles = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(PermError::Syntax(text.to_string()));
        };
        let Some(close) = body.find(')') else {
            return Err(PermError::Syntax(text.to_string()));
        };
        let inner = &body[..close];
        rest = &body[close + 1..];
        if inner.is_empty() {
            continue;
        }
        let mut cycle = Vec::new();
        for tok in inner.split(',') {
            let p: usize = tok
                .parse()
                .map_err(|_| PermError::Syntax(text.to_string()))?;
            if p == 0 {
                return Err(PermError::PointOutOfRange { point: 0, degree: 0 });
            }
            cycle.push((p - 1) as u32);
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// A parsed generator file: the declared degree and the generators in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GeneratorFile {
    /// Renders the file with an explicit `degree` line.
    pub fn render(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for g in &self.generators {
            out.push_str(&g.to_cycle_string());
            out.push('\n');
        }
        out
    }
}

impl FromStr for GeneratorFile {
    type Err = PermError;

    /// One permutation per line in 1-based cycle notation. Blank lines and `#`
    /// comments are skipped. An optional `degree <n>` line fixes the degree;
    /// otherwise it is the largest point mentioned.
    fn from_str(text: &str) -> Result<Self, PermError> {
        let mut declared: Option<usize> = None;
        let mut parsed: Vec<(usize, Vec<Vec<u32>>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("degree") {
                let d: usize = rest.trim().parse().map_err(|_| PermError::Line {
                    line: lineno + 1,
                    message: format!("bad degree declaration {line:?}"),
                })?;
                if d == 0 {
                    return Err(PermError::ZeroDegree);
                }
                declared = Some(d);
                continue;
            }
            let cycles = parse_cycle_list(line).map_err(|e| PermError::Line {
                line: lineno + 1,
                message: e.to_string(),
            })?;
            parsed.push((lineno + 1, cycles));
        }
        let max_point = parsed
            .iter()
            .flat_map(|(_, cs)| cs.iter().flatten())
            .map(|&x| x as usize + 1)
            .max()
            .unwrap_or(0);
        let degree = match declared {
            Some(d) => d,
            None if max_point > 0 => max_point,
            None => return Err(PermError::ZeroDegree),
        };
        let generators = parsed
            .into_iter()
            .map(|(line, cycles)| {
                Permutation::from_cycles(degree, &cycles).map_err(|e| PermError::Line {
                    line,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeneratorFile { degree, generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn three_cycle_squared() {
        let c = p("(1,2,3)", 3);
        assert_eq!(c.pow(2), p("(1,3,2)", 3));
        assert!(c.pow(0).is_identity());
        assert_eq!(c.pow(-1), c.inverse());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = p("(1,2)", 3);
        let b = p("(2,3)", 3);
        // a∘b: 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        assert_eq!(a.compose(&b), p("(1,2,3)", 3));
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let s = p("(1,2,3)", 4);
        let g = p("(3,4)", 4);
        assert_eq!(s.conjugate_by(&g), p("(1,2,4)", 4));
        assert_eq!(
            s.conjugate_by(&g),
            g.compose(&s).compose(&g.inverse())
        );
    }

    #[test]
    fn order_and_cycle_type() {
        let g = p("(1,2,3,4)(5,6)", 7);
        assert_eq!(g.order(), 4);
        assert_eq!(g.cycle_type().to_string(), "1^1.2^1.4^1");
        assert!(g.pow(4).is_identity());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::parse_cycles("(1,2,2)", 3).is_err());
        assert!(Permutation::parse_cycles("(1,4)", 3).is_err());
        assert!(Permutation::parse_cycles("1,2)", 3).is_err());
    }

    #[test]
    fn generator_file_parsing() {
        let text = "# S3\ndegree 3\n\n(1,2)\n(1,2,3)  # 3-cycle\n";
        let f: GeneratorFile = text.parse().unwrap();
        assert_eq!(f.degree, 3);
        assert_eq!(f.generators.len(), 2);
        let round: GeneratorFile = f.render().parse().unwrap();
        assert_eq!(round, f);
        let empty: GeneratorFile = "degree 5\n".parse().unwrap();
        assert!(empty.generators.is_empty());
        assert!("# nothing\n".parse::<GeneratorFile>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let g = p("(1,5,2)(3,4)", 6);
        assert_eq!(p(&g.to_cycle_string(), 6), g);
        assert_eq!(Permutation::identity(4).to_cycle_string(), "()");
    }
}
