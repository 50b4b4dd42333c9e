//! Irreducible representations of a centralizer.
//!
//! Degree-one representations come straight from a character table. Higher
//! degrees need explicit matrices for a generating set, read from a REP file:
//!
//! ```text
//! %REP 1
//! dimension <d>
//! conductor <N>
//! gen <cycles>
//! <d lines of d values>
//! gen <cycles>
//! ...
//! ```
//!
//! Values use the CTX grammar over ℚ(ζ_N).

use std::collections::HashMap;

use crate::chartab::ctx::{parse_int, parse_value, syntax, Lines};
use crate::chartab::CharacterTable;
use crate::conj::ClassTable;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Result, YdError};
use crate::group::GroupHandle;
use crate::perm::Permutation;

pub type Matrix = Vec<Vec<Cyclotomic>>;

/// Largest centralizer whose matrix images are tabulated.
pub const MAX_TABULATED_ORDER: u128 = 200_000;

pub fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(Cyclotomic::zero(), |acc, t| {
                        if a[i][t].is_zero() || b[t][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][t] * &b[t][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Rank by Gaussian elimination over the cyclotomic field.
pub fn rank(mut rows: Matrix) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        let pivot: Vec<Cyclotomic> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

pub fn is_invertible(m: &Matrix) -> bool {
    rank(m.clone()) == m.len()
}

#[derive(Clone, Debug)]
enum Kind {
    Linear {
        classes: ClassTable,
        table: CharacterTable,
        character: usize,
        /// Values on every element, when the centralizer is small enough.
        values: Option<HashMap<Permutation, Cyclotomic>>,
    },
    Matrices {
        generators: Vec<(Permutation, Matrix)>,
        images: HashMap<Permutation, Matrix>,
    },
}

/// An irreducible representation `ρ` of the centralizer `G^s`.
#[derive(Clone, Debug)]
pub struct Representation {
    dimension: usize,
    kind: Kind,
}

impl Representation {
    /// The linear character `character` of a centralizer table.
    pub fn linear(classes: ClassTable, table: CharacterTable, character: usize) -> Result<Self> {
        if table.order() != classes.group().order() || table.len() != classes.len() {
            return Err(YdError::Representation("table does not belong to this centralizer".into()).into());
        }
        let degree = table
            .degrees()
            .get(character)
            .copied()
            .ok_or_else(|| YdError::Representation(format!("no character {character}")))?;
        if degree != 1 {
            return Err(YdError::Representation(format!(
                "character {character} has degree {degree}; supply explicit matrices"
            ))
            .into());
        }
        let values = (classes.group().order() <= MAX_TABULATED_ORDER).then(|| {
            let mut values = HashMap::new();
            classes.group().chain().for_each_element(|x| {
                let v = table.value(character, classes.class_of_member(x)).clone();
                values.insert(x.clone(), v);
            });
            values
        });
        Ok(Self {
            dimension: 1,
            kind: Kind::Linear {
                classes,
                table,
                character,
                values,
            },
        })
    }

    /// Matrices for a generating set of `centralizer`. Images of every
    /// element are tabulated along the Cayley graph; two paths reaching the
    /// same element with different matrices mean a violated relation.
    pub fn from_matrices(centralizer: &GroupHandle, generators: Vec<(Permutation, Matrix)>) -> Result<Self> {
        let order = centralizer.order();
        if order > MAX_TABULATED_ORDER {
            return Err(YdError::Representation(format!(
                "centralizer of order {order} is above the tabulation limit {MAX_TABULATED_ORDER}"
            ))
            .into());
        }
        let d = generators.first().map_or(0, |(_, m)| m.len());
        if d == 0 {
            return Err(YdError::Representation("no generators".into()).into());
        }
        for (g, m) in &generators {
            if m.len() != d || m.iter().any(|r| r.len() != d) {
                return Err(YdError::Representation(format!("matrix for {g} is not {d}x{d}")).into());
            }
            if !centralizer.contains(g)? {
                return Err(YdError::NotInCentralizer.into());
            }
        }
        let id = Permutation::identity(centralizer.degree());
        let mut images = HashMap::new();
        images.insert(id.clone(), identity(d));
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            let mx = images[&x].clone();
            for (g, mg) in &generators {
                let y = g.compose(&x);
                let my = mat_mul(mg, &mx);
                match images.get(&y) {
                    Some(old) if *old != my => {
                        return Err(YdError::Representation(format!(
                            "relations violated: two words for {y} give different matrices"
                        ))
                        .into())
                    }
                    Some(_) => {}
                    None => {
                        images.insert(y.clone(), my);
                        queue.push(y);
                    }
                }
            }
        }
        if images.len() as u128 != order {
            return Err(YdError::Representation(format!(
                "generators span a subgroup of order {}, not the centralizer of order {order}",
                images.len()
            ))
            .into());
        }
        Ok(Self {
            dimension: d,
            kind: Kind::Matrices { generators, images },
        })
    }

    /// Reads a REP file for a centralizer acting on `centralizer.degree()`
    /// points.
    pub fn parse(text: &str, centralizer: &GroupHandle) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (line, header) = lines.next("header")?;
        if header != "%REP 1" {
            return Err(syntax(line, "expected header `%REP 1`").into());
        }
        let (line, d) = lines.keyword("dimension")?;
        let d: usize = parse_int(line, d, "dimension")?;
        let (line, n) = lines.keyword("conductor")?;
        let n: u64 = parse_int(line, n, "conductor")?;
        if d == 0 || n == 0 {
            return Err(syntax(line, "dimension and conductor must be positive").into());
        }
        let mut generators = Vec::new();
        while lines.pos < lines.lines.len() {
            let (line, cycles) = lines.keyword("gen")?;
            let g = Permutation::parse_cycles(cycles, centralizer.degree())
                .map_err(|e| syntax(line, e.to_string()))?;
            let mut m = Vec::with_capacity(d);
            for _ in 0..d {
                let (line, row) = lines.next("a matrix row")?;
                let vals = row
                    .split(' ')
                    .map(|v| parse_value(line, v, n))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                if vals.len() != d {
                    return Err(syntax(line, format!("expected {d} values, found {}", vals.len())).into());
                }
                m.push(vals);
            }
            generators.push((g, m));
        }
        Self::from_matrices(centralizer, generators)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Generators with their matrices; empty for degree-one representations.
    pub fn generators(&self) -> &[(Permutation, Matrix)] {
        match &self.kind {
            Kind::Linear { .. } => &[],
            Kind::Matrices { generators, .. } => generators,
        }
    }

    /// `ρ(γ)` for `γ` in the centralizer.
    pub fn image(&self, gamma: &Permutation) -> Result<Matrix> {
        match &self.kind {
            Kind::Linear {
                values: Some(values), ..
            } => values
                .get(gamma)
                .map(|v| vec![vec![v.clone()]])
                .ok_or_else(|| YdError::NotInCentralizer.into()),
            Kind::Linear {
                classes,
                table,
                character,
                values: None,
            } => {
                let c = classes.class_of(gamma).map_err(|_| YdError::NotInCentralizer)?;
                Ok(vec![vec![table.value(*character, c).clone()]])
            }
            Kind::Matrices { images, .. } => images.get(gamma).cloned().ok_or_else(|| YdError::NotInCentralizer.into()),
        }
    }

    /// The scalar `q` with `ρ(s) = q·id`.
    pub fn central_scalar(&self, s: &Permutation) -> Result<Cyclotomic> {
        let m = self.image(s)?;
        let q = m[0][0].clone();
        let scalar = m
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { *x == q } else { x.is_zero() }));
        if !scalar {
            return Err(YdError::Representation("ρ(s) is not a scalar matrix".into()).into());
        }
        Ok(q)
    }

    /// Whether only scalars commute with every `ρ(g)`, i.e. `ρ` is
    /// irreducible.
    pub fn is_irreducible(&self) -> bool {
        let d = self.dimension;
        if d == 1 {
            return true;
        }
        // Unknown X indexed x[a][b] ↦ a*d + b; rows of X ρ(g) − ρ(g) X.
        let mut rows: Matrix = Vec::new();
        for (_, m) in self.generators() {
            for a in 0..d {
                for b in 0..d {
                    let mut row = vec![Cyclotomic::zero(); d * d];
                    for t in 0..d {
                        row[a * d + t] = &row[a * d + t] + &m[t][b];
                        row[t * d + b] = &row[t * d + b] - &m[a][t];
                    }
                    rows.push(row);
                }
            }
        }
        d * d - rank(rows) == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d4() -> GroupHandle {
        let gens = ["(1,2)", "(1,3)(2,4)"].iter().map(|g| Permutation::parse_cycles(g, 4).unwrap()).collect();
        GroupHandle::new("d4", gens, 4, 1).unwrap()
    }

    const D4_REP: &str = "%REP 1\ndimension 2\nconductor 1\ngen (1,2)\n1 0\n0 -1\ngen (1,3)(2,4)\n0 1\n1 0\n";

    #[test]
    fn dihedral_two_dimensional() {
        let g = d4();
        let rho = Representation::parse(D4_REP, &g).unwrap();
        assert_eq!(rho.dimension(), 2);
        assert!(rho.is_irreducible());
        let s = Permutation::parse_cycles("(1,2)(3,4)", 4).unwrap();
        assert_eq!(rho.central_scalar(&s).unwrap(), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn violated_relation_is_caught() {
        let bad = D4_REP.replace("0 1\n1 0", "0 1\n-1 0");
        let err = Representation::parse(&bad, &d4()).unwrap_err();
        assert!(err.to_string().contains("relations violated"), "{err}");
    }

    #[test]
    fn reducible_is_detected() {
        let diag = "%REP 1\ndimension 2\nconductor 1\ngen (1,2)\n1 0\n0 -1\ngen (1,3)(2,4)\n1 0\n0 1\n";
        // A sum of two linear characters.
        assert!(!Representation::parse(diag, &d4()).unwrap().is_irreducible());
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let bad = D4_REP.replace("0 -1", "0 x");
        let err = Representation::parse(&bad, &d4()).unwrap_err();
        assert!(err.to_string().contains("line 6"), "{err}");
    }

    #[test]
    fn rank_of_singular_matrix() {
        let m: Matrix = vec![
            vec![Cyclotomic::one(), Cyclotomic::zeta(3)],
            vec![Cyclotomic::zeta(3), Cyclotomic::zeta(3).pow(2)],
        ];
        assert_eq!(rank(m), 1);
        assert!(is_invertible(&identity(3)));
    }
}
