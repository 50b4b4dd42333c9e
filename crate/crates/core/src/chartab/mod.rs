//! Character tables: verification, canonical row order, the central scalar
//! `q_ss`, Dixon-Schneider computation and the CTX exchange format.

pub(crate) mod ctx;
mod dixon;
pub mod fp;

use std::cmp::{Ordering, Reverse};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::conj::prime_divisors;
use crate::cyclotomic::{Cyclotomic, DenseAccumulator};
use crate::error::CharTableError;

pub use dixon::{dixon_schneider, DixonConfig, DEFAULT_MAX_ORDER};

type Result<T> = std::result::Result<T, CharTableError>;

/// Class metadata carried by a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMeta {
    pub order: u64,
    pub size: u128,
    /// `(p, class of g^p)` for each prime `p` dividing the exponent, ascending.
    pub powers: Vec<(u64, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    Ingested,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    label: String,
    order: u128,
    classes: Vec<ClassMeta>,
    irr: Vec<Vec<Cyclotomic>>,
    provenance: Provenance,
}

/// Equality of the mathematical content; provenance is ignored.
impl PartialEq for CharacterTable {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.order == other.order
            && self.classes == other.classes
            && self.irr == other.irr
    }
}

impl Eq for CharacterTable {}

fn invariant(msg: impl Into<String>) -> CharTableError {
    CharTableError::Invariant(msg.into())
}

/// Sort key for a value: conductor, then terms with larger coefficients
/// first, so the trivial character leads among linear characters.
fn value_key(c: &Cyclotomic) -> (u64, Vec<(u64, Reverse<BigRational>)>) {
    (
        c.conductor(),
        c.terms().iter().map(|(k, v)| (*k, Reverse(v.clone()))).collect(),
    )
}

fn row_cmp(a: &[Cyclotomic], b: &[Cyclotomic]) -> Ordering {
    let deg = |r: &[Cyclotomic]| r[0].to_rational().expect("degrees are rational");
    deg(a).cmp(&deg(b)).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| value_key(x).cmp(&value_key(y)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

impl CharacterTable {
    /// Builds a table, sorting characters canonically and verifying every
    /// invariant.
    pub fn new(
        label: impl Into<String>,
        order: u128,
        classes: Vec<ClassMeta>,
        mut irr: Vec<Vec<Cyclotomic>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let k = classes.len();
        if k == 0 {
            return Err(invariant("a table needs at least one class"));
        }
        if irr.len() != k || irr.iter().any(|r| r.len() != k) {
            return Err(invariant(format!("table is not square: {} characters, {k} classes", irr.len())));
        }
        if irr.iter().any(|r| r[0].to_rational().is_none()) {
            return Err(invariant("a degree is not rational"));
        }
        irr.sort_by(|a, b| row_cmp(a, b));
        let table = Self {
            label: label.into(),
            order,
            classes,
            irr,
            provenance,
        };
        table.verify()?;
        Ok(table)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn classes(&self) -> &[ClassMeta] {
        &self.classes
    }

    /// Number of classes, which equals the number of characters.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn irreducibles(&self) -> &[Vec<Cyclotomic>] {
        &self.irr
    }

    pub fn value(&self, character: usize, class: usize) -> &Cyclotomic {
        &self.irr[character][class]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irr
            .iter()
            .map(|r| r[0].to_rational().unwrap().to_integer().to_u64().unwrap())
            .collect()
    }

    pub fn exponent(&self) -> u64 {
        self.classes.iter().fold(1, |a, c| a.lcm(&c.order))
    }

    /// Least common multiple of the conductors of all values.
    pub fn conductor(&self) -> u64 {
        self.irr
            .iter()
            .flatten()
            .fold(1, |a, v| a.lcm(&v.conductor()))
    }

    /// First class of size 1 with the given element order.
    pub fn central_class(&self, order: u64) -> Option<usize> {
        self.classes.iter().position(|c| c.size == 1 && c.order == order)
    }

    /// `q = χ_j(s)/χ_j(1)` for a central class; checks `|χ(s)|² = χ(1)²` and
    /// `q^{ord(s)} = 1`.
    pub fn scalar_q(&self, character: usize, class: usize) -> Result<Cyclotomic> {
        let v = &self.irr[character][class];
        let d = &self.irr[character][0];
        if &(v * &v.conj()) != &(d * d) {
            return Err(CharTableError::NotScalar { class, character });
        }
        let q = v.scale(&d.to_rational().unwrap().recip());
        if !q.pow(self.classes[class].order).is_one() {
            return Err(invariant(format!(
                "q for character {character} at class {class} is not a root of unity of order dividing {}",
                self.classes[class].order
            )));
        }
        Ok(q)
    }

    pub fn to_ctx(&self) -> String {
        ctx::render(self)
    }

    pub fn from_ctx(text: &str) -> Result<Self> {
        ctx::parse(text)
    }

    /// Reads and verifies a CTX file.
    pub fn ingest(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CharTableError::Syntax {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::from_ctx(&text)
    }

    /// The row of `self` equal to a space-separated list of CTX values over
    /// the table's conductor.
    pub fn find_character(&self, row: &str) -> Result<usize> {
        let n = self.conductor();
        let vals = row
            .split_whitespace()
            .map(|v| ctx::parse_value(1, v, n))
            .collect::<Result<Vec<_>>>()?;
        self.irr.iter().position(|r| *r == vals).ok_or_else(|| {
            invariant(format!("no irreducible character has the values {row:?}"))
        })
    }

    pub fn export(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_ctx())
    }

    /// Checks class metadata, degrees, power maps, integrality and both
    /// orthogonality relations, all exactly.
    pub fn verify(&self) -> Result<()> {
        let k = self.len();
        let g = self.order;
        let c0 = &self.classes[0];
        if c0.order != 1 || c0.size != 1 {
            return Err(invariant("class 1 is not the identity class"));
        }
        let total: u128 = self.classes.iter().map(|c| c.size).sum();
        if total != g {
            return Err(invariant(format!("class sizes sum to {total}, not |G| = {g}")));
        }
        for (i, c) in self.classes.iter().enumerate() {
            if c.size == 0 || g % c.size != 0 {
                return Err(invariant(format!("class {} size {} does not divide |G|", i + 1, c.size)));
            }
            if c.order == 0 || g % c.order as u128 != 0 {
                return Err(invariant(format!("class {} element order {} does not divide |G|", i + 1, c.order)));
            }
        }
        for (j, row) in self.irr.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if !v.is_integral() {
                    return Err(invariant(format!("character {} at class {} is not an algebraic integer", j + 1, i + 1)));
                }
                if self.classes[i].order % v.conductor() != 0 {
                    return Err(invariant(format!(
                        "character {} at class {} has conductor {} not dividing the element order",
                        j + 1,
                        i + 1,
                        v.conductor()
                    )));
                }
            }
        }
        self.verify_power_maps()?;
        let mut deg_sq = 0u128;
        for (j, row) in self.irr.iter().enumerate() {
            let d = row[0].to_rational().unwrap();
            if !d.is_integer() || d <= BigRational::from_integer(BigInt::from(0)) {
                return Err(invariant(format!("degree of character {} is not a positive integer", j + 1)));
            }
            let d = d.to_integer().to_u128().unwrap();
            if g % d != 0 {
                return Err(invariant(format!("degree {d} does not divide |G|")));
            }
            deg_sq += d * d;
        }
        if deg_sq != g {
            return Err(invariant(format!("sum of squared degrees is {deg_sq}, not |G| = {g}")));
        }
        let n = self.conductor();
        let lifted: Vec<Vec<Vec<(usize, i64)>>> = self
            .irr
            .iter()
            .map(|r| r.iter().map(|v| v.integral_terms(n).expect("integral")).collect())
            .collect();
        let mut acc = DenseAccumulator::new(n);
        for a in 0..k {
            for b in a..k {
                acc.clear();
                for (r, c) in self.classes.iter().enumerate() {
                    acc.add_product_conj(c.size as i128, &lifted[a][r], &lifted[b][r]);
                }
                let expect = if a == b { g as i128 } else { 0 };
                if acc.integer_value() != Some(expect) {
                    return Err(invariant(format!(
                        "first orthogonality fails for characters {} and {}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        for r in 0..k {
            for s in r..k {
                acc.clear();
                for row in &lifted {
                    acc.add_product_conj(1, &row[r], &row[s]);
                }
                let expect = if r == s { (g / self.classes[r].size) as i128 } else { 0 };
                if acc.integer_value() != Some(expect) {
                    return Err(invariant(format!("second orthogonality fails for classes {} and {}", r + 1, s + 1)));
                }
            }
        }
        self.verify_adams(&lifted, &mut acc)
    }

    fn verify_power_maps(&self) -> Result<()> {
        let primes = prime_divisors(self.exponent());
        for (i, c) in self.classes.iter().enumerate() {
            let listed: Vec<u64> = c.powers.iter().map(|&(p, _)| p).collect();
            if listed != primes {
                return Err(invariant(format!(
                    "class {} lists power maps for primes {listed:?}, expected {primes:?}",
                    i + 1
                )));
            }
            for &(p, t) in &c.powers {
                let Some(target) = self.classes.get(t) else {
                    return Err(invariant(format!("class {} pow{p} points outside the table", i + 1)));
                };
                let expect = c.order / c.order.gcd(&p);
                if target.order != expect {
                    return Err(invariant(format!(
                        "pow{p} of class {} has order {}, expected {expect}",
                        i + 1,
                        target.order
                    )));
                }
                if c.order % p != 0 {
                    if target.size != c.size {
                        return Err(invariant(format!("pow{p} of class {} changes the class size", i + 1)));
                    }
                    for (j, row) in self.irr.iter().enumerate() {
                        if row[t] != row[i].galois(p as i64) {
                            return Err(invariant(format!(
                                "pow{p} of class {} is not a Galois image for character {}",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// For each prime `p` dividing the exponent, `g ↦ χ(g^p)` must be a
    /// virtual character: its inner product with every irreducible is an
    /// integer.
    fn verify_adams(&self, lifted: &[Vec<Vec<(usize, i64)>>], acc: &mut DenseAccumulator) -> Result<()> {
        let g = self.order as i128;
        for (pi, &p) in prime_divisors(self.exponent()).iter().enumerate() {
            for (a, row_a) in lifted.iter().enumerate() {
                for (b, row_b) in lifted.iter().enumerate() {
                    acc.clear();
                    for (r, c) in self.classes.iter().enumerate() {
                        let pr = c.powers[pi].1;
                        acc.add_product_conj(c.size as i128, &row_a[pr], &row_b[r]);
                    }
                    match acc.integer_value() {
                        Some(v) if v % g == 0 => {}
                        _ => {
                            return Err(invariant(format!(
                                "power map {p} is incoherent: character {} composed with it has a non-integral multiplicity of character {}",
                                a + 1,
                                b + 1
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The same table with one value replaced, bypassing verification; for
    /// mutation tests.
    pub fn with_value_unchecked(&self, character: usize, class: usize, v: Cyclotomic) -> Self {
        let mut t = self.clone();
        t.irr[character][class] = v;
        t
    }
}
