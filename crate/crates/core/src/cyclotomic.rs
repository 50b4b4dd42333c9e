//! Exact arithmetic in cyclotomic fields.
//!
//! An element of ℚ(ζ_N) is stored in the Zumbroich basis of its smallest
//! cyclotomic field, so structural equality is field equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u64,
    /// Nonzero coefficients by exponent, ascending.
    terms: Vec<(u64, BigRational)>,
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    assert_eq!(g, 1, "{a} is not invertible modulo {m}");
    x.rem_euclid(m as i128) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

type Terms = BTreeMap<u64, BigRational>;

fn add_term(map: &mut Terms, k: u64, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Rewrites `terms` (exponents mod `n`) into the Zumbroich basis of ℚ(ζ_n).
fn zumbroich(n: u64, terms: Terms) -> Terms {
    let mut terms = terms;
    for (q, f) in factorize(n) {
        let qf = q.pow(f);
        let minv = mod_inverse((n / qf) % qf, qf);
        let top = q.pow(f - 1);
        let step = n / q;
        let a_of = |k: u64| (k % qf) * minv % qf;
        let mut out = Terms::new();
        for (k, c) in terms {
            let a = a_of(k);
            if q == 2 {
                if a >= top {
                    add_term(&mut out, (k + step) % n, -c);
                } else {
                    add_term(&mut out, k, c);
                }
            } else if a < top {
                for t in 1..q {
                    add_term(&mut out, (k + t * step) % n, -c.clone());
                }
            } else {
                add_term(&mut out, k, c);
            }
        }
        terms = out;
    }
    terms
}

/// Tries to express a Zumbroich-reduced element of ℚ(ζ_n) over a smaller
/// cyclotomic field; returns the new conductor and terms.
fn descend(n: u64, terms: &Terms) -> Option<(u64, Terms)> {
    if terms.is_empty() {
        return (n != 1).then(|| (1, Terms::new()));
    }
    for (p, e) in factorize(n) {
        if e >= 2 || p == 2 {
            // p² | n, or 2 ∥ n where every basis exponent is even.
            if terms.keys().all(|k| k % p == 0) {
                let m = n / p;
                return Some((m, terms.iter().map(|(k, c)| (k / p, c.clone())).collect()));
            }
            continue;
        }
        // p ∥ n with p odd: the p-component must cover 1..p-1 uniformly.
        let m = n / p;
        let minv = mod_inverse(m % p, p);
        let mut groups: BTreeMap<u64, Vec<(u64, &BigRational)>> = BTreeMap::new();
        for (k, c) in terms {
            let a = (k % p) * minv % p;
            let k0 = (k + n - (a * m) % n) % n;
            groups.entry(k0).or_default().push((a, c));
        }
        let ok = groups.values().all(|g| {
            g.len() as u64 == p - 1 && g.iter().all(|(_, c)| *c == g[0].1)
        });
        if ok {
            let mut out = Terms::new();
            for (k0, g) in groups {
                add_term(&mut out, k0 / p, -g[0].1.clone());
            }
            return Some((m, zumbroich(m, out)));
        }
    }
    None
}

fn normalize(n: u64, terms: Terms) -> Cyclotomic {
    let mut n = n;
    let mut terms = zumbroich(n, terms);
    while let Some((m, t)) = descend(n, &terms) {
        n = m;
        terms = t;
    }
    if terms.is_empty() {
        n = 1;
    }
    Cyclotomic {
        n,
        terms: terms.into_iter().collect(),
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self { n: 1, terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Self { n: 1, terms: vec![(0, r)] }
        }
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n > 0);
        let k = k.rem_euclid(n as i64) as u64;
        let mut t = Terms::new();
        t.insert(k, BigRational::one());
        normalize(n, t)
    }

    /// ζ_n, the GAP-style `E(n)`.
    pub fn zeta(n: u64) -> Self {
        Self::root_of_unity(n, 1)
    }

    /// Element of ℚ(ζ_n) from arbitrary `(exponent, coefficient)` pairs.
    pub fn from_terms(n: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut t = Terms::new();
        for (k, c) in terms {
            add_term(&mut t, k % n, c);
        }
        normalize(n, t)
    }

    /// Smallest `n` with the element in ℚ(ζ_n).
    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match (self.n, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(0, c)]) => Some(c.clone()),
            _ => None,
        }
    }

    /// Whether every coefficient is an integer (an algebraic integer, since
    /// the Zumbroich basis is integral).
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Exponents lifted to ℚ(ζ_m) (`conductor | m`), without re-reduction.
    fn lifted(&self, m: u64) -> impl Iterator<Item = (u64, &BigRational)> {
        let f = m / self.n;
        assert_eq!(self.n * f, m, "conductor {} does not divide {m}", self.n);
        self.terms.iter().map(move |(k, c)| ((k * f) % m, c))
    }

    /// Coefficients in the Zumbroich basis of ℚ(ζ_m) for a multiple `m` of
    /// the conductor.
    pub fn terms_in(&self, m: u64) -> Vec<(u64, BigRational)> {
        let mut t = Terms::new();
        for (k, c) in self.lifted(m) {
            add_term(&mut t, k, c.clone());
        }
        zumbroich(m, t).into_iter().collect()
    }

    /// Integer coefficients on exponents mod `m` (not reduced), if integral.
    pub fn integral_terms(&self, m: u64) -> Option<Vec<(usize, i64)>> {
        self.lifted(m)
            .map(|(k, c)| {
                if c.is_integer() {
                    c.to_integer().to_i64().map(|v| (k as usize, v))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Image under the Galois automorphism ζ ↦ ζ^j, `gcd(j, conductor) = 1`.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.n;
        let j = j.rem_euclid(n as i64) as u64;
        assert!(n == 1 || j.gcd(&n) == 1, "exponent must be a unit modulo the conductor");
        let mut t = Terms::new();
        for (k, c) in &self.terms {
            add_term(&mut t, (k * j) % n, c.clone());
        }
        normalize(n, t)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse via the product of the nontrivial Galois
    /// conjugates divided by the norm.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.to_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let n = self.n;
        let mut prod = Self::one();
        for j in 2..n {
            if j.gcd(&n) == 1 {
                prod = &prod * &self.galois(j as i64);
            }
        }
        let norm = (&prod * self).to_rational().expect("the norm is rational");
        Some(prod.scale(&norm.recip()))
    }

    /// Smallest `m ≥ 1` with `self^m = 1`, or `None` when the element is not
    /// a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = lcm(2, self.n);
        if !self.pow(bound).is_one() {
            return None;
        }
        let mut divisors: Vec<u64> = (1..=bound).filter(|d| bound % d == 0).collect();
        divisors.sort_unstable();
        divisors.into_iter().find(|&d| self.pow(d).is_one())
    }

    /// Text form used by the exchange format, in the basis of ℚ(ζ_m).
    pub fn to_ctx_string(&self, m: u64) -> String {
        if let Some(r) = self.to_rational() {
            return rational_string(&r);
        }
        let parts: Vec<String> = self
            .terms_in(m)
            .iter()
            .map(|(k, c)| format!("{k}:{}", rational_string(c)))
            .collect();
        format!("[{}]", parts.join(","))
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let m = lcm(self.n, other.n);
        let mut t = Terms::new();
        for (k, c) in self.lifted(m) {
            add_term(&mut t, k, c.clone());
        }
        for (k, c) in other.lifted(m) {
            add_term(&mut t, k, if sign { c.clone() } else { -c.clone() });
        }
        normalize(m, t)
    }
}

pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, true)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, false)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(r) = self.to_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.to_rational() {
            return self.scale(&r);
        }
        let m = lcm(self.n, rhs.n);
        let mut t = Terms::new();
        for (k1, c1) in self.lifted(m) {
            for (k2, c2) in rhs.lifted(m) {
                add_term(&mut t, (k1 + k2) % m, c1 * c2);
            }
        }
        normalize(m, t)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

/// GAP-like notation: `E(n)^k` terms with rational coefficients.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", rational_string(&r));
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            if !abs.is_one() {
                write!(f, "{}*", rational_string(&abs))?;
            }
            if *k == 0 {
                write!(f, "1")?;
            } else if *k == 1 {
                write!(f, "E({})", self.n)?;
            } else {
                write!(f, "E({})^{k}", self.n)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sums of products of integral cyclotomics in ℤ[x]/(x^m − 1), reduced to the
/// Zumbroich basis of ℚ(ζ_m) only once at the end.
#[derive(Clone)]
pub struct DenseAccumulator {
    m: u64,
    coeffs: Vec<i128>,
    /// Per prime: disallowed exponents, the step `m/q`, and the number of
    /// replacement terms.
    plan: Vec<(Vec<usize>, usize, usize)>,
    /// Coordinates of 1 in the Zumbroich basis of ℚ(ζ_m), and a position
    /// where it is nonzero.
    unit: Vec<i128>,
    unit_pos: usize,
}

impl DenseAccumulator {
    pub fn new(m: u64) -> Self {
        let mut plan = Vec::new();
        for (q, f) in factorize(m) {
            let qf = q.pow(f);
            let minv = mod_inverse((m / qf) % qf, qf);
            let top = q.pow(f - 1);
            let bad: Vec<usize> = (0..m)
                .filter(|k| {
                    let a = (k % qf) * minv % qf;
                    if q == 2 {
                        a >= top
                    } else {
                        a < top
                    }
                })
                .map(|k| k as usize)
                .collect();
            let reps = if q == 2 { 1 } else { q as usize - 1 };
            plan.push((bad, (m / q) as usize, reps));
        }
        let mut acc = Self {
            m,
            coeffs: vec![0; m as usize],
            plan,
            unit: Vec::new(),
            unit_pos: 0,
        };
        acc.coeffs[0] = 1;
        acc.reduce();
        acc.unit = std::mem::replace(&mut acc.coeffs, vec![0; m as usize]);
        acc.unit_pos = acc.unit.iter().position(|&c| c != 0).expect("1 is nonzero");
        acc
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn clear(&mut self) {
        self.coeffs.iter_mut().for_each(|c| *c = 0);
    }

    /// Adds `scale · a · b` given integral lifted terms of `a` and `b`.
    pub fn add_product(&mut self, scale: i128, a: &[(usize, i64)], b: &[(usize, i64)]) {
        let m = self.m as usize;
        for &(ka, ca) in a {
            let s = scale * ca as i128;
            for &(kb, cb) in b {
                let mut k = ka + kb;
                if k >= m {
                    k -= m;
                }
                self.coeffs[k] += s * cb as i128;
            }
        }
    }

    /// Adds `scale · a · conj(b)`.
    pub fn add_product_conj(&mut self, scale: i128, a: &[(usize, i64)], b: &[(usize, i64)]) {
        let m = self.m as usize;
        for &(ka, ca) in a {
            let s = scale * ca as i128;
            for &(kb, cb) in b {
                let k = (ka + m - kb) % m;
                self.coeffs[k] += s * cb as i128;
            }
        }
    }

    fn reduce(&mut self) {
        let m = self.m as usize;
        for (bad, step, reps) in &self.plan {
            for &k in bad {
                let c = std::mem::take(&mut self.coeffs[k]);
                if c != 0 {
                    for t in 1..=*reps {
                        self.coeffs[(k + t * step) % m] -= c;
                    }
                }
            }
        }
    }

    /// The accumulated value if it is a rational integer.
    pub fn integer_value(&mut self) -> Option<i128> {
        self.reduce();
        let c = self.coeffs[self.unit_pos] * self.unit[self.unit_pos];
        self.coeffs
            .iter()
            .zip(&self.unit)
            .all(|(&x, &u)| x == c * u)
            .then_some(c)
    }

    pub fn finish(&self) -> Cyclotomic {
        Cyclotomic::from_terms(
            self.m,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (k as u64, BigRational::from_integer(BigInt::from(c)))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: u64) -> Cyclotomic {
        Cyclotomic::zeta(n)
    }

    #[test]
    fn small_identities() {
        let z3 = e(3);
        assert_eq!(&z3 + &z3.pow(2), Cyclotomic::from_integer(-1));
        assert_eq!(&e(4) * &e(4), Cyclotomic::from_integer(-1));
        let z5 = e(5);
        let s = (0..5).fold(Cyclotomic::zero(), |acc, k| &acc + &z5.pow(k));
        assert!(s.is_zero());
    }

    #[test]
    fn conductor_is_minimal() {
        assert_eq!(e(6).conductor(), 3); // ζ₆ = -ζ₃²
        assert_eq!(e(2), Cyclotomic::from_integer(-1));
        assert_eq!(e(12).pow(4).conductor(), 3);
        assert_eq!((&e(9).pow(3) + &e(9).pow(6)).conductor(), 1);
        let sqrt5 = &(&e(5) - &e(5).pow(2)) - &(&e(5).pow(3) - &e(5).pow(4));
        assert_eq!((&sqrt5 * &sqrt5), Cyclotomic::from_integer(5));
        assert_eq!(e(15).pow(5), e(3));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Cyclotomic::from_integer(-1).root_of_unity_order(), Some(2));
        assert_eq!(Cyclotomic::one().root_of_unity_order(), Some(1));
        assert_eq!(e(3).root_of_unity_order(), Some(3));
        assert_eq!(e(6).root_of_unity_order(), Some(6));
        assert_eq!((-&e(3)).root_of_unity_order(), Some(6));
        // 1 + ζ₃ = -ζ₃² is a primitive sixth root of unity.
        assert_eq!((&Cyclotomic::one() + &e(3)).root_of_unity_order(), Some(6));
        assert_eq!((&Cyclotomic::one() + &e(4)).root_of_unity_order(), None);
        assert_eq!(Cyclotomic::from_integer(2).root_of_unity_order(), None);
        assert_eq!(Cyclotomic::zero().root_of_unity_order(), None);
    }

    #[test]
    fn inverse_and_galois() {
        let x = &Cyclotomic::from_integer(2) + &e(7);
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(e(5).galois(2), e(5).pow(2));
        assert_eq!(e(8).conj(), e(8).pow(7));
    }

    #[test]
    fn ctx_strings() {
        assert_eq!(Cyclotomic::from_integer(-3).to_ctx_string(12), "-3");
        assert_eq!(e(4).to_ctx_string(4), "[1:1]");
        // ζ₁₂³ is not a basis element of ℚ(ζ₁₂).
        assert_eq!(e(4).to_ctx_string(12), "[7:-1,11:-1]");
        assert_eq!(e(3).to_string(), "E(3)");
    }

    fn arb() -> impl Strategy<Value = Cyclotomic> {
        let ns = prop::sample::select(vec![1u64, 3, 4, 5, 8, 9, 12, 15]);
        (ns, prop::collection::vec((0u64..60, -3i64..4), 0..5)).prop_map(|(n, ts)| {
            Cyclotomic::from_terms(
                n,
                ts.into_iter()
                    .map(|(k, c)| (k, BigRational::from_integer(BigInt::from(c)))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conjugation_is_multiplicative(a in arb(), b in arb()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn dense_accumulator_agrees(a in arb(), b in arb()) {
            let m = 360;
            let mut acc = DenseAccumulator::new(m);
            acc.add_product(3, &a.integral_terms(m).unwrap(), &b.integral_terms(m).unwrap());
            prop_assert_eq!(acc.finish(), (&a * &b).scale(&BigRational::from_integer(BigInt::from(3))));
            let mut conj = DenseAccumulator::new(m);
            conj.add_product_conj(1, &a.integral_terms(m).unwrap(), &a.integral_terms(m).unwrap());
            let norm = &a * &a.conj();
            prop_assert_eq!(conj.finish(), norm.clone());
            let expect = norm.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer().to_i128().unwrap());
            prop_assert_eq!(conj.integer_value(), expect);
        }
    }
}
