//! Arithmetic, polynomials and linear algebra over a prime field `F_p`,
//! `p < 2^63`.

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < 1 << 63);
        Self { p }
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    pub fn pow(self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// Residue of an integer.
    pub fn from_u128(self, v: u128) -> u64 {
        (v % self.p as u128) as u64
    }

    pub fn from_i128(self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// An element of multiplicative order exactly `n`, for `n | p - 1`.
    pub fn primitive_root_of_unity(self, n: u64) -> u64 {
        assert_eq!((self.p - 1) % n, 0);
        let factors = prime_factors(self.p - 1);
        let g = (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, (self.p - 1) / q) != 1))
            .expect("F_p* is cyclic");
        self.pow(g, (self.p - 1) / n)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Polynomials as coefficient vectors, lowest degree first, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl Fp {
    pub fn poly_sub(self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn poly_mul(self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        trim(out)
    }

    /// Quotient and remainder of `a` by nonzero `b`.
    pub fn poly_divmod(self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(c, bi));
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn poly_rem(self, a: &[u64], b: &[u64]) -> Poly {
        self.poly_divmod(a, b).1
    }

    pub fn poly_monic(self, a: Poly) -> Poly {
        match a.last() {
            None => a,
            Some(&l) => {
                let li = self.inv(l);
                a.into_iter().map(|c| self.mul(c, li)).collect()
            }
        }
    }

    pub fn poly_gcd(self, a: &[u64], b: &[u64]) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(a)
    }

    /// `base^e mod m`.
    pub fn poly_powmod(self, base: &[u64], mut e: u64, m: &[u64]) -> Poly {
        let mut result: Poly = vec![1];
        let mut b = self.poly_rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.poly_rem(&self.poly_mul(&result, &b), m);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), m);
            e >>= 1;
        }
        result
    }

    /// Distinct roots of `f` in `F_p`, ascending.
    pub fn roots<R: Rng>(self, f: &[u64], rng: &mut R) -> Vec<u64> {
        let f = self.poly_monic(trim(f.to_vec()));
        if f.len() <= 1 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut f = f;
        if f[0] == 0 {
            roots.push(0);
            while f[0] == 0 {
                f.remove(0);
            }
        }
        // Product of the distinct linear factors with nonzero roots.
        let xp = self.poly_powmod(&[0, 1], self.p - 1, &f);
        let g = self.poly_gcd(&f, &self.poly_sub(&xp, &[1]));
        let mut stack = vec![g];
        while let Some(h) = stack.pop() {
            match h.len() {
                0 | 1 => {}
                2 => roots.push(self.neg(self.mul(h[0], self.inv(h[1])))),
                _ => loop {
                    let a = rng.gen_range(0..self.p);
                    let t = self.poly_powmod(&[a, 1], (self.p - 1) / 2, &h);
                    let d = self.poly_gcd(&h, &self.poly_sub(&t, &[1]));
                    if d.len() > 1 && d.len() < h.len() {
                        let (q, _) = self.poly_divmod(&h, &d);
                        stack.push(d);
                        stack.push(self.poly_monic(q));
                        break;
                    }
                },
            }
        }
        roots.sort_unstable();
        roots
    }
}

/// Dense square or rectangular matrices, row-major.
pub type Matrix = Vec<Vec<u64>>;

impl Fp {
    /// Characteristic polynomial `det(xI - a)` via Hessenberg reduction.
    pub fn char_poly(self, a: &Matrix) -> Poly {
        let n = a.len();
        let mut h = a.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                continue;
            };
            if piv != m {
                h.swap(piv, m);
                for row in h.iter_mut() {
                    row.swap(piv, m);
                }
            }
            let inv = self.inv(h[m][m - 1]);
            for i in m + 1..n {
                let u = self.mul(h[i][m - 1], inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = self.mul(u, h[m][j]);
                    h[i][j] = self.sub(h[i][j], v);
                }
                for row in h.iter_mut() {
                    let v = self.mul(u, row[i]);
                    row[m] = self.add(row[m], v);
                }
            }
        }
        // p_k(x) = (x - h_kk) p_{k-1} - Σ_{i<k} h_ik (∏ subdiagonal) p_{i-1}.
        let mut ps: Vec<Poly> = vec![vec![1]];
        for k in 0..n {
            let mut pk = self.poly_mul(&[self.neg(h[k][k]), 1], &ps[k]);
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = self.mul(prod, h[i + 1][i]);
                let c = self.mul(h[i][k], prod);
                if c != 0 {
                    let term: Poly = ps[i].iter().map(|&x| self.mul(x, c)).collect();
                    pk = self.poly_sub(&pk, &term);
                }
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }

    /// Basis of the right null space `{v : a v = 0}`, in reduced form.
    pub fn null_space(self, a: &Matrix, ncols: usize) -> Vec<Vec<u64>> {
        let mut m = a.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(piv, row);
            let inv = self.inv(m[row][col]);
            for x in m[row].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..m.len() {
                if i != row && m[i][col] != 0 {
                    let f = m[i][col];
                    for j in 0..ncols {
                        let v = self.mul(f, m[row][j]);
                        m[i][j] = self.sub(m[i][j], v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.neg(m[r][f]);
                }
                v
            })
            .collect()
    }

    /// Row-reduces `rows` (linearly independent) and returns them with their
    /// pivot columns.
    pub fn echelon(self, rows: Vec<Vec<u64>>) -> (Vec<Vec<u64>>, Vec<usize>) {
        let mut m = rows;
        let ncols = m.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            if row == m.len() {
                break;
            }
            let Some(piv) = (row..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(piv, row);
            let inv = self.inv(m[row][col]);
            for x in m[row].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..m.len() {
                if i != row && m[i][col] != 0 {
                    let f = m[i][col];
                    for j in 0..ncols {
                        let v = self.mul(f, m[row][j]);
                        m[i][j] = self.sub(m[i][j], v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        assert_eq!(row, m.len(), "rows are not linearly independent");
        (m, pivots)
    }
}
