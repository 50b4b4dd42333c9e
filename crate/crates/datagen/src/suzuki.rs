//! Sz(8) acting on the 65 points of the Tits ovoid in PG(3,8).

use nichols_core::perm::Permutation;
use rand::seq::SliceRandom;
use rand::Rng;

type Vec4 = [u8; 4];

/// GF(8) = GF(2)[x]/(x³+x+1); elements are bit patterns.
fn mul(a: u8, b: u8) -> u8 {
    let mut r = 0u8;
    for i in 0..3 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    for i in (3..5).rev() {
        if r >> i & 1 == 1 {
            r ^= 0b1011 << (i - 3);
        }
    }
    r
}

fn pow(a: u8, e: u32) -> u8 {
    (0..e).fold(1, |acc, _| mul(acc, a))
}

fn inv(a: u8) -> u8 {
    assert_ne!(a, 0);
    pow(a, 6)
}

fn normalize(v: Vec4) -> Vec4 {
    let lead = *v.iter().find(|&&x| x != 0).expect("zero vector");
    let li = inv(lead);
    v.map(|x| mul(x, li))
}

/// Points of the ovoid: `(0,0,0,1)` and `(1,x,y,xy+x^{σ+2}+y^σ)` with σ: t ↦ t⁴.
pub fn ovoid() -> Vec<Vec4> {
    let mut pts = vec![[0, 0, 0, 1]];
    for x in 0..8u8 {
        for y in 0..8u8 {
            let z = mul(x, y) ^ pow(x, 6) ^ pow(y, 4);
            pts.push([1, x, y, z]);
        }
    }
    pts
}

/// Solves `M c = v` for the 4×4 matrix with the given columns.
fn solve(cols: &[Vec4; 4], v: Vec4) -> Option<Vec4> {
    let mut m = [[0u8; 5]; 4];
    for r in 0..4 {
        for (c, col) in cols.iter().enumerate() {
            m[r][c] = col[r];
        }
        m[r][4] = v[r];
    }
    for c in 0..4 {
        let p = (c..4).find(|&r| m[r][c] != 0)?;
        m.swap(c, p);
        let iv = inv(m[c][c]);
        for k in 0..5 {
            m[c][k] = mul(m[c][k], iv);
        }
        for r in 0..4 {
            if r != c && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..5 {
                    m[r][k] ^= mul(f, m[c][k]);
                }
            }
        }
    }
    Some([m[0][4], m[1][4], m[2][4], m[3][4]])
}

fn coords(pts: &[Vec4], idx: [usize; 5]) -> Option<([Vec4; 4], Vec4)> {
    let cols = [pts[idx[0]], pts[idx[1]], pts[idx[2]], pts[idx[3]]];
    let c = solve(&cols, pts[idx[4]])?;
    if c.contains(&0) {
        return None;
    }
    Some((cols, c))
}

/// Matrix (as a map on vectors) sending frame `src` to frame `dst`, if both
/// are frames.
fn frame_map(pts: &[Vec4], src: [usize; 5], dst: [usize; 5]) -> Option<impl Fn(Vec4) -> Vec4> {
    let (pcols, c) = coords(pts, src)?;
    let (qcols, d) = coords(pts, dst)?;
    let scale: Vec<u8> = (0..4).map(|i| mul(d[i], inv(c[i]))).collect();
    Some(move |v: Vec4| {
        let a = solve(&pcols, v).expect("frame columns are independent");
        let mut out = [0u8; 4];
        for i in 0..4 {
            let coef = mul(a[i], scale[i]);
            for r in 0..4 {
                out[r] ^= mul(coef, qcols[i][r]);
            }
        }
        out
    })
}

/// Projective maps preserving the ovoid, found by frame search; returns the
/// induced permutations of the 65 points.
pub fn generators<R: Rng>(rng: &mut R, count: usize) -> Vec<Permutation> {
    let pts = ovoid();
    let index = |v: Vec4| pts.iter().position(|&p| p == normalize(v));
    let n = pts.len();
    // A frame inside the ovoid.
    let mut src = None;
    'outer: for a in 3..n {
        for b in a + 1..n {
            if coords(&pts, [0, 1, 2, a, b]).is_some() {
                src = Some([0, 1, 2, a, b]);
                break 'outer;
            }
        }
    }
    let src = src.expect("ovoid contains a frame");
    let mut out = Vec::new();
    while out.len() < count {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let (q1, q2) = (order[0], order[1]);
        let mut found = None;
        'search: for &q3 in &order[2..] {
            for &q4 in &order[2..] {
                for &q5 in &order[2..] {
                    if q4 == q3 || q5 == q3 || q5 == q4 {
                        continue;
                    }
                    let Some(f) = frame_map(&pts, src, [q1, q2, q3, q4, q5]) else {
                        continue;
                    };
                    let images: Option<Vec<u32>> =
                        pts.iter().map(|&p| index(f(p)).map(|i| i as u32)).collect();
                    if let Some(images) = images {
                        found = Some(images);
                        break 'search;
                    }
                }
            }
        }
        let images = found.expect("the ovoid stabilizer is 2-transitive");
        let g = Permutation::from_images(images).expect("projective maps are bijective");
        if !g.is_identity() {
            out.push(g);
        }
    }
    out
}
