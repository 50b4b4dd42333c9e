//! Steiner systems from the extended binary Golay code.

/// The 759 octads of S(5,8,24) as bitmasks over points 0..24.
pub fn octads() -> Vec<u32> {
    // Cyclic [23,12] code with generator x¹¹+x¹⁰+x⁶+x⁵+x⁴+x²+1.
    let g: u32 = (1 << 11) | (1 << 10) | (1 << 6) | (1 << 5) | (1 << 4) | (1 << 2) | 1;
    let basis: Vec<u32> = (0..12).map(|k| g << k).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << 12) {
        let mut w = 0u32;
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                w ^= b;
            }
        }
        if w.count_ones() % 2 == 1 {
            w |= 1 << 23;
        }
        if w.count_ones() == 8 {
            out.push(w);
        }
    }
    out
}

/// Blocks of S(4,7,23): octads through point 23 with that point removed.
pub fn heptads() -> Vec<u32> {
    octads()
        .into_iter()
        .filter(|o| o >> 23 & 1 == 1)
        .map(|o| o & !(1 << 23))
        .collect()
}

/// Blocks of S(3,6,22): octads through points 22 and 23, both removed.
pub fn hexads() -> Vec<u32> {
    octads()
        .into_iter()
        .filter(|o| o >> 22 & 3 == 3)
        .map(|o| o & !(3 << 22))
        .collect()
}
