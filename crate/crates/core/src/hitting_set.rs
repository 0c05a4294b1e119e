//! Ternary hitting sets.
//!
//! For a word `x ∈ {0,1,2}^k`, `D(x)` is the set of words that differ from
//! `x` in every position. A hitting set contains a member of every `D(x)`.

/// Words of length `k` over `{0,1,2}`, each stored as one digit per byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    pub k: usize,
    pub words: Vec<Vec<u8>>,
}

pub const MAX_K: usize = 8;

/// `ceil((3/2)^k k ln 3) + 1`.
pub fn size_bound(k: usize) -> usize {
    (1.5f64.powi(k as i32) * k as f64 * 3f64.ln()).ceil() as usize + 1
}

fn decode(mut index: usize, k: usize) -> Vec<u8> {
    let mut w = vec![0u8; k];
    for d in w.iter_mut() {
        *d = (index % 3) as u8;
        index /= 3;
    }
    w
}

/// True when `w` and `x` differ in every position.
pub fn disagrees(w: &[u8], x: &[u8]) -> bool {
    w.iter().zip(x).all(|(a, b)| a != b)
}

/// Greedy set cover: repeatedly add the word hitting the most `D(x)` not yet
/// hit, preferring the smallest word on ties.
///
/// Panics unless `1 <= k <= MAX_K`.
pub fn build_hitting_set(k: usize) -> HittingSet {
    assert!((1..=MAX_K).contains(&k), "hitting set length must be in 1..={MAX_K}");
    let total = 3usize.pow(k as u32);
    let blocks = total.div_ceil(64);
    let words: Vec<Vec<u8>> = (0..total).map(|i| decode(i, k)).collect();
    // hits[w] has bit x set when w ∈ D(x); the relation is symmetric
    let hits: Vec<Vec<u64>> = words
        .iter()
        .map(|w| {
            let mut bits = vec![0u64; blocks];
            for (x, xw) in words.iter().enumerate() {
                if disagrees(w, xw) {
                    bits[x / 64] |= 1 << (x % 64);
                }
            }
            bits
        })
        .collect();
    let mut open = vec![u64::MAX; blocks];
    if total % 64 != 0 {
        open[blocks - 1] = (1u64 << (total % 64)) - 1;
    }
    let mut remaining = total;
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, gain) = hits
            .iter()
            .enumerate()
            .map(|(w, bits)| {
                let gain: u32 = bits.iter().zip(&open).map(|(a, b)| (a & b).count_ones()).sum();
                (w, gain)
            })
            .max_by_key(|&(w, gain)| (gain, std::cmp::Reverse(w)))
            .expect("non-empty word list");
        debug_assert!(gain > 0);
        for (o, h) in open.iter_mut().zip(&hits[best]) {
            *o &= !h;
        }
        remaining -= gain as usize;
        chosen.push(words[best].clone());
    }
    HittingSet { k, words: chosen }
}

impl HittingSet {
    /// Exhaustively checks that every `D(x)` is hit.
    pub fn hits_all(&self) -> bool {
        (0..3usize.pow(self.k as u32))
            .map(|i| decode(i, self.k))
            .all(|x| self.words.iter().any(|w| disagrees(w, &x)))
    }
}
