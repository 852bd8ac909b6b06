#![allow(dead_code)]

use tkc_core::gauss::{Entry, Passage, Role, Sign, TwistedGaussCode};
use tkc_core::poly::Poly2;

/// Computes `Q(s,t)` by walking both smoothing loops of every chord one entry
/// at a time, taking `rho` from each loop separately.
pub fn literal_q(code: &TwistedGaussCode) -> Poly2 {
    let e = code.entries();
    let n = e.len();
    let mut q = Poly2::zero();
    let mut done = Vec::new();
    for start in 0..n {
        let Entry::Passage(p) = e[start] else { continue };
        if done.contains(&p.chord) {
            continue;
        }
        done.push(p.chord);
        let over = e.iter().position(|x| *x == Entry::Passage(Passage { chord: p.chord, role: Role::Over })).unwrap();
        let under = e.iter().position(|x| *x == Entry::Passage(Passage { chord: p.chord, role: Role::Under })).unwrap();
        let (ind_o, bars_o) = walk(code, over, under);
        let (ind_u, bars_u) = walk(code, under, over);
        let mono = |ind: i64, bars: u32| {
            let mut m = Poly2::one();
            if ind % 2 != 0 {
                m = m * Poly2::s();
            }
            if bars % 2 == 1 {
                m = m * Poly2::t();
            }
            m - Poly2::one()
        };
        let sign = if code.sign(p.chord) == Some(Sign::Pos) { 1 } else { -1 };
        q = q + (mono(ind_o, bars_o) * mono(ind_u, bars_u)).scale(sign);
    }
    q
}

/// Steps forward from `from` until `to`, returning the flat-sign sum and bar count.
fn walk(code: &TwistedGaussCode, from: usize, to: usize) -> (i64, u32) {
    let e = code.entries();
    let mut i = from;
    let mut ind = 0;
    let mut bars = 0;
    loop {
        i = (i + 1) % e.len();
        if i == to {
            return (ind, bars);
        }
        match e[i] {
            Entry::Bar => bars += 1,
            Entry::Passage(p) => {
                let s = if code.sign(p.chord) == Some(Sign::Pos) { 1 } else { -1 };
                ind += if p.role == Role::Under { s } else { -s };
            }
        }
    }
}

/// Every code with at most `max_chords` chords and `max_bars` bars, as words
/// (rotations and relabelings included).
pub fn all_codes(max_chords: u32, max_bars: usize) -> Vec<TwistedGaussCode> {
    let mut out = Vec::new();
    for k in 0..=max_chords {
        for b in 0..=max_bars {
            let mut pool: Vec<Entry> = (1..=k).flat_map(|c| [Entry::over(c), Entry::under(c)]).collect();
            pool.extend(std::iter::repeat_n(Entry::Bar, b));
            let mut words = Vec::new();
            permutations(&mut pool, 0, &mut words);
            words.sort();
            words.dedup();
            for w in words {
                for mask in 0..(1u32 << k) {
                    let signs =
                        (1..=k).map(|c| (c, if mask >> (c - 1) & 1 == 1 { Sign::Neg } else { Sign::Pos })).collect();
                    out.push(TwistedGaussCode::from_parts(w.clone(), signs));
                }
            }
        }
    }
    out
}

fn permutations(v: &mut Vec<Entry>, k: usize, out: &mut Vec<Vec<Entry>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Seeded corpus of random codes with at most 8 chords and 4 bars.
pub fn corpus(count: u64, seed: u64) -> impl Iterator<Item = TwistedGaussCode> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |i| {
        let chords = rng.gen_range(0..=8);
        let bars = rng.gen_range(0..=4);
        tkc_core::random_code(chords, bars, seed.wrapping_mul(1_000_003).wrapping_add(i))
    })
}
