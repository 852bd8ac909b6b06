//! Index, odd writhe, affine-index data, the polynomial `Q(s,t)` and the
//! lower bounds derived from them.

use alloc::vec::Vec;
use core::fmt;

use crate::gauss::{ChordId, Entry, Role, TwistedGaussCode};
use crate::poly::Poly2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownChord(pub ChordId);

impl fmt::Display for UnknownChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown chord {}", self.0)
    }
}

impl core::error::Error for UnknownChord {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BarParity {
    Even,
    Odd,
}

impl BarParity {
    pub fn of(bars: usize) -> BarParity {
        if bars.is_multiple_of(2) {
            BarParity::Even
        } else {
            BarParity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BarParity::Even => "even",
            BarParity::Odd => "odd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineData {
    pub chord_id: ChordId,
    pub ind_over: i64,
    pub rho: u8,
    pub p_over: u8,
    pub p_under: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub odd_writhe: i64,
    pub arcshift_lower: u64,
    pub forbidden_lower: u64,
    pub bar_parity: BarParity,
}

/// Entries strictly after `from` and strictly before `to`, cyclically.
fn arc(entries: &[Entry], from: usize, to: usize) -> impl Iterator<Item = &Entry> {
    let n = entries.len();
    let len = (to + n - from - 1) % n;
    (1..=len).map(move |k| &entries[(from + k) % n])
}

/// Passages met on the loop that leaves the Over passage of the chord and
/// returns at its Under passage. Only the parity matters downstream.
pub fn crossing_index(code: &TwistedGaussCode, chord: ChordId) -> Result<u64, UnknownChord> {
    let c = code.chord(chord).ok_or(UnknownChord(chord))?;
    Ok(arc(code.entries(), c.over_pos, c.under_pos).filter(|e| !e.is_bar()).count() as u64)
}

pub fn odd_writhe(code: &TwistedGaussCode) -> i64 {
    code.chords()
        .iter()
        .filter(|c| arc(code.entries(), c.over_pos, c.under_pos).filter(|e| !e.is_bar()).count() % 2 == 1)
        .map(|c| c.sign.value())
        .sum()
}

pub fn affine_data(code: &TwistedGaussCode, chord: ChordId) -> Result<AffineData, UnknownChord> {
    let c = code.chord(chord).ok_or(UnknownChord(chord))?;
    let entries = code.entries();
    let mut ind_over = 0i64;
    let mut bars_over = 0usize;
    for e in arc(entries, c.over_pos, c.under_pos) {
        match e {
            Entry::Bar => bars_over += 1,
            Entry::Passage(p) => {
                let s = code.sign(p.chord).map_or(0, |s| s.value());
                ind_over += match p.role {
                    Role::Under => s,
                    Role::Over => -s,
                };
            }
        }
    }
    let bars_under = arc(entries, c.under_pos, c.over_pos).filter(|e| e.is_bar()).count();
    Ok(AffineData {
        chord_id: chord,
        ind_over,
        rho: ind_over.rem_euclid(2) as u8,
        p_over: (bars_over % 2) as u8,
        p_under: (bars_under % 2) as u8,
    })
}

/// Affine data for every chord, in order of first appearance.
pub fn affine_table(code: &TwistedGaussCode) -> Vec<AffineData> {
    code.chords().iter().map(|c| affine_data(code, c.id).expect("chord listed by the code")).collect()
}

pub fn q_polynomial(code: &TwistedGaussCode) -> Poly2 {
    let mut q = Poly2::zero();
    for a in affine_table(code) {
        let rho = u32::from(a.rho);
        let term = Poly2::binomial_product(rho, a.p_over.into(), rho, a.p_under.into());
        let sign = code.sign(a.chord_id).map_or(0, |s| s.value());
        q += &term.scale(sign);
    }
    q
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

pub fn bounds(code: &TwistedGaussCode) -> Bounds {
    let j = odd_writhe(code);
    let parity = BarParity::of(code.bar_count());
    let abs = j.unsigned_abs();
    Bounds {
        odd_writhe: j,
        arcshift_lower: ceil_div(abs, 2),
        forbidden_lower: match parity {
            BarParity::Even => ceil_div(abs, 4),
            BarParity::Odd => ceil_div(abs, 2),
        },
        bar_parity: parity,
    }
}

/// The allowed sets for a change of `Q` under one forbidden move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeltaClass {
    /// F1/F2 with an even number of bars.
    F1F2Even,
    /// F3/F4 with an even number of bars.
    F3F4Even,
    /// Any of F1-F4 or T4 with an odd number of bars: `±m(st-1)(s-1)`, `m ∈ {0,2}`.
    OddBar,
    /// T4 with an even number of bars: `0` or `±(t-1)^2`.
    T4Even,
}

impl DeltaClass {
    pub const ALL: [DeltaClass; 4] =
        [DeltaClass::F1F2Even, DeltaClass::F3F4Even, DeltaClass::OddBar, DeltaClass::T4Even];
}

/// Classes whose allowed set contains the difference; empty means outside all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaVerdict {
    pub classes: Vec<DeltaClass>,
}

impl DeltaVerdict {
    pub fn contains(&self, class: DeltaClass) -> bool {
        self.classes.contains(&class)
    }

    pub fn is_outside(&self) -> bool {
        self.classes.is_empty()
    }
}

fn basis() -> [Poly2; 3] {
    [Poly2::binomial_product(1, 1, 1, 1), Poly2::binomial_product(0, 1, 0, 1), Poly2::binomial_product(1, 0, 1, 0)]
}

fn even_class_member(delta: &Poly2, class: DeltaClass) -> bool {
    let b = basis();
    for m1 in 0..3i64 {
        for m2 in 0..3i64 {
            for m3 in 0..3i64 {
                for &l1 in &[-1i64, 1] {
                    for &l2 in &[-1i64, 1] {
                        for &l3 in &[-1i64, 1] {
                            let comb = b[0].scale(l1 * m1) + b[1].scale(l2 * m2) + b[2].scale(l3 * m3);
                            if comb != *delta {
                                continue;
                            }
                            let ms = [m1, m2, m3];
                            if ms == [0, 0, 0] {
                                return true;
                            }
                            let ones = ms == [1, 1, 1];
                            let evens = ms.iter().all(|&m| m == 0 || m == 2);
                            let ok = match class {
                                DeltaClass::F1F2Even => {
                                    (ones && (l1 == l2 || l1 == l3 || l2 == l3)) || (evens && m1 == m2 && m2 != m3)
                                }
                                DeltaClass::F3F4Even => {
                                    (ones && (l1 == l2 || l1 == l3)) || (evens && m1 != m2 && m2 == m3 && l2 != l3)
                                }
                                _ => false,
                            };
                            if ok {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// Classifies `after - before` against the forbidden-move delta sets that
/// apply at the given bar parity.
pub fn q_delta_class(before: &Poly2, after: &Poly2, parity: BarParity) -> DeltaVerdict {
    let delta = after - before;
    let mut classes = Vec::new();
    match parity {
        BarParity::Even => {
            for class in [DeltaClass::F1F2Even, DeltaClass::F3F4Even] {
                if even_class_member(&delta, class) {
                    classes.push(class);
                }
            }
            let t = Poly2::binomial_product(0, 1, 0, 1);
            if delta.is_zero() || delta == t || delta == -t {
                classes.push(DeltaClass::T4Even);
            }
        }
        BarParity::Odd => {
            let base = Poly2::binomial_product(1, 1, 1, 0);
            if delta.is_zero() || delta == base.scale(2) || delta == base.scale(-2) {
                classes.push(DeltaClass::OddBar);
            }
        }
    }
    DeltaVerdict { classes }
}
