//! Diagram moves on twisted Gauss codes.
//!
//! Sites are positions in the entries of the code the move was enumerated
//! from. Positions are read cyclically, so `(i, i + 1)` wraps at the end.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::gauss::{ChordId, Entry, Passage, Role, Sign, TwistedGaussCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Add,
    R1Del,
    R2Add,
    R2Del,
    R3,
    BarCancel,
    BarSlide,
    F1,
    F2,
    F3,
    F4,
    T4Del,
    T4Add,
    ArcShift1,
    ArcShift2,
}

impl MoveKind {
    pub const ALL: [MoveKind; 15] = [
        MoveKind::R1Add,
        MoveKind::R1Del,
        MoveKind::R2Add,
        MoveKind::R2Del,
        MoveKind::R3,
        MoveKind::BarCancel,
        MoveKind::BarSlide,
        MoveKind::F1,
        MoveKind::F2,
        MoveKind::F3,
        MoveKind::F4,
        MoveKind::T4Del,
        MoveKind::T4Add,
        MoveKind::ArcShift1,
        MoveKind::ArcShift2,
    ];

    pub const FREE: [MoveKind; 7] = [
        MoveKind::R1Add,
        MoveKind::R1Del,
        MoveKind::R2Add,
        MoveKind::R2Del,
        MoveKind::R3,
        MoveKind::BarCancel,
        MoveKind::BarSlide,
    ];

    pub const FORBIDDEN: [MoveKind; 6] =
        [MoveKind::F1, MoveKind::F2, MoveKind::F3, MoveKind::F4, MoveKind::T4Del, MoveKind::T4Add];

    pub const ARC_SHIFT: [MoveKind; 2] = [MoveKind::ArcShift1, MoveKind::ArcShift2];

    pub fn is_free(self) -> bool {
        Self::FREE.contains(&self)
    }

    pub fn is_forbidden(self) -> bool {
        Self::FORBIDDEN.contains(&self)
    }

    pub fn is_arc_shift(self) -> bool {
        Self::ARC_SHIFT.contains(&self)
    }

    pub fn is_add(self) -> bool {
        matches!(self, MoveKind::R1Add | MoveKind::R2Add | MoveKind::T4Add)
    }

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Add => "R1Add",
            MoveKind::R1Del => "R1Del",
            MoveKind::R2Add => "R2Add",
            MoveKind::R2Del => "R2Del",
            MoveKind::R3 => "R3",
            MoveKind::BarCancel => "BarCancel",
            MoveKind::BarSlide => "BarSlide",
            MoveKind::F1 => "F1",
            MoveKind::F2 => "F2",
            MoveKind::F3 => "F3",
            MoveKind::F4 => "F4",
            MoveKind::T4Del => "T4Del",
            MoveKind::T4Add => "T4Add",
            MoveKind::ArcShift1 => "ArcShift1",
            MoveKind::ArcShift2 => "ArcShift2",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = MoveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveKind::ALL.iter().copied().find(|k| k.name() == s).ok_or_else(|| MoveError::Malformed(s.to_string()))
    }
}

/// Choices that the site alone does not determine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    /// New chord for R1Add / T4Add: which passage comes first, and its sign.
    Insert { over_first: bool, sign: Sign },
    /// New chord pair for R2Add. `sign` belongs to the first new chord, the
    /// second gets the opposite. `reversed` flips the order of the Under
    /// pair; `under_first` puts the Under pair first when both share a gap.
    R2 { sign: Sign, reversed: bool, under_first: bool },
    /// Marks an arc shift whose two passages belong to the same chord.
    Kink,
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Payload::Insert { over_first, sign } => {
                write!(f, "{}{}", if over_first { 'O' } else { 'U' }, sign.symbol())
            }
            Payload::R2 { sign, reversed, under_first } => write!(
                f,
                "{}{}{}",
                sign.symbol(),
                if reversed { 'r' } else { 'f' },
                if under_first { 'u' } else { 'o' }
            ),
            Payload::Kink => f.write_str("kink"),
        }
    }
}

fn sign_of(c: u8) -> Option<Sign> {
    match c {
        b'+' => Some(Sign::Pos),
        b'-' => Some(Sign::Neg),
        _ => None,
    }
}

impl FromStr for Payload {
    type Err = MoveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MoveError::Malformed(s.to_string());
        if s == "kink" {
            return Ok(Payload::Kink);
        }
        let b = s.as_bytes();
        match b.len() {
            2 => {
                let over_first = match b[0] {
                    b'O' => true,
                    b'U' => false,
                    _ => return Err(bad()),
                };
                Ok(Payload::Insert { over_first, sign: sign_of(b[1]).ok_or_else(bad)? })
            }
            3 => {
                let sign = sign_of(b[0]).ok_or_else(bad)?;
                let reversed = match b[1] {
                    b'r' => true,
                    b'f' => false,
                    _ => return Err(bad()),
                };
                let under_first = match b[2] {
                    b'u' => true,
                    b'o' => false,
                    _ => return Err(bad()),
                };
                Ok(Payload::R2 { sign, reversed, under_first })
            }
            _ => Err(bad()),
        }
    }
}

/// A move at a site. Arities: R1Add `[gap]`; R1Del, R2Del pairs; R2Add
/// `[gap_o, gap_u]`; R3 three pairs; BarCancel `[bar, bar]`; BarSlide
/// `[over, under, bar_at_over, bar_at_under]`; F1-F4 `[from, to]`; T4Del
/// `[first, last]`; T4Add `[bar]`; arc shifts `[from, to]` for a pair of
/// passages, `[p]` or `[p, bar]` when one end of the arc is not a classical
/// crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveInstance {
    pub kind: MoveKind,
    pub site: Vec<usize>,
    pub payload: Option<Payload>,
}

impl MoveInstance {
    pub fn new(kind: MoveKind, site: Vec<usize>) -> Self {
        Self { kind, site, payload: None }
    }

    pub fn with_payload(kind: MoveKind, site: Vec<usize>, payload: Payload) -> Self {
        Self { kind, site, payload: Some(payload) }
    }
}

impl fmt::Display for MoveInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@", self.kind)?;
        for (i, p) in self.site.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        if let Some(p) = &self.payload {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl FromStr for MoveInstance {
    type Err = MoveError;
    /// Reads the trace line form `<kind>@<p1>,<p2>[,...] [payload]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MoveError::Malformed(s.to_string());
        let mut parts = s.split_whitespace();
        let head = parts.next().ok_or_else(bad)?;
        let payload = parts.next().map(Payload::from_str).transpose()?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (kind, site) = head.split_once('@').ok_or_else(bad)?;
        let kind: MoveKind = kind.parse()?;
        let site = site.split(',').map(|p| p.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        Ok(MoveInstance { kind, site, payload })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveError {
    /// The site does not address entries of this code.
    StaleMove(MoveInstance),
    /// The site exists but the move's preconditions do not hold there.
    NotApplicable(MoveInstance),
    /// A trace line could not be read.
    Malformed(String),
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::StaleMove(m) => write!(f, "stale move {m}"),
            MoveError::NotApplicable(m) => write!(f, "move {m} is not applicable"),
            MoveError::Malformed(s) => write!(f, "malformed move {s:?}"),
        }
    }
}

impl core::error::Error for MoveError {}

struct View<'a> {
    code: &'a TwistedGaussCode,
    e: &'a [Entry],
}

impl<'a> View<'a> {
    fn new(code: &'a TwistedGaussCode) -> Self {
        Self { code, e: code.entries() }
    }

    fn n(&self) -> usize {
        self.e.len()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    fn passage(&self, i: usize) -> Option<Passage> {
        self.e[i].passage()
    }

    fn is_bar(&self, i: usize) -> bool {
        self.e[i].is_bar()
    }

    fn sign(&self, c: ChordId) -> Sign {
        self.code.sign(c).expect("valid code")
    }

    /// The next passage after `i` and the number of bars skipped to reach it.
    fn next_passage(&self, i: usize) -> Option<(usize, usize)> {
        let n = self.n();
        (1..n).map(|k| (i + k) % n).find(|&j| !self.is_bar(j)).map(|j| (j, (j + n - i - 1) % n))
    }

    /// The adjacent pair `(i, i + 1)` with both entries passages.
    fn adjacent_passages(&self, i: usize) -> Option<(Passage, Passage)> {
        if self.n() < 2 {
            return None;
        }
        Some((self.passage(i)?, self.passage(self.next(i))?))
    }

    fn position_of(&self, chord: ChordId, role: Role) -> Option<usize> {
        self.e.iter().position(|e| *e == Entry::Passage(Passage { chord, role }))
    }

    fn gaps(&self) -> usize {
        self.n().max(1)
    }
}

fn r1_del(v: &View, out: &mut Vec<MoveInstance>) {
    let mut seen = BTreeSet::new();
    for i in 0..v.n() {
        if let Some((a, b)) = v.adjacent_passages(i) {
            if a.chord == b.chord && seen.insert(a.chord) {
                out.push(MoveInstance::new(MoveKind::R1Del, vec![i, v.next(i)]));
            }
        }
    }
}

fn r2_del(v: &View, out: &mut Vec<MoveInstance>) {
    for i in 0..v.n() {
        let Some((a, b)) = v.adjacent_passages(i) else { continue };
        if a.role != Role::Over || b.role != Role::Over || a.chord == b.chord {
            continue;
        }
        if v.sign(a.chord) == v.sign(b.chord) {
            continue;
        }
        for k in 0..v.n() {
            let Some((x, y)) = v.adjacent_passages(k) else { continue };
            if x.role != Role::Under || y.role != Role::Under {
                continue;
            }
            if (x.chord, y.chord) == (a.chord, b.chord) || (x.chord, y.chord) == (b.chord, a.chord) {
                out.push(MoveInstance::new(MoveKind::R2Del, vec![i, v.next(i), k, v.next(k)]));
            }
        }
    }
}

/// Sign condition for a Reidemeister III triangle. `x` is the top/middle
/// crossing, `y` top/bottom, `z` middle/bottom; each `sigma` is +1 when the
/// pair appears in the order (x, y) on top, (x, z) on the middle strand and
/// (y, z) on the bottom strand.
pub fn r3_condition(eps: [i64; 3], sigma_t: i64, sigma_m: i64, sigma_b: i64) -> bool {
    eps[0] * eps[1] == sigma_m * sigma_b && eps[1] * eps[2] == sigma_t * sigma_m
}

fn ordered_pair(v: &View, a: usize, b: usize) -> Option<(usize, usize, i64)> {
    if v.n() >= 2 && v.next(a) == b {
        Some((a, b, 1))
    } else if v.n() >= 2 && v.next(b) == a {
        Some((b, a, -1))
    } else {
        None
    }
}

fn r3(v: &View, out: &mut Vec<MoveInstance>) {
    let mut found = BTreeSet::new();
    for i in 0..v.n() {
        let Some((p, q)) = v.adjacent_passages(i) else { continue };
        if p.role != Role::Over || q.role != Role::Over || p.chord == q.chord {
            continue;
        }
        for (x, y) in [(p.chord, q.chord), (q.chord, p.chord)] {
            let (ox, oy) = (v.position_of(x, Role::Over).unwrap(), v.position_of(y, Role::Over).unwrap());
            let Some((t0, t1, sigma_t)) = ordered_pair(v, ox, oy) else { continue };
            let ux = v.position_of(x, Role::Under).unwrap();
            let uy = v.position_of(y, Role::Under).unwrap();
            for oz in [v.prev(ux), v.next(ux)] {
                let Some(zp) = v.passage(oz) else { continue };
                if zp.role != Role::Over || zp.chord == x || zp.chord == y {
                    continue;
                }
                let z = zp.chord;
                let uz = v.position_of(z, Role::Under).unwrap();
                let Some((m0, m1, sigma_m)) = ordered_pair(v, ux, oz) else { continue };
                let Some((b0, b1, sigma_b)) = ordered_pair(v, uy, uz) else { continue };
                let eps = [v.sign(x).value(), v.sign(y).value(), v.sign(z).value()];
                if r3_condition(eps, sigma_t, sigma_m, sigma_b) {
                    let site = vec![t0, t1, m0, m1, b0, b1];
                    if found.insert(site.clone()) {
                        out.push(MoveInstance::new(MoveKind::R3, site));
                    }
                }
            }
        }
    }
}

fn bar_cancel(v: &View, out: &mut Vec<MoveInstance>) {
    let mut seen = BTreeSet::new();
    for i in 0..v.n() {
        let j = v.next(i);
        if i != j && v.is_bar(i) && v.is_bar(j) && seen.insert((i.min(j), i.max(j))) {
            out.push(MoveInstance::new(MoveKind::BarCancel, vec![i, j]));
        }
    }
}

fn bar_slide(v: &View, out: &mut Vec<MoveInstance>) {
    if v.n() < 3 {
        return;
    }
    for c in v.code.chords() {
        for side in [Side::Before, Side::After] {
            let bo = side.of(v, c.over_pos);
            let bu = side.of(v, c.under_pos);
            if bo != bu && v.is_bar(bo) && v.is_bar(bu) {
                out.push(MoveInstance::new(MoveKind::BarSlide, vec![c.over_pos, c.under_pos, bo, bu]));
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Before,
    After,
}

impl Side {
    fn of(self, v: &View, i: usize) -> usize {
        match self {
            Side::Before => v.prev(i),
            Side::After => v.next(i),
        }
    }
}

fn forbidden_swaps(v: &View, kinds: &BTreeSet<MoveKind>, out: &mut Vec<MoveInstance>) {
    for i in 0..v.n() {
        let Some(a) = v.passage(i) else { continue };
        let Some((j, bars)) = v.next_passage(i) else { continue };
        let b = v.passage(j).unwrap();
        if a.chord == b.chord || a.role != b.role {
            continue;
        }
        let kind = match (a.role, bars) {
            (Role::Over, 0) => MoveKind::F1,
            (Role::Under, 0) => MoveKind::F2,
            (Role::Over, 1) => MoveKind::F3,
            (Role::Under, 1) => MoveKind::F4,
            _ => continue,
        };
        if kinds.contains(&kind) {
            out.push(MoveInstance::new(kind, vec![i, j]));
        }
    }
}

fn t4_del(v: &View, out: &mut Vec<MoveInstance>) {
    let mut seen = BTreeSet::new();
    for i in 0..v.n() {
        let Some(a) = v.passage(i) else { continue };
        let Some((j, bars)) = v.next_passage(i) else { continue };
        if bars == 1 && v.passage(j).unwrap().chord == a.chord && seen.insert(a.chord) {
            out.push(MoveInstance::new(MoveKind::T4Del, vec![i, j]));
        }
    }
}

fn arc_shift_pairs(v: &View, kinds: &BTreeSet<MoveKind>, out: &mut Vec<MoveInstance>) {
    for i in 0..v.n() {
        let Some(a) = v.passage(i) else { continue };
        let Some((j, bars)) = v.next_passage(i) else { continue };
        let kind = if bars == 0 { MoveKind::ArcShift1 } else { MoveKind::ArcShift2 };
        if !kinds.contains(&kind) {
            continue;
        }
        let mut m = MoveInstance::new(kind, vec![i, j]);
        if v.passage(j).unwrap().chord == a.chord {
            m.payload = Some(Payload::Kink);
        }
        out.push(m);
    }
}

fn arc_shift_degenerate(v: &View, kinds: &BTreeSet<MoveKind>, out: &mut Vec<MoveInstance>) {
    let mut seen = BTreeSet::new();
    for i in 0..v.n() {
        let Some(a) = v.passage(i) else { continue };
        if kinds.contains(&MoveKind::ArcShift1) && seen.insert(a.chord) {
            out.push(MoveInstance::new(MoveKind::ArcShift1, vec![i]));
        }
        if kinds.contains(&MoveKind::ArcShift2) && v.n() >= 2 {
            let mut bars = vec![v.prev(i), v.next(i)];
            bars.dedup();
            for b in bars {
                if v.is_bar(b) {
                    out.push(MoveInstance::new(MoveKind::ArcShift2, vec![i, b]));
                }
            }
        }
    }
}

const SIGNS: [Sign; 2] = [Sign::Pos, Sign::Neg];

fn r1_add(v: &View, out: &mut Vec<MoveInstance>) {
    for g in 0..v.gaps() {
        for over_first in [true, false] {
            for sign in SIGNS {
                out.push(MoveInstance::with_payload(MoveKind::R1Add, vec![g], Payload::Insert { over_first, sign }));
            }
        }
    }
}

fn r2_add(v: &View, out: &mut Vec<MoveInstance>) {
    for g1 in 0..v.gaps() {
        for g2 in 0..v.gaps() {
            for sign in SIGNS {
                for reversed in [false, true] {
                    let firsts: &[bool] = if g1 == g2 { &[false, true] } else { &[false] };
                    for &under_first in firsts {
                        out.push(MoveInstance::with_payload(
                            MoveKind::R2Add,
                            vec![g1, g2],
                            Payload::R2 { sign, reversed, under_first },
                        ));
                    }
                }
            }
        }
    }
}

fn t4_add(v: &View, out: &mut Vec<MoveInstance>) {
    for b in 0..v.n() {
        if !v.is_bar(b) {
            continue;
        }
        for over_first in [true, false] {
            for sign in SIGNS {
                out.push(MoveInstance::with_payload(MoveKind::T4Add, vec![b], Payload::Insert { over_first, sign }));
            }
        }
    }
}

/// Every applicable instance of the requested kinds, sorted by (kind, site).
///
/// Arc shifts include the degenerate forms whose arc ends at a non-classical
/// crossing; [`arc_shift_sites`] lists only the pairs of passages.
pub fn enumerate_moves(code: &TwistedGaussCode, kinds: &[MoveKind]) -> Vec<MoveInstance> {
    let kinds: BTreeSet<MoveKind> = kinds.iter().copied().collect();
    let v = View::new(code);
    let mut out = Vec::new();
    let has = |k| kinds.contains(&k);
    if has(MoveKind::R1Add) {
        r1_add(&v, &mut out);
    }
    if has(MoveKind::R1Del) {
        r1_del(&v, &mut out);
    }
    if has(MoveKind::R2Add) {
        r2_add(&v, &mut out);
    }
    if has(MoveKind::R2Del) {
        r2_del(&v, &mut out);
    }
    if has(MoveKind::R3) {
        r3(&v, &mut out);
    }
    if has(MoveKind::BarCancel) {
        bar_cancel(&v, &mut out);
    }
    if has(MoveKind::BarSlide) {
        bar_slide(&v, &mut out);
    }
    forbidden_swaps(&v, &kinds, &mut out);
    if has(MoveKind::T4Del) {
        t4_del(&v, &mut out);
    }
    if has(MoveKind::T4Add) {
        t4_add(&v, &mut out);
    }
    arc_shift_pairs(&v, &kinds, &mut out);
    arc_shift_degenerate(&v, &kinds, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Pairs of cyclically consecutive passages; bars between them make the
/// site an [`MoveKind::ArcShift2`].
pub fn arc_shift_sites(code: &TwistedGaussCode) -> Vec<MoveInstance> {
    let v = View::new(code);
    let mut out = Vec::new();
    arc_shift_pairs(&v, &MoveKind::ARC_SHIFT.iter().copied().collect(), &mut out);
    out.sort();
    out
}

fn rebuild(
    entries: Vec<Entry>,
    code: &TwistedGaussCode,
    signs_edit: impl FnOnce(&mut alloc::collections::BTreeMap<ChordId, Sign>),
) -> TwistedGaussCode {
    let mut signs = code.signs().clone();
    signs_edit(&mut signs);
    TwistedGaussCode::from_parts(entries, signs)
}

fn without(code: &TwistedGaussCode, positions: &[usize], chords: &[ChordId]) -> TwistedGaussCode {
    let entries = code.entries().iter().enumerate().filter(|(i, _)| !positions.contains(i)).map(|(_, e)| *e).collect();
    rebuild(entries, code, |s| {
        for c in chords {
            s.remove(c);
        }
    })
}

fn insert_at_gaps(code: &TwistedGaussCode, inserts: &[(usize, Vec<Entry>)]) -> Vec<Entry> {
    let e = code.entries();
    let mut out = Vec::with_capacity(e.len() + 4);
    for g in 0..e.len().max(1) {
        for (gap, ins) in inserts {
            if *gap == g {
                out.extend_from_slice(ins);
            }
        }
        if g < e.len() {
            out.push(e[g]);
        }
    }
    out
}

fn pair(first: Entry, second: Entry, over_first: bool) -> [Entry; 2] {
    if over_first {
        [first, second]
    } else {
        [second, first]
    }
}

/// Applies a move, re-checking its preconditions against `code`.
pub fn apply(code: &TwistedGaussCode, m: &MoveInstance) -> Result<TwistedGaussCode, MoveError> {
    let v = View::new(code);
    let n = v.n();
    let arity_ok = match m.kind {
        MoveKind::R1Add | MoveKind::T4Add => m.site.len() == 1,
        MoveKind::R2Add => m.site.len() == 2,
        MoveKind::R2Del => m.site.len() == 4,
        MoveKind::R3 => m.site.len() == 6,
        MoveKind::BarSlide => m.site.len() == 4,
        MoveKind::ArcShift1 | MoveKind::ArcShift2 => matches!(m.site.len(), 1 | 2),
        _ => m.site.len() == 2,
    };
    let limit = if matches!(m.kind, MoveKind::R1Add | MoveKind::R2Add) { n.max(1) } else { n };
    if !arity_ok || m.site.iter().any(|&p| p >= limit) {
        return Err(MoveError::StaleMove(m.clone()));
    }
    let na = || MoveError::NotApplicable(m.clone());
    let s = &m.site;
    let mut entries = code.entries().to_vec();
    match m.kind {
        MoveKind::R1Del => {
            let (a, b) = v.adjacent_passages(s[0]).ok_or_else(na)?;
            if s[1] != v.next(s[0]) || a.chord != b.chord {
                return Err(na());
            }
            Ok(without(code, s, &[a.chord]))
        }
        MoveKind::R2Del => {
            let (a, b) = v.adjacent_passages(s[0]).ok_or_else(na)?;
            let (x, y) = v.adjacent_passages(s[2]).ok_or_else(na)?;
            let ok = s[1] == v.next(s[0])
                && s[3] == v.next(s[2])
                && a.role == Role::Over
                && b.role == Role::Over
                && x.role == Role::Under
                && y.role == Role::Under
                && a.chord != b.chord
                && v.sign(a.chord) != v.sign(b.chord)
                && ((x.chord, y.chord) == (a.chord, b.chord) || (x.chord, y.chord) == (b.chord, a.chord));
            if !ok {
                return Err(na());
            }
            Ok(without(code, s, &[a.chord, b.chord]))
        }
        MoveKind::R3 => {
            let mut found = Vec::new();
            r3(&v, &mut found);
            if !found.iter().any(|f| f.site == *s) {
                return Err(na());
            }
            for k in 0..3 {
                entries.swap(s[2 * k], s[2 * k + 1]);
            }
            Ok(rebuild(entries, code, |_| {}))
        }
        MoveKind::BarCancel => {
            if n < 2 || s[0] == s[1] || !v.is_bar(s[0]) || !v.is_bar(s[1]) {
                return Err(na());
            }
            if v.next(s[0]) != s[1] && v.next(s[1]) != s[0] {
                return Err(na());
            }
            Ok(without(code, s, &[]))
        }
        MoveKind::BarSlide => {
            let (po, pu) = (v.passage(s[0]).ok_or_else(na)?, v.passage(s[1]).ok_or_else(na)?);
            let before = v.prev(s[0]) == s[2] && v.prev(s[1]) == s[3];
            let after = v.next(s[0]) == s[2] && v.next(s[1]) == s[3];
            let ok = po.role == Role::Over
                && pu.role == Role::Under
                && po.chord == pu.chord
                && s[2] != s[3]
                && v.is_bar(s[2])
                && v.is_bar(s[3])
                && (before || after);
            if !ok {
                return Err(na());
            }
            entries[s[2]] = Entry::under(po.chord);
            entries[s[0]] = Entry::Bar;
            entries[s[3]] = Entry::over(po.chord);
            entries[s[1]] = Entry::Bar;
            Ok(rebuild(entries, code, |_| {}))
        }
        MoveKind::F1 | MoveKind::F2 | MoveKind::F3 | MoveKind::F4 => {
            let a = v.passage(s[0]).ok_or_else(na)?;
            let (j, bars) = v.next_passage(s[0]).ok_or_else(na)?;
            let b = v.passage(j).unwrap();
            let expected = match (a.role, bars) {
                (Role::Over, 0) => MoveKind::F1,
                (Role::Under, 0) => MoveKind::F2,
                (Role::Over, 1) => MoveKind::F3,
                (Role::Under, 1) => MoveKind::F4,
                _ => return Err(na()),
            };
            if j != s[1] || a.chord == b.chord || a.role != b.role || expected != m.kind {
                return Err(na());
            }
            entries.swap(s[0], s[1]);
            Ok(rebuild(entries, code, |_| {}))
        }
        MoveKind::T4Del => {
            let a = v.passage(s[0]).ok_or_else(na)?;
            let (j, bars) = v.next_passage(s[0]).ok_or_else(na)?;
            if j != s[1] || bars != 1 || v.passage(j).unwrap().chord != a.chord {
                return Err(na());
            }
            Ok(without(code, s, &[a.chord]))
        }
        MoveKind::T4Add => {
            let Some(Payload::Insert { over_first, sign }) = m.payload else { return Err(na()) };
            if !v.is_bar(s[0]) {
                return Err(na());
            }
            let c = code.next_chord_id();
            let [first, second] = pair(Entry::over(c), Entry::under(c), over_first);
            let mut out = Vec::with_capacity(n + 2);
            for (i, e) in entries.iter().enumerate() {
                if i == s[0] {
                    out.extend_from_slice(&[first, Entry::Bar, second]);
                } else {
                    out.push(*e);
                }
            }
            Ok(rebuild(out, code, |signs| {
                signs.insert(c, sign);
            }))
        }
        MoveKind::R1Add => {
            let Some(Payload::Insert { over_first, sign }) = m.payload else { return Err(na()) };
            let c = code.next_chord_id();
            let ins = pair(Entry::over(c), Entry::under(c), over_first).to_vec();
            let out = insert_at_gaps(code, &[(s[0], ins)]);
            Ok(rebuild(out, code, |signs| {
                signs.insert(c, sign);
            }))
        }
        MoveKind::R2Add => {
            let Some(Payload::R2 { sign, reversed, under_first }) = m.payload else { return Err(na()) };
            let a = code.next_chord_id();
            let b = a + 1;
            let overs = vec![Entry::over(a), Entry::over(b)];
            let unders =
                if reversed { vec![Entry::under(b), Entry::under(a)] } else { vec![Entry::under(a), Entry::under(b)] };
            let inserts = if under_first { [(s[1], unders), (s[0], overs)] } else { [(s[0], overs), (s[1], unders)] };
            let out = insert_at_gaps(code, &inserts);
            Ok(rebuild(out, code, |signs| {
                signs.insert(a, sign);
                signs.insert(b, sign.negate());
            }))
        }
        MoveKind::ArcShift1 | MoveKind::ArcShift2 => apply_arc_shift(code, &v, m, entries),
    }
}

fn apply_arc_shift(
    code: &TwistedGaussCode,
    v: &View,
    m: &MoveInstance,
    mut entries: Vec<Entry>,
) -> Result<TwistedGaussCode, MoveError> {
    let na = || MoveError::NotApplicable(m.clone());
    let s = &m.site;
    let a = v.passage(s[0]).ok_or_else(na)?;
    if s.len() == 1 {
        if m.kind != MoveKind::ArcShift1 {
            return Err(na());
        }
        return Ok(rebuild(entries, code, |signs| negate(signs, a.chord)));
    }
    if v.is_bar(s[1]) {
        if m.kind != MoveKind::ArcShift2 || (v.prev(s[0]) != s[1] && v.next(s[0]) != s[1]) {
            return Err(na());
        }
        entries.swap(s[0], s[1]);
        return Ok(rebuild(entries, code, |signs| negate(signs, a.chord)));
    }
    let (j, bars) = v.next_passage(s[0]).ok_or_else(na)?;
    let kind = if bars == 0 { MoveKind::ArcShift1 } else { MoveKind::ArcShift2 };
    if j != s[1] || kind != m.kind {
        return Err(na());
    }
    let b = v.passage(j).unwrap();
    entries.swap(s[0], s[1]);
    Ok(rebuild(entries, code, |signs| {
        negate(signs, a.chord);
        if b.chord != a.chord {
            negate(signs, b.chord);
        }
    }))
}

fn negate(signs: &mut alloc::collections::BTreeMap<ChordId, Sign>, c: ChordId) {
    if let Some(s) = signs.get_mut(&c) {
        *s = s.negate();
    }
}
