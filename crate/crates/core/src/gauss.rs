//! Twisted Gauss codes: a cyclic word of crossing passages and bar marks.
//!
//! Only classical crossings and bars are recorded. Virtual crossings leave no
//! trace in a Gauss diagram, so they never appear here.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub type ChordId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn flip(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

/// Local writhe of a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Passage {
    pub chord: ChordId,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Passage(Passage),
    Bar,
}

impl Entry {
    pub fn over(chord: ChordId) -> Entry {
        Entry::Passage(Passage { chord, role: Role::Over })
    }

    pub fn under(chord: ChordId) -> Entry {
        Entry::Passage(Passage { chord, role: Role::Under })
    }

    pub fn passage(self) -> Option<Passage> {
        match self {
            Entry::Passage(p) => Some(p),
            Entry::Bar => None,
        }
    }

    pub fn is_bar(self) -> bool {
        matches!(self, Entry::Bar)
    }

    pub fn chord(self) -> Option<ChordId> {
        self.passage().map(|p| p.chord)
    }
}

/// One classical crossing, located in a fixed rotation of the entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    pub id: ChordId,
    pub sign: Sign,
    pub over_pos: usize,
    pub under_pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialKind {
    NoBar,
    OneBar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { index: usize, token: String },
    Pairing { chord: u64 },
    SignMismatch { chord: u64 },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { index, token } => {
                write!(f, "malformed token {token:?} at position {index}")
            }
            ParseError::Pairing { chord } => write!(f, "chord {chord} must appear exactly once as O and once as U"),
            ParseError::SignMismatch { chord } => {
                write!(f, "the two passages of chord {chord} carry different signs")
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// A broken invariant of a [`TwistedGaussCode`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// Chord id 0 is reserved.
    ZeroChordId { position: usize },
    /// The chord does not occur exactly once as Over and once as Under.
    Pairing(ChordId),
    /// The chord occurs in the entries but has no sign.
    UnsignedChord(ChordId),
    /// A sign is recorded for a chord absent from the entries.
    OrphanSign(ChordId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroChordId { position } => write!(f, "ZeroChordId(position {position})"),
            Violation::Pairing(id) => write!(f, "PairingError({id})"),
            Violation::UnsignedChord(id) => write!(f, "UnsignedChord({id})"),
            Violation::OrphanSign(id) => write!(f, "OrphanSign({id})"),
        }
    }
}

/// Lexicographically minimal serialization over all rotations, with chords
/// relabeled by first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub text: String,
    pub bar_count: usize,
}

/// The diagram: a cyclic sequence of entries plus a sign per chord.
///
/// Rotations of `entries` describe the same diagram. Values built through
/// [`parse_gauss_code`] or returned by moves are always valid; values built
/// through [`TwistedGaussCode::from_parts`] may not be, see [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwistedGaussCode {
    entries: Vec<Entry>,
    signs: BTreeMap<ChordId, Sign>,
}

impl TwistedGaussCode {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a code without checking any invariant.
    pub fn from_parts(entries: Vec<Entry>, signs: BTreeMap<ChordId, Sign>) -> Self {
        Self { entries, signs }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn signs(&self) -> &BTreeMap<ChordId, Sign> {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sign(&self, chord: ChordId) -> Option<Sign> {
        self.signs.get(&chord).copied()
    }

    pub fn chord_count(&self) -> usize {
        self.signs.len()
    }

    pub fn bar_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_bar()).count()
    }

    pub fn passage_positions(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| !self.entries[i].is_bar()).collect()
    }

    /// Locates a chord's passages; `None` if the chord is absent or unpaired.
    pub fn chord(&self, id: ChordId) -> Option<Chord> {
        let sign = self.sign(id)?;
        let mut over_pos = None;
        let mut under_pos = None;
        for (i, e) in self.entries.iter().enumerate() {
            if let Entry::Passage(p) = e {
                if p.chord == id {
                    match p.role {
                        Role::Over => over_pos = Some(i),
                        Role::Under => under_pos = Some(i),
                    }
                }
            }
        }
        Some(Chord { id, sign, over_pos: over_pos?, under_pos: under_pos? })
    }

    /// All chords in order of first appearance.
    pub fn chords(&self) -> Vec<Chord> {
        let mut seen: BTreeMap<ChordId, (Option<usize>, Option<usize>)> = BTreeMap::new();
        let mut order = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if let Entry::Passage(p) = e {
                let slot = seen.entry(p.chord).or_insert_with(|| {
                    order.push(p.chord);
                    (None, None)
                });
                match p.role {
                    Role::Over => slot.0 = Some(i),
                    Role::Under => slot.1 = Some(i),
                }
            }
        }
        order
            .into_iter()
            .filter_map(|id| {
                let (o, u) = seen[&id];
                Some(Chord { id, sign: self.sign(id)?, over_pos: o?, under_pos: u? })
            })
            .collect()
    }

    pub fn next_chord_id(&self) -> ChordId {
        self.signs.keys().next_back().map_or(1, |m| m + 1)
    }

    /// The same diagram read from `start`.
    pub fn rotated(&self, start: usize) -> TwistedGaussCode {
        if self.entries.is_empty() {
            return self.clone();
        }
        let k = start % self.entries.len();
        let mut entries = Vec::with_capacity(self.entries.len());
        entries.extend_from_slice(&self.entries[k..]);
        entries.extend_from_slice(&self.entries[..k]);
        TwistedGaussCode { entries, signs: self.signs.clone() }
    }

    /// Renumbers chords 1..n by first appearance.
    pub fn relabeled(&self) -> TwistedGaussCode {
        let mut map: BTreeMap<ChordId, ChordId> = BTreeMap::new();
        let mut signs = BTreeMap::new();
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Bar => Entry::Bar,
                Entry::Passage(p) => {
                    let next = map.len() as ChordId + 1;
                    let id = *map.entry(p.chord).or_insert(next);
                    if let Some(s) = self.signs.get(&p.chord) {
                        signs.insert(id, *s);
                    }
                    Entry::Passage(Passage { chord: id, role: p.role })
                }
            })
            .collect();
        TwistedGaussCode { entries, signs }
    }

    /// The representative whose serialization is the canonical text.
    pub fn canonical_form(&self) -> TwistedGaussCode {
        if self.entries.is_empty() {
            return TwistedGaussCode::empty();
        }
        let mut best: Option<(String, usize)> = None;
        for k in 0..self.entries.len() {
            let text = self.rotated(k).relabeled().to_string();
            if best.as_ref().is_none_or(|(b, _)| text < *b) {
                best = Some((text, k));
            }
        }
        let (_, k) = best.expect("nonempty");
        self.rotated(k).relabeled()
    }
}

impl fmt::Display for TwistedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match e {
                Entry::Bar => f.write_str("*")?,
                Entry::Passage(p) => {
                    let s = self.signs.get(&p.chord).map_or('?', |s| s.symbol());
                    write!(f, "{}{}{}", p.role.symbol(), p.chord, s)?;
                }
            }
        }
        Ok(())
    }
}

impl core::str::FromStr for TwistedGaussCode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gauss_code(s)
    }
}

fn is_ws(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n')
}

fn parse_token(index: usize, tok: &str) -> Result<Option<(Role, u64, Sign)>, ParseError> {
    let syntax = || ParseError::Syntax { index, token: String::from(tok) };
    if tok == "*" {
        return Ok(None);
    }
    let bytes = tok.as_bytes();
    if bytes.len() < 3 {
        return Err(syntax());
    }
    let role = match bytes[0] {
        b'O' => Role::Over,
        b'U' => Role::Under,
        _ => return Err(syntax()),
    };
    let sign = match bytes[bytes.len() - 1] {
        b'+' => Sign::Pos,
        b'-' => Sign::Neg,
        _ => return Err(syntax()),
    };
    let digits = &tok[1..tok.len() - 1];
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax());
    }
    let id: u64 = digits.parse().map_err(|_| syntax())?;
    if id == 0 {
        return Err(syntax());
    }
    Ok(Some((role, id, sign)))
}

/// Parses the whitespace-separated grammar (`O<id><sign>`, `U<id><sign>`, `*`).
///
/// Chord ids are renumbered 1..n by first appearance.
pub fn parse_gauss_code(text: &str) -> Result<TwistedGaussCode, ParseError> {
    if let Some(bad) = text.split(is_ws).find(|t| t.chars().any(char::is_whitespace)) {
        return Err(ParseError::Syntax { index: 0, token: String::from(bad) });
    }
    let mut raw: Vec<Option<(Role, u64)>> = Vec::new();
    let mut signs: BTreeMap<u64, Sign> = BTreeMap::new();
    let mut counts: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    let mut mismatch = None;
    for (index, tok) in text.split(is_ws).filter(|t| !t.is_empty()).enumerate() {
        match parse_token(index, tok)? {
            None => raw.push(None),
            Some((role, id, sign)) => {
                if let Some(prev) = signs.insert(id, sign) {
                    if prev != sign && mismatch.is_none() {
                        mismatch = Some(id);
                    }
                }
                let c = counts.entry(id).or_default();
                match role {
                    Role::Over => c.0 += 1,
                    Role::Under => c.1 += 1,
                }
                raw.push(Some((role, id)));
            }
        }
    }
    if let Some((&chord, _)) = counts.iter().find(|(_, &c)| c != (1, 1)) {
        return Err(ParseError::Pairing { chord });
    }
    if let Some(chord) = mismatch {
        return Err(ParseError::SignMismatch { chord });
    }
    let mut map: BTreeMap<u64, ChordId> = BTreeMap::new();
    let mut out_signs = BTreeMap::new();
    let entries = raw
        .into_iter()
        .map(|r| match r {
            None => Entry::Bar,
            Some((role, id)) => {
                let next = map.len() as ChordId + 1;
                let chord = *map.entry(id).or_insert(next);
                out_signs.insert(chord, signs[&id]);
                Entry::Passage(Passage { chord, role })
            }
        })
        .collect();
    Ok(TwistedGaussCode { entries, signs: out_signs })
}

/// Emits the grammar form of the stored rotation and labels.
pub fn serialize(code: &TwistedGaussCode) -> String {
    code.to_string()
}

pub fn validate(code: &TwistedGaussCode) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut counts: BTreeMap<ChordId, (u32, u32)> = BTreeMap::new();
    for (position, e) in code.entries.iter().enumerate() {
        if let Entry::Passage(p) = e {
            if p.chord == 0 {
                out.push(Violation::ZeroChordId { position });
                continue;
            }
            let c = counts.entry(p.chord).or_default();
            match p.role {
                Role::Over => c.0 += 1,
                Role::Under => c.1 += 1,
            }
        }
    }
    for (&id, &c) in &counts {
        if c != (1, 1) {
            out.push(Violation::Pairing(id));
        }
        if !code.signs.contains_key(&id) {
            out.push(Violation::UnsignedChord(id));
        }
    }
    for &id in code.signs.keys() {
        if !counts.contains_key(&id) {
            out.push(Violation::OrphanSign(id));
        }
    }
    out
}

pub fn canonicalize(code: &TwistedGaussCode) -> CanonicalCode {
    CanonicalCode { text: code.canonical_form().to_string(), bar_count: code.bar_count() }
}

/// Syntactic triviality: no chords left. Bars on a bare circle cancel in pairs.
pub fn is_trivial(code: &TwistedGaussCode) -> Option<TrivialKind> {
    if code.entries.iter().any(|e| !e.is_bar()) {
        return None;
    }
    if code.bar_count().is_multiple_of(2) {
        Some(TrivialKind::NoBar)
    } else {
        Some(TrivialKind::OneBar)
    }
}
