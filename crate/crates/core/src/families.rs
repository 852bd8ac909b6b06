//! The knot families with closed-form invariants, and two small examples.
//!
//! Each family is a connected sum of short blocks. Chord ids follow first
//! appearance, so the generated text is already in parsed form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::gauss::{parse_gauss_code, ChordId, Entry, ParseError, Passage, Role, Sign, TwistedGaussCode};
use crate::poly::Poly2;

/// The frozen fixture records, one `<family> <n> <code>` per line.
pub const FIXTURE_DATA: &str = include_str!("../data/families.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Kn,
    Torus { barred: bool },
    Ras,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Kn => "kn",
            Family::Torus { barred: false } => "torus",
            Family::Torus { barred: true } => "torus-bar",
            Family::Ras => "ras",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        match s {
            "kn" => Some(Family::Kn),
            "torus" => Some(Family::Torus { barred: false }),
            "torus-bar" => Some(Family::Torus { barred: true }),
            "ras" => Some(Family::Ras),
            _ => None,
        }
    }

    pub fn generate(self, n: u32) -> Result<Fixture, InvalidN> {
        match self {
            Family::Kn => family_kn(n),
            Family::Torus { barred } => family_torus(n, barred),
            Family::Ras => family_ras(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleName {
    RegionFig11,
    StrictIneqFig17,
}

impl ExampleName {
    pub const ALL: [ExampleName; 2] = [ExampleName::RegionFig11, ExampleName::StrictIneqFig17];

    pub fn name(self) -> &'static str {
        match self {
            ExampleName::RegionFig11 => "fig11",
            ExampleName::StrictIneqFig17 => "fig17",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvalidN(pub u32);

impl fmt::Display for InvalidN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family index must be at least 1, got {}", self.0)
    }
}

impl core::error::Error for InvalidN {}

/// Published affine data for one crossing. `ind_over` is `None` where only
/// its parity is pinned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub label: String,
    pub chord: ChordId,
    pub ind_over: Option<i64>,
    pub rho: u8,
    pub p_over: u8,
    pub p_under: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub n: u32,
    pub code: TwistedGaussCode,
    pub expected_j: i64,
    pub expected_q: Poly2,
    pub expected_table: Vec<TableRow>,
    pub arcshift_number: Option<u32>,
    pub forbidden_number: Option<u32>,
    pub region_arcshift_upper: Option<u32>,
}

impl Fixture {
    fn new(name: &str, n: u32, code: TwistedGaussCode, expected_j: i64, expected_q: Poly2) -> Self {
        Self {
            name: name.to_string(),
            n,
            code,
            expected_j,
            expected_q,
            expected_table: Vec::new(),
            arcshift_number: None,
            forbidden_number: None,
            region_arcshift_upper: None,
        }
    }
}

/// Assembles blocks written with letter chords, numbering chords by first
/// appearance. Tokens are `O<letter>`, `U<letter>` or `*`.
struct Builder {
    entries: Vec<Entry>,
    signs: BTreeMap<ChordId, Sign>,
}

impl Builder {
    fn new() -> Self {
        Self { entries: Vec::new(), signs: BTreeMap::new() }
    }

    /// Appends one block and returns the chord id given to each letter.
    fn block(&mut self, word: &str, signs: &[(char, Sign)]) -> BTreeMap<char, ChordId> {
        let mut ids = BTreeMap::new();
        for tok in word.split_whitespace() {
            if tok == "*" {
                self.entries.push(Entry::Bar);
                continue;
            }
            let mut chars = tok.chars();
            let role = match chars.next() {
                Some('O') => Role::Over,
                _ => Role::Under,
            };
            let letter = chars.next().expect("letter");
            let next = self.signs.len() as ChordId + 1;
            let chord = *ids.entry(letter).or_insert_with(|| {
                let sign = signs.iter().find(|(l, _)| *l == letter).map_or(Sign::Pos, |(_, s)| *s);
                self.signs.insert(next, sign);
                next
            });
            self.entries.push(Entry::Passage(Passage { chord, role }));
        }
        ids
    }

    fn bar(&mut self) {
        self.entries.push(Entry::Bar);
    }

    fn finish(self) -> TwistedGaussCode {
        TwistedGaussCode::from_parts(self.entries, self.signs)
    }
}

fn row(label: String, chord: ChordId, ind_over: Option<i64>, rho: u8, p_over: u8, p_under: u8) -> TableRow {
    TableRow { label, chord, ind_over, rho, p_over, p_under }
}

fn sq(a: u32, b: u32) -> Poly2 {
    Poly2::binomial_product(a, b, a, b)
}

fn check_n(n: u32) -> Result<(), InvalidN> {
    if n == 0 {
        Err(InvalidN(n))
    } else {
        Ok(())
    }
}

/// Blocks `B_1 ... B_n` with crossings `c_i, d_i, d'_i`; two bars in `B_1`.
pub fn family_kn(n: u32) -> Result<Fixture, InvalidN> {
    check_n(n)?;
    let mut b = Builder::new();
    let mut rows = Vec::new();
    for i in 1..=n {
        let word = if i == 1 { "Oc Ue Uc Ud * Oe Od *" } else { "Oc Ue Uc Ud Oe Od" };
        let ids = b.block(word, &[]);
        rows.push(row(format!("c_{i}"), ids[&'c'], Some(1), 1, 0, 0));
        if i == 1 {
            rows.push(row("d_1".to_string(), ids[&'e'], None, 0, 1, 1));
            rows.push(row("d'_1".to_string(), ids[&'d'], None, 1, 1, 1));
        } else {
            rows.push(row(format!("d_{i}"), ids[&'d'], None, 1, 0, 0));
            rows.push(row(format!("d'_{i}"), ids[&'e'], None, 0, 0, 0));
        }
    }
    let q = sq(1, 1) + sq(0, 1) + sq(1, 0).scale(2 * i64::from(n) - 1);
    let mut f = Fixture::new(Family::Kn.name(), n, b.finish(), 2 * i64::from(n), q);
    f.expected_table = rows;
    f.arcshift_number = Some(n);
    Ok(f)
}

/// Crossings `a_i, b_i`; `barred` adds one bar on the final arc.
pub fn family_torus(n: u32, barred: bool) -> Result<Fixture, InvalidN> {
    check_n(n)?;
    let mut b = Builder::new();
    let mut rows = Vec::new();
    let prime = if barred { "'" } else { "" };
    for k in 1..=n {
        let odd = k % 2 == 1;
        let word = if odd { "Oa * Ob Ua Ub *" } else { "Ub Ua Ob * Oa *" };
        let ids = b.block(word, &[]);
        let (a, bb) = match (odd, barred) {
            (true, false) => ((-1, 1, 1), (1, 0, 0)),
            (false, false) => ((1, 1, 1), (-1, 0, 0)),
            (true, true) => ((-1, 1, 0), (1, 0, 1)),
            (false, true) => ((1, 0, 1), (-1, 1, 0)),
        };
        rows.push(row(format!("a{prime}_{k}"), ids[&'a'], Some(a.0), 1, a.1, a.2));
        rows.push(row(format!("b{prime}_{k}"), ids[&'b'], Some(bb.0), 1, bb.1, bb.2));
    }
    if barred {
        b.bar();
    }
    let n64 = i64::from(n);
    let q = if barred {
        Poly2::binomial_product(1, 1, 1, 0).scale(2 * n64)
    } else {
        sq(1, 1).scale(n64) + sq(1, 0).scale(n64)
    };
    let family = Family::Torus { barred };
    let mut f = Fixture::new(family.name(), n, b.finish(), 2 * n64, q);
    f.expected_table = rows;
    f.arcshift_number = Some(n);
    Ok(f)
}

/// Crossings `c_i` (positive) and `c'_i` (negative).
pub fn family_ras(n: u32) -> Result<Fixture, InvalidN> {
    check_n(n)?;
    let mut b = Builder::new();
    let mut rows = Vec::new();
    for k in 1..=n {
        let odd = k % 2 == 1;
        let word = if odd { "Oa Ub * Ua * Ob" } else { "Oa * Ob Ua Ub *" };
        let ids = b.block(word, &[('a', Sign::Pos), ('b', Sign::Neg)]);
        let ind = if odd { -1 } else { 1 };
        rows.push(row(format!("c_{k}"), ids[&'a'], Some(ind), 1, 1, 1));
        rows.push(row(format!("c'_{k}"), ids[&'b'], Some(ind), 1, 0, 0));
    }
    let n64 = i64::from(n);
    let q = sq(1, 1).scale(n64) - sq(1, 0).scale(n64);
    let mut f = Fixture::new(Family::Ras.name(), n, b.finish(), 0, q);
    f.expected_table = rows;
    Ok(f)
}

pub fn example(name: ExampleName) -> Fixture {
    match name {
        ExampleName::RegionFig11 => {
            let code = parse_gauss_code("O1+ * O2+ U1+ * U2+").expect("fixture");
            let q = sq(1, 1).scale(2);
            let mut f = Fixture::new(name.name(), 1, code, 2, q);
            f.forbidden_number = Some(1);
            f.region_arcshift_upper = Some(1);
            f
        }
        ExampleName::StrictIneqFig17 => {
            let code = parse_gauss_code("* O1+ O2+ O3+ U2+ U1+ U3+").expect("fixture");
            let q = Poly2::binomial_product(1, 1, 1, 0).scale(2);
            let mut f = Fixture::new(name.name(), 1, code, 2, q);
            f.forbidden_number = Some(2);
            f.region_arcshift_upper = Some(1);
            f
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordError {
    Shape(String),
    UnknownFamily(String),
    BadIndex(String),
    Code(ParseError),
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordError::Shape(l) => write!(f, "expected `<family> <n> <code>`, got {l:?}"),
            RecordError::UnknownFamily(s) => write!(f, "unknown family {s:?}"),
            RecordError::BadIndex(s) => write!(f, "bad family index {s:?}"),
            RecordError::Code(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RecordError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureRecord {
    pub family: String,
    pub n: u32,
    pub code: TwistedGaussCode,
}

fn is_known(family: &str) -> bool {
    Family::from_name(family).is_some() || ExampleName::ALL.iter().any(|e| e.name() == family)
}

/// Reads one `<family> <n> <code>` line.
pub fn parse_record(line: &str) -> Result<FixtureRecord, RecordError> {
    let mut parts = line.trim_start().splitn(3, ' ');
    let (Some(family), Some(n)) = (parts.next(), parts.next()) else {
        return Err(RecordError::Shape(line.to_string()));
    };
    if !is_known(family) {
        return Err(RecordError::UnknownFamily(family.to_string()));
    }
    let n: u32 = n.parse().map_err(|_| RecordError::BadIndex(n.to_string()))?;
    let code = parse_gauss_code(parts.next().unwrap_or("")).map_err(RecordError::Code)?;
    Ok(FixtureRecord { family: family.to_string(), n, code })
}

/// Every non-blank, non-comment line of a fixture file.
pub fn parse_records(text: &str) -> Result<Vec<FixtureRecord>, RecordError> {
    text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')).map(parse_record).collect()
}

pub fn format_record(family: &str, n: u32, code: &TwistedGaussCode) -> String {
    format!("{family} {n} {code}")
}

/// The records [`FIXTURE_DATA`] should hold.
pub fn generated_records(max_n: u32) -> Vec<String> {
    let mut out = Vec::new();
    for family in [Family::Kn, Family::Torus { barred: false }, Family::Torus { barred: true }, Family::Ras] {
        for n in 1..=max_n {
            let f = family.generate(n).expect("n >= 1");
            out.push(format_record(family.name(), n, &f.code));
        }
    }
    for e in ExampleName::ALL {
        let f = example(e);
        out.push(format_record(e.name(), f.n, &f.code));
    }
    out
}
