//! Bounded unknotting search over canonical codes, and certified bounds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gauss::{
    canonicalize, is_trivial, parse_gauss_code, CanonicalCode, Entry, ParseError, Passage, Role, Sign, TrivialKind,
    TwistedGaussCode,
};
use crate::invariants::{bounds, odd_writhe, q_polynomial};
use crate::moves::{apply, enumerate_moves, MoveError, MoveInstance, MoveKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountedSet {
    ArcShift,
    Forbidden,
}

impl CountedSet {
    pub fn kinds(self) -> &'static [MoveKind] {
        match self {
            CountedSet::ArcShift => &MoveKind::ARC_SHIFT,
            CountedSet::Forbidden => &MoveKind::FORBIDDEN,
        }
    }

    pub fn contains(self, kind: MoveKind) -> bool {
        self.kinds().contains(&kind)
    }
}

/// Search limits. `seed` is carried for reproducible reporting; the search
/// itself is deterministic and does not draw random numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub counted_set: CountedSet,
    pub max_counted: u32,
    pub free_budget: usize,
    pub node_cap: usize,
    pub allow_add_moves: bool,
    pub seed: u64,
}

impl SearchConfig {
    pub const DEFAULT_FREE_BUDGET: usize = 16;
    pub const DEFAULT_NODE_CAP: usize = 1_000_000;

    pub fn new(counted_set: CountedSet, max_counted: u32) -> Self {
        Self {
            counted_set,
            max_counted,
            free_budget: Self::DEFAULT_FREE_BUDGET,
            node_cap: Self::DEFAULT_NODE_CAP,
            allow_add_moves: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Trace line of the move, applied to the canonical form of the previous state.
    pub mv: String,
    pub result: CanonicalCode,
    pub counted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTrace {
    pub start: CanonicalCode,
    pub steps: Vec<TraceStep>,
    pub counted_used: u32,
    pub terminal: TrivialKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayError {
    Parse(ParseError),
    Move(MoveError),
    /// The move produced a different state than the trace records.
    Diverged {
        step: usize,
        expected: String,
        got: String,
    },
    CountMismatch {
        recorded: u32,
        replayed: u32,
    },
    NotTrivial(String),
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::Parse(e) => write!(f, "{e}"),
            ReplayError::Move(e) => write!(f, "{e}"),
            ReplayError::Diverged { step, expected, got } => {
                write!(f, "step {step} gives {got:?}, trace says {expected:?}")
            }
            ReplayError::CountMismatch { recorded, replayed } => {
                write!(f, "trace records {recorded} counted moves, replay used {replayed}")
            }
            ReplayError::NotTrivial(s) => write!(f, "trace ends at nontrivial {s:?}"),
        }
    }
}

impl SearchTrace {
    /// Re-applies every step from `start` and checks each recorded state.
    pub fn replay(&self, counted_set: CountedSet) -> Result<TrivialKind, ReplayError> {
        let mut cur = parse_gauss_code(&self.start.text).map_err(ReplayError::Parse)?;
        let mut counted = 0;
        for (step, s) in self.steps.iter().enumerate() {
            let m: MoveInstance = s.mv.parse().map_err(ReplayError::Move)?;
            if counted_set.contains(m.kind) {
                counted += 1;
            }
            let next = apply(&cur, &m).map_err(ReplayError::Move)?;
            let got = canonicalize(&next);
            if got != s.result {
                return Err(ReplayError::Diverged { step, expected: s.result.text.clone(), got: got.text });
            }
            cur = next.canonical_form();
        }
        if counted != self.counted_used {
            return Err(ReplayError::CountMismatch { recorded: self.counted_used, replayed: counted });
        }
        match is_trivial(&cur) {
            Some(k) if k == self.terminal => Ok(k),
            _ => Err(ReplayError::NotTrivial(cur.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(SearchTrace),
    /// Every state up to `max_counted` was explored without reaching a trivial code.
    NoSequence,
    /// The node cap stopped the search first.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: usize,
    pub exhausted: bool,
}

impl SearchReport {
    pub fn trace(&self) -> Option<&SearchTrace> {
        match &self.outcome {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

type Step = (MoveInstance, CanonicalCode);

fn key(code: &TwistedGaussCode) -> (usize, String) {
    (code.len(), code.to_string())
}

fn step(code: &TwistedGaussCode, m: MoveInstance, log: &mut Vec<Step>) -> TwistedGaussCode {
    let next = apply(code, &m).expect("enumerated move applies").canonical_form();
    log.push((m, CanonicalCode { text: next.to_string(), bar_count: next.bar_count() }));
    next
}

const SHRINKING: [MoveKind; 3] = [MoveKind::R1Del, MoveKind::R2Del, MoveKind::BarCancel];

fn greedy(mut code: TwistedGaussCode, log: &mut Vec<Step>) -> TwistedGaussCode {
    loop {
        let Some(m) = enumerate_moves(&code, &SHRINKING).into_iter().next() else { return code };
        code = step(&code, m, log);
    }
}

fn reduce_logged(code: &TwistedGaussCode, free_budget: usize, allow_add: bool) -> (TwistedGaussCode, Vec<Step>) {
    let mut log = Vec::new();
    let mut best = greedy(code.canonical_form(), &mut log);
    let mut kinds = vec![MoveKind::R3, MoveKind::BarSlide];
    if allow_add {
        kinds.extend([MoveKind::R1Add, MoveKind::R2Add]);
    }
    let mut budget = free_budget;
    'restart: while budget > 0 && !best.is_empty() {
        let best_key = key(&best);
        let mut seen = BTreeSet::new();
        seen.insert(best_key.1.clone());
        let mut queue = alloc::collections::VecDeque::new();
        queue.push_back((best.clone(), Vec::<Step>::new()));
        while let Some((cur, path)) = queue.pop_front() {
            for m in enumerate_moves(&cur, &kinds) {
                if budget == 0 {
                    break 'restart;
                }
                budget -= 1;
                let mut p = path.clone();
                let next = step(&cur, m, &mut p);
                if !seen.insert(next.to_string()) {
                    continue;
                }
                let shrunk = greedy(next.clone(), &mut p);
                if key(&shrunk) < best_key {
                    log.extend(p);
                    best = shrunk;
                    continue 'restart;
                }
                queue.push_back((next, p));
            }
        }
        break;
    }
    (best, log)
}

/// Free simplification: shrinking moves to a fixed point, then a bounded
/// breadth-first walk over R3 and bar slides looking for further shrinks.
/// Returns the canonical form of the smallest code reached.
pub fn reduce(code: &TwistedGaussCode, free_budget: usize) -> TwistedGaussCode {
    reduce_logged(code, free_budget, false).0
}

struct Node {
    code: TwistedGaussCode,
    parent: Option<usize>,
    steps: Vec<(Step, bool)>,
    depth: u32,
}

fn build_trace(nodes: &[Node], mut idx: usize, start: CanonicalCode) -> SearchTrace {
    let terminal = is_trivial(&nodes[idx].code).expect("terminal node is trivial");
    let counted_used = nodes[idx].depth;
    let mut chunks = Vec::new();
    loop {
        chunks.push(&nodes[idx].steps);
        match nodes[idx].parent {
            Some(p) => idx = p,
            None => break,
        }
    }
    let steps = chunks
        .into_iter()
        .rev()
        .flatten()
        .map(|((m, c), counted)| TraceStep { mv: m.to_string(), result: c.clone(), counted: *counted })
        .collect();
    SearchTrace { start, steps, counted_used, terminal }
}

/// Level-by-level search on counted depth `0..=max_counted`. Each transition
/// is one counted move followed by [`reduce`]; states are deduplicated on
/// canonical text. The first trivial state found has minimal counted depth.
pub fn unknotting_search(code: &TwistedGaussCode, config: &SearchConfig) -> SearchReport {
    let start_form = code.canonical_form();
    let start = canonicalize(&start_form);
    let (root, log) = reduce_logged(&start_form, config.free_budget, config.allow_add_moves);
    let mut nodes =
        vec![Node { code: root.clone(), parent: None, steps: log.into_iter().map(|s| (s, false)).collect(), depth: 0 }];
    let found = |nodes: &[Node], i| SearchReport {
        outcome: SearchOutcome::Found(build_trace(nodes, i, start.clone())),
        nodes: nodes.len(),
        exhausted: false,
    };
    if is_trivial(&root).is_some() {
        return found(&nodes, 0);
    }
    let mut visited: BTreeMap<String, usize> = BTreeMap::new();
    visited.insert(root.to_string(), 0);
    let mut level = vec![0usize];
    for depth in 1..=config.max_counted {
        let mut next_level = Vec::new();
        for &i in &level {
            let moves = enumerate_moves(&nodes[i].code, config.counted_set.kinds());
            for m in moves {
                let mut log = Vec::new();
                let after = step(&nodes[i].code, m, &mut log);
                let (reduced, more) = reduce_logged(&after, config.free_budget, config.allow_add_moves);
                let text = reduced.to_string();
                if visited.contains_key(&text) {
                    continue;
                }
                if nodes.len() >= config.node_cap {
                    return SearchReport { outcome: SearchOutcome::Unknown, nodes: nodes.len(), exhausted: true };
                }
                let mut steps: Vec<(Step, bool)> = log.into_iter().map(|s| (s, true)).collect();
                steps.extend(more.into_iter().map(|s| (s, false)));
                visited.insert(text, nodes.len());
                let trivial = is_trivial(&reduced).is_some();
                nodes.push(Node { code: reduced, parent: Some(i), steps, depth });
                if trivial {
                    return found(&nodes, nodes.len() - 1);
                }
                next_level.push(nodes.len() - 1);
            }
        }
        level = next_level;
        if level.is_empty() {
            break;
        }
    }
    SearchReport { outcome: SearchOutcome::NoSequence, nodes: nodes.len(), exhausted: false }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCert {
    pub lower: u64,
    pub upper: Option<u64>,
    pub exact: bool,
    /// How the lower bound was obtained.
    pub lower_source: &'static str,
    pub trace: Option<SearchTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub odd_writhe: i64,
    pub arcshift: BoundCert,
    pub forbidden: BoundCert,
    pub region_arcshift: BoundCert,
    pub nodes: usize,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyError {
    /// A search beat a proven lower bound: the move semantics are wrong.
    UpperBelowLower { which: &'static str, lower: u64, upper: u64 },
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::UpperBelowLower { which, lower, upper } => {
                write!(f, "{which}: upper bound {upper} is below lower bound {lower}")
            }
        }
    }
}

impl core::error::Error for CertifyError {}

fn bound(
    which: &'static str,
    lower: u64,
    source: &'static str,
    report: &SearchReport,
) -> Result<BoundCert, CertifyError> {
    let trace = report.trace().cloned();
    let upper = trace.as_ref().map(|t| u64::from(t.counted_used));
    if let Some(u) = upper {
        if u < lower {
            return Err(CertifyError::UpperBelowLower { which, lower, upper: u });
        }
    }
    Ok(BoundCert { lower, upper, exact: upper == Some(lower), lower_source: source, trace })
}

/// Lower bounds from the odd writhe, upper bounds from searches. A nonzero
/// `J` or `Q` also forces at least one move.
pub fn certify(code: &TwistedGaussCode, config: &SearchConfig) -> Result<Certificate, CertifyError> {
    let b = bounds(code);
    let nontrivial = u64::from(b.odd_writhe != 0 || !q_polynomial(code).is_zero());
    let arc = unknotting_search(code, &SearchConfig { counted_set: CountedSet::ArcShift, ..config.clone() });
    let forb = unknotting_search(code, &SearchConfig { counted_set: CountedSet::Forbidden, ..config.clone() });
    let arcshift = bound("arcshift", b.arcshift_lower.max(nontrivial), "ceil(|J|/2)", &arc)?;
    let forbidden_source = match b.bar_parity {
        crate::invariants::BarParity::Even => "ceil(|J|/4)",
        crate::invariants::BarParity::Odd => "ceil(|J|/2)",
    };
    let forbidden = bound("forbidden", b.forbidden_lower.max(nontrivial), forbidden_source, &forb)?;
    let mut region = bound("regionArcshift", nontrivial, "J != 0 or Q != 0", &forb)?;
    region.exact = region.upper == Some(region.lower);
    Ok(Certificate {
        odd_writhe: odd_writhe(code),
        arcshift,
        forbidden,
        region_arcshift: region,
        nodes: arc.nodes + forb.nodes,
        exhausted: arc.exhausted || forb.exhausted,
    })
}

/// Uniformly shuffled chord passages with random roles and signs, and bars at
/// random gaps. The same arguments always give the same code.
pub fn random_code(n_chords: usize, n_bars: usize, seed: u64) -> TwistedGaussCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<Entry> = Vec::with_capacity(2 * n_chords + n_bars);
    for c in 1..=n_chords as u32 {
        entries.push(Entry::Passage(Passage { chord: c, role: Role::Over }));
        entries.push(Entry::Passage(Passage { chord: c, role: Role::Under }));
    }
    entries.shuffle(&mut rng);
    for _ in 0..n_bars {
        let at = rng.gen_range(0..=entries.len());
        entries.insert(at, Entry::Bar);
    }
    let signs = (1..=n_chords as u32).map(|c| (c, if rng.gen::<bool>() { Sign::Pos } else { Sign::Neg })).collect();
    TwistedGaussCode::from_parts(entries, signs).relabeled()
}
