//! Command-line front end for `tkc-core`.
//!
//! Every command writes one document to stdout. JSON is the stable format;
//! text output is for people.

use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use tkc_core::families::{example, ExampleName, Family, Fixture};
use tkc_core::invariants::affine_table;
use tkc_core::search::{BoundCert, SearchOutcome, SearchReport, SearchTrace};
use tkc_core::{
    bounds, canonicalize, certify, odd_writhe, parse_gauss_code, q_polynomial, unknotting_search, validate, Bounds,
    CountedSet, Entry, Poly2, SearchConfig, TwistedGaussCode,
};

#[derive(Parser, Debug)]
#[command(name = "tkc", version, about = "Twisted knot Gauss codes: invariants, moves and bounded searches")]
pub struct Cli {
    /// Output format. Defaults to json, except `family`, which prints the bare code.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "TKC_NODE_CAP", default_value_t = SearchConfig::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
    #[arg(long, global = true, default_value_t = SearchConfig::DEFAULT_FREE_BUDGET)]
    pub free_budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MoveSet {
    Arcshift,
    Forbidden,
}

impl From<MoveSet> for CountedSet {
    fn from(m: MoveSet) -> Self {
        match m {
            MoveSet::Arcshift => CountedSet::ArcShift,
            MoveSet::Forbidden => CountedSet::Forbidden,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Kn,
    Torus,
    TorusBar,
    Ras,
}

impl From<FamilyName> for Family {
    fn from(f: FamilyName) -> Self {
        match f {
            FamilyName::Kn => Family::Kn,
            FamilyName::Torus => Family::Torus { barred: false },
            FamilyName::TorusBar => Family::Torus { barred: true },
            FamilyName::Ras => Family::Ras,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a code and echo its canonical form.
    Parse { code: String },
    /// Odd writhe, bar parity, Q(s,t) and the per-chord affine table.
    Invariants { code: String },
    /// Lower bounds from the odd writhe.
    Bounds { code: String },
    /// Bounded search for an unknotting sequence.
    Search {
        code: String,
        #[arg(long, value_enum)]
        moves: MoveSet,
        #[arg(long)]
        max: u32,
        /// Also let the free phase insert crossings.
        #[arg(long)]
        allow_add: bool,
    },
    /// Lower and upper bounds for all three numbers.
    Certify {
        code: String,
        #[arg(long)]
        max: u32,
        #[arg(long)]
        allow_add: bool,
    },
    /// Print a member of a built-in family.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        #[arg(long)]
        n: u32,
    },
    /// List the built-in example codes.
    Examples,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid code")]
    Invalid(Vec<String>),
    #[error("{0}")]
    Domain(String),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv` (including the program name), runs the command against the
/// process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(doc) => {
            if out.write_all(doc.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            match &e {
                CliError::Invalid(vs) => {
                    for v in vs {
                        let _ = writeln!(err, "error: {v}");
                    }
                }
                other => {
                    let _ = writeln!(err, "error: {other}");
                }
            }
            e.exit_code()
        }
    }
}

fn read_code(arg: &str, stdin: &mut dyn Read) -> Result<TwistedGaussCode, CliError> {
    let text = if arg == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        arg.to_string()
    };
    let code = parse_gauss_code(text.trim()).map_err(|e| CliError::Invalid(vec![e.to_string()]))?;
    let violations = validate(&code);
    if !violations.is_empty() {
        return Err(CliError::Invalid(violations.iter().map(ToString::to_string).collect()));
    }
    Ok(code)
}

fn config(cli: &Cli, set: CountedSet, max: u32, allow_add: bool) -> SearchConfig {
    SearchConfig {
        node_cap: cli.node_cap,
        free_budget: cli.free_budget,
        allow_add_moves: allow_add,
        seed: cli.seed,
        ..SearchConfig::new(set, max)
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("plain data serializes");
    s.push('\n');
    s
}

/// Runs a parsed command and returns the document to print.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let text = cli.format == Some(Format::Text);
    match &cli.command {
        Command::Parse { code } => {
            let c = read_code(code, stdin)?;
            let echo = ParseEcho::new(&c.canonical_form());
            Ok(if text { format!("{}\n", echo.canonical) } else { json(&echo) })
        }
        Command::Invariants { code } => {
            let c = read_code(code, stdin)?;
            let r = InvariantReport::new(&c);
            Ok(if text { r.text() } else { json(&r) })
        }
        Command::Bounds { code } => {
            let c = read_code(code, stdin)?;
            let r = BoundsReport::from(bounds(&c));
            Ok(if text {
                format!(
                    "J = {}\nbar parity: {}\narc shift number >= {}\nforbidden number >= {}\n",
                    r.j, r.bar_parity, r.arcshift_lower, r.forbidden_lower
                )
            } else {
                json(&r)
            })
        }
        Command::Search { code, moves, max, allow_add } => {
            let c = read_code(code, stdin)?;
            let report = unknotting_search(&c, &config(cli, (*moves).into(), *max, *allow_add));
            let r = SearchDoc::new(&report);
            Ok(if text { r.text() } else { json(&r) })
        }
        Command::Certify { code, max, allow_add } => {
            let c = read_code(code, stdin)?;
            let cert = certify(&c, &config(cli, CountedSet::ArcShift, *max, *allow_add))
                .map_err(|e| CliError::Domain(e.to_string()))?;
            let r = CertificateDoc {
                j: cert.odd_writhe,
                arcshift: BoundDoc::from(&cert.arcshift),
                forbidden: BoundDoc::from(&cert.forbidden),
                region_arcshift: BoundDoc::from(&cert.region_arcshift),
                budget: Budget { nodes: cert.nodes, exhausted: cert.exhausted },
            };
            Ok(if text { r.text() } else { json(&r) })
        }
        Command::Family { name, n } => {
            let f = Family::from(*name).generate(*n).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(if cli.format == Some(Format::Json) { json(&FixtureDoc::from(&f)) } else { format!("{}\n", f.code) })
        }
        Command::Examples => {
            let all: Vec<FixtureDoc> = ExampleName::ALL.iter().map(|&e| FixtureDoc::from(&example(e))).collect();
            Ok(if text { all.iter().map(|f| format!("{}\t{}\n", f.name, f.code)).collect() } else { json(&all) })
        }
    }
}

#[derive(Serialize)]
struct ChordDoc {
    id: u32,
    sign: i64,
}

#[derive(Serialize)]
struct ParseEcho {
    chords: Vec<ChordDoc>,
    entries: Vec<String>,
    bars: usize,
    canonical: String,
}

impl ParseEcho {
    fn new(c: &TwistedGaussCode) -> Self {
        let entries = c
            .entries()
            .iter()
            .map(|e| match e {
                Entry::Passage(p) => format!("{}{}", p.role.symbol(), p.chord),
                Entry::Bar => "*".to_string(),
            })
            .collect();
        let mut chords: Vec<ChordDoc> =
            c.chords().iter().map(|ch| ChordDoc { id: ch.id, sign: ch.sign.value() }).collect();
        chords.sort_by_key(|d| d.id);
        Self { chords, entries, bars: c.bar_count(), canonical: c.to_string() }
    }
}

#[derive(Serialize)]
struct Term {
    s: u32,
    t: u32,
    coeff: i64,
}

fn terms(q: &Poly2) -> Vec<Term> {
    q.terms().map(|((s, t), coeff)| Term { s, t, coeff }).collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TableDoc {
    chord: u32,
    sign: i64,
    ind_over: i64,
    rho: u8,
    p_over: u8,
    p_under: u8,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct InvariantReport {
    #[serde(rename = "J")]
    j: i64,
    bar_parity: &'static str,
    arcshift_lower: u64,
    forbidden_lower: u64,
    #[serde(rename = "Q")]
    q: Vec<Term>,
    table: Vec<TableDoc>,
    #[serde(skip)]
    q_text: String,
}

impl InvariantReport {
    fn new(c: &TwistedGaussCode) -> Self {
        let b = bounds(c);
        let q = q_polynomial(c);
        let table = affine_table(c)
            .into_iter()
            .map(|a| TableDoc {
                chord: a.chord_id,
                sign: c.sign(a.chord_id).map_or(0, |s| s.value()),
                ind_over: a.ind_over,
                rho: a.rho,
                p_over: a.p_over,
                p_under: a.p_under,
            })
            .collect();
        Self {
            j: odd_writhe(c),
            bar_parity: b.bar_parity.as_str(),
            arcshift_lower: b.arcshift_lower,
            forbidden_lower: b.forbidden_lower,
            q: terms(&q),
            table,
            q_text: q.to_string(),
        }
    }

    fn text(&self) -> String {
        let mut s = format!(
            "J = {}\nbar parity: {}\nQ = {}\narc shift number >= {}\nforbidden number >= {}\n",
            self.j, self.bar_parity, self.q_text, self.arcshift_lower, self.forbidden_lower
        );
        if !self.table.is_empty() {
            s.push_str("chord sign ind rho p_over p_under\n");
            for r in &self.table {
                s.push_str(&format!(
                    "{:>5} {:>4} {:>3} {:>3} {:>6} {:>7}\n",
                    r.chord, r.sign, r.ind_over, r.rho, r.p_over, r.p_under
                ));
            }
        }
        s
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundsReport {
    #[serde(rename = "J")]
    j: i64,
    bar_parity: &'static str,
    arcshift_lower: u64,
    forbidden_lower: u64,
}

impl From<Bounds> for BoundsReport {
    fn from(b: Bounds) -> Self {
        Self {
            j: b.odd_writhe,
            bar_parity: b.bar_parity.as_str(),
            arcshift_lower: b.arcshift_lower,
            forbidden_lower: b.forbidden_lower,
        }
    }
}

#[derive(Serialize)]
struct StepDoc {
    #[serde(rename = "move")]
    mv: String,
    result: String,
    counted: bool,
}

fn steps(t: &SearchTrace) -> Vec<StepDoc> {
    t.steps.iter().map(|s| StepDoc { mv: s.mv.clone(), result: s.result.text.clone(), counted: s.counted }).collect()
}

fn steps_text(t: &SearchTrace) -> String {
    let mut s = format!("start: {}\n", t.start.text);
    for st in &t.steps {
        let mark = if st.counted { "*" } else { " " };
        s.push_str(&format!("{mark} {:<24} -> {}\n", st.mv, st.result.text));
    }
    s
}

#[derive(Serialize)]
struct Budget {
    nodes: usize,
    exhausted: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SearchDoc {
    /// `found`, `none` (exhausted within the depth) or `unknown` (node cap hit).
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counted_used: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terminal: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<StepDoc>>,
    budget: Budget,
    #[serde(skip)]
    text: String,
}

fn terminal_name(k: tkc_core::TrivialKind) -> &'static str {
    match k {
        tkc_core::TrivialKind::NoBar => "noBar",
        tkc_core::TrivialKind::OneBar => "oneBar",
    }
}

impl SearchDoc {
    fn new(r: &SearchReport) -> Self {
        let budget = Budget { nodes: r.nodes, exhausted: r.exhausted };
        match &r.outcome {
            SearchOutcome::Found(t) => Self {
                outcome: "found",
                start: Some(t.start.text.clone()),
                counted_used: Some(t.counted_used),
                terminal: Some(terminal_name(t.terminal)),
                trace: Some(steps(t)),
                budget,
                text: format!(
                    "{}found: {} counted move(s), ends {}\n",
                    steps_text(t),
                    t.counted_used,
                    terminal_name(t.terminal)
                ),
            },
            SearchOutcome::NoSequence => Self::empty("none", budget, "no sequence within the depth\n"),
            SearchOutcome::Unknown => Self::empty("unknown", budget, "unknown: node cap reached\n"),
        }
    }

    fn empty(outcome: &'static str, budget: Budget, text: &str) -> Self {
        Self { outcome, start: None, counted_used: None, terminal: None, trace: None, budget, text: text.to_string() }
    }

    fn text(&self) -> String {
        format!("{}nodes: {}\n", self.text, self.budget.nodes)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundDoc {
    lower: u64,
    upper: Option<u64>,
    exact: bool,
    lower_source: &'static str,
    trace: Vec<StepDoc>,
}

impl From<&BoundCert> for BoundDoc {
    fn from(b: &BoundCert) -> Self {
        Self {
            lower: b.lower,
            upper: b.upper,
            exact: b.exact,
            lower_source: b.lower_source,
            trace: b.trace.as_ref().map(steps).unwrap_or_default(),
        }
    }
}

impl BoundDoc {
    fn text(&self, name: &str) -> String {
        let upper = self.upper.map_or("?".to_string(), |u| u.to_string());
        let exact = if self.exact { " (exact)" } else { "" };
        format!("{name}: {} <= n <= {upper}{exact}\n", self.lower)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CertificateDoc {
    #[serde(rename = "J")]
    j: i64,
    arcshift: BoundDoc,
    forbidden: BoundDoc,
    region_arcshift: BoundDoc,
    budget: Budget,
}

impl CertificateDoc {
    fn text(&self) -> String {
        format!(
            "J = {}\n{}{}{}nodes: {}{}\n",
            self.j,
            self.arcshift.text("arc shift number"),
            self.forbidden.text("forbidden number"),
            self.region_arcshift.text("region arc shift number"),
            self.budget.nodes,
            if self.budget.exhausted { " (cap reached)" } else { "" }
        )
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FixtureDoc {
    name: String,
    n: u32,
    code: String,
    canonical: String,
    #[serde(rename = "J")]
    j: i64,
    #[serde(rename = "Q")]
    q: Vec<Term>,
    arcshift_number: Option<u32>,
    forbidden_number: Option<u32>,
    region_arcshift_upper: Option<u32>,
}

impl From<&Fixture> for FixtureDoc {
    fn from(f: &Fixture) -> Self {
        Self {
            name: f.name.clone(),
            n: f.n,
            code: f.code.to_string(),
            canonical: canonicalize(&f.code).text,
            j: f.expected_j,
            q: terms(&f.expected_q),
            arcshift_number: f.arcshift_number,
            forbidden_number: f.forbidden_number,
            region_arcshift_upper: f.region_arcshift_upper,
        }
    }
}
