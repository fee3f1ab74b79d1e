//! The `fsr` command line: parses semigroup specs, prefixes and colorings,
//! runs one library operation and writes a replayable witness file.
//!
//! Exit codes: 0 when a witness was found or a check passed, 1 for a valid
//! negative at the given budget or horizon, 2 for usage, spec or file errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use fsr_core::coloring::Coloring;
use fsr_core::constructions::{self, ConstructionError};
use fsr_core::detectors::{self, ClassifyOptions, Pattern};
use fsr_core::hindman;
use fsr_core::search::DEFAULT_BUDGET;
use fsr_core::semigroup::MAX_ENUMERATION_ORDER;
use fsr_core::tails::{default_schedule, tail_intersection, TailOptions};
use fsr_core::witness::WitnessBody;
use fsr_core::{Element, FsError, Semigroup, SequencePrefix};

pub const TOOL: &str = "fsr";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "fsr", version, about = "Finite-horizon experiments with finite-sums sets in semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Semigroup spec: a JSON file, or inline JSON starting with `{`.
    #[arg(long)]
    pub spec: String,
    /// Comma-separated elements in wire form; replaces the default stream.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Stream terms skipped before the first one taken.
    #[arg(long, default_value_t = 0)]
    pub skip: u64,
    /// Take every `stride`-th stream term.
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// Stream length when no prefix is given.
    #[arg(long)]
    pub len: Option<usize>,
    /// Number of leading enumerated elements searched.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Search node budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for randomized candidates.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    pub workers: usize,
    /// Write the witness here instead of stdout.
    #[arg(short = 'o', long = "output")]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    GroupProper,
    TailToProper,
    Dichotomy,
    Split,
    Minimality,
    RightIdeals,
    LengthDetermined,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-sums set of a prefix.
    Fs(Common),
    /// Sums over at least two indices.
    Fs2(Common),
    /// Checks that no two consecutive index sets have equal sums.
    Proper(Common),
    /// Checks that no two disjoint index sets have equal sums.
    DisjointProper(Common),
    /// Finite-horizon tail intersection.
    Tails {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = fsr_core::tails::DEFAULT_STABILITY_WINDOW)]
        stability_window: usize,
    },
    /// Runs one of the constructions on a stream.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        op: Operation,
        /// Target length.
        #[arg(long)]
        k: Option<usize>,
        /// Number of parts for `split`.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Random candidates for `minimality`.
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Searches for one forbidden pattern.
    Detect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pattern: String,
        /// Type A family size.
        #[arg(long, default_value_t = 16)]
        size: usize,
        /// Type A bound on distinct pairwise sums.
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long, default_value_t = 3)]
        leaves: usize,
        #[arg(long, default_value_t = 3)]
        generators: usize,
        /// Type C bound on distinct multiples.
        #[arg(long, default_value_t = 5)]
        bound: u64,
    },
    /// Runs all detectors and an `FS≥2` certificate search.
    Classify(Common),
    /// Monochromatic finite sums of `k` distinct terms.
    Hindman {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "mod:2")]
        coloring: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Search sumsequences of the prefix instead of subsets of it.
        #[arg(long)]
        within: bool,
    },
    /// Least universe size forcing a monochromatic witness in every coloring.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Pairwise disjoint monochromatic finite-sums sets by recoloring.
    DisjointFamilies {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "mod:2")]
        coloring: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Replays a witness file.
    Verify {
        path: PathBuf,
    },
    /// Counts labeled finite semigroups by brute force.
    EnumerateOracle {
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub verb: String,
    pub options: BTreeMap<String, Value>,
    pub seed: u64,
    /// SHA-256 of the compact JSON body.
    pub body_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub header: Header,
    pub spec: Value,
    pub body: WitnessBody,
    pub verified: bool,
}

pub fn body_hash(body: &WitnessBody) -> String {
    let bytes = serde_json::to_vec(body).expect("bodies serialize");
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A failure that ends the run with a nonzero code.
#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub code: &'static str,
    pub message: String,
}

impl Failure {
    fn usage(code: &'static str, message: impl Into<String>) -> Failure {
        Failure { exit: 2, code, message: message.into() }
    }

    fn negative(code: &'static str, message: impl Into<String>) -> Failure {
        Failure { exit: 1, code, message: message.into() }
    }
}

impl From<FsError> for Failure {
    fn from(e: FsError) -> Self {
        Failure::usage("invalid_input", e.to_string())
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        use ConstructionError::*;
        let code = match &e {
            StreamExhausted { .. } => "stream_exhausted",
            NotBijective => "not_bijective",
            NonEmptyTailIntersection { .. } => "nonempty_tail_intersection",
            NotDisjointProper { .. } => "not_disjoint_proper",
            NoStableBaseline => "no_stable_baseline",
            TooShort { .. } => "too_short",
            NotAGroup(_) => "not_a_group",
            NotASubsemigroup { .. } => "not_a_subsemigroup",
            CarrierTooLarge { .. } => "carrier_too_large",
            InvalidArgument(_) => "invalid_argument",
            VerificationFailed(_) => "verification_failed",
            Fs(_) => "invalid_input",
        };
        // unmet preconditions on the data are negatives, the rest are misuse
        let negative = matches!(e, StreamExhausted { .. } | NotBijective | NonEmptyTailIntersection { .. } | NotDisjointProper { .. } | NoStableBaseline);
        Failure { exit: if negative { 1 } else { 2 }, code, message: e.to_string() }
    }
}

impl From<fsr_core::SemigroupError> for Failure {
    fn from(e: fsr_core::SemigroupError) -> Self {
        Failure::usage("spec", e.to_string())
    }
}

/// Result of a successful dispatch.
pub struct Outcome {
    pub exit: i32,
    pub file: Option<WitnessFile>,
    pub summary: String,
}

pub fn load_spec(spec: &str) -> Result<(Semigroup, Value), Failure> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| Failure::usage("io", format!("{spec}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::usage("spec", format!("{spec}: {e}")))?;
    let sg = Semigroup::from_json(&value)?;
    Ok((sg, value))
}

pub fn parse_elements(sg: &Semigroup, list: &str) -> Result<Vec<Element>, Failure> {
    let values: Vec<Value> = serde_json::from_str(&format!("[{list}]"))
        .map_err(|e| Failure::usage("prefix", format!("cannot parse {list:?}: {e}")))?;
    values.iter().map(|v| sg.parse_element(v).map_err(Failure::from)).collect()
}

pub fn parse_coloring(s: &str) -> Result<Coloring, Failure> {
    let bad = |m: String| Failure::usage("coloring", m);
    let parts: Vec<&str> = s.splitn(3, ':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad(format!("bad number {t:?} in coloring {s:?}")));
    let c = match parts.as_slice() {
        ["paper-fan"] => Coloring::fan_center_leaves(),
        ["mod", r] => Coloring::RankMod { colors: num(r)? as u32 },
        ["random", r, seed] => Coloring::SeededRandom { colors: num(r)? as u32, seed: num(seed)? },
        ["table", path] => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| bad(format!("{path}: {e}")))?
        }
        _ => return Err(bad(format!("unknown coloring {s:?}; use mod:r, random:r:seed, table:path or paper-fan"))),
    };
    if c.colors() == 0 {
        return Err(bad("a coloring needs at least one color".into()));
    }
    Ok(c)
}

fn elements_for(sg: &Semigroup, c: &Common, default_len: usize) -> Result<Vec<Element>, Failure> {
    match &c.prefix {
        Some(p) => parse_elements(sg, p),
        None => {
            let len = c.len.unwrap_or(default_len);
            let v = sg.stream(len, c.skip, c.stride);
            if v.len() < len {
                return Err(Failure::usage("stream", format!("the stream has only {} terms", v.len())));
            }
            Ok(v)
        }
    }
}

struct Run<'a> {
    verb: &'static str,
    options: BTreeMap<String, Value>,
    seed: u64,
    spec: Value,
    sg: &'a Semigroup,
}

impl Run<'_> {
    fn finish(self, body: WitnessBody, summary: String) -> Result<Outcome, Failure> {
        // everything emitted is replayed first
        body.replay(self.sg).map_err(|f| Failure::usage("internal_verification", f.to_string()))?;
        let exit = if body.is_positive() { 0 } else { 1 };
        let header = Header {
            tool: TOOL.into(),
            version: VERSION.into(),
            verb: self.verb.into(),
            options: self.options,
            seed: self.seed,
            body_sha256: body_hash(&body),
        };
        Ok(Outcome { exit, file: Some(WitnessFile { header, spec: self.spec, body, verified: true }), summary })
    }
}

fn options_of(common: &Common, extra: &[(&str, Value)]) -> BTreeMap<String, Value> {
    let mut m: BTreeMap<String, Value> = match serde_json::to_value(common).expect("options serialize") {
        Value::Object(o) => o.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    m.insert("workers".into(), Value::from(common.workers));
    for (k, v) in extra {
        m.insert((*k).into(), v.clone());
    }
    m
}

fn json<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Verify { path } => verify_path(path),
        Command::EnumerateOracle { max_order, .. } => {
            if *max_order == 0 || *max_order > MAX_ENUMERATION_ORDER {
                return Err(Failure::usage("invalid_argument", format!("max order must be in 1..={MAX_ENUMERATION_ORDER}")));
            }
            let counts = (1..=*max_order)
                .map(|n| fsr_core::semigroup::enumerate_finite_semigroups(n).map(Iterator::count))
                .collect::<Result<Vec<_>, _>>()?;
            let body = WitnessBody::EnumerationCounts { counts: counts.clone() };
            let header = Header {
                tool: TOOL.into(),
                version: VERSION.into(),
                verb: "enumerate-oracle".into(),
                options: BTreeMap::from([("max_order".to_string(), Value::from(*max_order))]),
                seed: 0,
                body_sha256: body_hash(&body),
            };
            let spec = serde_json::json!({"family": "finite_cayley", "params": {"order": 1, "table": [0]}});
            Ok(Outcome { exit: 0, file: Some(WitnessFile { header, spec, body, verified: true }), summary: format!("counts {counts:?}") })
        }
        other => dispatch_with_spec(other),
    }
}

fn dispatch_with_spec(command: &Command) -> Result<Outcome, Failure> {
    let (common, verb, extra): (&Common, &'static str, Vec<(&str, Value)>) = match command {
        Command::Fs(c) => (c, "fs", vec![]),
        Command::Fs2(c) => (c, "fs2", vec![]),
        Command::Proper(c) => (c, "proper", vec![]),
        Command::DisjointProper(c) => (c, "disjoint-proper", vec![]),
        Command::Tails { common, stability_window } => (common, "tails", vec![("stability_window", json(stability_window))]),
        Command::Construct { common, op, k, m, trials } => {
            (common, "construct", vec![("op", json(op)), ("k", json(k)), ("m", json(m)), ("trials", json(trials))])
        }
        Command::Detect { common, pattern, size, cap, leaves, generators, bound } => (
            common,
            "detect",
            vec![
                ("pattern", json(pattern)),
                ("size", json(size)),
                ("cap", json(cap)),
                ("leaves", json(leaves)),
                ("generators", json(generators)),
                ("bound", json(bound)),
            ],
        ),
        Command::Classify(c) => (c, "classify", vec![]),
        Command::Hindman { common, coloring, k, within } => {
            (common, "hindman", vec![("coloring", json(coloring)), ("k", json(k)), ("within", json(within))])
        }
        Command::Threshold { common, k, colors, max_n } => {
            (common, "threshold", vec![("k", json(k)), ("colors", json(colors)), ("max_n", json(max_n))])
        }
        Command::DisjointFamilies { common, coloring, m, k } => {
            (common, "disjoint-families", vec![("coloring", json(coloring)), ("m", json(m)), ("k", json(k))])
        }
        Command::Verify { .. } | Command::EnumerateOracle { .. } => unreachable!("handled by dispatch"),
    };
    let (sg, spec) = load_spec(&common.spec)?;
    let run = Run { verb, options: options_of(common, &extra), seed: common.seed, spec, sg: &sg };
    let c = common;
    let workers = c.workers.max(1);
    match command {
        Command::Fs(_) | Command::Fs2(_) => {
            let p = SequencePrefix::new(&sg, elements_for(&sg, c, 8)?)?;
            let two = verb == "fs2";
            let set = if two { p.fs_ge2()? } else { p.fs_set()? };
            let summary = format!("{} distinct sums", set.len());
            run.finish(WitnessBody::FiniteSums { prefix: p.into_elements(), at_least_two: two, set }, summary)
        }
        Command::Proper(_) | Command::DisjointProper(_) => {
            let p = SequencePrefix::new(&sg, elements_for(&sg, c, 8)?)?;
            let disjoint = verb == "disjoint-proper";
            let result = if disjoint { p.disjoint_proper_check()? } else { p.is_proper()? };
            let summary = match &result {
                fsr_core::PairCheck::Holds => "holds".to_string(),
                fsr_core::PairCheck::Violation { first, second } => format!("violation ({first},{second})"),
            };
            run.finish(WitnessBody::Properness { prefix: p.into_elements(), disjoint, result }, summary)
        }
        Command::Tails { stability_window, .. } => {
            let p = SequencePrefix::new(&sg, elements_for(&sg, c, c.horizon.unwrap_or(64))?)?;
            let schedule = default_schedule(c.horizon.unwrap_or(p.len()).min(p.len()));
            let opts = TailOptions { stability_window: *stability_window, ..TailOptions::default() };
            let report = tail_intersection(&p, &schedule, opts)?;
            let summary = match report.stable_value() {
                Some(v) => format!("stable {}", render(v)),
                None => format!("{:?}", report.status).to_lowercase(),
            };
            run.finish(WitnessBody::Tails { prefix: p.into_elements(), report }, summary)
        }
        Command::Construct { op, k, m, trials, .. } => {
            let (default_len, default_k) = match op {
                Operation::GroupProper => (64, 12),
                Operation::TailToProper => (600, 8),
                Operation::Dichotomy => (30, 4),
                Operation::Split => (6, 0),
                Operation::Minimality => (256, 0),
                Operation::RightIdeals => (0, 0),
                Operation::LengthDetermined => (6, 0),
            };
            let k = k.unwrap_or(default_k);
            let (stream, result) = if *op == Operation::RightIdeals {
                let carrier = match &c.prefix {
                    Some(p) => parse_elements(&sg, p)?,
                    None if sg.is_finite() => sg.enumerate(constructions::MAX_IDEAL_CARRIER + 1),
                    None => return Err(Failure::usage("invalid_argument", "right-ideals on an infinite family needs --prefix")),
                };
                (Vec::new(), constructions::right_ideal_scan(&sg, &carrier)?)
            } else {
                let p = SequencePrefix::new(&sg, elements_for(&sg, c, default_len)?)?;
                let r = match op {
                    Operation::GroupProper => constructions::group_proper_subsequence(&p, k)?,
                    Operation::TailToProper => constructions::tail_to_proper(&p, k)?,
                    Operation::Dichotomy => constructions::sumsequence_dichotomy(&p, k, c.budget)?,
                    Operation::Split => constructions::split_into_disjoint_ip(&p, *m)?,
                    Operation::Minimality => constructions::minimality_probe(&p, *trials, c.budget, c.seed)?,
                    Operation::LengthDetermined => constructions::length_determined_check(&p)?,
                    Operation::RightIdeals => unreachable!(),
                };
                (p.into_elements(), r)
            };
            let name = json(op).as_str().unwrap_or_default().to_string();
            let summary = format!("{name}: {}", kind_of(&json(&result)));
            run.finish(WitnessBody::Construction { operation: name, stream, result }, summary)
        }
        Command::Detect { pattern, size, cap, leaves, generators, bound, .. } => {
            let pat = Pattern::parse(pattern)
                .ok_or_else(|| Failure::usage("invalid_argument", format!("unknown pattern {pattern:?}; use type_a, type_b or type_c")))?;
            let h = c.horizon.unwrap_or(100);
            let w = match pat {
                Pattern::TypeA => detectors::detect_type_a(&sg, *size, *cap, h)?,
                Pattern::TypeB => detectors::detect_type_b(&sg, *leaves, h, c.budget)?,
                Pattern::TypeC => detectors::detect_type_c(&sg, *generators, *bound, h, c.budget)?,
            };
            let summary = if w.is_some() { format!("{} witness", pat.name()) } else { format!("no {} witness at horizon {h}", pat.name()) };
            run.finish(WitnessBody::Forbidden { pattern: pat, horizon: h, witness: w }, summary)
        }
        Command::Classify(_) => {
            let h = c.horizon.unwrap_or(100);
            let report = detectors::classify(&sg, h, ClassifyOptions { budget: c.budget, ..ClassifyOptions::default() })?;
            let summary = match report.obstruction() {
                Some(p) => format!("OBSTRUCTION_FOUND {}", p.name()),
                None => format!("NO_WITNESS_AT_HORIZON {h}"),
            };
            run.finish(WitnessBody::Classification { report }, summary)
        }
        Command::Hindman { coloring, k, within, .. } => {
            let coloring = parse_coloring(coloring)?;
            let h = c.horizon.or(c.len).unwrap_or(if *within { 12 } else { 100 });
            let base = match &c.prefix {
                Some(p) => parse_elements(&sg, p)?,
                None => {
                    if *within {
                        sg.stream(h, c.skip, c.stride)
                    } else {
                        sg.enumerate(h)
                    }
                }
            };
            let p = SequencePrefix::new(&sg, base)?;
            let r = if *within {
                hindman::find_mono_fs_within(&p, &coloring, *k, c.budget, workers)?
            } else {
                hindman::find_mono_fs(&p, &coloring, *k, c.budget, workers)?
            };
            let summary = match &r.value {
                Some(w) => format!("monochromatic: {}", render(w.terms())),
                None => format!("none ({:?})", r.end).to_lowercase(),
            };
            let body = WitnessBody::MonoFs {
                base: p.into_elements(),
                coloring,
                closed: !*within,
                k: *k,
                witness: r.value,
                end: r.end,
                nodes: r.nodes,
            };
            run.finish(body, summary)
        }
        Command::Threshold { k, colors, max_n, .. } => {
            let report = hindman::exhaustive_threshold(&sg, *k, *colors, *max_n, c.budget, workers)?;
            let summary = format!("{:?}", report.outcome);
            run.finish(WitnessBody::Threshold { budget: c.budget, report }, summary)
        }
        Command::DisjointFamilies { coloring, m, k, .. } => {
            let coloring = parse_coloring(coloring)?;
            let h = c.horizon.or(c.len).unwrap_or(100);
            let universe = match &c.prefix {
                Some(p) => parse_elements(&sg, p)?,
                None => sg.enumerate(h),
            };
            let p = SequencePrefix::new(&sg, universe)?;
            let report = hindman::find_disjoint_mono_families(&p, &coloring, *m, *k, c.budget, workers)?;
            let summary = format!("{} of {} families", report.families.len(), m);
            run.finish(WitnessBody::DisjointFamilies { universe: p.into_elements(), coloring, report }, summary)
        }
        Command::Verify { .. } | Command::EnumerateOracle { .. } => unreachable!("handled by dispatch"),
    }
}

fn kind_of(v: &Value) -> String {
    v.get("kind").and_then(Value::as_str).unwrap_or("result").to_string()
}

fn render(v: &[Element]) -> String {
    let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Replays a witness file: exit 0 when every claim holds, 1 naming the
/// first failed claim, 2 when the file cannot be read or parsed.
pub fn verify_path(path: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
    let file: WitnessFile =
        serde_json::from_str(&text).map_err(|e| Failure::usage("malformed_witness", format!("{}: {e}", path.display())))?;
    let sg = Semigroup::from_json(&file.spec)?;
    let hash = body_hash(&file.body);
    if hash != file.header.body_sha256 {
        return Err(Failure::negative("claim_failed", format!("body_sha256: recorded {} but the body hashes to {hash}", file.header.body_sha256)));
    }
    file.body.replay(&sg).map_err(|f| Failure::negative("claim_failed", f.to_string()))?;
    Ok(Outcome { exit: 0, file: None, summary: "all claims hold".into() })
}

fn output_of(command: &Command) -> Option<&Path> {
    match command {
        Command::Fs(c) | Command::Fs2(c) | Command::Proper(c) | Command::DisjointProper(c) | Command::Classify(c) => c.output.as_deref(),
        Command::Tails { common, .. }
        | Command::Construct { common, .. }
        | Command::Detect { common, .. }
        | Command::Hindman { common, .. }
        | Command::Threshold { common, .. }
        | Command::DisjointFamilies { common, .. } => common.output.as_deref(),
        Command::EnumerateOracle { output, .. } => output.as_deref(),
        Command::Verify { .. } => None,
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code. Diagnostics go to `err`, results to `out`.
pub fn run<I, T>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "error[usage]: {e}") };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            if let Some(file) = &outcome.file {
                let text = serde_json::to_string_pretty(file).expect("witness serializes") + "\n";
                match output_of(&cli.command) {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, text) {
                            let _ = writeln!(err, "error[io]: {}: {e}", path.display());
                            return 2;
                        }
                        let _ = writeln!(out, "{}", outcome.summary);
                    }
                    None => {
                        let _ = out.write_all(text.as_bytes());
                    }
                }
            } else {
                let _ = writeln!(out, "{}", outcome.summary);
            }
            if outcome.exit != 0 {
                let _ = writeln!(err, "negative: {}", outcome.summary);
            }
            outcome.exit
        }
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.code, f.message);
            f.exit
        }
    }
}
