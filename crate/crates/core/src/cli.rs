//! Command-line front end. [`run`] does all the work and returns the text for
//! stdout, so the binary only prints and sets the exit status.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 usage or schema error
//! (including a non-prime characteristic), 3 invariant violation in the
//! input, 4 construction preconditions not met, 5 size cap exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read as _;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analyze::{analyze, Analysis, AraEntry, GluingEvidence, Proportion, Rule};
use crate::construct::{almost_sci_triple, default_delta_bound, ConstructError, TripleResult};
use crate::gluing::{
    completely_p_glued, stci_pair_example35, stci_pair_prime_power, GluingError, GluingNode,
    GluingTree, DEFAULT_K_MAX,
};
use crate::intlat::{as_prime_power, is_prime, SemigroupSet};
use crate::model::{Binomial, Shape, Variety, VarietyJson};
use crate::verify::{equality_experiment, ExperimentReport, FieldSpec, VerifyError};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_CAP: i32 = 5;

/// Environment variable overriding the default gluing bound.
pub const KMAX_ENV: &str = "TORIC_ARA_KMAX";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Parser, Debug)]
#[command(
    name = "toric-ara",
    version,
    about = "Gluing, defining binomials and arithmetical rank of codimension-2 simplicial toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the arithmetic conditions and report the arithmetical rank per characteristic.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Largest k tried in gluing searches (default: $TORIC_ARA_KMAX or 16).
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// Build defining binomials: the prime-power pair or the three-binomial system.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "triple", required_unless_present = "triple")]
        pair: bool,
        #[arg(long)]
        triple: bool,
        /// Exponent h of the y1 power p^h in the prime-power pair.
        #[arg(long)]
        h: Option<u32>,
        /// Exponent k of the y2 power p^k in the prime-power pair.
        #[arg(long)]
        k: Option<u32>,
        /// Bound on |delta| when searching for the third binomial.
        #[arg(long)]
        delta_bound: Option<u64>,
    },
    /// Search for a complete p-gluing certificate.
    Glue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        kmax: Option<i64>,
    },
    /// Compare the zero set of a binomial system with the image of the parametrization over GF(p^m).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "char")]
        characteristic: u64,
        #[arg(long, default_value_t = 1)]
        ext: u32,
        #[arg(long, default_value_t = 1)]
        extmax: u32,
        /// JSON array of binomials (strings like "y1^4 - x1^8*x3" or {"plus","minus"} objects).
        #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
        polys: Option<String>,
        /// Use the constructed pair when it applies in this characteristic, else the triple.
        #[arg(long)]
        auto: bool,
        /// With --auto, always use the three-binomial system.
        #[arg(long, requires = "auto")]
        triple: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Variety as a JSON file path, `-` for stdin, or inline JSON.
    input: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(e.render().to_string()),
                _ => Err(CliError::new(EXIT_USAGE, e.render().to_string())),
            };
        }
    };
    match cli.command {
        Command::Analyze { common, kmax } => cmd_analyze(&common, resolve_kmax(kmax)?),
        Command::Construct {
            common,
            triple,
            h,
            k,
            delta_bound,
            ..
        } => cmd_construct(&common, triple, h, k, delta_bound),
        Command::Glue {
            common,
            prime,
            kmax,
        } => cmd_glue(&common, prime, resolve_kmax(kmax)?),
        Command::Verify {
            common,
            characteristic,
            ext,
            extmax,
            polys,
            triple,
            ..
        } => cmd_verify(
            &common,
            characteristic,
            ext,
            extmax,
            polys.as_deref(),
            triple,
        ),
    }
}

fn resolve_kmax(flag: Option<i64>) -> Result<i64, CliError> {
    if let Some(k) = flag {
        return Ok(k);
    }
    match std::env::var(KMAX_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::new(EXIT_USAGE, format!("{KMAX_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_K_MAX),
    }
}

fn read_input(input: &str) -> Result<String, CliError> {
    if input.trim_start().starts_with('{') || input.trim_start().starts_with('[') {
        return Ok(input.to_string());
    }
    let io = |e: std::io::Error| CliError::new(EXIT_INTERNAL, format!("cannot read {input}: {e}"));
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        return Ok(s);
    }
    std::fs::read_to_string(input).map_err(io)
}

fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("malformed JSON: {e}")))
}

fn variety_from_value(value: Value) -> Result<Variety, CliError> {
    let wire: VarietyJson = serde_json::from_value(value).map_err(|e| {
        CliError::new(
            EXIT_USAGE,
            format!("input does not match the variety schema: {e}"),
        )
    })?;
    Variety::try_from(wire)
        .map_err(|e| CliError::new(EXIT_INVARIANT, format!("invalid variety: {e}")))
}

/// Reads a variety from a path, `-` or inline JSON.
pub fn load_variety(input: &str) -> Result<Variety, CliError> {
    variety_from_value(parse_json(&read_input(input)?)?)
}

fn to_json<T: Serialize>(x: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(x)
        .map(|s| s + "\n")
        .map_err(|e| CliError::new(EXIT_INTERNAL, e.to_string()))
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::new(EXIT_INTERNAL, format!("internal error: {e}"))
}

fn cmd_analyze(common: &Common, k_max: i64) -> Result<String, CliError> {
    let v = load_variety(&common.input)?;
    let analysis = analyze(&v, k_max).map_err(internal)?;
    if common.json {
        return to_json(&analysis);
    }
    Ok(render_analysis(&v, &analysis))
}

fn render_analysis(input: &Variety, a: &Analysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "variety: {}", a.variety);
    if *input != a.variety {
        let _ = writeln!(s, "  (normalized from {input})");
    }
    let yes_no = |b: bool| if b { "holds" } else { "fails" };
    if let Some(c) = &a.conditions.abcd {
        if a.variety.shape() == Shape::Mixed3 {
            let _ = writeln!(
                s,
                "conditions on the common-degree form {}:",
                a.variety.uniform_lift()
            );
        } else {
            let _ = writeln!(s, "conditions:");
        }
        match c.a {
            Some((i, j)) => {
                let _ = writeln!(s, "  (A) holds: a{i} = 0 != b{i}, a{j} != 0 = b{j}");
            }
            None => {
                let _ = writeln!(s, "  (A) fails");
            }
        }
        if c.b_holds() {
            let _ = writeln!(s, "  (B) holds");
        } else {
            let _ = writeln!(s, "  (B) fails at i = {:?}", c.b_failures);
        }
        match c.c {
            Some(m) => {
                let (x, y) = match m.direction {
                    Proportion::AFromB => ("a", "b"),
                    Proportion::BFromA => ("b", "a"),
                };
                let _ = writeln!(s, "  (C) holds: {x} = {} * {y} mod d", m.mu);
            }
            None => {
                let _ = writeln!(s, "  (C) fails");
            }
        }
        match c.d {
            Some(i) => {
                let _ = writeln!(s, "  (D) holds: gcd(d, a{i}) = 1");
            }
            None => {
                let _ = writeln!(s, "  (D) fails");
            }
        }
    }
    if let Some(m) = &a.conditions.mixed {
        let _ = writeln!(s, "conditions of the mixed shape:");
        match m.i {
            Some((x, y)) => {
                let _ = writeln!(s, "  (I) holds: (x, y) = ({x}, {y})");
            }
            None => {
                let _ = writeln!(s, "  (I) fails");
            }
        }
        let _ = writeln!(s, "  (II) {}: d3' = {}", yes_no(m.ii), m.d3_prime);
    }
    if !a.gluing.is_empty() {
        let _ = writeln!(s, "gluing:");
        for ev in &a.gluing {
            let _ = writeln!(s, "  {}", ev.describe());
        }
    }
    let _ = writeln!(s, "arithmetical rank:");
    for e in &a.report.entries {
        let _ = writeln!(s, "  {}", render_entry(e));
        if !e.witness.is_empty() {
            let list: Vec<String> = e.witness.iter().map(|f| f.to_string()).collect();
            let _ = writeln!(s, "      cut out by: {}", list.join(", "));
        }
    }
    let _ = writeln!(s, "summary: {}", a.report.summary);
    s
}

fn render_entry(e: &AraEntry) -> String {
    let value = match e.value() {
        Some(v) => format!("ara V = {v}"),
        None => format!("{} <= ara V <= {}", e.lower, e.upper),
    };
    let rules: Vec<String> = e
        .rules
        .iter()
        .map(|r| match r.prime {
            Some(p) => format!("{} (p = {p})", r.citation),
            None => r.citation.clone(),
        })
        .collect();
    format!("{}: {value}   [{}]", e.characteristic, rules.join("; "))
}

/// Output of `construct`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum ConstructOutput {
    Pair {
        rule: String,
        f1: Binomial,
        f2: Binomial,
    },
    Triple(TripleResult),
}

impl ConstructOutput {
    pub fn binomials(&self) -> Vec<Binomial> {
        match self {
            ConstructOutput::Pair { f1, f2, .. } => vec![f1.clone(), f2.clone()],
            ConstructOutput::Triple(t) => t.binomials().into_iter().cloned().collect(),
        }
    }
}

fn precondition(rule: Rule, e: impl std::fmt::Display) -> CliError {
    CliError::new(
        EXIT_PRECONDITION,
        format!("{e}; {} does not apply", rule.citation()),
    )
}

/// The mixed prime-pair pattern with `p` as the distinguished prime, if `v`
/// matches it.
fn mixed_pattern(v: &Variety, p: Option<u64>) -> Option<(u64, u64, u64)> {
    if v.shape() != Shape::Mixed3 {
        return None;
    }
    let (d, a) = (v.degrees(), v.a());
    let q = d[1];
    let p = p.unwrap_or(d[2] / q);
    (q > 1 && d[2] == p * q && a[2] % q == 0).then_some((p, q, a[2] / q))
}

/// The two-binomial construction for `v`, when one applies.
pub fn build_pair(
    v: &Variety,
    h: Option<u32>,
    k: Option<u32>,
) -> Result<ConstructOutput, CliError> {
    if let Some((p, q, c)) = mixed_pattern(v, None) {
        if let Ok((f1, f2)) = stci_pair_example35(v, p, q, c) {
            return Ok(ConstructOutput::Pair {
                rule: format!(
                    "complete {p}-gluing of the mixed prime pair (p = {p}, q = {q}, c = {c})"
                ),
                f1,
                f2,
            });
        }
    }
    let u = v.uniform_lift();
    let (f1, f2) = stci_pair_prime_power(&u, h, k).map_err(|e| match e {
        GluingError::NotPrimePower(d) => precondition(
            Rule::PrimePowerDegree,
            format!("d = {d} is not a prime power"),
        ),
        other => precondition(Rule::PrimePowerDegree, other),
    })?;
    Ok(ConstructOutput::Pair {
        rule: Rule::PrimePowerDegree.citation().to_string(),
        f1,
        f2,
    })
}

pub fn build_triple(v: &Variety, delta_bound: Option<u64>) -> Result<ConstructOutput, CliError> {
    let u = v.uniform_lift();
    let bound = delta_bound.unwrap_or_else(|| default_delta_bound(&u));
    almost_sci_triple(&u, bound)
        .map(ConstructOutput::Triple)
        .map_err(|e| match e {
            ConstructError::NotInIdeal(_) => internal(e),
            other => precondition(Rule::Baseline, other),
        })
}

fn cmd_construct(
    common: &Common,
    triple: bool,
    h: Option<u32>,
    k: Option<u32>,
    delta_bound: Option<u64>,
) -> Result<String, CliError> {
    let v = load_variety(&common.input)?;
    let out = if triple {
        build_triple(&v, delta_bound)?
    } else {
        build_pair(&v, h, k)?
    };
    if common.json {
        return to_json(&out);
    }
    let mut s = String::new();
    match &out {
        ConstructOutput::Pair { rule, f1, f2 } => {
            let _ = writeln!(s, "pair ({rule}):");
            let _ = writeln!(s, "  F1 = {f1}");
            let _ = writeln!(s, "  F2 = {f2}");
        }
        ConstructOutput::Triple(t) => {
            if v.shape() == Shape::Mixed3 || !v.is_normalized() {
                let _ = writeln!(s, "using the common-degree form {}", v.uniform_lift());
            }
            let _ = writeln!(s, "triple ({}):", Rule::Baseline.citation());
            let _ = writeln!(s, "  F1 = {}", t.f1);
            let _ = writeln!(s, "  F2 = {}", t.f2);
            let _ = writeln!(s, "  F3 = {}", t.f3);
            let _ = writeln!(s, "  d' = {}, d'' = {}", t.dprime, t.dsecond);
            let _ = writeln!(
                s,
                "  g1 = {}, g2 = {}, e = {}, delta = {}",
                t.g1, t.g2, t.e, t.delta
            );
        }
    }
    Ok(s)
}

fn load_glue_input(input: &str) -> Result<(SemigroupSet, Option<Variety>), CliError> {
    let value = parse_json(&read_input(input)?)?;
    if value.get("kind").and_then(Value::as_str) == Some("semigroup") {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Semigroup {
            #[allow(dead_code)]
            kind: String,
            vectors: Vec<Vec<u64>>,
        }
        let sg: Semigroup = serde_json::from_value(value).map_err(|e| {
            CliError::new(
                EXIT_USAGE,
                format!("input does not match the semigroup schema: {e}"),
            )
        })?;
        if sg.vectors.is_empty() || sg.vectors[0].is_empty() {
            return Err(CliError::new(
                EXIT_USAGE,
                "semigroup needs at least one nonempty vector",
            ));
        }
        let rows: Vec<&[u64]> = sg.vectors.iter().map(Vec::as_slice).collect();
        let set = SemigroupSet::from_u64_rows(&rows)
            .map_err(|e| CliError::new(EXIT_INVARIANT, format!("invalid semigroup: {e}")))?;
        return Ok((set, None));
    }
    let v = variety_from_value(value)?;
    Ok((v.generator_set(), Some(v)))
}

fn cmd_glue(common: &Common, prime: u64, k_max: i64) -> Result<String, CliError> {
    if !is_prime(prime) {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--prime {prime} is not a prime"),
        ));
    }
    let (set, variety) = load_glue_input(&common.input)?;
    let tree = completely_p_glued(&set, prime, k_max).map_err(internal)?;
    if let Some(t) = &tree {
        t.validate().map_err(internal)?;
    }
    let evidence = GluingEvidence { prime, k_max, tree };
    if common.json {
        return to_json(&evidence);
    }
    let names: Vec<String> = match &variety {
        Some(v) => v.variable_names(),
        None => (1..=set.len()).map(|i| format!("t{i}")).collect(),
    };
    let mut s = String::new();
    match &evidence.tree {
        Some(tree) => {
            let _ = writeln!(s, "completely {prime}-glued; certificate:");
            render_node(&mut s, &tree.root, &names, prime, 1);
            if variety.is_some() {
                let fs: Vec<String> = tree.binomials().iter().map(|f| f.to_string()).collect();
                let _ = writeln!(s, "binomials: {}", fs.join(", "));
            }
        }
        None => {
            let _ = writeln!(s, "no certificate found (k <= {k_max})");
        }
    }
    Ok(s)
}

fn render_node(s: &mut String, node: &GluingNode, names: &[String], p: u64, depth: usize) {
    let pad = "  ".repeat(depth);
    let label = |idx: &[usize]| {
        idx.iter()
            .map(|&i| names[i].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match node {
        GluingNode::Free { free, indices } => {
            let vs: Vec<String> = free.vectors().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{pad}free {{{}}}: {}", label(indices), vs.join(" "));
        }
        GluingNode::Glued {
            certificate: c,
            left,
            right,
        } => {
            let _ = writeln!(
                s,
                "{pad}split {{{}}} | {{{}}}: w = {}, k = {}",
                label(&c.indices1),
                label(&c.indices2),
                c.w,
                c.k
            );
            let combo = |set: &SemigroupSet, coeffs: &crate::intlat::IntVec| {
                let terms: Vec<String> = coeffs
                    .iter()
                    .zip(set.vectors())
                    .filter(|(x, _)| !num_traits::Zero::is_zero(*x))
                    .map(|(x, v)| format!("{x}{v}"))
                    .collect();
                terms.join(" + ")
            };
            let _ = writeln!(
                s,
                "{pad}  {p}^{} w = {} = {}",
                c.k,
                combo(&c.t1, &c.coeffs1),
                combo(&c.t2, &c.coeffs2)
            );
            render_node(s, left, names, p, depth + 1);
            render_node(s, right, names, p, depth + 1);
        }
    }
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub system: String,
    pub polys: Vec<Binomial>,
    #[serde(flatten)]
    pub report: ExperimentReport,
}

/// The system `verify --auto` uses in characteristic `p`: a two-binomial
/// construction valid in that characteristic when one is known, otherwise
/// the three-binomial system.
pub fn auto_system(
    v: &Variety,
    p: u64,
    force_triple: bool,
) -> Result<(String, Vec<Binomial>), CliError> {
    if !force_triple {
        let u = v.uniform_lift();
        let d = u.uniform_degree().expect("lift is uniform");
        if d == 1 || as_prime_power(d).is_some_and(|(q, _)| q == p) {
            if let Ok((f1, f2)) = stci_pair_prime_power(&u, None, None) {
                return Ok((
                    format!("pair ({})", Rule::PrimePowerDegree.citation()),
                    vec![f1, f2],
                ));
            }
        }
        if let Some((p, q, c)) = mixed_pattern(v, Some(p)) {
            if let Ok((f1, f2)) = stci_pair_example35(v, p, q, c) {
                return Ok((format!("pair (complete {p}-gluing)"), vec![f1, f2]));
            }
        }
    }
    let out = build_triple(v, None)?;
    Ok((
        format!("triple ({})", Rule::Baseline.citation()),
        out.binomials(),
    ))
}

/// Parses a JSON array of binomials in `n` x-variables.
pub fn parse_polys(text: &str, n: usize) -> Result<Vec<Binomial>, CliError> {
    let items: Vec<Value> = serde_json::from_str(text).map_err(|e| {
        CliError::new(
            EXIT_USAGE,
            format!("polynomial file must be a JSON array: {e}"),
        )
    })?;
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            let f = match item {
                Value::String(s) => Binomial::parse(&s, n).map_err(|e| e.to_string()),
                other => serde_json::from_value::<Binomial>(other).map_err(|e| e.to_string()),
            }
            .map_err(|e| CliError::new(EXIT_USAGE, format!("polynomial {}: {e}", i + 1)))?;
            if f.n() != n {
                return Err(CliError::new(
                    EXIT_USAGE,
                    format!(
                        "polynomial {} has {} x-variables, expected {n}",
                        i + 1,
                        f.n()
                    ),
                ));
            }
            Ok(f)
        })
        .collect()
}

fn verify_error(e: VerifyError) -> CliError {
    let code = match e {
        VerifyError::FieldTooLarge { .. } | VerifyError::ScanTooLarge { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    };
    CliError::new(code, e.to_string())
}

fn cmd_verify(
    common: &Common,
    p: u64,
    ext: u32,
    ext_max: u32,
    polys: Option<&str>,
    force_triple: bool,
) -> Result<String, CliError> {
    let base = FieldSpec::new(p, ext).map_err(verify_error)?;
    if ext_max == 0 {
        return Err(CliError::new(EXIT_USAGE, "--extmax must be at least 1"));
    }
    let v = load_variety(&common.input)?;
    let (system, polys) = match polys {
        Some(path) => (
            "from file".to_string(),
            parse_polys(&read_input(path)?, v.n())?,
        ),
        None => auto_system(&v, p, force_triple)?,
    };
    let report = equality_experiment(&v, &polys, &base, ext_max).map_err(verify_error)?;
    let out = VerifyOutput {
        system,
        polys,
        report,
    };
    if common.json {
        return to_json(&out);
    }
    let r = &out.report;
    let mut s = String::new();
    let _ = writeln!(s, "variety: {v}");
    let _ = writeln!(s, "system: {}", out.system);
    for f in &out.polys {
        let _ = writeln!(s, "  {f}");
    }
    let _ = writeln!(
        s,
        "field: {} (modulus coefficients {:?}, low degree first)",
        r.field, r.modulus
    );
    let _ = writeln!(
        s,
        "containment (every binomial in the ideal): {}",
        if r.containment { "yes" } else { "no" }
    );
    let _ = writeln!(
        s,
        "image points (parameters up to degree-{} extensions): {}",
        r.ext_max, r.image_count
    );
    let _ = writeln!(s, "zeros of the system: {}", r.zero_count);
    if r.excess.is_empty() {
        let _ = writeln!(
            s,
            "excess: none (the zero set equals the image over this field)"
        );
    } else {
        let _ = writeln!(s, "excess: {} point(s)", r.excess.len());
        for x in r.excess.iter().take(20) {
            let _ = writeln!(s, "  {x:?}");
        }
        if r.possible_strict_containment {
            let _ = writeln!(s, "possible strict containment (evidence only)");
        }
    }
    Ok(s)
}

/// Convenience for tests and examples: the tree rendering used by `glue`.
pub fn render_tree(tree: &GluingTree, names: &[String]) -> String {
    let mut s = String::new();
    render_node(&mut s, &tree.root, names, tree.prime, 0);
    s
}
