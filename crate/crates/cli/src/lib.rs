//! Command-line front end: validation, unravelling, certificate checks,
//! instance generation and cast-monotonicity checks on JSON ballot files.

pub mod format;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use unravel_core::axioms::{self, Aggregator, Condition, Counterexample, Rule, RuleHandle};
use unravel_core::classic::{min_bottleneck_arborescence, min_cost_arborescence, Certificate, DelegationGraph};
use unravel_core::control::{leximin, minmax_biased, minsum_biased};
use unravel_core::functions::FunctionClass;
use unravel_core::smart::{self, Consistency, Objective, SmartInstance};
use unravel_core::{gadgets, random, AgentId, AltId, Error, Model, Profile};

/// Exit code for invalid input or a failed check.
pub const EXIT_INVALID: u8 = 1;
/// Exit code when a computation is refused for exceeding its budget.
pub const EXIT_REFUSED: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "unravel", version, about = "Unravel liquid-democracy ballots into concrete votes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a ballot file against the classic or smart model.
    Validate {
        path: PathBuf,
        #[arg(long)]
        model: Option<ModelArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Select an optimal certificate and report the votes it induces.
    Unravel {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleArg::Minsum)]
        rule: RuleArg,
        /// Alternative to favour among optimal outcomes, or "none".
        #[arg(long, default_value = "none")]
        bias: String,
        #[arg(long)]
        model: Option<ModelArg>,
        /// Cap on enumerated certificates or explored search nodes.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a certificate (comma-separated ranks) is consistent.
    CheckCert {
        path: PathBuf,
        certificate: String,
        #[arg(long)]
        model: Option<ModelArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a ballot file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check cast monotonicity for one agent switching to a direct vote.
    AxiomCheck {
        path: PathBuf,
        #[arg(long)]
        agent: String,
        /// Alternative the agent switches to.
        #[arg(long)]
        alt: String,
        #[arg(long, value_enum, default_value_t = RuleArg::Minsum)]
        rule: RuleArg,
        #[arg(long, default_value = "none")]
        bias: String,
        #[arg(long)]
        model: Option<ModelArg>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Random classic profile.
    RandomClassic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        alternatives: usize,
    },
    /// Random smart profile of small DNFs.
    RandomSmart {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        monotone: bool,
    },
    /// Random smart profile of disjunctions.
    RandomOr {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Random smart profile of conjunctions.
    RandomAnd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Vertex cover as MinSum over binary disjunctions.
    MinsumOr2 {
        #[arg(long)]
        vars: usize,
        /// Edges such as "1-2,2-3".
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        multiplier: usize,
    },
    /// Vertex cover as MinSum over binary conjunctions.
    MinsumAnd2 {
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        multiplier: usize,
    },
    /// Three-literal SAT as MinMax over binary disjunctions and conjunctions.
    MinmaxOrand2 {
        #[arg(long)]
        vars: usize,
        /// Clauses such as "1 2 3; -1 -2 -3".
        #[arg(long)]
        clauses: String,
    },
    /// The gap version of minmax-orand2 with `gap` ladder voters per kind.
    MinmaxInapprox {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: String,
        #[arg(long)]
        gap: usize,
    },
    /// Classic instance on which MinMax fails cast monotonicity.
    MinmaxCast {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// The MinMax instance with 0 and 1 exchanged.
    MinmaxCastInverted {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Smart instance on which MinSum fails cast monotonicity.
    MinsumOr2Cast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Classic,
    Smart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Minsum,
    Minmax,
    Leximin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Classic => Model::Classic,
            ModelArg::Smart => Model::Smart,
        }
    }
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Minsum => Rule::MinSum,
            RuleArg::Minmax => Rule::MinMax,
            RuleArg::Leximin => Rule::LexiMin,
        }
    }
}

/// Exit code for an error escaping a command.
pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_REFUSED,
        _ => EXIT_INVALID,
    }
}

/// Runs a command, writing its report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Validate { path, model, format } => validate(&format::read_path(&path)?, model, format, out),
        Command::Unravel {
            path,
            rule,
            bias,
            model,
            budget,
            format,
        } => {
            let p = format::read_path(&path)?;
            let Some(model) = checked_model(&p, model, out)? else {
                return Ok(EXIT_INVALID);
            };
            unravel(&p, rule.into(), parse_bias(&p, &bias)?, model, budget, format, out)
        }
        Command::CheckCert {
            path,
            certificate,
            model,
            format,
        } => {
            let p = format::read_path(&path)?;
            let Some(model) = checked_model(&p, model, out)? else {
                return Ok(EXIT_INVALID);
            };
            check_cert(&p, &format::parse_certificate(&certificate)?, model, format, out)
        }
        Command::Gen { kind, seed, out: path } => {
            let p = generate(kind, seed)?;
            let text = format::to_string(&p);
            match path {
                Some(path) => std::fs::write(&path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::AxiomCheck {
            path,
            agent,
            alt,
            rule,
            bias,
            model,
            budget,
            format,
        } => {
            let p = format::read_path(&path)?;
            let Some(model) = checked_model(&p, model, out)? else {
                return Ok(EXIT_INVALID);
            };
            let a = p.agent_index(&agent).ok_or_else(|| Error::UnknownAgent(agent.clone()))?;
            let [zero, one] = p.binary_alternatives()?;
            let d = match p.alternative_index(&alt) {
                Some(x) if x == one => true,
                Some(x) if x == zero => false,
                _ => return Err(Error::UnknownAlternative(alt).into()),
            };
            let bias = parse_bias(&p, &bias)?.map(|b| b == one);
            let mut handle = RuleHandle::new(rule.into(), bias, model);
            if let Some(b) = budget {
                handle = handle.with_budget(b.into());
            }
            axiom_check(&p, a, d, &handle, format, out)
        }
    }
}

fn parse_bias(p: &Profile, bias: &str) -> Result<Option<AltId>> {
    if bias == "none" {
        return Ok(None);
    }
    p.alternative_index(bias)
        .map(Some)
        .ok_or_else(|| Error::UnknownAlternative(bias.to_string()).into())
}

/// The requested model, or classic when the profile qualifies.
fn infer_model(p: &Profile, model: Option<ModelArg>) -> Model {
    match model {
        Some(m) => m.into(),
        None if p.validate(Model::Classic).is_ok() => Model::Classic,
        None => Model::Smart,
    }
}

/// Validates against the chosen model, reporting violations to `out`.
fn checked_model(p: &Profile, model: Option<ModelArg>, out: &mut dyn Write) -> Result<Option<Model>> {
    let model = infer_model(p, model);
    let report = p.validate(model);
    if report.is_ok() {
        return Ok(Some(model));
    }
    writeln!(out, "invalid {model} profile:")?;
    for v in &report.violations {
        writeln!(out, "  {}", v.describe(p))?;
    }
    Ok(None)
}

fn validate(p: &Profile, model: Option<ModelArg>, format: Format, out: &mut dyn Write) -> Result<u8> {
    let model = infer_model(p, model);
    let report = p.validate(model);
    let problems: Vec<String> = report.violations.iter().map(|v| v.describe(p)).collect();
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "model": model.name(),
                "valid": problems.is_empty(),
                "agents": p.n(),
                "alternatives": p.alternatives(),
                "max_ballot_len": p.max_ballot_len(),
                "class": p.classify().name(),
                "violations": problems,
            })
        )?,
        Format::Text => {
            if problems.is_empty() {
                writeln!(
                    out,
                    "valid {model} profile: {} agents, {} alternatives, ballots of length at most {}, class {}",
                    p.n(),
                    p.alternatives().len(),
                    p.max_ballot_len(),
                    p.classify()
                )?;
            } else {
                writeln!(out, "invalid {model} profile:")?;
                for line in &problems {
                    writeln!(out, "  {line}")?;
                }
            }
        }
    }
    Ok(if problems.is_empty() { 0 } else { EXIT_INVALID })
}

/// Text of the option an agent selects under `rank`.
fn selected_text(p: &Profile, a: AgentId, rank: usize) -> String {
    let ballot = p.ballot(a);
    match ballot.entries.get(rank) {
        Some(f) => f.display_with(p.agents()).to_string(),
        None => format!("direct {}", p.alternatives()[ballot.backup]),
    }
}

fn unravel(
    p: &Profile,
    rule: Rule,
    bias: Option<AltId>,
    model: Model,
    budget: Option<u64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8> {
    let (ranks, votes) = match model {
        Model::Classic => {
            let g = DelegationGraph::from_profile(p)?;
            let t = match (rule, bias) {
                (Rule::MinSum, None) => min_cost_arborescence(&g)?,
                (Rule::MinMax, None) => min_bottleneck_arborescence(&g)?.0,
                (Rule::MinSum, Some(d)) => minsum_biased(&g, d)?.arborescence,
                (Rule::MinMax, Some(d)) => minmax_biased(&g, d)?.arborescence,
                (Rule::LexiMin, b) => leximin(&g, b)?.arborescence,
            };
            (g.certificate_of(&t).ranks, g.votes(&t)?)
        }
        Model::Smart => {
            let [zero, one] = p.binary_alternatives()?;
            let nodes = budget.unwrap_or(smart::DEFAULT_NODE_BUDGET);
            let certs = budget.map_or(smart::DEFAULT_BUDGET, u128::from);
            let outcome = match (rule, bias) {
                (Rule::MinMax, None) if FunctionClass::Or.contains(p.classify()) || FunctionClass::And.contains(p.classify()) => {
                    let o = smart::minmax_polynomial(p)?;
                    (o.certificate.ranks, o.votes)
                }
                (Rule::MinMax, None) => {
                    let o = smart::search_minmax(p, nodes)?;
                    (o.certificate.ranks, o.votes)
                }
                (Rule::MinSum, None) => {
                    let o = smart::search_minsum(p, nodes)?;
                    (o.certificate.ranks, o.votes)
                }
                (rule, bias) => {
                    let objective = match rule {
                        Rule::MinSum => Objective::Sum,
                        Rule::MinMax => Objective::Max,
                        Rule::LexiMin => Objective::Lexi,
                    };
                    let set = smart::brute_optimal(&SmartInstance::new(p)?, objective, certs)?;
                    let wanted = match bias {
                        None => set.solutions[0].votes.clone(),
                        Some(d) => {
                            let d = d == one;
                            let count = |v: &Vec<bool>| v.iter().filter(|&&x| x == d).count();
                            let vectors = set.vote_vectors();
                            let best = vectors.iter().map(count).max().expect("an optimum exists");
                            vectors.into_iter().find(|v| count(v) == best).expect("present")
                        }
                    };
                    let s = set.solutions.into_iter().find(|s| s.votes == wanted).expect("present");
                    (s.certificate.ranks, s.votes)
                }
            };
            let votes = outcome.1.iter().map(|&v| if v { one } else { zero }).collect();
            (outcome.0, votes)
        }
    };
    let c = Certificate::new(ranks);
    let (kind, value) = match rule {
        Rule::MinSum => ("sum", json!(c.sum())),
        Rule::MinMax => ("max", json!(c.max_rank())),
        Rule::LexiMin => ("sorted", json!(c.sorted_desc())),
    };
    let n_d: Option<Vec<&str>> = bias.map(|d| (0..p.n()).filter(|&a| votes[a] == d).map(|a| p.agent_name(a)).collect());
    let alt = |v: AltId| p.alternatives()[v].as_str();
    match format {
        Format::Json => {
            let agents: Vec<Value> = (0..p.n())
                .map(|a| {
                    json!({
                        "name": p.agent_name(a),
                        "rank": c.ranks[a],
                        "selected": selected_text(p, a, c.ranks[a]),
                        "vote": alt(votes[a]),
                    })
                })
                .collect();
            writeln!(
                out,
                "{}",
                json!({
                    "rule": rule.name(),
                    "bias": bias.map(alt),
                    "model": model.name(),
                    "objective": {"kind": kind, "value": value},
                    "sum": c.sum(),
                    "max": c.max_rank(),
                    "sorted": c.sorted_desc(),
                    "certificate": c.ranks,
                    "votes": votes.iter().map(|&v| alt(v)).collect::<Vec<_>>(),
                    "agents": agents,
                    "n_d": n_d,
                })
            )?;
        }
        Format::Text => {
            let bias_label = bias.map_or(String::new(), |d| format!(" biased to {}", alt(d)));
            writeln!(out, "rule: {}{bias_label} ({model})", rule.name())?;
            writeln!(out, "objective: {kind} = {value}")?;
            writeln!(out, "certificate: {}", join(c.ranks.iter()))?;
            writeln!(out, "votes: {}", join(votes.iter().map(|&v| alt(v))))?;
            let width = p.agents().iter().map(String::len).max().unwrap_or(0).max(5);
            writeln!(out, "{:width$}  rank  vote  selected", "agent")?;
            for a in 0..p.n() {
                writeln!(
                    out,
                    "{:width$}  {:>4}  {:>4}  {}",
                    p.agent_name(a),
                    c.ranks[a],
                    alt(votes[a]),
                    selected_text(p, a, c.ranks[a])
                )?;
            }
            if let (Some(names), Some(d)) = (&n_d, bias) {
                writeln!(out, "N_{}: {}", alt(d), names.join(", "))?;
            }
        }
    }
    Ok(0)
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn check_cert(p: &Profile, ranks: &[usize], model: Model, format: Format, out: &mut dyn Write) -> Result<u8> {
    let c = Certificate::new(ranks.to_vec());
    let alt = |v: AltId| p.alternatives()[v].as_str();
    // votes on success, unresolved agents otherwise
    let result: std::result::Result<Vec<AltId>, Vec<AgentId>> = match model {
        Model::Classic => {
            let g = DelegationGraph::from_profile(p)?;
            if c.ranks.len() != p.n() {
                return Err(Error::CertificateLength {
                    expected: p.n(),
                    found: c.ranks.len(),
                }
                .into());
            }
            match g.arborescence_of(&c) {
                Ok(t) => Ok(g.votes(&t)?),
                Err(Error::InconsistentCertificate { cycle }) => Err(cycle),
                Err(e) => return Err(e.into()),
            }
        }
        Model::Smart => {
            let [zero, one] = p.binary_alternatives()?;
            match SmartInstance::new(p)?.check(&c)? {
                Consistency::Consistent { votes, .. } => Ok(votes.into_iter().map(|v| if v { one } else { zero }).collect()),
                Consistency::Inconsistent { stuck, .. } => Err(stuck),
            }
        }
    };
    let names = |agents: &[AgentId]| agents.iter().map(|&a| p.agent_name(a).to_string()).collect::<Vec<_>>();
    match (&result, format) {
        (Ok(votes), Format::Json) => writeln!(
            out,
            "{}",
            json!({
                "consistent": true,
                "sum": c.sum(),
                "max": c.max_rank(),
                "sorted": c.sorted_desc(),
                "votes": votes.iter().map(|&v| alt(v)).collect::<Vec<_>>(),
            })
        )?,
        (Ok(votes), Format::Text) => {
            writeln!(out, "consistent")?;
            writeln!(out, "sum: {}", c.sum())?;
            writeln!(out, "max: {}", c.max_rank())?;
            writeln!(out, "votes: {}", join(votes.iter().map(|&v| alt(v))))?;
        }
        (Err(stuck), Format::Json) => writeln!(out, "{}", json!({"consistent": false, "unresolved": names(stuck)}))?,
        (Err(stuck), Format::Text) => {
            writeln!(out, "inconsistent")?;
            writeln!(out, "unresolved: {}", names(stuck).join(", "))?;
        }
    }
    Ok(if result.is_ok() { 0 } else { EXIT_INVALID })
}

fn generate(kind: GenKind, seed: u64) -> Result<Profile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let need = |n: usize| if n == 0 { bail!("--n must be positive") } else { Ok(()) };
    Ok(match kind {
        GenKind::RandomClassic { n, max_len, alternatives } => {
            need(n)?;
            if alternatives == 0 {
                bail!("--alternatives must be positive");
            }
            random::random_classic_profile(&mut rng, n, max_len, alternatives)
        }
        GenKind::RandomSmart { n, max_len, monotone } => {
            need(n)?;
            random::random_smart_profile(&mut rng, n, max_len, monotone)
        }
        GenKind::RandomOr { n, max_len } => {
            need(n)?;
            random::random_or_profile(&mut rng, n, max_len)
        }
        GenKind::RandomAnd { n, max_len } => {
            need(n)?;
            random::random_and_profile(&mut rng, n, max_len)
        }
        GenKind::MinsumOr2 { vars, edges, k, multiplier } => {
            gadgets::gen_minsum_or2(vars, &format::parse_edges(&edges)?, k, multiplier)?
        }
        GenKind::MinsumAnd2 { vars, edges, k, multiplier } => {
            gadgets::gen_minsum_and2(vars, &format::parse_edges(&edges)?, k, multiplier)?
        }
        GenKind::MinmaxOrand2 { vars, clauses } => gadgets::gen_minmax_orand2(vars, &format::parse_clauses(&clauses)?)?,
        GenKind::MinmaxInapprox { vars, clauses, gap } => {
            gadgets::gen_minmax_inapprox(vars, &format::parse_clauses(&clauses)?, gap)?
        }
        GenKind::MinmaxCast { n } => axioms::build_counterexample(Counterexample::MinmaxCast { n })?.0,
        GenKind::MinmaxCastInverted { n } => axioms::build_counterexample(Counterexample::MinmaxCastInverted { n })?.0,
        GenKind::MinsumOr2Cast => axioms::build_counterexample(Counterexample::MinsumOr2Cast)?.0,
    })
}

fn axiom_check(p: &Profile, a: AgentId, d: bool, rule: &RuleHandle, format: Format, out: &mut dyn Write) -> Result<u8> {
    let report = axioms::check_cast_monotonicity(p, a, d, rule)?;
    let bits = |v: &Vec<bool>| v.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
    let set = |s: &std::collections::BTreeSet<Vec<bool>>| s.iter().map(bits).collect::<Vec<_>>();
    let witness = report.witness.as_ref().map(|w| {
        let text = match &w.agg {
            Aggregator::Function(f) => f.display_with(p.agents()).to_string(),
            Aggregator::Majority => "majority".to_string(),
        };
        let condition = match w.condition {
            Condition::I => "i",
            Condition::II => "ii",
        };
        (condition, text)
    });
    let (maj_i, maj_ii) = report.conditions_for(&Aggregator::Majority)?;
    let d_label = u8::from(d);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "rule": rule.label(),
                "agent": p.agent_name(a),
                "d": d_label.to_string(),
                "holds": report.holds(),
                "before": set(&report.before),
                "after": set(&report.after),
                "violates_iii": report.violates_iii.as_ref().map(bits),
                "violates_iv": report.violates_iv.as_ref().map(bits),
                "witness": witness.as_ref().map(|(c, f)| json!({"condition": c, "agg": f})),
                "majority": {"i": maj_i, "ii": maj_ii},
            })
        )?,
        Format::Text => {
            writeln!(out, "rule: {}", rule.label())?;
            writeln!(out, "agent {} switches to a direct vote for {d_label}", p.agent_name(a))?;
            writeln!(out, "optima before: {}", set(&report.before).join(" "))?;
            writeln!(out, "optima after:  {}", set(&report.after).join(" "))?;
            writeln!(out, "cast monotonicity {}", if report.holds() { "holds" } else { "violated" })?;
            if let Some(x) = &report.violates_iii {
                writeln!(out, "  (iii) fails: {} has no outcome above it afterwards", bits(x))?;
            }
            if let Some(y) = &report.violates_iv {
                writeln!(out, "  (iv) fails: {} has no outcome below it before", bits(y))?;
            }
            if let Some((c, f)) = &witness {
                writeln!(out, "  ({c}) fails for agg = {f}")?;
            }
            writeln!(out, "majority: (i) {}, (ii) {}", ok(maj_i), ok(maj_ii))?;
        }
    }
    Ok(0)
}

fn ok(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}
