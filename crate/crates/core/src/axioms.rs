//! Cast monotonicity over two alternatives.
//!
//! Switching agent `a` to a direct vote for `d` must never remove `d` from,
//! nor add `1 - d` to, the possible outcomes under any monotone aggregation
//! function. Equivalently, writing `≤_d` for `≤` when `d = 1` and `≥` when
//! `d = 0`, every optimum before the switch is `≤_d` some optimum after it
//! (condition iii), and every optimum after it is `≥_d` some optimum before
//! it (condition iv).

use std::collections::BTreeSet;

use crate::ballots::{Ballot, Model, Profile, ProfileBuilder};
use crate::classic::{min_bottleneck_arborescence, min_cost_arborescence, DelegationGraph};
use crate::control::{leximin, minmax_biased, minsum_biased};
use crate::error::{Error, Result};
use crate::functions::DnfFunction;
use crate::smart::{brute_optimal, Objective, SmartInstance, DEFAULT_BUDGET};
use crate::AgentId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    MinSum,
    MinMax,
    LexiMin,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::MinSum => "minsum",
            Rule::MinMax => "minmax",
            Rule::LexiMin => "leximin",
        }
    }

    fn objective(self) -> Objective {
        match self {
            Rule::MinSum => Objective::Sum,
            Rule::MinMax => Objective::Max,
            Rule::LexiMin => Objective::Lexi,
        }
    }
}

/// An unravelling rule: objective, optional bias towards an alternative
/// (`true` for "1") and the model it runs under. Smart rules enumerate
/// certificates within `budget`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleHandle {
    pub rule: Rule,
    pub bias: Option<bool>,
    pub model: Model,
    pub budget: u128,
}

impl RuleHandle {
    pub fn new(rule: Rule, bias: Option<bool>, model: Model) -> Self {
        RuleHandle {
            rule,
            bias,
            model,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn classic(rule: Rule, bias: Option<bool>) -> Self {
        Self::new(rule, bias, Model::Classic)
    }

    pub fn smart(rule: Rule, bias: Option<bool>) -> Self {
        Self::new(rule, bias, Model::Smart)
    }

    pub fn with_budget(self, budget: u128) -> Self {
        RuleHandle { budget, ..self }
    }

    pub fn label(&self) -> String {
        let bias = match self.bias {
            None => String::new(),
            Some(d) => format!("^{}", u8::from(d)),
        };
        format!("{}{bias} ({})", self.rule.name(), self.model)
    }
}

/// Vote vectors of all optimal unravellings (`true` = "1"); a single
/// vector for biased rules.
///
/// Classic irresolute rules enumerate arborescences, biased ones use the
/// polynomial algorithms. Smart rules enumerate certificates; a biased
/// smart rule picks the optimal vector with the most votes for the bias,
/// the lexicographically smallest on ties.
pub fn optimal_set(profile: &Profile, rule: &RuleHandle) -> Result<BTreeSet<Vec<bool>>> {
    let [zero, one] = profile.binary_alternatives()?;
    match rule.model {
        Model::Classic => {
            let g = DelegationGraph::from_profile(profile)?;
            let to_bool = |votes: Vec<usize>| votes.into_iter().map(|v| v == one).collect::<Vec<bool>>();
            if let Some(d) = rule.bias {
                let d = if d { one } else { zero };
                let u = match rule.rule {
                    Rule::MinSum => minsum_biased(&g, d)?,
                    Rule::MinMax => minmax_biased(&g, d)?,
                    Rule::LexiMin => leximin(&g, Some(d))?,
                };
                return Ok(BTreeSet::from([to_bool(u.votes)]));
            }
            let target = match rule.rule {
                Rule::MinSum => vec![g.cost(&min_cost_arborescence(&g)?) as usize],
                Rule::MinMax => vec![min_bottleneck_arborescence(&g)?.1 as usize],
                Rule::LexiMin => g.certificate_of(&leximin(&g, None)?.arborescence).sorted_desc(),
            };
            let objective = rule.rule.objective();
            let mut out = BTreeSet::new();
            let mut error = None;
            g.for_each_arborescence(rule.budget, |t| {
                if objective.key(&g.certificate_of(t).ranks) == target {
                    match g.votes(t) {
                        Ok(v) => {
                            out.insert(to_bool(v));
                        }
                        Err(e) => error = Some(e),
                    }
                }
            })?;
            match error {
                Some(e) => Err(e),
                None => Ok(out),
            }
        }
        Model::Smart => {
            let inst = SmartInstance::new(profile)?;
            let all = brute_optimal(&inst, rule.rule.objective(), rule.budget)?.vote_vectors();
            Ok(match rule.bias {
                None => all.into_iter().collect(),
                Some(d) => {
                    let count = |v: &Vec<bool>| v.iter().filter(|&&x| x == d).count();
                    let best = all.iter().map(count).max().expect("an optimum exists");
                    all.into_iter().filter(|v| count(v) == best).take(1).collect()
                }
            })
        }
    }
}

/// `x ≤_d y`: componentwise `≤` for `d = 1`, `≥` for `d = 0`.
pub fn leq_d(x: &[bool], y: &[bool], d: bool) -> bool {
    x.iter().zip(y).all(|(&a, &b)| if d { a <= b } else { a >= b })
}

/// A monotone aggregation function over the agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aggregator {
    /// Strictly more than half of the votes; ties go to 0.
    Majority,
    Function(DnfFunction),
}

impl Aggregator {
    pub fn function(f: DnfFunction) -> Result<Self> {
        if f.is_monotone() {
            Ok(Aggregator::Function(f))
        } else {
            Err(Error::NotMonotone)
        }
    }
}

/// Outcome of aggregating a vote vector (`true` = "1").
pub fn aggregate(votes: &[bool], agg: &Aggregator) -> Result<bool> {
    match agg {
        Aggregator::Majority => Ok(2 * votes.iter().filter(|&&v| v).count() > votes.len()),
        Aggregator::Function(f) => {
            if !f.is_monotone() {
                return Err(Error::NotMonotone);
            }
            if let Some(&bad) = f.support().iter().find(|&&a| a >= votes.len()) {
                return Err(Error::UnknownAgent(bad.to_string()));
            }
            Ok(f.evaluate(|a| votes[a]))
        }
    }
}

/// The aggregation function that outputs `d` exactly on vectors `y` with
/// `x ≤_d y`: the conjunction of the agents voting 1 in `x` for `d = 1`,
/// the disjunction of those voting 0 for `d = 0`.
pub fn separating_aggregator(x: &[bool], d: bool) -> Aggregator {
    let agents = (0..x.len()).filter(|&a| x[a] == d);
    Aggregator::Function(if d {
        DnfFunction::and(agents)
    } else {
        DnfFunction::or(agents)
    })
}

/// Which condition of the definition a witness breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `d` stops being a possible outcome.
    I,
    /// `1 - d` becomes a possible outcome.
    II,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub condition: Condition,
    pub agg: Aggregator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CastReport {
    pub agent: AgentId,
    pub d: bool,
    /// Optimal vote vectors before and after the switch.
    pub before: BTreeSet<Vec<bool>>,
    pub after: BTreeSet<Vec<bool>>,
    /// A vector before the switch with nothing `≥_d` it afterwards.
    pub violates_iii: Option<Vec<bool>>,
    /// A vector after the switch with nothing `≤_d` it before.
    pub violates_iv: Option<Vec<bool>>,
    /// Aggregation function breaking (i) or (ii), derived from the first
    /// violated pointwise condition.
    pub witness: Option<Witness>,
}

impl CastReport {
    pub fn holds(&self) -> bool {
        self.violates_iii.is_none() && self.violates_iv.is_none()
    }

    /// Whether (i) and (ii) hold for a particular aggregation function.
    pub fn conditions_for(&self, agg: &Aggregator) -> Result<(bool, bool)> {
        let outcomes = |set: &BTreeSet<Vec<bool>>| -> Result<BTreeSet<bool>> {
            set.iter().map(|x| aggregate(x, agg)).collect()
        };
        let before = outcomes(&self.before)?;
        let after = outcomes(&self.after)?;
        let i = !before.contains(&self.d) || after.contains(&self.d);
        let ii = before.contains(&!self.d) || !after.contains(&!self.d);
        Ok((i, ii))
    }
}

/// Compares the optima of `profile` with those after `agent` switches to a
/// direct vote for `d`.
pub fn check_cast_monotonicity(profile: &Profile, agent: AgentId, d: bool, rule: &RuleHandle) -> Result<CastReport> {
    let [zero, one] = profile.binary_alternatives()?;
    if agent >= profile.n() {
        return Err(Error::UnknownAgent(agent.to_string()));
    }
    let switched = profile.with_ballot(agent, Ballot::direct(if d { one } else { zero }));
    let before = optimal_set(profile, rule)?;
    let after = optimal_set(&switched, rule)?;
    let violates_iii = before
        .iter()
        .find(|x| !after.iter().any(|y| leq_d(x, y, d)))
        .cloned();
    let violates_iv = after
        .iter()
        .find(|y| !before.iter().any(|x| leq_d(x, y, d)))
        .cloned();
    let witness = match (&violates_iii, &violates_iv) {
        (Some(x), _) => Some(Witness {
            condition: Condition::I,
            agg: separating_aggregator(x, d),
        }),
        (None, Some(y)) => Some(Witness {
            condition: Condition::II,
            agg: separating_aggregator(y, !d),
        }),
        (None, None) => None,
    };
    Ok(CastReport {
        agent,
        d,
        before,
        after,
        violates_iii,
        violates_iv,
        witness,
    })
}

/// Named instances on which rules fail cast monotonicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// Classic, `n >= 5` odd: `a = a2 ≻ 1`, `a2 = a ≻ 1`, `zero = 0`,
    /// `u_i = zero ≻ 1`; agent `a` switches to 1.
    MinmaxCast { n: usize },
    /// The same with 0 and 1 exchanged; `a` switches to 0.
    MinmaxCastInverted { n: usize },
    /// Smart `Or₂` instance on which MinSum fails; `a` switches to 1.
    MinsumOr2Cast,
}

/// The instance, the switching agent and the alternative it switches to.
pub fn build_counterexample(which: Counterexample) -> Result<(Profile, AgentId, bool)> {
    let cast = |n: usize, d: bool| -> Result<Profile> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::Precondition(format!("n must be odd and at least 5, got {n}")));
        }
        let (yes, no, constant) = if d { ("1", "0", "zero") } else { ("0", "1", "one") };
        let mut b = ProfileBuilder::binary()
            .agent("a", &["a2"], yes)
            .agent("a2", &["a"], yes)
            .agent(constant, &[], no);
        for i in 1..=n - 3 {
            b = b.agent(&format!("u{i}"), &[constant], yes);
        }
        b.build()
    };
    match which {
        Counterexample::MinmaxCast { n } => Ok((cast(n, true)?, 0, true)),
        Counterexample::MinmaxCastInverted { n } => Ok((cast(n, false)?, 0, false)),
        Counterexample::MinsumOr2Cast => {
            let p = ProfileBuilder::binary()
                .agent("a", &["c", "d"], "1")
                .agent("b", &["zero"], "1")
                .agent("c", &["a | b", "d"], "1")
                .agent("d", &["a | b", "c"], "1")
                .agent("e", &["b"], "1")
                .agent("f", &["b"], "1")
                .agent("zero", &[], "0")
                .build()?;
            Ok((p, 0, true))
        }
    }
}
