//! Boolean functions in disjunctive normal form.
//!
//! Smart-ballot entries are stored as DNF formulas over agent ids. The
//! canonical form is absorption-minimal: no clause is a superset of another,
//! no clause contains a literal together with its negation, and clauses are
//! sorted and deduplicated. For monotone functions this is the set of prime
//! implicants, so two monotone functions are extensionally equal iff their
//! canonical clause lists coincide. Functions with negated literals fall back
//! to truth tables over their support, bounded by a support cap.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::AgentId;

/// Largest support for which truth-table checks are attempted.
pub const DEFAULT_SUPPORT_CAP: usize = 20;

/// An agent variable, possibly negated.
///
/// Ordering is by agent id with the negated literal last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub agent: AgentId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(agent: AgentId) -> Self {
        Literal {
            agent,
            negated: false,
        }
    }

    pub fn neg(agent: AgentId) -> Self {
        Literal {
            agent,
            negated: true,
        }
    }

    fn value_under(self, agent_value: bool) -> bool {
        agent_value != self.negated
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    Const0,
    Const1,
    General,
}

/// A Boolean function in canonical DNF.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DnfFunction {
    clauses: Vec<Vec<Literal>>,
}

/// A partial assignment of truth values; absent agents are unknown.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment(BTreeMap<AgentId, bool>);

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, agent: AgentId) -> Option<bool> {
        self.0.get(&agent).copied()
    }

    pub fn set(&mut self, agent: AgentId, value: bool) {
        self.0.insert(agent, value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AgentId, bool)> + '_ {
        self.0.iter().map(|(&a, &v)| (a, v))
    }
}

impl FromIterator<(AgentId, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (AgentId, bool)>>(iter: I) -> Self {
        PartialAssignment(iter.into_iter().collect())
    }
}

/// Which binary connective to extract from a monotone function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryTarget {
    And,
    Or,
}

/// Result of [`DnfFunction::find_binary_simulation`]: fixing `assignment`
/// leaves `x_p ∧ x_q` (or `x_p ∨ x_q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySimulation {
    pub p: AgentId,
    pub q: AgentId,
    pub assignment: PartialAssignment,
}

/// `true` if `small` (sorted) is a subset of `big` (sorted).
fn is_subset(small: &[Literal], big: &[Literal]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for lit in small {
        for other in it.by_ref() {
            if other == lit {
                continue 'outer;
            }
            if other > lit {
                return false;
            }
        }
        return false;
    }
    true
}

impl DnfFunction {
    /// Builds the canonical form of a raw clause list.
    pub fn canonicalize<I, C>(raw: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = Literal>,
    {
        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        for clause in raw {
            let mut lits: Vec<Literal> = clause.into_iter().collect();
            lits.sort_unstable();
            lits.dedup();
            // both polarities of one agent sit next to each other after sorting
            if lits.windows(2).any(|w| w[0].agent == w[1].agent) {
                continue;
            }
            clauses.push(lits);
        }
        clauses.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        clauses.dedup();

        let mut kept: Vec<Vec<Literal>> = Vec::with_capacity(clauses.len());
        for clause in clauses {
            if !kept.iter().any(|k| is_subset(k, &clause)) {
                kept.push(clause);
            }
        }
        kept.sort_unstable();
        DnfFunction { clauses: kept }
    }

    pub fn constant(value: bool) -> Self {
        if value {
            DnfFunction {
                clauses: vec![Vec::new()],
            }
        } else {
            DnfFunction {
                clauses: Vec::new(),
            }
        }
    }

    pub fn projection(agent: AgentId) -> Self {
        DnfFunction {
            clauses: vec![vec![Literal::pos(agent)]],
        }
    }

    /// Disjunction of the given agents.
    pub fn or(agents: impl IntoIterator<Item = AgentId>) -> Self {
        Self::canonicalize(agents.into_iter().map(|a| [Literal::pos(a)]))
    }

    /// Conjunction of the given agents.
    pub fn and(agents: impl IntoIterator<Item = AgentId>) -> Self {
        Self::canonicalize([agents.into_iter().map(Literal::pos).collect::<Vec<_>>()])
    }

    /// Threshold function: true iff at least `threshold` of `agents` are true.
    pub fn threshold(agents: &[AgentId], threshold: usize) -> Self {
        let mut clauses = Vec::new();
        let mut pick = Vec::with_capacity(threshold);
        fn rec(
            agents: &[AgentId],
            start: usize,
            left: usize,
            pick: &mut Vec<Literal>,
            out: &mut Vec<Vec<Literal>>,
        ) {
            if left == 0 {
                out.push(pick.clone());
                return;
            }
            for i in start..agents.len() {
                if agents.len() - i < left {
                    break;
                }
                pick.push(Literal::pos(agents[i]));
                rec(agents, i + 1, left - 1, pick, out);
                pick.pop();
            }
        }
        rec(agents, 0, threshold, &mut pick, &mut clauses);
        Self::canonicalize(clauses)
    }

    /// Strict majority over `agents`.
    pub fn majority(agents: &[AgentId]) -> Self {
        Self::threshold(agents, agents.len() / 2 + 1)
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn kind(&self) -> FunctionKind {
        match self.clauses.as_slice() {
            [] => FunctionKind::Const0,
            [c] if c.is_empty() => FunctionKind::Const1,
            _ => FunctionKind::General,
        }
    }

    /// The constant this function is syntactically, if any.
    pub fn as_constant(&self) -> Option<bool> {
        match self.kind() {
            FunctionKind::Const0 => Some(false),
            FunctionKind::Const1 => Some(true),
            FunctionKind::General => None,
        }
    }

    /// The delegate if this is a single positive literal.
    pub fn as_projection(&self) -> Option<AgentId> {
        match self.clauses.as_slice() {
            [c] if c.len() == 1 && !c[0].negated => Some(c[0].agent),
            _ => None,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().flatten().all(|l| !l.negated)
    }

    /// Sorted, deduplicated agents the formula mentions.
    pub fn support(&self) -> Vec<AgentId> {
        let mut s: Vec<AgentId> = self.clauses.iter().flatten().map(|l| l.agent).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn mentions(&self, agent: AgentId) -> bool {
        self.clauses.iter().flatten().any(|l| l.agent == agent)
    }

    /// Applies `map` to every agent id and re-canonicalizes.
    pub fn rename(&self, map: impl Fn(AgentId) -> AgentId) -> Self {
        Self::canonicalize(self.clauses.iter().map(|c| {
            c.iter()
                .map(|l| Literal {
                    agent: map(l.agent),
                    negated: l.negated,
                })
                .collect::<Vec<_>>()
        }))
    }

    /// Evaluates under a total assignment.
    pub fn evaluate(&self, value: impl Fn(AgentId) -> bool) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(|l| l.value_under(value(l.agent))))
    }

    /// Substitutes the known values of `nu` and re-canonicalizes.
    pub fn partial_eval(&self, nu: &PartialAssignment) -> Self {
        self.partial_eval_with(|a| nu.get(a))
    }

    pub fn partial_eval_with(&self, lookup: impl Fn(AgentId) -> Option<bool>) -> Self {
        let mut out = Vec::with_capacity(self.clauses.len());
        'clauses: for clause in &self.clauses {
            let mut rest = Vec::with_capacity(clause.len());
            for &lit in clause {
                match lookup(lit.agent) {
                    Some(v) if lit.value_under(v) => {}
                    Some(_) => continue 'clauses,
                    None => rest.push(lit),
                }
            }
            out.push(rest);
        }
        Self::canonicalize(out)
    }

    /// Whether the function is extensionally constant, with the default cap.
    pub fn is_constant(&self) -> Result<Option<bool>> {
        self.is_constant_capped(DEFAULT_SUPPORT_CAP)
    }

    pub fn is_constant_capped(&self, cap: usize) -> Result<Option<bool>> {
        if let Some(c) = self.as_constant() {
            return Ok(Some(c));
        }
        if self.is_monotone() {
            return Ok(None);
        }
        let support = self.support();
        if support.len() > cap {
            return Err(Error::SupportTooLarge {
                size: support.len(),
                cap,
            });
        }
        let first = self.eval_mask(&support, 0);
        for mask in 1u64..(1u64 << support.len()) {
            if self.eval_mask(&support, mask) != first {
                return Ok(None);
            }
        }
        Ok(Some(first))
    }

    fn eval_mask(&self, support: &[AgentId], mask: u64) -> bool {
        self.evaluate(|a| {
            let idx = support.binary_search(&a).expect("agent in support");
            mask >> idx & 1 == 1
        })
    }

    /// Value of the function under a partial assignment when it is forced,
    /// `None` while it still depends on unknown agents.
    ///
    /// Monotone functions are decided clause by clause; otherwise the
    /// residual function is checked by truth table.
    pub fn forced_value(&self, lookup: impl Fn(AgentId) -> Option<bool>) -> Result<Option<bool>> {
        let mut all_false = true;
        for clause in &self.clauses {
            let mut satisfied = true;
            let mut falsified = false;
            for lit in clause {
                match lookup(lit.agent) {
                    Some(v) if lit.value_under(v) => {}
                    Some(_) => {
                        falsified = true;
                        satisfied = false;
                        break;
                    }
                    None => satisfied = false,
                }
            }
            if satisfied {
                return Ok(Some(true));
            }
            if !falsified {
                all_false = false;
            }
        }
        if all_false {
            return Ok(Some(false));
        }
        if self.is_monotone() {
            return Ok(None);
        }
        self.partial_eval_with(lookup).is_constant()
    }

    /// Extensional equality, with the default support cap.
    pub fn extensionally_equal(&self, other: &DnfFunction) -> Result<bool> {
        self.extensionally_equal_capped(other, DEFAULT_SUPPORT_CAP)
    }

    pub fn extensionally_equal_capped(&self, other: &DnfFunction, cap: usize) -> Result<bool> {
        if self.is_monotone() && other.is_monotone() {
            return Ok(self == other);
        }
        if self == other {
            return Ok(true);
        }
        let mut support = self.support();
        support.extend(other.support());
        support.sort_unstable();
        support.dedup();
        if support.len() > cap {
            return Err(Error::SupportTooLarge {
                size: support.len(),
                cap,
            });
        }
        for mask in 0u64..(1u64 << support.len()) {
            if self.eval_mask(&support, mask) != other.eval_mask(&support, mask) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual `¬f(¬x)` of a monotone function, computed structurally as
    /// the minimal transversals of the clause family.
    pub fn dual(&self) -> Result<DnfFunction> {
        if !self.is_monotone() {
            return Err(Error::NotMonotone);
        }
        let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
        for clause in &self.clauses {
            let mut next = Vec::with_capacity(acc.len() * clause.len());
            for partial in &acc {
                for &lit in clause {
                    let mut c = partial.clone();
                    c.push(lit);
                    next.push(c);
                }
            }
            acc = DnfFunction::canonicalize(next).clauses;
        }
        Ok(DnfFunction::canonicalize(acc))
    }

    /// Fixes all variables but two so that the residual is `x_p ∧ x_q`
    /// (resp. `x_p ∨ x_q`). Returns `None` when the function is a plain
    /// disjunction (resp. conjunction) of variables, where no such
    /// restriction exists.
    pub fn find_binary_simulation(&self, target: BinaryTarget) -> Result<Option<BinarySimulation>> {
        if !self.is_monotone() {
            return Err(Error::NotMonotone);
        }
        match target {
            BinaryTarget::And => Ok(self.and_simulation()),
            BinaryTarget::Or => {
                let dual = self.dual()?;
                Ok(dual.and_simulation().map(|sim| BinarySimulation {
                    p: sim.p,
                    q: sim.q,
                    assignment: sim.assignment.iter().map(|(a, v)| (a, !v)).collect(),
                }))
            }
        }
    }

    fn and_simulation(&self) -> Option<BinarySimulation> {
        let clause = self.clauses.iter().find(|c| c.len() > 1)?;
        let (p, q) = (clause[0].agent, clause[1].agent);
        let mut assignment = PartialAssignment::new();
        for agent in self.support() {
            if agent == p || agent == q {
                continue;
            }
            let inside = clause.iter().any(|l| l.agent == agent);
            assignment.set(agent, inside);
        }
        Some(BinarySimulation { p, q, assignment })
    }

    /// Parses the infix syntax produced by [`DnfFunction::display_with`]:
    /// clauses joined by `|`, literals by `&`, optional parentheses around a
    /// clause, `!` for negation, and `0` / `1` for the constants.
    pub fn parse(text: &str, resolve: impl Fn(&str) -> Option<AgentId>) -> Result<DnfFunction> {
        let text = text.trim();
        match text {
            "0" => return Ok(DnfFunction::constant(false)),
            "1" => return Ok(DnfFunction::constant(true)),
            "" => return Err(Error::Malformed("empty formula".into())),
            _ => {}
        }
        let mut clauses = Vec::new();
        for clause in text.split('|') {
            let mut clause = clause.trim();
            if let Some(inner) = clause.strip_prefix('(') {
                clause = inner
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Malformed(format!("unbalanced parenthesis in {text:?}")))?;
            }
            let mut lits = Vec::new();
            for lit in clause.split('&') {
                let lit = lit.trim();
                let (negated, name) = match lit.strip_prefix('!') {
                    Some(rest) => (true, rest.trim()),
                    None => (false, lit),
                };
                if name.is_empty() || name.contains(['(', ')']) {
                    return Err(Error::Malformed(format!("bad literal {lit:?} in {text:?}")));
                }
                let agent = resolve(name).ok_or_else(|| Error::UnknownAgent(name.to_string()))?;
                lits.push(Literal { agent, negated });
            }
            clauses.push(lits);
        }
        Ok(DnfFunction::canonicalize(clauses))
    }

    /// Renders the formula with agent names, e.g. `b | c`, `e & f`, `!d`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayDnf { f: self, names }
    }
}

struct DisplayDnf<'a> {
    f: &'a DnfFunction,
    names: &'a [String],
}

impl fmt::Display for DisplayDnf<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.f.as_constant() {
            return write!(out, "{}", u8::from(c));
        }
        let many = self.f.clauses.len() > 1;
        for (i, clause) in self.f.clauses.iter().enumerate() {
            if i > 0 {
                write!(out, " | ")?;
            }
            let paren = many && clause.len() > 1;
            if paren {
                write!(out, "(")?;
            }
            for (j, lit) in clause.iter().enumerate() {
                if j > 0 {
                    write!(out, " & ")?;
                }
                let name = self
                    .names
                    .get(lit.agent)
                    .map(String::as_str)
                    .unwrap_or("?");
                write!(out, "{}{}", if lit.negated { "!" } else { "" }, name)?;
            }
            if paren {
                write!(out, ")")?;
            }
        }
        Ok(())
    }
}

/// Function classes used to dispatch solvers, ordered by inclusion.
///
/// Every class contains projections and constants. `Or` and `OrAnd2` are
/// incomparable; their join is `Mon`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    Liquid,
    Or2,
    And2,
    OrAnd2,
    Or,
    And,
    Mon,
    Bool,
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Features {
    or2: bool,
    or_wide: bool,
    and2: bool,
    and_wide: bool,
    monotone_other: bool,
    negation: bool,
}

impl Features {
    fn union(self, o: Features) -> Features {
        Features {
            or2: self.or2 | o.or2,
            or_wide: self.or_wide | o.or_wide,
            and2: self.and2 | o.and2,
            and_wide: self.and_wide | o.and_wide,
            monotone_other: self.monotone_other | o.monotone_other,
            negation: self.negation | o.negation,
        }
    }

    fn class(self) -> FunctionClass {
        let any_or = self.or2 || self.or_wide;
        let any_and = self.and2 || self.and_wide;
        if self.negation {
            FunctionClass::Bool
        } else if self.monotone_other || (any_or && any_and && (self.or_wide || self.and_wide)) {
            FunctionClass::Mon
        } else if any_or && any_and {
            FunctionClass::OrAnd2
        } else if self.or_wide {
            FunctionClass::Or
        } else if self.or2 {
            FunctionClass::Or2
        } else if self.and_wide {
            FunctionClass::And
        } else if self.and2 {
            FunctionClass::And2
        } else {
            FunctionClass::Liquid
        }
    }
}

impl FunctionClass {
    /// The smallest class containing `f`.
    pub fn of(f: &DnfFunction) -> FunctionClass {
        Self::features_of(f).class()
    }

    fn features_of(f: &DnfFunction) -> Features {
        let mut feat = Features::default();
        if f.as_constant().is_some() || f.as_projection().is_some() {
            return feat;
        }
        if !f.is_monotone() {
            feat.negation = true;
        } else if f.clauses.iter().all(|c| c.len() == 1) {
            if f.clauses.len() == 2 {
                feat.or2 = true;
            } else {
                feat.or_wide = true;
            }
        } else if f.clauses.len() == 1 {
            if f.clauses[0].len() == 2 {
                feat.and2 = true;
            } else {
                feat.and_wide = true;
            }
        } else {
            feat.monotone_other = true;
        }
        feat
    }

    fn features(self) -> Features {
        let mut f = Features::default();
        match self {
            FunctionClass::Liquid => {}
            FunctionClass::Or2 => f.or2 = true,
            FunctionClass::And2 => f.and2 = true,
            FunctionClass::OrAnd2 => {
                f.or2 = true;
                f.and2 = true;
            }
            FunctionClass::Or => {
                f.or2 = true;
                f.or_wide = true;
            }
            FunctionClass::And => {
                f.and2 = true;
                f.and_wide = true;
            }
            FunctionClass::Mon => f.monotone_other = true,
            FunctionClass::Bool => f.negation = true,
        }
        f
    }

    /// Least class containing both.
    pub fn join(self, other: FunctionClass) -> FunctionClass {
        self.features().union(other.features()).class()
    }

    /// `true` if `other ⊆ self`.
    pub fn contains(self, other: FunctionClass) -> bool {
        self.join(other) == self
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::Liquid => "Liquid",
            FunctionClass::Or2 => "Or2",
            FunctionClass::And2 => "And2",
            FunctionClass::OrAnd2 => "OrAnd2",
            FunctionClass::Or => "Or",
            FunctionClass::And => "And",
            FunctionClass::Mon => "Mon",
            FunctionClass::Bool => "Bool",
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const X: AgentId = 0;
    const Y: AgentId = 1;
    const Z: AgentId = 2;

    fn p(a: AgentId) -> Literal {
        Literal::pos(a)
    }

    fn maj() -> DnfFunction {
        DnfFunction::canonicalize([vec![p(X), p(Y)], vec![p(Y), p(Z)], vec![p(Z), p(X)]])
    }

    /// Truth table over agents `0..n`.
    fn table(f: &DnfFunction, n: usize) -> Vec<bool> {
        (0u32..1 << n)
            .map(|m| f.evaluate(|a| m >> a & 1 == 1))
            .collect()
    }

    #[test]
    fn absorption_and_constants() {
        let f = DnfFunction::canonicalize([vec![p(1), p(2)], vec![p(1)]]);
        assert_eq!(f, DnfFunction::projection(1));
        let empty: Vec<Vec<Literal>> = vec![];
        assert_eq!(DnfFunction::canonicalize(empty).kind(), FunctionKind::Const0);
        assert_eq!(
            DnfFunction::canonicalize([Vec::<Literal>::new()]).kind(),
            FunctionKind::Const1
        );
        assert_eq!(maj().clauses().len(), 3);
        assert_eq!(maj(), DnfFunction::majority(&[X, Y, Z]));
    }

    #[test]
    fn contradictory_clause_dropped() {
        let f = DnfFunction::canonicalize([vec![p(3), Literal::neg(3)]]);
        assert_eq!(f.as_constant(), Some(false));
        let g = DnfFunction::canonicalize([vec![p(3), Literal::neg(3)], vec![p(4)]]);
        assert_eq!(g, DnfFunction::projection(4));
    }

    #[test]
    fn partial_evaluation_examples() {
        let b_or_c = DnfFunction::or([1, 2]);
        let one: PartialAssignment = [(1, true)].into_iter().collect();
        assert_eq!(b_or_c.partial_eval(&one).as_constant(), Some(true));
        let zero: PartialAssignment = [(1, false)].into_iter().collect();
        assert_eq!(b_or_c.partial_eval(&zero), DnfFunction::projection(2));

        // Maj(e, f, 1) = e | f
        let g_true: PartialAssignment = [(Z, true)].into_iter().collect();
        assert_eq!(maj().partial_eval(&g_true), DnfFunction::or([X, Y]));
    }

    #[test]
    fn constancy() {
        assert_eq!(DnfFunction::constant(true).is_constant(), Ok(Some(true)));
        assert_eq!(DnfFunction::or([X, Y]).is_constant(), Ok(None));
        let taut = DnfFunction::canonicalize([vec![p(5)], vec![Literal::neg(5)]]);
        assert_eq!(taut.clauses().len(), 2);
        assert_eq!(taut.is_constant(), Ok(Some(true)));
        let wide = DnfFunction::canonicalize(
            (0..21).map(|a| vec![if a == 0 { Literal::neg(a) } else { p(a) }]),
        );
        assert_eq!(
            wide.is_constant(),
            Err(Error::SupportTooLarge { size: 21, cap: 20 })
        );
    }

    #[test]
    fn equality_examples() {
        let bc = DnfFunction::or([1, 2]);
        let cb = DnfFunction::or([2, 1]);
        assert_eq!(bc.extensionally_equal(&cb), Ok(true));
        let absorbed = DnfFunction::canonicalize([vec![p(1), p(2)], vec![p(1)]]);
        assert_eq!(
            DnfFunction::projection(1).extensionally_equal(&absorbed),
            Ok(true)
        );
        assert_eq!(bc.extensionally_equal(&DnfFunction::and([1, 2])), Ok(false));
        let neg = DnfFunction::canonicalize([vec![Literal::neg(1)]]);
        let same = DnfFunction::canonicalize([vec![Literal::neg(1), p(2)], vec![Literal::neg(1), Literal::neg(2)]]);
        assert_eq!(neg.extensionally_equal(&same), Ok(true));
    }

    #[test]
    fn binary_simulation_examples() {
        let and = maj().find_binary_simulation(BinaryTarget::And).unwrap().unwrap();
        assert_eq!((and.p, and.q), (X, Y));
        assert_eq!(and.assignment, [(Z, false)].into_iter().collect());
        let or = maj().find_binary_simulation(BinaryTarget::Or).unwrap().unwrap();
        assert_eq!((or.p, or.q), (X, Y));
        assert_eq!(or.assignment, [(Z, true)].into_iter().collect());
        let disj = DnfFunction::or([X, Y, Z]);
        assert_eq!(disj.find_binary_simulation(BinaryTarget::And), Ok(None));
        let neg = DnfFunction::canonicalize([vec![Literal::neg(1)]]);
        assert_eq!(
            neg.find_binary_simulation(BinaryTarget::And),
            Err(Error::NotMonotone)
        );
    }

    #[test]
    fn dual_of_small_functions() {
        assert_eq!(DnfFunction::or([1, 2]).dual(), Ok(DnfFunction::and([1, 2])));
        assert_eq!(maj().dual(), Ok(maj()));
        assert_eq!(
            DnfFunction::constant(false).dual(),
            Ok(DnfFunction::constant(true))
        );
    }

    #[test]
    fn text_round_trip() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let resolve = |s: &str| names.iter().position(|n| n == s);
        for text in ["b | c", "!d", "0", "1", "(a & b) | c", "a & !c"] {
            let f = DnfFunction::parse(text, resolve).unwrap();
            assert_eq!(f.display_with(&names).to_string(), text);
        }
        assert_eq!(
            DnfFunction::parse("b | zz", resolve),
            Err(Error::UnknownAgent("zz".into()))
        );
        assert!(DnfFunction::parse("(a & b", resolve).is_err());
    }

    #[test]
    fn class_lattice() {
        use FunctionClass::*;
        assert_eq!(FunctionClass::of(&DnfFunction::projection(0)), Liquid);
        assert_eq!(FunctionClass::of(&DnfFunction::or([0, 1])), Or2);
        assert_eq!(FunctionClass::of(&DnfFunction::or([0, 1, 2])), Or);
        assert_eq!(FunctionClass::of(&DnfFunction::and([0, 1])), And2);
        assert_eq!(FunctionClass::of(&maj()), Mon);
        assert_eq!(Or2.join(And2), OrAnd2);
        assert_eq!(Or.join(And2), Mon);
        assert!(Or.contains(Or2));
        assert!(!Or.contains(OrAnd2));
        assert!(Bool.contains(Mon));
        assert!(OrAnd2.contains(Liquid));
    }

    fn monotone_fn(vars: usize) -> impl Strategy<Value = DnfFunction> {
        prop::collection::vec(prop::collection::vec(0..vars, 0..=3), 0..=4).prop_map(|raw| {
            DnfFunction::canonicalize(raw.into_iter().map(|c| c.into_iter().map(Literal::pos)))
        })
    }

    fn any_fn(vars: usize) -> impl Strategy<Value = DnfFunction> {
        prop::collection::vec(prop::collection::vec((0..vars, any::<bool>()), 0..=3), 0..=4)
            .prop_map(|raw| {
                DnfFunction::canonicalize(raw.into_iter().map(|c| {
                    c.into_iter().map(|(agent, negated)| Literal { agent, negated })
                }))
            })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(f in any_fn(6)) {
            let again = DnfFunction::canonicalize(f.clauses().to_vec());
            prop_assert_eq!(again, f);
        }

        #[test]
        fn monotone_equality_matches_truth_tables(f in monotone_fn(6), g in monotone_fn(6)) {
            let by_table = table(&f, 6) == table(&g, 6);
            prop_assert_eq!(f.extensionally_equal(&g).unwrap(), by_table);
        }

        #[test]
        fn general_equality_matches_truth_tables(f in any_fn(5), g in any_fn(5)) {
            let by_table = table(&f, 5) == table(&g, 5);
            prop_assert_eq!(f.extensionally_equal(&g).unwrap(), by_table);
        }

        #[test]
        fn partial_eval_commutes_with_evaluation(
            f in any_fn(6),
            nu in prop::collection::vec(prop::option::of(any::<bool>()), 6),
        ) {
            let assignment: PartialAssignment = nu
                .iter()
                .enumerate()
                .filter_map(|(a, v)| v.map(|v| (a, v)))
                .collect();
            let residual = f.partial_eval(&assignment);
            for mask in 0u32..64 {
                let total = |a: AgentId| nu[a].unwrap_or(mask >> a & 1 == 1);
                prop_assert_eq!(f.evaluate(total), residual.evaluate(total));
            }
            let forced = f.forced_value(|a| nu[a]).unwrap();
            prop_assert_eq!(forced, residual.is_constant().unwrap());
        }

        #[test]
        fn binary_simulations_verify(f in monotone_fn(6)) {
            for (target, expected) in [
                (BinaryTarget::And, FunctionClass::Or),
                (BinaryTarget::Or, FunctionClass::And),
            ] {
                match f.find_binary_simulation(target).unwrap() {
                    Some(sim) => {
                        let got = f.partial_eval(&sim.assignment);
                        let want = match target {
                            BinaryTarget::And => DnfFunction::and([sim.p, sim.q]),
                            BinaryTarget::Or => DnfFunction::or([sim.p, sim.q]),
                        };
                        prop_assert_eq!(got, want);
                    }
                    None => prop_assert!(expected.contains(FunctionClass::of(&f))),
                }
            }
        }

        #[test]
        fn dual_matches_definition(f in monotone_fn(5)) {
            let d = f.dual().unwrap();
            for mask in 0u32..32 {
                prop_assert_eq!(
                    d.evaluate(|a| mask >> a & 1 == 1),
                    !f.evaluate(|a| mask >> a & 1 == 0)
                );
            }
        }
    }
}
