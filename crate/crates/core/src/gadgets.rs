//! Instance generators for the hardness reductions.
//!
//! Variables are 0-based indices named `x1, x2, …`. Variable voters are
//! simulated with a constant voter: under the `Or`-style reductions a
//! variable voter ranks `zero` first and votes 1 as backup, so it is true
//! exactly when it takes rank 1.

use crate::ballots::{Ballot, Profile};
use crate::error::{Error, Result};
use crate::functions::{DnfFunction, Literal};
use crate::AgentId;

const ZERO: usize = 0;
const ONE: usize = 1;

struct Builder {
    names: Vec<String>,
    ballots: Vec<Option<Ballot>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            ballots: Vec::new(),
        }
    }

    fn voter(&mut self, name: String) -> AgentId {
        self.names.push(name);
        self.ballots.push(None);
        self.names.len() - 1
    }

    fn set(&mut self, a: AgentId, entries: Vec<DnfFunction>, backup: usize) {
        self.ballots[a] = Some(Ballot::new(entries, backup));
    }

    fn finish(self) -> Result<Profile> {
        let ballots = self.ballots.into_iter().map(|b| b.expect("every voter gets a ballot")).collect();
        Profile::new(vec!["0".into(), "1".into()], self.names, ballots)
    }
}

/// Adds variable voters `x1..xn` and the constant voter. With `or_style`
/// the constant is `zero` and variables are `zero ≻ 1`; otherwise it is
/// `one` and variables are `one ≻ 0`.
fn variables(b: &mut Builder, num_vars: usize, or_style: bool) -> Vec<AgentId> {
    let vars: Vec<AgentId> = (0..num_vars).map(|i| b.voter(format!("x{}", i + 1))).collect();
    let (name, value) = if or_style { ("zero", ZERO) } else { ("one", ONE) };
    let constant = b.voter(name.to_string());
    b.set(constant, Vec::new(), value);
    for &x in &vars {
        b.set(x, vec![DnfFunction::projection(constant)], 1 - value);
    }
    vars
}

fn check_edges(num_vars: usize, edges: &[(usize, usize)], multiplier: usize) -> Result<()> {
    if multiplier == 0 {
        return Err(Error::Precondition("multiplier must be positive".into()));
    }
    for (c, &(i, j)) in edges.iter().enumerate() {
        if i == j || i >= num_vars || j >= num_vars {
            return Err(Error::Malformed(format!(
                "clause {c} must join two distinct variables below {num_vars}, got ({i}, {j})"
            )));
        }
    }
    Ok(())
}

fn minsum_two(num_vars: usize, edges: &[(usize, usize)], k: usize, multiplier: usize, or_style: bool) -> Result<Profile> {
    check_edges(num_vars, edges, multiplier)?;
    let join = |x: AgentId, y: AgentId| {
        if or_style {
            DnfFunction::or([x, y])
        } else {
            DnfFunction::and([x, y])
        }
    };
    let mut b = Builder::new();
    let vars = variables(&mut b, num_vars, or_style);
    let copies = (k + 1) * multiplier;
    for (c, &(i, j)) in edges.iter().enumerate() {
        for g in 0..copies {
            let va = b.voter(format!("cl{c}_g{g}_a"));
            let vb = b.voter(format!("cl{c}_g{g}_b"));
            b.set(va, vec![join(vars[j], vb)], ZERO);
            b.set(vb, vec![join(vars[i], va)], ZERO);
        }
    }
    b.finish()
}

/// MinSum over `Or₂`: a certificate of cost at most `k` exists iff the
/// graph on `num_vars` vertices with the given edges has a vertex cover of
/// size at most `k`. Each edge gets `multiplier · (k + 1)` two-voter
/// gadgets `a = x_j ∨ b ≻ 0`, `b = x_i ∨ a ≻ 0`.
pub fn gen_minsum_or2(num_vars: usize, edges: &[(usize, usize)], k: usize, multiplier: usize) -> Result<Profile> {
    minsum_two(num_vars, edges, k, multiplier, true)
}

/// The `And₂` counterpart of [`gen_minsum_or2`]: variables are `one ≻ 0`
/// and gadgets use `∧`.
pub fn gen_minsum_and2(num_vars: usize, edges: &[(usize, usize)], k: usize, multiplier: usize) -> Result<Profile> {
    minsum_two(num_vars, edges, k, multiplier, false)
}

/// Sign of a clause whose literals are all positive (`false`) or all
/// negative (`true`).
fn clause_sign(num_vars: usize, c: usize, clause: &[Literal; 3]) -> Result<bool> {
    if let Some(l) = clause.iter().find(|l| l.agent >= num_vars) {
        return Err(Error::Malformed(format!("clause {c} uses variable {} of {num_vars}", l.agent)));
    }
    let negated = clause[0].negated;
    if clause.iter().any(|l| l.negated != negated) {
        return Err(Error::Malformed(format!("clause {c} mixes positive and negative literals")));
    }
    Ok(negated)
}

/// MinMax over `OrAnd₂`: the optimum is at most 1 iff the formula is
/// satisfiable. Each clause `(x_i, x_j, x_k)` becomes a gadget with
/// `a = x_k ∘ c ≻ a′ ≻ 0`, `b = x_i ∘ a ≻ b′ ≻ 0`, `c = x_j ∘ b ≻ c′ ≻ 0`
/// and primed voters pointing back, where `∘` is `∨` for positive clauses
/// and `∧` for negative ones.
pub fn gen_minmax_orand2(num_vars: usize, phi: &[[Literal; 3]]) -> Result<Profile> {
    gen_minmax_ladder(num_vars, phi, 1, true)
}

/// Gap version of [`gen_minmax_orand2`] with `k` primed voters of each
/// kind: satisfiable formulas keep optimum at most 1, unsatisfiable ones
/// force `k + 1`.
pub fn gen_minmax_inapprox(num_vars: usize, phi: &[[Literal; 3]], k: usize) -> Result<Profile> {
    gen_minmax_ladder(num_vars, phi, k, false)
}

fn gen_minmax_ladder(num_vars: usize, phi: &[[Literal; 3]], k: usize, short_names: bool) -> Result<Profile> {
    let signs = phi
        .iter()
        .enumerate()
        .map(|(c, clause)| clause_sign(num_vars, c, clause))
        .collect::<Result<Vec<_>>>()?;
    let mut b = Builder::new();
    let vars = variables(&mut b, num_vars, true);
    for (c, (clause, negated)) in phi.iter().zip(signs).enumerate() {
        let join = |x: AgentId, y: AgentId| {
            if negated {
                DnfFunction::and([x, y])
            } else {
                DnfFunction::or([x, y])
            }
        };
        let heads: Vec<AgentId> = ["a", "b", "c"].iter().map(|s| b.voter(format!("cl{c}_{s}"))).collect();
        let ladders: Vec<Vec<AgentId>> = ["a", "b", "c"]
            .iter()
            .map(|s| {
                (1..=k)
                    .map(|l| {
                        let name = if short_names { format!("cl{c}_{s}'") } else { format!("cl{c}_{s}{l}") };
                        b.voter(name)
                    })
                    .collect()
            })
            .collect();
        // a waits on c and x_k, b on a and x_i, c on b and x_j
        let first = [
            join(vars[clause[2].agent], heads[2]),
            join(vars[clause[0].agent], heads[0]),
            join(vars[clause[1].agent], heads[1]),
        ];
        for kind in 0..3 {
            let head = heads[kind];
            let ladder = &ladders[kind];
            let mut entries = vec![first[kind].clone()];
            entries.extend(ladder.iter().map(|&v| DnfFunction::projection(v)));
            b.set(head, entries, ZERO);
            for (l, &v) in ladder.iter().enumerate() {
                let mut entries = vec![first[kind].clone()];
                entries.extend(
                    ladder
                        .iter()
                        .enumerate()
                        .map(|(m, &u)| DnfFunction::projection(if m == l { head } else { u })),
                );
                b.set(v, entries, ZERO);
            }
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::Model;
    use crate::functions::FunctionClass;
    use crate::smart::{brute_minmax, brute_minsum, search_minmax, search_minsum, DEFAULT_BUDGET, DEFAULT_NODE_BUDGET};

    fn pos(v: [usize; 3]) -> [Literal; 3] {
        v.map(Literal::pos)
    }

    fn neg(v: [usize; 3]) -> [Literal; 3] {
        v.map(Literal::neg)
    }

    const TRIANGLE: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

    #[test]
    fn triangle_voter_count() {
        let p = gen_minsum_or2(3, &TRIANGLE, 2, 1).unwrap();
        assert_eq!(p.n(), 22);
        assert_eq!(p.agent_name(3), "zero");
        assert_eq!(p.agent_name(4), "cl0_g0_a");
        assert!(p.validate(Model::Smart).is_ok());
        assert!(FunctionClass::Or2.contains(p.classify()));
        assert!(p.max_ballot_len() <= 1);
    }

    #[test]
    fn minsum_or2_costs() {
        let edge = gen_minsum_or2(2, &[(0, 1)], 1, 1).unwrap();
        assert_eq!(brute_minsum(&edge, DEFAULT_BUDGET).unwrap().value, vec![1]);
        let tri = gen_minsum_or2(3, &TRIANGLE, 1, 1).unwrap();
        assert!(brute_minsum(&tri, DEFAULT_BUDGET).unwrap().value[0] >= 2);
        let tri3 = gen_minsum_or2(3, &TRIANGLE, 1, 3).unwrap();
        assert!(search_minsum(&tri3, DEFAULT_NODE_BUDGET).unwrap().value >= 2);
    }

    #[test]
    fn minsum_and2_costs() {
        let edge = gen_minsum_and2(2, &[(0, 1)], 1, 1).unwrap();
        assert!(FunctionClass::And2.contains(edge.classify()));
        assert_eq!(brute_minsum(&edge, DEFAULT_BUDGET).unwrap().value, vec![1]);
        let tri = gen_minsum_and2(3, &TRIANGLE, 2, 1).unwrap();
        assert_eq!(search_minsum(&tri, DEFAULT_NODE_BUDGET).unwrap().value, 2);
        let empty = gen_minsum_and2(3, &[], 0, 1).unwrap();
        assert_eq!(brute_minsum(&empty, DEFAULT_BUDGET).unwrap().value, vec![0]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(gen_minsum_or2(2, &[(1, 1)], 1, 1), Err(Error::Malformed(_))));
        assert!(matches!(gen_minsum_or2(2, &[(0, 2)], 1, 1), Err(Error::Malformed(_))));
        assert!(matches!(gen_minsum_or2(2, &[(0, 1)], 1, 0), Err(Error::Precondition(_))));
        let mixed = [[Literal::pos(0), Literal::neg(1), Literal::pos(2)]];
        assert!(matches!(gen_minmax_orand2(3, &mixed), Err(Error::Malformed(_))));
        assert!(matches!(gen_minmax_orand2(2, &[pos([0, 1, 2])]), Err(Error::Malformed(_))));
    }

    #[test]
    fn orand2_single_clause() {
        let p = gen_minmax_orand2(3, &[pos([0, 1, 2])]).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(p.max_ballot_len(), 2);
        assert!(p.validate(Model::Smart).is_ok());
        assert_eq!(brute_minmax(&p, DEFAULT_BUDGET).unwrap().value, vec![1]);
    }

    #[test]
    fn orand2_unsatisfiable() {
        let p = gen_minmax_orand2(1, &[pos([0, 0, 0]), neg([0, 0, 0])]).unwrap();
        assert!(FunctionClass::OrAnd2.contains(p.classify()));
        assert_eq!(search_minmax(&p, DEFAULT_NODE_BUDGET).unwrap().value, 2);
    }

    #[test]
    fn inapprox_gap() {
        let sat = gen_minmax_inapprox(3, &[pos([0, 1, 2]), neg([0, 1, 2])], 3).unwrap();
        assert_eq!(sat.max_ballot_len(), 4);
        assert_eq!(search_minmax(&sat, DEFAULT_NODE_BUDGET).unwrap().value, 1);
        let unsat = gen_minmax_inapprox(1, &[pos([0, 0, 0]), neg([0, 0, 0])], 2).unwrap();
        assert_eq!(search_minmax(&unsat, DEFAULT_NODE_BUDGET).unwrap().value, 3);
        let base = gen_minmax_inapprox(1, &[pos([0, 0, 0]), neg([0, 0, 0])], 0).unwrap();
        assert_eq!(search_minmax(&base, DEFAULT_NODE_BUDGET).unwrap().value, 1);
    }
}
