//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unravel_core::axioms::{
    build_counterexample, check_cast_monotonicity, Counterexample, Rule, RuleHandle,
};
use unravel_core::classic::{
    min_bottleneck_arborescence, min_cost_arborescence, Arborescence, Certificate, DelegationGraph, Edge, EdgeTag,
};
use unravel_core::control::{minmax_biased, minsum_biased, n_d_membership};
use unravel_core::fulkerson::{run_fulkerson, run_fulkerson_with, tight_structure_stability_check};
use unravel_core::gadgets::{gen_minmax_orand2, gen_minsum_and2, gen_minsum_or2};
use unravel_core::random::{
    random_and_profile, random_classic_graph, random_classic_profile, random_or_profile, random_smart_profile,
};
use unravel_core::smart::{
    brute_minmax, brute_minsum, check_consistency, count_fixed_points, minmax_and, minmax_or, search_minmax,
    search_minsum, DEFAULT_BUDGET, DEFAULT_NODE_BUDGET,
};
use unravel_core::{Literal, Profile, ProfileBuilder};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("example-1 reproduction", example1),
        ("arborescence oracle equivalence", oracle_equivalence),
        ("tight-structure characterization", fulkerson_characterization),
        ("biased sandwich and N_1", control_sandwich),
        ("unique fixed point", fixed_point),
        ("polynomial MinMax on Or/And", minmax_or_and),
        ("reduction soundness", reductions),
        ("cast monotonicity", axioms),
        ("tight-structure stability", stability),
        ("performance at n = 10^6", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn example1() -> Outcome {
    let start = Instant::now();
    let p = ProfileBuilder::binary()
        .agent("a", &["b | c", "b"], "0")
        .agent("b", &["!d", "c"], "1")
        .agent("c", &["(e & f) | (f & g) | (e & g)", "a"], "1")
        .agent("d", &["a", "c"], "1")
        .agent("e", &["d", "f & g"], "0")
        .agent("f", &["c"], "0")
        .agent("g", &[], "1")
        .build()
        .unwrap();
    let minmax = brute_minmax(&p, DEFAULT_BUDGET).unwrap();
    ensure!(minmax.value == vec![1], "MinMax optimum {:?}", minmax.value);
    let wanted = Certificate::new(vec![0, 1, 0, 0, 1, 1, 0]);
    let hit = minmax.solutions.iter().find(|s| s.certificate == wanted);
    ensure!(hit.is_some(), "(0,1,0,0,1,1,0) not MinMax-optimal");
    let zeros_then_one = vec![false, false, false, false, false, false, true];
    ensure!(hit.unwrap().votes == zeros_then_one, "votes {:?}", hit.unwrap().votes);

    let minsum = brute_minsum(&p, DEFAULT_BUDGET).unwrap();
    ensure!(minsum.value == vec![2], "MinSum optimum {:?}", minsum.value);
    let certs: BTreeSet<Vec<usize>> = minsum.solutions.iter().map(|s| s.certificate.ranks.clone()).collect();
    for c in [[0, 0, 2, 0, 0, 0, 0], [0, 0, 0, 2, 0, 0, 0]] {
        ensure!(certs.contains(c.as_slice()), "{c:?} missing from MinSum optima");
    }
    let votes = check_consistency(&p, &Certificate::new(vec![0, 0, 2, 0, 0, 0, 0])).unwrap();
    ensure!(
        votes.votes() == Some(&[true, false, true, true, true, true, true][..]),
        "votes of (0,0,2,0,0,0,0): {votes:?}"
    );
    ensure!(
        !check_consistency(&p, &Certificate::new(vec![0; 7])).unwrap().is_consistent(),
        "all-zero certificate accepted"
    );

    // the same optima from the oracle
    let all = common::smart_certificates(&p);
    let oracle: BTreeSet<Vec<usize>> = common::argmin(&all, |(r, _)| common::sum(r)).into_iter().map(|x| x.0).collect();
    ensure!(oracle == certs, "oracle MinSum set differs");
    let oracle_max = all.iter().map(|(r, _)| common::max(r)).min();
    ensure!(oracle_max == Some(1), "oracle MinMax {oracle_max:?}");

    let t = start.elapsed();
    ensure!(t < Duration::from_secs(1), "took {t:?}");
    Ok(format!("{} MinSum optima", certs.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = rng(2);
    let start = Instant::now();
    for i in 0..500 {
        let n = rng.gen_range(1..=7);
        let alts = rng.gen_range(1..=3);
        let p = random_classic_profile(&mut rng, n, 3, alts);
        let g = DelegationGraph::from_profile(&p).unwrap();
        let all = common::classic_certificates(&p);
        let best_sum = all.iter().map(|(r, _)| common::sum(r)).min().unwrap();
        let best_max = all.iter().map(|(r, _)| common::max(r)).min().unwrap();
        let t = min_cost_arborescence(&g).unwrap();
        ensure!(g.cost(&t) as usize == best_sum, "profile {i}: cost {} vs {best_sum}", g.cost(&t));
        let (b, w) = min_bottleneck_arborescence(&g).unwrap();
        ensure!(w as usize == best_max && g.bottleneck(&b) == w, "profile {i}: bottleneck {w} vs {best_max}");
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:?}");
    Ok("500 profiles".into())
}

fn fulkerson_characterization() -> Outcome {
    let mut rng = rng(3);
    let mut optima = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=6);
        let g = common::random_digraph(&mut rng, n, 12);
        let arbs = common::graph_arborescences(&g);
        let min: BTreeSet<Vec<usize>> = common::argmin(&arbs, |t| common::graph_cost(&g, t)).into_iter().collect();
        optima += min.len();
        let a = run_fulkerson(&g).unwrap();
        let seed = rng.gen::<u64>();
        let mut pick = ChaCha8Rng::seed_from_u64(seed);
        let b = run_fulkerson_with(&g, |c| pick.gen_range(0..c.len())).unwrap();
        for s in [&a, &b] {
            let passing: BTreeSet<Vec<usize>> = arbs
                .iter()
                .filter(|t| s.is_min_cost(&g, &Arborescence { parent_edge: t.to_vec() }))
                .cloned()
                .collect();
            ensure!(passing == min, "graph {i}: {} pass, {} optimal", passing.len(), min.len());
        }
    }
    Ok(format!("200 graphs, {optima} optimal arborescences"))
}

fn control_sandwich() -> Outcome {
    let mut rng = rng(4);
    for i in 0..300 {
        let n = rng.gen_range(1..=7);
        let p = random_classic_profile(&mut rng, n, 3, 2);
        let g = DelegationGraph::from_profile(&p).unwrap();
        let all = common::classic_certificates(&p);
        let members = [n_d_membership(&g, 0).unwrap(), n_d_membership(&g, 1).unwrap()];
        for (name, opt, biased) in [
            (
                "MinSum",
                common::argmin(&all, |(r, _)| common::sum(r)),
                [minsum_biased(&g, 0).unwrap(), minsum_biased(&g, 1).unwrap()],
            ),
            (
                "MinMax",
                common::argmin(&all, |(r, _)| common::max(r)),
                [minmax_biased(&g, 0).unwrap(), minmax_biased(&g, 1).unwrap()],
            ),
        ] {
            let (lo, hi) = (&biased[0].votes, &biased[1].votes);
            let vectors: BTreeSet<&Vec<usize>> = opt.iter().map(|(_, v)| v).collect();
            ensure!(vectors.contains(lo) && vectors.contains(hi), "profile {i}: {name} biased output not optimal");
            for x in &vectors {
                ensure!(
                    (0..n).all(|a| lo[a] <= x[a] && x[a] <= hi[a]),
                    "profile {i}: {name} optimum {x:?} outside [{lo:?}, {hi:?}]"
                );
            }
            for d in 0..2 {
                let union: Vec<usize> = (0..n).filter(|&a| vectors.iter().any(|x| x[a] == d)).collect();
                let got = if name == "MinSum" { &members[d].minsum } else { &members[d].minmax };
                ensure!(*got == union, "profile {i}: {name} N_{d} {got:?} vs {union:?}");
            }
        }
    }
    Ok("300 profiles".into())
}

fn fixed_point() -> Outcome {
    let mut rng = rng(5);
    let (mut consistent, mut total) = (0, 0);
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let p = random_smart_profile(&mut rng, n, 3, true);
        let caps = common::caps(&p);
        for _ in 0..20 {
            // lean towards later ranks so both outcomes show up
            let ranks: Vec<usize> = caps
                .iter()
                .map(|&k| if rng.gen_bool(0.4) { k } else { rng.gen_range(0..=k) })
                .collect();
            let c = Certificate::new(ranks.clone());
            let check = check_consistency(&p, &c).unwrap();
            let points = count_fixed_points(&p, &c).unwrap();
            ensure!(check.is_consistent() == (points == 1), "profile {i} {ranks:?}: {points} fixed points");
            let oracle = common::smart_votes(&p, &ranks);
            ensure!(check.votes().map(<[bool]>::to_vec) == oracle, "profile {i} {ranks:?}: oracle disagrees");
            consistent += usize::from(check.is_consistent());
            total += 1;
        }
    }
    ensure!(consistent > 0 && consistent < total, "only one outcome sampled");
    Ok(format!("{total} certificates, {consistent} consistent"))
}

/// Smallest bound `w` admitting a consistent certificate with every rank
/// at most `w`.
fn oracle_minmax(p: &Profile) -> usize {
    let caps = common::caps(p);
    (0..).find(|&w| {
        let capped: Vec<usize> = caps.iter().map(|&k| k.min(w)).collect();
        let mut found = false;
        common::odometer(&capped, |r| found = found || common::smart_votes(p, r).is_some());
        found
    })
    .unwrap()
}

fn minmax_or_and() -> Outcome {
    let mut rng = rng(6);
    for i in 0..400 {
        let n = rng.gen_range(1..=8);
        let (p, out) = if i % 2 == 0 {
            let p = random_or_profile(&mut rng, n, 3);
            let out = minmax_or(&p).unwrap();
            (p, out)
        } else {
            let p = random_and_profile(&mut rng, n, 3);
            let out = minmax_and(&p).unwrap();
            (p, out)
        };
        let want = oracle_minmax(&p);
        ensure!(out.value == want, "profile {i}: {} vs {want}", out.value);
        ensure!(out.certificate.max_rank() == want, "profile {i}: certificate max differs from value");
        let votes = common::smart_votes(&p, &out.certificate.ranks);
        ensure!(votes.as_ref() == Some(&out.votes), "profile {i}: certificate not consistent with reported votes");
        if i < 40 {
            let brute = brute_minmax(&p, DEFAULT_BUDGET).unwrap();
            ensure!(brute.value == vec![want], "profile {i}: brute_minmax {:?}", brute.value);
        }
    }
    Ok("200 Or + 200 And profiles".into())
}

fn clauses_over(num_vars: usize) -> Vec<[Literal; 3]> {
    let mut out = Vec::new();
    for negated in [false, true] {
        for i in 0..num_vars {
            for j in i..num_vars {
                for k in j..num_vars {
                    let lit = |v| if negated { Literal::neg(v) } else { Literal::pos(v) };
                    out.push([lit(i), lit(j), lit(k)]);
                }
            }
        }
    }
    out
}

fn reductions() -> Outcome {
    let mut graphs = 0;
    for v in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            let vc = common::min_vertex_cover(v, &edges);
            for k in 0..=v {
                for (name, p) in [
                    ("Or2", gen_minsum_or2(v, &edges, k, 1).unwrap()),
                    ("And2", gen_minsum_and2(v, &edges, k, 1).unwrap()),
                ] {
                    let best = search_minsum(&p, DEFAULT_NODE_BUDGET).unwrap().value;
                    ensure!((vc <= k) == (best <= k), "{name} v={v} {edges:?} K={k}: vc {vc}, MinSum {best}");
                }
            }
            graphs += 1;
        }
    }
    let mut formulas = 0;
    let mut sat = 0;
    for v in 1..=4usize {
        let clauses = clauses_over(v);
        let m = clauses.len();
        let mut check = |phi: &[[Literal; 3]]| -> Outcome {
            let p = gen_minmax_orand2(v, phi).unwrap();
            let best = search_minmax(&p, DEFAULT_NODE_BUDGET).unwrap().value;
            let s = common::satisfiable(v, phi);
            ensure!(s == (best <= 1), "v={v} {phi:?}: sat {s}, MinMax {best}");
            formulas += 1;
            sat += usize::from(s);
            Ok(String::new())
        };
        for a in 0..m {
            check(&[clauses[a]])?;
            for b in a + 1..m {
                check(&[clauses[a], clauses[b]])?;
                for c in b + 1..m {
                    check(&[clauses[a], clauses[b], clauses[c]])?;
                }
            }
        }
    }
    Ok(format!("{graphs} graphs, {formulas} formulas ({sat} satisfiable)"))
}

fn axioms() -> Outcome {
    let minmax = |bias| RuleHandle::classic(Rule::MinMax, bias);
    for (which, rule) in [
        (Counterexample::MinmaxCast { n: 5 }, minmax(None)),
        (Counterexample::MinmaxCast { n: 5 }, minmax(Some(true))),
        (Counterexample::MinmaxCastInverted { n: 5 }, minmax(Some(false))),
        (Counterexample::MinsumOr2Cast, RuleHandle::smart(Rule::MinSum, None)),
    ] {
        let (p, agent, d) = build_counterexample(which).unwrap();
        let report = check_cast_monotonicity(&p, agent, d, &rule).unwrap();
        ensure!(!report.holds(), "{which:?} holds for {}", rule.label());
        let w = report.witness.as_ref().ok_or(format!("{which:?}: no witness"))?;
        let (i, ii) = report.conditions_for(&w.agg).unwrap();
        ensure!(!(i && ii), "{which:?}: witness satisfies both conditions");
    }

    let rules: Vec<RuleHandle> = [Rule::MinSum, Rule::LexiMin]
        .into_iter()
        .flat_map(|r| [None, Some(false), Some(true)].map(|b| RuleHandle::classic(r, b)))
        .collect();
    let mut rng = rng(8);
    let mut checks = 0;
    for i in 0..300 {
        let n = rng.gen_range(1..=6);
        let p = random_classic_profile(&mut rng, n, 3, 2);
        for agent in 0..n {
            for d in [false, true] {
                for rule in &rules {
                    let report = check_cast_monotonicity(&p, agent, d, rule).unwrap();
                    ensure!(report.holds(), "profile {i}, agent {agent}, d={d}: {} violated", rule.label());
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("4 violations found, {checks} random checks hold"))
}

fn stability() -> Outcome {
    let mut rng = rng(9);
    let mut variants_run = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=6);
        let g = common::random_digraph(&mut rng, n, 12);
        let agent = rng.gen_range(0..n);
        let direct = |rng: &mut ChaCha8Rng| Edge {
            from: agent,
            to: n,
            weight: rng.gen_range(0..=4u64),
            tag: EdgeTag::Direct(rng.gen_range(0..2)),
        };
        let current: Vec<Edge> = g.out_edges(agent).map(|e| g.edge(e).clone()).collect();
        let mut variants = vec![vec![direct(&mut rng)], current];
        for _ in 0..5 {
            let mut edges = vec![direct(&mut rng)];
            let mut targets: Vec<usize> = (0..n).filter(|&v| v != agent).collect();
            for _ in 0..rng.gen_range(0..=targets.len().min(3)) {
                let t = targets.swap_remove(rng.gen_range(0..targets.len()));
                edges.push(Edge { from: agent, to: t, weight: rng.gen_range(0..=4), tag: EdgeTag::Delegate });
            }
            variants.push(edges);
        }
        let report = tight_structure_stability_check(&g, agent, &variants).unwrap();
        ensure!(report.holds(), "graph {i}, agent {agent}: {report:?}");
        ensure!(report.variants[0].single_direct_exact.is_some(), "graph {i}: single direct edge not recognised");
        variants_run += report.variants.len();
    }
    Ok(format!("100 graphs, {variants_run} variants"))
}

fn performance() -> Outcome {
    let mut rng = rng(10);
    let g = random_classic_graph(&mut rng, 1_000_000, 4);
    let m = g.edges().len();
    let start = Instant::now();
    let (t, w) = min_bottleneck_arborescence(&g).unwrap();
    let bottleneck = start.elapsed();
    g.check_arborescence(&t).unwrap();
    let start = Instant::now();
    let c = min_cost_arborescence(&g).unwrap();
    let cost = start.elapsed();
    g.check_arborescence(&c).unwrap();
    ensure!(g.bottleneck(&t) == w, "bottleneck mismatch");
    ensure!(g.cost(&c) <= g.cost(&t), "min-cost arborescence costs more than the bottleneck one");
    ensure!(bottleneck < Duration::from_secs(10), "bottleneck took {bottleneck:?}");
    ensure!(cost < Duration::from_secs(60), "min-cost took {cost:?}");
    Ok(format!(
        "m = {m}, bottleneck {:.2}s, min-cost {:.2}s",
        bottleneck.as_secs_f64(),
        cost.as_secs_f64()
    ))
}
