//! Acceptance criteria 1-9. One PASS/FAIL line per criterion; exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqalloc_core::ceei::ceei_test_unfiltered;
use seqalloc_core::efficiency::{find_dominating_via_cycle, find_dominator, utilities};
use seqalloc_core::experiments::run_experiment;
use seqalloc_core::fairness::satisfies_pfs;
use seqalloc_core::fixtures::*;
use seqalloc_core::sequences::{
    enumerate_relation, frustrating_domain_bruteforce, has_frustrating_suballocation_bruteforce,
    sequence_or_witness,
};
use seqalloc_core::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn alloc(m: usize, shares: &[&[usize]]) -> Allocation {
    Allocation::from_one_based(m, shares).unwrap()
}

fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| Rational::from_integer(v)).collect()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Outcome {
    let inst = two_agent_tie();
    let relation = enumerate_relation(&inst).map_err(|e| e.to_string())?;
    let edge = |s: &[usize], a: Allocation| (Sequence::from_one_based(s).unwrap(), a);
    let expected: BTreeSet<(Sequence, Allocation)> = [
        edge(&[1, 1, 1], alloc(3, &[&[1, 2, 3], &[]])),
        edge(&[1, 1, 2], alloc(3, &[&[1, 2], &[3]])),
        edge(&[1, 2, 1], alloc(3, &[&[1, 2], &[3]])),
        edge(&[1, 2, 2], alloc(3, &[&[1], &[2, 3]])),
        edge(&[2, 1, 1], alloc(3, &[&[1, 2], &[3]])),
        edge(&[2, 1, 1], alloc(3, &[&[2, 3], &[1]])),
        edge(&[2, 1, 2], alloc(3, &[&[1], &[2, 3]])),
        edge(&[2, 1, 2], alloc(3, &[&[2], &[1, 3]])),
        edge(&[2, 2, 1], alloc(3, &[&[2], &[1, 3]])),
        edge(&[2, 2, 2], alloc(3, &[&[], &[1, 2, 3]])),
    ]
    .into_iter()
    .collect();
    ensure!(relation.pairs == expected, "relation differs: {:?}", relation.pairs);
    let unreached: BTreeSet<Allocation> = AllocationIter::new(2, 3)
        .filter(|a| !is_sequenceable(&inst, a))
        .collect();
    let want = BTreeSet::from([alloc(3, &[&[1, 3], &[2]]), alloc(3, &[&[3], &[1, 2]])]);
    ensure!(unreached == want, "non-sequenceable: {unreached:?}");
    Ok("10 edges; <{1,3},{2}> and <{3},{1,2}> non-sequenceable".into())
}

fn criterion_2() -> Outcome {
    let inst = hidden_frustration();
    let a = alloc(4, &[&[1, 4], &[2, 3]]);
    ensure!(!is_sequenceable(&inst, &a), "allocation is sequenceable");
    let Sequencing::Frustrating(sub) = sequence_or_witness(&inst, &a) else {
        return Err("no witness".into());
    };
    let want: Share = [2, 3].into();
    ensure!(sub.domain() == want, "witness domain {}", sub.domain());
    ensure!(inst.is_frustrating(&sub).unwrap(), "witness not frustrating");
    let brute = frustrating_domain_bruteforce(&inst, &a).map_err(|e| e.to_string())?;
    ensure!(brute == Some(want), "brute-force domain {brute:?}");
    Ok("witness domain {3,4}".into())
}

fn criterion_3() -> Outcome {
    let inst = sequenceable_dominated();
    let generated = execute_sequence(&inst, &Sequence::from_one_based(&[1, 2, 2]).unwrap())
        .map_err(|e| e.to_string())?;
    let a = alloc(3, &[&[1], &[2, 3]]);
    ensure!(generated == BTreeSet::from([a.clone()]), "generated {generated:?}");
    ensure!(utilities(&inst, &a) == ints(&[5, 3]), "utilities");
    let level = efficiency_level(&inst, &a).map_err(|e| e.to_string())?;
    ensure!(level == EfficiencyLevel::SnP, "level {level}");
    ensure!(find_dominating_via_cycle(&inst, &a).is_none(), "cycle found");
    ensure!(!is_pareto_optimal(&inst, &a).unwrap(), "reported Pareto-optimal");
    let dominator = alloc(3, &[&[2, 3], &[1]]);
    ensure!(dominates(&inst, &dominator, &a), "<{{2,3}},{{1}}> does not dominate");
    ensure!(utilities(&inst, &dominator) == ints(&[6, 8]), "dominator utilities");
    let found = find_dominator(&inst, &a).unwrap();
    ensure!(found.as_ref() == Some(&dominator), "first dominator {found:?}");
    Ok("SnP, dominated by <{2,3},{1}> with (6, 8)".into())
}

fn criterion_4() -> Outcome {
    let inst = envy_free_non_sequenceable();
    let a = envy_free_non_sequenceable_allocation();
    ensure!(is_envy_free(&inst, &a), "not envy-free");
    ensure!(!is_sequenceable(&inst, &a), "sequenceable");
    let Some((cycle, improved)) = find_dominating_via_cycle(&inst, &a) else {
        return Err("no cycle".into());
    };
    let want = TradingCycle::from_one_based(&[(2, 3), (1, 4)]);
    ensure!(cycle == want, "cycle {cycle}");
    let dagger = alloc(5, &[&[4, 5], &[1, 3], &[2]]);
    ensure!(improved == dagger, "dominator {improved}");
    ensure!(dominates(&inst, &dagger, &a), "no dominance");
    Ok(format!("cycle {cycle}, dominator {improved}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let inst = ceei_dominated();
    let a = ceei_dominated_allocation();
    let prices = ceei_test(&inst, &a)
        .map_err(|e| e.to_string())?
        .ok_or("ceei_test found no prices")?;
    ensure!(verify_ceei(&inst, &a, prices.prices()).unwrap(), "solver prices rejected");
    let published = vec![
        Rational::new(1, 2),
        Rational::one(),
        Rational::one(),
        Rational::new(1, 2),
    ];
    ensure!(verify_ceei(&inst, &a, &published).unwrap(), "(1/2, 1, 1, 1/2) rejected");
    let dagger = alloc(4, &[&[1, 2], &[3], &[4]]);
    ensure!(dominates(&inst, &dagger, &a), "dagger does not dominate");
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("prices {prices}; (1/2, 1, 1, 1/2) verified; dagger dominates"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0usize;
    let mut allocations = 0usize;
    for k in 0..200 {
        let model = if k % 2 == 0 { Model::Uniform } else { Model::Gaussian };
        let n = rng.random_range(2..=3);
        let m = rng.random_range(3..=6);
        let inst = generate_instance(&GeneratorConfig::new(model, n, m, rng.random()))
            .map_err(|e| e.to_string())?;
        let shares = FairShares::compute(&inst).map_err(|e| e.to_string())?;
        let relation = enumerate_relation(&inst).map_err(|e| e.to_string())?;
        let total = n.pow(m as u32);
        let tag = || format!("{} instance {k}: {:?}", model.name(), inst.weights());
        for a in AllocationIter::new(n, m) {
            allocations += 1;
            let seq = is_sequenceable(&inst, &a);
            let brute = has_frustrating_suballocation_bruteforce(&inst, &a).unwrap();
            ensure!(seq != brute, "(a) {} on {}", a, tag());
            if is_pareto_optimal(&inst, &a).unwrap() {
                ensure!(seq, "(b) {} on {}", a, tag());
            }
            let ceei = ceei_test_unfiltered(&inst, &a).unwrap().is_some();
            ensure!(!ceei || seq, "CEEI but not sequenceable: {} on {}", a, tag());
            let ef = is_envy_free(&inst, &a);
            let mfs_min = shares.satisfies_minmax(&inst, &a);
            let pfs = satisfies_pfs(&inst, &a);
            let mfs = shares.satisfies_maxmin(&inst, &a);
            ensure!(
                (!ceei || ef) && (!ef || mfs_min) && (!mfs_min || pfs) && (!pfs || mfs),
                "(c) {} on {}",
                a,
                tag()
            );
        }
        ensure!(inst.strict_on_objects() == relation.is_function(), "(d) {}", tag());
        ensure!(
            (inst.strict_on_objects() && inst.same_order().is_some()) == relation.is_bijection(total),
            "(e) {}",
            tag()
        );
        checked += 1;
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("{checked} instances, {allocations} allocations, 0 violations"))
}

fn random_system(rng: &mut ChaCha8Rng) -> LinearSystem {
    let n = rng.random_range(1..=4);
    let k = rng.random_range(0..=10);
    let constraints = (0..k)
        .map(|_| {
            let coeffs: Vec<Rational> = (0..n)
                .map(|_| Rational::new(rng.random_range(-5..=5), rng.random_range(1..=3)))
                .collect();
            let bound = Rational::from_integer(rng.random_range(-8..=8));
            if rng.random_bool(0.5) {
                LinearConstraint::le(coeffs, bound)
            } else {
                LinearConstraint::ge(coeffs, bound)
            }
        })
        .collect();
    let nonneg: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    LinearSystem::new(n, constraints, nonneg).unwrap()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut feasible = 0;
    for k in 0..500 {
        let system = random_system(&mut rng);
        let simplex = system.feasible().map_err(|e| e.to_string())?;
        let fm = system.fourier_motzkin_feasible().map_err(|e| e.to_string())?;
        ensure!(simplex.is_feasible() == fm, "system {k} disagrees:\n{system}");
        if let Some(x) = simplex.witness() {
            ensure!(system.is_satisfied_by(x), "system {k} witness fails:\n{system}");
            feasible += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("500 systems agree ({feasible} feasible), witnesses exact"))
}

fn criterion_8() -> Outcome {
    let mut at_least = Vec::new();
    for model in [Model::Uniform, Model::Gaussian] {
        let report = run_experiment(&GeneratorConfig::new(model, 3, 8, 2024), 20)
            .map_err(|e| e.to_string())?;
        ensure!(report.total() == 20 * 6561, "{} total {}", model.name(), report.total());
        for r in &report.instances {
            ensure!(r.grid.total() == 6561, "instance {} total {}", r.instance_id, r.grid.total());
            let cell = r.grid.get(EfficiencyLevel::NS, FairnessLevel::Ceei);
            ensure!(cell == 0, "instance {} has {cell} (NS, CEEI)", r.instance_id);
        }
        at_least.push(report.mean_at_least(EfficiencyLevel::SnP, FairnessLevel::EnvyFree));
    }
    ensure!(
        at_least[0].total_cmp(&at_least[1]).is_ge(),
        "uniform mean {} below gaussian mean {}",
        at_least[0],
        at_least[1]
    );
    Ok(format!(
        "totals conserved, (NS, CEEI) = 0; mean count at EF and SnP or above: uniform {:.2} >= gaussian {:.2}",
        at_least[0], at_least[1]
    ))
}

/// An envy-free sequenceable allocation, found by running random
/// sequences on random instances.
fn ef_sequenceable(n: usize, m: usize, seed: u64) -> (Instance, Allocation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let inst = generate_instance(&GeneratorConfig::new(Model::Uniform, n, m, rng.random())).unwrap();
        for _ in 0..200 {
            let picks: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
            let outcomes = execute_sequence(&inst, &Sequence::new(picks)).unwrap();
            if let Some(a) = outcomes.into_iter().find(|a| is_envy_free(&inst, a)) {
                return (inst, a);
            }
        }
    }
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for (n, m, limit) in [(3, 10, 5), (4, 12, 60)] {
        let (inst, a) = ef_sequenceable(n, m, 9);
        let start = Instant::now();
        let verdict = ceei_test(&inst, &a).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(limit))?;
        parts.push(format!(
            "{n}x{m} {} in {elapsed:.2?}",
            if verdict.is_some() { "CEEI" } else { "not CEEI" }
        ));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("two-agent relation", criterion_1),
        ("hidden frustrating witness", criterion_2),
        ("sequenceable but dominated", criterion_3),
        ("envy-free trading cycle", criterion_4),
        ("CEEI prices", criterion_5),
        ("property suite", criterion_6),
        ("LP cross-oracle", criterion_7),
        ("scaled census", criterion_8),
        ("CEEI test scale", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({elapsed:.2?}): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({elapsed:.2?}): {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
