//! Pareto dominance, trading cycles and the three-level efficiency scale.

use std::fmt;

use serde_json::{json, Value};

use crate::allocation::{Allocation, AllocationIter};
use crate::error::{check_allocation_space, Result};
use crate::instance::Instance;
use crate::rational::Rational;
use crate::sequences::{check_dims, is_sequenceable, sequence_or_witness, Sequencing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EfficiencyLevel {
    /// Non-sequenceable.
    NS,
    /// Sequenceable but Pareto-dominated.
    SnP,
    /// Pareto-optimal (hence sequenceable).
    PO,
}

impl EfficiencyLevel {
    pub const ALL: [EfficiencyLevel; 3] = [EfficiencyLevel::NS, EfficiencyLevel::SnP, EfficiencyLevel::PO];

    pub fn name(self) -> &'static str {
        match self {
            EfficiencyLevel::NS => "NS",
            EfficiencyLevel::SnP => "SnP",
            EfficiencyLevel::PO => "PO",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EfficiencyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn utilities(inst: &Instance, alloc: &Allocation) -> Vec<Rational> {
    let shares = alloc.shares();
    (0..inst.num_agents())
        .map(|i| inst.unscale(i, inst.scaled_utility(i, shares[i].iter())))
        .collect()
}

fn scaled_utilities(inst: &Instance, owners: &[usize], out: &mut [i128]) {
    out.iter_mut().for_each(|u| *u = 0);
    for (o, &a) in owners.iter().enumerate() {
        out[a] += inst.scaled_row(a)[o] as i128;
    }
}

/// `a` dominates `b`: nobody is worse off and someone is strictly better off.
pub fn dominates(inst: &Instance, a: &Allocation, b: &Allocation) -> bool {
    let n = inst.num_agents();
    let mut ua = vec![0; n];
    let mut ub = vec![0; n];
    scaled_utilities(inst, a.owners(), &mut ua);
    scaled_utilities(inst, b.owners(), &mut ub);
    vector_dominates(&ua, &ub)
}

fn vector_dominates(a: &[i128], b: &[i128]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// First allocation (in lexicographic owner order) dominating `alloc`.
pub fn find_dominator(inst: &Instance, alloc: &Allocation) -> Result<Option<Allocation>> {
    check_dims(inst, alloc)?;
    check_allocation_space(inst.num_agents(), inst.num_objects())?;
    let n = inst.num_agents();
    let mut base = vec![0; n];
    scaled_utilities(inst, alloc.owners(), &mut base);
    let mut u = vec![0; n];
    Ok(AllocationIter::new(n, inst.num_objects()).find(|cand| {
        scaled_utilities(inst, cand.owners(), &mut u);
        vector_dominates(&u, &base)
    }))
}

/// Exhaustive: no allocation of the instance dominates `alloc`.
pub fn is_pareto_optimal(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    find_dominator(inst, alloc).map(|d| d.is_none())
}

/// Pareto-optimality of every allocation, indexed in [`AllocationIter`] order.
///
/// Utility vectors are visited in decreasing lexicographic order, so any
/// dominator of a vector is met before it; only the non-dominated vectors
/// seen so far need to be kept.
pub fn pareto_optimal_mask(inst: &Instance) -> Result<Vec<bool>> {
    let total = check_allocation_space(inst.num_agents(), inst.num_objects())? as usize;
    let n = inst.num_agents();
    let mut utils = vec![0i128; total * n];
    for (k, a) in AllocationIter::new(n, inst.num_objects()).enumerate() {
        scaled_utilities(inst, a.owners(), &mut utils[k * n..(k + 1) * n]);
    }
    let row = |k: usize| &utils[k * n..(k + 1) * n];
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| row(b).cmp(row(a)));
    let mut front: Vec<usize> = Vec::new();
    let mut mask = vec![false; total];
    for &k in &order {
        let u = row(k);
        if front.iter().any(|&f| vector_dominates(row(f), u)) {
            continue;
        }
        mask[k] = true;
        if !front.iter().any(|&f| row(f) == u) {
            front.push(k);
        }
    }
    Ok(mask)
}

/// A cyclic exchange: agent `agents[j]` takes `objects[j]`, one of her top
/// objects in the frustrating domain, currently held by `agents[j + 1]`
/// (cyclically).
///
/// Equality is up to rotation: a cycle has no distinguished start.
#[derive(Clone, Debug)]
pub struct TradingCycle {
    pub agents: Vec<usize>,
    pub objects: Vec<usize>,
}

impl TradingCycle {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Builds from 1-based `(agent, object)` pairs.
    pub fn from_one_based(pairs: &[(usize, usize)]) -> Self {
        TradingCycle {
            agents: pairs.iter().map(|p| p.0 - 1).collect(),
            objects: pairs.iter().map(|p| p.1 - 1).collect(),
        }
    }

    /// Applies the exchange to `alloc`.
    pub fn apply(&self, alloc: &Allocation) -> Allocation {
        self.agents
            .iter()
            .zip(&self.objects)
            .fold(alloc.clone(), |acc, (&a, &o)| acc.with_owner(o, a))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "agents": self.agents.iter().map(|a| a + 1).collect::<Vec<_>>(),
            "objects": self.objects.iter().map(|o| o + 1).collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for TradingCycle {
    fn eq(&self, other: &Self) -> bool {
        let k = self.len();
        if k != other.len() || self.objects.len() != other.objects.len() {
            return false;
        }
        k == 0
            || (0..k).any(|r| {
                (0..k).all(|j| {
                    self.agents[j] == other.agents[(j + r) % k]
                        && self.objects[j] == other.objects[(j + r) % k]
                })
            })
    }
}

impl Eq for TradingCycle {}

impl fmt::Display for TradingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, o) in self.agents.iter().zip(&self.objects) {
            write!(f, "({}, {}) -> ", a + 1, o + 1)?;
        }
        match (self.agents.first(), self.objects.first()) {
            (Some(a), Some(o)) => write!(f, "({}, {})", a + 1, o + 1),
            _ => Ok(()),
        }
    }
}

/// For a non-sequenceable allocation, a trading cycle inside the frustrating
/// residual of the greedy inversion, and the allocation it produces (which
/// dominates `alloc`). `None` when `alloc` is sequenceable.
///
/// The walk starts at the lowest-indexed agent holding objects in the
/// residual and follows lowest-indexed top objects.
pub fn find_dominating_via_cycle(
    inst: &Instance,
    alloc: &Allocation,
) -> Option<(TradingCycle, Allocation)> {
    let Sequencing::Frustrating(sub) = sequence_or_witness(inst, alloc) else {
        return None;
    };
    let domain = sub.domain();
    let start = (0..inst.num_agents()).find(|&i| !sub.share(i).is_empty())?;
    let mut agents = Vec::new();
    let mut objects = Vec::new();
    let mut agent = start;
    loop {
        if let Some(pos) = agents.iter().position(|&a| a == agent) {
            let cycle = TradingCycle {
                agents: agents[pos..].to_vec(),
                objects: objects[pos..].to_vec(),
            };
            let improved = cycle.apply(alloc);
            return Some((cycle, improved));
        }
        let top = inst.best(agent, &domain).ok()?;
        let object = top.iter().next()?;
        agents.push(agent);
        objects.push(object);
        agent = sub.owner(object)?;
    }
}

pub fn efficiency_level(inst: &Instance, alloc: &Allocation) -> Result<EfficiencyLevel> {
    check_dims(inst, alloc)?;
    if !is_sequenceable(inst, alloc) {
        return Ok(EfficiencyLevel::NS);
    }
    Ok(if is_pareto_optimal(inst, alloc)? {
        EfficiencyLevel::PO
    } else {
        EfficiencyLevel::SnP
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures::*;

    fn alloc(m: usize, shares: &[&[usize]]) -> Allocation {
        Allocation::from_one_based(m, shares).unwrap()
    }

    #[test]
    fn dominance_examples() {
        let sd = sequenceable_dominated();
        let a = alloc(3, &[&[1], &[2, 3]]);
        let b = alloc(3, &[&[2, 3], &[1]]);
        assert!(dominates(&sd, &b, &a));
        assert!(!dominates(&sd, &a, &b));
        assert!(!dominates(&sd, &a, &a));
        assert_eq!(utilities(&sd, &b), vec![Rational::from(6), Rational::from(8)]);

        let ce = ceei_dominated();
        let dagger = alloc(4, &[&[1, 2], &[3], &[4]]);
        assert!(dominates(&ce, &dagger, &ceei_dominated_allocation()));
    }

    #[test]
    fn pareto_examples() {
        let sd = sequenceable_dominated();
        let a = alloc(3, &[&[1], &[2, 3]]);
        assert!(!is_pareto_optimal(&sd, &a).unwrap());
        assert_eq!(find_dominator(&sd, &a).unwrap(), Some(alloc(3, &[&[2, 3], &[1]])));

        let single = Instance::from_integers(&[[1, 2]]).unwrap();
        assert!(is_pareto_optimal(&single, &alloc(2, &[&[1, 2]])).unwrap());

        let tie = two_agent_tie();
        assert!(is_pareto_optimal(&tie, &alloc(3, &[&[1, 2], &[3]])).unwrap());

        let big = Instance::from_integers(&[vec![1; 13], vec![1; 13], vec![1; 13]]).unwrap();
        let all = Allocation::from_owners(3, vec![0; 13]).unwrap();
        assert!(matches!(is_pareto_optimal(&big, &all), Err(Error::Capacity(_))));
    }

    #[test]
    fn mask_matches_pointwise_check() {
        for inst in [two_agent_tie(), sequenceable_dominated(), hidden_frustration(), ceei_dominated()] {
            let mask = pareto_optimal_mask(&inst).unwrap();
            for (k, a) in AllocationIter::new(inst.num_agents(), inst.num_objects()).enumerate() {
                assert_eq!(mask[k], is_pareto_optimal(&inst, &a).unwrap(), "{a}");
            }
        }
    }

    #[test]
    fn cycle_on_envy_free_allocation() {
        let inst = envy_free_non_sequenceable();
        let pi = envy_free_non_sequenceable_allocation();
        let (cycle, improved) = find_dominating_via_cycle(&inst, &pi).unwrap();
        assert_eq!(cycle, TradingCycle::from_one_based(&[(2, 3), (1, 4)]));
        assert_eq!(improved, alloc(5, &[&[4, 5], &[1, 3], &[2]]));
        assert!(dominates(&inst, &improved, &pi));
        assert_eq!(cycle.to_json(), json!({"agents": [1, 2], "objects": [4, 3]}));
    }

    #[test]
    fn cycle_on_hidden_frustration() {
        let inst = hidden_frustration();
        let pi = alloc(4, &[&[1, 4], &[2, 3]]);
        let (cycle, improved) = find_dominating_via_cycle(&inst, &pi).unwrap();
        assert!(dominates(&inst, &improved, &pi));
        let before = utilities(&inst, &pi);
        let after = utilities(&inst, &improved);
        for &a in &cycle.agents {
            assert!(after[a] > before[a]);
        }
        assert!(find_dominating_via_cycle(&inst, &alloc(4, &[&[1, 3], &[2, 4]])).is_none());
    }

    #[test]
    fn rotation_equality() {
        let a = TradingCycle::from_one_based(&[(1, 4), (2, 3), (3, 1)]);
        let b = TradingCycle::from_one_based(&[(3, 1), (1, 4), (2, 3)]);
        let c = TradingCycle::from_one_based(&[(1, 4), (3, 1), (2, 3)]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.to_string(), "(1, 4) -> (2, 3) -> (3, 1) -> (1, 4)");
    }

    #[test]
    fn levels() {
        let sd = sequenceable_dominated();
        assert_eq!(efficiency_level(&sd, &alloc(3, &[&[1], &[2, 3]])).unwrap(), EfficiencyLevel::SnP);
        let ef = envy_free_non_sequenceable();
        assert_eq!(
            efficiency_level(&ef, &envy_free_non_sequenceable_allocation()).unwrap(),
            EfficiencyLevel::NS
        );
        let tie = two_agent_tie();
        assert_eq!(efficiency_level(&tie, &alloc(3, &[&[1, 2, 3], &[]])).unwrap(), EfficiencyLevel::PO);
    }
}
