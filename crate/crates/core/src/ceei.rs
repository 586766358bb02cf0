//! Exact CEEI test for a given allocation.
//!
//! The strict system "shares affordable at budget 1, every strictly better
//! bundle costs more than 1" is replaced by the non-strict system
//!
//! ```text
//! p' >= 0,  d >= 0,
//! sum_{l in pi_i} p'_l <= d          for every agent i,
//! sum_{l in S} p'_l   >= d + 1       for every better bundle S,
//! ```
//!
//! which is feasible iff the strict one is (clear denominators of a strict
//! solution to get integers; divide a non-strict solution by `d`). Prices
//! are recovered as `p'_l / d`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::allocation::{Allocation, Share};
use crate::error::{check_subset_space, Error, Result};
use crate::fairness::is_envy_free;
use crate::instance::Instance;
use crate::lp::{FeasibilityResult, LinearConstraint, LinearSystem};
use crate::rational::Rational;
use crate::sequences::{check_dims, is_sequenceable};

/// Bundle enumeration limit (`2^M` bundles per agent).
pub const MAX_CEEI_OBJECTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceVector(pub Vec<Rational>);

impl PriceVector {
    pub fn prices(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_json(&self) -> Value {
        json!(self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>())
    }

    pub fn decimals(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl fmt::Display for PriceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Scaled utilities of all `2^M` bundles for one agent, indexed by mask.
fn bundle_utilities(inst: &Instance, agent: usize) -> Vec<i128> {
    let m = inst.num_objects();
    let row = inst.scaled_row(agent);
    let mut util = vec![0i128; 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        util[mask] = util[mask & (mask - 1)] + row[low] as i128;
    }
    util
}

fn check_inputs(inst: &Instance, alloc: &Allocation) -> Result<()> {
    check_dims(inst, alloc)?;
    check_subset_space(inst.num_objects(), MAX_CEEI_OBJECTS, "the CEEI test")
}

fn better_masks(inst: &Instance, alloc: &Allocation, agent: usize, minimal: bool) -> Vec<u64> {
    let util = bundle_utilities(inst, agent);
    let own = util[alloc.share(agent).mask() as usize];
    (1usize..util.len())
        .filter(|&s| util[s] > own)
        .filter(|&s| {
            // With nonnegative weights, S is inclusion-minimal iff no
            // single-object removal stays better.
            !minimal || {
                let mut rest = s;
                let mut ok = true;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    if util[s ^ bit] > own {
                        ok = false;
                        break;
                    }
                    rest ^= bit;
                }
                ok
            }
        })
        .map(|s| s as u64)
        .collect()
}

/// Inclusion-minimal bundles the agent strictly prefers to her share.
/// Supersets are omitted: with nonnegative prices their cost constraint
/// follows from a subset's.
pub fn better_bundles(inst: &Instance, alloc: &Allocation, agent: usize) -> Result<Vec<Share>> {
    check_inputs(inst, alloc)?;
    inst.check_agent(agent)?;
    Ok(better_masks(inst, alloc, agent, true)
        .into_iter()
        .map(Share::from_mask)
        .collect())
}

/// The non-strict system: `affordability[i]` marks agent `i`'s share,
/// `better[k]` the `k`-th better bundle. Variables are `p'_1..p'_M` then `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSystem {
    pub num_objects: usize,
    pub affordability: Vec<Share>,
    pub better: Vec<Share>,
}

impl LpSystem {
    pub fn num_price_vars(&self) -> usize {
        self.num_objects
    }

    /// Index of `d` in [`LpSystem::to_linear_system`].
    pub fn budget_var(&self) -> usize {
        self.num_objects
    }

    pub fn to_linear_system(&self) -> LinearSystem {
        let m = self.num_objects;
        let row = |share: &Share, d: i64| {
            let mut a = vec![Rational::zero(); m + 1];
            for o in share.iter() {
                a[o] = Rational::one();
            }
            a[m] = Rational::from(d);
            a
        };
        let mut constraints = Vec::with_capacity(self.affordability.len() + self.better.len());
        for share in &self.affordability {
            // p'(share) - d <= 0
            constraints.push(LinearConstraint::le(row(share, -1), Rational::zero()));
        }
        for bundle in &self.better {
            // p'(bundle) - d >= 1
            constraints.push(LinearConstraint::ge(row(bundle, -1), Rational::one()));
        }
        LinearSystem::new(m + 1, constraints, 0..=m).expect("consistent dimensions")
    }
}

fn build(inst: &Instance, alloc: &Allocation, minimal: bool) -> Result<LpSystem> {
    check_inputs(inst, alloc)?;
    let mut seen = BTreeSet::new();
    let mut better = Vec::new();
    for i in 0..inst.num_agents() {
        for mask in better_masks(inst, alloc, i, minimal) {
            if seen.insert(mask) {
                better.push(Share::from_mask(mask));
            }
        }
    }
    Ok(LpSystem {
        num_objects: inst.num_objects(),
        affordability: alloc.shares(),
        better,
    })
}

/// System with inclusion-minimal better bundles only.
pub fn build_s_prime(inst: &Instance, alloc: &Allocation) -> Result<LpSystem> {
    build(inst, alloc, true)
}

/// System with every better bundle of every agent; same verdict, larger.
pub fn build_s_prime_unreduced(inst: &Instance, alloc: &Allocation) -> Result<LpSystem> {
    build(inst, alloc, false)
}

/// Decides a built system and maps a witness back to prices `p'/d`.
pub fn solve_s_prime(system: &LpSystem) -> Result<Option<PriceVector>> {
    let linear = system.to_linear_system();
    let FeasibilityResult::Feasible(x) = linear.feasible()? else {
        return Ok(None);
    };
    let d = &x[system.budget_var()];
    let prices = if d.is_zero() {
        // Only possible with no better bundle: A p' <= 0 forces p' = 0.
        vec![Rational::zero(); system.num_objects]
    } else {
        x[..system.num_objects].iter().map(|p| p / d).collect()
    };
    Ok(Some(PriceVector(prices)))
}

/// Equilibrium prices supporting `alloc`, or `None` if it fails the CEEI
/// test. Allocations that are not envy-free or not sequenceable are
/// rejected before any system is built. Returned prices have passed
/// [`verify_ceei`].
pub fn ceei_test(inst: &Instance, alloc: &Allocation) -> Result<Option<PriceVector>> {
    check_inputs(inst, alloc)?;
    if !is_envy_free(inst, alloc) || !is_sequenceable(inst, alloc) {
        return Ok(None);
    }
    ceei_test_unfiltered(inst, alloc)
}

/// [`ceei_test`] without the envy-freeness and sequenceability prefilters.
pub fn ceei_test_unfiltered(inst: &Instance, alloc: &Allocation) -> Result<Option<PriceVector>> {
    let system = build_s_prime(inst, alloc)?;
    let prices = solve_s_prime(&system)?;
    if let Some(p) = &prices {
        if !verify_ceei(inst, alloc, p.prices())? {
            return Err(Error::Internal(format!(
                "solver prices {p} do not support {alloc}"
            )));
        }
    }
    Ok(prices)
}

/// Brute-force check of the equilibrium conditions: prices in `[0, 1]`,
/// every share costs at most 1, every strictly better bundle more than 1.
pub fn verify_ceei(inst: &Instance, alloc: &Allocation, prices: &[Rational]) -> Result<bool> {
    check_inputs(inst, alloc)?;
    let m = inst.num_objects();
    if prices.len() != m {
        return Err(Error::Dimension(format!(
            "{} prices for {m} objects",
            prices.len()
        )));
    }
    let one = Rational::one();
    if prices.iter().any(|p| p.is_negative() || *p > one) {
        return Ok(false);
    }
    // Integer prices over a common denominator.
    let denom = prices
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let ints: Option<Vec<i64>> = prices
        .iter()
        .map(|p| (p.numer() * (&denom / p.denom())).to_i64())
        .collect();
    let (Some(ints), Some(budget)) = (ints, denom.to_i64()) else {
        return Err(Error::Capacity(
            "price denominators exceed 64-bit integers".into(),
        ));
    };
    let budget = budget as i128;
    let mut cost = vec![0i128; 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        cost[mask] = cost[mask & (mask - 1)] + ints[low] as i128;
    }
    for i in 0..inst.num_agents() {
        let own_mask = alloc.share(i).mask() as usize;
        if cost[own_mask] > budget {
            return Ok(false);
        }
        let util = bundle_utilities(inst, i);
        let own = util[own_mask];
        if (0..util.len()).any(|s| util[s] > own && cost[s] <= budget) {
            return Ok(false);
        }
    }
    Ok(true)
}
