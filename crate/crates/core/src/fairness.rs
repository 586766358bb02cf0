//! The fairness scale: NONE < MFS < PFS < mFS < EF < CEEI.

use std::fmt;

use serde_json::{json, Value};

use crate::allocation::{Allocation, AllocationIter};
use crate::error::{check_allocation_space, Result};
use crate::instance::Instance;
use crate::rational::Rational;
use crate::sequences::check_dims;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FairnessLevel {
    NoCriterion,
    /// Every agent gets at least her maxmin fair share.
    MaxMin,
    /// Every agent gets at least `1/N` of her value for all objects.
    Proportional,
    /// Every agent gets at least her minmax fair share.
    MinMax,
    EnvyFree,
    Ceei,
}

impl FairnessLevel {
    pub const ALL: [FairnessLevel; 6] = [
        FairnessLevel::NoCriterion,
        FairnessLevel::MaxMin,
        FairnessLevel::Proportional,
        FairnessLevel::MinMax,
        FairnessLevel::EnvyFree,
        FairnessLevel::Ceei,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FairnessLevel::NoCriterion => "NONE",
            FairnessLevel::MaxMin => "MFS",
            FairnessLevel::Proportional => "PFS",
            FairnessLevel::MinMax => "mFS",
            FairnessLevel::EnvyFree => "EF",
            FairnessLevel::Ceei => "CEEI",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FairnessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `u_i(pi_i) >= u_i(pi_j)` for every pair of agents.
pub fn is_envy_free(inst: &Instance, alloc: &Allocation) -> bool {
    envy_free_owners(inst, alloc.owners())
}

pub(crate) fn envy_free_owners(inst: &Instance, owners: &[usize]) -> bool {
    let n = inst.num_agents();
    let mut view = vec![0i128; n];
    (0..n).all(|i| {
        view.iter_mut().for_each(|v| *v = 0);
        let row = inst.scaled_row(i);
        for (o, &a) in owners.iter().enumerate() {
            view[a] += row[o] as i128;
        }
        view.iter().all(|&v| v <= view[i])
    })
}

/// `u_i(O) / N`.
pub fn proportional_share(inst: &Instance, agent: usize) -> Rational {
    let total: Rational = inst.weights()[agent].iter().sum();
    total / Rational::from(inst.num_agents() as i64)
}

/// Per-agent fair-share thresholds, computed once per instance.
///
/// Maxmin and minmax shares range over all `N^M` labelled partitions of
/// the objects into `N` shares (empty shares allowed), evaluated with the
/// agent's own weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairShares {
    // scaled units of each agent
    maxmin: Vec<i128>,
    minmax: Vec<i128>,
    total: Vec<i128>,
    num_agents: usize,
    maxmin_exact: Vec<Rational>,
    proportional_exact: Vec<Rational>,
    minmax_exact: Vec<Rational>,
}

impl FairShares {
    pub fn compute(inst: &Instance) -> Result<Self> {
        let n = inst.num_agents();
        let m = inst.num_objects();
        check_allocation_space(n, m)?;
        let mut maxmin = vec![i128::MIN; n];
        let mut minmax = vec![i128::MAX; n];
        let mut sums = vec![0i128; n];
        for part in AllocationIter::new(n, m) {
            for i in 0..n {
                let row = inst.scaled_row(i);
                sums.iter_mut().for_each(|s| *s = 0);
                for (o, &block) in part.owners().iter().enumerate() {
                    sums[block] += row[o] as i128;
                }
                let lo = *sums.iter().min().unwrap();
                let hi = *sums.iter().max().unwrap();
                maxmin[i] = maxmin[i].max(lo);
                minmax[i] = minmax[i].min(hi);
            }
        }
        let total: Vec<i128> = (0..n).map(|i| inst.scaled_utility(i, 0..m)).collect();
        Ok(FairShares {
            maxmin_exact: (0..n).map(|i| inst.unscale(i, maxmin[i])).collect(),
            proportional_exact: (0..n).map(|i| proportional_share(inst, i)).collect(),
            minmax_exact: (0..n).map(|i| inst.unscale(i, minmax[i])).collect(),
            maxmin,
            minmax,
            total,
            num_agents: n,
        })
    }

    pub fn maxmin(&self, agent: usize) -> &Rational {
        &self.maxmin_exact[agent]
    }

    pub fn proportional(&self, agent: usize) -> &Rational {
        &self.proportional_exact[agent]
    }

    pub fn minmax(&self, agent: usize) -> &Rational {
        &self.minmax_exact[agent]
    }

    fn own_utilities(inst: &Instance, owners: &[usize]) -> Vec<i128> {
        let mut own = vec![0i128; inst.num_agents()];
        for (o, &a) in owners.iter().enumerate() {
            own[a] += inst.scaled_row(a)[o] as i128;
        }
        own
    }

    pub fn satisfies_maxmin(&self, inst: &Instance, alloc: &Allocation) -> bool {
        let own = Self::own_utilities(inst, alloc.owners());
        own.iter().zip(&self.maxmin).all(|(u, t)| u >= t)
    }

    pub fn satisfies_proportional(&self, inst: &Instance, alloc: &Allocation) -> bool {
        let own = Self::own_utilities(inst, alloc.owners());
        let n = self.num_agents as i128;
        own.iter().zip(&self.total).all(|(u, t)| u * n >= *t)
    }

    pub fn satisfies_minmax(&self, inst: &Instance, alloc: &Allocation) -> bool {
        let own = Self::own_utilities(inst, alloc.owners());
        own.iter().zip(&self.minmax).all(|(u, t)| u >= t)
    }

    /// Highest level reached among NONE..EF, without consulting CEEI.
    pub(crate) fn level_below_ceei(&self, inst: &Instance, owners: &[usize]) -> FairnessLevel {
        if envy_free_owners(inst, owners) {
            return FairnessLevel::EnvyFree;
        }
        let own = Self::own_utilities(inst, owners);
        let n = self.num_agents as i128;
        if own.iter().zip(&self.minmax).all(|(u, t)| u >= t) {
            FairnessLevel::MinMax
        } else if own.iter().zip(&self.total).all(|(u, t)| u * n >= *t) {
            FairnessLevel::Proportional
        } else if own.iter().zip(&self.maxmin).all(|(u, t)| u >= t) {
            FairnessLevel::MaxMin
        } else {
            FairnessLevel::NoCriterion
        }
    }

    /// Highest satisfied level. `ceei` is asked only for envy-free
    /// allocations.
    pub fn level<F>(&self, inst: &Instance, alloc: &Allocation, ceei: F) -> Result<FairnessLevel>
    where
        F: FnOnce(&Instance, &Allocation) -> Result<bool>,
    {
        check_dims(inst, alloc)?;
        let below = self.level_below_ceei(inst, alloc.owners());
        if below == FairnessLevel::EnvyFree && ceei(inst, alloc)? {
            return Ok(FairnessLevel::Ceei);
        }
        Ok(below)
    }

    /// `{"agents": [{"maxmin":..,"proportional":..,"minmax":..}], "level": ..}`.
    pub fn report(&self, level: FairnessLevel) -> Value {
        let agents: Vec<Value> = (0..self.num_agents)
            .map(|i| {
                json!({
                    "agent": i + 1,
                    "maxmin": self.maxmin_exact[i].to_string(),
                    "proportional": self.proportional_exact[i].to_string(),
                    "minmax": self.minmax_exact[i].to_string(),
                })
            })
            .collect();
        json!({ "agents": agents, "level": level.name() })
    }
}

pub fn maxmin_fair_share(inst: &Instance, agent: usize) -> Result<Rational> {
    inst.check_agent(agent)?;
    Ok(FairShares::compute(inst)?.maxmin(agent).clone())
}

pub fn minmax_fair_share(inst: &Instance, agent: usize) -> Result<Rational> {
    inst.check_agent(agent)?;
    Ok(FairShares::compute(inst)?.minmax(agent).clone())
}

pub fn satisfies_pfs(inst: &Instance, alloc: &Allocation) -> bool {
    let shares = alloc.shares();
    (0..inst.num_agents()).all(|i| {
        inst.utility(i, &shares[i]).expect("validated allocation") >= proportional_share(inst, i)
    })
}

pub fn satisfies_mfs(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    Ok(FairShares::compute(inst)?.satisfies_maxmin(inst, alloc))
}

pub fn satisfies_minmax_fs(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    Ok(FairShares::compute(inst)?.satisfies_minmax(inst, alloc))
}

pub fn fairness_level<F>(inst: &Instance, alloc: &Allocation, ceei: F) -> Result<FairnessLevel>
where
    F: FnOnce(&Instance, &Allocation) -> Result<bool>,
{
    FairShares::compute(inst)?.level(inst, alloc, ceei)
}
