//! Sequences of sincere choices: execution, sequenceability, inversion and
//! the sequence/allocation relation.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::allocation::{Allocation, Sequence, Share, SubAllocation};
use crate::error::{check_allocation_space, check_subset_space, Error, Result};
use crate::instance::Instance;
use crate::io::{sequence_json, shares_json};

/// Object limit for the brute-force frustrating-restriction scan.
pub const MAX_BRUTEFORCE_OBJECTS: usize = 20;

pub(crate) fn check_dims(inst: &Instance, alloc: &Allocation) -> Result<()> {
    if alloc.num_agents() != inst.num_agents() || alloc.num_objects() != inst.num_objects() {
        return Err(Error::Dimension(format!(
            "allocation is {}x{}, instance is {}x{}",
            alloc.num_agents(),
            alloc.num_objects(),
            inst.num_agents(),
            inst.num_objects()
        )));
    }
    Ok(())
}

/// Every allocation the sequence can produce, exploring all tie-breaks.
pub fn execute_sequence(inst: &Instance, seq: &Sequence) -> Result<BTreeSet<Allocation>> {
    seq.validate(inst.num_agents(), inst.num_objects())?;
    let m = inst.num_objects();
    let mut out = BTreeSet::new();
    let mut owners = vec![usize::MAX; m];
    let mut taken = vec![false; m];
    explore(inst, seq.picks(), 0, &mut owners, &mut taken, &mut out);
    Ok(out)
}

fn explore(
    inst: &Instance,
    picks: &[usize],
    step: usize,
    owners: &mut Vec<usize>,
    taken: &mut Vec<bool>,
    out: &mut BTreeSet<Allocation>,
) {
    if step == picks.len() {
        out.insert(Allocation::from_owners(inst.num_agents(), owners.clone()).unwrap());
        return;
    }
    let agent = picks[step];
    let row = inst.scaled_row(agent);
    let top = (0..row.len()).filter(|&o| !taken[o]).map(|o| row[o]).max();
    let Some(top) = top else { return };
    for o in 0..row.len() {
        if !taken[o] && row[o] == top {
            taken[o] = true;
            owners[o] = agent;
            explore(inst, picks, step + 1, owners, taken, out);
            taken[o] = false;
        }
    }
}

/// Outcome of inverting an allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequencing {
    /// A sequence generating the allocation.
    Sequenceable(Sequence),
    /// The residual sub-allocation at which no agent could pick: it is
    /// frustrating, which certifies non-sequenceability.
    Frustrating(SubAllocation),
}

/// Greedy inversion: repeatedly let the lowest-indexed agent that holds one
/// of her remaining top objects pick it (lowest object index first).
/// Runs in `O(N * M^2)`.
pub fn sequence_or_witness(inst: &Instance, alloc: &Allocation) -> Sequencing {
    let n = inst.num_agents();
    let m = inst.num_objects();
    let owners = alloc.owners();
    let mut remaining = vec![true; m];
    let mut picks = Vec::with_capacity(m);
    for _ in 0..m {
        let choice = (0..n).find_map(|i| {
            let row = inst.scaled_row(i);
            let top = (0..m).filter(|&o| remaining[o]).map(|o| row[o]).max()?;
            (0..m)
                .find(|&o| remaining[o] && owners[o] == i && row[o] == top)
                .map(|o| (i, o))
        });
        match choice {
            Some((i, o)) => {
                picks.push(i);
                remaining[o] = false;
            }
            None => {
                let domain: Share = (0..m).filter(|&o| remaining[o]).collect();
                return Sequencing::Frustrating(alloc.restrict(&domain));
            }
        }
    }
    Sequencing::Sequenceable(Sequence::new(picks))
}

pub fn sequence_of(inst: &Instance, alloc: &Allocation) -> Option<Sequence> {
    match sequence_or_witness(inst, alloc) {
        Sequencing::Sequenceable(s) => Some(s),
        Sequencing::Frustrating(_) => None,
    }
}

pub fn is_sequenceable(inst: &Instance, alloc: &Allocation) -> bool {
    is_sequenceable_owners(inst, alloc.owners())
}

/// Allocation-free variant of [`is_sequenceable`] for enumeration loops.
pub(crate) fn is_sequenceable_owners(inst: &Instance, owners: &[usize]) -> bool {
    let n = inst.num_agents();
    let m = owners.len();
    let mut remaining = vec![true; m];
    for _ in 0..m {
        let mut picked = false;
        for i in 0..n {
            let row = inst.scaled_row(i);
            let mut top = i64::MIN;
            for o in 0..m {
                if remaining[o] && row[o] > top {
                    top = row[o];
                }
            }
            if let Some(o) = (0..m).find(|&o| remaining[o] && owners[o] == i && row[o] == top) {
                remaining[o] = false;
                picked = true;
                break;
            }
        }
        if !picked {
            return false;
        }
    }
    true
}

/// Smallest (by bitmask) nonempty domain on which the allocation's
/// restriction is frustrating, found by scanning all `2^M - 1` domains.
pub fn frustrating_domain_bruteforce(inst: &Instance, alloc: &Allocation) -> Result<Option<Share>> {
    check_dims(inst, alloc)?;
    let m = inst.num_objects();
    check_subset_space(m, MAX_BRUTEFORCE_OBJECTS, "the frustrating-restriction scan")?;
    let sub = alloc.as_sub();
    let mut owners = vec![None; m];
    for mask in 1u64..(1u64 << m) {
        for (o, slot) in owners.iter_mut().enumerate() {
            *slot = if mask >> o & 1 == 1 { sub.owner(o) } else { None };
        }
        if inst.frustrating_owners(&owners) {
            return Ok(Some(Share::from_mask(mask)));
        }
    }
    Ok(None)
}

pub fn has_frustrating_suballocation_bruteforce(inst: &Instance, alloc: &Allocation) -> Result<bool> {
    frustrating_domain_bruteforce(inst, alloc).map(|w| w.is_some())
}

/// The relation pairing each sequence with every allocation it generates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenerationRelation {
    pub pairs: BTreeSet<(Sequence, Allocation)>,
}

impl GenerationRelation {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn images(&self) -> BTreeMap<&Sequence, Vec<&Allocation>> {
        let mut map: BTreeMap<&Sequence, Vec<&Allocation>> = BTreeMap::new();
        for (s, a) in &self.pairs {
            map.entry(s).or_default().push(a);
        }
        map
    }

    pub fn preimages(&self) -> BTreeMap<&Allocation, Vec<&Sequence>> {
        let mut map: BTreeMap<&Allocation, Vec<&Sequence>> = BTreeMap::new();
        for (s, a) in &self.pairs {
            map.entry(a).or_default().push(s);
        }
        map
    }

    /// Every sequence generates exactly one allocation.
    pub fn is_function(&self) -> bool {
        self.images().values().all(|v| v.len() == 1)
    }

    /// A function that is one-to-one and reaches all `num_allocations`.
    pub fn is_bijection(&self, num_allocations: usize) -> bool {
        let pre = self.preimages();
        self.is_function() && pre.len() == num_allocations && pre.values().all(|v| v.len() == 1)
    }

    /// `{"edges": [{"sequence": [...], "allocation": [[...]]}]}`, 1-based.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .pairs
            .iter()
            .map(|(s, a)| {
                json!({
                    "sequence": sequence_json(s)["picks"],
                    "allocation": shares_json(&a.shares()),
                })
            })
            .collect();
        json!({ "edges": edges })
    }
}

pub fn enumerate_relation(inst: &Instance) -> Result<GenerationRelation> {
    check_allocation_space(inst.num_agents(), inst.num_objects())?;
    let mut pairs = BTreeSet::new();
    for seq in Sequence::all(inst.num_agents(), inst.num_objects()) {
        for alloc in execute_sequence(inst, &seq)? {
            pairs.insert((seq.clone(), alloc));
        }
    }
    Ok(GenerationRelation { pairs })
}
