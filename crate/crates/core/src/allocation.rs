//! Shares, (sub-)allocations and picking sequences.
//!
//! Agents and objects are 0-based here. Text and JSON renderings are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A set of object indices held by one agent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Share(BTreeSet<usize>);

impl Share {
    pub fn new() -> Self {
        Share(BTreeSet::new())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, object: usize) -> bool {
        self.0.contains(&object)
    }

    pub fn insert(&mut self, object: usize) -> bool {
        self.0.insert(object)
    }

    pub fn remove(&mut self, object: usize) -> bool {
        self.0.remove(&object)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_set(&self) -> &BTreeSet<usize> {
        &self.0
    }

    /// Bitmask representation; only valid for objects below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &o| m | (1u64 << o))
    }

    pub fn from_mask(mask: u64) -> Self {
        Share((0..64).filter(|o| mask >> o & 1 == 1).collect())
    }
}

impl FromIterator<usize> for Share {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Share(iter.into_iter().collect())
    }
}

impl<const K: usize> From<[usize; K]> for Share {
    fn from(xs: [usize; K]) -> Self {
        Share(xs.into_iter().collect())
    }
}

impl fmt::Display for Share {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, o) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", o + 1)?;
        }
        write!(f, "}}")
    }
}

/// A partition of a subset `domain` of the objects into one share per agent.
///
/// Stored as an owner table indexed by object, so disjointness holds by
/// construction and the domain is exactly the set of owned objects.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubAllocation {
    num_agents: usize,
    owners: Vec<Option<usize>>,
}

impl SubAllocation {
    /// Builds from explicit shares over `num_objects` objects, rejecting
    /// overlapping shares and out-of-range objects.
    pub fn from_shares(num_objects: usize, shares: &[Share]) -> Result<Self> {
        let mut owners = vec![None; num_objects];
        for (agent, share) in shares.iter().enumerate() {
            for o in share.iter() {
                let slot = owners.get_mut(o).ok_or_else(|| {
                    Error::Index(format!("object {} out of range 1..={num_objects}", o + 1))
                })?;
                if let Some(prev) = *slot {
                    return Err(Error::Domain(format!(
                        "object {} is in the shares of agents {} and {}",
                        o + 1,
                        prev + 1,
                        agent + 1
                    )));
                }
                *slot = Some(agent);
            }
        }
        Ok(SubAllocation {
            num_agents: shares.len(),
            owners,
        })
    }

    pub fn from_owners(num_agents: usize, owners: Vec<Option<usize>>) -> Result<Self> {
        if let Some(bad) = owners.iter().flatten().find(|&&a| a >= num_agents) {
            return Err(Error::Index(format!("agent {} out of range", bad + 1)));
        }
        Ok(SubAllocation { num_agents, owners })
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_objects(&self) -> usize {
        self.owners.len()
    }

    pub fn owner(&self, object: usize) -> Option<usize> {
        self.owners.get(object).copied().flatten()
    }

    pub fn owners(&self) -> &[Option<usize>] {
        &self.owners
    }

    pub fn domain(&self) -> Share {
        self.owners
            .iter()
            .enumerate()
            .filter_map(|(o, a)| a.map(|_| o))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.iter().all(Option::is_none)
    }

    pub fn share(&self, agent: usize) -> Share {
        self.owners
            .iter()
            .enumerate()
            .filter_map(|(o, a)| (*a == Some(agent)).then_some(o))
            .collect()
    }

    pub fn shares(&self) -> Vec<Share> {
        let mut shares = vec![Share::new(); self.num_agents];
        for (o, a) in self.owners.iter().enumerate() {
            if let Some(a) = a {
                shares[*a].insert(o);
            }
        }
        shares
    }

    /// Keeps only the objects of `domain`.
    pub fn restrict(&self, domain: &Share) -> SubAllocation {
        let owners = self
            .owners
            .iter()
            .enumerate()
            .map(|(o, a)| if domain.contains(o) { *a } else { None })
            .collect();
        SubAllocation {
            num_agents: self.num_agents,
            owners,
        }
    }

    /// Checks the partition invariants against the explicit share view:
    /// shares pairwise disjoint and their union equal to the domain.
    pub fn validate(&self) -> Result<()> {
        let shares = self.shares();
        let mut seen = BTreeSet::new();
        for share in &shares {
            for o in share.iter() {
                if !seen.insert(o) {
                    return Err(Error::Domain(format!("object {} allocated twice", o + 1)));
                }
            }
        }
        if seen != *self.domain().as_set() {
            return Err(Error::Domain("shares do not cover the domain".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SubAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_shares(f, &self.shares())
    }
}

fn write_shares(f: &mut fmt::Formatter<'_>, shares: &[Share]) -> fmt::Result {
    write!(f, "<")?;
    for (k, s) in shares.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{s}")?;
    }
    write!(f, ">")
}

/// A complete allocation: every object has exactly one owner.
///
/// Ordering is lexicographic on the owner vector (object 1 first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation {
    num_agents: usize,
    owners: Vec<usize>,
}

impl Allocation {
    pub fn from_owners(num_agents: usize, owners: Vec<usize>) -> Result<Self> {
        if let Some(bad) = owners.iter().find(|&&a| a >= num_agents) {
            return Err(Error::Index(format!(
                "agent {} out of range 1..={num_agents}",
                bad + 1
            )));
        }
        Ok(Allocation { num_agents, owners })
    }

    /// Builds from shares; they must partition `0..num_objects` exactly.
    pub fn from_shares(num_objects: usize, shares: &[Share]) -> Result<Self> {
        let sub = SubAllocation::from_shares(num_objects, shares)?;
        Allocation::try_from(sub)
    }

    /// Convenience for tests and examples: 1-based object lists per agent.
    pub fn from_one_based(num_objects: usize, shares: &[&[usize]]) -> Result<Self> {
        let shares: Vec<Share> = shares
            .iter()
            .map(|s| {
                s.iter()
                    .map(|&o| {
                        o.checked_sub(1)
                            .ok_or_else(|| Error::Index("object index 0 is invalid".into()))
                    })
                    .collect::<Result<Share>>()
            })
            .collect::<Result<_>>()?;
        Allocation::from_shares(num_objects, &shares)
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_objects(&self) -> usize {
        self.owners.len()
    }

    pub fn owner(&self, object: usize) -> usize {
        self.owners[object]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn share(&self, agent: usize) -> Share {
        self.owners
            .iter()
            .enumerate()
            .filter_map(|(o, &a)| (a == agent).then_some(o))
            .collect()
    }

    pub fn shares(&self) -> Vec<Share> {
        let mut shares = vec![Share::new(); self.num_agents];
        for (o, &a) in self.owners.iter().enumerate() {
            shares[a].insert(o);
        }
        shares
    }

    /// Per-agent bitmask of held objects (requires fewer than 64 objects).
    pub fn share_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.num_agents];
        for (o, &a) in self.owners.iter().enumerate() {
            masks[a] |= 1u64 << o;
        }
        masks
    }

    pub fn as_sub(&self) -> SubAllocation {
        SubAllocation {
            num_agents: self.num_agents,
            owners: self.owners.iter().map(|&a| Some(a)).collect(),
        }
    }

    pub fn restrict(&self, domain: &Share) -> SubAllocation {
        self.as_sub().restrict(domain)
    }

    /// Returns a copy where `object` is held by `agent`.
    pub fn with_owner(&self, object: usize, agent: usize) -> Allocation {
        let mut next = self.clone();
        next.owners[object] = agent;
        next
    }
}

impl TryFrom<SubAllocation> for Allocation {
    type Error = Error;

    fn try_from(sub: SubAllocation) -> Result<Self> {
        let owners = sub
            .owners
            .iter()
            .enumerate()
            .map(|(o, a)| {
                a.ok_or_else(|| Error::Domain(format!("object {} is not allocated", o + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Allocation {
            num_agents: sub.num_agents,
            owners,
        })
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_shares(f, &self.shares())
    }
}

/// Iterates all `N^M` allocations in lexicographic owner order.
pub struct AllocationIter {
    num_agents: usize,
    current: Option<Vec<usize>>,
}

impl AllocationIter {
    pub fn new(num_agents: usize, num_objects: usize) -> Self {
        AllocationIter {
            num_agents,
            current: (num_agents > 0).then(|| vec![0; num_objects]),
        }
    }
}

impl Iterator for AllocationIter {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        let owners = self.current.as_mut()?;
        let out = Allocation {
            num_agents: self.num_agents,
            owners: owners.clone(),
        };
        let mut k = owners.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            owners[k] += 1;
            if owners[k] < self.num_agents {
                break;
            }
            owners[k] = 0;
        }
        Some(out)
    }
}

/// A sequence of sincere choices: `picks[t]` is the agent choosing at step `t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequence {
    picks: Vec<usize>,
}

impl Sequence {
    pub fn new(picks: Vec<usize>) -> Self {
        Sequence { picks }
    }

    pub fn from_one_based(picks: &[usize]) -> Result<Self> {
        picks
            .iter()
            .map(|&a| {
                a.checked_sub(1)
                    .ok_or_else(|| Error::Index("agent index 0 is invalid".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Sequence::new)
    }

    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn validate(&self, num_agents: usize, num_objects: usize) -> Result<()> {
        if self.picks.len() != num_objects {
            return Err(Error::Dimension(format!(
                "sequence has {} picks but the instance has {num_objects} objects",
                self.picks.len()
            )));
        }
        if let Some(bad) = self.picks.iter().find(|&&a| a >= num_agents) {
            return Err(Error::Index(format!(
                "agent {} out of range 1..={num_agents}",
                bad + 1
            )));
        }
        Ok(())
    }

    /// Number of times `agent` picks.
    pub fn count(&self, agent: usize) -> usize {
        self.picks.iter().filter(|&&a| a == agent).count()
    }

    /// All `N^M` sequences in lexicographic order.
    pub fn all(num_agents: usize, len: usize) -> impl Iterator<Item = Sequence> {
        AllocationIter::new(num_agents, len).map(|a| Sequence { picks: a.owners })
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, a) in self.picks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, ">")
    }
}
