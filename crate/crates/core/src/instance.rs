//! Additive instances and the structural predicates on them.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::allocation::{Share, SubAllocation};
use crate::error::{check_subset_space, Error, Result};
use crate::rational::Rational;

/// Exhaustive share-strictness check limit.
pub const MAX_STRICT_SHARES_OBJECTS: usize = 25;

/// `N` agents, `M` objects and a nonnegative rational weight matrix.
///
/// Alongside the rational weights the instance keeps every agent's row
/// scaled by the lcm of that row's denominators. Comparisons between
/// bundles *for one agent* are done on these integers; they are exact
/// because the scale factor is positive and shared by the whole row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    weights: Vec<Vec<Rational>>,
    scaled: Vec<Vec<i64>>,
    scale: Vec<i64>,
}

impl Instance {
    pub fn new(weights: Vec<Vec<Rational>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::Domain("an instance needs at least one agent".into()));
        }
        let m = weights[0].len();
        if m == 0 {
            return Err(Error::Domain("an instance needs at least one object".into()));
        }
        let mut scaled = Vec::with_capacity(n);
        let mut scale = Vec::with_capacity(n);
        for (i, row) in weights.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Parse(format!(
                    "row {} has {} weights, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(l) = row.iter().position(|w| w.is_negative()) {
                return Err(Error::Parse(format!(
                    "negative weight {} at row {}, column {}",
                    row[l],
                    i + 1,
                    l + 1
                )));
            }
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
            let too_big = || {
                Error::Capacity(format!(
                    "row {} does not fit 64-bit integers after scaling to a common denominator",
                    i + 1
                ))
            };
            let ints = row
                .iter()
                .map(|w| (w.numer() * (&lcm / w.denom())).to_i64().ok_or_else(too_big))
                .collect::<Result<Vec<_>>>()?;
            scale.push(lcm.to_i64().ok_or_else(too_big)?);
            scaled.push(ints);
        }
        Ok(Instance {
            weights,
            scaled,
            scale,
        })
    }

    /// Integer-weight convenience constructor.
    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Instance::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&w| Rational::from(w)).collect())
                .collect(),
        )
    }

    pub fn num_agents(&self) -> usize {
        self.weights.len()
    }

    pub fn num_objects(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weight(&self, agent: usize, object: usize) -> &Rational {
        &self.weights[agent][object]
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    /// The agent's weight row in her own integer units.
    pub fn scaled_row(&self, agent: usize) -> &[i64] {
        &self.scaled[agent]
    }

    /// Positive factor such that `scaled_row(i)[l] = scale(i) * W(i, l)`.
    pub fn scale(&self, agent: usize) -> i64 {
        self.scale[agent]
    }

    /// Converts a scaled utility of `agent` back to an exact rational.
    pub fn unscale(&self, agent: usize, value: i128) -> Rational {
        Rational::from_i128(value) / Rational::from_integer(self.scale[agent])
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.num_agents() {
            return Err(Error::Index(format!(
                "agent {} out of range 1..={}",
                agent + 1,
                self.num_agents()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_share(&self, share: &Share) -> Result<()> {
        if let Some(o) = share.iter().find(|&o| o >= self.num_objects()) {
            return Err(Error::Index(format!(
                "object {} out of range 1..={}",
                o + 1,
                self.num_objects()
            )));
        }
        Ok(())
    }

    /// Utility of `share` for `agent` in scaled integer units.
    pub fn scaled_utility(&self, agent: usize, share: impl IntoIterator<Item = usize>) -> i128 {
        let row = &self.scaled[agent];
        share.into_iter().map(|o| row[o] as i128).sum()
    }

    /// Scaled utility of a bitmask bundle (objects below 64 only).
    pub fn scaled_utility_mask(&self, agent: usize, mut mask: u64) -> i128 {
        let row = &self.scaled[agent];
        let mut total = 0i128;
        while mask != 0 {
            let o = mask.trailing_zeros() as usize;
            total += row[o] as i128;
            mask &= mask - 1;
        }
        total
    }

    /// `u_i(share) = sum of W(i, l) over l in share`.
    pub fn utility(&self, agent: usize, share: &Share) -> Result<Rational> {
        self.check_agent(agent)?;
        self.check_share(share)?;
        Ok(share.iter().map(|o| &self.weights[agent][o]).sum())
    }

    /// The top objects of `agent` within `objects`, ties included.
    pub fn best(&self, agent: usize, objects: &Share) -> Result<Share> {
        self.check_agent(agent)?;
        self.check_share(objects)?;
        if objects.is_empty() {
            return Err(Error::Domain("best() of an empty object set".into()));
        }
        let row = &self.scaled[agent];
        let top = objects.iter().map(|o| row[o]).max().unwrap_or(0);
        Ok(objects.iter().filter(|&o| row[o] == top).collect())
    }

    /// True iff no agent holding something receives one of her top objects
    /// of the sub-allocation's domain.
    pub fn is_frustrating(&self, sub: &SubAllocation) -> Result<bool> {
        if sub.num_agents() != self.num_agents() || sub.num_objects() != self.num_objects() {
            return Err(Error::Dimension(format!(
                "sub-allocation is {}x{}, instance is {}x{}",
                sub.num_agents(),
                sub.num_objects(),
                self.num_agents(),
                self.num_objects()
            )));
        }
        if sub.is_empty() {
            return Err(Error::Domain(
                "frustration is undefined on an empty sub-allocation".into(),
            ));
        }
        Ok(self.frustrating_owners(sub.owners()))
    }

    /// Core of [`Instance::is_frustrating`] over an owner table.
    pub(crate) fn frustrating_owners(&self, owners: &[Option<usize>]) -> bool {
        (0..self.num_agents()).all(|i| {
            let row = &self.scaled[i];
            let top = owners
                .iter()
                .enumerate()
                .filter(|(_, a)| a.is_some())
                .map(|(o, _)| row[o])
                .max();
            match top {
                None => true,
                Some(top) => !owners
                    .iter()
                    .enumerate()
                    .any(|(o, a)| *a == Some(i) && row[o] == top),
            }
        })
    }

    /// No agent gives the same weight to two distinct objects.
    pub fn strict_on_objects(&self) -> bool {
        self.scaled.iter().all(|row| {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            sorted.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// No agent values two distinct shares equally.
    ///
    /// Two shares tie for an agent iff some nonzero `c` in `{-1,0,1}^M` has
    /// `sum c_l w_l = 0`; this is searched meet-in-the-middle over the two
    /// halves of the objects, which covers all `2^M` shares exactly.
    pub fn strict_on_shares(&self) -> Result<bool> {
        let m = self.num_objects();
        check_subset_space(m, MAX_STRICT_SHARES_OBJECTS, "strict_on_shares")?;
        if !self.strict_on_objects() {
            return Ok(false);
        }
        let half = m / 2;
        for row in &self.scaled {
            let left = signed_sums(&row[..half]);
            let right = signed_sums(&row[half..]);
            if left.contains(&0) || right.contains(&0) {
                return Ok(false);
            }
            if left.iter().any(|v| right.contains(&-v)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A common non-increasing order of the objects for every agent, if any.
    ///
    /// Objects are sorted by their weight vector, lexicographically
    /// decreasing; a common order exists iff this one works.
    pub fn same_order(&self) -> Option<Vec<usize>> {
        let n = self.num_agents();
        let mut order: Vec<usize> = (0..self.num_objects()).collect();
        order.sort_by(|&a, &b| {
            (0..n)
                .map(|i| self.scaled[i][b].cmp(&self.scaled[i][a]))
                .find(|c| c.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let ok = self
            .scaled
            .iter()
            .all(|row| order.windows(2).all(|w| row[w[0]] >= row[w[1]]));
        ok.then_some(order)
    }
}

/// Values `sum c_l w_l` over all nonzero `c` in `{-1,0,1}^k`.
fn signed_sums(weights: &[i64]) -> HashSet<i128> {
    let mut all: Vec<(i128, bool)> = vec![(0, false)];
    for &w in weights {
        let w = w as i128;
        let mut next = Vec::with_capacity(all.len() * 3);
        for &(v, nz) in &all {
            next.push((v, nz));
            next.push((v + w, true));
            next.push((v - w, true));
        }
        all = next;
    }
    all.into_iter().filter(|(_, nz)| *nz).map(|(v, _)| v).collect()
}
