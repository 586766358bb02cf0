//! Small hand-made instances with known structure, shared by tests,
//! benches and the README walkthrough.

use crate::allocation::Allocation;
use crate::instance::Instance;

/// Two agents, three objects; agent 2 ties objects 1 and 3, so one
/// sequence may generate two allocations.
pub fn two_agent_tie() -> Instance {
    Instance::from_integers(&[[8, 2, 1], [5, 1, 5]]).unwrap()
}

/// An allocation that is frustrating as a whole.
pub fn frustrating_pair() -> Instance {
    Instance::from_integers(&[[2, 1, 1], [1, 2, 2]]).unwrap()
}

/// Everyone gets a top object, yet a frustrating sub-allocation remains
/// after the first two picks.
pub fn hidden_frustration() -> Instance {
    Instance::from_integers(&[[9, 8, 2, 1], [2, 5, 1, 4]]).unwrap()
}

/// Same-order, share-strict instance where a sequence yields a dominated
/// allocation.
pub fn sequenceable_dominated() -> Instance {
    Instance::from_integers(&[[5, 4, 2], [8, 2, 1]]).unwrap()
}

/// Three agents, five objects; holds an envy-free allocation that is not
/// sequenceable.
pub fn envy_free_non_sequenceable() -> Instance {
    Instance::from_integers(&[
        [2, 12, 7, 15, 11],
        [12, 15, 11, 7, 2],
        [15, 20, 9, 2, 1],
    ])
    .unwrap()
}

/// `<{3,5}, {1,4}, {2}>` on [`envy_free_non_sequenceable`].
pub fn envy_free_non_sequenceable_allocation() -> Allocation {
    Allocation::from_one_based(5, &[&[3, 5], &[1, 4], &[2]]).unwrap()
}

/// Three agents, four objects; holds a CEEI allocation that is dominated.
pub fn ceei_dominated() -> Instance {
    Instance::from_integers(&[[2, 3, 3, 2], [2, 3, 4, 1], [0, 4, 2, 4]]).unwrap()
}

/// `<{1,4}, {3}, {2}>` on [`ceei_dominated`], CEEI at prices (1/2, 1, 1, 1/2).
pub fn ceei_dominated_allocation() -> Allocation {
    Allocation::from_one_based(4, &[&[1, 4], &[3], &[2]]).unwrap()
}
