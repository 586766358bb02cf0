//! Independent oracles for the CEEI test and the fair-share thresholds.

use proptest::prelude::*;

use seqalloc_core::ceei::ceei_test_unfiltered;
use seqalloc_core::fixtures::*;
use seqalloc_core::*;

/// All price vectors with entries in `{0, 1/k, ..., 1}`.
fn grid(m: usize, k: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |t| {
                    let mut q = p.clone();
                    q.push(Rational::new(t, k));
                    q
                })
            })
            .collect();
    }
    out
}

/// Direct check of the equilibrium conditions, written without subset DP.
fn supports(inst: &Instance, alloc: &Allocation, prices: &[Rational]) -> bool {
    let m = inst.num_objects();
    let cost = |s: u64| -> Rational { (0..m).filter(|o| s >> o & 1 == 1).map(|o| prices[o].clone()).sum() };
    let shares = alloc.share_masks();
    (0..inst.num_agents()).all(|i| {
        let own = inst.scaled_utility_mask(i, shares[i]);
        cost(shares[i]) <= Rational::one()
            && (0..1u64 << m)
                .filter(|&s| inst.scaled_utility_mask(i, s) > own)
                .all(|s| cost(s) > Rational::one())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_prices_imply_ceei(
        rows in (2usize..=3, 1usize..=3).prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(0i64..=5, m), n))
    ) {
        let inst = Instance::from_integers(&rows).unwrap();
        let prices = grid(inst.num_objects(), 4);
        for alloc in AllocationIter::new(inst.num_agents(), inst.num_objects()) {
            let found = ceei_test_unfiltered(&inst, &alloc).unwrap();
            if let Some(p) = &found {
                prop_assert!(supports(&inst, &alloc, p.prices()));
            }
            if let Some(q) = prices.iter().find(|q| supports(&inst, &alloc, q)) {
                prop_assert!(found.is_some(), "grid prices {:?} support {}", q, alloc);
                prop_assert!(verify_ceei(&inst, &alloc, q).unwrap());
            }
        }
    }
}

#[test]
fn verifier_matches_direct_check_on_fixture() {
    let inst = ceei_dominated();
    let alloc = ceei_dominated_allocation();
    for q in grid(4, 2) {
        assert_eq!(verify_ceei(&inst, &alloc, &q).unwrap(), supports(&inst, &alloc, &q), "{q:?}");
    }
}

#[test]
fn hand_computed_thresholds() {
    // weights 8, 2, 1: best worst share of a 2-split is {2,1} = 3,
    // best largest share is {8} = 8.
    let shares = FairShares::compute(&two_agent_tie()).unwrap();
    assert_eq!(shares.maxmin(0), &Rational::from_integer(3));
    assert_eq!(shares.minmax(0), &Rational::from_integer(8));
    assert_eq!(shares.proportional(0), &Rational::new(11, 2));
    // weights 5, 1, 5
    assert_eq!(shares.maxmin(1), &Rational::from_integer(5));
    assert_eq!(shares.minmax(1), &Rational::from_integer(6));

    // three shares of 2, 12, 7, 15, 11 (sum 47): {15}, {12,2}, {11,7} gives
    // the best minimum 14; {15,2}, {12}, {11,7} gives the best maximum 18.
    let shares = FairShares::compute(&envy_free_non_sequenceable()).unwrap();
    assert_eq!(shares.maxmin(0), &Rational::from_integer(14));
    assert_eq!(shares.minmax(0), &Rational::from_integer(18));
    assert_eq!(shares.proportional(0), &Rational::new(47, 3));
}
