//! Picking sequences and the efficiency/fairness analysis of allocations
//! of indivisible goods under additive preferences.
//!
//! * [`sequences`]: run a sequence of sincere choices (every tie-break),
//!   invert an allocation to a generating sequence or a frustrating
//!   witness, and enumerate the sequence/allocation relation.
//! * [`efficiency`]: Pareto dominance, trading cycles, and the
//!   NS < SnP < PO scale.
//! * [`fairness`]: maxmin, proportional and minmax fair shares,
//!   envy-freeness, and the NONE < MFS < PFS < mFS < EF < CEEI scale.
//! * [`ceei`]: exact CEEI test through a non-strict linear system.
//! * [`lp`]: exact rational feasibility (simplex, Fourier-Motzkin).
//! * [`experiments`]: random instances and the exhaustive census.
//!
//! Everything is exact: weights are rationals and no decision goes
//! through floating point.

pub mod allocation;
pub mod ceei;
pub mod efficiency;
pub mod error;
pub mod experiments;
pub mod fairness;
pub mod fixtures;
pub mod instance;
pub mod io;
pub mod lp;
pub mod rational;
pub mod sequences;

pub use allocation::{Allocation, AllocationIter, Sequence, Share, SubAllocation};
pub use ceei::{ceei_test, verify_ceei, LpSystem, PriceVector};
pub use efficiency::{dominates, efficiency_level, is_pareto_optimal, EfficiencyLevel, TradingCycle};
pub use error::{Error, Result};
pub use experiments::{classify_all, generate_instance, run_experiment, ClassificationGrid, ExperimentConfig, GeneratorConfig, Model};
pub use fairness::{is_envy_free, FairShares, FairnessLevel};
pub use instance::Instance;
pub use lp::{FeasibilityResult, LinearConstraint, LinearSystem, Relation};
pub use rational::Rational;
pub use sequences::{execute_sequence, is_sequenceable, sequence_of, Sequencing};
