//! Random instances and the exhaustive (efficiency, fairness) census.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::allocation::Allocation;
use crate::ceei::ceei_test_unfiltered;
use crate::efficiency::{pareto_optimal_mask, EfficiencyLevel};
use crate::error::{check_allocation_space, Error, Result};
use crate::fairness::{FairShares, FairnessLevel};
use crate::instance::Instance;
use crate::sequences::is_sequenceable_owners;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Every weight i.i.d. uniform on `uniform_range`.
    Uniform,
    /// Per-object center uniform on `center_range`; each agent's weight is
    /// `Normal(center, noise * center)`, rounded and clamped at 0.
    Gaussian,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::Gaussian => "gaussian",
        }
    }
}

fn default_uniform_range() -> (i64, i64) {
    (1, 100)
}

fn default_center_range() -> (i64, i64) {
    (10, 100)
}

fn default_noise() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub model: Model,
    pub num_agents: usize,
    pub num_objects: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_uniform_range")]
    pub uniform_range: (i64, i64),
    #[serde(default = "default_center_range")]
    pub center_range: (i64, i64),
    #[serde(default = "default_noise")]
    pub noise: f64,
}

impl GeneratorConfig {
    pub fn new(model: Model, num_agents: usize, num_objects: usize, seed: u64) -> Self {
        GeneratorConfig {
            model,
            num_agents,
            num_objects,
            seed,
            uniform_range: default_uniform_range(),
            center_range: default_center_range(),
            noise: default_noise(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_agents == 0 || self.num_objects == 0 {
            return Err(Error::Domain("need at least one agent and one object".into()));
        }
        let check_range = |(lo, hi): (i64, i64), what: &str| {
            if lo < 0 || lo > hi {
                Err(Error::Domain(format!("{what} [{lo}, {hi}] must satisfy 0 <= lo <= hi")))
            } else {
                Ok(())
            }
        };
        check_range(self.uniform_range, "uniform range")?;
        check_range(self.center_range, "center range")?;
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::Domain(format!("noise {} must be finite and >= 0", self.noise)));
        }
        Ok(())
    }
}

fn default_instances() -> usize {
    100
}

/// Experiment file: a generator config plus the number of instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub generator: GeneratorConfig,
    #[serde(default = "default_instances")]
    pub instances: usize,
}

/// Deterministic in `config` (including its seed).
pub fn generate_instance(config: &GeneratorConfig) -> Result<Instance> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, m) = (config.num_agents, config.num_objects);
    let rows: Vec<Vec<i64>> = match config.model {
        Model::Uniform => {
            let (lo, hi) = config.uniform_range;
            (0..n)
                .map(|_| (0..m).map(|_| rng.random_range(lo..=hi)).collect())
                .collect()
        }
        Model::Gaussian => {
            let (lo, hi) = config.center_range;
            let centers: Vec<i64> = (0..m).map(|_| rng.random_range(lo..=hi)).collect();
            let mut rows = vec![vec![0i64; m]; n];
            for (o, &c) in centers.iter().enumerate() {
                let sd = config.noise * c as f64;
                for row in rows.iter_mut() {
                    row[o] = if sd > 0.0 {
                        let dist = Normal::new(c as f64, sd)
                            .map_err(|e| Error::Domain(format!("gaussian parameters: {e}")))?;
                        (dist.sample(&mut rng).round() as i64).max(0)
                    } else {
                        c
                    };
                }
            }
            rows
        }
    };
    Instance::from_integers(&rows)
}

/// Allocation counts by (efficiency, fairness) level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationGrid {
    pub counts: [[u64; 6]; 3],
}

impl ClassificationGrid {
    pub fn get(&self, eff: EfficiencyLevel, fair: FairnessLevel) -> u64 {
        self.counts[eff.index()][fair.index()]
    }

    pub fn add(&mut self, eff: EfficiencyLevel, fair: FairnessLevel) {
        self.counts[eff.index()][fair.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Allocations at or above both levels.
    pub fn count_at_least(&self, eff: EfficiencyLevel, fair: FairnessLevel) -> u64 {
        EfficiencyLevel::ALL
            .iter()
            .filter(|e| **e >= eff)
            .flat_map(|e| {
                FairnessLevel::ALL
                    .iter()
                    .filter(|f| **f >= fair)
                    .map(move |f| self.get(*e, *f))
            })
            .sum()
    }

    fn merge(mut self, other: &ClassificationGrid) -> Self {
        for (a, b) in self.counts.iter_mut().flatten().zip(other.counts.iter().flatten()) {
            *a += b;
        }
        self
    }
}

fn owners_of(mut index: u64, num_agents: usize, num_objects: usize, out: &mut [usize]) {
    for o in (0..num_objects).rev() {
        out[o] = (index % num_agents as u64) as usize;
        index /= num_agents as u64;
    }
}

/// Classifies every allocation of the instance. CEEI is only tested on
/// envy-free sequenceable allocations.
pub fn classify_all(inst: &Instance) -> Result<ClassificationGrid> {
    let (n, m) = (inst.num_agents(), inst.num_objects());
    let total = check_allocation_space(n, m)?;
    let shares = FairShares::compute(inst)?;
    let pareto = pareto_optimal_mask(inst)?;
    const CHUNK: u64 = 4096;
    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let grids = chunks
        .par_iter()
        .map(|&c| {
            let mut grid = ClassificationGrid::default();
            let mut owners = vec![0usize; m];
            for k in c * CHUNK..((c + 1) * CHUNK).min(total) {
                owners_of(k, n, m, &mut owners);
                let sequenceable = is_sequenceable_owners(inst, &owners);
                let eff = match (sequenceable, pareto[k as usize]) {
                    (false, _) => EfficiencyLevel::NS,
                    (true, true) => EfficiencyLevel::PO,
                    (true, false) => EfficiencyLevel::SnP,
                };
                let mut fair = shares.level_below_ceei(inst, &owners);
                if fair == FairnessLevel::EnvyFree && sequenceable {
                    let alloc = Allocation::from_owners(n, owners.clone())?;
                    if ceei_test_unfiltered(inst, &alloc)?.is_some() {
                        fair = FairnessLevel::Ceei;
                    }
                }
                grid.add(eff, fair);
            }
            Ok(grid)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(grids
        .iter()
        .fold(ClassificationGrid::default(), |acc, g| acc.merge(g)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub instance_id: usize,
    pub seed: u64,
    pub weights: Vec<Vec<i64>>,
    pub grid: ClassificationGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub config: GeneratorConfig,
    pub instances: Vec<InstanceResult>,
    /// `[efficiency][fairness]`
    pub aggregate: Vec<Vec<CellStats>>,
}

/// Per-instance seeds, drawn from a generator seeded with the master seed.
pub fn instance_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.random()).collect()
}

pub fn run_experiment(config: &GeneratorConfig, num_instances: usize) -> Result<ExperimentReport> {
    config.validate()?;
    check_allocation_space(config.num_agents, config.num_objects)?;
    let seeds = instance_seeds(config.seed, num_instances);
    let instances = seeds
        .par_iter()
        .enumerate()
        .map(|(id, &seed)| {
            let inst = generate_instance(&GeneratorConfig {
                seed,
                ..config.clone()
            })?;
            let grid = classify_all(&inst)?;
            let weights = (0..inst.num_agents())
                .map(|i| inst.scaled_row(i).to_vec())
                .collect();
            Ok(InstanceResult {
                instance_id: id + 1,
                seed,
                weights,
                grid,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregate = EfficiencyLevel::ALL
        .iter()
        .map(|&e| {
            FairnessLevel::ALL
                .iter()
                .map(|&f| {
                    let values: Vec<u64> = instances.iter().map(|r| r.grid.get(e, f)).collect();
                    CellStats {
                        mean: if values.is_empty() {
                            0.0
                        } else {
                            values.iter().sum::<u64>() as f64 / values.len() as f64
                        },
                        min: values.iter().copied().min().unwrap_or(0),
                        max: values.iter().copied().max().unwrap_or(0),
                    }
                })
                .collect()
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        instances,
        aggregate,
    })
}

impl ExperimentReport {
    pub fn total(&self) -> u64 {
        self.instances.iter().map(|r| r.grid.total()).sum()
    }

    pub fn mean_at_least(&self, eff: EfficiencyLevel, fair: FairnessLevel) -> f64 {
        if self.instances.is_empty() {
            return 0.0;
        }
        let sum: u64 = self
            .instances
            .iter()
            .map(|r| r.grid.count_at_least(eff, fair))
            .sum();
        sum as f64 / self.instances.len() as f64
    }

    /// `instance_id,efficiency,fairness,count`, one row per instance and cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance_id,efficiency,fairness,count\n");
        for r in &self.instances {
            for e in EfficiencyLevel::ALL {
                for f in FairnessLevel::ALL {
                    let _ = writeln!(out, "{},{},{},{}", r.instance_id, e, f, r.grid.get(e, f));
                }
            }
        }
        out
    }

    /// Long-format aggregate for plotting tools.
    pub fn plot_data_csv(&self) -> String {
        let mut out = String::from("model,efficiency,fairness,mean,min,max\n");
        for e in EfficiencyLevel::ALL {
            for f in FairnessLevel::ALL {
                let s = &self.aggregate[e.index()][f.index()];
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    self.config.model.name(),
                    e,
                    f,
                    s.mean,
                    s.min,
                    s.max
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cells = |f: &dyn Fn(EfficiencyLevel, FairnessLevel) -> Value| -> Value {
            let mut obj = serde_json::Map::new();
            for e in EfficiencyLevel::ALL {
                let mut row = serde_json::Map::new();
                for fl in FairnessLevel::ALL {
                    row.insert(fl.name().to_string(), f(e, fl));
                }
                obj.insert(e.name().to_string(), Value::Object(row));
            }
            Value::Object(obj)
        };
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|r| {
                json!({
                    "instance_id": r.instance_id,
                    "seed": r.seed,
                    "weights": r.weights,
                    "total": r.grid.total(),
                    "grid": cells(&|e, f| json!(r.grid.get(e, f))),
                })
            })
            .collect();
        json!({
            "config": serde_json::to_value(&self.config).expect("serializable config"),
            "num_instances": self.instances.len(),
            "total": self.total(),
            "instances": instances,
            "aggregate": cells(&|e, f| {
                let s = &self.aggregate[e.index()][f.index()];
                json!({"mean": s.mean, "min": s.min, "max": s.max})
            }),
        })
    }
}
