//! Random task-set generation.
//!
//! Utilizations are drawn UUniFast-style over the simplex and snapped to
//! exact rationals in a way that keeps the total utilization equal to the
//! requested budget, not merely close to it: the cumulative remainders are
//! rationalized and differenced, so the sum telescopes exactly. Structures
//! are layered random DAGs (edges only point to later layers), which are
//! acyclic by construction.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DagStructure, DagTask, Subtask, TaskSet};
use crate::time::{Period, Rat, TimeValue};

/// Parameters for [`generate_task_set`].
#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub processors: u32,
    pub tasks: usize,
    /// Total utilization budget Σ C_i / T_i, distributed over the tasks.
    pub total_utilization: Rat,
    /// Per-task utilization cap; samples violating it are discarded.
    pub max_task_utilization: Rat,
    /// Range for the deadline-to-period ratio D/T (inclusive bounds).
    pub dt_ratio: (Rat, Rat),
    /// Periods are drawn log-uniformly from this integer range.
    pub period_range: (u64, u64),
    /// Subtask count per task (inclusive bounds).
    pub nodes: (u32, u32),
    /// Number of layers in the generated DAG (inclusive bounds, clamped to
    /// the node count).
    pub layers: (u32, u32),
    /// Probability of an edge between nodes of different layers.
    pub edge_prob: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            processors: 4,
            tasks: 8,
            total_utilization: Rat::from_integer(2.into()),
            max_task_utilization: Rat::from_integer(1.into()),
            dt_ratio: (Rat::new(1.into(), 2.into()), Rat::from_integer(1.into())),
            period_range: (10, 1000),
            nodes: (5, 30),
            layers: (2, 6),
            edge_prob: 0.2,
        }
    }
}

/// Configuration that cannot produce a valid task set.
#[derive(Debug, Clone, thiserror::Error)]
pub enum GenerateError {
    #[error("task count must be at least 1")]
    NoTasks,
    #[error("total utilization must be positive")]
    NonPositiveUtilization,
    #[error(
        "utilization budget {budget} cannot be split over {tasks} tasks with per-task cap {cap}"
    )]
    BudgetInfeasible { budget: f64, tasks: usize, cap: f64 },
    #[error("invalid range for {what}")]
    BadRange { what: &'static str },
    #[error("edge probability must lie in [0, 1]")]
    BadEdgeProbability,
    #[error("gave up after {attempts} sampling attempts; relax the configuration")]
    AttemptsExhausted { attempts: u32 },
}

const MAX_ATTEMPTS: u32 = 1000;
/// Denominator used when snapping sampled reals to rationals.
const SNAP_DEN: u64 = 1_000_000_000_000;

fn validate(config: &GeneratorConfig) -> Result<(), GenerateError> {
    if config.tasks == 0 {
        return Err(GenerateError::NoTasks);
    }
    if !config.total_utilization.is_positive() {
        return Err(GenerateError::NonPositiveUtilization);
    }
    let cap_total = &config.max_task_utilization * BigInt::from(config.tasks);
    if config.total_utilization > cap_total {
        return Err(GenerateError::BudgetInfeasible {
            budget: config.total_utilization.to_f64().unwrap_or(f64::NAN),
            tasks: config.tasks,
            cap: config.max_task_utilization.to_f64().unwrap_or(f64::NAN),
        });
    }
    if config.dt_ratio.0 > config.dt_ratio.1 || !config.dt_ratio.0.is_positive() {
        return Err(GenerateError::BadRange { what: "dt_ratio" });
    }
    if config.period_range.0 == 0 || config.period_range.0 > config.period_range.1 {
        return Err(GenerateError::BadRange { what: "period_range" });
    }
    if config.nodes.0 == 0 || config.nodes.0 > config.nodes.1 {
        return Err(GenerateError::BadRange { what: "nodes" });
    }
    if config.layers.0 == 0 || config.layers.0 > config.layers.1 {
        return Err(GenerateError::BadRange { what: "layers" });
    }
    if !(0.0..=1.0).contains(&config.edge_prob) {
        return Err(GenerateError::BadEdgeProbability);
    }
    Ok(())
}

/// Deterministically generates a task set from `(config, seed)`.
pub fn generate_task_set(config: &GeneratorConfig, seed: u64) -> Result<TaskSet, GenerateError> {
    validate(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let utils = sample_utilizations(config, &mut rng)?;
    let mut tasks = Vec::with_capacity(config.tasks);
    for (i, u) in utils.into_iter().enumerate() {
        let period = sample_period(config, &mut rng);
        let work = TimeValue::try_from_rat(&u * period.rat()).expect("positive");
        let ratio = sample_ratio(&config.dt_ratio, &mut rng);
        let deadline = TimeValue::try_from_rat(&ratio * period.rat()).expect("positive");
        let structure = sample_structure(config, &work, &mut rng);
        let task = DagTask::structured(
            format!("t{}", i + 1),
            structure,
            deadline,
            Period::Finite(period),
        )
        .expect("generated structure satisfies task invariants");
        debug_assert_eq!(task.work, work);
        tasks.push(task);
    }
    Ok(TaskSet {
        tasks,
        processors: config.processors,
    })
}

/// UUniFast with exact telescoping: the cumulative remainders are snapped to
/// rationals and differenced, so the utilizations sum to the budget exactly.
fn sample_utilizations(
    config: &GeneratorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Rat>, GenerateError> {
    let n = config.tasks;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(config.total_utilization.clone());
        let mut sum_f = config.total_utilization.to_f64().unwrap_or(0.0);
        for i in (1..n).rev() {
            let r: f64 = rng.random::<f64>();
            let next = sum_f * r.powf(1.0 / i as f64);
            let prev = cumulative.last().expect("non-empty").clone();
            let snapped = snap(next, &prev);
            sum_f = snapped.to_f64().unwrap_or(0.0);
            cumulative.push(snapped);
        }
        cumulative.push(Rat::zero());
        let mut utils = Vec::with_capacity(n);
        for w in cumulative.windows(2) {
            let u = &w[0] - &w[1];
            if !u.is_positive() || u > config.max_task_utilization {
                continue 'attempt;
            }
            utils.push(u);
        }
        return Ok(utils);
    }
    Err(GenerateError::AttemptsExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// Rounds `x` to a rational with denominator `SNAP_DEN`, clamped to `[0, hi]`.
fn snap(x: f64, hi: &Rat) -> Rat {
    let scaled = (x * SNAP_DEN as f64).round();
    let num = if scaled.is_finite() && scaled > 0.0 {
        BigInt::from(scaled as u128)
    } else {
        BigInt::zero()
    };
    let r = Rat::new(num, BigInt::from(SNAP_DEN));
    if &r > hi {
        hi.clone()
    } else {
        r
    }
}

fn sample_period(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> TimeValue {
    let (lo, hi) = config.period_range;
    if lo == hi {
        return TimeValue::from_integer(lo);
    }
    let x: f64 = rng.random::<f64>();
    let ln = (lo as f64).ln() + x * ((hi as f64).ln() - (lo as f64).ln());
    let p = ln.exp().round().clamp(lo as f64, hi as f64) as u64;
    TimeValue::from_integer(p)
}

fn sample_ratio(range: &(Rat, Rat), rng: &mut ChaCha8Rng) -> Rat {
    let lo = range.0.to_f64().unwrap_or(0.5);
    let hi = range.1.to_f64().unwrap_or(1.0);
    if range.0 == range.1 {
        return range.0.clone();
    }
    let x: f64 = rng.random::<f64>();
    let v = lo + x * (hi - lo);
    let snapped = Rat::new(
        BigInt::from((v * 1_000_000.0).round() as i64),
        BigInt::from(1_000_000u64),
    );
    snapped.max(range.0.clone()).min(range.1.clone())
}

/// Layered random DAG whose node weights sum to exactly `work`.
fn sample_structure(config: &GeneratorConfig, work: &TimeValue, rng: &mut ChaCha8Rng) -> DagStructure {
    let n = rng.random_range(config.nodes.0..=config.nodes.1).max(1);
    let max_layers = config.layers.1.min(n);
    let min_layers = config.layers.0.min(max_layers);
    let layers = rng.random_range(min_layers..=max_layers).max(1);

    // First `layers` nodes pin one node per layer; the rest land anywhere.
    let mut layer_of = Vec::with_capacity(n as usize);
    for i in 0..n {
        if i < layers {
            layer_of.push(i);
        } else {
            layer_of.push(rng.random_range(0..layers));
        }
    }

    // Integer weights, then scaled so the total is exactly `work`.
    let weights: Vec<u64> = (0..n).map(|_| rng.random_range(1..=100u64)).collect();
    let total: u64 = weights.iter().sum();
    let scale = work.rat() / Rat::from_integer(BigInt::from(total));
    let nodes: Vec<Subtask> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| Subtask {
            id: i as u32,
            wcet: TimeValue::try_from_rat(Rat::from_integer(BigInt::from(w)) * &scale)
                .expect("positive weight"),
        })
        .collect();

    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if layer_of[u as usize] < layer_of[v as usize] && rng.random_bool(config.edge_prob) {
                edges.push((u, v));
            }
        }
    }
    DagStructure { nodes, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::rat;

    #[test]
    fn single_task_gets_full_budget() {
        let config = GeneratorConfig {
            tasks: 1,
            total_utilization: rat(1, 2),
            ..GeneratorConfig::default()
        };
        let ts = generate_task_set(&config, 42).unwrap();
        assert_eq!(ts.tasks.len(), 1);
        assert_eq!(ts.tasks[0].utilization(), rat(1, 2));
    }

    #[test]
    fn generation_is_deterministic() {
        let config = GeneratorConfig {
            tasks: 6,
            total_utilization: rat(3, 1),
            ..GeneratorConfig::default()
        };
        let a = generate_task_set(&config, 7).unwrap();
        let b = generate_task_set(&config, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_task_set(&config, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn total_utilization_is_exact() {
        let config = GeneratorConfig {
            tasks: 20,
            total_utilization: rat(4, 1),
            ..GeneratorConfig::default()
        };
        let ts = generate_task_set(&config, 7).unwrap();
        assert_eq!(ts.total_utilization(), rat(4, 1));
    }

    #[test]
    fn unsatisfiable_budget_is_rejected() {
        let config = GeneratorConfig {
            tasks: 2,
            total_utilization: rat(5, 1),
            max_task_utilization: rat(1, 1),
            ..GeneratorConfig::default()
        };
        assert!(matches!(
            generate_task_set(&config, 1),
            Err(GenerateError::BudgetInfeasible { .. })
        ));
    }

    #[test]
    fn generated_tasks_satisfy_invariants() {
        let config = GeneratorConfig {
            tasks: 10,
            total_utilization: rat(5, 2),
            ..GeneratorConfig::default()
        };
        let ts = generate_task_set(&config, 3).unwrap();
        for t in &ts.tasks {
            assert!(t.critical_path.is_positive());
            assert!(t.work >= t.critical_path);
            let s = t.structure.as_ref().unwrap();
            assert_eq!(super::super::work(s).unwrap(), t.work);
            assert_eq!(super::super::critical_path(s).unwrap(), t.critical_path);
        }
    }
}
