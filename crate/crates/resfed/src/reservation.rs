//! Reservation systems for DAG tasks.
//!
//! A DAG task with work `C`, critical-path length `L`, deadline `D` and
//! period `T` is served by `m` sequential reservation servers, each a
//! sporadic task `(E_j, D, T)`. The job released together with the DAG job is
//! guaranteed to complete by its deadline whenever
//!
//! * every server job itself meets the deadline, and
//! * `C + L·(m-1) ≤ Σ E_j` (the reservation condition).
//!
//! The transforms in this module construct such systems: `r_min_transform`
//! uses the fewest servers that any equal-budget design permits, and
//! `r_equal_transform` trades server count against a uniform per-server
//! inflation cap γ. Both leave light tasks (those that fit sequentially)
//! untouched as a single full-budget server.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dag_model::{DagTask, TaskSet};
use crate::time::{ceil_u64, Gamma, Period, Rat, TimeValue};

/// One sequential reservation server: a sporadic task `(E, D, T)` whose
/// budget serves exactly one DAG task.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservationServer {
    pub task: String,
    pub index: u32,
    pub budget: TimeValue,
    pub deadline: TimeValue,
    pub period: Period,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskClass {
    Light,
    Heavy,
}

impl fmt::Display for TaskClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskClass::Light => write!(f, "light"),
            TaskClass::Heavy => write!(f, "heavy"),
        }
    }
}

/// All servers assigned to one DAG task, plus the bookkeeping needed to
/// audit the design: the served task's `C` and `L`, the per-server ratios
/// γ_j = E_j / L and the cumulative budget C' = Σ E_j.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservationSystem {
    pub task: String,
    pub class: TaskClass,
    /// Work C of the served task.
    pub work: TimeValue,
    /// Critical-path length L of the served task.
    pub critical_path: TimeValue,
    pub servers: Vec<ReservationServer>,
}

impl ReservationSystem {
    /// Builds a system with the given budgets without enforcing the
    /// reservation condition; used for hand-crafted and deliberately
    /// under-budgeted systems. The class is `Light` exactly when a single
    /// server carries the full work.
    pub fn custom(task: &DagTask, budgets: Vec<TimeValue>) -> ReservationSystem {
        assert!(!budgets.is_empty(), "a system needs at least one server");
        let class = if budgets.len() == 1 && budgets[0] == task.work {
            TaskClass::Light
        } else {
            TaskClass::Heavy
        };
        ReservationSystem {
            task: task.id.clone(),
            class,
            work: task.work.clone(),
            critical_path: task.critical_path.clone(),
            servers: budgets
                .into_iter()
                .enumerate()
                .map(|(j, budget)| ReservationServer {
                    task: task.id.clone(),
                    index: j as u32,
                    budget,
                    deadline: task.deadline.clone(),
                    period: task.period.clone(),
                })
                .collect(),
        }
    }

    pub fn server_count(&self) -> usize {
        self.servers.len()
    }

    pub fn deadline(&self) -> &TimeValue {
        &self.servers[0].deadline
    }

    pub fn period(&self) -> &Period {
        &self.servers[0].period
    }

    pub fn budgets(&self) -> Vec<TimeValue> {
        self.servers.iter().map(|s| s.budget.clone()).collect()
    }

    /// Cumulative budget C' = Σ E_j.
    pub fn cumulative_budget(&self) -> TimeValue {
        self.servers.iter().map(|s| &s.budget).sum()
    }

    /// Per-server ratios γ_j = E_j / L.
    pub fn gammas(&self) -> Vec<Rat> {
        self.servers
            .iter()
            .map(|s| &s.budget / &self.critical_path)
            .collect()
    }

    /// C' / C, the price of the transformation.
    pub fn inflation_ratio(&self) -> Rat {
        &self.cumulative_budget() / &self.work
    }

    /// Evaluates the reservation condition for this system's budgets.
    pub fn reservation_condition(&self) -> (bool, Rat) {
        check_reservation_condition(&self.work, &self.critical_path, &self.budgets())
    }
}

/// Systems for every task of a set, in task order.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedTaskSet {
    pub systems: Vec<ReservationSystem>,
}

impl TransformedTaskSet {
    /// Flat list of all servers across systems, in system order.
    pub fn servers(&self) -> Vec<ReservationServer> {
        self.systems
            .iter()
            .flat_map(|s| s.servers.iter().cloned())
            .collect()
    }

    pub fn system(&self, task: &str) -> Option<&ReservationSystem> {
        self.systems.iter().find(|s| s.task == task)
    }
}

// ---------------------------------------------------------------------------
// Errors

/// Per-task transformation failure.
#[derive(Debug, Clone, thiserror::Error)]
pub enum InfeasibleReason {
    #[error(
        "gang-infeasible: L = D leaves no room for parallel slack, so budgets within the \
         deadline cannot cover C > L"
    )]
    CriticalPathEqualsDeadline,
    #[error("critical path exceeds the deadline (L > D); no reservation design can help")]
    CriticalPathExceedsDeadline,
    #[error("deadline too tight for gamma: gamma * L = {gamma_l} exceeds D = {deadline}")]
    DeadlineTooTightForGamma {
        gamma_l: String,
        deadline: TimeValue,
    },
}

#[derive(Debug, Clone)]
pub struct TaskFailure {
    pub task: String,
    pub reason: InfeasibleReason,
}

impl fmt::Display for TaskFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "task {}: {}", self.task, self.reason)
    }
}

/// One or more tasks could not be transformed.
#[derive(Debug, Clone, thiserror::Error)]
pub struct TransformError {
    pub failures: Vec<TaskFailure>,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} task(s) cannot be served:", self.failures.len())?;
        for failure in &self.failures {
            writeln!(f, "  {failure}")?;
        }
        Ok(())
    }
}

/// Errors from the budget-design helper operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ReservationError {
    #[error("no usable reservation: every budget is below the critical-path length")]
    AllPruned,
    #[error("requires C > L (got C = {work}, L = {critical_path})")]
    NotParallel {
        work: TimeValue,
        critical_path: TimeValue,
    },
    #[error("requires L < D (got L = {critical_path}, D = {deadline})")]
    PathMeetsDeadline {
        critical_path: TimeValue,
        deadline: TimeValue,
    },
    #[error("{0} servers are below the minimum of {1}")]
    BelowMinimumServers(u64, u64),
    #[error(
        "infeasible split: cumulative budget {cumulative} does not fit {m} budgets in ({low}, {high}]"
    )]
    InfeasibleSplit {
        cumulative: TimeValue,
        m: u64,
        low: TimeValue,
        high: TimeValue,
    },
    #[error("weights must be non-negative and sum to exactly 1")]
    BadWeights,
    #[error("weight vector length {0} does not match server count {1}")]
    WeightCount(usize, u64),
}

// ---------------------------------------------------------------------------
// Operations

/// `Σ E_j - (C + L·(m-1))`: non-negative slack means the condition holds.
pub fn check_reservation_condition(
    work: &TimeValue,
    critical_path: &TimeValue,
    budgets: &[TimeValue],
) -> (bool, Rat) {
    assert!(!budgets.is_empty(), "budgets must be non-empty");
    let m = budgets.len() as u64;
    let total: TimeValue = budgets.iter().sum();
    let need = work.rat() + critical_path.rat() * BigInt::from(m - 1);
    let slack = total.rat() - need;
    (!slack.is_negative(), slack)
}

/// Drops every budget below `L`. Each removal strictly increases the
/// reservation-condition slack, so this is the canonical pre-pass before
/// condition checks. Errors out if nothing survives.
pub fn prune_small_reservations(
    _work: &TimeValue,
    critical_path: &TimeValue,
    budgets: &[TimeValue],
) -> Result<Vec<TimeValue>, ReservationError> {
    let kept: Vec<TimeValue> = budgets
        .iter()
        .filter(|b| *b >= critical_path)
        .cloned()
        .collect();
    if kept.is_empty() {
        Err(ReservationError::AllPruned)
    } else {
        Ok(kept)
    }
}

/// Minimum number of equal-budget servers for a heavy task, together with
/// the smallest ratio γ that attains it: `m = ⌈(C-L)/(D-L)⌉` and
/// `γ = 1 + (C-L)/(m·L)`.
pub fn min_equal_servers(
    work: &TimeValue,
    critical_path: &TimeValue,
    deadline: &TimeValue,
) -> Result<(u64, Rat), ReservationError> {
    if work <= critical_path {
        return Err(ReservationError::NotParallel {
            work: work.clone(),
            critical_path: critical_path.clone(),
        });
    }
    if critical_path >= deadline {
        return Err(ReservationError::PathMeetsDeadline {
            critical_path: critical_path.clone(),
            deadline: deadline.clone(),
        });
    }
    let surplus = work.signed_sub(critical_path);
    let room = deadline.signed_sub(critical_path);
    let m = ceil_u64(&(&surplus / &room)).expect("server count fits u64").max(1);
    let gamma = Rat::from_integer(1.into())
        + &surplus / (critical_path.rat() * BigInt::from(m));
    Ok((m, gamma))
}

/// Equal budget for a fixed server count `m` at or above the minimum:
/// `E(m) = L + (C-L)/m`, strictly decreasing in `m`.
pub fn budgets_for_server_count(
    work: &TimeValue,
    critical_path: &TimeValue,
    deadline: &TimeValue,
    m: u64,
) -> Result<TimeValue, ReservationError> {
    if critical_path >= deadline {
        return Err(ReservationError::PathMeetsDeadline {
            critical_path: critical_path.clone(),
            deadline: deadline.clone(),
        });
    }
    let surplus = work.signed_sub(critical_path);
    let room = deadline.signed_sub(critical_path);
    let minimum = ceil_u64(&(&surplus / &room)).expect("fits u64").max(1);
    if m < minimum {
        return Err(ReservationError::BelowMinimumServers(m, minimum));
    }
    let budget = critical_path.rat() + surplus / BigInt::from(m);
    let budget = TimeValue::try_from_rat(budget).expect("C >= L makes this non-negative");
    debug_assert!(&budget <= deadline);
    Ok(budget)
}

/// Splits the cumulative budget `C + (m-1)·L` over `m` servers according to
/// a weight vector, then deterministically repairs box violations: weights
/// are projected onto the sum by scaling, clamped into `[L, D]` with the
/// excess redistributed equally, and finally nudged off the open lower bound.
pub fn split_cumulative_budget(
    work: &TimeValue,
    critical_path: &TimeValue,
    deadline: &TimeValue,
    m: u64,
    weights: &[Rat],
) -> Result<Vec<TimeValue>, ReservationError> {
    if m < 2 {
        return Err(ReservationError::BelowMinimumServers(m, 2));
    }
    if weights.len() != m as usize {
        return Err(ReservationError::WeightCount(weights.len(), m));
    }
    let one = Rat::from_integer(1.into());
    let sum: Rat = weights.iter().cloned().fold(Rat::zero(), |a, b| a + b);
    if weights.iter().any(|w| w.is_negative()) || sum != one {
        return Err(ReservationError::BadWeights);
    }
    let low = critical_path.rat();
    let high = deadline.rat();
    let cumulative = work.rat() + low * BigInt::from(m - 1);
    let m_big = BigInt::from(m);
    if &cumulative > &(high * &m_big) || &cumulative <= &(low * &m_big) {
        return Err(ReservationError::InfeasibleSplit {
            cumulative: TimeValue::try_from_rat(cumulative).expect("non-negative"),
            m,
            low: critical_path.clone(),
            high: deadline.clone(),
        });
    }

    let mut budgets: Vec<Rat> = weights.iter().map(|w| w * &cumulative).collect();
    // Clamp into [L, D] and redistribute the imbalance equally among the
    // coordinates with remaining room; each round pins at least one
    // coordinate at a bound, so this terminates within m rounds.
    loop {
        for b in budgets.iter_mut() {
            if &*b > high {
                *b = high.clone();
            } else if &*b < low {
                *b = low.clone();
            }
        }
        let total: Rat = budgets.iter().cloned().fold(Rat::zero(), |a, b| a + b);
        let diff = &cumulative - &total;
        if diff.is_zero() {
            break;
        }
        let receivers: Vec<usize> = if diff.is_positive() {
            (0..budgets.len()).filter(|&j| &budgets[j] < high).collect()
        } else {
            (0..budgets.len()).filter(|&j| &budgets[j] > low).collect()
        };
        debug_assert!(!receivers.is_empty(), "feasibility was checked up front");
        let share = &diff / BigInt::from(receivers.len());
        for j in receivers {
            budgets[j] += &share;
        }
    }
    // The box is open at L: shift a strictly-positive sliver from a donor
    // above L to any coordinate stuck exactly at it.
    for j in 0..budgets.len() {
        if &budgets[j] == low {
            let donor = (0..budgets.len())
                .find(|&k| &budgets[k] > low)
                .expect("cumulative budget strictly exceeds m*L");
            let room = high - low;
            let delta = ((&budgets[donor] - low) / BigInt::from(2)).min(room);
            budgets[j] += &delta;
            budgets[donor] -= &delta;
        }
    }
    debug_assert_eq!(
        budgets.iter().cloned().fold(Rat::zero(), |a, b| a + b),
        cumulative
    );
    Ok(budgets
        .into_iter()
        .map(|b| TimeValue::try_from_rat(b).expect("clamped to [L, D]"))
        .collect())
}

/// Classifies by `C > min(T, D)` and serves every heavy task with the
/// minimum number of equal budgets: `m = ⌈(C-L)/(D-L)⌉`, `E = L + (C-L)/m`.
/// Light tasks pass through as one server with `E = C`.
pub fn r_min_transform(ts: &TaskSet) -> Result<TransformedTaskSet, TransformError> {
    let mut systems = Vec::with_capacity(ts.tasks.len());
    let mut failures = Vec::new();
    for task in &ts.tasks {
        if task.work <= task.min_deadline_period() {
            systems.push(ReservationSystem::custom(task, vec![task.work.clone()]));
            continue;
        }
        if task.critical_path > task.deadline {
            failures.push(TaskFailure {
                task: task.id.clone(),
                reason: InfeasibleReason::CriticalPathExceedsDeadline,
            });
            continue;
        }
        if task.critical_path == task.deadline {
            failures.push(TaskFailure {
                task: task.id.clone(),
                reason: InfeasibleReason::CriticalPathEqualsDeadline,
            });
            continue;
        }
        let surplus = task.work.signed_sub(&task.critical_path);
        let room = task.deadline.signed_sub(&task.critical_path);
        let m = ceil_u64(&(&surplus / &room)).expect("fits u64").max(1);
        let budget = TimeValue::try_from_rat(
            task.critical_path.rat() + &surplus / BigInt::from(m),
        )
        .expect("non-negative");
        let mut system =
            ReservationSystem::custom(task, std::iter::repeat(budget).take(m as usize).collect());
        system.class = TaskClass::Heavy;
        debug_assert!(system.reservation_condition().0);
        systems.push(system);
    }
    if failures.is_empty() {
        Ok(TransformedTaskSet { systems })
    } else {
        Err(TransformError { failures })
    }
}

/// Classifies by `C > γ·L` and serves every heavy task with
/// `m = ⌈(C-L)/(L·(γ-1))⌉` equal budgets `E = (C + (m-1)·L)/m`. Light tasks
/// pass through unchanged, even when `C > D` (they are simply reported
/// unschedulable downstream). Heavy tasks require `γ·L ≤ D`.
pub fn r_equal_transform(
    ts: &TaskSet,
    gamma: &Gamma,
) -> Result<TransformedTaskSet, TransformError> {
    let mut systems = Vec::with_capacity(ts.tasks.len());
    let mut failures = Vec::new();
    for task in &ts.tasks {
        let heavy = gamma.scaled_below(&task.critical_path, &task.work);
        if !heavy {
            systems.push(ReservationSystem::custom(task, vec![task.work.clone()]));
            continue;
        }
        if !gamma.scaled_at_most(&task.critical_path, &task.deadline) {
            failures.push(TaskFailure {
                task: task.id.clone(),
                reason: InfeasibleReason::DeadlineTooTightForGamma {
                    gamma_l: format!(
                        "~{:.4}",
                        gamma.to_f64() * task.critical_path.to_f64()
                    ),
                    deadline: task.deadline.clone(),
                },
            });
            continue;
        }
        let surplus = task.work.signed_sub(&task.critical_path);
        let m = gamma.ceil_div_scaled_excess(&surplus, &task.critical_path);
        debug_assert!(m >= 2, "heavy classification implies at least two servers");
        let budget = TimeValue::try_from_rat(
            (task.work.rat() + task.critical_path.rat() * BigInt::from(m - 1))
                / BigInt::from(m),
        )
        .expect("non-negative");
        let mut system =
            ReservationSystem::custom(task, std::iter::repeat(budget).take(m as usize).collect());
        system.class = TaskClass::Heavy;
        debug_assert!(system.reservation_condition().0);
        systems.push(system);
    }
    if failures.is_empty() {
        Ok(TransformedTaskSet { systems })
    } else {
        Err(TransformError { failures })
    }
}

// ---------------------------------------------------------------------------
// JSON wire format: {"systems":[{"task","class","gamma","servers":[{"E","D","T"}]}]}

#[derive(Serialize, Deserialize)]
struct TransformedWire {
    systems: Vec<SystemWire>,
}

#[derive(Serialize, Deserialize)]
struct SystemWire {
    task: String,
    class: String,
    gamma: GammaWire,
    servers: Vec<ServerWire>,
}

/// A single ratio when all servers share it, a list otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GammaWire {
    Uniform(TimeValue),
    PerServer(Vec<TimeValue>),
}

#[derive(Serialize, Deserialize)]
struct ServerWire {
    #[serde(rename = "E")]
    budget: TimeValue,
    #[serde(rename = "D")]
    deadline: TimeValue,
    #[serde(rename = "T")]
    period: Period,
}

impl Serialize for TransformedTaskSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = TransformedWire {
            systems: self
                .systems
                .iter()
                .map(|sys| {
                    let gammas: Vec<TimeValue> = sys
                        .gammas()
                        .into_iter()
                        .map(|g| TimeValue::try_from_rat(g).expect("ratios are non-negative"))
                        .collect();
                    let gamma = if gammas.windows(2).all(|w| w[0] == w[1]) {
                        GammaWire::Uniform(gammas[0].clone())
                    } else {
                        GammaWire::PerServer(gammas)
                    };
                    SystemWire {
                        task: sys.task.clone(),
                        class: sys.class.to_string(),
                        gamma,
                        servers: sys
                            .servers
                            .iter()
                            .map(|s| ServerWire {
                                budget: s.budget.clone(),
                                deadline: s.deadline.clone(),
                                period: s.period.clone(),
                            })
                            .collect(),
                    }
                })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TransformedTaskSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = TransformedWire::deserialize(deserializer)?;
        let mut systems = Vec::with_capacity(wire.systems.len());
        for sys in wire.systems {
            if sys.servers.is_empty() {
                return Err(D::Error::custom(format!(
                    "system for task {} has no servers",
                    sys.task
                )));
            }
            let class = match sys.class.as_str() {
                "light" => TaskClass::Light,
                "heavy" => TaskClass::Heavy,
                other => {
                    return Err(D::Error::custom(format!(
                        "unknown class {other:?} for task {}",
                        sys.task
                    )))
                }
            };
            let gammas = match sys.gamma {
                GammaWire::Uniform(g) => vec![g; sys.servers.len()],
                GammaWire::PerServer(gs) => {
                    if gs.len() != sys.servers.len() {
                        return Err(D::Error::custom(format!(
                            "gamma list length mismatch for task {}",
                            sys.task
                        )));
                    }
                    gs
                }
            };
            if gammas[0].is_zero() {
                return Err(D::Error::custom(format!(
                    "gamma must be positive for task {}",
                    sys.task
                )));
            }
            // Reconstruct L = E_1 / gamma_1 and C = C' - (m-1)·L.
            let critical_path = TimeValue::try_from_rat(
                sys.servers[0].budget.rat() / gammas[0].rat(),
            )
            .expect("positive");
            let m = sys.servers.len() as u64;
            let cumulative: TimeValue = sys.servers.iter().map(|s| &s.budget).sum();
            let work_rat =
                cumulative.rat() - critical_path.rat() * BigInt::from(m - 1);
            let work = TimeValue::try_from_rat(work_rat).map_err(|_| {
                D::Error::custom(format!(
                    "inconsistent budgets/gamma for task {}: derived work is negative",
                    sys.task
                ))
            })?;
            let servers: Vec<ReservationServer> = sys
                .servers
                .into_iter()
                .enumerate()
                .map(|(j, s)| ReservationServer {
                    task: sys.task.clone(),
                    index: j as u32,
                    budget: s.budget,
                    deadline: s.deadline,
                    period: s.period,
                })
                .collect();
            if servers
                .windows(2)
                .any(|w| w[0].deadline != w[1].deadline || w[0].period != w[1].period)
            {
                return Err(D::Error::custom(format!(
                    "servers of task {} disagree on deadline or period",
                    sys.task
                )));
            }
            systems.push(ReservationSystem {
                task: sys.task,
                class,
                work,
                critical_path,
                servers,
            });
        }
        Ok(TransformedTaskSet { systems })
    }
}

/// Serializes to the transformed-set JSON schema.
pub fn transformed_to_json(t: &TransformedTaskSet) -> String {
    serde_json::to_string_pretty(t).expect("serialization cannot fail")
}

/// Parses the transformed-set JSON schema.
pub fn transformed_from_json(json: &str) -> Result<TransformedTaskSet, String> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de)
        .map_err(|e| format!("at {}: {}", e.path(), e.inner()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag_model::DagTask;
    use crate::time::rat;

    fn tv(n: u64) -> TimeValue {
        TimeValue::from_integer(n)
    }

    fn task(id: &str, c: TimeValue, l: TimeValue, d: TimeValue, t: Period) -> DagTask {
        DagTask::abstract_task(id, c, l, d, t).unwrap()
    }

    fn fin(n: u64) -> Period {
        Period::Finite(tv(n))
    }

    #[test]
    fn condition_holds_with_zero_slack_on_tight_pairs() {
        let (ok, slack) = check_reservation_condition(
            &tv(10),
            &tv(5),
            &[TimeValue::new(15, 2), TimeValue::new(15, 2)],
        );
        assert!(ok);
        assert!(slack.is_zero());

        // m = 1 degenerates to E >= C.
        let (ok, slack) = check_reservation_condition(&tv(5), &tv(5), &[tv(5)]);
        assert!(ok);
        assert!(slack.is_zero());

        let (ok, slack) = check_reservation_condition(&tv(8), &tv(5), &[tv(6), tv(7)]);
        assert!(ok);
        assert!(slack.is_zero());
    }

    #[test]
    fn condition_fails_when_underbudgeted() {
        let (ok, slack) = check_reservation_condition(&tv(10), &tv(5), &[tv(7), tv(7)]);
        assert!(!ok);
        assert_eq!(slack, rat(-1, 1));
    }

    #[test]
    fn pruning_small_budgets_increases_slack() {
        let budgets = vec![TimeValue::new(15, 2), TimeValue::new(15, 2), tv(4)];
        let (_, before) = check_reservation_condition(&tv(10), &tv(5), &budgets);
        assert_eq!(before, rat(-4, 1));
        let kept = prune_small_reservations(&tv(10), &tv(5), &budgets).unwrap();
        assert_eq!(kept.len(), 2);
        let (ok, after) = check_reservation_condition(&tv(10), &tv(5), &kept);
        assert!(ok);
        assert!(after.is_zero());
        assert!(after > before);
    }

    #[test]
    fn pruning_keeps_everything_at_or_above_l() {
        let budgets = vec![TimeValue::new(15, 2), TimeValue::new(15, 2)];
        let kept = prune_small_reservations(&tv(10), &tv(5), &budgets).unwrap();
        assert_eq!(kept, budgets);
    }

    #[test]
    fn pruning_everything_is_an_error() {
        let err = prune_small_reservations(&tv(10), &tv(5), &[tv(4), tv(4)]).unwrap_err();
        assert!(matches!(err, ReservationError::AllPruned));
    }

    #[test]
    fn r_min_on_constrained_heavy_task() {
        let ts = TaskSet::new(vec![task("a", tv(10), tv(5), tv(9), fin(12))], 2).unwrap();
        let out = r_min_transform(&ts).unwrap();
        let sys = &out.systems[0];
        assert_eq!(sys.class, TaskClass::Heavy);
        assert_eq!(sys.server_count(), 2);
        assert_eq!(sys.servers[0].budget, TimeValue::new(15, 2));
        assert_eq!(sys.servers[1].budget, TimeValue::new(15, 2));
        let (ok, slack) = sys.reservation_condition();
        assert!(ok && slack.is_zero());
    }

    #[test]
    fn r_min_on_implicit_deadline_task() {
        let ts = TaskSet::new(vec![task("a", tv(8), tv(5), tv(7), fin(7))], 2).unwrap();
        let out = r_min_transform(&ts).unwrap();
        let sys = &out.systems[0];
        assert_eq!(sys.server_count(), 2);
        assert_eq!(sys.servers[0].budget, TimeValue::new(13, 2));
        assert_eq!(sys.cumulative_budget(), tv(13));
    }

    #[test]
    fn r_min_passes_light_tasks_through() {
        let ts = TaskSet::new(vec![task("a", tv(5), tv(3), tv(7), fin(10))], 1).unwrap();
        let out = r_min_transform(&ts).unwrap();
        let sys = &out.systems[0];
        assert_eq!(sys.class, TaskClass::Light);
        assert_eq!(sys.server_count(), 1);
        assert_eq!(sys.servers[0].budget, tv(5));
    }

    #[test]
    fn r_min_rejects_l_equals_d_heavy_tasks() {
        let ts = TaskSet::new(vec![task("a", tv(10), tv(1), tv(1), Period::Infinite)], 1).unwrap();
        let err = r_min_transform(&ts).unwrap_err();
        assert_eq!(err.failures.len(), 1);
        assert_eq!(err.failures[0].task, "a");
        assert!(matches!(
            err.failures[0].reason,
            InfeasibleReason::CriticalPathEqualsDeadline
        ));
        assert!(err.to_string().contains("gang-infeasible"));
    }

    #[test]
    fn r_min_rejects_l_above_d_heavy_tasks() {
        let ts = TaskSet::new(vec![task("a", tv(10), tv(5), tv(4), fin(100))], 1).unwrap();
        // C=10 > min(T,D)=4, L=5 > D=4.
        let err = r_min_transform(&ts).unwrap_err();
        assert!(matches!(
            err.failures[0].reason,
            InfeasibleReason::CriticalPathExceedsDeadline
        ));
    }

    #[test]
    fn r_equal_with_irrational_gamma() {
        let g = Gamma::one_plus_sqrt2();
        let ts = TaskSet::new(vec![task("a", tv(10), tv(2), tv(9), fin(12))], 4).unwrap();
        let out = r_equal_transform(&ts, &g).unwrap();
        let sys = &out.systems[0];
        assert_eq!(sys.class, TaskClass::Heavy);
        assert_eq!(sys.server_count(), 3);
        assert_eq!(sys.servers[0].budget, TimeValue::new(14, 3));
        // E <= gamma * L and the inflation bound hold exactly.
        let e = &sys.servers[0].budget;
        assert!(!g.scaled_below(&sys.critical_path, e), "E must be <= gamma*L");
        assert!(g.inflation_bound_holds(&sys.cumulative_budget(), &sys.work));
    }

    #[test]
    fn r_equal_boundary_is_light() {
        let g = Gamma::from_rat(rat(2, 1)).unwrap();
        let ts = TaskSet::new(vec![task("a", tv(4), tv(2), tv(10), fin(10))], 1).unwrap();
        let out = r_equal_transform(&ts, &g).unwrap();
        assert_eq!(out.systems[0].class, TaskClass::Light);
        assert_eq!(out.systems[0].servers[0].budget, tv(4));
    }

    #[test]
    fn r_equal_light_task_may_exceed_deadline() {
        // C = 10 <= gamma*L ~ 12.07 makes it light; E = C = 10 > D = 9 is
        // allowed here and flagged unschedulable downstream.
        let g = Gamma::one_plus_sqrt2();
        let ts = TaskSet::new(vec![task("a", tv(10), tv(5), tv(9), fin(12))], 2).unwrap();
        let out = r_equal_transform(&ts, &g).unwrap();
        assert_eq!(out.systems[0].class, TaskClass::Light);
        assert_eq!(out.systems[0].servers[0].budget, tv(10));
    }

    #[test]
    fn r_equal_rejects_tight_deadlines_for_heavy_tasks() {
        let g = Gamma::one_plus_sqrt2();
        // Heavy: C = 20 > gamma*5 ~ 12.07, but gamma*L ~ 12.07 > D = 10.
        let ts = TaskSet::new(vec![task("a", tv(20), tv(5), tv(10), fin(30))], 4).unwrap();
        let err = r_equal_transform(&ts, &g).unwrap_err();
        assert!(matches!(
            err.failures[0].reason,
            InfeasibleReason::DeadlineTooTightForGamma { .. }
        ));
    }

    #[test]
    fn min_equal_servers_matches_known_cases() {
        let (m, g) = min_equal_servers(&tv(8), &tv(5), &tv(7)).unwrap();
        assert_eq!(m, 2);
        assert_eq!(g, rat(13, 10));
        let (m, g) = min_equal_servers(&tv(10), &tv(5), &tv(9)).unwrap();
        assert_eq!(m, 2);
        assert_eq!(g, rat(3, 2));
        // Barely parallel task needs a single server.
        let (m, _) = min_equal_servers(&TimeValue::new(51, 10), &tv(5), &tv(8)).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn min_equal_servers_requires_room() {
        assert!(matches!(
            min_equal_servers(&tv(8), &tv(5), &tv(5)),
            Err(ReservationError::PathMeetsDeadline { .. })
        ));
        assert!(matches!(
            min_equal_servers(&tv(5), &tv(5), &tv(7)),
            Err(ReservationError::NotParallel { .. })
        ));
    }

    #[test]
    fn budgets_for_server_count_formula() {
        assert_eq!(
            budgets_for_server_count(&tv(8), &tv(5), &tv(7), 2).unwrap(),
            TimeValue::new(13, 2)
        );
        assert_eq!(
            budgets_for_server_count(&tv(8), &tv(5), &tv(7), 3).unwrap(),
            tv(6)
        );
        assert_eq!(
            budgets_for_server_count(&tv(8), &tv(5), &tv(7), 4).unwrap(),
            TimeValue::new(23, 4)
        );
        assert!(matches!(
            budgets_for_server_count(&tv(8), &tv(5), &tv(7), 1),
            Err(ReservationError::BelowMinimumServers(1, 2))
        ));
    }

    #[test]
    fn budgets_decrease_toward_critical_path() {
        let mut last = tv(100);
        for m in 2..40 {
            let e = budgets_for_server_count(&tv(8), &tv(5), &tv(7), m).unwrap();
            assert!(e < last);
            assert!(e > tv(5));
            last = e;
        }
    }

    #[test]
    fn split_reproduces_endpoint_budgets() {
        let budgets =
            split_cumulative_budget(&tv(8), &tv(5), &tv(7), 2, &[rat(6, 13), rat(7, 13)]).unwrap();
        assert_eq!(budgets, vec![tv(6), tv(7)]);
    }

    #[test]
    fn split_with_equal_weights_matches_equal_budgets() {
        let budgets =
            split_cumulative_budget(&tv(8), &tv(5), &tv(7), 2, &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(budgets, vec![TimeValue::new(13, 2), TimeValue::new(13, 2)]);
    }

    #[test]
    fn split_clamps_extreme_weights_into_the_box() {
        let budgets =
            split_cumulative_budget(&tv(8), &tv(5), &tv(7), 2, &[rat(9, 10), rat(1, 10)]).unwrap();
        let total: TimeValue = budgets.iter().sum();
        assert_eq!(total, tv(13));
        for b in &budgets {
            assert!(b > &tv(5) && b <= &tv(7), "budget {b} outside (5, 7]");
        }
        assert_eq!(budgets, vec![tv(7), tv(6)]);
    }

    #[test]
    fn split_rejects_infeasible_cumulative_budgets() {
        // m = 2 but the task needs at least 3 servers: B = C + L > 2D.
        let err = split_cumulative_budget(&tv(12), &tv(5), &tv(7), 2, &[rat(1, 2), rat(1, 2)])
            .unwrap_err();
        assert!(matches!(err, ReservationError::InfeasibleSplit { .. }));
        // C = L gives B = m*L exactly, also infeasible (open bound).
        let err = split_cumulative_budget(&tv(5), &tv(5), &tv(7), 2, &[rat(1, 2), rat(1, 2)])
            .unwrap_err();
        assert!(matches!(err, ReservationError::InfeasibleSplit { .. }));
    }

    #[test]
    fn split_validates_weights() {
        assert!(matches!(
            split_cumulative_budget(&tv(8), &tv(5), &tv(7), 2, &[rat(1, 2)]),
            Err(ReservationError::WeightCount(1, 2))
        ));
        assert!(matches!(
            split_cumulative_budget(&tv(8), &tv(5), &tv(7), 2, &[rat(3, 4), rat(1, 2)]),
            Err(ReservationError::BadWeights)
        ));
    }

    #[test]
    fn transforms_are_deterministic() {
        let ts = TaskSet::new(
            vec![
                task("a", tv(10), tv(5), tv(9), fin(12)),
                task("b", tv(5), tv(3), tv(7), fin(10)),
            ],
            4,
        )
        .unwrap();
        assert_eq!(r_min_transform(&ts).unwrap(), r_min_transform(&ts).unwrap());
        let g = Gamma::one_plus_sqrt2();
        assert_eq!(
            r_equal_transform(&ts, &g).unwrap(),
            r_equal_transform(&ts, &g).unwrap()
        );
    }

    #[test]
    fn transformed_json_round_trip() {
        let ts = TaskSet::new(
            vec![
                task("a", tv(10), tv(5), tv(9), fin(12)),
                task("b", tv(5), tv(3), tv(7), Period::Infinite),
            ],
            4,
        )
        .unwrap();
        let out = r_min_transform(&ts).unwrap();
        let json = transformed_to_json(&out);
        let back = transformed_from_json(&json).unwrap();
        assert_eq!(out, back);
        assert!(json.contains("\"class\": \"heavy\""));
    }
}
