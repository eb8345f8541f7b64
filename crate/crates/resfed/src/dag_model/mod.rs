//! Sporadic arbitrary-deadline DAG tasks and task sets.
//!
//! A task is described either abstractly by its total work `C` and
//! critical-path length `L`, or with an explicit subtask graph from which
//! both are derived. No ordering between relative deadline and period is
//! assumed anywhere.

mod generator;
mod io;

pub use generator::{generate_task_set, GenerateError, GeneratorConfig};
pub use io::{load_task_set, save_task_set, task_set_from_json, task_set_to_json, LoadError};

use std::collections::{BTreeMap, BTreeSet};

use crate::time::{Period, Rat, TimeValue};

/// One node of a subtask graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtask {
    pub id: u32,
    pub wcet: TimeValue,
}

/// Explicit precedence structure of a parallel task: a weighted DAG.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DagStructure {
    pub nodes: Vec<Subtask>,
    pub edges: Vec<(u32, u32)>,
}

/// Structural validation failure; lists every violation found.
#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid DAG structure: {}", violations.join("; "))]
pub struct StructureError {
    pub violations: Vec<String>,
}

impl DagStructure {
    /// Checks all structural invariants: positive node weights, edges
    /// referencing existing distinct nodes, no duplicate edges, acyclicity.
    /// On a cycle the error names one offending back edge.
    pub fn validate(&self) -> Result<(), StructureError> {
        let mut violations = Vec::new();
        let mut ids = BTreeSet::new();
        for n in &self.nodes {
            if !ids.insert(n.id) {
                violations.push(format!("duplicate node id {}", n.id));
            }
            if !n.wcet.is_positive() {
                violations.push(format!("node {} has non-positive wcet", n.id));
            }
        }
        if self.nodes.is_empty() {
            violations.push("structure has no nodes".to_string());
        }
        let mut seen_edges = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                violations.push(format!("self-loop on node {u}"));
            }
            if !ids.contains(&u) || !ids.contains(&v) {
                violations.push(format!("edge ({u}, {v}) references unknown node"));
            }
            if !seen_edges.insert((u, v)) {
                violations.push(format!("duplicate edge ({u}, {v})"));
            }
        }
        if violations.is_empty() {
            if let Err(back_edge) = self.topological_order() {
                violations.push(format!(
                    "cycle detected through back edge ({}, {})",
                    back_edge.0, back_edge.1
                ));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(StructureError { violations })
        }
    }

    /// Kahn's algorithm; on failure returns an edge inside the cyclic residue.
    fn topological_order(&self) -> Result<Vec<u32>, (u32, u32)> {
        let mut indeg: BTreeMap<u32, usize> = self.nodes.iter().map(|n| (n.id, 0)).collect();
        let mut succs: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(u, v) in &self.edges {
            *indeg.get_mut(&v).unwrap() += 1;
            succs.entry(u).or_default().push(v);
        }
        let mut queue: Vec<u32> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&id, _)| id)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(id) = queue.pop() {
            order.push(id);
            for &s in succs.get(&id).into_iter().flatten() {
                let d = indeg.get_mut(&s).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(s);
                }
            }
        }
        if order.len() == self.nodes.len() {
            Ok(order)
        } else {
            let stuck: BTreeSet<u32> = indeg
                .into_iter()
                .filter(|(_, d)| *d > 0)
                .map(|(id, _)| id)
                .collect();
            let back = self
                .edges
                .iter()
                .find(|(u, v)| stuck.contains(u) && stuck.contains(v))
                .copied()
                .expect("cyclic residue must contain an edge");
            Err(back)
        }
    }

    /// Predecessor lists keyed by node id.
    pub fn predecessors(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut preds: BTreeMap<u32, Vec<u32>> = self.nodes.iter().map(|n| (n.id, vec![])).collect();
        for &(u, v) in &self.edges {
            preds.get_mut(&v).unwrap().push(u);
        }
        preds
    }
}

/// Total work: the sum of all subtask worst-case execution times.
pub fn work(structure: &DagStructure) -> Result<TimeValue, StructureError> {
    structure.validate()?;
    Ok(structure.nodes.iter().map(|n| &n.wcet).sum())
}

/// Critical-path length: the heaviest node-weighted path through the DAG.
pub fn critical_path(structure: &DagStructure) -> Result<TimeValue, StructureError> {
    structure.validate()?;
    let order = structure
        .topological_order()
        .expect("validated structure is acyclic");
    let preds = structure.predecessors();
    let wcet: BTreeMap<u32, &TimeValue> = structure.nodes.iter().map(|n| (n.id, &n.wcet)).collect();
    let mut longest: BTreeMap<u32, TimeValue> = BTreeMap::new();
    for id in order {
        let best_pred = preds[&id]
            .iter()
            .map(|p| longest[p].clone())
            .max()
            .unwrap_or_else(TimeValue::zero);
        longest.insert(id, best_pred + wcet[&id].clone());
    }
    Ok(longest
        .into_values()
        .max()
        .expect("validated structure is non-empty"))
}

/// A sporadic DAG task.
#[derive(Clone, Debug, PartialEq)]
pub struct DagTask {
    pub id: String,
    pub structure: Option<DagStructure>,
    /// Total work C.
    pub work: TimeValue,
    /// Critical-path length L.
    pub critical_path: TimeValue,
    /// Relative deadline D.
    pub deadline: TimeValue,
    /// Minimum inter-arrival time T.
    pub period: Period,
}

/// Task-level invariant violation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum TaskError {
    #[error("task {id}: requires C >= L > 0 (got C={work}, L={critical_path})")]
    WorkPath {
        id: String,
        work: TimeValue,
        critical_path: TimeValue,
    },
    #[error("task {id}: deadline must be positive")]
    NonPositiveDeadline { id: String },
    #[error("task {id}: period must be positive")]
    NonPositivePeriod { id: String },
    #[error("task {id}: {source}")]
    Structure {
        id: String,
        source: StructureError,
    },
    #[error(
        "task {id}: declared {what}={declared} disagrees with structure-derived value {derived}"
    )]
    StructureMismatch {
        id: String,
        what: &'static str,
        declared: TimeValue,
        derived: TimeValue,
    },
}

impl DagTask {
    /// An abstract task given directly by its (C, L, D, T) parameters.
    pub fn abstract_task(
        id: impl Into<String>,
        work: TimeValue,
        critical_path: TimeValue,
        deadline: TimeValue,
        period: Period,
    ) -> Result<Self, TaskError> {
        let task = DagTask {
            id: id.into(),
            structure: None,
            work,
            critical_path,
            deadline,
            period,
        };
        task.check_invariants()?;
        Ok(task)
    }

    /// A task with an explicit subtask graph; C and L are derived from it.
    pub fn structured(
        id: impl Into<String>,
        structure: DagStructure,
        deadline: TimeValue,
        period: Period,
    ) -> Result<Self, TaskError> {
        let id = id.into();
        let work = work(&structure).map_err(|source| TaskError::Structure {
            id: id.clone(),
            source,
        })?;
        let critical_path = critical_path(&structure).expect("validated above");
        let task = DagTask {
            id,
            structure: Some(structure),
            work,
            critical_path,
            deadline,
            period,
        };
        task.check_invariants()?;
        Ok(task)
    }

    fn check_invariants(&self) -> Result<(), TaskError> {
        if !self.critical_path.is_positive() || self.work < self.critical_path {
            return Err(TaskError::WorkPath {
                id: self.id.clone(),
                work: self.work.clone(),
                critical_path: self.critical_path.clone(),
            });
        }
        if !self.deadline.is_positive() {
            return Err(TaskError::NonPositiveDeadline {
                id: self.id.clone(),
            });
        }
        if let Period::Finite(t) = &self.period {
            if !t.is_positive() {
                return Err(TaskError::NonPositivePeriod {
                    id: self.id.clone(),
                });
            }
        }
        Ok(())
    }

    /// U = C / T; zero for a one-shot task.
    pub fn utilization(&self) -> Rat {
        self.period.utilization_of(&self.work)
    }

    /// min(T, D), the sequential-execution budget window.
    pub fn min_deadline_period(&self) -> TimeValue {
        self.period.min_with(&self.deadline)
    }

    /// The task with C and L (and node weights, when present) divided by
    /// `speed`; deadline and period are unchanged.
    pub fn scaled(&self, speed: &Rat) -> DagTask {
        assert!(speed.is_positive(), "speed must be positive");
        let inv = speed.recip();
        DagTask {
            id: self.id.clone(),
            structure: self.structure.as_ref().map(|s| DagStructure {
                nodes: s
                    .nodes
                    .iter()
                    .map(|n| Subtask {
                        id: n.id,
                        wcet: n.wcet.scale(&inv).expect("positive scale"),
                    })
                    .collect(),
                edges: s.edges.clone(),
            }),
            work: self.work.scale(&inv).expect("positive scale"),
            critical_path: self.critical_path.scale(&inv).expect("positive scale"),
            deadline: self.deadline.clone(),
            period: self.period.clone(),
        }
    }
}

/// A set of DAG tasks to run on `processors` identical processors.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskSet {
    pub tasks: Vec<DagTask>,
    pub processors: u32,
}

/// Task-set-level invariant violation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum TaskSetError {
    #[error("duplicate task id {0:?}")]
    DuplicateId(String),
    #[error("processor count must be at least 1")]
    NoProcessors,
}

impl TaskSet {
    pub fn new(tasks: Vec<DagTask>, processors: u32) -> Result<Self, TaskSetError> {
        if processors == 0 {
            return Err(TaskSetError::NoProcessors);
        }
        let mut seen = BTreeSet::new();
        for t in &tasks {
            if !seen.insert(t.id.clone()) {
                return Err(TaskSetError::DuplicateId(t.id.clone()));
            }
        }
        Ok(TaskSet { tasks, processors })
    }

    pub fn task(&self, id: &str) -> Option<&DagTask> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn total_utilization(&self) -> Rat {
        self.tasks
            .iter()
            .map(|t| t.utilization())
            .fold(Rat::from_integer(0.into()), |a, b| a + b)
    }

    /// Every task divided by `speed`; see [`DagTask::scaled`].
    pub fn scaled(&self, speed: &Rat) -> TaskSet {
        TaskSet {
            tasks: self.tasks.iter().map(|t| t.scaled(speed)).collect(),
            processors: self.processors,
        }
    }
}
