//! Task-set JSON serialization.
//!
//! Schema:
//! ```json
//! {"processors": 2,
//!  "tasks": [{"id": "t1",
//!             "C": {"num": 10, "den": 1},
//!             "L": {"num": 5, "den": 1},
//!             "D": {"num": 9, "den": 1},
//!             "T": {"num": 12, "den": 1},
//!             "structure": {"nodes": [{"id": 0, "wcet": {"num": 1, "den": 1}}],
//!                           "edges": [[0, 1]]}}]}
//! ```
//! `"T"` may be the string `"inf"` for a one-shot task. `structure` is
//! optional; when present, `C` and `L` may be omitted (they are derived) and,
//! when given, must agree with the derived values. Rational fields also
//! accept a bare integer; numerators/denominators too large for an u64 are
//! written as decimal strings.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DagStructure, DagTask, Subtask, TaskSet};
use crate::time::{Period, Rat, TimeValue};

/// Failure to read, parse, or validate a task-set file.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid task set at {path}: {message}")]
    Invalid { path: String, message: String },
}

// ---------------------------------------------------------------------------
// Wire representation of rationals and periods.

impl Serialize for TimeValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatWire::from_rat(self.rat()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TimeValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = RatWire::deserialize(deserializer)?;
        let rat = wire.into_rat().map_err(D::Error::custom)?;
        TimeValue::try_from_rat(rat).map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Period::Finite(t) => t.serialize(serializer),
            Period::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        if v.as_str() == Some("inf") {
            return Ok(Period::Infinite);
        }
        let t: TimeValue = serde_json::from_value(v).map_err(D::Error::custom)?;
        Ok(Period::Finite(t))
    }
}

/// `{"num": .., "den": ..}` with integers as JSON numbers when they fit in
/// an `u64` and decimal strings otherwise; bare integers also accepted.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatWire {
    Pair { num: IntWire, den: IntWire },
    Bare(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntWire {
    Small(u64),
    Big(String),
}

impl IntWire {
    fn from_bigint(i: &BigInt) -> IntWire {
        match i.to_u64() {
            Some(v) => IntWire::Small(v),
            None => IntWire::Big(i.to_string()),
        }
    }

    fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            IntWire::Small(v) => Ok(BigInt::from(v)),
            IntWire::Big(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

impl RatWire {
    fn from_rat(r: &Rat) -> RatWire {
        RatWire::Pair {
            num: IntWire::from_bigint(r.numer()),
            den: IntWire::from_bigint(r.denom()),
        }
    }

    fn into_rat(self) -> Result<Rat, String> {
        match self {
            RatWire::Bare(v) => Ok(Rat::from_integer(BigInt::from(v))),
            RatWire::Pair { num, den } => {
                let num = num.into_bigint()?;
                let den = den.into_bigint()?;
                if den.is_zero() {
                    return Err("denominator is zero".to_string());
                }
                if num.is_negative() || den.is_negative() {
                    return Err("negative rational where a time value is required".to_string());
                }
                Ok(Rat::new(num, den))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Wire representation of task sets.

#[derive(Serialize, Deserialize)]
struct TaskSetWire {
    processors: u32,
    tasks: Vec<TaskWire>,
}

#[derive(Serialize, Deserialize)]
struct TaskWire {
    id: String,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    work: Option<TimeValue>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    critical_path: Option<TimeValue>,
    #[serde(rename = "D")]
    deadline: TimeValue,
    #[serde(rename = "T")]
    period: Period,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<StructureWire>,
}

#[derive(Serialize, Deserialize)]
struct StructureWire {
    nodes: Vec<NodeWire>,
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct NodeWire {
    id: u32,
    wcet: TimeValue,
}

fn build_task(wire: TaskWire, json_path: &str) -> Result<DagTask, LoadError> {
    let invalid = |message: String| LoadError::Invalid {
        path: json_path.to_string(),
        message,
    };
    match wire.structure {
        Some(s) => {
            let structure = DagStructure {
                nodes: s
                    .nodes
                    .into_iter()
                    .map(|n| Subtask {
                        id: n.id,
                        wcet: n.wcet,
                    })
                    .collect(),
                edges: s.edges,
            };
            let derived_work = super::work(&structure).map_err(|e| invalid(e.to_string()))?;
            let derived_path =
                super::critical_path(&structure).map_err(|e| invalid(e.to_string()))?;
            if let Some(declared) = &wire.work {
                if *declared != derived_work {
                    return Err(invalid(format!(
                        "declared C = {declared} but node wcets sum to {derived_work}"
                    )));
                }
            }
            if let Some(declared) = &wire.critical_path {
                if *declared != derived_path {
                    return Err(invalid(format!(
                        "declared L = {declared} but the longest path weighs {derived_path}"
                    )));
                }
            }
            DagTask::structured(wire.id, structure, wire.deadline, wire.period)
                .map_err(|e| invalid(e.to_string()))
        }
        None => {
            let work = wire
                .work
                .ok_or_else(|| invalid("abstract task needs an explicit C".to_string()))?;
            let critical_path = wire
                .critical_path
                .ok_or_else(|| invalid("abstract task needs an explicit L".to_string()))?;
            DagTask::abstract_task(wire.id, work, critical_path, wire.deadline, wire.period)
                .map_err(|e| invalid(e.to_string()))
        }
    }
}

/// Parses a task set from a JSON string.
pub fn task_set_from_json(json: &str) -> Result<TaskSet, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let wire: TaskSetWire =
        serde_path_to_error::deserialize(de).map_err(|e| LoadError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    let mut tasks = Vec::with_capacity(wire.tasks.len());
    for (i, tw) in wire.tasks.into_iter().enumerate() {
        tasks.push(build_task(tw, &format!("tasks[{i}]"))?);
    }
    TaskSet::new(tasks, wire.processors).map_err(|e| LoadError::Invalid {
        path: "tasks".to_string(),
        message: e.to_string(),
    })
}

/// Serializes a task set to pretty JSON. `C` and `L` are always written,
/// including for tasks where they were derived from the structure.
pub fn task_set_to_json(ts: &TaskSet) -> String {
    let wire = TaskSetWire {
        processors: ts.processors,
        tasks: ts
            .tasks
            .iter()
            .map(|t| TaskWire {
                id: t.id.clone(),
                work: Some(t.work.clone()),
                critical_path: Some(t.critical_path.clone()),
                deadline: t.deadline.clone(),
                period: t.period.clone(),
                structure: t.structure.as_ref().map(|s| StructureWire {
                    nodes: s
                        .nodes
                        .iter()
                        .map(|n| NodeWire {
                            id: n.id,
                            wcet: n.wcet.clone(),
                        })
                        .collect(),
                    edges: s.edges.clone(),
                }),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&wire).expect("task set serialization cannot fail")
}

pub fn load_task_set(path: impl AsRef<Path>) -> Result<TaskSet, LoadError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LoadError::Read {
        path: path.display().to_string(),
        source,
    })?;
    task_set_from_json(&text)
}

pub fn save_task_set(ts: &TaskSet, path: impl AsRef<Path>) -> Result<(), LoadError> {
    let path = path.as_ref();
    fs::write(path, task_set_to_json(ts)).map_err(|source| LoadError::Write {
        path: path.display().to_string(),
        source,
    })
}
