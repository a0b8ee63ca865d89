//! Exact decision procedures for wavelet-set, frame and super-wavelet criteria.

mod bounds;
mod functions;
mod sets;

pub use bounds::{decomposability_bound, extendability_bound, BoundReport};
pub use functions::{
    equivalent_superwavelets, periodized_correlation, verify_frame_pointwise,
    verify_super_general, verify_translates, TranslateMode,
};
pub use sets::{
    check_dilation_tiling, check_translation, joint_fold_measure, mra_scaling_check,
    verify_multiwavelet_set, verify_pf_multiwavelet_set, verify_superwavelet, SuperMode,
    TranslationMode,
};

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::clopen::Ball;
use crate::gfq::FieldConfig;
use crate::lfield::{format_laurent, Laurent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

/// Evidence attached to a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Ball { center: String, scale: i32 },
    Point(String),
    Measure(BigRational),
}

impl Witness {
    pub fn ball(f: &FieldConfig, b: &Ball) -> Self {
        Witness::Ball {
            center: format_laurent(f, b.center()),
            scale: b.scale(),
        }
    }

    pub fn point(f: &FieldConfig, x: &Laurent) -> Self {
        Witness::Point(format_laurent(f, x))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Witness::Ball { center, scale } => {
                json!({"kind": "ball", "ball": {"center": center, "scale": scale}})
            }
            Witness::Point(p) => json!({"kind": "point", "point": p}),
            Witness::Measure(m) => json!({"kind": "measure", "measure": m.to_string()}),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ball { center, scale } => write!(f, "ball({center}, {scale})"),
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Measure(m) => write!(f, "measure {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub detail: Option<String>,
}

/// Finite ranges that were searched in place of an infinite condition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub s_max: Option<u64>,
    pub j_max: Option<i64>,
    pub k_max: Option<u64>,
}

impl Bounds {
    fn merge(&mut self, other: &Bounds) {
        self.s_max = self.s_max.max(other.s_max);
        self.j_max = self.j_max.max(other.j_max);
        self.k_max = self.k_max.max(other.k_max);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub bounds: Bounds,
    /// Named exact quantities computed along the way.
    pub facts: Vec<(String, String)>,
}

impl Verdict {
    pub fn new() -> Self {
        Verdict {
            passed: true,
            ..Default::default()
        }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name.into(), None, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Witness) {
        self.push(name.into(), Some(witness), None);
    }

    /// Records a check: `None` passes, `Some(witness)` fails.
    pub fn record(&mut self, name: impl Into<String>, witness: Option<Witness>) {
        self.push(name.into(), witness, None);
    }

    pub fn record_with(&mut self, name: impl Into<String>, witness: Option<Witness>, detail: String) {
        self.push(name.into(), witness, Some(detail));
    }

    fn push(&mut self, name: String, witness: Option<Witness>, detail: Option<String>) {
        let status = if witness.is_some() {
            Status::Fail
        } else {
            Status::Pass
        };
        if status == Status::Fail {
            self.passed = false;
        }
        self.checks.push(Check {
            name,
            status,
            witness,
            detail,
        });
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn fact(&mut self, name: impl Into<String>, value: impl ToString) {
        let name = name.into();
        self.facts.retain(|(n, _)| *n != name);
        self.facts.push((name, value.to_string()));
        self.facts.sort();
    }

    pub fn get_fact(&self, name: &str) -> Option<&str> {
        self.facts.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Merges another verdict, prefixing its check and fact names.
    pub fn absorb(&mut self, prefix: &str, other: Verdict) {
        let join = |n: &str| {
            if prefix.is_empty() {
                n.to_string()
            } else {
                format!("{prefix}.{n}")
            }
        };
        for c in other.checks {
            self.push(join(&c.name), c.witness, c.detail);
        }
        for (n, v) in other.facts {
            self.fact(join(&n), v);
        }
        self.bounds.merge(&other.bounds);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), json!(c.name));
                m.insert(
                    "status".into(),
                    json!(if c.status == Status::Pass { "pass" } else { "fail" }),
                );
                m.insert(
                    "witness".into(),
                    c.witness.as_ref().map_or(Value::Null, Witness::to_json),
                );
                if let Some(d) = &c.detail {
                    m.insert("detail".into(), json!(d));
                }
                Value::Object(m)
            })
            .collect();
        let facts: Map<String, Value> = self
            .facts
            .iter()
            .map(|(n, v)| (n.clone(), json!(v)))
            .collect();
        json!({
            "passed": self.passed,
            "checks": checks,
            "bounds": {
                "s_max": self.bounds.s_max,
                "j_max": self.bounds.j_max,
                "k_max": self.bounds.k_max,
            },
            "facts": facts,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let st = if c.status == Status::Pass { "pass" } else { "FAIL" };
            write!(f, "  [{st}] {}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  witness: {w}")?;
            }
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        for (n, v) in &self.facts {
            writeln!(f, "  {n} = {v}")?;
        }
        Ok(())
    }
}
