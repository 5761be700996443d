//! Artifact envelopes and machine-readable errors.

use std::fs;
use std::path::Path;

use coiso_core::filling::FillError;
use coiso_core::homalg::IntegralObstruction;
use coiso_core::scheduler::ScheduleError;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit code 2.
    Usage { kind: &'static str, message: String },
    /// A well-formed request whose answer is negative; exit code 1.
    Domain { kind: &'static str, message: String, details: Value },
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self::Usage { kind: "input", message: message.into() }
    }

    pub fn domain(kind: &'static str, message: impl Into<String>, details: Value) -> Self {
        Self::Domain { kind, message: message.into(), details }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage { .. } => 2,
            Self::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message, details) = match self {
            Self::Usage { kind, message } => (kind, message, Value::Null),
            Self::Domain { kind, message, details } => (kind, message, details.clone()),
        };
        let mut e = Map::new();
        e.insert("kind".into(), json!(kind));
        e.insert("message".into(), json!(message));
        if !details.is_null() {
            e.insert("details".into(), details);
        }
        json!({ "error": e, "tool_version": TOOL_VERSION })
    }
}

impl From<FillError> for CliError {
    fn from(e: FillError) -> Self {
        let message = e.to_string();
        match e {
            FillError::NotCoboundary { rank, witness } => {
                Self::domain("not_coboundary", message, json!({ "rank": rank, "witness": witness.to_json() }))
            }
            FillError::NotIntegrallyFillable(obs) => {
                let details = match obs {
                    IntegralObstruction::Inconsistent { row } => json!({ "inconsistent_row": row }),
                    IntegralObstruction::NotDivisible { row, pivot, value } => {
                        json!({ "row": row, "pivot": pivot.to_string(), "value": value.to_string() })
                    }
                };
                Self::domain("not_integrally_fillable", message, details)
            }
            FillError::DegreeOutOfRange { .. } | FillError::Shape { .. } => CliError::input(message),
            FillError::TooLarge { cells, cap } => {
                Self::domain("too_large", message, json!({ "cells": cells, "cap": cap }))
            }
            FillError::NotCocycleModZ | FillError::DoesNotLift => Self::domain("not_liftable", message, Value::Null),
            _ => Self::domain("invariant", message, Value::Null),
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        let message = e.to_string();
        match e {
            ScheduleError::Fill(f) => f.into(),
            ScheduleError::Residual { cells, first } => {
                Self::domain("not_a_filling", message, json!({ "cells": cells, "first": first }))
            }
            ScheduleError::NotCocycle => Self::domain("not_cocycle", message, Value::Null),
            ScheduleError::Invariant(_) => Self::domain("invariant", message, Value::Null),
            ScheduleError::Sampling(n) => Self::domain("sampling", message, json!({ "attempts": n })),
            _ => CliError::input(message),
        }
    }
}

/// `body` with `config` and `tool_version` added at the top level.
pub fn envelope(config: &Value, body: impl Serialize) -> Value {
    let mut v = serde_json::to_value(body).expect("serializable");
    let obj = v.as_object_mut().expect("artifact bodies are objects");
    obj.insert("config".into(), config.clone());
    obj.insert("tool_version".into(), json!(TOOL_VERSION));
    v
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout without one.
pub fn emit(path: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let text = to_text(v);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
