//! JSON shapes shared by the CLI and the HTTP service.

use serde::{Deserialize, Serialize};

use crate::combination::ConflictReport;
use crate::error::{Error, Result};
use crate::network::{EvaluationResult, NetworkSpec, VariableMarginal};

/// An evaluation with the network name and observations it was run on.
/// Field order is fixed so equal evaluations serialize to equal bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub network: String,
    pub observations: Vec<String>,
    pub marginals: Vec<VariableMarginal>,
    pub conflict: ConflictReport,
    pub joint_focal_count: usize,
}

impl EvaluationReport {
    pub fn new(spec: &NetworkSpec, result: EvaluationResult) -> Self {
        EvaluationReport {
            network: spec.name().to_owned(),
            observations: spec.observations().iter().map(|o| o.to_string()).collect(),
            marginals: result.marginals,
            conflict: result.conflict,
            joint_focal_count: result.joint_focal_count,
        }
    }

    /// Keeps only the named variables, in the order given.
    pub fn restrict<S: AsRef<str>>(mut self, variables: &[S]) -> Result<Self> {
        let mut kept = Vec::with_capacity(variables.len());
        for v in variables {
            let m = self
                .marginals
                .iter()
                .find(|m| m.variable == v.as_ref())
                .ok_or_else(|| Error::UnknownVariable(v.as_ref().to_owned()))?;
            kept.push(m.clone());
        }
        self.marginals = kept;
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeliefView {
    pub label: String,
    pub formula: String,
    pub weight: f64,
}

/// A network as echoed by the service.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub id: String,
    pub name: String,
    pub variables: Vec<String>,
    pub beliefs: Vec<BeliefView>,
    pub observations: Vec<String>,
}

impl NetworkSummary {
    pub fn new(id: impl Into<String>, spec: &NetworkSpec) -> Self {
        NetworkSummary {
            id: id.into(),
            name: spec.name().to_owned(),
            variables: spec.variables().iter().map(|v| v.name().to_owned()).collect(),
            beliefs: spec
                .beliefs()
                .iter()
                .map(|b| BeliefView { label: b.label.clone(), formula: b.formula.to_string(), weight: b.weight })
                .collect(),
            observations: spec.observations().iter().map(|o| o.to_string()).collect(),
        }
    }
}

/// Current state of a service session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub network: NetworkSummary,
    pub result: Option<EvaluationReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservationDelta {
    #[serde(default)]
    pub add: Vec<String>,
    #[serde(default)]
    pub remove: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltinInfo {
    pub name: String,
    pub description: String,
}

/// Error body returned with every non-2xx response.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    /// Machine-readable kind: `parse_error`, `formula_error`, `not_found`,
    /// `total_conflict`, `bad_request`.
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<ConflictReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<Vec<String>>,
}

impl ApiError {
    pub fn new(error: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError {
            error: error.into(),
            message: message.into(),
            line: None,
            col: None,
            conflict: None,
            observations: None,
        }
    }
}
