//! Loading, validating, and serializing models.
//!
//! The on-disk format is a single JSON document. Scalars are two-element
//! arrays of rational strings `["re","im"]` (grammar `-?<digits>(/<digits>)?`),
//! vectors are arrays of scalars, subspaces are arrays of vectors (any
//! spanning set; canonicalized on load). A document is either quantum
//! (`dimension`/`agents`/`events`/`states`) or classical (`classical` block
//! with `omega_size`, `partitions`, `events` as index sets); classical
//! documents are loaded through the diagonal embedding.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{embed, ClassicalModel, ClassicalPartition};
use crate::formula::is_know_token;
use crate::knowledge::{Agent, Model, SpectralFamily};
use crate::scalar::{format_rational, parse_rational};
use crate::{GaussianRational, Subspace, Vector};

pub type ScalarDoc = [String; 2];
pub type VectorDoc = Vec<ScalarDoc>;
pub type SubspaceDoc = Vec<VectorDoc>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<AgentDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<BTreeMap<String, SubspaceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<BTreeMap<String, VectorDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub id: String,
    pub questions: Vec<FamilyDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub blocks: Vec<BlockDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub label: String,
    pub vectors: SubspaceDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalDoc {
    pub omega_size: usize,
    pub partitions: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    pub events: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// Validation findings; the model is accepted iff the report is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<(Severity, String, String)>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.entries.push((Severity::Error, path.into(), message.into()));
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (severity, path, message) in &self.entries {
            writeln!(f, "{severity} at {path}: {message}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("document parse error: {0}")]
    Parse(String),
    #[error("model validation failed:\n{0}")]
    Invalid(ValidationReport),
}

pub fn parse_document(text: &str) -> Result<ModelDocument, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
}

/// Checks every model invariant, exactly. Returns all findings rather than
/// stopping at the first.
pub fn validate(doc: &ModelDocument) -> ValidationReport {
    to_model(doc).err().unwrap_or_default()
}

/// Parses, validates, and builds the model; classical documents go through
/// the diagonal embedding.
pub fn load_model(text: &str) -> Result<Model<GaussianRational>, IoError> {
    let doc = parse_document(text)?;
    to_model(&doc).map_err(IoError::Invalid)
}

fn parse_scalar(doc: &ScalarDoc, path: &str, report: &mut ValidationReport) -> GaussianRational {
    let mut parts = doc.iter().map(|s| match parse_rational(s) {
        Ok(r) => r,
        Err(e) => {
            report.error(path, e.to_string());
            Zero::zero()
        }
    });
    let re = parts.next().expect("two components");
    let im = parts.next().expect("two components");
    GaussianRational::new(re, im)
}

fn parse_vector(doc: &VectorDoc, dim: usize, path: &str, report: &mut ValidationReport) -> Option<Vector> {
    if doc.len() != dim {
        report.error(path, format!("vector has {} entries, expected {dim}", doc.len()));
        return None;
    }
    let entries = doc
        .iter()
        .enumerate()
        .map(|(k, s)| parse_scalar(s, &format!("{path}[{k}]"), report))
        .collect();
    Some(Vector::new(entries))
}

fn parse_subspace(doc: &SubspaceDoc, dim: usize, path: &str, report: &mut ValidationReport) -> Option<Subspace> {
    let before = report.entries.len();
    let vectors: Vec<Vector> = doc
        .iter()
        .enumerate()
        .filter_map(|(k, v)| parse_vector(v, dim, &format!("{path}[{k}]"), report))
        .collect();
    if report.entries.len() > before || vectors.len() != doc.len() {
        return None;
    }
    Some(Subspace::canonicalize(&vectors, dim).expect("dims checked"))
}

fn to_model(doc: &ModelDocument) -> Result<Model<GaussianRational>, ValidationReport> {
    let mut report = ValidationReport::default();
    if let Some(format) = doc.format {
        if format != 1 {
            report.error("format", format!("unsupported format {format}, expected 1"));
        }
    }
    let quantum_fields =
        doc.dimension.is_some() || doc.agents.is_some() || doc.events.is_some() || doc.states.is_some();
    match (&doc.classical, quantum_fields) {
        (Some(_), true) => {
            report.error("document", "exactly one of the quantum fields or the classical block may be present");
            Err(report)
        }
        (Some(classical), false) => match classical_to_model(classical, &mut report) {
            Some(m) if report.is_empty() => Ok(m),
            _ => Err(report),
        },
        (None, true) => {
            let model = quantum_to_model(doc, &mut report);
            match model {
                Some(m) if report.is_empty() => Ok(m),
                _ => Err(report),
            }
        }
        (None, false) => {
            report.error("document", "empty document: provide quantum fields or a classical block");
            Err(report)
        }
    }
}

/// Builds the set-theoretic model from a classical block, for callers that
/// need the partitions themselves rather than the embedding.
pub fn classical_model(doc: &ClassicalDoc) -> Result<ClassicalModel, IoError> {
    let mut report = ValidationReport::default();
    let model = build_classical(doc, &mut report);
    match model {
        Some(m) if report.is_empty() => Ok(m),
        _ => Err(IoError::Invalid(report)),
    }
}

fn build_classical(doc: &ClassicalDoc, report: &mut ValidationReport) -> Option<ClassicalModel> {
    if doc.omega_size == 0 {
        report.error("classical.omega_size", "omega_size must be positive");
        return None;
    }
    let mut partitions = Vec::new();
    for (i, blocks) in doc.partitions.iter().enumerate() {
        let sets = blocks.iter().map(|b| b.iter().copied().collect()).collect();
        match ClassicalPartition::new(doc.omega_size, sets) {
            Ok(p) => partitions.push(p),
            Err(e) => report.error(format!("classical.partitions[{i}]"), e.to_string()),
        }
    }
    let events = doc
        .events
        .iter()
        .map(|(name, set)| (name.clone(), set.iter().copied().collect()))
        .collect();
    match ClassicalModel::new(doc.omega_size, partitions, events) {
        Ok(m) => Some(m),
        Err(e) => {
            report.error("classical", e.to_string());
            None
        }
    }
}

fn classical_to_model(
    doc: &ClassicalDoc,
    report: &mut ValidationReport,
) -> Option<Model<GaussianRational>> {
    let model = build_classical(doc, report)?;
    match embed(&model) {
        Ok(m) => Some(m),
        Err(e) => {
            report.error("classical", e.to_string());
            None
        }
    }
}

fn quantum_to_model(doc: &ModelDocument, report: &mut ValidationReport) -> Option<Model<GaussianRational>> {
    let Some(dim) = doc.dimension else {
        report.error("dimension", "missing");
        return None;
    };
    if dim == 0 {
        report.error("dimension", "dimension must be positive");
        return None;
    }
    let mut agents = Vec::new();
    for (i, agent_doc) in doc.agents.as_deref().unwrap_or_default().iter().enumerate() {
        if agents.iter().any(|a: &Agent<GaussianRational>| a.id == agent_doc.id) {
            report.error(format!("agents[{i}].id"), format!("duplicate agent id {:?}", agent_doc.id));
        }
        if agent_doc.questions.is_empty() {
            report.error(format!("agents[{i}].questions"), "agent needs at least one question family");
        }
        let mut questions = Vec::new();
        for (q, family_doc) in agent_doc.questions.iter().enumerate() {
            let path = format!("agents[{i}].questions[{q}]");
            let mut blocks = Vec::new();
            let mut ok = true;
            for (bi, block) in family_doc.blocks.iter().enumerate() {
                match parse_subspace(&block.vectors, dim, &format!("{path}.blocks[{bi}].vectors"), report) {
                    Some(s) => blocks.push((block.label.clone(), s)),
                    None => ok = false,
                }
            }
            if family_doc
                .blocks
                .iter()
                .enumerate()
                .any(|(bi, b)| family_doc.blocks[..bi].iter().any(|c| c.label == b.label))
            {
                report.error(&path, "duplicate block labels within a family");
                ok = false;
            }
            if !ok {
                continue;
            }
            match SpectralFamily::new(blocks) {
                Ok(f) => questions.push(f),
                Err(e) => report.error(&path, e.to_string()),
            }
        }
        agents.push(Agent::new(agent_doc.id.clone(), questions));
    }
    let mut events = BTreeMap::new();
    for (name, subspace_doc) in doc.events.iter().flatten() {
        if name == "top" || name == "bot" || name == "EK" || name == "C" || is_know_token(name) {
            report.error(format!("events.{name}"), "event name collides with a formula keyword");
        }
        if let Some(s) = parse_subspace(subspace_doc, dim, &format!("events.{name}"), report) {
            events.insert(name.clone(), s);
        }
    }
    let mut states = BTreeMap::new();
    for (name, vector_doc) in doc.states.iter().flatten() {
        if let Some(v) = parse_vector(vector_doc, dim, &format!("states.{name}"), report) {
            if v.is_zero() {
                report.error(format!("states.{name}"), "state must be nonzero");
            } else {
                states.insert(name.clone(), v);
            }
        }
    }
    Some(Model { dimension: dim, agents, events, states })
}

fn scalar_doc(z: &GaussianRational) -> ScalarDoc {
    [format_rational(&z.re), format_rational(&z.im)]
}

fn vector_doc(v: &Vector) -> VectorDoc {
    v.entries().iter().map(scalar_doc).collect()
}

fn subspace_doc(s: &Subspace) -> SubspaceDoc {
    s.basis().iter().map(vector_doc).collect()
}

/// Canonical serialization; `load_model(serialize(m))` reproduces `m`
/// structurally (subspaces are written as their canonical bases).
pub fn serialize(model: &Model<GaussianRational>) -> String {
    let doc = ModelDocument {
        format: Some(1),
        dimension: Some(model.dimension),
        agents: Some(
            model
                .agents
                .iter()
                .map(|a| AgentDoc {
                    id: a.id.clone(),
                    questions: a
                        .questions
                        .iter()
                        .map(|f| FamilyDoc {
                            blocks: f
                                .blocks()
                                .iter()
                                .map(|(label, s)| BlockDoc { label: label.clone(), vectors: subspace_doc(s) })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        ),
        events: Some(model.events.iter().map(|(n, s)| (n.clone(), subspace_doc(s))).collect()),
        states: Some(model.states.iter().map(|(n, v)| (n.clone(), vector_doc(v))).collect()),
        classical: None,
    };
    serde_json::to_string_pretty(&doc).expect("document serializes")
}
