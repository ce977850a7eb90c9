//! The set-theoretic partition model of knowledge and common knowledge.
//!
//! This is the classical counterpart of the subspace machinery and doubles as
//! an oracle: a partition model embeds diagonally into `C^|Ω|` (block B ↦
//! span{e_ω : ω ∈ B}) and the quantum operators must reproduce the classical
//! ones under the subset ↔ subspace correspondence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::knowledge::{Agent, KnowledgeError, Model, SpectralFamily};
use crate::linalg::{Subspace, Vector};
use crate::scalar::Scalar;

pub type StateSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("state index {0} out of range for |Ω| = {1}")]
    StateOutOfRange(usize, usize),
    #[error("event contains index {0} outside Ω of size {1}")]
    EventOutOfRange(usize, usize),
    #[error("meet_partition needs at least one partition")]
    EmptyPartitionList,
    #[error("partitions disagree on |Ω|: {0} vs {1}")]
    OmegaMismatch(usize, usize),
    #[error("common-knowledge iteration failed to stabilize within |Ω| steps")]
    StabilizationExceeded,
}

/// A partition of `Ω = {0, …, omega_size−1}` into nonempty disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalPartition {
    omega_size: usize,
    blocks: Vec<StateSet>,
}

impl ClassicalPartition {
    pub fn new(omega_size: usize, blocks: Vec<StateSet>) -> Result<Self, ClassicalError> {
        let mut seen = StateSet::new();
        for block in &blocks {
            if block.is_empty() {
                return Err(ClassicalError::InvalidPartition("empty block".into()));
            }
            for &w in block {
                if w >= omega_size {
                    return Err(ClassicalError::StateOutOfRange(w, omega_size));
                }
                if !seen.insert(w) {
                    return Err(ClassicalError::InvalidPartition(format!(
                        "state {w} appears in two blocks"
                    )));
                }
            }
        }
        if seen.len() != omega_size {
            return Err(ClassicalError::InvalidPartition(format!(
                "blocks cover {} of {} states",
                seen.len(),
                omega_size
            )));
        }
        Ok(ClassicalPartition { omega_size, blocks })
    }

    pub fn omega_size(&self) -> usize {
        self.omega_size
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    /// The block `P(ω)` containing ω.
    pub fn block_of(&self, omega: usize) -> Result<&StateSet, ClassicalError> {
        if omega >= self.omega_size {
            return Err(ClassicalError::StateOutOfRange(omega, self.omega_size));
        }
        Ok(self
            .blocks
            .iter()
            .find(|b| b.contains(&omega))
            .expect("partition covers Ω"))
    }

    fn check_event(&self, event: &StateSet) -> Result<(), ClassicalError> {
        if let Some(&w) = event.iter().find(|&&w| w >= self.omega_size) {
            return Err(ClassicalError::EventOutOfRange(w, self.omega_size));
        }
        Ok(())
    }

    /// The agent knows `E` at ω iff `P(ω) ⊆ E`.
    pub fn knows(&self, omega: usize, event: &StateSet) -> Result<bool, ClassicalError> {
        self.check_event(event)?;
        Ok(self.block_of(omega)?.is_subset(event))
    }

    /// The knowledge operator `K E = {ω : P(ω) ⊆ E}`, the union of the blocks
    /// contained in `E`.
    pub fn knowledge_operator(&self, event: &StateSet) -> Result<StateSet, ClassicalError> {
        self.check_event(event)?;
        Ok(self
            .blocks
            .iter()
            .filter(|b| b.is_subset(event))
            .flatten()
            .copied()
            .collect())
    }
}

/// The finest common coarsening of the given partitions: blocks are the
/// connected components of the "shares a block with" relation.
pub fn meet_partition(partitions: &[ClassicalPartition]) -> Result<ClassicalPartition, ClassicalError> {
    let first = partitions.first().ok_or(ClassicalError::EmptyPartitionList)?;
    let n = first.omega_size;
    for p in partitions {
        if p.omega_size != n {
            return Err(ClassicalError::OmegaMismatch(n, p.omega_size));
        }
    }
    // union-find over Ω, merging within every block of every partition
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in partitions {
        for block in &p.blocks {
            let mut iter = block.iter();
            let &anchor = iter.next().expect("nonempty block");
            for &w in iter {
                let (a, b) = (find(&mut parent, anchor), find(&mut parent, w));
                parent[a] = b;
            }
        }
    }
    let mut components: BTreeMap<usize, StateSet> = BTreeMap::new();
    for w in 0..n {
        let root = find(&mut parent, w);
        components.entry(root).or_default().insert(w);
    }
    ClassicalPartition::new(n, components.into_values().collect())
}

/// A classical model: one partition per agent plus named events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalModel {
    pub omega_size: usize,
    pub partitions: Vec<ClassicalPartition>,
    pub events: BTreeMap<String, StateSet>,
}

impl ClassicalModel {
    pub fn new(
        omega_size: usize,
        partitions: Vec<ClassicalPartition>,
        events: BTreeMap<String, StateSet>,
    ) -> Result<Self, ClassicalError> {
        for p in &partitions {
            if p.omega_size != omega_size {
                return Err(ClassicalError::OmegaMismatch(omega_size, p.omega_size));
            }
        }
        for set in events.values() {
            if let Some(&w) = set.iter().find(|&&w| w >= omega_size) {
                return Err(ClassicalError::EventOutOfRange(w, omega_size));
            }
        }
        Ok(ClassicalModel { omega_size, partitions, events })
    }

    /// Common knowledge by hierarchy iteration: `M_{n+1} = ∩_i K_i M_n` until
    /// stabilization. The sets strictly shrink, so at most |Ω| steps.
    pub fn common_knowledge(&self, event: &StateSet) -> Result<StateSet, ClassicalError> {
        let mut current = event.clone();
        for _ in 0..=self.omega_size {
            let mut next: Option<StateSet> = None;
            for p in &self.partitions {
                let k = p.knowledge_operator(&current)?;
                next = Some(match next {
                    None => k,
                    Some(acc) => acc.intersection(&k).copied().collect(),
                });
            }
            let next = next.unwrap_or_else(|| current.clone());
            if next == current {
                return Ok(current);
            }
            current = next;
        }
        Err(ClassicalError::StabilizationExceeded)
    }
}

/// Diagonal embedding into the subspace model: block `B ↦ span{e_ω : ω ∈ B}`,
/// event `E ↦ span{e_ω : ω ∈ E}`, and one named state `w<ω> ↦ e_ω` per ω.
pub fn embed<S: Scalar>(m: &ClassicalModel) -> Result<Model<S>, KnowledgeError> {
    let dim = m.omega_size;
    let agents = m
        .partitions
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let blocks = p
                .blocks()
                .iter()
                .enumerate()
                .map(|(j, block)| Ok((format!("b{j}"), subspace_of::<S>(block, dim)?)))
                .collect::<Result<Vec<_>, KnowledgeError>>()?;
            Ok(Agent::new(format!("{}", i + 1), vec![SpectralFamily::new(blocks)?]))
        })
        .collect::<Result<Vec<_>, KnowledgeError>>()?;
    let events = m
        .events
        .iter()
        .map(|(name, set)| Ok((name.clone(), subspace_of::<S>(set, dim)?)))
        .collect::<Result<BTreeMap<_, _>, KnowledgeError>>()?;
    let states = (0..dim)
        .map(|w| (format!("w{w}"), Vector::basis(dim, w)))
        .collect();
    Ok(Model { dimension: dim, agents, events, states })
}

/// `span{e_ω : ω ∈ set}` inside `C^dim`.
pub fn subspace_of<S: Scalar>(set: &StateSet, dim: usize) -> Result<Subspace<S>, KnowledgeError> {
    let vectors: Vec<Vector<S>> = set.iter().map(|&w| Vector::basis(dim, w)).collect();
    Ok(Subspace::canonicalize(&vectors, dim)?)
}

/// Reads a diagonal subspace back as a subset of Ω; `None` if the subspace is
/// not spanned by standard basis vectors.
pub fn subset_of<S: Scalar>(subspace: &Subspace<S>) -> Option<StateSet> {
    let mut set = StateSet::new();
    for b in subspace.basis() {
        let mut support = b.entries().iter().enumerate().filter(|(_, e)| !e.is_zero());
        let (idx, first) = support.next()?;
        if support.next().is_some() || !first.is_one() {
            return None;
        }
        set.insert(idx);
    }
    Some(set)
}
