//! Knowledge over subspace lattices: spectral families, the possibility
//! projector `Q_ψ`, the knowing predicate, the knowledge operator `K_i`, the
//! mutual-knowledge hierarchy `M_n`, and the common-knowledge fixed point `κ`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::linalg::{inner, norm_sq, LinalgError, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KnowledgeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid spectral family: {0}")]
    InvalidFamily(String),
    #[error("state vector must be nonzero")]
    ZeroState,
    #[error("agent {0:?} has {1} question families; use the multi_question schemes")]
    MultiQuestionAgent(String, usize),
    #[error("family has {0} blocks, oracle enumeration is limited to {max} (2^m subsets)", max = ORACLE_MAX_BLOCKS)]
    TooManyBlocks(usize),
    #[error("common-knowledge iteration exceeded the dimension bound of {0} steps; lattice operations are broken")]
    StabilizationExceeded(usize),
}

const ORACLE_MAX_BLOCKS: usize = 12;

/// An agent's information representation: mutually orthogonal subspaces
/// (answer-blocks) that jointly span `C^d`, i.e. a disjoint partition of
/// unity. Block labels are the agent's answer names and are otherwise opaque.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralFamily<S> {
    ambient_dim: usize,
    blocks: Vec<(String, Subspace<S>)>,
}

impl<S: Scalar> SpectralFamily<S> {
    pub fn new(blocks: Vec<(String, Subspace<S>)>) -> Result<Self, KnowledgeError> {
        let Some((_, first)) = blocks.first() else {
            return Err(KnowledgeError::InvalidFamily("family needs at least one block".into()));
        };
        let ambient_dim = first.ambient_dim();
        let mut rank_sum = 0;
        for (label, block) in &blocks {
            if block.ambient_dim() != ambient_dim {
                return Err(KnowledgeError::InvalidFamily(format!(
                    "block {label:?} lives in dimension {}, expected {ambient_dim}",
                    block.ambient_dim()
                )));
            }
            if block.is_zero() {
                return Err(KnowledgeError::InvalidFamily(format!("block {label:?} is the zero subspace")));
            }
            rank_sum += block.rank();
        }
        for (i, (la, a)) in blocks.iter().enumerate() {
            for (lb, b) in &blocks[i + 1..] {
                if !orthogonal(a, b) {
                    return Err(KnowledgeError::InvalidFamily(format!(
                        "blocks {la:?} and {lb:?} are not orthogonal"
                    )));
                }
            }
        }
        if rank_sum != ambient_dim {
            return Err(KnowledgeError::InvalidFamily(format!(
                "block ranks sum to {rank_sum}, expected {ambient_dim} (family must resolve the identity)"
            )));
        }
        Ok(SpectralFamily { ambient_dim, blocks })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn blocks(&self) -> &[(String, Subspace<S>)] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid family has at least one block
    }

    /// `O_ψ = {j : P_j ψ ≠ 0}` — the blocks ψ overlaps. Nonempty for ψ ≠ 0.
    pub fn support_indices(&self, psi: &Vector<S>) -> Result<BTreeSet<usize>, KnowledgeError> {
        if psi.is_zero() {
            return Err(KnowledgeError::ZeroState);
        }
        let mut support = BTreeSet::new();
        for (j, (_, block)) in self.blocks.iter().enumerate() {
            // P_j ψ = 0 iff ψ ⊥ block_j iff every basis inner product is 0.
            for b in block.basis() {
                if !inner(b, psi)?.is_zero() {
                    support.insert(j);
                    break;
                }
            }
        }
        Ok(support)
    }

    /// The possibility projector `Q_ψ = Σ_{j ∈ O_ψ} P_j`, the minimal
    /// block-sum whose subspace contains ψ.
    pub fn possibility_projector(&self, psi: &Vector<S>) -> Result<Subspace<S>, KnowledgeError> {
        let support = self.support_indices(psi)?;
        let mut q = Subspace::zero(self.ambient_dim);
        for j in support {
            q = q.join(&self.blocks[j].1)?;
        }
        Ok(q)
    }

    /// Definition of knowing: the agent knows `E` at ψ iff `Q_ψ ≤ E`.
    pub fn knows(&self, psi: &Vector<S>, event: &Subspace<S>) -> Result<bool, KnowledgeError> {
        Ok(self.possibility_projector(psi)?.leq(event)?)
    }

    /// The knowledge operator `K E = Σ_{P_j ≤ E} P_j` (closed form).
    pub fn knowledge_operator(&self, event: &Subspace<S>) -> Result<Subspace<S>, KnowledgeError> {
        let mut k = Subspace::zero(self.ambient_dim);
        for (_, block) in &self.blocks {
            if block.leq(event)? {
                k = k.join(block)?;
            }
        }
        Ok(k)
    }

    /// Brute-force realization of the knowledge operator: enumerate all `2^m`
    /// block-sums and join those contained in `E`. Must always agree with
    /// [`knowledge_operator`](Self::knowledge_operator).
    pub fn knowledge_operator_oracle(&self, event: &Subspace<S>) -> Result<Subspace<S>, KnowledgeError> {
        let m = self.blocks.len();
        if m > ORACLE_MAX_BLOCKS {
            return Err(KnowledgeError::TooManyBlocks(m));
        }
        let mut k = Subspace::zero(self.ambient_dim);
        for mask in 0u32..(1 << m) {
            let mut sum = Subspace::zero(self.ambient_dim);
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    sum = sum.join(&self.blocks[j].1)?;
                }
            }
            if sum.leq(event)? {
                k = k.join(&sum)?;
            }
        }
        Ok(k)
    }
}

fn orthogonal<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>) -> bool {
    a.basis().iter().all(|u| {
        b.basis()
            .iter()
            .all(|v| inner(u, v).expect("equal dims").is_zero())
    })
}

/// `p_ψ(E) = ⟨Pψ|Pψ⟩ / ⟨ψ|ψ⟩` where `P` projects onto `E`; exact, in `[0,1]`,
/// equal to 1 iff ψ ∈ E and 0 iff ψ ⊥ E. Ray-invariant, so ψ need not be
/// normalized.
pub fn probability<S: Scalar>(psi: &Vector<S>, event: &Subspace<S>) -> Result<S::Real, KnowledgeError> {
    if psi.is_zero() {
        return Err(KnowledgeError::ZeroState);
    }
    let w = event.project(psi)?;
    Ok(norm_sq(&w) / norm_sq(psi))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent<S> {
    pub id: String,
    pub questions: Vec<SpectralFamily<S>>,
}

impl<S: Scalar> Agent<S> {
    pub fn new(id: impl Into<String>, questions: Vec<SpectralFamily<S>>) -> Self {
        Agent { id: id.into(), questions }
    }

    /// The agent's unique question family, or an error pointing at the
    /// multi-question schemes.
    pub fn single_question(&self) -> Result<&SpectralFamily<S>, KnowledgeError> {
        match self.questions.as_slice() {
            [family] => Ok(family),
            qs => Err(KnowledgeError::MultiQuestionAgent(self.id.clone(), qs.len())),
        }
    }
}

/// A complete epistemic model: the dimension, the agents, and named events
/// and states. State vectors are stored unnormalized; every predicate depends
/// only on the ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model<S> {
    pub dimension: usize,
    pub agents: Vec<Agent<S>>,
    pub events: BTreeMap<String, Subspace<S>>,
    pub states: BTreeMap<String, Vector<S>>,
}

impl<S: Scalar> Model<S> {
    /// `M_n E`: the n-fold "everyone knows" iterate, `M_0 E = E` and
    /// `M_{n+1} E = ∧_i K_i M_n E`.
    pub fn mutual_knowledge(&self, event: &Subspace<S>, n: usize) -> Result<Subspace<S>, KnowledgeError> {
        let mut current = event.clone();
        for _ in 0..n {
            current = self.everyone_knows(&current)?;
        }
        Ok(current)
    }

    /// One step of the hierarchy: `M_1 E = K_1 E ∧ … ∧ K_N E`.
    pub fn everyone_knows(&self, event: &Subspace<S>) -> Result<Subspace<S>, KnowledgeError> {
        let mut result = Subspace::full(self.dimension);
        for agent in &self.agents {
            let k = agent.single_question()?.knowledge_operator(event)?;
            result = result.meet(&k)?;
        }
        Ok(result)
    }

    /// The common-knowledge fixed point `κE = ∧_n M_n E`, computed by
    /// iterating `M` to stabilization. Returns the fixed point together with
    /// the trace `[M_0 E, M_1 E, …]` ending at the first repeated value.
    ///
    /// Ranks strictly decrease until the fixed point, so stabilization within
    /// `dimension + 1` steps is an invariant; exceeding it is reported as an
    /// internal error rather than looping.
    pub fn common_knowledge(&self, event: &Subspace<S>) -> Result<(Subspace<S>, Vec<Subspace<S>>), KnowledgeError> {
        let bound = self.dimension + 1;
        let mut trace = vec![event.clone()];
        for _ in 0..bound {
            let next = self.everyone_knows(trace.last().expect("nonempty"))?;
            if &next == trace.last().expect("nonempty") {
                return Ok((next, trace));
            }
            trace.push(next);
        }
        Err(KnowledgeError::StabilizationExceeded(bound))
    }
}
