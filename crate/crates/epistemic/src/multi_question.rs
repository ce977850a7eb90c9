//! Agents with several question families.
//!
//! Two schemes: the von Neumann scheme joins commuting families into their
//! common refinement and knows through that single family; the either/or
//! scheme asks each family separately and knows `E` if some family's
//! possibility projector lies inside `E`. The either/or scheme needs no
//! compatibility assumption.

use thiserror::Error;

use crate::knowledge::{KnowledgeError, SpectralFamily};
use crate::linalg::{LinalgError, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultiQuestionError {
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("families {0} and {1} do not commute; the von Neumann scheme requires compatible questions")]
    NonCommuting(usize, usize),
    #[error("at least one question family is required")]
    NoFamilies,
}

/// Projector-commutation criterion, expressed lattice-theoretically: the
/// families commute iff every block of one decomposes as the join of its
/// meets with the blocks of the other, both ways round.
pub fn families_commute<S: Scalar>(
    f: &SpectralFamily<S>,
    g: &SpectralFamily<S>,
) -> Result<bool, MultiQuestionError> {
    decomposes(f, g).and_then(|ok| if ok { decomposes(g, f) } else { Ok(false) })
}

fn decomposes<S: Scalar>(
    f: &SpectralFamily<S>,
    g: &SpectralFamily<S>,
) -> Result<bool, MultiQuestionError> {
    for (_, p) in f.blocks() {
        let mut rebuilt = Subspace::zero(p.ambient_dim());
        for (_, q) in g.blocks() {
            rebuilt = rebuilt.join(&p.meet(q)?)?;
        }
        if &rebuilt != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The common refinement of pairwise-commuting families: blocks are the
/// nonzero meets of one block per family, labelled by the tuple of
/// constituent labels.
pub fn joint_refinement<S: Scalar>(
    families: &[SpectralFamily<S>],
) -> Result<SpectralFamily<S>, MultiQuestionError> {
    let first = families.first().ok_or(MultiQuestionError::NoFamilies)?;
    for i in 0..families.len() {
        for j in i + 1..families.len() {
            if !families_commute(&families[i], &families[j])? {
                return Err(MultiQuestionError::NonCommuting(i, j));
            }
        }
    }
    if families.len() == 1 {
        return Ok(first.clone());
    }
    let mut blocks: Vec<(String, Subspace<S>)> = first.blocks().to_vec();
    for family in &families[1..] {
        let mut refined = Vec::new();
        for (label, block) in &blocks {
            for (l2, b2) in family.blocks() {
                let meet = block.meet(b2)?;
                if !meet.is_zero() {
                    refined.push((format!("({label},{l2})"), meet));
                }
            }
        }
        blocks = refined;
    }
    Ok(SpectralFamily::new(blocks)?)
}

/// Von Neumann knowing: knowing through the joint refinement of the agent's
/// (necessarily commuting) families.
pub fn knows_von_neumann<S: Scalar>(
    families: &[SpectralFamily<S>],
    psi: &Vector<S>,
    event: &Subspace<S>,
) -> Result<bool, MultiQuestionError> {
    Ok(joint_refinement(families)?.knows(psi, event)?)
}

/// Either/or knowing: `E` is known iff `Q_{k;ψ} ≤ E` for SOME family `k`.
/// Defined for incompatible families as well.
pub fn knows_either_or<S: Scalar>(
    families: &[SpectralFamily<S>],
    psi: &Vector<S>,
    event: &Subspace<S>,
) -> Result<bool, MultiQuestionError> {
    if families.is_empty() {
        return Err(MultiQuestionError::NoFamilies);
    }
    for family in families {
        if family.knows(psi, event)? {
            return Ok(true);
        }
    }
    Ok(false)
}
