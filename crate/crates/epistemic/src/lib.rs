//! Exact-arithmetic engine for knowledge and common knowledge over
//! finite-dimensional complex Hilbert spaces.
//!
//! Events are subspaces of `C^d`, agents carry spectral families (orthogonal
//! decompositions of the identity), and the knowledge operator, mutual
//! knowledge hierarchy, and common-knowledge fixed point are all computed
//! over exact Gaussian-rational scalars. The classical partition model is
//! included as an oracle: any partition model embeds diagonally and must
//! agree with the subspace computation.

pub mod classical;
pub mod formula;
pub mod knowledge;
pub mod linalg;
pub mod model_io;
pub mod multi_question;
pub mod scalar;

/// Exact rational with arbitrary-precision integer parts.
pub type Rational = num::BigRational;

/// The scalar field of the shipped engine: complex numbers with exact
/// rational real and imaginary parts.
pub type GaussianRational = num::Complex<Rational>;

pub type Vector = linalg::Vector<GaussianRational>;
pub type Matrix = linalg::Matrix<GaussianRational>;
pub type Subspace = linalg::Subspace<GaussianRational>;
pub type SpectralFamily = knowledge::SpectralFamily<GaussianRational>;
pub type Agent = knowledge::Agent<GaussianRational>;
pub type Model = knowledge::Model<GaussianRational>;
