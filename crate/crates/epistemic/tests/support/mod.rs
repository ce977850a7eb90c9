//! Shared test support: a deterministic generator for random exact models and
//! independent oracle implementations used to cross-check the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use epistemic::classical::{ClassicalModel, ClassicalPartition, StateSet};
use epistemic::knowledge::{Agent, Model, SpectralFamily};
use epistemic::linalg::{inner, norm_sq};
use epistemic::scalar::Scalar;
use epistemic::{GaussianRational, Matrix, Rational, Subspace, Vector};
use num::{BigRational, Complex, Zero};

/// splitmix64; fixed seeds make every suite reproducible.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// uniform in 0..n
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// uniform in lo..=hi
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }
}

pub fn q(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

pub fn gr(re: i64, im: i64) -> GaussianRational {
    Complex::new(q(re), q(im))
}

/// small Gaussian-integer entries keep the exact arithmetic fast
pub fn rand_scalar(rng: &mut TestRng) -> GaussianRational {
    gr(rng.int(-2, 2), rng.int(-2, 2))
}

pub fn rand_vector(rng: &mut TestRng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| rand_scalar(rng)).collect())
}

pub fn rand_nonzero_vector(rng: &mut TestRng, dim: usize) -> Vector {
    loop {
        let v = rand_vector(rng, dim);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random subspace as the span of 0..=dim random vectors.
pub fn rand_subspace(rng: &mut TestRng, dim: usize) -> Subspace {
    let k = rng.below(dim + 1);
    let vectors: Vec<Vector> = (0..k).map(|_| rand_vector(rng, dim)).collect();
    Subspace::canonicalize(&vectors, dim).unwrap()
}

/// A full exact orthogonal (not orthonormal) basis of C^dim, built by
/// Gram-Schmidt orthogonalization without normalization.
pub fn rand_orthogonal_basis(rng: &mut TestRng, dim: usize) -> Vec<Vector> {
    loop {
        let raw: Vec<Vector> = (0..dim).map(|_| rand_vector(rng, dim)).collect();
        if Subspace::canonicalize(&raw, dim).unwrap().rank() != dim {
            continue;
        }
        let mut basis: Vec<Vector> = Vec::with_capacity(dim);
        for a in &raw {
            let mut b = a.clone();
            for prev in &basis {
                let coeff = inner(prev, &b).unwrap()
                    / GaussianRational::from_real(norm_sq(prev));
                b = b.sub(&prev.scaled(&coeff)).unwrap();
            }
            basis.push(b);
        }
        return basis;
    }
}

/// Random spectral family: group an orthogonal basis into nonempty blocks.
pub fn rand_family(rng: &mut TestRng, dim: usize) -> SpectralFamily<GaussianRational> {
    let basis = rand_orthogonal_basis(rng, dim);
    family_from_grouping(rng, &basis, dim)
}

/// Two commuting families: two groupings of one shared orthogonal basis.
pub fn rand_commuting_pair(
    rng: &mut TestRng,
    dim: usize,
) -> (SpectralFamily<GaussianRational>, SpectralFamily<GaussianRational>) {
    let basis = rand_orthogonal_basis(rng, dim);
    (
        family_from_grouping(rng, &basis, dim),
        family_from_grouping(rng, &basis, dim),
    )
}

fn family_from_grouping(
    rng: &mut TestRng,
    basis: &[Vector],
    dim: usize,
) -> SpectralFamily<GaussianRational> {
    let m = 1 + rng.below(dim);
    let mut groups: Vec<Vec<Vector>> = vec![Vec::new(); m];
    for (i, b) in basis.iter().enumerate() {
        let g = if i < m { i } else { rng.below(m) };
        groups[g].push(b.clone());
    }
    let blocks = groups
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(j, g)| (format!("a{j}"), Subspace::canonicalize(&g, dim).unwrap()))
        .collect();
    SpectralFamily::new(blocks).unwrap()
}

pub fn rand_model(rng: &mut TestRng, dim: usize, n_agents: usize) -> Model<GaussianRational> {
    let agents = (0..n_agents)
        .map(|i| Agent::new(format!("{}", i + 1), vec![rand_family(rng, dim)]))
        .collect();
    let mut events = BTreeMap::new();
    for i in 0..2 {
        events.insert(format!("E{i}"), rand_subspace(rng, dim));
    }
    let mut states = BTreeMap::new();
    for i in 0..2 {
        states.insert(format!("s{i}"), rand_nonzero_vector(rng, dim));
    }
    Model { dimension: dim, agents, events, states }
}

pub fn rand_partition(rng: &mut TestRng, omega: usize) -> ClassicalPartition {
    let m = 1 + rng.below(omega);
    let mut blocks: Vec<StateSet> = vec![BTreeSet::new(); m];
    for w in 0..omega {
        let g = if w < m { w } else { rng.below(m) };
        blocks[g].insert(w);
    }
    blocks.retain(|b| !b.is_empty());
    ClassicalPartition::new(omega, blocks).unwrap()
}

pub fn rand_subset(rng: &mut TestRng, omega: usize) -> StateSet {
    (0..omega).filter(|_| rng.below(2) == 1).collect()
}

pub fn rand_classical_model(rng: &mut TestRng, omega: usize, n_agents: usize) -> ClassicalModel {
    let partitions = (0..n_agents).map(|_| rand_partition(rng, omega)).collect();
    let mut events = BTreeMap::new();
    for i in 0..2 {
        events.insert(format!("E{i}"), rand_subset(rng, omega));
    }
    ClassicalModel::new(omega, partitions, events).unwrap()
}

// ---------------------------------------------------------------------------
// independent oracles
// ---------------------------------------------------------------------------

/// Null space of the row-major matrix `rows` (a map C^cols -> C^rows), by an
/// elimination written independently of the library's canonicalization.
fn nullspace(mut rows: Vec<Vec<GaussianRational>>, cols: usize) -> Vec<Vec<GaussianRational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = gr(1, 0) / rows[rank][c].clone();
        for e in rows[rank].iter_mut() {
            *e = e.clone() * inv.clone();
        }
        let lead = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (e, l) in row.iter_mut().zip(&lead) {
                    *e = e.clone() - f.clone() * l.clone();
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    let mut result = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![gr(0, 0); cols];
        x[free] = gr(1, 0);
        for (row, &p) in rows.iter().zip(&pivots) {
            x[p] = gr(0, 0) - row[free].clone();
        }
        result.push(x);
    }
    result
}

/// Direct intersection of spans: solve `Σ c_i s_i = Σ d_j t_j` and collect
/// the left-hand combinations. Independent of the De Morgan meet.
pub fn meet_oracle(s: &Subspace, t: &Subspace) -> Subspace {
    let dim = s.ambient_dim();
    if s.rank() == 0 || t.rank() == 0 {
        return Subspace::zero(dim);
    }
    let rs = s.rank();
    let cols = rs + t.rank();
    // rows indexed by ambient coordinate: [S_basis^T | -T_basis^T]
    let rows: Vec<Vec<GaussianRational>> = (0..dim)
        .map(|coord| {
            let mut row: Vec<GaussianRational> =
                s.basis().iter().map(|b| b.entries()[coord].clone()).collect();
            row.extend(
                t.basis()
                    .iter()
                    .map(|b| gr(0, 0) - b.entries()[coord].clone()),
            );
            row
        })
        .collect();
    let vectors: Vec<Vector> = nullspace(rows, cols)
        .into_iter()
        .map(|sol| {
            let mut x = Vector::zero(dim);
            for (c, b) in sol[..rs].iter().zip(s.basis()) {
                x = x.add(&b.scaled(c)).unwrap();
            }
            x
        })
        .collect();
    Subspace::canonicalize(&vectors, dim).unwrap()
}

/// The orthogonal projector onto `s` as an explicit matrix,
/// `P = B^T G^{-1} conj(B)` for the Gram matrix `G = conj(B) B^T`.
pub fn projector_matrix(s: &Subspace) -> Matrix {
    let dim = s.ambient_dim();
    let r = s.rank();
    if r == 0 {
        return Matrix::from_fn(dim, dim, |_, _| gr(0, 0));
    }
    let b = Matrix::from_rows(s.basis());
    let b_t = Matrix::from_fn(dim, r, |i, j| b.get(j, i).clone());
    let b_conj = Matrix::from_fn(r, dim, |i, j| Scalar::conj(b.get(i, j)));
    let g = b_conj.mul(&b_t).unwrap();
    // invert G column by column
    let g_inv = {
        let cols: Vec<Vector> = (0..r).map(|k| g.solve(&Vector::basis(r, k)).unwrap()).collect();
        Matrix::from_fn(r, r, |i, j| cols[j].entries()[i].clone())
    };
    b_t.mul(&g_inv).unwrap().mul(&b_conj).unwrap()
}

/// Matrix-product commutation check between every block-projector pair.
pub fn commute_oracle(
    f: &SpectralFamily<GaussianRational>,
    g: &SpectralFamily<GaussianRational>,
) -> bool {
    f.blocks().iter().all(|(_, p)| {
        g.blocks().iter().all(|(_, qb)| {
            let pm = projector_matrix(p);
            let qm = projector_matrix(qb);
            pm.mul(&qm).unwrap() == qm.mul(&pm).unwrap()
        })
    })
}
