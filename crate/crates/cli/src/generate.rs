//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed and emits canonical instance text, so the same seed
//! always produces the same bytes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use parcover::model::Hypergraph;
use parcover::setcover::SetCoverInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{emit_hypergraph, emit_set_cover, parse_weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
}

fn infeasible(msg: impl Into<String>) -> GenerateError {
    GenerateError::InfeasibleParams(msg.into())
}

fn int_weight(w: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(w))
}

fn check_weight_range(min_weight: u64, max_weight: u64) -> Result<(), GenerateError> {
    if min_weight == 0 {
        return Err(infeasible("weights must be positive"));
    }
    if min_weight > max_weight {
        return Err(infeasible("weight range is empty"));
    }
    Ok(())
}

/// Random hypergraph: `m` edges of 2..=`rank` distinct vertices each,
/// integer weights drawn uniformly from the given range.
pub fn random_hypergraph(
    n: usize,
    m: usize,
    rank: usize,
    min_weight: u64,
    max_weight: u64,
    seed: u64,
) -> Result<String, GenerateError> {
    check_weight_range(min_weight, max_weight)?;
    if n == 0 {
        return Err(infeasible("need at least one vertex"));
    }
    let hi = rank.min(n);
    if hi == 0 {
        return Err(infeasible("rank must be positive"));
    }
    let lo = hi.min(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<BigRational> = (0..n)
        .map(|_| int_weight(rng.gen_range(min_weight..=max_weight)))
        .collect();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let size = rng.gen_range(lo..=hi);
        let mut edge: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_vec();
        edge.sort_unstable();
        edges.push(edge);
    }
    let h = Hypergraph::new(weights, edges).expect("constructed within bounds");
    Ok(emit_hypergraph(&h).expect("integer weights always emit"))
}

/// Random set cover over `elements` elements and `sets` sets. Each element
/// is placed into 1..=`rank` distinct sets, so coverage holds by
/// construction and the reduced hypergraph has rank ≤ `rank`.
pub fn random_set_cover(
    sets: usize,
    elements: usize,
    rank: usize,
    min_weight: u64,
    max_weight: u64,
    seed: u64,
) -> Result<String, GenerateError> {
    check_weight_range(min_weight, max_weight)?;
    if sets == 0 {
        return Err(infeasible("need at least one set"));
    }
    if rank == 0 {
        return Err(infeasible("rank must be positive"));
    }
    let hi = rank.min(sets);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<BigRational> = (0..sets)
        .map(|_| int_weight(rng.gen_range(min_weight..=max_weight)))
        .collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); sets];
    for x in 0..elements {
        let count = rng.gen_range(1..=hi);
        let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, sets, count).into_vec();
        chosen.sort_unstable();
        for s in chosen {
            members[s].push(x);
        }
    }
    let sc = SetCoverInstance::new(weights, members, elements).expect("constructed within bounds");
    Ok(emit_set_cover(&sc).expect("integer weights always emit"))
}

/// Star: vertex 0 is the center with the given decimal weight, joined to
/// `leaves` unit-weight leaves by one edge each.
pub fn star(leaves: usize, center_weight: &str) -> Result<String, GenerateError> {
    if leaves == 0 {
        return Err(infeasible("need at least one leaf"));
    }
    let center = parse_weight(center_weight)
        .ok_or_else(|| infeasible(format!("bad center weight `{center_weight}`")))?;
    if !center.is_positive() {
        return Err(infeasible("center weight must be positive"));
    }
    let mut weights = vec![center];
    weights.extend((0..leaves).map(|_| int_weight(1)));
    let edges: Vec<Vec<usize>> = (1..=leaves).map(|leaf| vec![0, leaf]).collect();
    let h = Hypergraph::new(weights, edges).expect("constructed within bounds");
    emit_hypergraph(&h).ok_or_else(|| infeasible("center weight does not fit the file format"))
}

/// Path on `n` vertices with integer weights drawn from the range
/// (unit weights when the range is 1..=1).
pub fn path(
    n: usize,
    min_weight: u64,
    max_weight: u64,
    seed: u64,
) -> Result<String, GenerateError> {
    check_weight_range(min_weight, max_weight)?;
    if n < 2 {
        return Err(infeasible("a path needs at least two vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<BigRational> = (0..n)
        .map(|_| int_weight(rng.gen_range(min_weight..=max_weight)))
        .collect();
    let edges: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    let h = Hypergraph::new(weights, edges).expect("constructed within bounds");
    Ok(emit_hypergraph(&h).expect("integer weights always emit"))
}

/// Clique on `n` vertices: every pair is an edge.
pub fn clique(
    n: usize,
    min_weight: u64,
    max_weight: u64,
    seed: u64,
) -> Result<String, GenerateError> {
    check_weight_range(min_weight, max_weight)?;
    if n < 2 {
        return Err(infeasible("a clique needs at least two vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<BigRational> = (0..n)
        .map(|_| int_weight(rng.gen_range(min_weight..=max_weight)))
        .collect();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(vec![i, j]);
        }
    }
    let h = Hypergraph::new(weights, edges).expect("constructed within bounds");
    Ok(emit_hypergraph(&h).expect("integer weights always emit"))
}
