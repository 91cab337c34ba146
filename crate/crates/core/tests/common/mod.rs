//! Shared instance generators for the integration suites. Everything is
//! driven by a seeded ChaCha stream so failures replay exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use parcover::model::Hypergraph;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random instance with `n` in `n_range`, `m` in `m_range`, edge sizes from
/// 2 to `max_rank` (capped by `n`), and distinct vertices per edge. Integer
/// weights are drawn from `1..=50`; with `decimal_weights` they get one
/// fractional digit instead.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<usize>,
    max_rank: usize,
    decimal_weights: bool,
) -> Hypergraph<BigRational> {
    let n = rng.gen_range(n_range);
    let m = rng.gen_range(m_range);
    let weights = (0..n)
        .map(|_| {
            if decimal_weights {
                ratio(rng.gen_range(1..=500), 10)
            } else {
                rat(rng.gen_range(1..=50))
            }
        })
        .collect();
    let edges = (0..m)
        .map(|_| {
            let r = rng.gen_range(2..=max_rank.min(n));
            sample(rng, n, r).into_vec()
        })
        .collect();
    Hypergraph::new(weights, edges).expect("generated instance is well formed")
}

/// Random rank-2 multigraph: duplicate edges and shared endpoints allowed,
/// self-loops not.
pub fn random_rank2_multigraph(
    rng: &mut ChaCha8Rng,
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<usize>,
) -> Hypergraph<BigRational> {
    let n = rng.gen_range(n_range).max(2);
    let m = rng.gen_range(m_range);
    let weights = (0..n).map(|_| rat(rng.gen_range(1..=50))).collect();
    let edges = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            vec![u.min(v), u.max(v)]
        })
        .collect();
    Hypergraph::new(weights, edges).expect("generated instance is well formed")
}
