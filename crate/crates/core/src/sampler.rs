//! W-random graph sampling.
//!
//! Reproducibility contract: a graph is a pure function of
//! `(graphon, n, seed)`. The stream is `ChaCha8Rng::seed_from_u64(seed)`
//! (rand_chacha). It first yields `n * s` latent uniforms in node-major
//! order (node 0's s coordinates, then node 1's, ...), then one uniform per
//! pair `(i, j)`, `i < j`, in row-major order. The edge is kept when that
//! uniform is below `W(u_i, u_j)`.
//!
//! Every node carries one latent vector of dimension `s` shared by all of
//! its pairs, so a tensor graphon's motif densities factor across components.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphon::Graphon;

/// A sampled graph together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledGraph {
    pub graph: SimpleGraph,
    pub seed: u64,
    pub descriptor: String,
}

impl SampledGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.graph.edges()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.graph.degrees()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        2.0 * self.graph.edge_count() as f64 / self.n() as f64
    }
}

/// Node latents, `n` rows of `latent_dim` coordinates. A debug artifact:
/// not part of [`SampledGraph`] equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Latents {
    pub latent_dim: usize,
    pub values: Vec<f64>,
}

impl Latents {
    pub fn node(&self, i: usize) -> &[f64] {
        &self.values[i * self.latent_dim..(i + 1) * self.latent_dim]
    }
}

pub fn sample(graphon: &Graphon, n: usize, seed: u64) -> SampledGraph {
    sample_with_latents(graphon, n, seed).0
}

pub fn sample_with_latents(graphon: &Graphon, n: usize, seed: u64) -> (SampledGraph, Latents) {
    let s = graphon.latent_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n * s).map(|_| rng.random::<f64>()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        let xi = &values[i * s..(i + 1) * s];
        for j in i + 1..n {
            let p = graphon.eval_unchecked(xi, &values[j * s..(j + 1) * s]);
            let draw: f64 = rng.random();
            if draw < p {
                edges.push((i, j));
            }
        }
    }
    let graph = SimpleGraph::from_sorted_unique(n, edges);
    (
        SampledGraph {
            graph,
            seed,
            descriptor: graphon.descriptor(),
        },
        Latents {
            latent_dim: s,
            values,
        },
    )
}

/// Seed of repetition `rep` in a batch rooted at `base_seed`: the SplitMix64
/// finaliser applied to `base_seed + (rep + 1) * 0x9E3779B97F4A7C15`.
pub fn derive_seed(base_seed: u64, rep: u64) -> u64 {
    let mut z = base_seed.wrapping_add(rep.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `reps` independent graphs; repetition `k` uses `derive_seed(base_seed, k)`.
/// Repetitions run in parallel, output order is by `k`.
pub fn sample_batch(
    graphon: &Graphon,
    n: usize,
    base_seed: u64,
    reps: usize,
) -> Result<Vec<SampledGraph>> {
    if reps == 0 {
        return Err(Error::usage("reps must be at least 1"));
    }
    Ok((0..reps as u64)
        .into_par_iter()
        .map(|k| sample(graphon, n, derive_seed(base_seed, k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::CopulaSpec;

    fn pi() -> Graphon {
        Graphon::copula(CopulaSpec::independence()).unwrap()
    }

    #[test]
    fn single_node_is_empty() {
        let g = sample(&pi(), 1, 3);
        assert_eq!(g.edges(), &[]);
        assert_eq!(g.degrees(), vec![0]);
    }

    #[test]
    fn unit_kernel_gives_complete_graph() {
        let ones = Graphon::density(CopulaSpec::independence()).unwrap();
        let g = sample(&ones, 5, 99);
        assert_eq!(g.graph, SimpleGraph::complete(5));
        assert_eq!(g.descriptor, "pi:density");
    }

    #[test]
    fn simple_graph_invariants() {
        let g = sample(&"gumbel:4".parse().unwrap(), 300, 1);
        let edges = g.edges();
        assert!(edges.iter().all(|&(i, j)| i < j && j < 300));
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * edges.len());
    }

    #[test]
    fn deterministic_for_equal_inputs() {
        let graphon: Graphon = "joe:2:density*gumbel:3:density".parse().unwrap();
        let a = sample(&graphon, 200, 42);
        let b = sample(&graphon, 200, 42);
        assert_eq!(a, b);
        let c = sample(&graphon, 200, 43);
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn batch_matches_derived_seeds() {
        let graphon = pi();
        let batch = sample_batch(&graphon, 50, 7, 1).unwrap();
        assert_eq!(batch[0], sample(&graphon, 50, derive_seed(7, 0)));
        assert_eq!(
            sample_batch(&graphon, 50, 7, 3).unwrap(),
            sample_batch(&graphon, 50, 7, 3).unwrap()
        );
        assert!(matches!(
            sample_batch(&graphon, 50, 7, 0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn batch_reps_are_distinct() {
        let batch = sample_batch(&pi(), 1000, 2024, 10).unwrap();
        for i in 0..batch.len() {
            for j in i + 1..batch.len() {
                assert_ne!(batch[i].edges(), batch[j].edges());
            }
        }
    }

    #[test]
    fn independence_edge_count() {
        let n = 1000;
        let batch = sample_batch(&pi(), n, 1, 10).unwrap();
        let mean = batch.iter().map(|g| g.edges().len() as f64).sum::<f64>() / 10.0;
        let expected = (n * (n - 1) / 2) as f64 * 0.25;
        assert!(
            ((mean - expected) / expected).abs() < 0.02,
            "{mean} vs {expected}"
        );
    }

    #[test]
    fn independence_conditional_edge_frequency() {
        // P(edge | u_i) = u_i * E[u] = u_i / 2 under Π
        let n = 2000;
        let (g, latents) = sample_with_latents(&pi(), n, 77);
        let mut hits = 0usize;
        let mut trials = 0usize;
        let mut expected = 0.0;
        for i in 0..n {
            let ui = latents.node(i)[0];
            if (ui - 0.5).abs() < 0.02 {
                trials += n - 1;
                hits += g.graph.degree(i);
                let others: f64 = (0..n).filter(|&j| j != i).map(|j| latents.node(j)[0]).sum();
                expected += ui * others;
            }
        }
        assert!(trials > 0);
        let p_hat = hits as f64 / trials as f64;
        let p = expected / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((p_hat - p).abs() < 3.0 * se, "{p_hat} vs {p} (se {se})");
    }

    #[test]
    fn derive_seed_spreads() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| derive_seed(0, k)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(0, 1));
    }
}
