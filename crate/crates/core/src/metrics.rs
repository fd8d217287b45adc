//! Exact motif counts and degree-assortativity of finite graphs.
//!
//! Three independent routes to Newman's r are provided:
//! [`empirical_assortativity`] (edge-end degree sums),
//! [`combinatorial_assortativity`] (motif counts) and
//! [`MixingStats::assortativity`] (excess-degree mixing matrix).
//! The first two are evaluated in exact integer arithmetic up to the final
//! division, so a zero denominator (any regular graph) is detected exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Counts of unlabeled copies of the motifs that determine r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SubgraphCounts {
    pub n: u64,
    /// edges
    pub p1: u64,
    /// paths on 3 nodes
    pub p2: u64,
    /// paths on 4 nodes
    pub p3: u64,
    /// triangles
    pub c3: u64,
    /// 3-stars
    pub s3: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Motif {
    P1,
    P2,
    P3,
    C3,
    S3,
}

impl Motif {
    pub const ALL: [Motif; 5] = [Motif::P1, Motif::P2, Motif::P3, Motif::C3, Motif::S3];

    pub fn node_count(self) -> usize {
        match self {
            Motif::P1 => 2,
            Motif::P2 | Motif::C3 => 3,
            Motif::P3 | Motif::S3 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Motif::P1 => "P1",
            Motif::P2 => "P2",
            Motif::P3 => "P3",
            Motif::C3 => "C3",
            Motif::S3 => "S3",
        }
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Motif {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(Motif::P1),
            "P2" => Ok(Motif::P2),
            "P3" => Ok(Motif::P3),
            "C3" => Ok(Motif::C3),
            "S3" => Ok(Motif::S3),
            _ => Err(Error::Parse(format!(
                "unknown motif '{s}' (expected P1, P2, P3, C3 or S3)"
            ))),
        }
    }
}

fn choose2(d: u64) -> u64 {
    d * d.saturating_sub(1) / 2
}

fn choose3(d: u64) -> u64 {
    if d < 3 {
        0
    } else {
        d * (d - 1) * (d - 2) / 6
    }
}

/// Largest graph for which triangles are counted with an adjacency bitset
/// (n²/8 bytes).
const BITSET_LIMIT: usize = 20_000;

/// Number of triangles.
pub fn triangle_count(g: &SimpleGraph) -> u64 {
    if g.n() <= BITSET_LIMIT {
        triangle_count_bitset(g)
    } else {
        triangle_count_merge(g)
    }
}

/// Each edge contributes its common neighbours; every triangle is then seen
/// once from each of its three edges.
fn triangle_count_bitset(g: &SimpleGraph) -> u64 {
    let words = g.n().div_ceil(64);
    let mut rows = vec![0u64; g.n() * words];
    for &(i, j) in g.edges() {
        rows[i * words + j / 64] |= 1 << (j % 64);
        rows[j * words + i / 64] |= 1 << (i % 64);
    }
    let common: u64 = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let a = &rows[i * words..(i + 1) * words];
            let b = &rows[j * words..(j + 1) * words];
            a.iter()
                .zip(b)
                .map(|(x, y)| (x & y).count_ones() as u64)
                .sum::<u64>()
        })
        .sum();
    common / 3
}

/// Intersects sorted neighbour lists over each edge, keeping only the third
/// node above both endpoints.
fn triangle_count_merge(g: &SimpleGraph) -> u64 {
    let mut total = 0u64;
    for &(i, j) in g.edges() {
        let (a, b) = (g.neighbors(i), g.neighbors(j));
        let (mut x, mut y) = (
            a.partition_point(|&k| k <= j),
            b.partition_point(|&k| k <= j),
        );
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    total += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    total
}

pub fn subgraph_counts(g: &SimpleGraph) -> SubgraphCounts {
    let degrees: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
    let p1 = g.edge_count() as u64;
    let p2 = degrees.iter().map(|&d| choose2(d)).sum();
    let s3 = degrees.iter().map(|&d| choose3(d)).sum();
    let c3 = triangle_count(g);
    let walks: u64 = g
        .edges()
        .iter()
        .map(|&(i, j)| (degrees[i] - 1) * (degrees[j] - 1))
        .sum();
    SubgraphCounts {
        n: g.n() as u64,
        p1,
        p2,
        p3: walks - 3 * c3,
        c3,
        s3,
    }
}

impl SubgraphCounts {
    /// (numerator, denominator) of r, both scaled by |P1|, as exact integers.
    fn assortativity_terms(&self) -> (i128, i128) {
        let (p1, p2, p3, c3, s3) = (
            self.p1 as i128,
            self.p2 as i128,
            self.p3 as i128,
            self.c3 as i128,
            self.s3 as i128,
        );
        let num = p1 * (p3 + 3 * c3) - p2 * p2;
        let den = p1 * (3 * s3 + p2) - p2 * p2;
        (num, den)
    }
}

/// C = 3|C3| / |P2|
pub fn clustering_coefficient(counts: &SubgraphCounts) -> Result<f64> {
    if counts.p2 == 0 {
        return Err(Error::undefined("clustering coefficient needs |P2| > 0"));
    }
    Ok(3.0 * counts.c3 as f64 / counts.p2 as f64)
}

/// Newman's r over edge ends, each edge counted in both orientations.
pub fn empirical_assortativity(g: &SimpleGraph) -> Result<f64> {
    let m = g.edge_count() as i128;
    if m == 0 {
        return Err(Error::undefined("assortativity of a graph without edges"));
    }
    let mut sum = 0i128; // Σ (j + k)
    let mut prod = 0i128; // Σ j k
    let mut squares = 0i128; // Σ (j² + k²)
    for &(i, j) in g.edges() {
        let (a, b) = (g.degree(i) as i128, g.degree(j) as i128);
        sum += a + b;
        prod += a * b;
        squares += a * a + b * b;
    }
    // r = (Σjk/m - (Σ(j+k)/2m)²) / (Σ(j²+k²)/2m - (Σ(j+k)/2m)²), times 4m²
    let num = 4 * m * prod - sum * sum;
    let den = 2 * m * squares - sum * sum;
    if den == 0 {
        return Err(Error::undefined(
            "degree variance over edge ends is zero (regular graph)",
        ));
    }
    Ok(num as f64 / den as f64)
}

/// r = |P2| (|P3|/|P2| + C - |P2|/|P1|) / (3|S3| - |P2| (|P2|/|P1| - 1))
pub fn combinatorial_assortativity(counts: &SubgraphCounts) -> Result<f64> {
    if counts.p1 == 0 {
        return Err(Error::undefined("assortativity of a graph without edges"));
    }
    let (num, den) = counts.assortativity_terms();
    if den == 0 {
        return Err(Error::undefined(
            "3|S3| - |P2|(|P2|/|P1| - 1) is zero (regular graph)",
        ));
    }
    Ok(num as f64 / den as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssortativitySign {
    Assortative,
    Neutral,
    Disassortative,
    Undefined,
}

impl AssortativitySign {
    pub fn name(self) -> &'static str {
        match self {
            AssortativitySign::Assortative => "assortative",
            AssortativitySign::Neutral => "neutral",
            AssortativitySign::Disassortative => "disassortative",
            AssortativitySign::Undefined => "undefined",
        }
    }
}

impl fmt::Display for AssortativitySign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sign of r from `|P3|/|P2| + C` against `|P2|/|P1|` (tolerance 1e-12).
pub fn classify_sign(counts: &SubgraphCounts) -> AssortativitySign {
    if counts.p1 == 0 || counts.p2 == 0 || counts.assortativity_terms().1 == 0 {
        return AssortativitySign::Undefined;
    }
    let lhs = (counts.p3 as f64 + 3.0 * counts.c3 as f64) / counts.p2 as f64;
    let rhs = counts.p2 as f64 / counts.p1 as f64;
    let diff = lhs - rhs;
    if diff.abs() <= 1e-12 * rhs.abs().max(1.0) {
        AssortativitySign::Neutral
    } else if diff > 0.0 {
        AssortativitySign::Assortative
    } else {
        AssortativitySign::Disassortative
    }
}

/// Excess-degree distribution and symmetric mixing matrix over edge ends.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingStats {
    /// q_k for excess degree k
    pub excess_degree_hist: BTreeMap<usize, f64>,
    /// e_jk over (excess, excess) pairs; symmetric
    pub mixing_matrix: BTreeMap<(usize, usize), f64>,
    pub sigma_q_sq: f64,
}

impl MixingStats {
    /// r = Σ_jk jk (e_jk - q_j q_k) / σ_q²
    pub fn assortativity(&self) -> Result<f64> {
        if self.sigma_q_sq <= 0.0 {
            return Err(Error::undefined("σ_q² is zero"));
        }
        let q = &self.excess_degree_hist;
        let covariance: f64 = self
            .mixing_matrix
            .iter()
            .map(|(&(j, k), &e)| (j * k) as f64 * e)
            .sum::<f64>()
            - {
                let mean: f64 = q.iter().map(|(&k, &p)| k as f64 * p).sum();
                mean * mean
            };
        Ok(covariance / self.sigma_q_sq)
    }
}

pub fn mixing_stats(g: &SimpleGraph) -> Result<MixingStats> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::undefined("mixing statistics need at least one edge"));
    }
    let degrees = g.degrees();
    let n = g.n() as f64;

    // q_k = (k + 1) p_k / Σ_k k p_k
    let mut p: BTreeMap<usize, f64> = BTreeMap::new();
    for &d in &degrees {
        *p.entry(d).or_default() += 1.0 / n;
    }
    let mean_degree: f64 = p.iter().map(|(&k, &pk)| k as f64 * pk).sum();
    let excess_degree_hist: BTreeMap<usize, f64> = p
        .iter()
        .filter(|(&k, _)| k > 0)
        .map(|(&k, &pk)| (k - 1, k as f64 * pk / mean_degree))
        .collect();

    let weight = 0.5 / m as f64;
    let mut mixing_matrix: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(i, j) in g.edges() {
        let (a, b) = (degrees[i] - 1, degrees[j] - 1);
        *mixing_matrix.entry((a, b)).or_default() += weight;
        *mixing_matrix.entry((b, a)).or_default() += weight;
    }

    let mean: f64 = excess_degree_hist.iter().map(|(&k, &q)| k as f64 * q).sum();
    let sigma_q_sq = excess_degree_hist
        .iter()
        .map(|(&k, &q)| (k as f64 - mean).powi(2) * q)
        .sum();

    Ok(MixingStats {
        excess_degree_hist,
        mixing_matrix,
        sigma_q_sq,
    })
}

fn falling(n: u64, k: u64) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Empirical motif density. Path and star densities are injective
/// (labeled copies over the falling factorial (n)_m: 2 labelings per path,
/// 6 per 3-star); the triangle density is the homomorphism density
/// `tr(A³) / n³ = 6|C3| / n³`.
pub fn empirical_density(counts: &SubgraphCounts, motif: Motif) -> Result<f64> {
    let needed = motif.node_count();
    if (counts.n as usize) < needed {
        return Err(Error::Size {
            needed,
            n: counts.n as usize,
        });
    }
    let n = counts.n;
    Ok(match motif {
        Motif::P1 => 2.0 * counts.p1 as f64 / falling(n, 2),
        Motif::P2 => 2.0 * counts.p2 as f64 / falling(n, 3),
        Motif::P3 => 2.0 * counts.p3 as f64 / falling(n, 4),
        Motif::S3 => 6.0 * counts.s3 as f64 / falling(n, 4),
        Motif::C3 => 6.0 * counts.c3 as f64 / (n as f64).powi(3),
    })
}

/// Everything `analyze` reports about one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub counts: SubgraphCounts,
    pub clustering: Option<f64>,
    pub r_empirical: Option<f64>,
    pub r_combinatorial: Option<f64>,
    pub sign: AssortativitySign,
}

impl MetricsReport {
    pub fn compute(g: &SimpleGraph) -> Self {
        let counts = subgraph_counts(g);
        MetricsReport {
            counts,
            clustering: clustering_coefficient(&counts).ok(),
            r_empirical: empirical_assortativity(g).ok(),
            r_combinatorial: combinatorial_assortativity(&counts).ok(),
            sign: classify_sign(&counts),
        }
    }

    pub const CSV_HEADER: &'static str =
        "n,m,p1,p2,p3,c3,s3,clustering,r_empirical,r_combinatorial,sign";

    pub fn csv_row(&self) -> String {
        let c = &self.counts;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.n,
            c.p1,
            c.p1,
            c.p2,
            c.p3,
            c.c3,
            c.s3,
            crate::report::fmt_opt(self.clustering),
            crate::report::fmt_opt(self.r_empirical),
            crate::report::fmt_opt(self.r_combinatorial),
            self.sign
        )
    }

    pub fn key_value(&self) -> String {
        let c = &self.counts;
        let mut kv = crate::report::KeyValue::default();
        kv.push("n", c.n);
        kv.push("m", c.p1);
        kv.push("p1", c.p1);
        kv.push("p2", c.p2);
        kv.push("p3", c.p3);
        kv.push("c3", c.c3);
        kv.push("s3", c.s3);
        kv.push("clustering", crate::report::fmt_opt(self.clustering));
        kv.push("r_empirical", crate::report::fmt_opt(self.r_empirical));
        kv.push(
            "r_combinatorial",
            crate::report::fmt_opt(self.r_combinatorial),
        );
        kv.push("sign", self.sign);
        kv.finish()
    }
}
