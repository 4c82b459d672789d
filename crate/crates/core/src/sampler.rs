//! Randomized partial colorings and the probabilities attached to them.
//!
//! Vertices in parts 1..k−1 are colored independently from their lists; the
//! last part stays uncolored. First-part vertices use a tilted distribution
//! that favors low-ranked colors:
//!
//!   P(color with rank i) = 2(4q − 3i) / (q(5q − 3)),   i = 1..q
//!
//! which sums to exactly 1 and stays strictly positive (4q − 3i ≥ q). All
//! other sampled parts draw uniformly. An edge whose first k−1 members all
//! received the same color c "lands on" c; the probability of that event,
//! and its sum over the edges at a vertex, are available in exact rational
//! arithmetic.

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KPartiteHypergraph, VertexId};
use crate::lists::{ColorList, ListAssignment};

/// How sampled parts draw their colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorDistribution {
    /// First part tilted towards low ranks, other sampled parts uniform.
    Tilted,
    /// Every sampled part uniform (a control for experiments).
    UniformAll,
}

impl std::fmt::Display for ColorDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ColorDistribution::Tilted => "tilted",
            ColorDistribution::UniformAll => "uniform-all",
        })
    }
}

impl std::str::FromStr for ColorDistribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tilted" => Ok(ColorDistribution::Tilted),
            "uniform-all" => Ok(ColorDistribution::UniformAll),
            other => Err(Error::BadParameter(format!(
                "unknown distribution {other:?} (expected tilted or uniform-all)"
            ))),
        }
    }
}

/// Independent random stream for one trial of a seeded experiment. Streams
/// with the same seed and different trial numbers never overlap.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn check_sampling_params(lists: &ListAssignment, q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::ListSizeTooSmall { got: q, min: 2 });
    }
    if !lists.is_normalized(q) {
        return Err(Error::NotNormalized { q });
    }
    Ok(())
}

/// Tilted (or uniform, for middle parts) probability of drawing `color` for
/// a vertex of `part` whose list is `list`. The last part is never sampled.
pub fn tilted_prob(k: u32, part: u32, list: &ColorList, color: u32, q: u32) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::ListSizeTooSmall { got: q, min: 2 });
    }
    if part == 0 || part > k {
        return Err(Error::BadParameter(format!("part {part} out of 1..={k}")));
    }
    if part == k {
        return Err(Error::LastPartSampled(k));
    }
    if list.len() != q as usize {
        return Err(Error::NotNormalized { q });
    }
    let rank = list.rank(color).ok_or(Error::ColorNotInList(color))?;
    if part == 1 {
        Ok(BigRational::new(
            BigInt::from(2 * (4 * u64::from(q) - 3 * u64::from(rank))),
            BigInt::from(u64::from(q) * (5 * u64::from(q) - 3)),
        ))
    } else {
        Ok(BigRational::new(BigInt::from(1), BigInt::from(q)))
    }
}

pub fn tilted_prob_f64(k: u32, part: u32, list: &ColorList, color: u32, q: u32) -> Result<f64> {
    let rank = list.rank(color).ok_or(Error::ColorNotInList(color))?;
    tilted_prob(k, part, list, color, q)?;
    if part == 1 {
        Ok(2.0 * (4.0 * f64::from(q) - 3.0 * f64::from(rank))
            / (f64::from(q) * (5.0 * f64::from(q) - 3.0)))
    } else {
        Ok(1.0 / f64::from(q))
    }
}

/// Cumulative distribution of the first-part rank draw, one entry per rank.
/// The final entry is exactly 1.0 so inversion never falls off the end.
fn tilted_cdf(q: u32) -> Vec<f64> {
    let q = u64::from(q);
    let den = (q * (5 * q - 3)) as f64;
    let mut cdf: Vec<f64> = (1..=q)
        .map(|i| (8 * q * i - 3 * i * (i + 1)) as f64 / den)
        .collect();
    *cdf.last_mut().unwrap() = 1.0;
    cdf
}

/// A coloring of some vertices; the last part (and any resample gaps) stay
/// `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    colors: Vec<Option<u32>>,
}

impl PartialColoring {
    pub fn empty(h: &KPartiteHypergraph) -> Self {
        PartialColoring {
            colors: vec![None; h.vertex_count()],
        }
    }

    pub fn get(&self, h: &KPartiteHypergraph, v: VertexId) -> Result<Option<u32>> {
        Ok(self.colors[h.global_index(v)?])
    }

    pub fn set(&mut self, h: &KPartiteHypergraph, v: VertexId, color: u32) -> Result<()> {
        let g = h.global_index(v)?;
        self.colors[g] = Some(color);
        Ok(())
    }

    pub fn colors(&self) -> &[Option<u32>] {
        &self.colors
    }

    pub fn by_global(&self, g: usize) -> Option<u32> {
        self.colors[g]
    }
}

/// Samples a fresh partial coloring of parts 1..k−1 with the tilted
/// distribution, deterministically from `seed`.
pub fn sample_partial(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    seed: u64,
) -> Result<PartialColoring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_partial_with(h, lists, q, ColorDistribution::Tilted, &mut rng)
}

pub fn sample_partial_with(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    mode: ColorDistribution,
    rng: &mut ChaCha8Rng,
) -> Result<PartialColoring> {
    check_sampling_params(lists, q)?;
    let mut phi = PartialColoring::empty(h);
    let cdf = tilted_cdf(q);
    for part in 1..h.k() {
        for v in h.part_vertices(part) {
            let g = h.global_index(v)?;
            phi.colors[g] = Some(draw(mode, part, &lists.lists()[g], &cdf, q, rng));
        }
    }
    Ok(phi)
}

/// Redraws the given vertices in place, in the order given. Vertices in the
/// last part are skipped: they are never sampled.
pub fn resample_into(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    phi: &mut PartialColoring,
    vertices: &[VertexId],
    mode: ColorDistribution,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    check_sampling_params(lists, q)?;
    let cdf = tilted_cdf(q);
    for &v in vertices {
        if v.part == h.k() {
            continue;
        }
        let g = h.global_index(v)?;
        phi.colors[g] = Some(draw(mode, v.part, &lists.lists()[g], &cdf, q, rng));
    }
    Ok(())
}

fn draw(
    mode: ColorDistribution,
    part: u32,
    list: &ColorList,
    cdf: &[f64],
    q: u32,
    rng: &mut ChaCha8Rng,
) -> u32 {
    let idx = if part == 1 && mode == ColorDistribution::Tilted {
        let u: f64 = rng.gen();
        cdf.partition_point(|&f| f <= u)
    } else {
        rng.gen_range(0..q) as usize
    };
    list.colors()[idx]
}

/// What a partial coloring did to one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    /// All first k−1 members share this color; the edge now forbids it for
    /// its last member.
    Landed(u32),
    /// At least two of the first k−1 members disagree.
    Open,
}

pub fn edge_status(h: &KPartiteHypergraph, phi: &PartialColoring, e: &Edge) -> Result<EdgeStatus> {
    let sampled = &e.members()[..e.members().len() - 1];
    let mut common: Option<u32> = None;
    for &v in sampled {
        let c = phi
            .get(h, v)?
            .ok_or(Error::UncoloredMember(v))?;
        match common {
            None => common = Some(c),
            Some(c0) if c0 == c => {}
            Some(_) => return Ok(EdgeStatus::Open),
        }
    }
    Ok(EdgeStatus::Landed(common.expect("k >= 2 so edges have sampled members")))
}

/// Rank of `color` in the first-part member's list, provided `color` lies in
/// the list of every member of `e`. This is the quantity the landing
/// probability depends on.
fn landing_rank(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    e: &Edge,
    color: u32,
) -> Result<Option<u32>> {
    let head_list = lists.for_vertex(h, e.head())?;
    let rank = match head_list.rank(color) {
        Some(r) => r,
        None => return Ok(None),
    };
    for &v in &e.members()[1..] {
        if !lists.for_vertex(h, v)?.contains(color) {
            return Ok(None);
        }
    }
    Ok(Some(rank))
}

/// Exact probability that edge `e` lands on `color` under the tilted
/// distribution: 2(4q − 3i) / (q^(k−1)(5q − 3)) with i the color's rank in
/// the first member's list, and 0 unless every member of `e` lists `color`.
pub fn problematic_prob(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    e: &Edge,
    color: u32,
) -> Result<BigRational> {
    check_sampling_params(lists, q)?;
    match landing_rank(h, lists, e, color)? {
        None => Ok(BigRational::from(BigInt::from(0))),
        Some(rank) => Ok(BigRational::new(
            BigInt::from(2 * (4 * u64::from(q) - 3 * u64::from(rank))),
            BigInt::from(u64::from(q)).pow(h.k() - 1) * BigInt::from(5 * u64::from(q) - 3),
        )),
    }
}

pub fn problematic_prob_f64(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    e: &Edge,
    color: u32,
) -> Result<f64> {
    check_sampling_params(lists, q)?;
    match landing_rank(h, lists, e, color)? {
        None => Ok(0.0),
        Some(rank) => Ok(2.0 * (4.0 * f64::from(q) - 3.0 * f64::from(rank))
            / (f64::from(q).powi(h.k() as i32 - 1) * (5.0 * f64::from(q) - 3.0))),
    }
}

/// Exact expected number of edges at `v` (a last-part vertex) landing on
/// `color`: the sum of the landing probabilities over the edges at `v`.
/// Accumulated as a single integer before one rational division.
pub fn expected_problematic(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    v: VertexId,
    color: u32,
) -> Result<BigRational> {
    check_sampling_params(lists, q)?;
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    let mut weight: u64 = 0;
    for &ei in h.incident_edges(v)? {
        if let Some(rank) = landing_rank(h, lists, h.edge(ei as usize), color)? {
            weight += 4 * u64::from(q) - 3 * u64::from(rank);
        }
    }
    Ok(BigRational::new(
        BigInt::from(2 * weight),
        BigInt::from(u64::from(q)).pow(h.k() - 1) * BigInt::from(5 * u64::from(q) - 3),
    ))
}

/// Which of a last-part vertex's colors are forbidden by landed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    pub vertex: VertexId,
    pub colors: Vec<u32>,
    pub blocked: Vec<bool>,
    /// True when every color in the vertex's list is forbidden (vacuously
    /// true for an empty list).
    pub all_blocked: bool,
}

pub fn block_report(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    v: VertexId,
) -> Result<BlockReport> {
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    let list = lists.for_vertex(h, v)?;
    let colors: Vec<u32> = list.iter().collect();
    let mut blocked = vec![false; colors.len()];
    for &ei in h.incident_edges(v)? {
        if let EdgeStatus::Landed(c) = edge_status(h, phi, h.edge(ei as usize))? {
            if let Some(rank) = list.rank(c) {
                blocked[rank as usize - 1] = true;
            }
        }
    }
    let all_blocked = blocked.iter().all(|&b| b);
    Ok(BlockReport {
        vertex: v,
        colors,
        blocked,
        all_blocked,
    })
}

pub fn is_blocked(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
    v: VertexId,
) -> Result<bool> {
    Ok(block_report(h, lists, phi, v)?.all_blocked)
}
