//! The end-to-end randomized coloring loop: sample a partial coloring of
//! parts 1..k−1, extend it greedily to the last part, and while some
//! last-part vertex has its whole list forbidden, redraw the colors of that
//! vertex's neighborhood and try again.
//!
//! Non-regular instances are first embedded into a Δ-regular supergraph
//! (padding vertices get the default list {0..q−1}); the returned coloring
//! is the restriction to the original vertices.

use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{KPartiteHypergraph, RegularEmbedding, VertexId};
use crate::lists::{ColorList, ListAssignment};
use crate::sampler::{
    edge_status, resample_into, sample_partial_with, ColorDistribution, EdgeStatus,
    PartialColoring,
};

/// A color for every vertex, stored in flat (part-major) vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullColoring {
    pub colors: Vec<u32>,
}

impl FullColoring {
    pub fn get(&self, h: &KPartiteHypergraph, v: VertexId) -> Result<u32> {
        Ok(self.colors[h.global_index(v)?])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Success,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub coloring: Option<FullColoring>,
    /// Sample/extend cycles run, counting the initial sample.
    pub rounds: u64,
    /// Blocked-vertex resample events consumed.
    pub resamples: u64,
}

/// A partial coloring of parts 1..k−1 extended to the last part wherever
/// possible.
#[derive(Clone, Debug)]
pub struct Extension {
    pub coloring: PartialColoring,
    /// Last-part vertices whose entire list was forbidden, ascending.
    pub blocked: Vec<VertexId>,
}

/// Gives every last-part vertex the smallest color of its list that no
/// landed edge forbids; vertices with no such color are reported blocked
/// and left uncolored.
pub fn extend(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    phi: &PartialColoring,
) -> Result<Extension> {
    let mut landed: Vec<Option<u32>> = Vec::with_capacity(h.edge_count());
    for e in h.edges() {
        landed.push(match edge_status(h, phi, e)? {
            EdgeStatus::Landed(c) => Some(c),
            EdgeStatus::Open => None,
        });
    }
    let mut coloring = phi.clone();
    let mut blocked = Vec::new();
    for v in h.part_vertices(h.k()) {
        let list = lists.for_vertex(h, v)?;
        let mut banned = vec![false; list.len()];
        for &ei in h.incident_edges(v)? {
            if let Some(c) = landed[ei as usize] {
                if let Some(r) = list.rank(c) {
                    banned[r as usize - 1] = true;
                }
            }
        }
        match list.iter().zip(&banned).find(|(_, &b)| !b) {
            Some((c, _)) => coloring.set(h, v, c)?,
            None => blocked.push(v),
        }
    }
    Ok(Extension { coloring, blocked })
}

/// Default resample budget: 100 events per last-part vertex.
pub fn default_budget(h: &KPartiteHypergraph) -> u64 {
    100 * u64::from(h.part_size(h.k()))
}

/// Runs the full loop. `budget` counts resample events; `None` uses
/// [`default_budget`] of the (possibly embedded) instance.
pub fn solve(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    budget: Option<u64>,
    seed: u64,
) -> Result<SolveOutcome> {
    if !lists.is_normalized(q) {
        return Err(Error::NotNormalized { q });
    }
    let delta = h.max_degree();
    if h.is_regular(delta) {
        return solve_regular(h, lists, q, budget, seed);
    }
    let emb = h.embed_regular_detailed(delta)?;
    let elists = lists_for_embedding(&emb, h, lists, q)?;
    let outcome = solve_regular(&emb.hypergraph, &elists, q, budget, seed)?;
    let coloring = match outcome.coloring {
        None => None,
        Some(full) => {
            // Original ids are preserved by the embedding, so the restriction
            // is a straight per-vertex lookup.
            let mut colors = Vec::with_capacity(h.vertex_count());
            for v in h.vertices() {
                colors.push(full.get(&emb.hypergraph, v)?);
            }
            Some(FullColoring { colors })
        }
    };
    Ok(SolveOutcome { coloring, ..outcome })
}

/// Lists for an embedded instance: copies inherit the source vertex's list,
/// padding vertices get {0..q−1}.
pub fn lists_for_embedding(
    emb: &RegularEmbedding,
    source: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
) -> Result<ListAssignment> {
    let mut out = Vec::with_capacity(emb.hypergraph.vertex_count());
    for v in emb.hypergraph.vertices() {
        out.push(match emb.source_vertex(v) {
            Some(src) => lists.for_vertex(source, src)?.clone(),
            None => ColorList::range(0, q),
        });
    }
    ListAssignment::from_lists(&emb.hypergraph, out)
}

fn solve_regular(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    budget: Option<u64>,
    seed: u64,
) -> Result<SolveOutcome> {
    let budget = budget.unwrap_or_else(|| default_budget(h));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phi = sample_partial_with(h, lists, q, ColorDistribution::Tilted, &mut rng)?;
    let mut resamples: u64 = 0;
    loop {
        let ext = extend(h, lists, &phi)?;
        if ext.blocked.is_empty() {
            let colors: Vec<u32> = ext
                .coloring
                .colors()
                .iter()
                .map(|c| c.expect("extension colored every vertex"))
                .collect();
            let full = FullColoring { colors };
            debug_assert!(verify(h, lists, &full).is_valid());
            return Ok(SolveOutcome {
                status: SolveStatus::Success,
                coloring: Some(full),
                rounds: resamples + 1,
                resamples,
            });
        }
        if resamples >= budget {
            return Ok(SolveOutcome {
                status: SolveStatus::BudgetExhausted,
                coloring: None,
                rounds: resamples + 1,
                resamples,
            });
        }
        let v = ext.blocked[0];
        let neighbors: Vec<VertexId> = h.neighborhood(v)?.into_iter().collect();
        resample_into(
            h,
            lists,
            q,
            &mut phi,
            &neighbors,
            ColorDistribution::Tilted,
            &mut rng,
        )?;
        resamples += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ColoringViolation {
    WrongLength { got: usize, want: usize },
    ColorNotInList { vertex: VertexId, color: u32 },
    MonochromaticEdge { edge: usize, color: u32 },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringViolation::WrongLength { got, want } => {
                write!(f, "coloring covers {got} vertices, instance has {want}")
            }
            ColoringViolation::ColorNotInList { vertex, color } => {
                write!(f, "vertex {vertex}: color {color} is not in its list")
            }
            ColoringViolation::MonochromaticEdge { edge, color } => {
                write!(f, "edge {edge}: all members share color {color}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub violations: Vec<ColoringViolation>,
}

impl ColoringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ColoringReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks that every vertex wears a color from its own list and no edge is
/// monochromatic.
pub fn verify(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    coloring: &FullColoring,
) -> ColoringReport {
    let mut violations = Vec::new();
    if coloring.colors.len() != h.vertex_count() {
        violations.push(ColoringViolation::WrongLength {
            got: coloring.colors.len(),
            want: h.vertex_count(),
        });
        return ColoringReport { violations };
    }
    for (g, &c) in coloring.colors.iter().enumerate() {
        if !lists.lists()[g].contains(c) {
            violations.push(ColoringViolation::ColorNotInList {
                vertex: h.vertex_at(g),
                color: c,
            });
        }
    }
    for (i, e) in h.edges().iter().enumerate() {
        let first = coloring.colors[h
            .global_index(e.head())
            .expect("edge members exist in the instance")];
        let mono = e.members().iter().all(|&v| {
            coloring.colors[h.global_index(v).expect("member exists")] == first
        });
        if mono {
            violations.push(ColoringViolation::MonochromaticEdge {
                edge: i,
                color: first,
            });
        }
    }
    ColoringReport { violations }
}
