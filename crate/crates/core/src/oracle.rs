//! Ground-truth engines: exhaustive colorability, exact blocking
//! probabilities on star instances with independent structure, and the
//! seeded Monte Carlo estimators everything else is calibrated against.

pub mod choice;

use num::{BigRational, One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{KPartiteHypergraph, VertexId};
use crate::lists::ListAssignment;
use crate::sampler::{
    is_blocked, problematic_prob, resample_into, trial_rng, ColorDistribution, PartialColoring,
};
use crate::solver::FullColoring;

/// Point estimate of a Bernoulli probability with its standard error.
#[derive(Clone, Debug, Serialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EstimatorResult {
    fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        EstimatorResult {
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }

    /// For estimands that are exactly zero by structure (no randomness used).
    fn exact_zero(trials: u64, seed: u64) -> Self {
        EstimatorResult {
            estimate: 0.0,
            std_error: 0.0,
            trials,
            seed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ColorabilityResult {
    pub colorable: bool,
    pub witness: Option<FullColoring>,
    /// Complete first-(k−1)-part assignments whose extension was attempted.
    pub leaves_checked: u64,
}

const COLORING_SPACE_GUARD: f64 = 1e8;

/// Backtracking search for a proper list coloring. Vertices of parts
/// 1..k−1 are enumerated in part order; last-part vertices never interact
/// with each other, so each leaf is finished greedily.
pub fn exhaustive_colorable(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
) -> Result<ColorabilityResult> {
    let mut space: f64 = 1.0;
    for l in lists.lists() {
        space *= l.len() as f64;
    }
    if space > COLORING_SPACE_GUARD {
        return Err(Error::SearchGuardExceeded(format!(
            "coloring space has about {space:.3e} assignments"
        )));
    }
    let k = h.k();
    let sampled = h.vertex_count() - h.part_size(k) as usize;
    let edge_sampled: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| {
            e.members()[..k as usize - 1]
                .iter()
                .map(|&v| h.global_index(v).expect("member exists"))
                .collect()
        })
        .collect();
    let sink_edges: Vec<&[u32]> = h
        .part_vertices(k)
        .map(|v| h.incident_edges(v).expect("vertex exists"))
        .collect();

    let mut search = Search {
        lists,
        edge_sampled,
        sink_edges,
        sampled,
        colors: vec![0; h.vertex_count()],
        leaves: 0,
    };
    let colorable = search.dfs(0);
    Ok(ColorabilityResult {
        colorable,
        witness: colorable.then(|| FullColoring {
            colors: search.colors.clone(),
        }),
        leaves_checked: search.leaves,
    })
}

struct Search<'a> {
    lists: &'a ListAssignment,
    edge_sampled: Vec<Vec<usize>>,
    sink_edges: Vec<&'a [u32]>,
    sampled: usize,
    colors: Vec<u32>,
    leaves: u64,
}

impl Search<'_> {
    fn dfs(&mut self, g: usize) -> bool {
        if g == self.sampled {
            self.leaves += 1;
            return self.finish_last_part();
        }
        let lists = self.lists;
        for c in lists.lists()[g].iter() {
            self.colors[g] = c;
            if self.dfs(g + 1) {
                return true;
            }
        }
        false
    }

    fn landed(&self, edge: usize) -> Option<u32> {
        let gs = &self.edge_sampled[edge];
        let c = self.colors[gs[0]];
        gs[1..].iter().all(|&g| self.colors[g] == c).then_some(c)
    }

    fn finish_last_part(&mut self) -> bool {
        for i in 0..self.sink_edges.len() {
            let list = &self.lists.lists()[self.sampled + i];
            let mut banned = vec![false; list.len()];
            for &ei in self.sink_edges[i] {
                if let Some(c) = self.landed(ei as usize) {
                    if let Some(r) = list.rank(c) {
                        banned[r as usize - 1] = true;
                    }
                }
            }
            match list.iter().zip(&banned).find(|(_, &b)| !b) {
                Some((c, _)) => self.colors[self.sampled + i] = c,
                None => return false,
            }
        }
        true
    }
}

fn check_estimator_inputs(lists: &ListAssignment, q: u32, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::BadParameter("need at least one trial".into()));
    }
    if q < 2 {
        return Err(Error::ListSizeTooSmall { got: q, min: 2 });
    }
    if !lists.is_normalized(q) {
        return Err(Error::NotNormalized { q });
    }
    Ok(())
}

/// Monte Carlo estimate of the probability that every color of `v`'s list
/// is forbidden by some landed edge. Only the vertices that can influence
/// the event are redrawn each trial; trials parallelize over disjoint RNG
/// streams, so the result is deterministic in (seed, trials).
pub fn estimate_block_prob(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    v: VertexId,
    trials: u64,
    seed: u64,
) -> Result<EstimatorResult> {
    check_estimator_inputs(lists, q, trials)?;
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    // Fewer edges than list colors can never block every color.
    if h.degree(v)? < lists.for_vertex(h, v)?.len() {
        return Ok(EstimatorResult::exact_zero(trials, seed));
    }
    let relevant = sampled_members(h, h.incident_edges(v)?);
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || PartialColoring::empty(h),
            |phi, t| {
                let mut rng = trial_rng(seed, t);
                resample_into(h, lists, q, phi, &relevant, ColorDistribution::Tilted, &mut rng)
                    .expect("inputs validated");
                u64::from(is_blocked(h, lists, phi, v).expect("inputs validated"))
            },
        )
        .sum();
    Ok(EstimatorResult::from_counts(successes, trials, seed))
}

/// Monte Carlo estimate of the probability that color `c` specifically is
/// forbidden at `v`.
pub fn estimate_color_blocked(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    v: VertexId,
    c: u32,
    trials: u64,
    seed: u64,
) -> Result<EstimatorResult> {
    check_estimator_inputs(lists, q, trials)?;
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    if !lists.for_vertex(h, v)?.contains(c) {
        return Err(Error::ColorNotInList(c));
    }
    // Keep only edges that can actually land on c.
    let mut live_edges: Vec<Vec<usize>> = Vec::new();
    for &ei in h.incident_edges(v)? {
        let e = h.edge(ei as usize);
        let gs: Vec<usize> = e.members()[..h.k() as usize - 1]
            .iter()
            .map(|&u| h.global_index(u).expect("member exists"))
            .collect();
        if gs.iter().all(|&g| lists.lists()[g].contains(c)) {
            live_edges.push(gs);
        }
    }
    if live_edges.is_empty() {
        return Ok(EstimatorResult::exact_zero(trials, seed));
    }
    let mut relevant: Vec<VertexId> = Vec::new();
    for gs in &live_edges {
        relevant.extend(gs.iter().map(|&g| h.vertex_at(g)));
    }
    relevant.sort();
    relevant.dedup();
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || PartialColoring::empty(h),
            |phi, t| {
                let mut rng = trial_rng(seed, t);
                resample_into(h, lists, q, phi, &relevant, ColorDistribution::Tilted, &mut rng)
                    .expect("inputs validated");
                u64::from(
                    live_edges
                        .iter()
                        .any(|gs| gs.iter().all(|&g| phi.by_global(g) == Some(c))),
                )
            },
        )
        .sum();
    Ok(EstimatorResult::from_counts(successes, trials, seed))
}

/// Monte Carlo frequency of the event "edge `edge` lands on `color`": all
/// its sampled members draw that color.
pub fn estimate_edge_problematic(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    edge: usize,
    color: u32,
    trials: u64,
    seed: u64,
) -> Result<EstimatorResult> {
    check_estimator_inputs(lists, q, trials)?;
    if edge >= h.edge_count() {
        return Err(Error::BadParameter(format!(
            "edge index {edge} out of range (instance has {})",
            h.edge_count()
        )));
    }
    let e = h.edge(edge);
    let members = &e.members()[..h.k() as usize - 1];
    let globals: Vec<usize> = members
        .iter()
        .map(|&u| h.global_index(u).expect("member exists"))
        .collect();
    if globals.iter().any(|&g| !lists.lists()[g].contains(color)) {
        return Ok(EstimatorResult::exact_zero(trials, seed));
    }
    let relevant: Vec<VertexId> = members.to_vec();
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map_init(
            || PartialColoring::empty(h),
            |phi, t| {
                let mut rng = trial_rng(seed, t);
                resample_into(h, lists, q, phi, &relevant, ColorDistribution::Tilted, &mut rng)
                    .expect("inputs validated");
                u64::from(globals.iter().all(|&g| phi.by_global(g) == Some(color)))
            },
        )
        .sum();
    Ok(EstimatorResult::from_counts(successes, trials, seed))
}

fn sampled_members(h: &KPartiteHypergraph, edges: &[u32]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    for &ei in edges {
        let e = h.edge(ei as usize);
        out.extend_from_slice(&e.members()[..h.k() as usize - 1]);
    }
    out.sort();
    out.dedup();
    out
}

/// Exact probability that color `c` is forbidden at `v`, valid when the
/// edges at `v` able to land on `c` share no vertex besides `v`: the
/// landing events are then independent and
/// P = 1 − Π_e (1 − P_e(c)).
pub fn exact_color_blocked_star(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    v: VertexId,
    c: u32,
) -> Result<BigRational> {
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    if !lists.for_vertex(h, v)?.contains(c) {
        return Err(Error::ColorNotInList(c));
    }
    let mut seen: Vec<VertexId> = Vec::new();
    let mut miss = BigRational::one();
    for &ei in h.incident_edges(v)? {
        let e = h.edge(ei as usize);
        let p = problematic_prob(h, lists, q, e, c)?;
        if p.is_zero() {
            continue;
        }
        for &u in &e.members()[..h.k() as usize - 1] {
            if seen.contains(&u) {
                return Err(Error::NotChannelStar(v));
            }
            seen.push(u);
        }
        miss *= BigRational::one() - p;
    }
    Ok(BigRational::one() - miss)
}

/// Exact probability that every color of `v`'s list is forbidden. Requires
/// full independence: each edge at `v` can land on at most one of `v`'s
/// colors (its shared list cuts down to a single-color channel), and the
/// channel edges share no vertex besides `v`. Edges that cannot block `v`
/// at all are ignored.
pub fn exact_block_prob_star(
    h: &KPartiteHypergraph,
    lists: &ListAssignment,
    q: u32,
    v: VertexId,
) -> Result<BigRational> {
    if v.part != h.k() {
        return Err(Error::NotLastPart(v));
    }
    let list = lists.for_vertex(h, v)?.clone();
    let mut seen: Vec<VertexId> = Vec::new();
    // miss[r] = probability no channel edge lands on the rank-r color.
    let mut miss: Vec<BigRational> = vec![BigRational::one(); list.len()];
    for &ei in h.incident_edges(v)? {
        let e = h.edge(ei as usize);
        let shared = lists.common_list(h, e)?;
        match shared.len() {
            0 => continue,
            1 => {
                let c = shared.colors()[0];
                for &u in &e.members()[..h.k() as usize - 1] {
                    if seen.contains(&u) {
                        return Err(Error::NotChannelStar(v));
                    }
                    seen.push(u);
                }
                let p = problematic_prob(h, lists, q, e, c)?;
                let r = list.rank(c).expect("shared list is inside the center list");
                miss[r as usize - 1] *= BigRational::one() - p;
            }
            _ => return Err(Error::NotChannelStar(v)),
        }
    }
    let mut blocked = BigRational::one();
    for m in miss {
        blocked *= BigRational::one() - m;
    }
    Ok(blocked)
}
