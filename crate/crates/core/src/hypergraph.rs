//! k-partite k-uniform hypergraphs.
//!
//! Vertices live in parts numbered 1..=k and every edge is transversal: it
//! has exactly one member in each part. Edges are kept sorted by part, the
//! edge set is duplicate-free, and incidence lists are built once at
//! construction; the structure is immutable afterwards.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of vertices a generated or embedded instance may reach before we
/// refuse to build it. Everything here is meant to run at desk scale.
pub const VERTEX_GUARD: usize = 10_000_000;

/// A vertex, addressed by its part (1-based) and its index within that part.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexId {
    pub part: u32,
    pub index: u32,
}

impl VertexId {
    pub fn new(part: u32, index: u32) -> Self {
        VertexId { part, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part, self.index)
    }
}

/// An edge: one member per part, ordered by part.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Edge(Vec<VertexId>);

impl Edge {
    /// Builds an edge from its members, sorting them by part. Two members in
    /// the same part are rejected here; coverage of all k parts is checked
    /// when the edge joins a hypergraph.
    pub fn new(mut members: Vec<VertexId>) -> Result<Self> {
        members.sort();
        for w in members.windows(2) {
            if w[0].part == w[1].part {
                return Err(Error::BadParameter(format!(
                    "edge has two members in part {}",
                    w[0].part
                )));
            }
        }
        if members.is_empty() {
            return Err(Error::BadParameter("edge has no members".into()));
        }
        Ok(Edge(members))
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        Edge::new(pairs.iter().map(|&(p, i)| VertexId::new(p, i)).collect())
    }

    pub fn members(&self) -> &[VertexId] {
        &self.0
    }

    /// The member in the first part.
    pub fn head(&self) -> VertexId {
        self.0[0]
    }

    /// The member in the last part (never colored by the partial sampler).
    pub fn last(&self) -> VertexId {
        *self.0.last().expect("edges are never empty")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Raw instance data as read from a file or assembled by hand. May violate
/// the structural invariants; run [`validate`] to find out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceData {
    pub k: u32,
    pub part_sizes: Vec<u32>,
    pub edges: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InstanceViolation {
    /// A part has no vertices.
    EmptyPart { part: u32 },
    /// A member names a part outside 1..=k.
    PartOutOfRange { edge: usize, vertex: VertexId },
    /// A member's index is past the end of its part.
    IndexOutOfRange { edge: usize, vertex: VertexId },
    /// The edge does not have exactly one member in every part.
    NotTransversal { edge: usize },
    /// The same member set appears twice.
    DuplicateEdge { edge: usize },
    /// Stored incidence lists disagree with the edge set.
    InconsistentIncidence { vertex: VertexId },
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceViolation::EmptyPart { part } => write!(f, "part {part} is empty"),
            InstanceViolation::PartOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: part out of range for vertex {vertex}")
            }
            InstanceViolation::IndexOutOfRange { edge, vertex } => {
                write!(f, "edge {edge}: vertex index out of range for {vertex}")
            }
            InstanceViolation::NotTransversal { edge } => {
                write!(f, "edge {edge}: not transversal (need one vertex per part)")
            }
            InstanceViolation::DuplicateEdge { edge } => write!(f, "edge {edge}: duplicate edge"),
            InstanceViolation::InconsistentIncidence { vertex } => {
                write!(f, "incidence list of {vertex} disagrees with the edge set")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<InstanceViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
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

/// Checks raw instance data against every structural invariant and reports
/// all violations rather than stopping at the first.
pub fn validate(data: &InstanceData) -> ValidationReport {
    let mut violations = Vec::new();
    let k = data.k as usize;
    if data.part_sizes.len() != k {
        violations.push(InstanceViolation::NotTransversal { edge: usize::MAX });
        // Without a consistent part list nothing below is meaningful.
        return ValidationReport { violations };
    }
    for (i, &n) in data.part_sizes.iter().enumerate() {
        if n == 0 {
            violations.push(InstanceViolation::EmptyPart { part: i as u32 + 1 });
        }
    }
    let mut seen: HashSet<Vec<VertexId>> = HashSet::with_capacity(data.edges.len());
    for (pos, members) in data.edges.iter().enumerate() {
        let mut in_range = true;
        for &v in members {
            if v.part == 0 || v.part as usize > k {
                violations.push(InstanceViolation::PartOutOfRange { edge: pos, vertex: v });
                in_range = false;
            } else if v.index >= data.part_sizes[v.part as usize - 1] {
                violations.push(InstanceViolation::IndexOutOfRange { edge: pos, vertex: v });
            }
        }
        if in_range {
            let mut parts_hit = vec![0u32; k];
            for &v in members {
                parts_hit[v.part as usize - 1] += 1;
            }
            if members.len() != k || parts_hit.iter().any(|&c| c != 1) {
                violations.push(InstanceViolation::NotTransversal { edge: pos });
            }
        }
        let mut canon = members.clone();
        canon.sort();
        if !seen.insert(canon) {
            violations.push(InstanceViolation::DuplicateEdge { edge: pos });
        }
    }
    ValidationReport { violations }
}

/// An immutable k-partite k-uniform hypergraph with precomputed incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPartiteHypergraph {
    k: u32,
    part_sizes: Vec<u32>,
    part_offsets: Vec<usize>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<u32>>,
}

impl KPartiteHypergraph {
    pub fn new(k: u32, part_sizes: Vec<u32>, edges: Vec<Edge>) -> Result<Self> {
        let data = InstanceData {
            k,
            part_sizes,
            edges: edges.into_iter().map(|e| e.0).collect(),
        };
        Self::from_data(&data)
    }

    pub fn from_data(data: &InstanceData) -> Result<Self> {
        if data.k < 2 {
            return Err(Error::BadParameter(format!(
                "need at least 2 parts (got {})",
                data.k
            )));
        }
        let report = validate(data);
        if !report.is_valid() {
            return Err(Error::InvalidInstance(report));
        }
        let total: usize = data.part_sizes.iter().map(|&n| n as usize).sum();
        if total > VERTEX_GUARD {
            return Err(Error::SearchGuardExceeded(format!(
                "instance would have {total} vertices"
            )));
        }
        let mut part_offsets = Vec::with_capacity(data.k as usize + 1);
        let mut acc = 0usize;
        for &n in &data.part_sizes {
            part_offsets.push(acc);
            acc += n as usize;
        }
        part_offsets.push(acc);

        let mut edges: Vec<Edge> = data
            .edges
            .iter()
            .map(|members| {
                let mut m = members.clone();
                m.sort();
                Edge(m)
            })
            .collect();
        edges.sort();

        let mut incidence = vec![Vec::new(); acc];
        for (i, e) in edges.iter().enumerate() {
            for &v in e.members() {
                let g = part_offsets[v.part as usize - 1] + v.index as usize;
                incidence[g].push(i as u32);
            }
        }

        Ok(KPartiteHypergraph {
            k: data.k,
            part_sizes: data.part_sizes.clone(),
            part_offsets,
            edges,
            incidence,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn part_sizes(&self) -> &[u32] {
        &self.part_sizes
    }

    pub fn part_size(&self, part: u32) -> u32 {
        self.part_sizes[part as usize - 1]
    }

    pub fn vertex_count(&self) -> usize {
        *self.part_offsets.last().unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.part >= 1
            && v.part <= self.k
            && v.index < self.part_sizes[v.part as usize - 1]
    }

    /// Flat index of a vertex; parts are laid out consecutively.
    pub fn global_index(&self, v: VertexId) -> Result<usize> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.part_offsets[v.part as usize - 1] + v.index as usize)
    }

    pub fn vertex_at(&self, global: usize) -> VertexId {
        debug_assert!(global < self.vertex_count());
        let part = self
            .part_offsets
            .windows(2)
            .position(|w| global >= w[0] && global < w[1])
            .expect("global index in range") as u32
            + 1;
        VertexId::new(part, (global - self.part_offsets[part as usize - 1]) as u32)
    }

    /// All vertices in part-major order (matches the flat index order).
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (1..=self.k).flat_map(move |p| self.part_vertices(p))
    }

    pub fn part_vertices(&self, part: u32) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.part_size(part)).map(move |i| VertexId::new(part, i))
    }

    /// Indices into `edges()` of the edges through `v`, ascending.
    pub fn incident_edges(&self, v: VertexId) -> Result<&[u32]> {
        Ok(&self.incidence[self.global_index(v)?])
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.incident_edges(v)?.len())
    }

    /// The maximum degree over all vertices; 0 for an edgeless instance.
    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.incidence.iter().all(|inc| inc.len() == degree)
    }

    /// Every vertex sharing an edge with `v`, excluding `v` itself.
    pub fn neighborhood(&self, v: VertexId) -> Result<BTreeSet<VertexId>> {
        let mut out = BTreeSet::new();
        for &e in self.incident_edges(v)? {
            for &u in self.edges[e as usize].members() {
                if u != v {
                    out.insert(u);
                }
            }
        }
        Ok(out)
    }

    /// Re-checks the structural invariants, including that the stored
    /// incidence lists agree with the edge set.
    pub fn validate(&self) -> ValidationReport {
        let data = InstanceData {
            k: self.k,
            part_sizes: self.part_sizes.clone(),
            edges: self.edges.iter().map(|e| e.0.clone()).collect(),
        };
        let mut report = validate(&data);
        let mut recount = vec![Vec::new(); self.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e.members() {
                if let Ok(g) = self.global_index(v) {
                    recount[g].push(i as u32);
                }
            }
        }
        for g in 0..self.vertex_count() {
            if recount[g] != self.incidence[g] {
                report.violations.push(InstanceViolation::InconsistentIncidence {
                    vertex: self.vertex_at(g),
                });
            }
        }
        report
    }

    /// Embeds the instance into a `target`-regular supergraph. Original
    /// vertex ids are preserved, and no new edge lies entirely inside the
    /// original vertex set, so the edge set restricted to original vertices
    /// is exactly the original edge set.
    pub fn embed_regular(&self, target: usize) -> Result<KPartiteHypergraph> {
        Ok(self.embed_regular_detailed(target)?.hypergraph)
    }

    pub fn embed_regular_detailed(&self, target: usize) -> Result<RegularEmbedding> {
        let delta = self.max_degree();
        if target < delta {
            return Err(Error::TargetDegreeTooSmall { target, delta });
        }
        if self.is_regular(target) {
            return Ok(RegularEmbedding {
                hypergraph: self.clone(),
                copies: 1,
                source_sizes: self.part_sizes.clone(),
            });
        }
        let k = self.k as usize;
        let d = target;
        let total = self.vertex_count() * d;
        if total > VERTEX_GUARD {
            return Err(Error::SearchGuardExceeded(format!(
                "embedding would have {total} vertices before padding"
            )));
        }

        // `d` disjoint copies keep every part's total deficiency divisible by
        // `d`, so the per-part padding below always comes out to an integer.
        let orig_n: Vec<usize> = self.part_sizes.iter().map(|&n| n as usize).collect();
        let mut sizes: Vec<usize> = orig_n.iter().map(|&n| n * d).collect();
        let mut deg: Vec<Vec<usize>> = sizes.iter().map(|&n| vec![0usize; n]).collect();
        let mut edge_set: HashSet<Vec<u32>> = HashSet::new();
        let mut all_edges: Vec<Vec<u32>> = Vec::with_capacity(self.edge_count() * d);
        for copy in 0..d {
            for e in &self.edges {
                let idx: Vec<u32> = e
                    .members()
                    .iter()
                    .map(|v| (copy * orig_n[v.part as usize - 1]) as u32 + v.index)
                    .collect();
                for (p, &i) in idx.iter().enumerate() {
                    deg[p][i as usize] += 1;
                }
                edge_set.insert(idx.clone());
                all_edges.push(idx);
            }
        }

        // Per-part deficiency; equalize by padding so a transversal edge can
        // always lower every part by exactly one.
        let def: Vec<usize> = (0..k)
            .map(|p| deg[p].iter().map(|&x| d - x).sum())
            .collect();
        let t = *def.iter().max().unwrap();
        for p in 0..k {
            let gap = t - def[p];
            debug_assert_eq!(gap % d, 0, "copy construction keeps deficiencies congruent");
            for _ in 0..gap / d {
                deg[p].push(0);
                sizes[p] += 1;
            }
        }

        let mut remaining = t;
        let mut fallback_budget = 64u32;
        let max_rounds = 2 * (t + 64 * d) + 1024;
        let mut rounds = 0usize;
        while remaining > 0 {
            rounds += 1;
            if rounds > max_rounds {
                return Err(Error::EmbeddingStuck);
            }
            let picked = pick_transversal(&deg, d, &orig_n, &edge_set);
            match picked {
                Some(idx) => {
                    for (p, &i) in idx.iter().enumerate() {
                        deg[p][i as usize] += 1;
                    }
                    edge_set.insert(idx.clone());
                    all_edges.push(idx);
                    remaining -= 1;
                }
                None => {
                    // Every combination of deficient vertices already forms an
                    // existing (or all-original) edge. Exchange: drop an old
                    // padding edge disjoint from the stuck combination and add
                    // the two crossed edges, which raises each stuck vertex by
                    // one and leaves the old edge's members unchanged.
                    let stuck: Vec<u32> = deg
                        .iter()
                        .map(|part| {
                            (0..part.len() as u32)
                                .filter(|&i| part[i as usize] < d)
                                .min_by_key(|&i| (part[i as usize], i))
                                .expect("equalized parts stay jointly deficient")
                        })
                        .collect();
                    let swap = all_edges.iter().enumerate().find_map(|(pos, u)| {
                        if inside_original(u, &orig_n)
                            || u.iter().zip(&stuck).any(|(&a, &b)| a == b)
                        {
                            return None;
                        }
                        let mut e1 = u.clone();
                        e1[0] = stuck[0];
                        let mut e2 = stuck.clone();
                        e2[0] = u[0];
                        let fresh = |e: &Vec<u32>| {
                            !inside_original(e, &orig_n) && !edge_set.contains(e)
                        };
                        (fresh(&e1) && fresh(&e2)).then_some((pos, e1, e2))
                    });
                    if let Some((pos, e1, e2)) = swap {
                        let removed = all_edges.swap_remove(pos);
                        edge_set.remove(&removed);
                        for (p, &i) in removed.iter().enumerate() {
                            deg[p][i as usize] -= 1;
                        }
                        for e in [e1, e2] {
                            for (p, &i) in e.iter().enumerate() {
                                deg[p][i as usize] += 1;
                            }
                            edge_set.insert(e.clone());
                            all_edges.push(e);
                        }
                        remaining -= 1;
                    } else {
                        // Last resort: widen with one fresh vertex per part.
                        if fallback_budget == 0 {
                            return Err(Error::EmbeddingStuck);
                        }
                        fallback_budget -= 1;
                        for p in 0..k {
                            deg[p].push(0);
                            sizes[p] += 1;
                        }
                        remaining += d;
                    }
                }
            }
        }

        let part_sizes: Vec<u32> = sizes.iter().map(|&n| n as u32).collect();
        let edges: Vec<Edge> = all_edges
            .into_iter()
            .map(|idx| {
                Edge(
                    idx.iter()
                        .enumerate()
                        .map(|(p, &i)| VertexId::new(p as u32 + 1, i))
                        .collect(),
                )
            })
            .collect();
        let hypergraph = KPartiteHypergraph::new(self.k, part_sizes, edges)?;
        debug_assert!(hypergraph.is_regular(d));
        Ok(RegularEmbedding {
            hypergraph,
            copies: d,
            source_sizes: self.part_sizes.clone(),
        })
    }
}

fn inside_original(idx: &[u32], orig_n: &[usize]) -> bool {
    idx.iter()
        .enumerate()
        .all(|(p, &i)| (i as usize) < orig_n[p])
}

/// Picks a transversal of deficient vertices, minimum degree first, skipping
/// combinations that duplicate an existing edge or would sit entirely inside
/// the original vertex set. Returns `None` when no admissible combination
/// exists among the deficient vertices.
fn pick_transversal(
    deg: &[Vec<usize>],
    d: usize,
    orig_n: &[usize],
    edge_set: &HashSet<Vec<u32>>,
) -> Option<Vec<u32>> {
    let k = deg.len();
    let mut cands: Vec<Vec<u32>> = Vec::with_capacity(k);
    for part in deg {
        let mut c: Vec<u32> = (0..part.len() as u32)
            .filter(|&i| part[i as usize] < d)
            .collect();
        if c.is_empty() {
            return None;
        }
        c.sort_by_key(|&i| (part[i as usize], i));
        cands.push(c);
    }
    // Lexicographic odometer over the candidate lists; the very first
    // combination is almost always admissible.
    let mut pos = vec![0usize; k];
    let mut tries = 0u64;
    loop {
        tries += 1;
        if tries > 1_000_000 {
            return None;
        }
        let idx: Vec<u32> = (0..k).map(|p| cands[p][pos[p]]).collect();
        let all_original = idx
            .iter()
            .enumerate()
            .all(|(p, &i)| (i as usize) < orig_n[p]);
        if !all_original && !edge_set.contains(&idx) {
            return Some(idx);
        }
        let mut p = k;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            pos[p] += 1;
            if pos[p] < cands[p].len() {
                break;
            }
            pos[p] = 0;
        }
    }
}

/// The result of regularizing an instance: the supergraph plus enough
/// bookkeeping to map its vertices back to the instance they came from.
#[derive(Clone, Debug)]
pub struct RegularEmbedding {
    pub hypergraph: KPartiteHypergraph,
    /// Number of disjoint copies of the source laid out at the front of each
    /// part; copy 0 keeps the original ids.
    pub copies: usize,
    pub source_sizes: Vec<u32>,
}

impl RegularEmbedding {
    /// Maps an embedded vertex to the source vertex it copies, or `None` for
    /// padding vertices introduced during regularization.
    pub fn source_vertex(&self, v: VertexId) -> Option<VertexId> {
        let n = self.source_sizes[v.part as usize - 1];
        if n == 0 || v.index as usize >= self.copies * n as usize {
            return None;
        }
        Some(VertexId::new(v.part, v.index % n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge(k: u32) -> KPartiteHypergraph {
        let edge = Edge::new((1..=k).map(|p| VertexId::new(p, 0)).collect()).unwrap();
        KPartiteHypergraph::new(k, vec![1; k as usize], vec![edge]).unwrap()
    }

    fn four_cycle() -> KPartiteHypergraph {
        // K_{2*2}: all four transversal pairs.
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| Edge::from_pairs(&[(1, a), (2, b)]).unwrap())
            .collect();
        KPartiteHypergraph::new(2, vec![2, 2], edges).unwrap()
    }

    #[test]
    fn valid_single_edge_reports_nothing() {
        let data = InstanceData {
            k: 3,
            part_sizes: vec![1, 1, 1],
            edges: vec![vec![
                VertexId::new(1, 0),
                VertexId::new(2, 0),
                VertexId::new(3, 0),
            ]],
        };
        assert!(validate(&data).is_valid());
    }

    #[test]
    fn non_transversal_edge_is_flagged() {
        let data = InstanceData {
            k: 3,
            part_sizes: vec![2, 1, 1],
            edges: vec![vec![
                VertexId::new(1, 0),
                VertexId::new(1, 1),
                VertexId::new(2, 0),
            ]],
        };
        let report = validate(&data);
        assert_eq!(
            report.violations,
            vec![InstanceViolation::NotTransversal { edge: 0 }]
        );
    }

    #[test]
    fn duplicate_edge_is_flagged() {
        let e = vec![VertexId::new(1, 0), VertexId::new(2, 0)];
        let data = InstanceData {
            k: 2,
            part_sizes: vec![1, 1],
            edges: vec![e.clone(), e],
        };
        let report = validate(&data);
        assert_eq!(
            report.violations,
            vec![InstanceViolation::DuplicateEdge { edge: 1 }]
        );
    }

    #[test]
    fn empty_part_is_flagged() {
        let data = InstanceData {
            k: 2,
            part_sizes: vec![1, 0],
            edges: vec![],
        };
        let report = validate(&data);
        assert_eq!(
            report.violations,
            vec![InstanceViolation::EmptyPart { part: 2 }]
        );
    }

    #[test]
    fn part_out_of_range_is_flagged() {
        let data = InstanceData {
            k: 3,
            part_sizes: vec![1, 1, 1],
            edges: vec![vec![
                VertexId::new(4, 0),
                VertexId::new(2, 0),
                VertexId::new(3, 0),
            ]],
        };
        let report = validate(&data);
        assert!(report
            .violations
            .contains(&InstanceViolation::PartOutOfRange {
                edge: 0,
                vertex: VertexId::new(4, 0)
            }));
    }

    #[test]
    fn degrees_and_max_degree() {
        assert_eq!(single_edge(2).max_degree(), 1);
        assert_eq!(single_edge(4).max_degree(), 1);
        let c4 = four_cycle();
        assert_eq!(c4.max_degree(), 2);
        for v in c4.vertices() {
            assert_eq!(c4.degree(v).unwrap(), 2);
        }
        assert!(c4.is_regular(2));
    }

    #[test]
    fn neighborhood_of_single_edge_is_other_members() {
        let h = single_edge(3);
        let n = h.neighborhood(VertexId::new(1, 0)).unwrap();
        let expect: BTreeSet<_> = [VertexId::new(2, 0), VertexId::new(3, 0)].into();
        assert_eq!(n, expect);
    }

    #[test]
    fn neighborhood_of_isolated_vertex_is_empty() {
        let h = KPartiteHypergraph::new(2, vec![2, 2], vec![Edge::from_pairs(&[(1, 0), (2, 0)]).unwrap()])
            .unwrap();
        assert!(h.neighborhood(VertexId::new(1, 1)).unwrap().is_empty());
        assert!(h.neighborhood(VertexId::new(3, 0)).is_err());
    }

    #[test]
    fn embed_regular_is_identity_on_regular_input() {
        let c4 = four_cycle();
        let emb = c4.embed_regular_detailed(2).unwrap();
        assert_eq!(emb.hypergraph, c4);
        assert_eq!(emb.copies, 1);
    }

    #[test]
    fn embed_regular_rejects_small_target() {
        let c4 = four_cycle();
        assert!(matches!(
            c4.embed_regular(1),
            Err(Error::TargetDegreeTooSmall { target: 1, delta: 2 })
        ));
    }

    #[test]
    fn embed_regular_regularizes_a_path() {
        // Part 1: {a}; part 2: {b, c}; edges ab, ac. Max degree 2.
        let h = KPartiteHypergraph::new(
            2,
            vec![1, 2],
            vec![
                Edge::from_pairs(&[(1, 0), (2, 0)]).unwrap(),
                Edge::from_pairs(&[(1, 0), (2, 1)]).unwrap(),
            ],
        )
        .unwrap();
        let emb = h.embed_regular_detailed(2).unwrap();
        let h2 = &emb.hypergraph;
        assert!(h2.validate().is_valid());
        assert!(h2.is_regular(2));
        // Restriction to the original vertex set is exactly the original
        // edge set.
        let restricted: Vec<&Edge> = h2
            .edges()
            .iter()
            .filter(|e| e.members().iter().all(|v| h.contains(*v)))
            .collect();
        assert_eq!(restricted.len(), h.edge_count());
        for e in restricted {
            assert!(h.edges().contains(e));
        }
        // Copy mapping: copy 0 is the identity.
        for v in h.vertices() {
            assert_eq!(emb.source_vertex(v), Some(v));
        }
    }

    #[test]
    fn embed_regular_handles_higher_uniformity() {
        let h = KPartiteHypergraph::new(
            3,
            vec![2, 2, 2],
            vec![
                Edge::from_pairs(&[(1, 0), (2, 0), (3, 0)]).unwrap(),
                Edge::from_pairs(&[(1, 0), (2, 1), (3, 1)]).unwrap(),
                Edge::from_pairs(&[(1, 1), (2, 0), (3, 1)]).unwrap(),
            ],
        )
        .unwrap();
        let target = 4;
        let h2 = h.embed_regular(target).unwrap();
        assert!(h2.validate().is_valid());
        assert!(h2.is_regular(target));
        let restricted = h2
            .edges()
            .iter()
            .filter(|e| e.members().iter().all(|v| h.contains(*v)))
            .count();
        assert_eq!(restricted, h.edge_count());
    }

    #[test]
    fn vertex_round_trip() {
        let c4 = four_cycle();
        for v in c4.vertices() {
            let g = c4.global_index(v).unwrap();
            assert_eq!(c4.vertex_at(g), v);
        }
    }
}
