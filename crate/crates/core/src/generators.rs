//! Test corpora: complete and random k-partite instances plus the list
//! families that stress the two overlap regimes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KPartiteHypergraph, VertexId};
use crate::lists::{ColorList, ListAssignment};

const EDGE_GUARD: u64 = 10_000_000;

fn transversal_count(k: u32, n: u32) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..k {
        total = total
            .checked_mul(u64::from(n))
            .filter(|&t| t <= EDGE_GUARD)
            .ok_or_else(|| {
                Error::SearchGuardExceeded(format!(
                    "complete instance would have more than {EDGE_GUARD} edges (k={k}, n={n})"
                ))
            })?;
    }
    Ok(total)
}

fn check_kn(k: u32, n: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::BadParameter(format!("need k >= 2 (got {k})")));
    }
    if n < 1 {
        return Err(Error::BadParameter("need at least one vertex per part".into()));
    }
    Ok(())
}

/// All n^k transversal edges over k parts of n vertices each; every vertex
/// has degree n^(k−1).
pub fn complete_kpartite(k: u32, n: u32) -> Result<KPartiteHypergraph> {
    check_kn(k, n)?;
    transversal_count(k, n)?;
    let mut edges = Vec::new();
    let mut idx = vec![0u32; k as usize];
    loop {
        edges.push(
            Edge::new(
                idx.iter()
                    .enumerate()
                    .map(|(p, &i)| VertexId::new(p as u32 + 1, i))
                    .collect(),
            )
            .expect("one member per part"),
        );
        let mut p = k as usize;
        loop {
            if p == 0 {
                return KPartiteHypergraph::new(k, vec![n; k as usize], edges);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Each of the n^k potential edges included independently with probability
/// `p_edge`. Edges are visited in lexicographic index order with one RNG
/// draw each, so (seed → instance) is stable.
pub fn random_kpartite(k: u32, n: u32, p_edge: f64, seed: u64) -> Result<KPartiteHypergraph> {
    check_kn(k, n)?;
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::BadParameter(format!(
            "edge probability must lie in [0,1] (got {p_edge})"
        )));
    }
    transversal_count(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut idx = vec![0u32; k as usize];
    loop {
        if rng.gen::<f64>() < p_edge {
            edges.push(
                Edge::new(
                    idx.iter()
                        .enumerate()
                        .map(|(p, &i)| VertexId::new(p as u32 + 1, i))
                        .collect(),
                )
                .expect("one member per part"),
            );
        }
        let mut p = k as usize;
        loop {
            if p == 0 {
                return KPartiteHypergraph::new(k, vec![n; k as usize], edges);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < n {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// List families with known overlap behavior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ListStyle {
    /// {0..q−1} everywhere: every edge shares the whole list.
    Identical,
    /// Disjoint ranges per part: no edge shares any color.
    #[serde(rename = "disjoint-per-part")]
    DisjointParts,
    /// Independent q-subsets of the window {0..2q−1}.
    RandomWindowed,
    /// Every vertex of part p gets the lexicographic q-subsets of
    /// {0..2q−2}; the classical assignments defeating small complete
    /// instances. Requires every part to have exactly C(2q−1, q) vertices.
    Latin,
}

impl std::fmt::Display for ListStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ListStyle::Identical => "identical",
            ListStyle::DisjointParts => "disjoint-per-part",
            ListStyle::RandomWindowed => "random-windowed",
            ListStyle::Latin => "latin",
        })
    }
}

impl std::str::FromStr for ListStyle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identical" => Ok(ListStyle::Identical),
            "disjoint-per-part" => Ok(ListStyle::DisjointParts),
            "random-windowed" => Ok(ListStyle::RandomWindowed),
            "latin" => Ok(ListStyle::Latin),
            other => Err(Error::BadParameter(format!(
                "unknown list style {other:?} (expected identical, disjoint-per-part, \
                 random-windowed or latin)"
            ))),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// The q-subsets of {0..m−1} in lexicographic order.
pub(crate) fn lex_subsets(m: u32, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if q == 0 || q > m {
        return out;
    }
    let mut cur: Vec<u32> = (0..q).collect();
    loop {
        out.push(cur.clone());
        // Advance the rightmost element that can still move.
        let mut i = q as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m - (q - i as u32) {
                cur[i] += 1;
                for j in i + 1..q as usize {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Builds a size-q list for every vertex in the requested style.
pub fn adversarial_lists(
    h: &KPartiteHypergraph,
    q: u32,
    style: ListStyle,
    seed: u64,
) -> Result<ListAssignment> {
    if q < 1 {
        return Err(Error::ListSizeTooSmall { got: q, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lists = Vec::with_capacity(h.vertex_count());
    match style {
        ListStyle::Identical => {
            for _ in h.vertices() {
                lists.push(ColorList::range(0, q));
            }
        }
        ListStyle::DisjointParts => {
            for v in h.vertices() {
                lists.push(ColorList::range((v.part - 1) * q, q));
            }
        }
        ListStyle::RandomWindowed => {
            for _ in h.vertices() {
                let mut pool: Vec<u32> = (0..2 * q).collect();
                for i in 0..q as usize {
                    let j = rng.gen_range(i..pool.len());
                    pool.swap(i, j);
                }
                pool.truncate(q as usize);
                lists.push(ColorList::from_unsorted(pool)?);
            }
        }
        ListStyle::Latin => {
            let need = binomial(u64::from(2 * q - 1), u64::from(q)).ok_or_else(|| {
                Error::StyleMismatch(format!("latin style overflows at q = {q}"))
            })?;
            if h.part_sizes().iter().any(|&n| u64::from(n) != need) {
                return Err(Error::StyleMismatch(format!(
                    "latin style needs every part of size C(2q-1, q) = {need} for q = {q}"
                )));
            }
            let subsets = lex_subsets(2 * q - 1, q);
            for v in h.vertices() {
                lists.push(ColorList::new(subsets[v.index as usize].clone())?);
            }
        }
    }
    ListAssignment::from_lists(h, lists)
}

/// A star at a single last-part vertex whose edges split into per-color
/// channels: `edges_per_color` edges can only ever land on color c, for
/// each c in the center's list {0..q−1}. Edges share no vertex besides the
/// center, so per-color blocking events are independent and the exact
/// blocking probability has a closed product form.
pub fn color_channel_star(
    k: u32,
    q: u32,
    edges_per_color: u32,
) -> Result<(KPartiteHypergraph, ListAssignment)> {
    if k < 2 {
        return Err(Error::BadParameter(format!("need k >= 2 (got {k})")));
    }
    if q < 2 {
        return Err(Error::ListSizeTooSmall { got: q, min: 2 });
    }
    if edges_per_color < 1 {
        return Err(Error::BadParameter("need at least one edge per color".into()));
    }
    let m = u64::from(q) * u64::from(edges_per_color);
    if m * u64::from(k - 1) > EDGE_GUARD {
        return Err(Error::SearchGuardExceeded(format!(
            "channel star would have {m} edges"
        )));
    }
    let m = m as u32;
    let mut sizes = vec![m; k as usize];
    sizes[k as usize - 1] = 1;
    let edges = (0..m)
        .map(|j| {
            Edge::new(
                (1..k)
                    .map(|p| VertexId::new(p, j))
                    .chain([VertexId::new(k, 0)])
                    .collect(),
            )
            .expect("one member per part")
        })
        .collect();
    let h = KPartiteHypergraph::new(k, sizes, edges)?;

    // Channel c's members list {c} plus q−1 filler colors outside the
    // center's list, so c is the only color the edge can block.
    let mut lists = Vec::with_capacity(h.vertex_count());
    for v in h.vertices() {
        if v.part == k {
            lists.push(ColorList::range(0, q));
        } else {
            let channel = v.index / edges_per_color;
            let mut colors: Vec<u32> = vec![channel];
            colors.extend(q..2 * q - 1);
            lists.push(ColorList::new(colors)?);
        }
    }
    let lists = ListAssignment::from_lists(&h, lists)?;
    Ok((h, lists))
}
