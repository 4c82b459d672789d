//! Color lists and per-vertex list assignments.
//!
//! A color list is a strictly ascending set of color ids. The rank of a
//! color inside its list (1-based) is what the tilted sampling distribution
//! keys on; colors outside a list get a fixed fractional placeholder rank so
//! the same formulas stay well defined everywhere.

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KPartiteHypergraph, VertexId};

/// A strictly ascending list of colors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorList(Vec<u32>);

impl ColorList {
    /// Wraps an already strictly ascending vector.
    pub fn new(colors: Vec<u32>) -> Result<Self> {
        for w in colors.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidColorList(format!(
                    "colors must be strictly ascending ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(ColorList(colors))
    }

    /// Sorts the input; duplicate colors are an error.
    pub fn from_unsorted(mut colors: Vec<u32>) -> Result<Self> {
        colors.sort_unstable();
        Self::new(colors)
    }

    pub fn range(lo: u32, len: u32) -> Self {
        ColorList((lo..lo + len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, color: u32) -> bool {
        self.0.binary_search(&color).is_ok()
    }

    /// 1-based position of `color` in ascending order, `None` if absent.
    pub fn rank(&self, color: u32) -> Option<u32> {
        self.0.binary_search(&color).ok().map(|i| i as u32 + 1)
    }

    /// Keeps the `q` smallest colors; fails if fewer than `q` are present.
    pub fn truncated(&self, q: u32, vertex: VertexId) -> Result<ColorList> {
        if self.len() < q as usize {
            return Err(Error::InsufficientList {
                vertex,
                len: self.len(),
                q,
            });
        }
        Ok(ColorList(self.0[..q as usize].to_vec()))
    }

    pub fn intersect(&self, other: &ColorList) -> ColorList {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        ColorList(out)
    }
}

fn big(n: u32) -> BigInt {
    BigInt::from(n)
}

/// Rank of `color` in `list` as an exact rational, extended to absent colors
/// by the placeholder value 4q/3. The placeholder exceeds every real rank
/// (ranks stop at q) and keeps the tilted weight formula strictly positive.
pub fn index_of(list: &ColorList, color: u32, q: u32) -> BigRational {
    match list.rank(color) {
        Some(r) => BigRational::from(big(r)),
        None => BigRational::new(big(4 * q), big(3)),
    }
}

/// One color list per vertex, stored in the flat vertex order of the
/// hypergraph it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<ColorList>,
}

impl ListAssignment {
    pub fn from_lists(h: &KPartiteHypergraph, lists: Vec<ColorList>) -> Result<Self> {
        if lists.len() != h.vertex_count() {
            return Err(Error::BadParameter(format!(
                "need {} lists, got {}",
                h.vertex_count(),
                lists.len()
            )));
        }
        Ok(ListAssignment { lists })
    }

    /// Every vertex gets {0, …, q−1}.
    pub fn uniform(h: &KPartiteHypergraph, q: u32) -> Self {
        ListAssignment {
            lists: vec![ColorList::range(0, q); h.vertex_count()],
        }
    }

    pub fn lists(&self) -> &[ColorList] {
        &self.lists
    }

    pub fn for_vertex(&self, h: &KPartiteHypergraph, v: VertexId) -> Result<&ColorList> {
        Ok(&self.lists[h.global_index(v)?])
    }

    /// True when every list has exactly `q` colors.
    pub fn is_normalized(&self, q: u32) -> bool {
        self.lists.iter().all(|l| l.len() == q as usize)
    }

    /// Truncates every list to its `q` smallest colors. Idempotent on
    /// already normalized assignments; fails on any list shorter than `q`.
    pub fn normalize(&self, h: &KPartiteHypergraph, q: u32) -> Result<ListAssignment> {
        let mut lists = Vec::with_capacity(self.lists.len());
        for (g, list) in self.lists.iter().enumerate() {
            lists.push(list.truncated(q, h.vertex_at(g))?);
        }
        Ok(ListAssignment { lists })
    }

    /// Intersection of the lists of every member of `e` (all k of them).
    pub fn common_list(&self, h: &KPartiteHypergraph, e: &Edge) -> Result<ColorList> {
        let mut members = e.members().iter();
        let first = *members.next().expect("edges are never empty");
        let mut acc = self.for_vertex(h, first)?.clone();
        for &v in members {
            acc = acc.intersect(self.for_vertex(h, v)?);
        }
        Ok(acc)
    }

    pub fn min_len(&self) -> usize {
        self.lists.iter().map(ColorList::len).min().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    #[test]
    fn rank_is_one_based_ascending_position() {
        let l = ColorList::new(vec![2, 5, 7]).unwrap();
        assert_eq!(l.rank(2), Some(1));
        assert_eq!(l.rank(5), Some(2));
        assert_eq!(l.rank(7), Some(3));
        assert_eq!(l.rank(4), None);
    }

    #[test]
    fn unsorted_input_is_sorted_and_duplicates_rejected() {
        let l = ColorList::from_unsorted(vec![7, 2, 5]).unwrap();
        assert_eq!(l.colors(), &[2, 5, 7]);
        assert!(ColorList::from_unsorted(vec![3, 3]).is_err());
        assert!(ColorList::new(vec![5, 2]).is_err());
    }

    #[test]
    fn absent_color_gets_fractional_placeholder_rank() {
        let l = ColorList::new(vec![0, 1, 2]).unwrap();
        let q = 6;
        let idx = index_of(&l, 99, q);
        assert_eq!(idx, BigRational::new(24.into(), 3.into()));
        // Placeholder beats every achievable rank.
        for c in l.iter() {
            assert!(index_of(&l, c, q) < idx);
        }
    }

    #[test]
    fn truncation_keeps_smallest_and_is_idempotent() {
        let v = VertexId::new(1, 0);
        let l = ColorList::new(vec![1, 3, 5, 9, 11]).unwrap();
        let t = l.truncated(3, v).unwrap();
        assert_eq!(t.colors(), &[1, 3, 5]);
        assert_eq!(t.truncated(3, v).unwrap(), t);
        assert!(matches!(
            l.truncated(6, v),
            Err(Error::InsufficientList { len: 5, q: 6, .. })
        ));
    }

    #[test]
    fn intersection_merges_sorted_lists() {
        let a = ColorList::new(vec![1, 2, 4, 8]).unwrap();
        let b = ColorList::new(vec![2, 3, 4, 9]).unwrap();
        assert_eq!(a.intersect(&b).colors(), &[2, 4]);
        let disjoint = ColorList::new(vec![100, 200]).unwrap();
        assert!(a.intersect(&disjoint).is_empty());
    }

    #[test]
    fn common_list_spans_all_edge_members() {
        let h = KPartiteHypergraph::new(
            2,
            vec![1, 1],
            vec![Edge::from_pairs(&[(1, 0), (2, 0)]).unwrap()],
        )
        .unwrap();
        let lists = ListAssignment::from_lists(
            &h,
            vec![
                ColorList::new(vec![0, 1, 2]).unwrap(),
                ColorList::new(vec![1, 2, 3]).unwrap(),
            ],
        )
        .unwrap();
        let common = lists.common_list(&h, &h.edges()[0]).unwrap();
        assert_eq!(common.colors(), &[1, 2]);
    }

    #[test]
    fn normalize_applies_per_vertex() {
        let h = KPartiteHypergraph::new(
            2,
            vec![1, 1],
            vec![Edge::from_pairs(&[(1, 0), (2, 0)]).unwrap()],
        )
        .unwrap();
        let lists = ListAssignment::from_lists(
            &h,
            vec![
                ColorList::new(vec![0, 1, 2, 5]).unwrap(),
                ColorList::new(vec![1, 2, 3]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!lists.is_normalized(3));
        let norm = lists.normalize(&h, 3).unwrap();
        assert!(norm.is_normalized(3));
        assert_eq!(norm.lists()[0].colors(), &[0, 1, 2]);
        assert_eq!(norm.normalize(&h, 3).unwrap(), norm);
    }
}
