//! Exact choice number at tiny scale: the smallest list size q such that
//! every assignment of q-color lists admits a proper coloring.
//!
//! Assignments are enumerated up to color renaming: scanning vertices in
//! order, the colors a list introduces always form a consecutive block
//! starting at the first unused color. Complete bipartite instances take a
//! combinatorial shortcut that reasons about hitting sets of the first-part
//! lists instead of coloring anything.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::lex_subsets;
use crate::hypergraph::KPartiteHypergraph;
use crate::lists::{ColorList, ListAssignment};

use super::exhaustive_colorable;

#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    /// Candidate list assignments whose fate was decided.
    pub assignments_checked: u64,
    /// Largest color universe any round of the search drew from.
    pub universe: u32,
}

#[derive(Clone, Debug)]
pub struct ChoiceNumberResult {
    pub value: u32,
    /// A defeating assignment with lists of size value−1; absent iff the
    /// value is 1.
    pub witness: Option<ListAssignment>,
    pub stats: SearchStats,
}

const ASSIGNMENT_GUARD: u64 = 10_000_000;
const SUPPORT_BITS: u32 = 60;

/// Smallest q that makes the instance q-choosable, trying q = 1..=max_q.
///
/// `universe` caps how many distinct colors the generic search may use per
/// round; the default q·|V| is enough to represent every assignment up to
/// renaming, so leaving it `None` keeps the search exhaustive. Complete
/// bipartite instances ignore the cap — their shortcut needs no bound.
pub fn choice_number(
    h: &KPartiteHypergraph,
    max_q: u32,
    universe: Option<u32>,
) -> Result<ChoiceNumberResult> {
    if max_q == 0 {
        return Err(Error::BadParameter("max list size must be positive".into()));
    }
    let mut witness: Option<ListAssignment> = None;
    let mut stats = SearchStats {
        assignments_checked: 0,
        universe: 0,
    };
    for q in 1..=max_q {
        let defeat = if let Some((n1, n2)) = complete_bipartite_shape(h) {
            bipartite_round(h, q, n1, n2, &mut stats)?
        } else {
            let cap = universe.unwrap_or_else(|| q.saturating_mul(h.vertex_count() as u32));
            generic_round(h, q, cap, &mut stats)?
        };
        match defeat {
            Some(assignment) => witness = Some(assignment),
            None => {
                return Ok(ChoiceNumberResult {
                    value: q,
                    witness,
                    stats,
                })
            }
        }
    }
    Err(Error::SearchGuardExceeded(format!(
        "no list size up to {max_q} makes the instance choosable"
    )))
}

fn complete_bipartite_shape(h: &KPartiteHypergraph) -> Option<(usize, usize)> {
    if h.k() != 2 {
        return None;
    }
    let n1 = h.part_size(1) as usize;
    let n2 = h.part_size(2) as usize;
    (h.edge_count() == n1 * n2).then_some((n1, n2))
}

/// One generic round: find a defeating q-list assignment or prove there is
/// none. Returns the assignment when q fails.
fn generic_round(
    h: &KPartiteHypergraph,
    q: u32,
    cap: u32,
    stats: &mut SearchStats,
) -> Result<Option<ListAssignment>> {
    if cap < q {
        return Err(Error::BadParameter(format!(
            "universe of {cap} colors cannot hold lists of size {q}"
        )));
    }
    stats.universe = stats.universe.max(cap);
    let mut search = GenericSearch {
        h,
        q,
        cap,
        lists: Vec::with_capacity(h.vertex_count()),
        defeat: None,
    };
    search.descend(0, stats)?;
    Ok(search.defeat)
}

struct GenericSearch<'a> {
    h: &'a KPartiteHypergraph,
    q: u32,
    cap: u32,
    lists: Vec<ColorList>,
    defeat: Option<ListAssignment>,
}

impl GenericSearch<'_> {
    fn descend(&mut self, next_free: u32, stats: &mut SearchStats) -> Result<bool> {
        if self.lists.len() == self.h.vertex_count() {
            stats.assignments_checked += 1;
            if stats.assignments_checked > ASSIGNMENT_GUARD {
                return Err(Error::SearchGuardExceeded(format!(
                    "more than {ASSIGNMENT_GUARD} candidate assignments"
                )));
            }
            let assignment = ListAssignment::from_lists(self.h, self.lists.clone())?;
            if !exhaustive_colorable(self.h, &assignment)?.colorable {
                self.defeat = Some(assignment);
                return Ok(true);
            }
            return Ok(false);
        }
        for fresh in 0..=self.q.min(self.cap.saturating_sub(next_free)) {
            let old = self.q - fresh;
            if old > next_free {
                continue;
            }
            for mut combo in old_subsets(next_free, old) {
                combo.extend(next_free..next_free + fresh);
                self.lists
                    .push(ColorList::new(combo).expect("block construction is sorted"));
                let found = self.descend(next_free + fresh, stats)?;
                self.lists.pop();
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn old_subsets(m: u32, r: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        vec![Vec::new()]
    } else {
        lex_subsets(m, r)
    }
}

/// Complete bipartite shortcut. A q-list assignment defeats K(n1, n2) iff
/// every minimal transversal of the first-part lists contains one of the
/// second-part lists, so it suffices to enumerate first-part systems up to
/// renaming and ask whether at most n2 q-sets can cover all their minimal
/// transversals.
fn bipartite_round(
    h: &KPartiteHypergraph,
    q: u32,
    n1: usize,
    n2: usize,
    stats: &mut SearchStats,
) -> Result<Option<ListAssignment>> {
    let cap = (n1 as u32).saturating_mul(q);
    if cap > SUPPORT_BITS {
        return Err(Error::SearchGuardExceeded(format!(
            "first-part support of {cap} colors exceeds the {SUPPORT_BITS}-bit mask"
        )));
    }
    stats.universe = stats.universe.max(cap);
    let mut search = BipartiteSearch {
        h,
        q,
        n1,
        n2,
        a_lists: Vec::with_capacity(n1),
        defeat: None,
    };
    search.descend(0, stats)?;
    Ok(search.defeat)
}

struct BipartiteSearch<'a> {
    h: &'a KPartiteHypergraph,
    q: u32,
    n1: usize,
    n2: usize,
    a_lists: Vec<ColorList>,
    defeat: Option<ListAssignment>,
}

impl BipartiteSearch<'_> {
    fn descend(&mut self, next_free: u32, stats: &mut SearchStats) -> Result<bool> {
        if self.a_lists.len() == self.n1 {
            stats.assignments_checked += 1;
            if stats.assignments_checked > ASSIGNMENT_GUARD {
                return Err(Error::SearchGuardExceeded(format!(
                    "more than {ASSIGNMENT_GUARD} candidate assignments"
                )));
            }
            if let Some(b_lists) = self.defeating_second_part() {
                let mut lists = self.a_lists.clone();
                lists.extend(b_lists);
                let assignment = ListAssignment::from_lists(self.h, lists)?;
                debug_assert!(!exhaustive_colorable(self.h, &assignment)?.colorable);
                self.defeat = Some(assignment);
                return Ok(true);
            }
            return Ok(false);
        }
        for fresh in 0..=self.q.min(SUPPORT_BITS.saturating_sub(next_free)) {
            let old = self.q - fresh;
            if old > next_free {
                continue;
            }
            for mut combo in old_subsets(next_free, old) {
                combo.extend(next_free..next_free + fresh);
                self.a_lists
                    .push(ColorList::new(combo).expect("block construction is sorted"));
                let found = self.descend(next_free + fresh, stats)?;
                self.a_lists.pop();
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Second-part lists that defeat the current first-part system, if any.
    fn defeating_second_part(&self) -> Option<Vec<ColorList>> {
        let a_masks: Vec<u64> = self
            .a_lists
            .iter()
            .map(|l| l.iter().fold(0u64, |m, c| m | (1 << c)))
            .collect();
        let transversals = minimal_transversals(&a_masks);
        // A transversal with fewer than q colors has room for no q-list.
        if transversals
            .iter()
            .any(|m| m.count_ones() < self.q)
        {
            return None;
        }
        let mut candidates: Vec<u64> = transversals
            .iter()
            .flat_map(|&m| submasks_of_size(m, self.q))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let mut chosen = Vec::new();
        if !cover_transversals(&transversals, &candidates, self.n2, &mut chosen) {
            return None;
        }
        let first = chosen[0];
        while chosen.len() < self.n2 {
            chosen.push(first);
        }
        Some(chosen.iter().map(|&m| mask_to_list(m)).collect())
    }
}

/// All inclusion-minimal sets meeting every mask: branch one element per
/// still-unhit mask, then filter non-minimal outcomes.
fn minimal_transversals(masks: &[u64]) -> Vec<u64> {
    let mut cands: Vec<u64> = vec![0];
    for &am in masks {
        let mut next = Vec::new();
        for &m in &cands {
            if m & am != 0 {
                next.push(m);
            } else {
                let mut rest = am;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    next.push(m | bit);
                    rest ^= bit;
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        cands = next;
    }
    cands
        .iter()
        .copied()
        .filter(|&m| cands.iter().all(|&o| o == m || o & m != o))
        .collect()
}

fn submasks_of_size(mask: u64, size: u32) -> Vec<u64> {
    let bits: Vec<u32> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
    lex_subsets(bits.len() as u32, size)
        .into_iter()
        .map(|idx| idx.iter().fold(0u64, |m, &i| m | (1 << bits[i as usize])))
        .collect()
}

fn cover_transversals(
    transversals: &[u64],
    candidates: &[u64],
    budget: usize,
    chosen: &mut Vec<u64>,
) -> bool {
    let uncovered = transversals
        .iter()
        .find(|&&t| !chosen.iter().any(|&c| c & t == c));
    let Some(&target) = uncovered else {
        return true;
    };
    if chosen.len() == budget {
        return false;
    }
    for &c in candidates.iter().filter(|&&c| c & target == c) {
        chosen.push(c);
        if cover_transversals(transversals, candidates, budget, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn mask_to_list(mask: u64) -> ColorList {
    ColorList::new((0..64).filter(|&b| mask >> b & 1 == 1).collect())
        .expect("bit scan is ascending")
}
