//! Canonical hereditarily finite sets.
//!
//! Elements are kept sorted and deduplicated recursively, so extensional
//! equality coincides with structural (derived) equality.

use std::fmt;

/// A hereditarily finite set in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HfSet {
    elems: Vec<HfSet>,
}

impl HfSet {
    pub fn empty() -> Self {
        HfSet { elems: Vec::new() }
    }

    /// Canonicalize: sort and deduplicate.
    pub fn new(mut elems: Vec<HfSet>) -> Self {
        elems.sort();
        elems.dedup();
        HfSet { elems }
    }

    pub fn elems(&self) -> &[HfSet] {
        &self.elems
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// 0 for the empty set, otherwise one more than the largest member rank.
    pub fn rank(&self) -> usize {
        self.elems.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// All hereditarily finite sets of rank at most `r`, in canonical order.
    pub fn all_up_to_rank(r: usize) -> Vec<HfSet> {
        let mut level = vec![HfSet::empty()];
        for _ in 0..r {
            let mut next = Vec::new();
            for code in 0u64..1 << level.len() {
                let members: Vec<HfSet> = level
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code >> i & 1 == 1)
                    .map(|(_, s)| s.clone())
                    .collect();
                next.push(HfSet::new(members));
            }
            next.sort();
            next.dedup();
            level = next;
        }
        level
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}
