//! The regular-open Boolean completion of a finite poset.
//!
//! Opens of the down-set topology on a poset are exactly its down-closed
//! subsets. A regular open is an open fixed by interior-of-closure. The
//! regular opens form a finite (hence complete) Boolean algebra: meet is
//! intersection, join of a family is the interior of the closure of its
//! union, and the complement is the set difference from the closure.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{bits, DenseMorphism, Poset, ENUM_CAP};

/// All open (= down-closed) subsets, in ascending bitmask order.
pub fn open_sets(p: &Poset) -> Result<Vec<u128>> {
    if p.len() > ENUM_CAP {
        return Err(Error::CapExceeded(format!(
            "open_sets enumerates 2^{} subsets; cap is 2^{ENUM_CAP}",
            p.len()
        )));
    }
    Ok((0..=p.full_mask()).filter(|&s| is_open(p, s)).collect())
}

fn is_open(p: &Poset, s: u128) -> bool {
    bits(s).all(|q| p.down_set(q) & !s == 0)
}

/// Smallest closed (= up-closed) superset of `s`.
pub fn closure(p: &Poset, s: u128) -> u128 {
    bits(s).fold(0, |m, q| m | p.up_set(q))
}

/// Largest open subset of `s`.
pub fn interior(p: &Poset, s: u128) -> u128 {
    (0..p.len())
        .filter(|&q| p.down_set(q) & !s == 0)
        .fold(0, |m, q| m | 1 << q)
}

fn int_cl(p: &Poset, s: u128) -> u128 {
    interior(p, closure(p, s))
}

/// One failed Boolean-algebra law with its witnesses, as printable text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub witness: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.law, self.witness)
    }
}

/// The complete Boolean algebra of regular opens of a finite poset, with
/// precomputed operation tables. Elements are referenced by carrier index;
/// index 0 is always the zero (empty set).
#[derive(Clone, Debug)]
pub struct RegularOpenAlgebra {
    base: Poset,
    carrier: Vec<u128>,
    index: HashMap<u128, usize>,
    meet_t: Vec<Vec<usize>>,
    join_t: Vec<Vec<usize>>,
    compl_t: Vec<usize>,
}

impl RegularOpenAlgebra {
    /// Compute the completion: filter the opens down to the fixed points of
    /// interior-of-closure and tabulate the operations.
    pub fn new(base: &Poset) -> Result<Self> {
        let carrier: Vec<u128> = open_sets(base)?
            .into_iter()
            .filter(|&u| int_cl(base, u) == u)
            .collect();
        let index: HashMap<u128, usize> =
            carrier.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let n = carrier.len();
        let mut meet_t = vec![vec![0; n]; n];
        let mut join_t = vec![vec![0; n]; n];
        let mut compl_t = vec![0; n];
        for a in 0..n {
            compl_t[a] = index[&(base.full_mask() & !closure(base, carrier[a]))];
            for b in 0..n {
                meet_t[a][b] = index[&(carrier[a] & carrier[b])];
                join_t[a][b] = index[&int_cl(base, carrier[a] | carrier[b])];
            }
        }
        Ok(RegularOpenAlgebra {
            base: base.clone(),
            carrier,
            index,
            meet_t,
            join_t,
            compl_t,
        })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.carrier.len() - 1
    }

    pub fn element_mask(&self, i: usize) -> u128 {
        self.carrier[i]
    }

    pub fn index_of(&self, mask: u128) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet_t[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join_t[a][b]
    }

    pub fn compl(&self, a: usize) -> usize {
        self.compl_t[a]
    }

    /// Order of the algebra: inclusion of regular opens.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.carrier[a] & !self.carrier[b] == 0
    }

    /// Join of a whole family, computed in one step as interior of closure
    /// of the union rather than by iterating the binary table.
    pub fn join_family(&self, items: impl IntoIterator<Item = usize>) -> usize {
        let union = items.into_iter().fold(0u128, |m, i| m | self.carrier[i]);
        self.index[&int_cl(&self.base, union)]
    }

    /// Meet of a whole family; the empty meet is one. Finite intersections
    /// of regular opens are regular, so this is plain intersection.
    pub fn meet_family(&self, items: impl IntoIterator<Item = usize>) -> usize {
        let inter = items
            .into_iter()
            .fold(self.carrier[self.one()], |m, i| m & self.carrier[i]);
        self.index[&inter]
    }

    /// Print an element in brace-set notation over the base poset.
    pub fn element_text(&self, i: usize) -> String {
        self.base.set_text(self.carrier[i])
    }

    /// The carrier minus zero as a poset ordered by inclusion. Element `k`
    /// of the result is carrier index `k + 1`; names are the printed sets.
    pub fn nonzero_poset(&self) -> Poset {
        let elems: Vec<String> = (1..self.len()).map(|i| self.element_text(i)).collect();
        let mut pairs = Vec::new();
        for a in 1..self.len() {
            for b in 1..self.len() {
                if self.leq(a, b) {
                    pairs.push((self.element_text(a), self.element_text(b)));
                }
            }
        }
        Poset::new(
            &format!("RO({})-nonzero", self.base.name()),
            elems,
            &self.element_text(self.one()),
            &pairs,
        )
        .expect("carrier minus zero is a valid poset")
    }

    /// The full carrier as a poset ordered by inclusion, zero included.
    pub fn full_poset(&self) -> Poset {
        let elems: Vec<String> = (0..self.len()).map(|i| self.element_text(i)).collect();
        let mut pairs = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) {
                    pairs.push((self.element_text(a), self.element_text(b)));
                }
            }
        }
        Poset::new(
            &format!("RO({})", self.base.name()),
            elems,
            &self.element_text(self.one()),
            &pairs,
        )
        .expect("carrier is a valid poset")
    }

    /// The canonical dense morphism `p -> interior(closure(down-set(p)))`
    /// from the base into the carrier-minus-zero poset.
    pub fn canonical_morphism(&self) -> DenseMorphism {
        let target = self.nonzero_poset();
        let map: Vec<usize> = (0..self.base.len())
            .map(|p| self.index[&int_cl(&self.base, self.base.down_set(p))] - 1)
            .collect();
        DenseMorphism::new(self.base.clone(), target, map)
            .expect("canonical map is total and in bounds")
    }

    /// Carrier index of the canonical image of base element `p`.
    pub fn canonical_image(&self, p: usize) -> usize {
        self.index[&int_cl(&self.base, self.base.down_set(p))]
    }

    /// Overwrite one join-table entry. This deliberately breaks the algebra
    /// and exists so the law checker can be exercised on corrupted tables.
    pub fn override_join(&mut self, a: usize, b: usize, v: usize) {
        self.join_t[a][b] = v;
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&a| (1..self.len()).all(|b| !self.leq(b, a) || b == a))
            .collect()
    }
}

/// Check every Boolean-algebra law over all element pairs and triples of
/// the tabulated operations. An empty report means the laws hold.
pub fn ba_laws_report(alg: &RegularOpenAlgebra) -> Vec<LawViolation> {
    let mut out = Vec::new();
    let n = alg.len();
    let name = |i: usize| alg.element_text(i);
    let mut fail = |law: &'static str, witness: String| {
        out.push(LawViolation { law, witness });
    };
    for u in 0..n {
        if alg.join(u, alg.compl(u)) != alg.one() {
            fail("u + (-u) = 1", name(u));
        }
        if alg.meet(u, alg.compl(u)) != alg.zero() {
            fail("u . (-u) = 0", name(u));
        }
        for v in 0..n {
            if alg.join(u, v) != alg.join(v, u) {
                fail("u + v = v + u", format!("{}, {}", name(u), name(v)));
            }
            if alg.meet(u, v) != alg.meet(v, u) {
                fail("u . v = v . u", format!("{}, {}", name(u), name(v)));
            }
            if alg.meet(u, alg.join(u, v)) != u {
                fail("u . (u + v) = u", format!("{}, {}", name(u), name(v)));
            }
            if alg.join(u, alg.meet(u, v)) != u {
                fail("u + (u . v) = u", format!("{}, {}", name(u), name(v)));
            }
            for w in 0..n {
                if alg.join(u, alg.join(v, w)) != alg.join(alg.join(u, v), w) {
                    fail("u + (v + w) = (u + v) + w", format!("{}, {}, {}", name(u), name(v), name(w)));
                }
                if alg.meet(u, alg.meet(v, w)) != alg.meet(alg.meet(u, v), w) {
                    fail("u . (v . w) = (u . v) . w", format!("{}, {}, {}", name(u), name(v), name(w)));
                }
                if alg.meet(u, alg.join(v, w)) != alg.join(alg.meet(u, v), alg.meet(u, w)) {
                    fail("u . (v + w) = u.v + u.w", format!("{}, {}, {}", name(u), name(v), name(w)));
                }
                if alg.join(u, alg.meet(v, w)) != alg.meet(alg.join(u, v), alg.join(u, w)) {
                    fail("u + (v . w) = (u+v).(u+w)", format!("{}, {}, {}", name(u), name(v), name(w)));
                }
            }
        }
    }
    out
}
