//! Recursive names over a forcing poset, and the calculus that moves them
//! between posets and Boolean algebras.
//!
//! A name is a finite set of (name, condition) pairs, well-founded by
//! construction. Names are hash-consed in a [`NameArena`], so structural
//! equality is id equality and the forcing recursions can memoize on ids.
//! A functional name is hereditarily a function from names to conditions;
//! over the nonzero part of a complete Boolean algebra these are exactly
//! the elements of the Boolean-valued universe, one stage per rank.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::hf::HfSet;
use crate::poset::{DenseMorphism, Filter, Poset};
use crate::ro::RegularOpenAlgebra;

/// Interned name id. Equal ids mean structurally equal names within one arena.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Name(u32);

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    /// Sorted by (child id, condition index), deduplicated.
    pairs: Vec<(Name, usize)>,
    rank: u32,
    functional: bool,
}

struct Inner {
    nodes: Vec<Node>,
    index: HashMap<Vec<(Name, usize)>, Name>,
}

/// Insert-if-absent interning table for names. Conditions are stored as
/// element indices of whatever poset the caller is working over; the arena
/// itself is poset-agnostic.
pub struct NameArena {
    inner: Mutex<Inner>,
}

impl Default for NameArena {
    fn default() -> Self {
        Self::new()
    }
}

impl NameArena {
    pub fn new() -> Self {
        let arena = NameArena {
            inner: Mutex::new(Inner {
                nodes: Vec::new(),
                index: HashMap::new(),
            }),
        };
        arena.mk(Vec::new()); // the empty name gets id 0
        arena
    }

    /// The empty name.
    pub fn empty(&self) -> Name {
        Name(0)
    }

    /// Intern a name given by its pairs. Pairs are canonicalized here.
    pub fn mk(&self, mut pairs: Vec<(Name, usize)>) -> Name {
        pairs.sort();
        pairs.dedup();
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.index.get(&pairs) {
            return id;
        }
        let rank = pairs
            .iter()
            .map(|(y, _)| inner.nodes[y.0 as usize].rank + 1)
            .max()
            .unwrap_or(0);
        let functional = {
            let mut seen = BTreeMap::new();
            pairs.iter().all(|(y, p)| {
                inner.nodes[y.0 as usize].functional && seen.insert(*y, *p).is_none()
            })
        };
        let id = Name(inner.nodes.len() as u32);
        inner.nodes.push(Node {
            pairs: pairs.clone(),
            rank,
            functional,
        });
        inner.index.insert(pairs, id);
        id
    }

    pub fn pairs(&self, x: Name) -> Vec<(Name, usize)> {
        self.inner.lock().unwrap().nodes[x.0 as usize].pairs.clone()
    }

    /// 0 for the empty name, one more than the largest constituent rank otherwise.
    pub fn rank(&self, x: Name) -> u32 {
        self.inner.lock().unwrap().nodes[x.0 as usize].rank
    }

    /// Hereditarily a function from names to conditions.
    pub fn is_functional(&self, x: Name) -> bool {
        self.inner.lock().unwrap().nodes[x.0 as usize].functional
    }

    /// Distinct first components.
    pub fn dom(&self, x: Name) -> Vec<Name> {
        let mut d: Vec<Name> = self.pairs(x).into_iter().map(|(y, _)| y).collect();
        d.dedup();
        d
    }

    /// Condition attached to `key` in a functional name; zero-convention
    /// callers handle the `None` case themselves.
    pub fn value(&self, x: Name, key: Name) -> Option<usize> {
        self.pairs(x).into_iter().find(|(y, _)| *y == key).map(|(_, p)| p)
    }

    /// Structural display with poset element names, e.g. `{({},a),({},b)}`.
    pub fn to_text(&self, x: Name, poset: &Poset) -> String {
        let parts: Vec<String> = self
            .pairs(x)
            .into_iter()
            .map(|(y, p)| format!("({},{})", self.to_text(y, poset), poset.elem_name(p)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Push a name along a poset map, substituting on second components.
    pub fn transport(&self, i: &DenseMorphism, x: Name) -> Name {
        let pairs = self
            .pairs(x)
            .into_iter()
            .map(|(y, p)| (self.transport(i, y), i.apply(p)))
            .collect();
        self.mk(pairs)
    }

    /// Evaluate under a filter: the set of evaluations of constituents whose
    /// condition lies in the filter.
    pub fn evaluate(&self, x: Name, g: &Filter) -> HfSet {
        let mut cache = HashMap::new();
        self.evaluate_memo(x, g, &mut cache)
    }

    fn evaluate_memo(&self, x: Name, g: &Filter, cache: &mut HashMap<Name, HfSet>) -> HfSet {
        if let Some(v) = cache.get(&x) {
            return v.clone();
        }
        let members = self
            .pairs(x)
            .into_iter()
            .filter(|(_, p)| g.contains(*p))
            .map(|(y, _)| self.evaluate_memo(y, g, cache))
            .collect();
        let v = HfSet::new(members);
        cache.insert(x, v.clone());
        v
    }

    /// The canonical name of a ground set: every member checked at top, so
    /// evaluation under any filter returns the set itself.
    pub fn check_name(&self, s: &HfSet, poset: &Poset) -> Name {
        let pairs = s
            .elems()
            .iter()
            .map(|y| (self.check_name(y, poset), poset.top()))
            .collect();
        self.mk(pairs)
    }
}

/// Collapse a name over the nonzero part of an algebra to a functional one:
/// constituents are retracted, and conditions of constituents that collapse
/// together are joined in the algebra.
///
/// Conditions are element indices of the carrier-minus-zero poset, i.e.
/// carrier index minus one.
pub fn retract(arena: &NameArena, alg: &RegularOpenAlgebra, x: Name) -> Name {
    let mut groups: Vec<(Name, Vec<usize>)> = Vec::new();
    for (z, p) in arena.pairs(x) {
        let rz = retract(arena, alg, z);
        match groups.iter_mut().find(|(y, _)| *y == rz) {
            Some((_, ps)) => ps.push(p),
            None => groups.push((rz, vec![p])),
        }
    }
    let pairs = groups
        .into_iter()
        .map(|(y, ps)| {
            let joined = alg.join_family(ps.into_iter().map(|p| p + 1));
            debug_assert_ne!(joined, alg.zero(), "join of nonzero conditions is nonzero");
            (y, joined - 1)
        })
        .collect();
    arena.mk(pairs)
}

/// Inclusion of functional names into all names; the identity on the shared
/// representation, after checking the precondition.
pub fn section(arena: &NameArena, x: Name) -> Result<Name> {
    if !arena.is_functional(x) {
        return Err(Error::NotFunctional(format!("name id {:?}", x)));
    }
    Ok(x)
}

/// Certify that a functional name is a Boolean-valued-universe element over
/// the algebra (hereditarily a function with conditions inside the nonzero
/// carrier) and return its stage, which is its rank.
pub fn vb_stage(arena: &NameArena, alg: &RegularOpenAlgebra, x: Name) -> Result<u32> {
    if !arena.is_functional(x) {
        return Err(Error::NotFunctional("stage check".into()));
    }
    fn values_in_carrier(arena: &NameArena, alg: &RegularOpenAlgebra, x: Name) -> bool {
        arena
            .pairs(x)
            .into_iter()
            .all(|(y, p)| p + 1 < alg.len() && values_in_carrier(arena, alg, y))
    }
    if !values_in_carrier(arena, alg, x) {
        return Err(Error::Semantic("name condition outside the carrier".into()));
    }
    Ok(arena.rank(x))
}

/// A finite, membership-closed slice of the name class over one poset.
#[derive(Clone, Debug)]
pub struct NameUniverse {
    pub names: Vec<Name>,
    pub rank: u32,
    pub poset_len: usize,
}

impl NameUniverse {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// One enumeration level: all names whose pairs draw from `pool x poset`,
/// in ascending pair-subset order. Errors when the projected count exceeds
/// `max_count`.
pub fn enumerate_names_over(
    arena: &NameArena,
    pool: &[Name],
    poset: &Poset,
    max_count: usize,
) -> Result<Vec<Name>> {
    let slots = pool.len() * poset.len();
    if slots >= 32 || 1usize << slots > max_count {
        return Err(Error::CapExceeded(format!(
            "name enumeration would produce 2^{slots} names; cap is {max_count}"
        )));
    }
    let all_pairs: Vec<(Name, usize)> = pool
        .iter()
        .flat_map(|&y| (0..poset.len()).map(move |p| (y, p)))
        .collect();
    let mut out = Vec::with_capacity(1 << slots);
    for code in 0u64..1 << slots {
        let pairs: Vec<(Name, usize)> = all_pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| code >> i & 1 == 1)
            .map(|(_, &pr)| pr)
            .collect();
        out.push(arena.mk(pairs));
    }
    out.dedup();
    Ok(out)
}

/// All names of rank at most `rank` over the poset, built level by level;
/// rank 0 yields exactly the empty name.
pub fn enumerate_names(
    arena: &NameArena,
    poset: &Poset,
    rank: u32,
    max_count: usize,
) -> Result<NameUniverse> {
    let mut level = vec![arena.empty()];
    for _ in 0..rank {
        level = enumerate_names_over(arena, &level, poset, max_count)?;
    }
    Ok(NameUniverse {
        names: level,
        rank,
        poset_len: poset.len(),
    })
}

/// All hereditarily functional names of rank at most `rank`: level by level,
/// every partial function from the previous level into the poset.
pub fn enumerate_functional_names(
    arena: &NameArena,
    poset: &Poset,
    rank: u32,
    max_count: usize,
) -> Result<NameUniverse> {
    let mut level = vec![arena.empty()];
    for _ in 0..rank {
        let base = poset.len() + 1;
        let mut projected: usize = 1;
        for _ in 0..level.len() {
            projected = projected
                .checked_mul(base)
                .filter(|&c| c <= max_count)
                .ok_or_else(|| {
                    Error::CapExceeded(format!(
                        "functional name enumeration exceeds cap {max_count}"
                    ))
                })?;
        }
        let mut next = Vec::with_capacity(projected);
        for code in 0..projected {
            let mut pairs = Vec::new();
            let mut c = code;
            for &y in &level {
                let v = c % base;
                c /= base;
                if v > 0 {
                    pairs.push((y, v - 1));
                }
            }
            next.push(arena.mk(pairs));
        }
        next.sort();
        next.dedup();
        level = next;
    }
    Ok(NameUniverse {
        names: level,
        rank,
        poset_len: poset.len(),
    })
}

/// Close a seed list under constituent membership, preserving first-seen
/// order of the seeds and appending constituents.
pub fn universe_closure(arena: &NameArena, seeds: &[Name], poset_len: usize) -> NameUniverse {
    let mut names: Vec<Name> = Vec::new();
    let mut stack: Vec<Name> = seeds.to_vec();
    while let Some(x) = stack.pop() {
        if !names.contains(&x) {
            names.push(x);
            for (y, _) in arena.pairs(x) {
                stack.push(y);
            }
        }
    }
    names.sort();
    let rank = names.iter().map(|&x| arena.rank(x)).max().unwrap_or(0);
    NameUniverse {
        names,
        rank,
        poset_len,
    }
}

/// An ordered table of declared names, as read from a names file.
#[derive(Clone, Debug, Default)]
pub struct NameTable {
    order: Vec<String>,
    map: BTreeMap<String, Name>,
}

impl NameTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, ident: &str, name: Name) -> Result<()> {
        if self.map.contains_key(ident) {
            return Err(Error::Invalid(format!("name `{ident}` declared twice")));
        }
        self.order.push(ident.to_string());
        self.map.insert(ident.to_string(), name);
        Ok(())
    }

    pub fn get(&self, ident: &str) -> Option<Name> {
        self.map.get(ident).copied()
    }

    pub fn contains(&self, ident: &str) -> bool {
        self.map.contains_key(ident)
    }

    pub fn idents(&self) -> &[String] {
        &self.order
    }

    pub fn map(&self) -> &BTreeMap<String, Name> {
        &self.map
    }

    pub fn names(&self) -> Vec<Name> {
        self.order.iter().map(|id| self.map[id]).collect()
    }

    /// Parse the line-based name declaration format:
    ///
    /// ```text
    /// name n0 = {}
    /// name n1 = { (n0, a) }
    /// name n3 = { (n0, a), (n0, b) }
    /// ```
    ///
    /// Declarations may reference earlier declarations only, which keeps
    /// every declared name well-founded.
    pub fn from_text(src: &str, arena: &NameArena, poset: &Poset) -> Result<Self> {
        let mut table = NameTable::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                col: 1,
                msg,
            };
            let rest = line
                .strip_prefix("name")
                .ok_or_else(|| err("expected `name <ident> = { ... }`".into()))?;
            let (ident, rhs) = rest
                .split_once('=')
                .ok_or_else(|| err("missing `=`".into()))?;
            let ident = ident.trim();
            let rhs = rhs.trim();
            let body = rhs
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| err("right-hand side must be `{ ... }`".into()))?;
            let mut pairs = Vec::new();
            for chunk in split_pairs(body) {
                let inner = chunk
                    .trim()
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| err(format!("expected `(name, element)`, got `{chunk}`")))?;
                let (n, e) = inner
                    .split_once(',')
                    .ok_or_else(|| err(format!("expected `(name, element)`, got `{chunk}`")))?;
                let child = table
                    .get(n.trim())
                    .ok_or_else(|| err(format!("name `{}` not declared yet", n.trim())))?;
                let elem = poset.elem_index(e.trim()).map_err(|e| err(e.to_string()))?;
                pairs.push((child, elem));
            }
            table.insert(ident, arena.mk(pairs))?;
        }
        Ok(table)
    }
}

/// Split `"(n0, a), (n0, b)"` into top-level parenthesized chunks.
fn split_pairs(body: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}
