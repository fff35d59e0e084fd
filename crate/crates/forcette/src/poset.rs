//! Finite forcing posets and their order-theoretic predicates.
//!
//! A forcing poset is a finite preorder with a top element. Subsets of a
//! poset are represented as bitmasks over the element indices, in declared
//! order, so exhaustive sweeps over `2^n` subsets stay cheap at desk scale.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of elements for `2^n`-style enumerations.
pub const ENUM_CAP: usize = 12;

/// Cap exponent for [`cohen_poset`]: requires `n * k <= COHEN_CAP`.
pub const COHEN_CAP: usize = 4;

/// Iterate the set bits of a mask as element indices.
pub fn bits(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| mask >> i & 1 == 1)
}

/// A finite preorder with a top element.
///
/// The order is stored reflexively and transitively closed. Antisymmetry is
/// not required: preorders are legal notions of forcing, and [`Poset::is_antisymmetric`]
/// reports rather than enforces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    name: String,
    elems: Vec<String>,
    index: HashMap<String, usize>,
    /// `up[p]` = mask of all `q` with `p <= q`.
    up: Vec<u128>,
    /// `down[p]` = mask of all `q` with `q <= p`.
    down: Vec<u128>,
    top: usize,
}

impl Poset {
    /// Build a poset from element identifiers, a top element, and generating
    /// `le` pairs. The reflexive/transitive closure is computed here.
    pub fn new(
        name: &str,
        elems: Vec<String>,
        top: &str,
        pairs: &[(String, String)],
    ) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::Invalid("poset needs at least one element".into()));
        }
        if elems.len() > 128 {
            return Err(Error::CapExceeded(format!(
                "poset has {} elements; at most 128 are representable",
                elems.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate element `{e}`")));
            }
        }
        let top = *index
            .get(top)
            .ok_or_else(|| Error::UnknownElement(top.to_string()))?;
        let n = elems.len();
        let mut up = vec![0u128; n];
        for (i, row) in up.iter_mut().enumerate() {
            *row |= 1 << i; // reflexive
            *row |= 1 << top; // everything below top
        }
        for (a, b) in pairs {
            let a = *index
                .get(a)
                .ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let b = *index
                .get(b)
                .ok_or_else(|| Error::UnknownElement(b.clone()))?;
            up[a] |= 1 << b;
        }
        // transitive closure
        loop {
            let mut changed = false;
            for p in 0..n {
                let mut acc = up[p];
                for q in bits(up[p]) {
                    acc |= up[q];
                }
                if acc != up[p] {
                    up[p] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut down = vec![0u128; n];
        for p in 0..n {
            for q in bits(up[p]) {
                down[q] |= 1 << p;
            }
        }
        Ok(Poset {
            name: name.to_string(),
            elems,
            index,
            up,
            down,
            top,
        })
    }

    /// Parse the line-based poset text format:
    ///
    /// ```text
    /// poset P3
    /// elements 1 a b
    /// top 1
    /// le a 1
    /// le b 1
    /// ```
    pub fn from_text(src: &str) -> Result<Self> {
        let mut name = None;
        let mut elems: Option<Vec<String>> = None;
        let mut top = None;
        let mut pairs = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                col: 1,
                msg: msg.to_string(),
            };
            match head {
                "poset" => name = Some(toks.next().ok_or_else(|| err("missing poset name"))?.to_string()),
                "elements" => elems = Some(toks.map(str::to_string).collect()),
                "top" => top = Some(toks.next().ok_or_else(|| err("missing top element"))?.to_string()),
                "le" => {
                    let a = toks.next().ok_or_else(|| err("le needs two elements"))?;
                    let b = toks.next().ok_or_else(|| err("le needs two elements"))?;
                    pairs.push((a.to_string(), b.to_string()));
                }
                other => return Err(err(&format!("unknown directive `{other}`"))),
            }
        }
        let name = name.ok_or_else(|| Error::Invalid("missing `poset` line".into()))?;
        let elems = elems.ok_or_else(|| Error::Invalid("missing `elements` line".into()))?;
        let top = top.ok_or_else(|| Error::Invalid("missing `top` line".into()))?;
        Poset::new(&name, elems, &top, &pairs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Mask with every element set.
    pub fn full_mask(&self) -> u128 {
        if self.elems.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.elems.len()) - 1
        }
    }

    pub fn elem_name(&self, p: usize) -> &str {
        &self.elems[p]
    }

    pub fn elem_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// `p <= q`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.up[p] >> q & 1 == 1
    }

    /// Mask of all `q <= p`.
    pub fn down_set(&self, p: usize) -> u128 {
        self.down[p]
    }

    /// Mask of all `q >= p`.
    pub fn up_set(&self, p: usize) -> u128 {
        self.up[p]
    }

    /// `p` and `q` have a common lower bound.
    pub fn compatible(&self, p: usize, q: usize) -> bool {
        self.down[p] & self.down[q] != 0
    }

    /// Whether the preorder is in fact a partial order.
    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|p| (0..self.len()).all(|q| !(self.leq(p, q) && self.leq(q, p)) || p == q))
    }

    /// Every element has a member of `d` below it.
    pub fn is_dense(&self, d: u128) -> bool {
        (0..self.len()).all(|p| d & self.down[p] != 0)
    }

    /// Every element is compatible with a member of `d`.
    pub fn is_predense(&self, d: u128) -> bool {
        (0..self.len()).all(|p| bits(d).any(|q| self.compatible(p, q)))
    }

    /// Every `q <= p` has a member of `d` below it.
    pub fn is_dense_below(&self, d: u128, p: usize) -> bool {
        bits(self.down[p]).all(|q| d & self.down[q] != 0)
    }

    fn check_cap(&self, what: &str) -> Result<()> {
        if self.len() > ENUM_CAP {
            return Err(Error::CapExceeded(format!(
                "{what} enumerates 2^{} subsets; cap is 2^{ENUM_CAP}",
                self.len()
            )));
        }
        Ok(())
    }

    /// All dense subsets, in ascending bitmask order.
    pub fn all_dense_subsets(&self) -> Result<Vec<u128>> {
        self.check_cap("all_dense_subsets")?;
        Ok((0..=self.full_mask()).filter(|&d| self.is_dense(d)).collect())
    }

    /// Filter axioms: contains top, upward closed, downward directed.
    pub fn is_filter(&self, g: u128) -> bool {
        if g >> self.top & 1 == 0 {
            return false;
        }
        for p in bits(g) {
            if self.up[p] & !g != 0 {
                return false;
            }
            for q in bits(g) {
                if self.down[p] & self.down[q] & g == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// All filters meeting every dense subset, in ascending bitmask order.
    ///
    /// Genericity is relative to the full family of dense subsets of the
    /// finite poset, the finite stand-in for density in a ground model.
    pub fn generic_filters(&self) -> Result<Vec<Filter>> {
        self.check_cap("generic_filters")?;
        let dense = self.all_dense_subsets()?;
        let mut out = Vec::new();
        for g in 0..=self.full_mask() {
            if self.is_filter(g) && dense.iter().all(|&d| d & g != 0) {
                out.push(Filter { members: g });
            }
        }
        Ok(out)
    }

    /// For all `p` not below `q` there is `r <= p` incompatible with `q`.
    pub fn is_separative(&self) -> bool {
        (0..self.len()).all(|p| {
            (0..self.len()).all(|q| {
                self.leq(p, q)
                    || bits(self.down[p]).any(|r| self.down[r] & self.down[q] == 0)
            })
        })
    }

    /// Render a mask as `{a,b}` with elements in declared order; `{}` is empty.
    pub fn set_text(&self, mask: u128) -> String {
        let names: Vec<&str> = bits(mask).map(|i| self.elem_name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parse a comma-separated element list (`"1,a"`) into a mask. Commas
    /// inside braces do not split, so carrier names like `{1,a,b}` work.
    pub fn parse_set(&self, src: &str) -> Result<u128> {
        let mut mask = 0u128;
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in src.chars().chain(std::iter::once(',')) {
            match ch {
                '{' => {
                    depth += 1;
                    cur.push(ch);
                }
                '}' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    let tok = cur.trim();
                    if !tok.is_empty() {
                        mask |= 1 << self.elem_index(tok)?;
                    }
                    cur.clear();
                }
                _ => cur.push(ch),
            }
        }
        Ok(mask)
    }
}

/// A filter on a poset: upward-closed, downward-directed, containing top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Filter {
    members: u128,
}

impl Filter {
    pub fn new(poset: &Poset, members: u128) -> Result<Self> {
        if members & !poset.full_mask() != 0 {
            return Err(Error::Invalid("filter references unknown elements".into()));
        }
        if !poset.is_filter(members) {
            return Err(Error::Semantic(format!(
                "{} is not a filter",
                poset.set_text(members)
            )));
        }
        Ok(Filter { members })
    }

    pub fn members(&self) -> u128 {
        self.members
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members >> p & 1 == 1
    }
}

/// Which dense-morphism axiom failed, with a witness description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismViolation {
    /// 1 = top, 2 = monotone, 3 = incompatibility, 4 = dense image.
    pub axiom: u8,
    pub detail: String,
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom {} violated: {}", self.axiom, self.detail)
    }
}

/// A map of posets claimed to preserve top, order, and incompatibility in
/// both directions, with dense image.
#[derive(Clone, Debug)]
pub struct DenseMorphism {
    pub source: Poset,
    pub target: Poset,
    map: Vec<usize>,
}

impl DenseMorphism {
    /// Wrap a total map given by source-index -> target-index. Bounds are
    /// checked here; the morphism axioms are checked by [`DenseMorphism::check`].
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Invalid("morphism map is not total on the source".into()));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::Invalid(format!(
                "morphism maps onto unknown target index {bad}"
            )));
        }
        Ok(DenseMorphism { source, target, map })
    }

    pub fn identity(p: &Poset) -> Self {
        DenseMorphism {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.len()).collect(),
        }
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Preimage of a target mask.
    pub fn preimage(&self, mask: u128) -> u128 {
        let mut out = 0u128;
        for (p, &t) in self.map.iter().enumerate() {
            if mask >> t & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    }

    /// Check the four axioms; the report names the first violated one.
    pub fn check(&self) -> std::result::Result<(), MorphismViolation> {
        let (s, t) = (&self.source, &self.target);
        if self.map[s.top()] != t.top() {
            return Err(MorphismViolation {
                axiom: 1,
                detail: format!(
                    "top {} maps to {}, not to target top {}",
                    s.elem_name(s.top()),
                    t.elem_name(self.map[s.top()]),
                    t.elem_name(t.top())
                ),
            });
        }
        for p in 0..s.len() {
            for q in 0..s.len() {
                if s.leq(q, p) && !t.leq(self.map[q], self.map[p]) {
                    return Err(MorphismViolation {
                        axiom: 2,
                        detail: format!(
                            "{} <= {} in the source but images are not ordered",
                            s.elem_name(q),
                            s.elem_name(p)
                        ),
                    });
                }
            }
        }
        for p in 0..s.len() {
            for q in 0..s.len() {
                let src_incomp = !s.compatible(p, q);
                let tgt_incomp = !t.compatible(self.map[p], self.map[q]);
                if src_incomp != tgt_incomp {
                    return Err(MorphismViolation {
                        axiom: 3,
                        detail: format!(
                            "{} and {} are {} in the source but images are {}",
                            s.elem_name(p),
                            s.elem_name(q),
                            if src_incomp { "incompatible" } else { "compatible" },
                            if tgt_incomp { "incompatible" } else { "compatible" },
                        ),
                    });
                }
            }
        }
        let image = self.map.iter().fold(0u128, |m, &t| m | 1 << t);
        if !t.is_dense(image) {
            let bad = (0..t.len())
                .find(|&p| image & t.down_set(p) == 0)
                .expect("density failure has a witness");
            return Err(MorphismViolation {
                axiom: 4,
                detail: format!("image has nothing below target element {}", t.elem_name(bad)),
            });
        }
        Ok(())
    }

    pub fn is_dense_morphism(&self) -> bool {
        self.check().is_ok()
    }
}

/// The truncated Cohen poset: partial functions from an `n x k` grid of
/// cells to `{0,1}`, ordered by reverse inclusion, with the empty function
/// on top. Elements are listed by domain size, then lexicographically.
pub fn cohen_poset(n: usize, k: usize) -> Result<Poset> {
    let cells = n * k;
    if cells > COHEN_CAP {
        return Err(Error::CapExceeded(format!(
            "cohen poset needs n*k <= {COHEN_CAP}, got {cells}"
        )));
    }
    // A partial function is a vector of Option<bool> per cell.
    let mut fns: Vec<Vec<Option<bool>>> = Vec::new();
    let total = 3usize.pow(cells as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(cells);
        let mut c = code;
        for _ in 0..cells {
            f.push(match c % 3 {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            });
            c /= 3;
        }
        fns.push(f);
    }
    fns.sort_by_key(|f| {
        let size = f.iter().filter(|v| v.is_some()).count();
        let key: Vec<i8> = f.iter().map(|v| match v {
            None => 0,
            Some(false) => 1,
            Some(true) => 2,
        }).collect();
        (size, key)
    });
    let name_of = |f: &Vec<Option<bool>>| -> String {
        let parts: Vec<String> = f
            .iter()
            .enumerate()
            .filter_map(|(cell, v)| {
                v.map(|b| format!("r{}c{}v{}", cell / k.max(1), cell % k.max(1), u8::from(b)))
            })
            .collect();
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join("_")
        }
    };
    let elems: Vec<String> = fns.iter().map(name_of).collect();
    let extends = |f: &Vec<Option<bool>>, g: &Vec<Option<bool>>| -> bool {
        // f <= g iff g is a subfunction of f
        g.iter().zip(f).all(|(gv, fv)| gv.is_none() || gv == fv)
    };
    let mut pairs = Vec::new();
    for (i, f) in fns.iter().enumerate() {
        for (j, g) in fns.iter().enumerate() {
            if i != j && extends(f, g) {
                pairs.push((elems[i].clone(), elems[j].clone()));
            }
        }
    }
    Poset::new(&format!("cohen_{n}_{k}"), elems.clone(), &elems[0], &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn p3() -> Poset {
        Poset::new(
            "P3",
            vec!["1".into(), "a".into(), "b".into()],
            "1",
            &[("a".into(), "1".into()), ("b".into(), "1".into())],
        )
        .unwrap()
    }

    pub(crate) fn c2() -> Poset {
        Poset::new("C2", vec!["1".into(), "p".into()], "1", &[("p".into(), "1".into())]).unwrap()
    }

    fn one_point() -> Poset {
        Poset::new("pt", vec!["1".into()], "1", &[]).unwrap()
    }

    fn mask(p: &Poset, names: &[&str]) -> u128 {
        names.iter().fold(0, |m, n| m | 1 << p.elem_index(n).unwrap())
    }

    #[test]
    fn leq_examples() {
        let p = p3();
        let (one, a, b) = (0, 1, 2);
        assert!(p.leq(a, one));
        assert!(!p.leq(a, b));
        assert!(p.leq(one, one));
        assert!(p.elem_index("z").is_err());
    }

    #[test]
    fn compatible_examples() {
        let p = p3();
        assert!(!p.compatible(1, 2)); // a, b
        assert!(p.compatible(1, 0)); // a, 1
        let c = c2();
        assert!(c.compatible(1, 0)); // p, 1
        // symmetry and leq => compatible
        for x in 0..p.len() {
            for y in 0..p.len() {
                assert_eq!(p.compatible(x, y), p.compatible(y, x));
                if p.leq(x, y) {
                    assert!(p.compatible(x, y));
                }
            }
        }
    }

    #[test]
    fn dense_examples() {
        let p = p3();
        assert!(p.is_dense(mask(&p, &["a", "b"])));
        assert!(!p.is_dense(mask(&p, &["a"])));
        assert!(p.is_dense(mask(&p, &["1", "a", "b"])));
    }

    #[test]
    fn predense_examples() {
        let p = p3();
        assert!(p.is_predense(mask(&p, &["a", "b"])));
        assert!(p.is_predense(mask(&p, &["1"])));
        assert!(!p.is_predense(mask(&p, &["a"])));
    }

    #[test]
    fn dense_below_examples() {
        let p = p3();
        let a = p.elem_index("a").unwrap();
        let one = p.elem_index("1").unwrap();
        let b = p.elem_index("b").unwrap();
        assert!(p.is_dense_below(mask(&p, &["a"]), a));
        assert!(!p.is_dense_below(mask(&p, &["a"]), one));
        assert!(!p.is_dense_below(0, b));
    }

    #[test]
    fn dense_implies_predense_and_dense_below() {
        for p in [p3(), c2(), one_point(), cohen_poset(1, 2).unwrap()] {
            for d in 0..=p.full_mask() {
                if p.is_dense(d) {
                    assert!(p.is_predense(d));
                    for q in 0..p.len() {
                        assert!(p.is_dense_below(d, q));
                    }
                }
            }
        }
    }

    #[test]
    fn all_dense_subsets_examples() {
        let p = p3();
        assert_eq!(
            p.all_dense_subsets().unwrap(),
            vec![mask(&p, &["a", "b"]), mask(&p, &["1", "a", "b"])]
        );
        let c = c2();
        assert_eq!(
            c.all_dense_subsets().unwrap(),
            vec![mask(&c, &["p"]), mask(&c, &["1", "p"])]
        );
        assert_eq!(one_point().all_dense_subsets().unwrap(), vec![1]);
    }

    #[test]
    fn generic_filters_examples() {
        let p = p3();
        let gs = p.generic_filters().unwrap();
        assert_eq!(
            gs.iter().map(Filter::members).collect::<Vec<_>>(),
            vec![mask(&p, &["1", "a"]), mask(&p, &["1", "b"])]
        );
        let c = c2();
        assert_eq!(
            c.generic_filters().unwrap().iter().map(Filter::members).collect::<Vec<_>>(),
            vec![mask(&c, &["1", "p"])]
        );
        assert_eq!(
            one_point().generic_filters().unwrap().iter().map(Filter::members).collect::<Vec<_>>(),
            vec![1]
        );
        // every generic filter is a filter and meets every dense subset
        for poset in [p3(), c2(), cohen_poset(1, 1).unwrap()] {
            let dense = poset.all_dense_subsets().unwrap();
            for g in poset.generic_filters().unwrap() {
                assert!(poset.is_filter(g.members()));
                assert!(dense.iter().all(|&d| d & g.members() != 0));
            }
        }
    }

    #[test]
    fn separative_examples() {
        assert!(p3().is_separative());
        assert!(!c2().is_separative());
        assert!(one_point().is_separative());
        assert!(cohen_poset(1, 2).unwrap().is_separative());
    }

    #[test]
    fn cohen_poset_examples() {
        let c = cohen_poset(1, 1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.elem_name(c.top()), "e");
        let f0 = c.elem_index("r0c0v0").unwrap();
        let f1 = c.elem_index("r0c0v1").unwrap();
        assert!(!c.compatible(f0, f1));
        assert_eq!(cohen_poset(0, 0).unwrap().len(), 1);
        assert_eq!(cohen_poset(1, 2).unwrap().len(), 9);
        assert!(cohen_poset(3, 2).is_err());
        // separativity across the supported range
        for (n, k) in [(1, 1), (1, 2), (2, 2), (1, 4), (4, 1)] {
            assert!(cohen_poset(n, k).unwrap().is_separative(), "cohen({n},{k})");
        }
    }

    #[test]
    fn morphism_identity_and_negative() {
        let p = p3();
        assert!(DenseMorphism::identity(&p).is_dense_morphism());
        // constant-to-top map breaks the incompatibility axiom
        let m = DenseMorphism::new(p.clone(), p.clone(), vec![0, 0, 0]).unwrap();
        let v = m.check().unwrap_err();
        assert_eq!(v.axiom, 3);
    }

    #[test]
    fn filter_validation() {
        let p = p3();
        assert!(Filter::new(&p, mask(&p, &["1", "a"])).is_ok());
        // no common lower bound for a and b
        assert!(Filter::new(&p, mask(&p, &["1", "a", "b"])).is_err());
        // missing top
        assert!(Filter::new(&p, mask(&p, &["a"])).is_err());
    }

    #[test]
    fn preorders_are_legal() {
        // x and y sit below each other without being equal
        let p = Poset::new(
            "loop",
            vec!["1".into(), "x".into(), "y".into()],
            "1",
            &[("x".into(), "y".into()), ("y".into(), "x".into())],
        )
        .unwrap();
        assert!(!p.is_antisymmetric());
        assert!(p.leq(1, 2) && p.leq(2, 1));
        assert!(p.compatible(1, 2));
        // the cluster behaves like a single condition
        let gs = p.generic_filters().unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].members(), p.full_mask());
    }

    #[test]
    fn from_text_round_trip() {
        let p = Poset::from_text("poset P3\nelements 1 a b\ntop 1\nle a 1\nle b 1\n").unwrap();
        assert_eq!(p, p3());
        assert!(Poset::from_text("poset X\nelements 1\ntop 2\n").is_err());
    }

    /// Distinct generic filters are never nested: exhaustive over all
    /// preorders with top on up to five elements (top fixed to the last
    /// element, which loses nothing up to relabeling).
    #[test]
    fn generic_filters_are_incomparable() {
        for n in 1..=5usize {
            let top = n - 1;
            let free: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && b != top)
                .collect();
            for code in 0u32..1 << free.len() {
                let mut up = vec![0u128; n];
                for (i, row) in up.iter_mut().enumerate() {
                    *row |= 1 << i;
                    *row |= 1 << top;
                }
                for (bit, &(a, b)) in free.iter().enumerate() {
                    if code >> bit & 1 == 1 {
                        up[a] |= 1 << b;
                    }
                }
                // keep only transitively closed relations
                let transitive = (0..n).all(|p| {
                    bits(up[p]).all(|q| up[q] & !up[p] == 0)
                });
                if !transitive {
                    continue;
                }
                let elems: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
                let mut pairs = Vec::new();
                for (a, row) in up.iter().enumerate() {
                    for b in bits(*row) {
                        pairs.push((elems[a].clone(), elems[b].clone()));
                    }
                }
                let p = Poset::new("gen", elems.clone(), &elems[top], &pairs).unwrap();
                let gs = p.generic_filters().unwrap();
                for i in 0..gs.len() {
                    for j in 0..gs.len() {
                        if i != j {
                            assert_ne!(
                                gs[i].members() & gs[j].members(),
                                gs[i].members(),
                                "nested generic filters in poset code {code} (n={n})"
                            );
                        }
                    }
                }
            }
        }
    }
}
