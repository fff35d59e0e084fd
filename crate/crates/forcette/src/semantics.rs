//! The semantic engines: the recursive forcing relation over a poset, the
//! Boolean value of a sentence over a complete algebra, the supremum of the
//! forcing conditions, the derived Boolean forcing relation, and the
//! bridge between the poset and algebra sides.
//!
//! Quantifiers range over a finite, membership-closed name universe held
//! by the context. This is the one deliberate departure from proper-class
//! quantification, applied uniformly to all three engines so that the
//! equivalences between them remain exactly checkable at bounded rank.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::name::{retract, Name, NameArena, NameTable, NameUniverse};
use crate::poset::{bits, DenseMorphism, Poset};
use crate::ro::RegularOpenAlgebra;

type Env = Vec<(String, Name)>;

/// Evaluation context: a poset, an optional algebra whose nonzero carrier
/// the poset is, a quantifier universe, declared constants, and memo tables
/// for the atomic recursions (which revisit subproblems exponentially when
/// not cached).
pub struct SemanticsContext<'a> {
    arena: &'a NameArena,
    poset: Poset,
    algebra: Option<RegularOpenAlgebra>,
    universe: NameUniverse,
    consts: NameTable,
    star_memo: Mutex<HashMap<(bool, usize, Name, Name), bool>>,
    bv_memo: Mutex<HashMap<(u8, Name, Name), usize>>,
}

impl<'a> SemanticsContext<'a> {
    pub fn new(
        arena: &'a NameArena,
        poset: &Poset,
        universe: NameUniverse,
        consts: NameTable,
    ) -> Result<Self> {
        if universe.poset_len != poset.len() {
            return Err(Error::Semantic(
                "universe was built over a different poset".into(),
            ));
        }
        Ok(SemanticsContext {
            arena,
            poset: poset.clone(),
            algebra: None,
            universe,
            consts,
            star_memo: Mutex::new(HashMap::new()),
            bv_memo: Mutex::new(HashMap::new()),
        })
    }

    /// Context over the nonzero carrier of an algebra, enabling the
    /// Boolean-valued engine and the supremum engine.
    pub fn with_algebra(
        arena: &'a NameArena,
        algebra: &RegularOpenAlgebra,
        universe: NameUniverse,
        consts: NameTable,
    ) -> Result<Self> {
        let poset = algebra.nonzero_poset();
        if universe.poset_len != poset.len() {
            return Err(Error::Semantic(
                "universe was built over a different poset".into(),
            ));
        }
        Ok(SemanticsContext {
            arena,
            poset,
            algebra: Some(algebra.clone()),
            universe,
            consts,
            star_memo: Mutex::new(HashMap::new()),
            bv_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn arena(&self) -> &NameArena {
        self.arena
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn algebra(&self) -> Option<&RegularOpenAlgebra> {
        self.algebra.as_ref()
    }

    pub fn universe(&self) -> &NameUniverse {
        &self.universe
    }

    pub fn consts(&self) -> &NameTable {
        &self.consts
    }

    fn resolve(&self, t: &Term, env: &Env) -> Result<Name> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, n)| *n)
                .ok_or_else(|| Error::Semantic(format!("unbound variable `{v}`"))),
            Term::Const(c) => {
                let n = self
                    .consts
                    .get(c)
                    .ok_or_else(|| Error::UnknownIdentifier(c.clone()))?;
                if !self.universe.names.contains(&n) {
                    return Err(Error::Semantic(format!(
                        "constant `{c}` lies outside the quantifier universe"
                    )));
                }
                Ok(n)
            }
        }
    }

    // ----------------------------------------------------------------
    // the forcing relation
    // ----------------------------------------------------------------

    /// Does condition `p` force the closed formula `f`?
    pub fn forces_star(&self, p: usize, f: &Formula) -> Result<bool> {
        self.star(p, f, &mut Vec::new())
    }

    /// Atomic equality at the name level: `p` forces `x = y`.
    pub fn forces_eq(&self, p: usize, x: Name, y: Name) -> bool {
        self.star_eq(p, x, y)
    }

    /// Atomic membership at the name level: `p` forces `x in y`.
    pub fn forces_mem(&self, p: usize, x: Name, y: Name) -> bool {
        self.star_mem(p, x, y)
    }

    fn star(&self, p: usize, f: &Formula, env: &mut Env) -> Result<bool> {
        match f {
            Formula::Eq(a, b) => {
                let (x, y) = (self.resolve(a, env)?, self.resolve(b, env)?);
                Ok(self.star_eq(p, x, y))
            }
            Formula::Mem(a, b) => {
                let (x, y) = (self.resolve(a, env)?, self.resolve(b, env)?);
                Ok(self.star_mem(p, x, y))
            }
            Formula::And(l, r) => Ok(self.star(p, l, env)? && self.star(p, r, env)?),
            Formula::Not(g) => {
                for q in bits(self.poset.down_set(p)) {
                    if self.star(q, g, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Implies(l, r) => {
                // no q <= p forcing the antecedent together with the
                // negated consequent
                for q in bits(self.poset.down_set(p)) {
                    if self.star(q, l, env)? && self.star_negated(q, r, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(l, r) => {
                let mut witnesses = 0u128;
                for q in bits(self.poset.down_set(p)) {
                    if self.star(q, l, env)? || self.star(q, r, env)? {
                        witnesses |= 1 << q;
                    }
                }
                Ok(self.poset.is_dense_below(witnesses, p))
            }
            Formula::Iff(l, r) => {
                // stated two-sided form: no condition below p forces one
                // side together with the other's negation
                for q in bits(self.poset.down_set(p)) {
                    if self.star(q, l, env)? && self.star_negated(q, r, env)? {
                        return Ok(false);
                    }
                    if self.star_negated(q, l, env)? && self.star(q, r, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Forall(v, g) => {
                for &x in &self.universe.names {
                    env.push((v.clone(), x));
                    let holds = self.star(p, g, env);
                    env.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Exists(v, g) => {
                let mut witnesses = 0u128;
                'cond: for q in bits(self.poset.down_set(p)) {
                    for &x in &self.universe.names {
                        env.push((v.clone(), x));
                        let holds = self.star(q, g, env);
                        env.pop();
                        if holds? {
                            witnesses |= 1 << q;
                            continue 'cond;
                        }
                    }
                }
                Ok(self.poset.is_dense_below(witnesses, p))
            }
        }
    }

    fn star_negated(&self, p: usize, f: &Formula, env: &mut Env) -> Result<bool> {
        for q in bits(self.poset.down_set(p)) {
            if self.star(q, f, env)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn star_eq(&self, p: usize, x: Name, y: Name) -> bool {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        if let Some(&v) = self.star_memo.lock().unwrap().get(&(true, p, x, y)) {
            return v;
        }
        let mut dom = self.arena.dom(x);
        dom.extend(self.arena.dom(y));
        dom.sort();
        dom.dedup();
        let mut result = true;
        'outer: for z in dom {
            for q in bits(self.poset.down_set(p)) {
                if self.star_mem(q, z, x) != self.star_mem(q, z, y) {
                    result = false;
                    break 'outer;
                }
            }
        }
        self.star_memo.lock().unwrap().insert((true, p, x, y), result);
        result
    }

    fn star_mem(&self, p: usize, x: Name, y: Name) -> bool {
        if let Some(&v) = self.star_memo.lock().unwrap().get(&(false, p, x, y)) {
            return v;
        }
        let pairs = self.arena.pairs(y);
        let mut witnesses = 0u128;
        for q in bits(self.poset.down_set(p)) {
            if pairs
                .iter()
                .any(|&(z, r)| self.poset.leq(q, r) && self.star_eq(q, x, z))
            {
                witnesses |= 1 << q;
            }
        }
        let result = self.poset.is_dense_below(witnesses, p);
        self.star_memo.lock().unwrap().insert((false, p, x, y), result);
        result
    }

    // ----------------------------------------------------------------
    // Boolean values
    // ----------------------------------------------------------------

    /// The Boolean value of a closed formula whose constants are functional
    /// names over the algebra. Returns a carrier index.
    pub fn boolean_value(&self, f: &Formula) -> Result<usize> {
        self.require_algebra()?;
        self.bv(f, &mut Vec::new())
    }

    /// Carrier index of `x in y` for functional names.
    pub fn value_mem(&self, x: Name, y: Name) -> Result<usize> {
        self.require_algebra()?;
        self.check_functional(x)?;
        self.check_functional(y)?;
        Ok(self.bv_mem(x, y))
    }

    /// Carrier index of `x = y` for functional names.
    pub fn value_eq(&self, x: Name, y: Name) -> Result<usize> {
        self.require_algebra()?;
        self.check_functional(x)?;
        self.check_functional(y)?;
        Ok(self.bv_eq(x, y))
    }

    fn require_algebra(&self) -> Result<&RegularOpenAlgebra> {
        self.algebra
            .as_ref()
            .ok_or_else(|| Error::Semantic("context has no algebra".into()))
    }

    fn check_functional(&self, x: Name) -> Result<()> {
        if !self.arena.is_functional(x) {
            return Err(Error::NotFunctional(
                "Boolean values are defined on functional names; retract first".into(),
            ));
        }
        Ok(())
    }

    fn bv(&self, f: &Formula, env: &mut Env) -> Result<usize> {
        let alg = self.algebra.as_ref().expect("checked by caller");
        match f {
            Formula::Eq(a, b) => {
                let (x, y) = (self.resolve(a, env)?, self.resolve(b, env)?);
                self.check_functional(x)?;
                self.check_functional(y)?;
                Ok(self.bv_eq(x, y))
            }
            Formula::Mem(a, b) => {
                let (x, y) = (self.resolve(a, env)?, self.resolve(b, env)?);
                self.check_functional(x)?;
                self.check_functional(y)?;
                Ok(self.bv_mem(x, y))
            }
            Formula::Not(g) => Ok(alg.compl(self.bv(g, env)?)),
            Formula::And(l, r) => Ok(alg.meet(self.bv(l, env)?, self.bv(r, env)?)),
            Formula::Or(l, r) => Ok(alg.join(self.bv(l, env)?, self.bv(r, env)?)),
            Formula::Implies(l, r) => {
                let (lv, rv) = (self.bv(l, env)?, self.bv(r, env)?);
                Ok(alg.join(alg.compl(lv), rv))
            }
            Formula::Iff(l, r) => {
                let (lv, rv) = (self.bv(l, env)?, self.bv(r, env)?);
                let fwd = alg.join(alg.compl(lv), rv);
                let bwd = alg.join(alg.compl(rv), lv);
                Ok(alg.meet(fwd, bwd))
            }
            Formula::Forall(v, g) => {
                let mut items = Vec::new();
                for &x in &self.universe.names {
                    if !self.arena.is_functional(x) {
                        continue;
                    }
                    env.push((v.clone(), x));
                    let val = self.bv(g, env);
                    env.pop();
                    items.push(val?);
                }
                Ok(alg.meet_family(items))
            }
            Formula::Exists(v, g) => {
                let mut items = Vec::new();
                for &x in &self.universe.names {
                    if !self.arena.is_functional(x) {
                        continue;
                    }
                    env.push((v.clone(), x));
                    let val = self.bv(g, env);
                    env.pop();
                    items.push(val?);
                }
                Ok(alg.join_family(items))
            }
        }
    }

    fn bv_mem(&self, x: Name, y: Name) -> usize {
        if let Some(&v) = self.bv_memo.lock().unwrap().get(&(0, x, y)) {
            return v;
        }
        let alg = self.algebra.as_ref().expect("algebra present");
        let items: Vec<usize> = self
            .arena
            .pairs(y)
            .into_iter()
            .map(|(t, b)| alg.meet(self.bv_eq(x, t), b + 1))
            .collect();
        let result = alg.join_family(items);
        self.bv_memo.lock().unwrap().insert((0, x, y), result);
        result
    }

    /// Value of the inclusion `x ⊆ y`: conditions of members of `x` imply
    /// their membership in `y`. Members absent from the graph carry value
    /// zero by convention.
    fn bv_sub(&self, x: Name, y: Name) -> usize {
        if let Some(&v) = self.bv_memo.lock().unwrap().get(&(1, x, y)) {
            return v;
        }
        let alg = self.algebra.as_ref().expect("algebra present");
        let items: Vec<usize> = self
            .arena
            .pairs(x)
            .into_iter()
            .map(|(t, b)| alg.join(alg.compl(b + 1), self.bv_mem(t, y)))
            .collect();
        let result = alg.meet_family(items);
        self.bv_memo.lock().unwrap().insert((1, x, y), result);
        result
    }

    fn bv_eq(&self, x: Name, y: Name) -> usize {
        if let Some(&v) = self.bv_memo.lock().unwrap().get(&(2, x, y)) {
            return v;
        }
        let alg = self.algebra.as_ref().expect("algebra present");
        let result = alg.meet(self.bv_sub(x, y), self.bv_sub(y, x));
        self.bv_memo.lock().unwrap().insert((2, x, y), result);
        result
    }

    // ----------------------------------------------------------------
    // supremum of forcers
    // ----------------------------------------------------------------

    /// Join in the algebra of all nonzero conditions forcing `f`; zero when
    /// nothing forces it.
    pub fn sup_forcing(&self, f: &Formula) -> Result<usize> {
        let alg = self.require_algebra()?;
        if self.poset.len() + 1 != alg.len() {
            return Err(Error::Semantic(
                "supremum engine needs the nonzero carrier as its poset".into(),
            ));
        }
        let mut forcers = Vec::new();
        for b in 0..self.poset.len() {
            if self.forces_star(b, f)? {
                forcers.push(b + 1);
            }
        }
        Ok(self.algebra.as_ref().unwrap().join_family(forcers))
    }
}

/// The Boolean forcing relation: `p` forces `f` when the canonical image
/// of `p` sits below the Boolean value of `f`. The context must be the
/// algebra-side context and `i` the canonical morphism of its algebra.
pub fn forces_ba(
    ctx: &SemanticsContext,
    i: &DenseMorphism,
    p: usize,
    f: &Formula,
) -> Result<bool> {
    let alg = ctx
        .algebra()
        .ok_or_else(|| Error::Semantic("context has no algebra".into()))?;
    let value = ctx.boolean_value(f)?;
    Ok(alg.leq(i.apply(p) + 1, value))
}

/// Both sides of the bridge for one condition and formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BridgeOutcome {
    pub poset_side: bool,
    pub algebra_side: bool,
}

impl BridgeOutcome {
    pub fn agree(&self) -> bool {
        self.poset_side == self.algebra_side
    }
}

/// Everything needed to evaluate both sides of the bridge repeatedly with
/// shared memo tables: the poset-side context, the algebra-side context
/// whose constants are the retracted transports of the poset-side ones,
/// and the canonical morphism connecting them.
pub struct BridgeHarness<'a> {
    pub star_ctx: SemanticsContext<'a>,
    pub ba_ctx: SemanticsContext<'a>,
    pub morphism: DenseMorphism,
}

impl<'a> BridgeHarness<'a> {
    pub fn new(
        arena: &'a NameArena,
        poset: &Poset,
        consts: &NameTable,
        rank: u32,
        max_count: usize,
    ) -> Result<Self> {
        let source_universe = crate::name::enumerate_names(arena, poset, rank, max_count)?;
        let algebra = RegularOpenAlgebra::new(poset)?;
        let morphism = algebra.canonical_morphism();
        let mut transported: Vec<Name> = source_universe
            .names
            .iter()
            .map(|&x| retract(arena, &algebra, arena.transport(&morphism, x)))
            .collect();
        transported.sort();
        transported.dedup();
        let target_universe = crate::name::universe_closure(
            arena,
            &transported,
            morphism.target.len(),
        );
        let mut target_consts = NameTable::new();
        for ident in consts.idents() {
            let x = consts.get(ident).expect("ident comes from the table");
            target_consts.insert(
                ident,
                retract(arena, &algebra, arena.transport(&morphism, x)),
            )?;
        }
        let star_ctx = SemanticsContext::new(arena, poset, source_universe, consts.clone())?;
        let ba_ctx = SemanticsContext::with_algebra(arena, &algebra, target_universe, target_consts)?;
        Ok(BridgeHarness {
            star_ctx,
            ba_ctx,
            morphism,
        })
    }

    pub fn check(&self, p: usize, f: &Formula) -> Result<BridgeOutcome> {
        Ok(BridgeOutcome {
            poset_side: self.star_ctx.forces_star(p, f)?,
            algebra_side: forces_ba(&self.ba_ctx, &self.morphism, p, f)?,
        })
    }
}

/// One-shot bridge evaluation; sweeps should build a [`BridgeHarness`] and
/// reuse it instead.
pub fn bridge_check(
    arena: &NameArena,
    poset: &Poset,
    at: usize,
    f: &Formula,
    consts: &NameTable,
    rank: u32,
    max_count: usize,
) -> Result<BridgeOutcome> {
    BridgeHarness::new(arena, poset, consts, rank, max_count)?.check(at, f)
}

/// Both joins of the maximum-principle identity for a functional name:
/// the join of the name's own conditions, and the join over the universe
/// of the membership values.
pub fn max_principle(ctx: &SemanticsContext, u: Name) -> Result<(usize, usize)> {
    let alg = ctx
        .algebra()
        .ok_or_else(|| Error::Semantic("context has no algebra".into()))?;
    let lhs = alg.join_family(ctx.arena().pairs(u).into_iter().map(|(_, b)| b + 1));
    let mut items = Vec::new();
    for &t in &ctx.universe().names {
        if ctx.arena().is_functional(t) {
            items.push(ctx.value_mem(t, u)?);
        }
    }
    let rhs = alg.join_family(items);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::name::{enumerate_functional_names, enumerate_names};

    fn p3() -> Poset {
        Poset::new(
            "P3",
            vec!["1".into(), "a".into(), "b".into()],
            "1",
            &[("a".into(), "1".into()), ("b".into(), "1".into())],
        )
        .unwrap()
    }

    fn corpus_table(arena: &NameArena, p: &Poset) -> NameTable {
        let one = p.elem_index("1").unwrap();
        let a = p.elem_index("a").unwrap();
        let b = p.elem_index("b").unwrap();
        let n0 = arena.empty();
        let mut t = NameTable::new();
        t.insert("n0", n0).unwrap();
        t.insert("n1", arena.mk(vec![(n0, a)])).unwrap();
        t.insert("n2", arena.mk(vec![(n0, one)])).unwrap();
        t.insert("n3", arena.mk(vec![(n0, a), (n0, b)])).unwrap();
        t
    }

    fn star_ctx<'a>(arena: &'a NameArena, p: &Poset) -> SemanticsContext<'a> {
        let u = enumerate_names(arena, p, 1, 1 << 20).unwrap();
        SemanticsContext::new(arena, p, u, corpus_table(arena, p)).unwrap()
    }

    fn pf(ctx: &SemanticsContext, src: &str) -> Formula {
        let consts = ctx.consts().clone();
        parse(src, &move |id| consts.contains(id)).unwrap()
    }

    #[test]
    fn forces_star_examples() {
        let arena = NameArena::new();
        let p = p3();
        let ctx = star_ctx(&arena, &p);
        let (one, a, b) = (0, 1, 2);
        assert!(ctx.forces_star(a, &pf(&ctx, "n0 in n1")).unwrap());
        assert!(!ctx.forces_star(b, &pf(&ctx, "n0 in n1")).unwrap());
        assert!(ctx.forces_star(b, &pf(&ctx, "~(n0 in n1)")).unwrap());
        assert!(ctx.forces_star(one, &pf(&ctx, "n0 in n3")).unwrap());
        for q in 0..p.len() {
            assert!(ctx.forces_star(q, &pf(&ctx, "n0 = n0")).unwrap());
        }
    }

    fn b4_ctx(arena: &NameArena) -> (SemanticsContext<'_>, RegularOpenAlgebra, DenseMorphism) {
        let p = p3();
        let alg = RegularOpenAlgebra::new(&p).unwrap();
        let i = alg.canonical_morphism();
        let nz = alg.nonzero_poset();
        let universe = enumerate_functional_names(arena, &nz, 1, 1 << 20).unwrap();
        // transported corpus constants
        let src = corpus_table(arena, &p);
        let mut consts = NameTable::new();
        for ident in src.idents() {
            let x = src.get(ident).unwrap();
            consts
                .insert(ident, retract(arena, &alg, arena.transport(&i, x)))
                .unwrap();
        }
        let ctx = SemanticsContext::with_algebra(arena, &alg, universe, consts).unwrap();
        (ctx, alg, i)
    }

    #[test]
    fn boolean_value_examples() {
        let arena = NameArena::new();
        let (ctx, alg, _) = b4_ctx(&arena);
        let a_mask = alg
            .index_of(p3().parse_set("a").unwrap())
            .unwrap();
        assert_eq!(ctx.boolean_value(&pf(&ctx, "n0 in n1")).unwrap(), a_mask);
        assert_eq!(ctx.boolean_value(&pf(&ctx, "n1 = n2")).unwrap(), a_mask);
        assert_eq!(ctx.boolean_value(&pf(&ctx, "n1 = n1")).unwrap(), alg.one());
    }

    #[test]
    fn boolean_value_rejects_non_functional() {
        let arena = NameArena::new();
        let p = p3();
        let alg = RegularOpenAlgebra::new(&p).unwrap();
        let i = alg.canonical_morphism();
        let nz = alg.nonzero_poset();
        let universe = enumerate_names(&arena, &nz, 1, 1 << 20).unwrap();
        let n0 = arena.empty();
        let src = corpus_table(&arena, &p);
        let mut consts = NameTable::new();
        consts.insert("n0", n0).unwrap();
        consts
            .insert("n3", arena.transport(&i, src.get("n3").unwrap()))
            .unwrap();
        let ctx = SemanticsContext::with_algebra(&arena, &alg, universe, consts).unwrap();
        assert!(matches!(
            ctx.boolean_value(&pf(&ctx, "n0 in n3")),
            Err(Error::NotFunctional(_))
        ));
    }

    #[test]
    fn sup_forcing_examples() {
        let arena = NameArena::new();
        let p = p3();
        let alg = RegularOpenAlgebra::new(&p).unwrap();
        let i = alg.canonical_morphism();
        let nz = alg.nonzero_poset();
        let universe = enumerate_names(&arena, &nz, 1, 1 << 20).unwrap();
        let src = corpus_table(&arena, &p);
        let mut consts = NameTable::new();
        for ident in src.idents() {
            consts
                .insert(ident, arena.transport(&i, src.get(ident).unwrap()))
                .unwrap();
        }
        let ctx = SemanticsContext::with_algebra(&arena, &alg, universe, consts).unwrap();
        let a_mask = alg.index_of(p3().parse_set("a").unwrap()).unwrap();
        assert_eq!(ctx.sup_forcing(&pf(&ctx, "n0 in n1")).unwrap(), a_mask);
        assert_eq!(ctx.sup_forcing(&pf(&ctx, "n0 = n0")).unwrap(), alg.one());
        assert_eq!(ctx.sup_forcing(&pf(&ctx, "~(n0 = n0)")).unwrap(), alg.zero());
    }

    #[test]
    fn forces_ba_examples() {
        let arena = NameArena::new();
        let (ctx, _, i) = b4_ctx(&arena);
        let p = p3();
        let a = p.elem_index("a").unwrap();
        let b = p.elem_index("b").unwrap();
        let one = p.elem_index("1").unwrap();
        assert!(forces_ba(&ctx, &i, a, &pf(&ctx, "n1 = n2")).unwrap());
        assert!(!forces_ba(&ctx, &i, b, &pf(&ctx, "n1 = n2")).unwrap());
        assert!(forces_ba(&ctx, &i, one, &pf(&ctx, "n1 = n1")).unwrap());
    }

    #[test]
    fn bridge_examples() {
        let arena = NameArena::new();
        let p = p3();
        let consts = corpus_table(&arena, &p);
        let h = BridgeHarness::new(&arena, &p, &consts, 1, 1 << 20).unwrap();
        let f = pf(&h.star_ctx, "n1 = n2");
        let a = p.elem_index("a").unwrap();
        let b = p.elem_index("b").unwrap();
        let at_a = h.check(a, &f).unwrap();
        assert!(at_a.poset_side && at_a.algebra_side);
        let at_b = h.check(b, &f).unwrap();
        assert!(!at_b.poset_side && !at_b.algebra_side);
        let trivial = h.check(p.top(), &pf(&h.star_ctx, "n0 = n0")).unwrap();
        assert!(trivial.poset_side && trivial.algebra_side);
    }

    #[test]
    fn max_principle_examples() {
        let arena = NameArena::new();
        let (ctx, alg, _) = b4_ctx(&arena);
        let a_mask = alg.index_of(p3().parse_set("a").unwrap()).unwrap();
        let tn1 = ctx.consts().get("n1").unwrap();
        assert_eq!(max_principle(&ctx, tn1).unwrap(), (a_mask, a_mask));
        assert_eq!(
            max_principle(&ctx, arena.empty()).unwrap(),
            (alg.zero(), alg.zero())
        );
        let tn3 = ctx.consts().get("n3").unwrap();
        assert_eq!(max_principle(&ctx, tn3).unwrap(), (alg.one(), alg.one()));
    }

    #[test]
    fn monotone_and_consistent_on_depth_two_sweep() {
        let arena = NameArena::new();
        let p = p3();
        let ctx = star_ctx(&arena, &p);
        let atoms = [pf(&ctx, "n0 in n1"), pf(&ctx, "n1 = n3")];
        let formulas = crate::formula::enumerate_formulas(
            &atoms,
            2,
            crate::formula::Connectives::propositional(),
            10_000,
        )
        .unwrap();
        for f in &formulas {
            for q in 0..p.len() {
                let fq = ctx.forces_star(q, f).unwrap();
                // consistency
                assert!(!(fq && ctx.forces_star(q, &Formula::not(f.clone())).unwrap()));
                // monotonicity
                if fq {
                    for r in bits(p.down_set(q)) {
                        assert!(ctx.forces_star(r, f).unwrap(), "{f} at {r} below {q}");
                    }
                }
            }
        }
    }
}
