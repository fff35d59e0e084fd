//! Generic extensions and the machinery that compares them: evaluation of
//! a whole name universe under a filter, a Tarski-style satisfaction
//! checker over the resulting hereditarily finite sets, the truth-lemma
//! harness, and the transport of generic filters along dense morphisms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{Formula, Term};
use crate::hf::HfSet;
use crate::name::{Name, NameArena, NameTable, NameUniverse};
use crate::poset::{bits, DenseMorphism, Filter, Poset};
use crate::semantics::SemanticsContext;

/// The evaluations of a name universe under one filter, deduplicated and
/// canonically ordered. Transitive as a family because the universe is
/// membership-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub filter: Filter,
    pub universe_rank: u32,
    pub sets: Vec<HfSet>,
}

/// Evaluate every universe name under the filter.
pub fn extension(
    arena: &NameArena,
    _poset: &Poset,
    g: &Filter,
    u: &NameUniverse,
) -> Extension {
    let sets: BTreeSet<HfSet> = u.names.iter().map(|&x| arena.evaluate(x, g)).collect();
    Extension {
        filter: g.clone(),
        universe_rank: u.rank,
        sets: sets.into_iter().collect(),
    }
}

type HfEnv = Vec<(String, HfSet)>;

/// Classical satisfaction over the extension's sets, with true membership
/// and equality; quantifiers range over the extension.
pub fn hf_models(
    arena: &NameArena,
    e: &Extension,
    consts: &NameTable,
    f: &Formula,
    env: &mut HfEnv,
) -> Result<bool> {
    let term = |t: &Term, env: &HfEnv| -> Result<HfSet> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::Semantic(format!("unbound variable `{v}`"))),
            Term::Const(c) => {
                let n = consts
                    .get(c)
                    .ok_or_else(|| Error::UnknownIdentifier(c.clone()))?;
                Ok(arena.evaluate(n, &e.filter))
            }
        }
    };
    match f {
        Formula::Eq(a, b) => Ok(term(a, env)? == term(b, env)?),
        Formula::Mem(a, b) => Ok(term(b, env)?.contains(&term(a, env)?)),
        Formula::Not(g) => Ok(!hf_models(arena, e, consts, g, env)?),
        Formula::And(l, r) => {
            Ok(hf_models(arena, e, consts, l, env)? && hf_models(arena, e, consts, r, env)?)
        }
        Formula::Or(l, r) => {
            Ok(hf_models(arena, e, consts, l, env)? || hf_models(arena, e, consts, r, env)?)
        }
        Formula::Implies(l, r) => {
            Ok(!hf_models(arena, e, consts, l, env)? || hf_models(arena, e, consts, r, env)?)
        }
        Formula::Iff(l, r) => {
            Ok(hf_models(arena, e, consts, l, env)? == hf_models(arena, e, consts, r, env)?)
        }
        Formula::Forall(v, g) => {
            for s in &e.sets {
                env.push((v.clone(), s.clone()));
                let holds = hf_models(arena, e, consts, g, env);
                env.pop();
                if !holds? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, g) => {
            for s in &e.sets {
                env.push((v.clone(), s.clone()));
                let holds = hf_models(arena, e, consts, g, env);
                env.pop();
                if holds? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// A truth-lemma counterexample: which filter, which direction, and what
/// was observed.
#[derive(Clone, Debug)]
pub struct TruthCounterexample {
    pub filter: Filter,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct TruthLemmaReport {
    pub filters_checked: usize,
    pub counterexamples: Vec<TruthCounterexample>,
}

impl TruthLemmaReport {
    pub fn is_empty(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Both directions of the truth lemma for one closed formula over every
/// generic filter: a forcing condition inside the filter makes the
/// extension satisfy the formula, and satisfaction is always witnessed by
/// a forcer inside the filter.
pub fn truth_lemma_report(ctx: &SemanticsContext, f: &Formula) -> Result<TruthLemmaReport> {
    let poset = ctx.poset();
    let mut report = TruthLemmaReport::default();
    for g in poset.generic_filters()? {
        report.filters_checked += 1;
        let e = extension(ctx.arena(), poset, &g, ctx.universe());
        let satisfied = hf_models(ctx.arena(), &e, ctx.consts(), f, &mut Vec::new())?;
        let mut some_forcer = false;
        for p in bits(g.members()) {
            if ctx.forces_star(p, f)? {
                some_forcer = true;
                if !satisfied {
                    report.counterexamples.push(TruthCounterexample {
                        filter: g.clone(),
                        detail: format!(
                            "{} forces `{f}` inside {} but the extension does not satisfy it",
                            poset.elem_name(p),
                            poset.set_text(g.members())
                        ),
                    });
                }
            }
        }
        if satisfied && !some_forcer {
            report.counterexamples.push(TruthCounterexample {
                filter: g.clone(),
                detail: format!(
                    "extension of {} satisfies `{f}` but no member forces it",
                    poset.set_text(g.members())
                ),
            });
        }
    }
    Ok(report)
}

/// The filter on the target induced by a generic filter on the source:
/// everything above the image of some member. The result is checked to be
/// generic and to pull back to the source filter.
pub fn induced_filter(i: &DenseMorphism, h: &Filter) -> Result<Filter> {
    let source_generics = i.source.generic_filters()?;
    if !source_generics.contains(h) {
        return Err(Error::Semantic(format!(
            "{} is not generic on the source",
            i.source.set_text(h.members())
        )));
    }
    let t = &i.target;
    let mut mask = 0u128;
    for p in 0..t.len() {
        if bits(h.members()).any(|q| t.leq(i.apply(q), p)) {
            mask |= 1 << p;
        }
    }
    let g = Filter::new(t, mask)?;
    if !t.generic_filters()?.contains(&g) {
        return Err(Error::Semantic(format!(
            "induced filter {} is not generic on the target",
            t.set_text(mask)
        )));
    }
    if i.preimage(mask) != h.members() {
        return Err(Error::Semantic(
            "induced filter does not pull back to the source filter".into(),
        ));
    }
    Ok(g)
}

/// Report for the dense-morphism correspondence sweep.
#[derive(Clone, Debug, Default)]
pub struct CorrespondenceReport {
    pub filters_checked: usize,
    pub forcing_cases: usize,
    pub failures: Vec<String>,
}

impl CorrespondenceReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check, for every generic filter on the source of a dense morphism:
/// the induced filter is generic and pulls back correctly; starting from
/// a generic target filter the preimage regenerates it; the extensions
/// over the source universe and its transported closure are equal as set
/// families; and forcing transfers, i.e. a source condition forces a
/// formula exactly when its image forces the transported formula.
pub fn extension_equality_check(
    arena: &NameArena,
    i: &DenseMorphism,
    u_source: NameUniverse,
    consts: &NameTable,
    formulas: &[Formula],
) -> Result<CorrespondenceReport> {
    let mut report = CorrespondenceReport::default();
    let transported: Vec<Name> = u_source
        .names
        .iter()
        .map(|&x| arena.transport(i, x))
        .collect();
    let u_target = crate::name::universe_closure(arena, &transported, i.target.len());
    let mut consts_target = NameTable::new();
    for ident in consts.idents() {
        consts_target.insert(ident, arena.transport(i, consts.get(ident).unwrap()))?;
    }
    let src_ctx = SemanticsContext::new(arena, &i.source, u_source.clone(), consts.clone())?;
    let tgt_ctx = SemanticsContext::new(arena, &i.target, u_target.clone(), consts_target)?;

    for h in i.source.generic_filters()? {
        report.filters_checked += 1;
        let g = induced_filter(i, &h)?;
        let src_ext = extension(arena, &i.source, &h, &u_source);
        let tgt_ext = extension(arena, &i.target, &g, &u_target);
        if src_ext.sets != tgt_ext.sets {
            report.failures.push(format!(
                "extensions differ for {}",
                i.source.set_text(h.members())
            ));
        }
    }
    // a generic filter on the target regenerates from its preimage
    for g in i.target.generic_filters()? {
        let h = Filter::new(&i.source, i.preimage(g.members()))?;
        let regenerated = induced_filter(i, &h)?;
        if regenerated != g {
            report.failures.push(format!(
                "target filter {} does not regenerate from its preimage",
                i.target.set_text(g.members())
            ));
        }
    }
    // forcing transfers along the morphism
    for f in formulas {
        for q in 0..i.source.len() {
            report.forcing_cases += 1;
            let src = src_ctx.forces_star(q, f)?;
            let tgt = tgt_ctx.forces_star(i.apply(q), f)?;
            if src != tgt {
                report.failures.push(format!(
                    "forcing of `{f}` differs at {} (source {src}, target {tgt})",
                    i.source.elem_name(q)
                ));
            }
        }
    }
    Ok(report)
}
