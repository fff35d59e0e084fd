//! Deterministic corpus sweeps: batch verifications of the equivalence
//! results, shared by the acceptance tests and the `crosscheck` command.
//!
//! Every sweep produces one stable line per case, so reports are
//! machine-grepable and byte-identical across runs.

use crate::error::Result;
use crate::extension::{extension_equality_check, induced_filter, truth_lemma_report};
use crate::formula::{enumerate_formulas, to_text, Connectives, Formula, Term};
use crate::name::{
    enumerate_functional_names, enumerate_names, enumerate_names_over, retract, universe_closure,
    Name, NameArena, NameTable,
};
use crate::poset::{bits, Filter, Poset};
use crate::ro::RegularOpenAlgebra;
use crate::semantics::{BridgeHarness, SemanticsContext};
use crate::sheaf::{Topology, 
    check_topology_axioms, dense_topology, equivalence_report, generated_sieve, induced_topology,
    sieves_on, sup_topology,
};

/// One verified case.
#[derive(Clone, Debug)]
pub struct SweepCase {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

/// A batch of cases under one suite name.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub suite: String,
    pub cases: Vec<SweepCase>,
}

impl SweepReport {
    pub fn new(suite: &str) -> Self {
        SweepReport {
            suite: suite.to_string(),
            cases: Vec::new(),
        }
    }

    fn push(&mut self, id: String, pass: bool, detail: String) {
        self.cases.push(SweepCase { id, pass, detail });
    }

    pub fn failed(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    /// Stable `CASE ... PASS|FAIL` lines followed by a summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "CASE {} {}{}\n",
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.detail)
                }
            ));
        }
        out.push_str(&format!(
            "SUMMARY {}: {} cases, {} failed\n",
            self.suite,
            self.cases.len(),
            self.failed()
        ));
        out
    }
}

/// The default name corpus over a poset: the empty name, a singleton at the
/// first non-top element, a singleton at top, and a two-condition name
/// (non-functional whenever two distinct conditions exist).
pub fn default_corpus(arena: &NameArena, poset: &Poset) -> NameTable {
    let n0 = arena.empty();
    let e1 = if poset.len() > 1 { 1 } else { 0 };
    let e2 = if poset.len() > 2 { 2 } else { poset.top() };
    let mut t = NameTable::new();
    t.insert("n0", n0).expect("fresh table");
    t.insert("n1", arena.mk(vec![(n0, e1)])).expect("fresh table");
    t.insert("n2", arena.mk(vec![(n0, poset.top())])).expect("fresh table");
    t.insert("n3", arena.mk(vec![(n0, e1), (n0, e2)])).expect("fresh table");
    t
}

/// The standard formula corpus: the closure of two atoms under the
/// propositional connectives up to `depth`, plus a family of
/// one-quantifier formulas over the declared constants.
pub fn standard_corpus(consts: &NameTable, depth: usize) -> Result<Vec<Formula>> {
    let ids = consts.idents();
    if ids.is_empty() {
        return Ok(Vec::new());
    }
    let c = |k: usize| Term::Const(ids[k.min(ids.len() - 1)].clone());
    let atoms = [
        Formula::Mem(c(0), c(1)),
        Formula::Eq(c(1), c(ids.len().saturating_sub(1))),
    ];
    let mut corpus = enumerate_formulas(&atoms, depth, Connectives::propositional(), 100_000)?;
    let x = || Term::Var("x".to_string());
    for quant in [Formula::forall, Formula::exists] {
        for ident in ids.iter().take(4) {
            let t = || Term::Const(ident.clone());
            corpus.push(quant("x", Formula::Mem(x(), t())));
            corpus.push(quant("x", Formula::Mem(t(), x())));
            corpus.push(quant("x", Formula::Eq(x(), t())));
        }
        corpus.push(quant("x", Formula::Eq(x(), x())));
        corpus.push(quant(
            "x",
            Formula::or(Formula::Mem(x(), c(3)), Formula::Eq(x(), c(0))),
        ));
        corpus.push(quant("x", Formula::not(Formula::Mem(x(), c(1)))));
    }
    Ok(corpus)
}

/// Both sides of the bridge agree at every condition and corpus formula.
pub fn bridge_sweep(
    arena: &NameArena,
    poset: &Poset,
    consts: &NameTable,
    rank: u32,
    depth: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("bridge");
    let harness = BridgeHarness::new(arena, poset, consts, rank, 1 << 22)?;
    for f in standard_corpus(consts, depth)? {
        for p in 0..poset.len() {
            let outcome = harness.check(p, &f)?;
            report.push(
                format!("{} at {} `{}`", poset.name(), poset.elem_name(p), to_text(&f)),
                outcome.agree(),
                if outcome.agree() {
                    String::new()
                } else {
                    format!(
                        "poset side {}, algebra side {}",
                        outcome.poset_side, outcome.algebra_side
                    )
                },
            );
        }
    }
    Ok(report)
}

/// The supremum of forcers equals the Boolean value for every corpus
/// formula with functional constants over the completion.
pub fn boolval_sweep(
    arena: &NameArena,
    poset: &Poset,
    consts: &NameTable,
    rank: u32,
    depth: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("boolval");
    let algebra = RegularOpenAlgebra::new(poset)?;
    let morphism = algebra.canonical_morphism();
    let nz = morphism.target.clone();
    let mut lifted = NameTable::new();
    for ident in consts.idents() {
        let x = consts.get(ident).expect("ident from table");
        lifted.insert(ident, retract(arena, &algebra, arena.transport(&morphism, x)))?;
    }
    let universe = enumerate_functional_names(arena, &nz, rank, 1 << 22)?;
    let seeds: Vec<Name> = universe.names.iter().copied().chain(lifted.names()).collect();
    let universe = universe_closure(arena, &seeds, nz.len());
    let ctx = SemanticsContext::with_algebra(arena, &algebra, universe, lifted.clone())?;
    for f in standard_corpus(&lifted, depth)? {
        let sup = ctx.sup_forcing(&f)?;
        let val = ctx.boolean_value(&f)?;
        report.push(
            format!("{} `{}`", poset.name(), to_text(&f)),
            sup == val,
            if sup == val {
                String::new()
            } else {
                format!(
                    "sup {} != value {}",
                    algebra.element_text(sup),
                    algebra.element_text(val)
                )
            },
        );
    }
    Ok(report)
}

/// The truth lemma holds in both directions for every corpus formula,
/// every generic filter.
pub fn truth_sweep(
    arena: &NameArena,
    poset: &Poset,
    consts: &NameTable,
    rank: u32,
    depth: usize,
) -> Result<SweepReport> {
    let mut report = SweepReport::new("truth");
    let universe = enumerate_names(arena, poset, rank, 1 << 22)?;
    let seeds: Vec<Name> = universe.names.iter().copied().chain(consts.names()).collect();
    let universe = universe_closure(arena, &seeds, poset.len());
    let ctx = SemanticsContext::new(arena, poset, universe, consts.clone())?;
    for f in standard_corpus(consts, depth)? {
        let r = truth_lemma_report(&ctx, &f)?;
        report.push(
            format!("{} `{}`", poset.name(), to_text(&f)),
            r.is_empty(),
            r.counterexamples
                .first()
                .map(|c| c.detail.clone())
                .unwrap_or_default(),
        );
    }
    Ok(report)
}

/// Filter correspondence along the canonical morphism: induced filters are
/// generic, pull back, regenerate, and give equal extensions.
pub fn filters_sweep(arena: &NameArena, poset: &Poset, rank: u32) -> Result<SweepReport> {
    let mut report = SweepReport::new("filters");
    let algebra = RegularOpenAlgebra::new(poset)?;
    let i = algebra.canonical_morphism();
    for h in poset.generic_filters()? {
        let id = format!("{} filter {}", poset.name(), poset.set_text(h.members()));
        match induced_filter(&i, &h) {
            Ok(g) => {
                let round = Filter::new(&i.source, i.preimage(g.members()))
                    .map(|back| back == h)
                    .unwrap_or(false);
                report.push(id, round, String::new());
            }
            Err(e) => report.push(id, false, e.to_string()),
        }
    }
    for g in i.target.generic_filters()? {
        let id = format!(
            "{} target filter {} regenerates",
            poset.name(),
            i.target.set_text(g.members())
        );
        let ok = Filter::new(&i.source, i.preimage(g.members()))
            .ok()
            .and_then(|h| induced_filter(&i, &h).ok())
            .map(|again| again == g)
            .unwrap_or(false);
        report.push(id, ok, String::new());
    }
    let universe = enumerate_names(arena, poset, rank, 1 << 22)?;
    let mut consts = NameTable::new();
    consts.insert("n0", arena.empty())?;
    let formulas = vec![
        crate::formula::parse("n0 = n0", &|id| id == "n0")?,
        crate::formula::parse("exists x. x = n0", &|id| id == "n0")?,
        crate::formula::parse("forall x. n0 in x", &|id| id == "n0")?,
    ];
    let corr = extension_equality_check(arena, &i, universe, &consts, &formulas)?;
    report.push(
        format!(
            "{} extensions equal across {} filters, {} forcing cases",
            poset.name(),
            corr.filters_checked,
            corr.forcing_cases
        ),
        corr.is_empty(),
        corr.failures.first().cloned().unwrap_or_default(),
    );
    Ok(report)
}

/// The topology induced along the canonical morphism is the dense
/// topology; on the completion, dense sieves are exactly the sieves whose
/// closure joins to their element.
pub fn topology_sweep(poset: &Poset) -> Result<SweepReport> {
    let mut report = SweepReport::new("topology");
    let algebra = RegularOpenAlgebra::new(poset)?;
    let i = algebra.canonical_morphism();
    let nz = i.target.clone();
    let j_nz = dense_topology(&nz)?;
    let (induced, _) = induced_topology(poset, &nz, i.map(), &j_nz)?;
    let dense = dense_topology(poset)?;
    report.push(
        format!("{} induced topology is dense", poset.name()),
        induced == dense,
        String::new(),
    );
    // dense sieves on the nonzero carrier = sieves joining to the element
    let full = algebra.full_poset();
    let mut agree = true;
    let mut checked = 0usize;
    for b in 0..nz.len() {
        let fb = full
            .elem_index(nz.elem_name(b))
            .expect("carrier names are shared");
        for s in sieves_on(&nz, b)? {
            checked += 1;
            let gens = bits(s).fold(0u128, |m, e| {
                m | 1 << full.elem_index(nz.elem_name(e)).expect("shared name")
            });
            let closed = generated_sieve(&full, fb, gens)?;
            let joins = algebra.join_family(bits(closed.members)) == fb;
            if nz.is_dense_below(s, b) != joins {
                agree = false;
            }
        }
    }
    report.push(
        format!("{} dense/join sieve identity over {checked} sieves", poset.name()),
        agree,
        String::new(),
    );
    // the transitivity sweep is cubic in the sieve counts, so the sup
    // topology on a large carrier is exempted; everything else is checked
    let mut sites: Vec<(&str, Topology)> = Vec::new();
    if poset.len() <= 9 {
        sites.push(("dense", dense_topology(poset)?));
        sites.push(("induced", induced));
    }
    if algebra.len() <= 8 {
        sites.push(("sup", sup_topology(&algebra)?));
    }
    for (label, j) in sites {
        let violations = check_topology_axioms(&j)?;
        report.push(
            format!("{} {label} topology axioms", poset.name()),
            violations.is_empty(),
            violations.first().map(ToString::to_string).unwrap_or_default(),
        );
    }
    Ok(report)
}

/// Bounded sheaf-category equivalences along the canonical morphism, the
/// inclusion into the full carrier, and their composite.
pub fn equiv_sweep(poset: &Poset, max_card: usize) -> Result<SweepReport> {
    let mut report = SweepReport::new("equiv");
    let algebra = RegularOpenAlgebra::new(poset)?;
    let i = algebra.canonical_morphism();
    let nz = i.target.clone();
    let full = algebra.full_poset();
    let j_p = dense_topology(poset)?;
    let j_nz = dense_topology(&nz)?;
    let j_sup = sup_topology(&algebra)?;
    let incl: Vec<usize> = (0..nz.len())
        .map(|k| full.elem_index(nz.elem_name(k)).expect("shared name"))
        .collect();
    let composite: Vec<usize> = (0..poset.len()).map(|q| incl[i.apply(q)]).collect();
    let legs = [
        ("poset to nonzero carrier", poset, &nz, i.map().to_vec(), &j_p, &j_nz),
        ("nonzero carrier to algebra", &nz, &full, incl.clone(), &j_nz, &j_sup),
        ("poset to algebra", poset, &full, composite, &j_p, &j_sup),
    ];
    for (label, src, tgt, map, js, jt) in legs {
        let r = equivalence_report(src, tgt, &map, js, jt, max_card)?;
        report.push(
            format!(
                "{} {label}: {} vs {} classes, {} hom pairs",
                poset.name(),
                r.source_classes,
                r.target_classes,
                r.hom_pairs_checked
            ),
            r.passed(),
            r.failures.first().cloned().unwrap_or_default(),
        );
    }
    Ok(report)
}

/// Retraction laws over a guarded pool of names of rank at most two over
/// the nonzero carrier: retract-after-section is the identity on the
/// functional ones, and the top condition forces every name equal to its
/// retraction.
pub fn retraction_sweep(arena: &NameArena, poset: &Poset) -> Result<SweepReport> {
    let mut report = SweepReport::new("retraction");
    let algebra = RegularOpenAlgebra::new(poset)?;
    let nz = algebra.nonzero_poset();
    // rank-2 names over the functional rank <= 1 pool; this covers all
    // functional names of rank <= 2 and well over 2^9 names in total
    let pool = enumerate_functional_names(arena, &nz, 1, 1 << 22)?;
    let names = enumerate_names_over(arena, &pool.names, &nz, 1 << 22)?;
    let mut retract_section_ok = 0usize;
    let mut retract_section_total = 0usize;
    let mut forced_ok = 0usize;
    for &x in &names {
        if arena.is_functional(x) {
            retract_section_total += 1;
            let s = crate::name::section(arena, x)?;
            if retract(arena, &algebra, s) == x {
                retract_section_ok += 1;
            }
        }
    }
    report.push(
        format!(
            "{} retract after section is the identity on {retract_section_total} functional names",
            poset.name()
        ),
        retract_section_ok == retract_section_total,
        String::new(),
    );
    let universe = universe_closure(arena, &names, nz.len());
    let ctx = SemanticsContext::new(arena, &nz, universe, NameTable::new())?;
    for &x in &names {
        let rx = retract(arena, &algebra, x);
        if ctx.forces_eq(nz.top(), x, rx) {
            forced_ok += 1;
        }
    }
    report.push(
        format!(
            "{} top forces name = retraction for {} names",
            poset.name(),
            names.len()
        ),
        forced_ok == names.len(),
        format!("{forced_ok} of {} held", names.len()),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Poset {
        Poset::new(
            "P3",
            vec!["1".into(), "a".into(), "b".into()],
            "1",
            &[("a".into(), "1".into()), ("b".into(), "1".into())],
        )
        .unwrap()
    }

    fn c2() -> Poset {
        Poset::new("C2", vec!["1".into(), "p".into()], "1", &[("p".into(), "1".into())]).unwrap()
    }

    #[test]
    fn default_corpus_matches_shared_fixture() {
        let arena = NameArena::new();
        let p = p3();
        let t = default_corpus(&arena, &p);
        let n0 = arena.empty();
        assert_eq!(t.get("n1"), Some(arena.mk(vec![(n0, 1)])));
        assert_eq!(t.get("n2"), Some(arena.mk(vec![(n0, 0)])));
        assert_eq!(t.get("n3"), Some(arena.mk(vec![(n0, 1), (n0, 2)])));
    }

    #[test]
    fn small_sweeps_pass() {
        let arena = NameArena::new();
        for p in [p3(), c2()] {
            let consts = default_corpus(&arena, &p);
            let b = bridge_sweep(&arena, &p, &consts, 1, 1).unwrap();
            assert!(b.all_pass(), "{}", b.render());
            let v = boolval_sweep(&arena, &p, &consts, 1, 1).unwrap();
            assert!(v.all_pass(), "{}", v.render());
            let t = truth_sweep(&arena, &p, &consts, 1, 1).unwrap();
            assert!(t.all_pass(), "{}", t.render());
            let f = filters_sweep(&arena, &p, 1).unwrap();
            assert!(f.all_pass(), "{}", f.render());
        }
    }

    #[test]
    fn render_is_stable() {
        let arena = NameArena::new();
        let p = p3();
        let r1 = filters_sweep(&arena, &p, 1).unwrap().render();
        let r2 = filters_sweep(&arena, &p, 1).unwrap().render();
        assert_eq!(r1, r2);
        assert!(r1.contains("SUMMARY filters:"));
    }
}
