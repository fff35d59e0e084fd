//! Command-line front end: file loading, subcommand dispatch, and the
//! corpus cross-check suites.
//!
//! Exit codes: 0 for success or a true predicate, 1 for a false predicate
//! or a failed check, 2 for parse or usage errors, 3 for semantic errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::extension::{extension, truth_lemma_report};
use crate::formula::Formula;
use crate::name::{
    enumerate_functional_names, enumerate_names, retract, universe_closure, Name, NameArena,
    NameTable,
};
use crate::poset::{Filter, Poset};
use crate::ro::{ba_laws_report, RegularOpenAlgebra};
use crate::semantics::SemanticsContext;
use crate::sheaf::{dense_topology, induced_topology, is_sheaf, sup_topology, Presheaf, Topology};
use crate::sweeps;

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::Io { .. }
        | Error::Invalid(_)
        | Error::UnknownIdentifier(_)
        | Error::UnknownElement(_) => 2,
        Error::CapExceeded(_) | Error::NotFunctional(_) | Error::Semantic(_) => 3,
    }
}

#[derive(Parser)]
#[command(name = "forcette", version, about = "A finite-scale workbench for forcing, Boolean-valued semantics, and sheaf semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TopologyKind {
    Dense,
    Sup,
}

#[derive(Subcommand)]
enum Command {
    /// Print the regular-open completion: carrier, tables, and the
    /// canonical dense morphism.
    Complete { poset: PathBuf },
    /// Decide whether a condition forces a formula.
    Force {
        poset: PathBuf,
        names: PathBuf,
        formula: String,
        /// Condition to force at.
        #[arg(long)]
        at: String,
        /// Rank bound of the quantifier universe.
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Boolean value of a formula over the completion, with declared names
    /// carried across by transport and retraction.
    Boolval {
        poset: PathBuf,
        names: PathBuf,
        formula: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Supremum of the conditions forcing a formula over the completion.
    Supval {
        poset: PathBuf,
        names: PathBuf,
        formula: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Evaluate both sides of the bridge at one condition.
    Bridge {
        poset: PathBuf,
        names: PathBuf,
        formula: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// List the generic filters.
    Generic { poset: PathBuf },
    /// Print the extension determined by a filter: evaluations of every
    /// name of the bounded universe.
    Extend {
        poset: PathBuf,
        names: PathBuf,
        /// Filter members, comma separated.
        #[arg(long)]
        filter: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Check both directions of the truth lemma for a formula.
    TruthCheck {
        poset: PathBuf,
        names: PathBuf,
        formula: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// Print the covers of the dense topology on the poset, or of the sup
    /// topology on its regular-open completion.
    Topology {
        poset: PathBuf,
        #[arg(long, value_enum)]
        kind: TopologyKind,
    },
    /// Check the sheaf condition for a presheaf file over the chosen site.
    SheafCheck {
        poset: PathBuf,
        presheaf: PathBuf,
        #[arg(long, value_enum)]
        kind: TopologyKind,
    },
    /// Print the topology induced along the canonical morphism and compare
    /// it with the dense topology.
    Induced {
        poset: PathBuf,
        /// Completion to induce from; `ro` is the only supported target.
        #[arg(long, default_value = "ro")]
        target: String,
    },
    /// Bounded equivalence of sheaf categories over the poset and its
    /// completion.
    Equiv {
        poset: PathBuf,
        #[arg(long, default_value_t = 2)]
        maxcard: usize,
    },
    /// Run a batch verification suite.
    Crosscheck {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        poset: PathBuf,
        /// Optional declared names; the default corpus is used otherwise.
        #[arg(long)]
        names: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        maxcard: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loaded inputs for one invocation.
struct Workspace {
    arena: NameArena,
    poset: Poset,
    names: NameTable,
}

impl Workspace {
    fn load(poset_path: &Path, names_path: Option<&Path>) -> Result<Self> {
        let arena = NameArena::new();
        let poset = Poset::from_text(&read(poset_path)?)?;
        let names = match names_path {
            Some(p) => NameTable::from_text(&read(p)?, &arena, &poset)?,
            None => NameTable::new(),
        };
        Ok(Workspace {
            arena,
            poset,
            names,
        })
    }

    fn parse_formula(&self, src: &str) -> Result<Formula> {
        let table = self.names.clone();
        crate::formula::parse(src, &move |id| table.contains(id))
    }

    /// Star-side context: bounded universe closed over the declared names.
    fn star_ctx(&self, rank: u32) -> Result<SemanticsContext<'_>> {
        let u = enumerate_names(&self.arena, &self.poset, rank, 1 << 22)?;
        let seeds: Vec<Name> = u.names.iter().copied().chain(self.names.names()).collect();
        let u = universe_closure(&self.arena, &seeds, self.poset.len());
        SemanticsContext::new(&self.arena, &self.poset, u, self.names.clone())
    }

    /// Algebra-side context: declared names transported and retracted,
    /// functional universe of the given rank.
    fn algebra_ctx(&self, rank: u32) -> Result<(SemanticsContext<'_>, RegularOpenAlgebra)> {
        let algebra = RegularOpenAlgebra::new(&self.poset)?;
        let i = algebra.canonical_morphism();
        let nz = i.target.clone();
        let mut lifted = NameTable::new();
        for ident in self.names.idents() {
            let x = self.names.get(ident).expect("ident from table");
            lifted.insert(ident, retract(&self.arena, &algebra, self.arena.transport(&i, x)))?;
        }
        let u = enumerate_functional_names(&self.arena, &nz, rank, 1 << 22)?;
        let seeds: Vec<Name> = u.names.iter().copied().chain(lifted.names()).collect();
        let u = universe_closure(&self.arena, &seeds, nz.len());
        let ctx = SemanticsContext::with_algebra(&self.arena, &algebra, u, lifted)?;
        Ok((ctx, algebra))
    }
}

fn print_topology(out: &mut String, j: &Topology) {
    let p = &j.base;
    for at in 0..p.len() {
        let covers: Vec<String> = j.covers(at).iter().map(|&s| p.set_text(s)).collect();
        let _ = writeln!(out, "covers {}: {}", p.elem_name(at), covers.join(" "));
    }
}

fn dispatch(cli: Cli, out: &mut String) -> Result<i32> {
    match cli.command {
        Command::Complete { poset } => {
            let ws = Workspace::load(&poset, None)?;
            let alg = RegularOpenAlgebra::new(&ws.poset)?;
            let carrier: Vec<String> = (0..alg.len()).map(|i| alg.element_text(i)).collect();
            let _ = writeln!(out, "algebra RO({})", ws.poset.name());
            let _ = writeln!(out, "carrier: {}", carrier.join(" "));
            let _ = writeln!(out, "zero: {}", alg.element_text(alg.zero()));
            let _ = writeln!(out, "one: {}", alg.element_text(alg.one()));
            for a in 0..alg.len() {
                for b in 0..alg.len() {
                    let _ = writeln!(
                        out,
                        "meet {} {} = {}",
                        alg.element_text(a),
                        alg.element_text(b),
                        alg.element_text(alg.meet(a, b))
                    );
                    let _ = writeln!(
                        out,
                        "join {} {} = {}",
                        alg.element_text(a),
                        alg.element_text(b),
                        alg.element_text(alg.join(a, b))
                    );
                }
            }
            for a in 0..alg.len() {
                let _ = writeln!(
                    out,
                    "compl {} = {}",
                    alg.element_text(a),
                    alg.element_text(alg.compl(a))
                );
            }
            let report = ba_laws_report(&alg);
            let _ = writeln!(out, "laws: {}", if report.is_empty() { "pass" } else { "FAIL" });
            let i = alg.canonical_morphism();
            for p in 0..ws.poset.len() {
                let _ = writeln!(
                    out,
                    "i {} = {}",
                    ws.poset.elem_name(p),
                    i.target.elem_name(i.apply(p))
                );
            }
            let _ = writeln!(
                out,
                "dense morphism: {}",
                if i.is_dense_morphism() { "pass" } else { "FAIL" }
            );
            Ok(0)
        }
        Command::Force {
            poset,
            names,
            formula,
            at,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let f = ws.parse_formula(&formula)?;
            let ctx = ws.star_ctx(rank)?;
            let p = ws.poset.elem_index(&at)?;
            let verdict = ctx.forces_star(p, &f)?;
            let _ = writeln!(out, "{verdict}");
            Ok(i32::from(!verdict))
        }
        Command::Boolval {
            poset,
            names,
            formula,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let f = ws.parse_formula(&formula)?;
            let (ctx, alg) = ws.algebra_ctx(rank)?;
            let v = ctx.boolean_value(&f)?;
            let _ = writeln!(out, "{}", alg.element_text(v));
            Ok(0)
        }
        Command::Supval {
            poset,
            names,
            formula,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let f = ws.parse_formula(&formula)?;
            let (ctx, alg) = ws.algebra_ctx(rank)?;
            let v = ctx.sup_forcing(&f)?;
            let _ = writeln!(out, "{}", alg.element_text(v));
            Ok(0)
        }
        Command::Bridge {
            poset,
            names,
            formula,
            at,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let f = ws.parse_formula(&formula)?;
            let harness = crate::semantics::BridgeHarness::new(
                &ws.arena,
                &ws.poset,
                &ws.names,
                rank,
                1 << 22,
            )?;
            let p = ws.poset.elem_index(&at)?;
            let outcome = harness.check(p, &f)?;
            let _ = writeln!(out, "poset-side {}", outcome.poset_side);
            let _ = writeln!(out, "algebra-side {}", outcome.algebra_side);
            let _ = writeln!(out, "{}", if outcome.agree() { "PASS" } else { "FAIL" });
            Ok(i32::from(!outcome.agree()))
        }
        Command::Generic { poset } => {
            let ws = Workspace::load(&poset, None)?;
            for g in ws.poset.generic_filters()? {
                let _ = writeln!(out, "{}", ws.poset.set_text(g.members()));
            }
            Ok(0)
        }
        Command::Extend {
            poset,
            names,
            filter,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let mask = ws.poset.parse_set(&filter)?;
            let g = Filter::new(&ws.poset, mask)?;
            let u = enumerate_names(&ws.arena, &ws.poset, rank, 1 << 22)?;
            let seeds: Vec<Name> = u.names.iter().copied().chain(ws.names.names()).collect();
            let u = universe_closure(&ws.arena, &seeds, ws.poset.len());
            let e = extension(&ws.arena, &ws.poset, &g, &u);
            for s in &e.sets {
                let _ = writeln!(out, "{s}");
            }
            Ok(0)
        }
        Command::TruthCheck {
            poset,
            names,
            formula,
            rank,
        } => {
            let ws = Workspace::load(&poset, Some(&names))?;
            let f = ws.parse_formula(&formula)?;
            let ctx = ws.star_ctx(rank)?;
            let report = truth_lemma_report(&ctx, &f)?;
            if report.is_empty() {
                let _ = writeln!(out, "PASS ({} filters)", report.filters_checked);
                Ok(0)
            } else {
                for c in &report.counterexamples {
                    let _ = writeln!(out, "FAIL {}", c.detail);
                }
                Ok(1)
            }
        }
        Command::Topology { poset, kind } => {
            let ws = Workspace::load(&poset, None)?;
            let j = match kind {
                TopologyKind::Dense => dense_topology(&ws.poset)?,
                TopologyKind::Sup => sup_topology(&RegularOpenAlgebra::new(&ws.poset)?)?,
            };
            print_topology(out, &j);
            Ok(0)
        }
        Command::SheafCheck {
            poset,
            presheaf,
            kind,
        } => {
            let ws = Workspace::load(&poset, None)?;
            let (site, j) = match kind {
                TopologyKind::Dense => (ws.poset.clone(), dense_topology(&ws.poset)?),
                TopologyKind::Sup => {
                    let alg = RegularOpenAlgebra::new(&ws.poset)?;
                    (alg.full_poset(), sup_topology(&alg)?)
                }
            };
            let f = Presheaf::from_text(&read(&presheaf)?, &site)?;
            match is_sheaf(&site, &j, &f) {
                Ok(()) => {
                    let _ = writeln!(out, "SHEAF");
                    Ok(0)
                }
                Err(ce) => {
                    let _ = writeln!(out, "NOT A SHEAF: {}", ce.describe(&site, &f));
                    Ok(1)
                }
            }
        }
        Command::Induced { poset, target } => {
            if target != "ro" {
                return Err(Error::Invalid(format!("unsupported target `{target}`")));
            }
            let ws = Workspace::load(&poset, None)?;
            let alg = RegularOpenAlgebra::new(&ws.poset)?;
            let i = alg.canonical_morphism();
            let nz = i.target.clone();
            let (induced, _) = induced_topology(&ws.poset, &nz, i.map(), &dense_topology(&nz)?)?;
            print_topology(out, &induced);
            let agrees = induced == dense_topology(&ws.poset)?;
            let _ = writeln!(out, "{}", if agrees { "PASS" } else { "FAIL" });
            Ok(i32::from(!agrees))
        }
        Command::Equiv { poset, maxcard } => {
            let ws = Workspace::load(&poset, None)?;
            let report = sweeps::equiv_sweep(&ws.poset, maxcard)?;
            out.push_str(&report.render());
            Ok(i32::from(!report.all_pass()))
        }
        Command::Crosscheck {
            suite,
            poset,
            names,
            rank,
            depth,
            maxcard,
        } => {
            let ws = Workspace::load(&poset, names.as_deref())?;
            let consts = if ws.names.idents().is_empty() && names.is_none() {
                sweeps::default_corpus(&ws.arena, &ws.poset)
            } else {
                ws.names.clone()
            };
            let report = match suite.as_str() {
                "bridge" => sweeps::bridge_sweep(&ws.arena, &ws.poset, &consts, rank, depth)?,
                "boolval" => sweeps::boolval_sweep(&ws.arena, &ws.poset, &consts, rank, depth)?,
                "truth" => sweeps::truth_sweep(&ws.arena, &ws.poset, &consts, rank, depth)?,
                "filters" => sweeps::filters_sweep(&ws.arena, &ws.poset, rank)?,
                "topology" => sweeps::topology_sweep(&ws.poset)?,
                "equiv" => sweeps::equiv_sweep(&ws.poset, maxcard)?,
                "retraction" => sweeps::retraction_sweep(&ws.arena, &ws.poset)?,
                other => return Err(Error::Invalid(format!("unknown suite `{other}`"))),
            };
            out.push_str(&report.render());
            Ok(i32::from(!report.all_pass()))
        }
    }
}

/// Run the command line and return the exit code, writing the report to
/// standard output and errors to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with code 0, usage errors
            // on stderr with code 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = String::new();
    match dispatch(cli, &mut out) {
        Ok(code) => {
            print!("{out}");
            code
        }
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
