//! Finite poset sites: sieves, Grothendieck topologies, presheaves, the
//! sheaf condition, topologies induced along monotone maps, and bounded
//! equivalence-of-sheaf-categories checking.
//!
//! A sieve on `p` is a down-closed subset of the cone below `p`. The two
//! topologies of interest are the dense topology, whose covers of `p` are
//! the sieves dense below `p`, and the sup topology on a complete algebra,
//! whose covers of `b` are the sieves joining to `b`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{bits, Poset};
use crate::ro::RegularOpenAlgebra;

/// Cap on cone size for sieve enumeration (`2^n` sieve candidates).
pub const SIEVE_CAP: usize = 16;

/// A down-closed family of conditions below a fixed element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sieve {
    pub at: usize,
    pub members: u128,
}

/// All sieves on `at`, in ascending bitmask order.
pub fn sieves_on(p: &Poset, at: usize) -> Result<Vec<u128>> {
    let cone = p.down_set(at);
    if cone.count_ones() as usize > SIEVE_CAP {
        return Err(Error::CapExceeded(format!(
            "sieve enumeration below {} needs 2^{} candidates",
            p.elem_name(at),
            cone.count_ones()
        )));
    }
    let mut out = Vec::new();
    // enumerate subsets of the cone mask
    let mut s = 0u128;
    loop {
        if is_sieve(p, s) {
            out.push(s);
        }
        if s == cone {
            break;
        }
        s = (s.wrapping_sub(cone)) & cone; // next subset
    }
    out.sort();
    Ok(out)
}

fn is_sieve(p: &Poset, members: u128) -> bool {
    bits(members).all(|q| p.down_set(q) & !members == 0)
}

/// Restrict a sieve on `at` to the cone below `q <= at`.
pub fn pullback_sieve(p: &Poset, s: &Sieve, q: usize) -> Result<Sieve> {
    if !p.leq(q, s.at) {
        return Err(Error::Semantic(format!(
            "{} is not below {}",
            p.elem_name(q),
            p.elem_name(s.at)
        )));
    }
    Ok(Sieve {
        at: q,
        members: s.members & p.down_set(q),
    })
}

/// Downward closure of a generator set below `at`.
pub fn generated_sieve(p: &Poset, at: usize, gens: u128) -> Result<Sieve> {
    if gens & !p.down_set(at) != 0 {
        let stray = bits(gens & !p.down_set(at)).next().unwrap();
        return Err(Error::Semantic(format!(
            "generator {} is not below {}",
            p.elem_name(stray),
            p.elem_name(at)
        )));
    }
    Ok(Sieve {
        at,
        members: bits(gens).fold(0, |m, g| m | p.down_set(g)),
    })
}

/// A Grothendieck topology on a finite poset: per element, the covering
/// sieves as sorted bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub base: Poset,
    covers: Vec<Vec<u128>>,
}

impl Topology {
    pub fn new(base: Poset, covers: Vec<Vec<u128>>) -> Self {
        let covers = covers
            .into_iter()
            .map(|mut v| {
                v.sort();
                v.dedup();
                v
            })
            .collect();
        Topology { base, covers }
    }

    pub fn covers(&self, at: usize) -> &[u128] {
        &self.covers[at]
    }

    pub fn is_cover(&self, at: usize, members: u128) -> bool {
        self.covers[at].binary_search(&members).is_ok()
    }
}

/// Covers are the sieves dense below their element.
pub fn dense_topology(p: &Poset) -> Result<Topology> {
    let mut covers = Vec::with_capacity(p.len());
    for at in 0..p.len() {
        covers.push(
            sieves_on(p, at)?
                .into_iter()
                .filter(|&s| p.is_dense_below(s, at))
                .collect(),
        );
    }
    Ok(Topology::new(p.clone(), covers))
}

/// Covers of `b` are the sieves whose join is `b`, on the full carrier
/// poset of the algebra; the empty sieve covers zero.
pub fn sup_topology(alg: &RegularOpenAlgebra) -> Result<Topology> {
    let base = alg.full_poset();
    let mut covers = Vec::with_capacity(base.len());
    for at in 0..base.len() {
        covers.push(
            sieves_on(&base, at)?
                .into_iter()
                .filter(|&s| alg.join_family(bits(s)) == at)
                .collect(),
        );
    }
    Ok(Topology::new(base, covers))
}

/// A basis: per element, a list of generator families (not necessarily
/// down-closed).
#[derive(Clone, Debug)]
pub struct Basis {
    pub families: Vec<Vec<u128>>,
}

/// Which basis axiom failed.
#[derive(Clone, Debug)]
pub struct BasisViolation {
    pub axiom: u8,
    pub detail: String,
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "basis axiom {} violated: {}", self.axiom, self.detail)
    }
}

/// Check the basis axioms in their poset form: every element has a family;
/// a family refines into one below any smaller element; and composites of
/// families belong to the basis.
pub fn check_basis(p: &Poset, basis: &Basis) -> std::result::Result<(), BasisViolation> {
    if basis.families.len() != p.len() {
        return Err(BasisViolation {
            axiom: 0,
            detail: "basis must assign families to every element".into(),
        });
    }
    for at in 0..p.len() {
        if basis.families[at].is_empty() {
            return Err(BasisViolation {
                axiom: 1,
                detail: format!("no family at {}", p.elem_name(at)),
            });
        }
        for &fam in &basis.families[at] {
            if fam & !p.down_set(at) != 0 {
                return Err(BasisViolation {
                    axiom: 1,
                    detail: format!(
                        "family {} at {} leaves the cone",
                        p.set_text(fam),
                        p.elem_name(at)
                    ),
                });
            }
        }
    }
    // stability in refinement form
    for at in 0..p.len() {
        for &fam in &basis.families[at] {
            for q in bits(p.down_set(at)) {
                let refines = basis.families[q].iter().any(|&fq| {
                    bits(fq).all(|r| bits(fam).any(|s| p.leq(r, s)))
                });
                if !refines {
                    return Err(BasisViolation {
                        axiom: 2,
                        detail: format!(
                            "family {} at {} has no refinement at {}",
                            p.set_text(fam),
                            p.elem_name(at),
                            p.elem_name(q)
                        ),
                    });
                }
            }
        }
    }
    // transitivity: all composite unions stay in the basis
    for at in 0..p.len() {
        for &fam in &basis.families[at] {
            let members: Vec<usize> = bits(fam).collect();
            let counts: Vec<usize> = members.iter().map(|&r| basis.families[r].len()).collect();
            let combos: usize = counts.iter().product();
            if combos > 1 << 20 {
                return Err(BasisViolation {
                    axiom: 3,
                    detail: "composite check exceeds the work cap".into(),
                });
            }
            for mut code in 0..combos {
                let mut union = 0u128;
                for (k, &r) in members.iter().enumerate() {
                    let pick = code % counts[k];
                    code /= counts[k];
                    union |= basis.families[r][pick];
                }
                if !basis.families[at].contains(&union) {
                    return Err(BasisViolation {
                        axiom: 3,
                        detail: format!(
                            "composite {} at {} is not a basis family",
                            p.set_text(union),
                            p.elem_name(at)
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// The topology generated by a basis: a sieve covers when it contains a
/// generated basis sieve. The basis axioms are checked first.
pub fn basis_to_topology(p: &Poset, basis: &Basis) -> Result<Topology> {
    if let Err(v) = check_basis(p, basis) {
        return Err(Error::Semantic(v.to_string()));
    }
    let mut covers = Vec::with_capacity(p.len());
    for at in 0..p.len() {
        let generated: Vec<u128> = basis.families[at]
            .iter()
            .map(|&fam| generated_sieve(p, at, fam).expect("family is inside the cone").members)
            .collect();
        covers.push(
            sieves_on(p, at)?
                .into_iter()
                .filter(|&s| generated.iter().any(|&g| g & !s == 0))
                .collect(),
        );
    }
    Ok(Topology::new(p.clone(), covers))
}

/// A failed topology axiom with its witnesses.
#[derive(Clone, Debug)]
pub struct TopologyViolation {
    /// 1 = maximal sieve, 2 = stability, 3 = transitivity.
    pub axiom: u8,
    pub detail: String,
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "topology axiom {} violated: {}", self.axiom, self.detail)
    }
}

/// Check maximality, stability, and transitivity at every element and
/// sieve; empty report means the axioms hold.
pub fn check_topology_axioms(j: &Topology) -> Result<Vec<TopologyViolation>> {
    let p = &j.base;
    let mut out = Vec::new();
    for at in 0..p.len() {
        if !j.is_cover(at, p.down_set(at)) {
            out.push(TopologyViolation {
                axiom: 1,
                detail: format!("maximal sieve missing at {}", p.elem_name(at)),
            });
        }
        for &s in j.covers(at) {
            for q in bits(p.down_set(at)) {
                if !j.is_cover(q, s & p.down_set(q)) {
                    out.push(TopologyViolation {
                        axiom: 2,
                        detail: format!(
                            "pullback of {} from {} to {} does not cover",
                            p.set_text(s),
                            p.elem_name(at),
                            p.elem_name(q)
                        ),
                    });
                }
            }
        }
        for &s in j.covers(at) {
            for r in sieves_on(p, at)? {
                let premise = bits(s).all(|q| j.is_cover(q, r & p.down_set(q)));
                if premise && !j.is_cover(at, r) {
                    out.push(TopologyViolation {
                        axiom: 3,
                        detail: format!(
                            "{} locally covers along {} at {} but is not a cover",
                            p.set_text(r),
                            p.set_text(s),
                            p.elem_name(at)
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// presheaves
// ---------------------------------------------------------------------------

/// A set-valued presheaf on a finite poset. Values at each element are
/// `0..card`; optional labels name them in file-facing output. Restriction
/// tables are stored for every strictly comparable pair, identities are
/// implicit, and composition is validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub card: Vec<usize>,
    pub labels: Option<Vec<Vec<String>>>,
    /// `restrict[(p, q)][x]` = the value of `x` restricted from `p` to `q <= p`.
    pub restrict: BTreeMap<(usize, usize), Vec<usize>>,
}

impl Presheaf {
    pub fn new(
        p: &Poset,
        card: Vec<usize>,
        labels: Option<Vec<Vec<String>>>,
        restrict: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let f = Presheaf {
            card,
            labels,
            restrict,
        };
        f.validate(p)?;
        Ok(f)
    }

    fn validate(&self, p: &Poset) -> Result<()> {
        if self.card.len() != p.len() {
            return Err(Error::Invalid("presheaf must assign a set to every element".into()));
        }
        for hi in 0..p.len() {
            for lo in bits(p.down_set(hi)) {
                if lo == hi {
                    continue;
                }
                let table = self.restrict.get(&(hi, lo)).ok_or_else(|| {
                    Error::Invalid(format!(
                        "missing restriction from {} to {}",
                        p.elem_name(hi),
                        p.elem_name(lo)
                    ))
                })?;
                if table.len() != self.card[hi] || table.iter().any(|&v| v >= self.card[lo]) {
                    return Err(Error::Invalid(format!(
                        "restriction from {} to {} has the wrong shape",
                        p.elem_name(hi),
                        p.elem_name(lo)
                    )));
                }
            }
        }
        // composition
        for hi in 0..p.len() {
            for mid in bits(p.down_set(hi)) {
                if mid == hi {
                    continue;
                }
                for lo in bits(p.down_set(mid)) {
                    if lo == mid || lo == hi {
                        continue;
                    }
                    for x in 0..self.card[hi] {
                        let direct = self.map(hi, lo, x);
                        let via = self.map(mid, lo, self.map(hi, mid, x));
                        if direct != via {
                            return Err(Error::Invalid(format!(
                                "restrictions do not compose: {} -> {} -> {}",
                                p.elem_name(hi),
                                p.elem_name(mid),
                                p.elem_name(lo)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction of value `x` from `hi` to `lo <= hi` (identity when equal).
    pub fn map(&self, hi: usize, lo: usize, x: usize) -> usize {
        if hi == lo {
            x
        } else {
            self.restrict[&(hi, lo)][x]
        }
    }

    pub fn label(&self, at: usize, x: usize) -> String {
        match &self.labels {
            Some(ls) => ls[at][x].clone(),
            None => format!("x{x}"),
        }
    }

    /// Parse the line-based presheaf format:
    ///
    /// ```text
    /// presheaf F
    /// values 1 u v
    /// values a x y
    /// values b z
    /// restrict 1 a u x v y
    /// restrict 1 b u z v z
    /// ```
    ///
    /// `restrict P Q ...` lists value pairs mapping members of `F(P)` to
    /// members of `F(Q)` for `Q <= P`.
    pub fn from_text(src: &str, p: &Poset) -> Result<Self> {
        let mut labels: Vec<Option<Vec<String>>> = vec![None; p.len()];
        let mut raw_restrict: Vec<(usize, usize, Vec<(String, String)>)> = Vec::new();
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
            let mut toks = line.split_whitespace();
            match toks.next().unwrap() {
                "presheaf" => {}
                "values" => {
                    let elem = toks.next().ok_or_else(|| err("missing element".into()))?;
                    let at = p.elem_index(elem).map_err(|e| err(e.to_string()))?;
                    labels[at] = Some(toks.map(str::to_string).collect());
                }
                "restrict" => {
                    let hi = toks.next().ok_or_else(|| err("missing source element".into()))?;
                    let lo = toks.next().ok_or_else(|| err("missing target element".into()))?;
                    let hi = p.elem_index(hi).map_err(|e| err(e.to_string()))?;
                    let lo = p.elem_index(lo).map_err(|e| err(e.to_string()))?;
                    if !p.leq(lo, hi) {
                        return Err(err("restriction must go downward".into()));
                    }
                    let rest: Vec<String> = toks.map(str::to_string).collect();
                    if rest.len() % 2 != 0 {
                        return Err(err("restriction needs value pairs".into()));
                    }
                    let pairs = rest
                        .chunks(2)
                        .map(|c| (c[0].clone(), c[1].clone()))
                        .collect();
                    raw_restrict.push((hi, lo, pairs));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let labels: Vec<Vec<String>> = labels
            .into_iter()
            .enumerate()
            .map(|(at, l)| {
                l.ok_or_else(|| {
                    Error::Invalid(format!("no values declared for {}", p.elem_name(at)))
                })
            })
            .collect::<Result<_>>()?;
        let card: Vec<usize> = labels.iter().map(Vec::len).collect();
        let find = |at: usize, label: &str| -> Result<usize> {
            labels[at]
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| {
                    Error::Invalid(format!("unknown value `{label}` at {}", p.elem_name(at)))
                })
        };
        let mut restrict = BTreeMap::new();
        for (hi, lo, pairs) in raw_restrict {
            let mut table = vec![usize::MAX; card[hi]];
            for (from, to) in pairs {
                table[find(hi, &from)?] = find(lo, &to)?;
            }
            if table.contains(&usize::MAX) {
                return Err(Error::Invalid(format!(
                    "restriction from {} to {} is not total",
                    p.elem_name(hi),
                    p.elem_name(lo)
                )));
            }
            restrict.insert((hi, lo), table);
        }
        Presheaf::new(p, card, Some(labels), restrict)
    }
}

/// The presheaf represented by an element: its characteristic down-set,
/// with singleton values on the cone and empty values outside.
pub fn representable(p: &Poset, c: usize) -> Presheaf {
    let card: Vec<usize> = (0..p.len())
        .map(|q| usize::from(p.leq(q, c)))
        .collect();
    let mut restrict = BTreeMap::new();
    for hi in 0..p.len() {
        for lo in bits(p.down_set(hi)) {
            if lo != hi {
                restrict.insert((hi, lo), vec![0; card[hi]]);
            }
        }
    }
    Presheaf {
        card,
        labels: None,
        restrict,
    }
}

/// A matching family without a unique amalgamation.
#[derive(Clone, Debug)]
pub struct SheafCounterexample {
    pub at: usize,
    pub sieve: u128,
    pub family: Vec<(usize, usize)>,
    pub amalgamations: usize,
}

impl SheafCounterexample {
    pub fn describe(&self, p: &Poset, f: &Presheaf) -> String {
        let fam: Vec<String> = self
            .family
            .iter()
            .map(|&(q, x)| format!("{} -> {}", p.elem_name(q), f.label(q, x)))
            .collect();
        format!(
            "cover {} of {}: matching family [{}] has {} amalgamations",
            p.set_text(self.sieve),
            p.elem_name(self.at),
            fam.join(", "),
            self.amalgamations
        )
    }
}

/// Every matching family for every covering sieve must have exactly one
/// amalgamation.
pub fn is_sheaf(
    p: &Poset,
    j: &Topology,
    f: &Presheaf,
) -> std::result::Result<(), SheafCounterexample> {
    for at in 0..p.len() {
        for &sieve in j.covers(at) {
            let members: Vec<usize> = bits(sieve).collect();
            if members.is_empty() {
                // the one empty matching family is amalgamated by every value
                if f.card[at] != 1 {
                    return Err(SheafCounterexample {
                        at,
                        sieve,
                        family: Vec::new(),
                        amalgamations: f.card[at],
                    });
                }
                continue;
            }
            if members.iter().any(|&q| f.card[q] == 0) {
                continue; // empty product: no matching families
            }
            let mut family = vec![0usize; members.len()];
            'families: loop {
                let matching = members.iter().enumerate().all(|(i, &q)| {
                    members
                        .iter()
                        .enumerate()
                        .all(|(i2, &r)| !p.leq(r, q) || f.map(q, r, family[i]) == family[i2])
                });
                if matching {
                    let amalg = (0..f.card[at])
                        .filter(|&y| {
                            members
                                .iter()
                                .enumerate()
                                .all(|(i, &q)| f.map(at, q, y) == family[i])
                        })
                        .count();
                    if amalg != 1 {
                        return Err(SheafCounterexample {
                            at,
                            sieve,
                            family: members.iter().copied().zip(family.iter().copied()).collect(),
                            amalgamations: amalg,
                        });
                    }
                }
                let mut idx = members.len() - 1;
                loop {
                    family[idx] += 1;
                    if family[idx] < f.card[members[idx]] {
                        break;
                    }
                    family[idx] = 0;
                    if idx == 0 {
                        break 'families;
                    }
                    idx -= 1;
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// induced topologies and pullbacks
// ---------------------------------------------------------------------------

/// Witnesses for the hypothesis of the induced-topology criterion: per
/// target element, the source family whose image generates a cover.
#[derive(Clone, Debug)]
pub struct InducedTopologyCertificate {
    pub witnesses: Vec<(usize, Vec<usize>)>,
}

fn check_monotone(src: &Poset, tgt: &Poset, map: &[usize]) -> Result<()> {
    if map.len() != src.len() || map.iter().any(|&t| t >= tgt.len()) {
        return Err(Error::Invalid("map must be total with values in the target".into()));
    }
    for a in 0..src.len() {
        for b in 0..src.len() {
            if src.leq(a, b) && !tgt.leq(map[a], map[b]) {
                return Err(Error::Invalid(format!(
                    "map is not monotone at {} <= {}",
                    src.elem_name(a),
                    src.elem_name(b)
                )));
            }
        }
    }
    Ok(())
}

/// The topology induced along a monotone map: a sieve covers in the source
/// exactly when its image generates a cover in the target. The hypothesis
/// that image families refine into covering image sieves is verified per
/// target element, and its witnesses are returned.
pub fn induced_topology(
    src: &Poset,
    tgt: &Poset,
    map: &[usize],
    j: &Topology,
) -> Result<(Topology, InducedTopologyCertificate)> {
    check_monotone(src, tgt, map)?;
    let mut witnesses = Vec::new();
    for d in 0..tgt.len() {
        // the largest candidate family dominates every smaller one
        let above: Vec<usize> = (0..src.len()).filter(|&c| tgt.leq(d, map[c])).collect();
        let family: Vec<usize> = (0..src.len())
            .filter(|&e| tgt.leq(map[e], d) && above.iter().all(|&c| src.leq(e, c)))
            .collect();
        let gens = family.iter().fold(0u128, |m, &e| m | 1 << map[e]);
        let generated = generated_sieve(tgt, d, gens)?;
        if !j.is_cover(d, generated.members) {
            return Err(Error::Semantic(format!(
                "induced-topology hypothesis fails at target element {}",
                tgt.elem_name(d)
            )));
        }
        witnesses.push((d, family));
    }
    let mut covers = Vec::with_capacity(src.len());
    for c in 0..src.len() {
        let mut at_c = Vec::new();
        for s in sieves_on(src, c)? {
            let gens = bits(s).fold(0u128, |m, e| m | 1 << map[e]);
            let generated = generated_sieve(tgt, map[c], gens)?;
            if j.is_cover(map[c], generated.members) {
                at_c.push(s);
            }
        }
        covers.push(at_c);
    }
    Ok((
        Topology::new(src.clone(), covers),
        InducedTopologyCertificate { witnesses },
    ))
}

/// Compose a presheaf on the target with the map: values come from the
/// image, restrictions are inherited.
pub fn pullback_presheaf(src: &Poset, tgt: &Poset, map: &[usize], h: &Presheaf) -> Result<Presheaf> {
    check_monotone(src, tgt, map)?;
    let card: Vec<usize> = (0..src.len()).map(|c| h.card[map[c]]).collect();
    let mut restrict = BTreeMap::new();
    for hi in 0..src.len() {
        for lo in bits(src.down_set(hi)) {
            if lo == hi {
                continue;
            }
            let table: Vec<usize> = (0..card[hi]).map(|x| h.map(map[hi], map[lo], x)).collect();
            restrict.insert((hi, lo), table);
        }
    }
    Presheaf::new(src, card, None, restrict)
}

// ---------------------------------------------------------------------------
// enumeration up to isomorphism and the equivalence report
// ---------------------------------------------------------------------------

/// All natural transformations between two presheaves, as per-element
/// function tables.
pub fn natural_transformations(p: &Poset, f: &Presheaf, g: &Presheaf) -> Vec<Vec<Vec<usize>>> {
    // enumerate component choices elementwise with early naturality pruning
    let mut out = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    fn assign(
        p: &Poset,
        f: &Presheaf,
        g: &Presheaf,
        at: usize,
        components: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if at == p.len() {
            out.push(components.clone());
            return;
        }
        let mut table = vec![0usize; f.card[at]];
        'tables: loop {
            if g.card[at] > 0 || f.card[at] == 0 {
                // check naturality against already-assigned elements
                let ok = (0..at).all(|other| {
                    let (hi, lo) = if p.leq(other, at) {
                        (at, other)
                    } else if p.leq(at, other) {
                        (other, at)
                    } else {
                        return true;
                    };
                    let alpha_hi: &[usize] = if hi == at { &table } else { &components[hi] };
                    let alpha_lo: &[usize] = if lo == at { &table } else { &components[lo] };
                    (0..f.card[hi]).all(|x| g.map(hi, lo, alpha_hi[x]) == alpha_lo[f.map(hi, lo, x)])
                });
                if ok {
                    components.push(table.clone());
                    assign(p, f, g, at + 1, components, out);
                    components.pop();
                }
            } else {
                // no functions into an empty set from a nonempty one
                return;
            }
            // next table
            if f.card[at] == 0 {
                break 'tables;
            }
            let mut idx = f.card[at] - 1;
            loop {
                table[idx] += 1;
                if table[idx] < g.card[at] {
                    break;
                }
                table[idx] = 0;
                if idx == 0 {
                    break 'tables;
                }
                idx -= 1;
            }
        }
    }
    assign(p, f, g, 0, &mut components, &mut out);
    out
}

/// Isomorphism of presheaves: a natural transformation with bijective
/// components.
pub fn presheaves_isomorphic(p: &Poset, f: &Presheaf, g: &Presheaf) -> bool {
    if f.card != g.card {
        return false;
    }
    natural_transformations(p, f, g).iter().any(|nat| {
        nat.iter().enumerate().all(|(at, table)| {
            let mut seen = vec![false; g.card[at]];
            table.iter().all(|&v| {
                if seen[v] {
                    false
                } else {
                    seen[v] = true;
                    true
                }
            })
        })
    })
}

/// All sheaves with value sets of size at most `max_card`, one
/// representative per isomorphism class, in generation order.
pub fn enumerate_sheaves(p: &Poset, j: &Topology, max_card: usize) -> Result<Vec<Presheaf>> {
    if p.len() > 4 || max_card > 2 {
        return Err(Error::CapExceeded(
            "sheaf enumeration needs at most 4 elements and value sets of size at most 2".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..p.len())
        .flat_map(|hi| bits(p.down_set(hi)).map(move |lo| (hi, lo)))
        .filter(|&(hi, lo)| hi != lo)
        .collect();
    let mut classes: Vec<Presheaf> = Vec::new();
    let mut cards = vec![0usize; p.len()];
    loop {
        // iterate all restriction-table assignments for this card vector
        let table_counts: Vec<usize> = pairs
            .iter()
            .map(|&(hi, lo)| cards[lo].pow(cards[hi] as u32))
            .collect();
        let total: usize = table_counts.iter().product();
        for mut code in 0..total {
            let mut restrict = BTreeMap::new();
            for (k, &(hi, lo)) in pairs.iter().enumerate() {
                let mut pick = code % table_counts[k];
                code /= table_counts[k];
                let mut table = Vec::with_capacity(cards[hi]);
                for _ in 0..cards[hi] {
                    table.push(pick % cards[lo].max(1));
                    pick /= cards[lo].max(1);
                }
                restrict.insert((hi, lo), table);
            }
            let candidate = Presheaf {
                card: cards.clone(),
                labels: None,
                restrict,
            };
            if candidate.validate(p).is_err() {
                continue;
            }
            if is_sheaf(p, j, &candidate).is_err() {
                continue;
            }
            if !classes.iter().any(|c| presheaves_isomorphic(p, c, &candidate)) {
                classes.push(candidate);
            }
        }
        // next card vector
        let mut idx = 0;
        loop {
            if idx == p.len() {
                return Ok(classes);
            }
            cards[idx] += 1;
            if cards[idx] <= max_card {
                break;
            }
            cards[idx] = 0;
            idx += 1;
        }
    }
}

/// Result of the bounded equivalence check between sheaf categories.
#[derive(Clone, Debug, Default)]
pub struct EquivalenceReport {
    pub source_classes: usize,
    pub target_classes: usize,
    pub hom_pairs_checked: usize,
    pub failures: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verify, within a value-cardinality bound, that composing with the map
/// is an equivalence of sheaf categories: pullbacks of sheaves are
/// sheaves, natural transformations correspond bijectively, and every
/// source sheaf class is hit.
pub fn equivalence_report(
    src: &Poset,
    tgt: &Poset,
    map: &[usize],
    j_src: &Topology,
    j_tgt: &Topology,
    max_card: usize,
) -> Result<EquivalenceReport> {
    check_monotone(src, tgt, map)?;
    let mut report = EquivalenceReport::default();
    let src_sheaves = enumerate_sheaves(src, j_src, max_card)?;
    let tgt_sheaves = enumerate_sheaves(tgt, j_tgt, max_card)?;
    report.source_classes = src_sheaves.len();
    report.target_classes = tgt_sheaves.len();
    if src_sheaves.len() != tgt_sheaves.len() {
        report.failures.push(format!(
            "class counts differ: {} on the source, {} on the target",
            src_sheaves.len(),
            tgt_sheaves.len()
        ));
    }
    // pullbacks are sheaves
    let mut pulled = Vec::new();
    for (k, h) in tgt_sheaves.iter().enumerate() {
        let f = pullback_presheaf(src, tgt, map, h)?;
        if let Err(ce) = is_sheaf(src, j_src, &f) {
            report.failures.push(format!(
                "pullback of target sheaf {k} is not a sheaf: {}",
                ce.describe(src, &f)
            ));
        }
        pulled.push(f);
    }
    // essential surjectivity within the bound
    for (k, f) in src_sheaves.iter().enumerate() {
        if !pulled.iter().any(|g| presheaves_isomorphic(src, g, f)) {
            report.failures.push(format!(
                "source sheaf class {k} is not the pullback of any bounded target sheaf"
            ));
        }
    }
    // full faithfulness on bounded hom-sets
    for (k1, h1) in tgt_sheaves.iter().enumerate() {
        for (k2, h2) in tgt_sheaves.iter().enumerate() {
            report.hom_pairs_checked += 1;
            let upstairs = natural_transformations(tgt, h1, h2);
            let downstairs = natural_transformations(src, &pulled[k1], &pulled[k2]);
            let mut images: Vec<Vec<Vec<usize>>> = Vec::new();
            for nat in &upstairs {
                let image: Vec<Vec<usize>> = (0..src.len()).map(|c| nat[map[c]].clone()).collect();
                if !downstairs.contains(&image) {
                    report.failures.push(format!(
                        "pulled transformation between target sheaves {k1},{k2} is not natural"
                    ));
                }
                if images.contains(&image) {
                    report.failures.push(format!(
                        "pullback is not injective on transformations between {k1},{k2}"
                    ));
                }
                images.push(image);
            }
            if upstairs.len() != downstairs.len() {
                report.failures.push(format!(
                    "hom-set sizes differ between {k1},{k2}: {} upstairs, {} downstairs",
                    upstairs.len(),
                    downstairs.len()
                ));
            }
        }
    }
    Ok(report)
}
