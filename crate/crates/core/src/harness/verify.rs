//! Claim catalog and population sweeps.
//!
//! A [`Claim`] pairs a population kind with a check that returns a
//! description of the violation, if any. [`verify`] runs a claim over a
//! population on a worker pool; every counterexample is stored in its file
//! format so [`replay`] can re-run the check on it.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::axioms::{check_axiom, AxiomId};
use crate::choice::ChoiceTable;
use crate::majority::{
    finest_check, rule_table, FinestMode, FinestProp, MarginMatrix, Profile, RuleId, TieBreakOrder,
};
use crate::populations::{
    complete_relation_at, complete_relation_count, random_complete_relation, random_margins,
    random_odd_margins, random_profile, sample_rng, TableSpace,
};
use crate::rationalization::{
    finest_family_probe, gamma_core, gamma_hull, hull_by_intersection, hull_oracle,
    local_rat_class, standard_rat_class, validate_family, CoreVariant, PathReading, RatClass,
};
use crate::relation::RelationClass;
use crate::universe::{SharedUniverse, Universe};

use super::format::{
    parse_choice_table, parse_margins, parse_profile, serialize_choice_table, serialize_margins,
    serialize_profile, FormatError,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("claim `{claim}` does not support n = {n} in {mode} mode")]
    OutOfRange {
        claim: &'static str,
        n: usize,
        mode: Mode,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("counterexample does not parse: {0}")]
    Replay(#[from] FormatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sample,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sample => "sample",
        })
    }
}

/// What a claim quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PopulationKind {
    /// Choice tables; exhaustive for `n ≤ 3`, sampled uniformly for `n ≤ 10`.
    Tables,
    /// Complete base relations, given as unit margins; exhaustive or
    /// sampled for `n ≤ 4`.
    Bases,
    /// Margin matrices, sampled for `2 ≤ n ≤ 8`. Even samples come from
    /// odd-voter profiles (no ties), odd samples are direct skew-symmetric
    /// draws with ties.
    Margins,
    /// Linear-order profiles with 1 to 9 voters, sampled for `n ≤ 5`.
    Profiles,
}

impl PopulationKind {
    fn max_n(self, mode: Mode) -> Option<usize> {
        match (self, mode) {
            (PopulationKind::Tables, Mode::Exhaustive) => Some(3),
            (PopulationKind::Tables, Mode::Sample) => Some(10),
            (PopulationKind::Bases, _) => Some(4),
            (PopulationKind::Margins, Mode::Sample) => Some(8),
            (PopulationKind::Profiles, Mode::Sample) => Some(5),
            _ => None,
        }
    }

    fn min_n(self) -> usize {
        match self {
            PopulationKind::Margins => 2,
            _ => 1,
        }
    }
}

/// One member of a population.
#[derive(Debug, Clone)]
pub enum Input {
    Table(ChoiceTable),
    Margins(MarginMatrix),
    Profile(Profile),
}

impl Input {
    /// File-format text for the input (`.ct`, `.mg` or `.prof`).
    pub fn serialize(&self) -> String {
        match self {
            Input::Table(t) => serialize_choice_table(t),
            Input::Margins(m) => serialize_margins(m),
            Input::Profile(p) => serialize_profile(p),
        }
    }

    fn parse(kind: PopulationKind, text: &str) -> Result<Input, FormatError> {
        Ok(match kind {
            PopulationKind::Tables => Input::Table(parse_choice_table(text)?),
            PopulationKind::Bases | PopulationKind::Margins => Input::Margins(parse_margins(text)?),
            PopulationKind::Profiles => Input::Profile(parse_profile(text)?),
        })
    }
}

/// Returns a description of the violation, or `None` if the claim holds on
/// the input.
pub type Check = fn(&Input) -> Option<String>;

#[derive(Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub summary: &'static str,
    pub population: PopulationKind,
    pub check: Check,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Claim")
            .field("id", &self.id)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Position in the population.
    pub index: u64,
    /// The input in its file format.
    pub input: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub claim: &'static str,
    pub population: String,
    pub checked: u64,
    /// Sorted by population index.
    pub violations: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Deterministic summary; the elapsed time is left out.
impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim: {}", self.claim)?;
        writeln!(f, "population: {}", self.population)?;
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "--- counterexample #{}: {}", v.index, v.detail)?;
            f.write_str(&v.input)?;
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Population parameters for [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub n: usize,
    pub mode: Mode,
    /// Sample count; ignored in exhaustive mode.
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the default pool size.
    pub workers: usize,
}

impl Sweep {
    pub fn exhaustive(n: usize) -> Self {
        Sweep {
            n,
            mode: Mode::Exhaustive,
            samples: 0,
            seed: 0,
            workers: 0,
        }
    }

    pub fn sample(n: usize, samples: u64, seed: u64) -> Self {
        Sweep {
            n,
            mode: Mode::Sample,
            samples,
            seed,
            workers: 0,
        }
    }
}

pub fn find_claim(id: &str) -> Result<&'static Claim, VerifyError> {
    CLAIMS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| VerifyError::UnknownClaim(id.to_string()))
}

/// Runs a catalog claim.
pub fn verify_claim(id: &str, sweep: Sweep) -> Result<VerifyReport, VerifyError> {
    verify(find_claim(id)?, sweep)
}

/// Runs any claim, catalog or not.
pub fn verify(claim: &Claim, sweep: Sweep) -> Result<VerifyReport, VerifyError> {
    let kind = claim.population;
    let n = sweep.n;
    let in_range = kind
        .max_n(sweep.mode)
        .is_some_and(|max| (kind.min_n()..=max).contains(&n));
    if !in_range {
        return Err(VerifyError::OutOfRange {
            claim: claim.id,
            n,
            mode: sweep.mode,
        });
    }
    let start = Instant::now();
    let universe: SharedUniverse = Arc::new(Universe::alphabetic(n).expect("n in range"));
    let source = Source::new(kind, universe, sweep);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    let violations: Vec<Counterexample> = pool.install(|| {
        (0..source.count)
            .into_par_iter()
            .filter_map(|i| {
                let input = source.get(i);
                (claim.check)(&input).map(|detail| Counterexample {
                    index: i,
                    input: input.serialize(),
                    detail,
                })
            })
            .collect()
    });
    Ok(VerifyReport {
        claim: claim.id,
        population: source.describe(),
        checked: source.count,
        violations,
        elapsed: start.elapsed(),
    })
}

/// Re-runs `claim` on a recorded counterexample; `true` if it still fails.
pub fn replay(claim: &Claim, cx: &Counterexample) -> Result<bool, VerifyError> {
    let input = Input::parse(claim.population, &cx.input)?;
    Ok((claim.check)(&input).is_some())
}

struct Source {
    kind: PopulationKind,
    universe: SharedUniverse,
    sweep: Sweep,
    tables: Option<TableSpace>,
    count: u64,
}

impl Source {
    fn new(kind: PopulationKind, universe: SharedUniverse, sweep: Sweep) -> Self {
        let n = universe.len();
        let tables = (kind == PopulationKind::Tables).then(|| TableSpace::all(universe.clone()));
        let count = match (kind, sweep.mode) {
            (PopulationKind::Tables, Mode::Exhaustive) => {
                tables.as_ref().map_or(0, |t| t.len() as u64)
            }
            (PopulationKind::Bases, Mode::Exhaustive) => complete_relation_count(n),
            _ => sweep.samples,
        };
        Source {
            kind,
            universe,
            sweep,
            tables,
            count,
        }
    }

    fn describe(&self) -> String {
        let n = self.universe.len();
        let what = match self.kind {
            PopulationKind::Tables => "choice tables",
            PopulationKind::Bases => "complete base relations",
            PopulationKind::Margins => "margin matrices",
            PopulationKind::Profiles => "profiles",
        };
        match self.sweep.mode {
            Mode::Exhaustive => format!("all {} {what} on n={n}", self.count),
            Mode::Sample => format!(
                "{} sampled {what} on n={n}, seed {}",
                self.count, self.sweep.seed
            ),
        }
    }

    fn get(&self, i: u64) -> Input {
        let u = self.universe.clone();
        let n = u.len();
        let exhaustive = self.sweep.mode == Mode::Exhaustive;
        let mut rng = sample_rng(self.sweep.seed, i);
        match self.kind {
            PopulationKind::Tables => {
                let space = self.tables.as_ref().expect("table population");
                Input::Table(if exhaustive {
                    space.get(u128::from(i))
                } else {
                    space.sample(&mut rng)
                })
            }
            PopulationKind::Bases => {
                let base = if exhaustive {
                    complete_relation_at(n, i)
                } else {
                    random_complete_relation(n, &mut rng)
                };
                Input::Margins(MarginMatrix::from_base(u, &base).expect("complete base"))
            }
            PopulationKind::Margins => Input::Margins(
                if i % 2 == 0 {
                    random_odd_margins(u, &mut rng)
                } else {
                    random_margins(u, 3, &mut rng)
                }
                .expect("valid margins"),
            ),
            PopulationKind::Profiles => {
                let voters = rng.random_range(1..=9);
                Input::Profile(random_profile(u, voters, &mut rng).expect("valid profile"))
            }
        }
    }
}

macro_rules! claim {
    ($id:literal, $pop:ident, $summary:literal, $check:expr) => {
        Claim {
            id: $id,
            summary: $summary,
            population: PopulationKind::$pop,
            check: $check,
        }
    };
}

/// Every registered claim.
pub static CLAIMS: &[Claim] = &[
    claim!(
        "theorem1",
        Tables,
        "gamma iff the local revealed preference family rationalizes",
        gamma_iff_lrp
    ),
    claim!(
        "theorem2",
        Tables,
        "gamma and epsilon_plus iff quasi-transitive local rationalization",
        quasi_transitive_iff
    ),
    claim!(
        "theorem3",
        Tables,
        "gamma-hull equals the fixpoint repair and the intersection of gamma coarsenings",
        hull_routes_agree
    ),
    claim!(
        "theorem4",
        Tables,
        "beta_plus iff transitive local rationalization",
        transitive_iff
    ),
    claim!(
        "theorem5",
        Tables,
        "gamma_plus iff PIP-transitive local rationalization",
        pip_transitive_iff
    ),
    claim!(
        "corollary1",
        Tables,
        "alpha and gamma iff revealed preference rationalizes",
        rp_rationalizes_iff
    ),
    claim!(
        "corollary2",
        Tables,
        "alpha, gamma, epsilon_plus iff quasi-transitive rationalization",
        rp_quasi_transitive_iff
    ),
    claim!(
        "corollary3",
        Tables,
        "alpha and beta_plus iff transitive rationalization",
        rp_transitive_iff
    ),
    claim!(
        "lemma1",
        Tables,
        "revealed preference family is complete, acyclic, monotone and contains the choices",
        rp_family_valid
    ),
    claim!(
        "lemma2",
        Tables,
        "under alpha, local revealed preference is revealed preference restricted",
        lrp_restricts_rp
    ),
    claim!(
        "lemma3",
        Tables,
        "rationalizable tables satisfy alpha",
        rationalizable_alpha
    ),
    claim!(
        "sandwich",
        Tables,
        "base relation within local revealed preference within revealed preference",
        sandwich
    ),
    claim!(
        "strict_lrp",
        Tables,
        "strict local revealed preference has its direct characterization",
        strict_lrp
    ),
    claim!(
        "figure1",
        Tables,
        "beta_plus => gamma_plus => gamma and epsilon_plus",
        expansion_chain
    ),
    claim!(
        "w4",
        Tables,
        "gamma_plus gives W4; under alpha and gamma, W4 iff gamma_plus",
        w4
    ),
    claim!(
        "classes",
        Tables,
        "axiom and witness routes agree on local and standard classes",
        classes
    ),
    claim!(
        "hull_alpha",
        Tables,
        "alpha tables have rationalizable gamma-hulls",
        hull_alpha
    ),
    claim!(
        "hull_epsilon",
        Tables,
        "the gamma-hull preserves epsilon_plus",
        hull_epsilon
    ),
    claim!(
        "cores",
        Tables,
        "strict core within weak core within gamma-hull; core families rationalize",
        cores
    ),
    claim!(
        "finest_family",
        Tables,
        "sampled rationalizing families contain local revealed preference",
        finest_family
    ),
    claim!(
        "prop1",
        Bases,
        "Gillies uncovered set is finest under quasi-transitivity and weak idempotency",
        finest_gillies
    ),
    claim!(
        "prop2",
        Bases,
        "top cycle is finest under transitive local rationalizability",
        finest_top_cycle
    ),
    claim!(
        "bordes",
        Bases,
        "Bordes uncovered set is finest under quasi-transitivity and (*)",
        bordes
    ),
    claim!(
        "mckelvey",
        Bases,
        "McKelvey uncovered set is finest under quasi-transitivity, weak idempotency and (*)",
        mckelvey
    ),
    claim!(
        "deep",
        Bases,
        "deep uncovered set is finest under quasi-transitivity and strengthened (*)",
        deep
    ),
    claim!(
        "scf_gamma",
        Margins,
        "split cycle and two-stage tables satisfy gamma",
        scf_gamma
    ),
    claim!(
        "scf_single",
        Margins,
        "two-stage is single-valued without majority ties",
        scf_single
    ),
    claim!(
        "scf_topcycle",
        Margins,
        "top cycle satisfies beta_plus",
        scf_topcycle
    ),
    claim!(
        "scf_uncovered",
        Margins,
        "uncovered sets are quasi-transitively locally rationalizable",
        scf_uncovered
    ),
    claim!(
        "scf_inclusions",
        Margins,
        "Gillies, Bordes within McKelvey within deep within top cycle",
        scf_inclusions
    ),
    claim!(
        "scf_coincide",
        Margins,
        "uncovered sets coincide without majority ties",
        scf_coincide
    ),
    claim!("scf", Margins, "all margin-based rule properties", scf_all),
    claim!(
        "core_uncovered",
        Margins,
        "weak gamma-core of an uncovered set is itself",
        core_uncovered
    ),
    claim!(
        "hull_omni",
        Profiles,
        "gamma-hull of omninomination is the Pareto rule",
        hull_omni
    ),
    claim!(
        "hull_copeland",
        Profiles,
        "gamma-hull of Copeland is within the top cycle",
        hull_copeland
    ),
];

fn table(input: &Input) -> &ChoiceTable {
    match input {
        Input::Table(t) => t,
        _ => unreachable!("table claim given a non-table input"),
    }
}

fn margins(input: &Input) -> &MarginMatrix {
    match input {
        Input::Margins(m) => m,
        _ => unreachable!("margin claim given a non-margin input"),
    }
}

fn profile(input: &Input) -> &Profile {
    match input {
        Input::Profile(p) => p,
        _ => unreachable!("profile claim given a non-profile input"),
    }
}

fn holds(c: &ChoiceTable, ids: &[AxiomId]) -> bool {
    ids.iter().all(|&id| check_axiom(c, id).holds())
}

fn iff(left: bool, right: bool, what: &str) -> Option<String> {
    (left != right).then(|| format!("{what}: axioms {left}, relations {right}"))
}

/// Whether the revealed preference family rationalizes and every member
/// meets `member`.
fn lrp_with(c: &ChoiceTable, member: fn(&RelationClass) -> bool) -> Result<bool, String> {
    let fam = c.local_revealed_preference();
    let valid = validate_family(c, &fam).map_err(|e| e.to_string())?.holds();
    Ok(valid
        && fam
            .iter()
            .all(|(_, r)| r.classify().map(|cl| member(&cl)).unwrap_or(false)))
}

fn lrp_iff(
    input: &Input,
    axioms: &[AxiomId],
    member: fn(&RelationClass) -> bool,
) -> Option<String> {
    let c = table(input);
    match lrp_with(c, member) {
        Ok(rel) => iff(holds(c, axioms), rel, "local rationalization"),
        Err(e) => Some(e),
    }
}

fn gamma_iff_lrp(input: &Input) -> Option<String> {
    lrp_iff(input, &[AxiomId::Gamma], |_| true)
}

fn quasi_transitive_iff(input: &Input) -> Option<String> {
    lrp_iff(input, &[AxiomId::Gamma, AxiomId::EpsilonPlus], |c| {
        c.quasi_transitive
    })
}

fn transitive_iff(input: &Input) -> Option<String> {
    lrp_iff(input, &[AxiomId::BetaPlus], |c| c.transitive)
}

fn pip_transitive_iff(input: &Input) -> Option<String> {
    lrp_iff(input, &[AxiomId::GammaPlus], |c| c.pip_transitive)
}

fn hull_routes_agree(input: &Input) -> Option<String> {
    let c = table(input);
    let hull = gamma_hull(c);
    if hull != hull_oracle(c) {
        return Some("hull differs from fixpoint repair".into());
    }
    if c.n() <= 3 && Ok(&hull) != hull_by_intersection(c).as_ref() {
        return Some("hull differs from intersection of gamma coarsenings".into());
    }
    if !check_axiom(&hull, AxiomId::Gamma).holds() {
        return Some("hull violates gamma".into());
    }
    (!c.is_refinement_of(&hull).unwrap_or(false)).then(|| "table not within its hull".into())
}

/// Whether `R_C` rationalizes `c` and meets `class`.
fn rp_with(c: &ChoiceTable, class: fn(&RelationClass) -> bool) -> bool {
    let r = c.revealed_preference();
    c.iter().all(|(a, ca)| r.maximal_in(a) == ca)
        && r.classify().map(|cl| class(&cl)).unwrap_or(false)
}

fn rp_rationalizes_iff(input: &Input) -> Option<String> {
    let c = table(input);
    iff(
        holds(c, &[AxiomId::Alpha, AxiomId::Gamma]),
        rp_with(c, |_| true),
        "rationalization",
    )
}

fn rp_quasi_transitive_iff(input: &Input) -> Option<String> {
    let c = table(input);
    iff(
        holds(c, &[AxiomId::Alpha, AxiomId::Gamma, AxiomId::EpsilonPlus]),
        rp_with(c, |cl| cl.quasi_transitive),
        "quasi-transitive rationalization",
    )
}

fn rp_transitive_iff(input: &Input) -> Option<String> {
    let c = table(input);
    iff(
        holds(c, &[AxiomId::Alpha, AxiomId::BetaPlus]),
        rp_with(c, |cl| cl.transitive),
        "transitive rationalization",
    )
}

fn rp_family_valid(input: &Input) -> Option<String> {
    let c = table(input);
    let fam = c.local_revealed_preference();
    for (a, r) in fam.iter() {
        if !r.is_complete() || !r.is_acyclic() {
            return Some(format!("member on {a:?} is incomplete or cyclic"));
        }
        if !c.get(a).is_subset(r.maximal_in(a)) {
            return Some(format!("choice on {a:?} not within maximal elements"));
        }
        if let Some(b) = a.subsets().find(|&b| !fam.get(b).is_subrelation_of(r)) {
            return Some(format!("member on {b:?} not within member on {a:?}"));
        }
    }
    None
}

fn lrp_restricts_rp(input: &Input) -> Option<String> {
    let c = table(input);
    if !holds(c, &[AxiomId::Alpha]) {
        return None;
    }
    let rp = c.revealed_preference();
    let fam = c.local_revealed_preference();
    let differs = fam
        .iter()
        .find(|(a, r)| **r != rp.restrict_unchecked(*a))
        .map(|(a, _)| a);
    differs.map(|a| format!("member on {a:?} differs from restricted revealed preference"))
}

fn rationalizable_alpha(input: &Input) -> Option<String> {
    let c = table(input);
    match standard_rat_class(c) {
        Ok(class) => (class >= RatClass::Acyclic && !holds(c, &[AxiomId::Alpha]))
            .then(|| "rationalizable but violates alpha".into()),
        Err(e) => Some(e.to_string()),
    }
}

fn sandwich(input: &Input) -> Option<String> {
    let c = table(input);
    let base = c.base_relation();
    let rp = c.revealed_preference();
    c.local_revealed_preference()
        .iter()
        .find(|(a, r)| {
            !base.restrict_unchecked(*a).is_subrelation_of(r)
                || !r.is_subrelation_of(&rp.restrict_unchecked(*a))
        })
        .map(|(a, _)| format!("sandwich fails on {a:?}"))
}

fn strict_lrp(input: &Input) -> Option<String> {
    let c = table(input);
    let fam = c.local_revealed_preference();
    for (a, r) in fam.iter() {
        for x in a {
            for y in a {
                let reached = a.subsets().any(|b| b.contains(y) && c.get(b).contains(x));
                let never_back = a.subsets().all(|b| !b.contains(x) || !c.get(b).contains(y));
                if r.strict(x, y) != (reached && never_back) {
                    return Some(format!("strict pair ({x}, {y}) on {a:?}"));
                }
            }
        }
    }
    None
}

fn expansion_chain(input: &Input) -> Option<String> {
    use AxiomId::*;
    let c = table(input);
    let pairs: [(&[AxiomId], &[AxiomId], &str); 3] = [
        (&[BetaPlus], &[GammaPlus], "beta_plus => gamma_plus"),
        (&[GammaPlus], &[Gamma], "gamma_plus => gamma"),
        (&[GammaPlus], &[EpsilonPlus], "gamma_plus => epsilon_plus"),
    ];
    pairs
        .iter()
        .find(|(p, q, _)| holds(c, p) && !holds(c, q))
        .map(|(_, _, name)| format!("{name} fails"))
}

fn w4(input: &Input) -> Option<String> {
    use AxiomId::*;
    let c = table(input);
    if holds(c, &[GammaPlus]) && !holds(c, &[W4, Gamma]) {
        return Some("gamma_plus without W4 and gamma".into());
    }
    iff(
        holds(c, &[Alpha, Gamma, W4]),
        holds(c, &[Alpha, GammaPlus]),
        "alpha, gamma, W4 vs alpha, gamma_plus",
    )
}

fn classes(input: &Input) -> Option<String> {
    let c = table(input);
    local_rat_class(c)
        .and_then(|_| standard_rat_class(c))
        .err()
        .map(|e| e.to_string())
}

fn hull_alpha(input: &Input) -> Option<String> {
    let c = table(input);
    if !holds(c, &[AxiomId::Alpha]) {
        return None;
    }
    match standard_rat_class(&gamma_hull(c)) {
        Ok(RatClass::None) => Some("hull of an alpha table is not rationalizable".into()),
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    }
}

fn hull_epsilon(input: &Input) -> Option<String> {
    let c = table(input);
    (holds(c, &[AxiomId::EpsilonPlus]) && !holds(&gamma_hull(c), &[AxiomId::EpsilonPlus]))
        .then(|| "hull violates epsilon_plus".into())
}

fn cores(input: &Input) -> Option<String> {
    let c = table(input);
    let hull = gamma_hull(c);
    for reading in [PathReading::Simple, PathReading::Walk] {
        let weak = match gamma_core(c, CoreVariant::Weak, reading) {
            Ok((t, _)) => t,
            Err(e) => return Some(format!("weak core ({reading:?}): {e}")),
        };
        let strict = match gamma_core(c, CoreVariant::Strict, reading) {
            Ok((t, _)) => t,
            Err(e) => return Some(format!("strict core ({reading:?}): {e}")),
        };
        if !strict.is_refinement_of(&weak).unwrap_or(false) {
            return Some(format!("strict core not within weak core ({reading:?})"));
        }
        if !weak.is_refinement_of(&hull).unwrap_or(false) {
            return Some(format!("weak core not within hull ({reading:?})"));
        }
    }
    None
}

fn finest_family(input: &Input) -> Option<String> {
    let c = table(input);
    if !holds(c, &[AxiomId::Gamma]) {
        return None;
    }
    match finest_family_probe(c, 20, 0) {
        Ok(report) => report
            .verdict
            .witness()
            .map(|w| format!("family misses pair ({}, {}) on {:?}", w.x, w.y, w.set)),
        Err(e) => Some(e.to_string()),
    }
}

fn finest(input: &Input, prop: FinestProp) -> Option<String> {
    let base = margins(input).majority_base();
    match finest_check(prop, &base, FinestMode::Exhaustive, 0, 0) {
        Ok(report) => report.verdict.witness().map(|v| format!("{v:?}")),
        Err(e) => Some(e.to_string()),
    }
}

fn finest_gillies(input: &Input) -> Option<String> {
    finest(input, FinestProp::Gillies)
}

fn finest_top_cycle(input: &Input) -> Option<String> {
    finest(input, FinestProp::TopCycle)
}

fn bordes(input: &Input) -> Option<String> {
    finest(input, FinestProp::Bordes)
}

fn mckelvey(input: &Input) -> Option<String> {
    finest(input, FinestProp::McKelvey)
}

fn deep(input: &Input) -> Option<String> {
    finest(input, FinestProp::Deep)
}

/// Rule tables on margins; two-stage breaks ties by universe order.
fn tables_for(m: &MarginMatrix, rules: &[RuleId]) -> Result<Vec<ChoiceTable>, String> {
    let tie = TieBreakOrder::identity(m.len());
    rules
        .iter()
        .map(|&r| rule_table(r, m, Some(&tie), None).map_err(|e| e.to_string()))
        .collect()
}

fn scf_gamma(input: &Input) -> Option<String> {
    let rules = [RuleId::SplitCycle, RuleId::TwoStage];
    match tables_for(margins(input), &rules) {
        Ok(ts) => rules
            .iter()
            .zip(&ts)
            .find(|(_, t)| !holds(t, &[AxiomId::Gamma]))
            .map(|(r, _)| format!("{r} violates gamma")),
        Err(e) => Some(e),
    }
}

fn scf_single(input: &Input) -> Option<String> {
    let m = margins(input);
    if m.has_ties() {
        return None;
    }
    match tables_for(m, &[RuleId::TwoStage]) {
        Ok(ts) => ts[0]
            .iter()
            .find(|(_, c)| c.len() != 1)
            .map(|(a, _)| format!("two-stage not single-valued on {a:?}")),
        Err(e) => Some(e),
    }
}

fn scf_topcycle(input: &Input) -> Option<String> {
    match tables_for(margins(input), &[RuleId::TopCycle]) {
        Ok(ts) => match local_rat_class(&ts[0]) {
            Ok(RatClass::Transitive) if holds(&ts[0], &[AxiomId::BetaPlus]) => None,
            Ok(class) => Some(format!("top cycle class {class}")),
            Err(e) => Some(e.to_string()),
        },
        Err(e) => Some(e),
    }
}

fn scf_uncovered(input: &Input) -> Option<String> {
    match tables_for(margins(input), &RuleId::UNCOVERED) {
        Ok(ts) => RuleId::UNCOVERED
            .iter()
            .zip(&ts)
            .find_map(|(r, t)| match local_rat_class(t) {
                Ok(class) if class >= RatClass::QuasiTransitive => None,
                Ok(class) => Some(format!("{r} class {class}")),
                Err(e) => Some(format!("{r}: {e}")),
            }),
        Err(e) => Some(e),
    }
}

fn scf_inclusions(input: &Input) -> Option<String> {
    use RuleId::*;
    let rules = [UcGillies, UcBordes, UcMcKelvey, UcDeep, TopCycle];
    let ts = match tables_for(margins(input), &rules) {
        Ok(ts) => ts,
        Err(e) => return Some(e),
    };
    let chain = [(0, 2), (1, 2), (2, 3), (3, 4)];
    chain.iter().find_map(|&(i, j)| {
        ts[i]
            .refinement_witness(&ts[j])
            .ok()
            .flatten()
            .map(|a| format!("{} not within {} on {a:?}", rules[i], rules[j]))
    })
}

fn scf_coincide(input: &Input) -> Option<String> {
    let m = margins(input);
    if m.has_ties() {
        return None;
    }
    match tables_for(m, &RuleId::UNCOVERED) {
        Ok(ts) => ts
            .iter()
            .zip(RuleId::UNCOVERED)
            .find(|(t, _)| **t != ts[0])
            .map(|(_, r)| format!("{r} differs from {}", RuleId::UNCOVERED[0])),
        Err(e) => Some(e),
    }
}

fn scf_all(input: &Input) -> Option<String> {
    [
        scf_gamma,
        scf_single,
        scf_topcycle,
        scf_uncovered,
        scf_inclusions,
        scf_coincide,
    ]
    .iter()
    .find_map(|check| check(input))
}

fn core_uncovered(input: &Input) -> Option<String> {
    match tables_for(margins(input), &RuleId::UNCOVERED) {
        Ok(ts) => RuleId::UNCOVERED.iter().zip(&ts).find_map(|(r, t)| {
            match gamma_core(t, CoreVariant::Weak, PathReading::Simple) {
                Ok((core, _)) if core == *t => None,
                Ok(_) => Some(format!("weak core of {r} differs")),
                Err(e) => Some(format!("{r}: {e}")),
            }
        }),
        Err(e) => Some(e),
    }
}

fn profile_table(p: &Profile, rule: RuleId) -> Result<ChoiceTable, String> {
    rule_table(rule, &p.margins(), None, Some(p)).map_err(|e| e.to_string())
}

fn hull_omni(input: &Input) -> Option<String> {
    let p = profile(input);
    let run = || -> Result<Option<String>, String> {
        let omni = profile_table(p, RuleId::Omninomination)?;
        let pareto = profile_table(p, RuleId::Pareto)?;
        Ok(gamma_hull(&omni)
            .refinement_witness(&pareto)
            .ok()
            .flatten()
            .or_else(|| pareto.refinement_witness(&gamma_hull(&omni)).ok().flatten())
            .map(|a| format!("hull of omninomination differs from Pareto on {a:?}")))
    };
    run().unwrap_or_else(Some)
}

fn hull_copeland(input: &Input) -> Option<String> {
    let p = profile(input);
    let run = || -> Result<Option<String>, String> {
        let copeland = profile_table(p, RuleId::Copeland)?;
        let top = profile_table(p, RuleId::TopCycle)?;
        Ok(gamma_hull(&copeland)
            .refinement_witness(&top)
            .ok()
            .flatten()
            .map(|a| format!("hull of Copeland exceeds top cycle on {a:?}")))
    };
    run().unwrap_or_else(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_unique() {
        let mut ids: Vec<&str> = CLAIMS.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), CLAIMS.len());
    }

    #[test]
    fn gamma_claim_exhaustive_n3() {
        let r = verify_claim("theorem1", Sweep::exhaustive(3)).unwrap();
        assert_eq!(r.checked, 189);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn unknown_and_out_of_range() {
        assert!(matches!(
            verify_claim("theorem9", Sweep::exhaustive(3)),
            Err(VerifyError::UnknownClaim(_))
        ));
        assert!(matches!(
            verify_claim("theorem1", Sweep::exhaustive(4)),
            Err(VerifyError::OutOfRange { n: 4, .. })
        ));
        assert!(matches!(
            verify_claim("scf_gamma", Sweep::exhaustive(3)),
            Err(VerifyError::OutOfRange { .. })
        ));
    }

    fn never_alpha(input: &Input) -> Option<String> {
        (!holds(table(input), &[AxiomId::Alpha])).then(|| "alpha fails".into())
    }

    #[test]
    fn counterexamples_replay_and_are_ordered() {
        let claim = Claim {
            id: "always_alpha",
            summary: "false on purpose",
            population: PopulationKind::Tables,
            check: never_alpha,
        };
        let mut sweep = Sweep::exhaustive(3);
        sweep.workers = 3;
        let r = verify(&claim, sweep).unwrap();
        assert!(!r.passed());
        assert!(r.violations.windows(2).all(|w| w[0].index < w[1].index));
        for cx in &r.violations {
            assert!(replay(&claim, cx).unwrap());
        }
        let again = verify(
            &claim,
            Sweep {
                workers: 1,
                ..sweep
            },
        )
        .unwrap();
        assert_eq!(again.violations, r.violations);
    }

    #[test]
    fn report_text_is_deterministic() {
        let a = verify_claim("scf", Sweep::sample(4, 30, 9)).unwrap();
        let b = verify_claim("scf", Sweep::sample(4, 30, 9)).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(a
            .to_string()
            .contains("30 sampled margin matrices on n=4, seed 9"));
    }
}
