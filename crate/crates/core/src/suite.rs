//! Seeded entity generation and the property battery.
//!
//! Every check draws its cases from a generator seeded per case, so results
//! do not depend on scheduling. The first failing case of each check is
//! shrunk by dropping classes and halving counts.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{
    distinguishable_subqsets, ordered_pair, power_qc, separation, strong_pair, sub_qset_of_card, union, weak_pair,
    ClassPredicate, StrongSingleton,
};
use crate::cardinal::Cardinal;
use crate::entity::{Entity, MAtomId, Species};
use crate::error::{Error, Result};
use crate::labelling::{label, verify_weak_labelling};
use crate::qset::QSet;
use crate::relations::{ext_eq, indist, quotient, weak_ext_indist};
use crate::statistics::{enumerate_occupancies, mb_weight, microstate_count, quasi_function_count, StatKind};

pub const MAX_GEN_DEPTH: usize = 4;
pub const MAX_GEN_WIDTH: usize = 6;
pub const MAX_GEN_COUNT: u64 = 8;

/// Bounds and seed for entity generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub max_width: usize,
    pub max_count: u64,
    pub species_pool: Vec<Species>,
    pub matom_pool: Vec<MAtomId>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig::with_seed(42)
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            max_depth: MAX_GEN_DEPTH,
            max_width: MAX_GEN_WIDTH,
            max_count: MAX_GEN_COUNT,
            species_pool: ["e", "p", "n"].map(|s| Species::new(s).unwrap()).to_vec(),
            matom_pool: ["A", "B", "C"].map(|s| MAtomId::new(s).unwrap()).to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth > MAX_GEN_DEPTH || self.max_width > MAX_GEN_WIDTH || self.max_count > MAX_GEN_COUNT {
            return Err(Error::ScaleExceeded(format!(
                "generation bounds are depth <= {MAX_GEN_DEPTH}, width <= {MAX_GEN_WIDTH}, count <= {MAX_GEN_COUNT}"
            )));
        }
        if self.max_count == 0 || self.species_pool.is_empty() || self.matom_pool.is_empty() {
            return Err(Error::ScaleExceeded(
                "generation pools and counts must be non-empty".into(),
            ));
        }
        Ok(())
    }
}

/// splitmix64 finaliser, used to derive independent per-case seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn case_seed(seed: u64, stream: u64, case: u64) -> u64 {
    mix(mix(seed ^ mix(stream)) ^ case)
}

/// Random entity source bounded by a [`GenConfig`].
pub struct Generator<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    case: u64,
}

impl<'a> Generator<'a> {
    pub fn new(cfg: &'a GenConfig, seed: u64) -> Self {
        Generator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(seed),
            case: 0,
        }
    }

    fn species(&mut self) -> Species {
        self.cfg.species_pool.choose(&mut self.rng).unwrap().clone()
    }

    fn count(&mut self) -> u64 {
        self.rng.gen_range(1..=self.cfg.max_count)
    }

    pub fn atom(&mut self) -> Entity {
        match self.rng.gen_range(0..3) {
            0 => Entity::MAtom(self.species()),
            1 => Entity::Macro(self.cfg.matom_pool.choose(&mut self.rng).unwrap().clone()),
            _ => Entity::label(self.rng.gen_range(0..6)),
        }
    }

    /// An entity of qset depth at most `max_depth`.
    pub fn entity(&mut self) -> Entity {
        let depth = self.cfg.max_depth;
        self.entity_within(depth)
    }

    fn entity_within(&mut self, depth: usize) -> Entity {
        if depth == 0 || self.rng.gen_bool(0.35) {
            self.atom()
        } else {
            Entity::Q(self.qset_within(depth))
        }
    }

    /// A qset, even when `max_depth` is 0.
    pub fn qset(&mut self) -> QSet {
        let depth = self.cfg.max_depth.max(1);
        self.qset_within(depth)
    }

    fn qset_within(&mut self, depth: usize) -> QSet {
        let width = self.rng.gen_range(0..=self.cfg.max_width);
        let mut b = QSet::builder();
        for _ in 0..width {
            let nested = depth > 1 && self.rng.gen_bool(0.3);
            let (e, c) = if nested {
                let inner = self.qset_within(depth - 1);
                (Entity::Q(inner), self.rng.gen_range(1..=self.cfg.max_count.min(3)))
            } else {
                let a = self.atom();
                let c = if a.is_m_atom() { self.count() } else { 1 };
                (a, c)
            };
            b.insert(e, c).expect("generation stays within depth bounds");
        }
        b.build()
    }

    /// `[m:s*c]` with `0 <= c <= max_count`.
    pub fn pure(&mut self) -> QSet {
        let s = self.species();
        let c = self.rng.gen_range(0..=self.cfg.max_count);
        QSet::pure(s, c)
    }

    /// Rebuilds an entity from shuffled, split-up classes. The result is
    /// indistinguishable from the input but constructed independently.
    pub fn twin(&mut self, e: &Entity) -> Entity {
        match e {
            Entity::Q(q) => {
                let mut parts: Vec<(Entity, u64)> = Vec::new();
                for (r, c) in q.classes() {
                    let mut left = c;
                    while left > 0 {
                        let take = if left > 1 { self.rng.gen_range(1..=left) } else { 1 };
                        parts.push((self.twin(&r), take));
                        left -= take;
                    }
                }
                parts.shuffle(&mut self.rng);
                Entity::Q(QSet::from_elements(parts).expect("same depth as the input"))
            }
            other => other.clone(),
        }
    }

    /// A small edit: usually distinguishable from the input.
    pub fn perturb(&mut self, e: &Entity) -> Entity {
        match e {
            Entity::Q(q) => {
                let classes: Vec<(Entity, u64)> = q.classes().collect();
                let mut b = QSet::builder();
                let skip = if classes.is_empty() || self.rng.gen_bool(0.5) {
                    None
                } else {
                    Some(self.rng.gen_range(0..classes.len()))
                };
                for (i, (r, c)) in classes.into_iter().enumerate() {
                    if Some(i) != skip {
                        b.insert(r, c).unwrap();
                    }
                }
                if skip.is_none() {
                    b.insert(Entity::MAtom(self.species()), 1).unwrap();
                }
                Entity::Q(b.build())
            }
            _ => self.atom(),
        }
    }
}

/// Deterministic pseudo-random entities within the configured bounds.
pub fn generate(cfg: &GenConfig, count: u64) -> Vec<Entity> {
    (0..count)
        .map(|i| Generator::new(cfg, case_seed(cfg.seed, u64::MAX, i)).entity())
        .collect()
}

/// Operations the battery exercises through an indirection, so that a
/// deliberately broken implementation can be substituted in tests.
pub trait Model: Sync {
    fn difference(&self, x: &QSet, s: &StrongSingleton) -> Result<QSet> {
        crate::algebra::difference(x, s)
    }
}

/// The crate's own implementation.
pub struct Reference;

impl Model for Reference {}

type Property = fn(&dyn Model, &[Entity]) -> std::result::Result<(), String>;

struct Check {
    name: &'static str,
    generate: fn(&mut Generator) -> Vec<Entity>,
    property: Property,
}

const CHECKS: [Check; 12] = [
    Check {
        name: "EQUIV",
        generate: gen_population,
        property: prop_equiv,
    },
    Check {
        name: "ILLFORMED",
        generate: gen_illformed,
        property: prop_illformed,
    },
    Check {
        name: "EXT2INDIST",
        generate: gen_non_m_pair,
        property: prop_ext2indist,
    },
    Check {
        name: "WEAKPAIR",
        generate: gen_weak_pair,
        property: prop_weak_pair,
    },
    Check {
        name: "SEP",
        generate: gen_qset,
        property: prop_separation,
    },
    Check {
        name: "QCUNIQUE",
        generate: gen_qset,
        property: prop_qc_unique,
    },
    Check {
        name: "SUBQC",
        generate: gen_qset,
        property: prop_sub_qc,
    },
    Check {
        name: "POWQC",
        generate: gen_qset,
        property: prop_power_qc,
    },
    Check {
        name: "WEXT",
        generate: gen_qset_pair,
        property: prop_weak_ext,
    },
    Check {
        name: "PAIRSYM",
        generate: gen_entity_pair,
        property: prop_pair_symmetry,
    },
    Check {
        name: "LABELPOST",
        generate: gen_pure,
        property: prop_label_post,
    },
    Check {
        name: "STATS",
        generate: gen_stats,
        property: prop_stats,
    },
];

/// Names of the battery's checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub case: u64,
    pub seed: u64,
    pub entities: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn total_failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases={} failures={}", self.name, self.cases, self.failures)?;
        if let Some(cx) = &self.first {
            write!(
                f,
                " first: case={} seed={:#018x} entities=[{}] {}",
                cx.case,
                cx.seed,
                cx.entities.join(" ; "),
                cx.message
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "total failures={}", self.total_failures())
    }
}

pub fn run_suite(cfg: &GenConfig, cases: u64) -> Result<SuiteReport> {
    run_suite_with(&Reference, cfg, cases)
}

/// Runs every check for `cases` cases against `model`. With zero cases the
/// report is empty.
pub fn run_suite_with(model: &dyn Model, cfg: &GenConfig, cases: u64) -> Result<SuiteReport> {
    cfg.validate()?;
    if cases == 0 {
        return Ok(SuiteReport::default());
    }
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(index, check)| run_check(model, cfg, index as u64, check, cases))
        .collect();
    Ok(SuiteReport { checks })
}

fn run_check(model: &dyn Model, cfg: &GenConfig, stream: u64, check: &Check, cases: u64) -> CheckReport {
    let outcomes: Vec<Option<(u64, Vec<Entity>, String)>> = (0..cases)
        .into_par_iter()
        .map(|case| {
            let seed = case_seed(cfg.seed, stream, case);
            let mut g = Generator::new(cfg, seed);
            g.case = case;
            let entities = (check.generate)(&mut g);
            (check.property)(model, &entities)
                .err()
                .map(|msg| (seed, entities, msg))
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    let first = outcomes.into_iter().enumerate().find_map(|(case, o)| {
        o.map(|(seed, entities, msg)| {
            let (entities, message) = shrink(model, check.property, entities, msg);
            Counterexample {
                case: case as u64,
                seed,
                entities: entities.iter().map(Entity::to_string).collect(),
                message,
            }
        })
    });
    CheckReport {
        name: check.name,
        cases,
        failures,
        first,
    }
}

type ClassEdit<'a> = &'a dyn Fn(usize, &Entity, u64) -> Option<(Entity, u64)>;

/// Smaller variants of an entity: each class dropped, each count halved,
/// each nested class shrunk in place.
pub fn shrink_candidates(e: &Entity) -> Vec<Entity> {
    let Entity::Q(q) = e else {
        return Vec::new();
    };
    let classes: Vec<(Entity, u64)> = q.classes().collect();
    let rebuild = |edit: ClassEdit| {
        let parts = classes.iter().enumerate().filter_map(|(i, (r, c))| edit(i, r, *c));
        QSet::from_elements(parts).ok().map(Entity::Q)
    };
    let mut out = Vec::new();
    for (target, (r, c)) in classes.iter().enumerate() {
        out.extend(rebuild(&|i, r2, c2| (i != target).then(|| (r2.clone(), c2))));
        if *c >= 2 {
            out.extend(rebuild(&|i, r2, c2| {
                Some((r2.clone(), if i == target { c2 / 2 } else { c2 }))
            }));
        }
        for smaller in shrink_candidates(r) {
            out.extend(rebuild(&|i, r2, c2| {
                Some((if i == target { smaller.clone() } else { r2.clone() }, c2))
            }));
        }
    }
    out
}

fn shrink(model: &dyn Model, property: Property, mut case: Vec<Entity>, mut message: String) -> (Vec<Entity>, String) {
    for _ in 0..256 {
        let mut progressed = false;
        'search: for i in 0..case.len() {
            for candidate in shrink_candidates(&case[i]) {
                let mut trial = case.clone();
                trial[i] = candidate;
                if let Err(m) = property(model, &trial) {
                    case = trial;
                    message = m;
                    progressed = true;
                    break 'search;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    (case, message)
}

// ---------- generators ----------

fn gen_population(g: &mut Generator) -> Vec<Entity> {
    let mut pop: Vec<Entity> = (0..3).map(|_| g.entity()).collect();
    let twins: Vec<Entity> = pop.iter().map(|e| g.twin(e)).collect();
    let near = g.perturb(&pop[0]);
    pop.extend(twins);
    pop.push(near);
    pop.shuffle(&mut g.rng);
    pop
}

fn gen_illformed(g: &mut Generator) -> Vec<Entity> {
    let m = Entity::MAtom(g.species());
    let other = g.entity();
    let x = Entity::Q(g.qset());
    vec![m, other, x]
}

fn non_m(g: &mut Generator) -> Entity {
    match g.entity() {
        Entity::MAtom(s) => Entity::Q(QSet::pure(s, 1)),
        e => e,
    }
}

fn gen_non_m_pair(g: &mut Generator) -> Vec<Entity> {
    let a = non_m(g);
    let b = match g.rng.gen_range(0..3) {
        0 => g.twin(&a),
        1 => g.perturb(&a),
        _ => non_m(g),
    };
    let b = if b.is_m_atom() { non_m(g) } else { b };
    vec![a, b]
}

fn gen_weak_pair(g: &mut Generator) -> Vec<Entity> {
    let u = g.qset();
    let reps: Vec<Entity> = u.classes().map(|(r, _)| r).collect();
    let pick = |g: &mut Generator| {
        if !reps.is_empty() && g.rng.gen_bool(0.75) {
            let r = reps.choose(&mut g.rng).unwrap().clone();
            g.twin(&r)
        } else {
            g.entity()
        }
    };
    let x = pick(g);
    let y = pick(g);
    vec![Entity::Q(u), x, y]
}

fn gen_qset(g: &mut Generator) -> Vec<Entity> {
    vec![Entity::Q(g.qset())]
}

fn gen_qset_pair(g: &mut Generator) -> Vec<Entity> {
    let x = Entity::Q(g.qset());
    let y = match g.rng.gen_range(0..3) {
        0 => g.twin(&x),
        1 => g.perturb(&x),
        _ => Entity::Q(g.qset()),
    };
    vec![x, y]
}

fn gen_entity_pair(g: &mut Generator) -> Vec<Entity> {
    let a = g.entity();
    let b = if g.rng.gen_bool(0.7) { g.twin(&a) } else { g.entity() };
    vec![a, b]
}

fn gen_pure(g: &mut Generator) -> Vec<Entity> {
    vec![Entity::Q(g.pure())]
}

fn gen_stats(g: &mut Generator) -> Vec<Entity> {
    let n = g.case % 8 + 1;
    let k = (g.case / 8) % 8 + 1;
    vec![Entity::label(n), Entity::label(k)]
}

// ---------- properties ----------

type Verdict = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Verdict {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn qset_arg(e: &Entity) -> std::result::Result<&QSet, String> {
    e.as_qset().ok_or_else(|| format!("expected a qset, got {e}"))
}

fn prop_equiv(_: &dyn Model, pop: &[Entity]) -> Verdict {
    for a in pop {
        ensure(indist(a, a), || format!("not reflexive on {a}"))?;
        for b in pop {
            let ab = indist(a, b);
            ensure(ab == indist(b, a), || format!("not symmetric on {a}, {b}"))?;
            if !ab {
                continue;
            }
            for c in pop {
                ensure(!indist(b, c) || indist(a, c), || {
                    format!("not transitive on {a}, {b}, {c}")
                })?;
            }
        }
    }
    Ok(())
}

fn prop_illformed(_: &dyn Model, args: &[Entity]) -> Verdict {
    let ill = |r: Result<bool>| matches!(r, Err(Error::IllFormedFormula(_)));
    for m in args.iter().filter(|e| e.is_m_atom()) {
        for other in args {
            ensure(ill(ext_eq(m, other)), || format!("ext_eq({m}, {other}) was answered"))?;
            ensure(ill(ext_eq(other, m)), || format!("ext_eq({other}, {m}) was answered"))?;
        }
        for x in args.iter().filter_map(Entity::as_qset) {
            ensure(ill(x.member(m)), || format!("member({m}, {x}) was answered"))?;
        }
    }
    for a in args.iter().filter(|e| !e.is_m_atom()) {
        for b in args.iter().filter(|e| !e.is_m_atom()) {
            ensure(ext_eq(a, b).is_ok(), || format!("ext_eq({a}, {b}) rejected"))?;
        }
    }
    Ok(())
}

fn prop_ext2indist(_: &dyn Model, args: &[Entity]) -> Verdict {
    for a in args.iter().filter(|e| !e.is_m_atom()) {
        ensure(ext_eq(a, a) == Ok(true), || format!("ext_eq({a}, {a}) is not true"))?;
        for b in args.iter().filter(|e| !e.is_m_atom()) {
            if ext_eq(a, b) == Ok(true) {
                ensure(indist(a, b), || format!("{a} =_E {b} but not indistinguishable"))?;
            }
        }
    }
    Ok(())
}

fn prop_weak_pair(_: &dyn Model, args: &[Entity]) -> Verdict {
    let u = qset_arg(&args[0])?;
    let (x, y) = (&args[1], &args[2]);
    let witnessed = |t: &Entity| u.classes().any(|(r, _)| indist(&r, t));
    match weak_pair(x, y, u) {
        Ok(w) => {
            ensure(w.is_subqset_of(u), || format!("{w} is not a sub-qset of {u}"))?;
            for (r, _) in w.classes() {
                ensure(indist(&r, x) || indist(&r, y), || {
                    format!("{r} in {w} matches neither {x} nor {y}")
                })?;
            }
            for (r, c) in u.classes() {
                if indist(&r, x) || indist(&r, y) {
                    ensure(w.class_count_of(&r) == c, || format!("{r}*{c} missing from {w}"))?;
                }
            }
            Ok(())
        }
        Err(Error::UniverseMiss(_)) => ensure(!witnessed(x) || !witnessed(y), || {
            format!("weak_pair({x}, {y}, {u}) missed a witnessed element")
        }),
        Err(e) => Err(format!("weak_pair({x}, {y}, {u}) failed: {e}")),
    }
}

fn predicate_menu(x: &QSet) -> Vec<ClassPredicate> {
    let mut menu = vec![
        ClassPredicate::Always,
        ClassPredicate::Never,
        ClassPredicate::IsMAtom,
        ClassPredicate::IsMacro,
        ClassPredicate::IsLabel,
        ClassPredicate::IsQset,
        ClassPredicate::IsSet,
    ];
    menu.extend(x.atoms().map(|(s, _)| ClassPredicate::Species(s.clone())));
    menu
}

fn prop_separation(_: &dyn Model, args: &[Entity]) -> Verdict {
    let x = qset_arg(&args[0])?;
    for pred in predicate_menu(x) {
        let out = separation(x, &pred);
        ensure(out.is_subqset_of(x), || {
            format!("{pred:?}: {out} is not a sub-qset of {x}")
        })?;
        for (r, c) in x.classes() {
            let expected = if pred.holds(&r) { c } else { 0 };
            ensure(out.class_count_of(&r) == expected, || {
                format!(
                    "{pred:?}: class {r} has count {} in {out}, expected {expected}",
                    out.class_count_of(&r)
                )
            })?;
        }
    }
    Ok(())
}

fn prop_qc_unique(_: &dyn Model, args: &[Entity]) -> Verdict {
    let x = qset_arg(&args[0])?;
    ensure(QSet::empty().qc() == Cardinal::ZERO, || "qc([]) != 0".into())?;
    let qc = x.qc();
    ensure(qc == x.qc(), || format!("qc({x}) is not single-valued"))?;
    let flattened: u128 = x.classes().map(|(_, c)| u128::from(c)).sum();
    ensure(qc.get() == flattened, || {
        format!("qc({x}) = {qc}, flattened count {flattened}")
    })?;
    ensure(quotient(x).total() == qc, || {
        format!("quotient of {x} does not sum to qc")
    })?;
    ensure((qc == Cardinal::ZERO) == x.is_empty(), || {
        format!("qc({x}) = 0 disagrees with emptiness")
    })?;
    if x.is_set() {
        ensure(qc.get() == x.class_count() as u128, || format!("set {x} has qc {qc}"))?;
    }
    x.validate()
}

fn prop_sub_qc(_: &dyn Model, args: &[Entity]) -> Verdict {
    let x = qset_arg(&args[0])?;
    let n = x.qc().get();
    for beta in 0..=n {
        let sub = sub_qset_of_card(x, Cardinal::new(beta)).map_err(|e| format!("sub_qset({x}, {beta}): {e}"))?;
        ensure(sub.qc().get() == beta, || format!("sub_qset({x}, {beta}) = {sub}"))?;
        ensure(sub.is_subqset_of(x), || format!("{sub} is not a sub-qset of {x}"))?;
    }
    ensure(
        matches!(
            sub_qset_of_card(x, Cardinal::new(n + 1)),
            Err(Error::CardinalTooLarge { .. })
        ),
        || format!("sub_qset({x}, {}) did not fail", n + 1),
    )
}

fn prop_power_qc(_: &dyn Model, args: &[Entity]) -> Verdict {
    let x = qset_arg(&args[0])?;
    let n = x.qc().get();
    if n > 64 {
        return ensure(matches!(power_qc(x), Err(Error::Overflow(_))), || {
            format!("power_qc({x}) did not overflow")
        });
    }
    let power = power_qc(x).map_err(|e| e.to_string())?;
    let doubled = (0..n).fold(1u128, |acc, _| acc * 2);
    ensure(power.get() == doubled, || {
        format!("power_qc({x}) = {power}, expected {doubled}")
    })?;
    let distinct = distinguishable_subqsets(x).map_err(|e| e.to_string())?;
    ensure(distinct <= power, || {
        format!("{distinct} distinguishable sub-qsets exceed {power}")
    })?;
    let all_individual = x.classes().all(|(_, c)| c == 1);
    ensure((distinct == power) == all_individual, || {
        format!("equality {distinct} = {power} should hold iff all counts are 1 in {x}")
    })
}

fn prop_weak_ext(_: &dyn Model, args: &[Entity]) -> Verdict {
    let (x, y) = (qset_arg(&args[0])?, qset_arg(&args[1])?);
    let wext = weak_ext_indist(x, y);
    let ind = indist(&args[0], &args[1]);
    let ext = ext_eq(&args[0], &args[1]).map_err(|e| e.to_string())?;
    ensure(wext == ind, || {
        format!("weak extensionality {wext} vs indist {ind} on {x}, {y}")
    })?;
    ensure(ext == ind, || format!("ext_eq {ext} vs indist {ind} on {x}, {y}"))?;
    ensure((x.text() == y.text()) == ind, || {
        format!("canonical text disagrees with indist on {x}, {y}")
    })
}

fn prop_pair_symmetry(_: &dyn Model, args: &[Entity]) -> Verdict {
    let (a, b) = (&args[0], &args[1]);
    let ab = ordered_pair(a, b).map_err(|e| e.to_string())?;
    let ba = ordered_pair(b, a).map_err(|e| e.to_string())?;
    let (pab, pba) = (Entity::Q(ab.encoding().clone()), Entity::Q(ba.encoding().clone()));
    if indist(a, b) {
        ensure(indist(&pab, &pba), || {
            format!("<{a}, {b}> and <{b}, {a}> are distinguishable")
        })?;
        let single = Entity::Q(strong_pair(a, a).map_err(|e| e.to_string())?);
        let collapsed = Entity::Q(strong_pair(&single, &single).map_err(|e| e.to_string())?);
        ensure(ext_eq(&pab, &collapsed) == Ok(true), || {
            format!("<{a}, {b}> = {pab} is not [[{a}]]")
        })?;
        ensure(ab.is_collapsed(), || format!("{pab} is not collapsed"))
    } else {
        ensure(!ab.is_collapsed(), || {
            format!("<{a}, {b}> collapsed although a, b differ")
        })?;
        ensure(!indist(&pab, &pba), || {
            format!("<{a}, {b}> ≡ <{b}, {a}> although a, b differ")
        })
    }
}

fn prop_label_post(model: &dyn Model, args: &[Entity]) -> Verdict {
    let x = qset_arg(&args[0])?;
    let n = x.qc().get();

    // Conservation: peel strong singletons off with the model's difference
    // and put them back together.
    let mut rest = x.clone();
    let mut peeled = QSet::empty();
    for step in 0..n {
        let e = rest
            .classes()
            .next()
            .ok_or_else(|| format!("{x} emptied after {step} of {n} steps"))?
            .0;
        let s = StrongSingleton::of(e).map_err(|e| e.to_string())?;
        let next = model.difference(&rest, &s).map_err(|e| e.to_string())?;
        ensure(next.qc().get() + 1 == rest.qc().get(), || {
            format!("difference({rest}, {}) = {next} did not remove one element", s.inner())
        })?;
        let restored = union(s.inner(), &next).map_err(|e| e.to_string())?;
        ensure(restored == rest, || {
            format!("{} ∪ {next} = {restored}, expected {rest}", s.inner())
        })?;
        peeled = union(&peeled, s.inner()).map_err(|e| e.to_string())?;
        rest = next;
    }
    ensure(rest.is_empty(), || format!("{rest} left over after {n} steps"))?;
    ensure(peeled == *x, || {
        format!("peeled singletons give {peeled}, expected {x}")
    })?;

    let lw = label(x).map_err(|e| e.to_string())?;
    ensure(lw.len().get() == n, || format!("label({x}) stored {} pairs", lw.len()))?;
    let labels: Vec<u64> = lw
        .pairs()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|(_, l)| l.value())
        .collect();
    ensure(labels.iter().copied().eq(1..=n as u64), || {
        format!("label({x}) used labels {labels:?}")
    })?;
    ensure(verify_weak_labelling(&lw) == Ok(true), || {
        format!("label({x}) fails weak labelling")
    })
}

fn prop_stats(_: &dyn Model, args: &[Entity]) -> Verdict {
    let (Entity::Nat(n), Entity::Nat(k)) = (&args[0], &args[1]) else {
        return Err("expected n and k labels".into());
    };
    let (n, k) = (n.value(), k.value());
    let fail = |e: Error| format!("n={n} k={k}: {e}");
    let be = microstate_count(n, k, StatKind::BoseEinstein).map_err(fail)?;
    let fd = microstate_count(n, k, StatKind::FermiDirac).map_err(fail)?;
    let mb = microstate_count(n, k, StatKind::MaxwellBoltzmann).map_err(fail)?;
    let free = enumerate_occupancies(n, k, false).map_err(fail)?;
    let excl = enumerate_occupancies(n, k, true).map_err(fail)?;
    ensure(be.get() == free.len() as u128, || {
        format!("n={n} k={k}: BE {be} vs {} vectors", free.len())
    })?;
    ensure(fd.get() == excl.len() as u128, || {
        format!("n={n} k={k}: FD {fd} vs {} vectors", excl.len())
    })?;
    let weights = free
        .iter()
        .try_fold(0u128, |acc, v| mb_weight(v).map(|w| acc + w.get()))
        .map_err(fail)?;
    ensure(weights == u128::from(k).pow(n as u32), || {
        format!("n={n} k={k}: weights sum to {weights}")
    })?;
    ensure(weights == mb.get(), || {
        format!("n={n} k={k}: MB {mb} vs weights {weights}")
    })?;
    let source = QSet::pure(Species::new("e").unwrap(), n);
    let qf = quasi_function_count(&source, k).map_err(fail)?;
    ensure(qf == be, || format!("n={n} k={k}: quasi-functions {qf} vs BE {be}"))?;
    ensure(fd <= be && be <= mb, || {
        format!("n={n} k={k}: FD {fd} <= BE {be} <= MB {mb} fails")
    })
}
