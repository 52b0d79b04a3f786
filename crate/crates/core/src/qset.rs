//! Canonical finite quasi-sets.
//!
//! A qset is stored by its element classes: each species of m-atom with a
//! count, the M-atoms and labels it holds, and each class of nested qsets
//! with a count. A collection of `n` indistinguishable m-atoms has a cardinal
//! but no ordering of its members, so only `(species, n)` is kept.
//!
//! Canonical form holds by construction: every map is sorted, nested classes
//! are keyed by their canonical text, and zero counts are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::cardinal::Cardinal;
use crate::entity::{Entity, MAtomId, NatLabel, Species};
use crate::error::{Error, Result};

/// Maximum qset nesting depth accepted anywhere in the model.
pub const MAX_DEPTH: usize = 32;

#[derive(Clone)]
struct Data {
    atoms: BTreeMap<Species, u64>,
    macros: BTreeSet<MAtomId>,
    labels: BTreeSet<NatLabel>,
    nested: BTreeMap<QSet, u64>,
    depth: usize,
    /// No m-atom anywhere in the transitive closure.
    set: bool,
    text: OnceLock<Arc<str>>,
}

impl Default for Data {
    fn default() -> Self {
        Data {
            atoms: BTreeMap::new(),
            macros: BTreeSet::new(),
            labels: BTreeSet::new(),
            nested: BTreeMap::new(),
            depth: 1,
            set: true,
            text: OnceLock::new(),
        }
    }
}

/// An immutable canonical qset. Cloning is cheap.
///
/// `Eq`, `Ord` and `Hash` all follow the canonical text, so two qsets are
/// equal exactly when they are extensionally equal in the model.
#[derive(Clone)]
pub struct QSet(Arc<Data>);

impl Default for QSet {
    fn default() -> Self {
        QSet::empty()
    }
}

impl QSet {
    pub fn empty() -> QSet {
        QSet(Arc::new(Data::default()))
    }

    pub fn builder() -> QSetBuilder {
        QSetBuilder::default()
    }

    /// `[m:species*count]`.
    pub fn pure(species: Species, count: u64) -> QSet {
        let mut data = Data::default();
        if count > 0 {
            data.atoms.insert(species, count);
            data.set = false;
        }
        QSet(Arc::new(data))
    }

    /// Builds a qset from `(element, count)` pairs, merging indistinguishable
    /// classes. M-atoms and labels are sets: their counts only need to be
    /// non-zero.
    pub fn from_elements<I>(elements: I) -> Result<QSet>
    where
        I: IntoIterator<Item = (Entity, u64)>,
    {
        let mut b = QSet::builder();
        for (e, c) in elements {
            b.insert(e, c)?;
        }
        Ok(b.build())
    }

    /// The quasi-cardinal: total number of elements, counting each
    /// indistinguishable class with its multiplicity.
    pub fn qc(&self) -> Cardinal {
        let d = &self.0;
        let atoms: u128 = d.atoms.values().map(|&c| u128::from(c)).sum();
        let nested: u128 = d.nested.values().map(|&c| u128::from(c)).sum();
        Cardinal::new(atoms + d.macros.len() as u128 + d.labels.len() as u128 + nested)
    }

    pub fn is_empty(&self) -> bool {
        let d = &self.0;
        d.atoms.is_empty() && d.macros.is_empty() && d.labels.is_empty() && d.nested.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    /// Number of indistinguishability classes among the elements.
    pub fn class_count(&self) -> usize {
        let d = &self.0;
        d.atoms.len() + d.macros.len() + d.labels.len() + d.nested.len()
    }

    /// True iff no m-atom occurs in the transitive closure.
    pub fn is_set(&self) -> bool {
        self.0.set
    }

    /// True iff every element is an m-atom.
    pub fn is_pure(&self) -> bool {
        let d = &self.0;
        d.macros.is_empty() && d.labels.is_empty() && d.nested.is_empty()
    }

    /// Membership for anything but an m-atom: some element is extensionally
    /// equal to `z`.
    pub fn member(&self, z: &Entity) -> Result<bool> {
        z.require_identity("membership of an individual")?;
        Ok(match z {
            Entity::Macro(id) => self.0.macros.contains(id),
            Entity::Nat(n) => self.0.labels.contains(n),
            Entity::Q(q) => self.0.nested.keys().any(|r| crate::relations::weak_ext_indist(r, q)),
            Entity::MAtom(_) => unreachable!("rejected above"),
        })
    }

    /// How many top-level m-atoms of the given species `self` holds.
    pub fn member_species(&self, species: &Species) -> Cardinal {
        Cardinal::from(self.atom_count(species))
    }

    pub fn atom_count(&self, species: &Species) -> u64 {
        self.0.atoms.get(species).copied().unwrap_or(0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Species, u64)> + '_ {
        self.0.atoms.iter().map(|(s, &c)| (s, c))
    }

    pub fn macros(&self) -> impl Iterator<Item = &MAtomId> + '_ {
        self.0.macros.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = NatLabel> + '_ {
        self.0.labels.iter().copied()
    }

    pub fn nested(&self) -> impl Iterator<Item = (&QSet, u64)> + '_ {
        self.0.nested.iter().map(|(q, &c)| (q, c))
    }

    /// Count of the nested class extensionally equal to `q`.
    pub fn nested_count(&self, q: &QSet) -> u64 {
        self.0.nested.get(q).copied().unwrap_or(0)
    }

    /// Every element class with its count, in canonical order: m-atom
    /// species, then M-atoms, then labels, then nested qsets.
    pub fn classes(&self) -> impl Iterator<Item = (Entity, u64)> + '_ {
        let d = &self.0;
        d.atoms
            .iter()
            .map(|(s, &c)| (Entity::MAtom(s.clone()), c))
            .chain(d.macros.iter().map(|m| (Entity::Macro(m.clone()), 1)))
            .chain(d.labels.iter().map(|&n| (Entity::Nat(n), 1)))
            .chain(d.nested.iter().map(|(q, &c)| (Entity::Q(q.clone()), c)))
    }

    /// The canonical text, cached after the first call.
    pub fn text(&self) -> &str {
        self.0.text.get_or_init(|| crate::notation::render_qset(self).into())
    }

    /// Classwise containment: every class of `self` occurs in `other` with
    /// at least the same count.
    pub fn is_subqset_of(&self, other: &QSet) -> bool {
        self.atoms().all(|(s, c)| other.atom_count(s) >= c)
            && self.0.macros.is_subset(&other.0.macros)
            && self.0.labels.is_subset(&other.0.labels)
            && self.nested().all(|(q, c)| other.nested_count(q) >= c)
    }

    /// Count of the class of `e` in `self`, 0 if absent.
    pub fn class_count_of(&self, e: &Entity) -> u64 {
        match e {
            Entity::MAtom(s) => self.atom_count(s),
            Entity::Macro(m) => u64::from(self.0.macros.contains(m)),
            Entity::Nat(n) => u64::from(self.0.labels.contains(n)),
            Entity::Q(q) => self.nested_count(q),
        }
    }

    /// Address of the shared node; stable while `self` is alive.
    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn data_mut(&mut self) -> &mut Data {
        let data = Arc::make_mut(&mut self.0);
        data.text = OnceLock::new();
        data
    }

    /// Adds `count` copies of the class of `e`. Copy-on-write when shared.
    ///
    /// Classes with identity (M-atoms, labels and nested sets) hold at most
    /// one element: indistinguishable sets are identical.
    pub(crate) fn add_class(&mut self, e: Entity, count: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if let Entity::Q(q) = &e {
            if q.depth() + 1 > MAX_DEPTH {
                return Err(Error::DepthExceeded {
                    depth: q.depth() + 1,
                    max: MAX_DEPTH,
                });
            }
        }
        let data = self.data_mut();
        match e {
            Entity::MAtom(s) => {
                data.set = false;
                let slot = data.atoms.entry(s).or_insert(0);
                *slot = slot
                    .checked_add(count)
                    .ok_or_else(|| Error::Overflow("m-atom class count".into()))?;
            }
            Entity::Macro(m) => {
                data.macros.insert(m);
            }
            Entity::Nat(n) => {
                data.labels.insert(n);
            }
            Entity::Q(q) => {
                data.depth = data.depth.max(q.depth() + 1);
                if q.is_set() {
                    data.nested.insert(q, 1);
                } else {
                    data.set = false;
                    let slot = data.nested.entry(q).or_insert(0);
                    *slot = slot
                        .checked_add(count)
                        .ok_or_else(|| Error::Overflow("nested class count".into()))?;
                }
            }
        }
        Ok(())
    }

    /// Removes up to `count` copies of the class of `e`, returning how many
    /// were actually removed.
    pub(crate) fn remove_class(&mut self, e: &Entity, count: u64) -> u64 {
        let present = self.class_count_of(e);
        let taken = present.min(count);
        if taken == 0 {
            return 0;
        }
        let data = self.data_mut();
        match e {
            Entity::MAtom(s) => {
                if taken == present {
                    data.atoms.remove(s);
                    data.set = data.atoms.is_empty() && data.nested.keys().all(QSet::is_set);
                } else {
                    *data.atoms.get_mut(s).expect("present") -= taken;
                }
            }
            Entity::Macro(m) => {
                data.macros.remove(m);
            }
            Entity::Nat(n) => {
                data.labels.remove(n);
            }
            Entity::Q(q) => {
                if taken == present {
                    data.nested.remove(q);
                    data.depth = 1 + data.nested.keys().map(QSet::depth).max().unwrap_or(0);
                    data.set = data.atoms.is_empty() && data.nested.keys().all(QSet::is_set);
                } else {
                    *data.nested.get_mut(q).expect("present") -= taken;
                }
            }
        }
        taken
    }

    /// Checks every canonical-form invariant, returning a description of the
    /// first violation. Constructed values always pass; this exists for the
    /// property suite and for tests.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let d = &self.0;
        if d.atoms.values().any(|&c| c == 0) || d.nested.values().any(|&c| c == 0) {
            return Err(format!("zero count in {self}"));
        }
        let expected = 1 + d.nested.keys().map(QSet::depth).max().unwrap_or(0);
        if d.depth != expected {
            return Err(format!("cached depth {} != {expected} in {self}", d.depth));
        }
        let set = d.atoms.is_empty() && d.nested.keys().all(QSet::is_set);
        if d.set != set {
            return Err(format!("cached set flag {} != {set} in {self}", d.set));
        }
        if let Some((q, c)) = d.nested.iter().find(|(q, &c)| q.is_set() && c != 1) {
            return Err(format!("set {q} repeated {c} times"));
        }
        if d.depth > MAX_DEPTH {
            return Err(format!("depth {} exceeds {MAX_DEPTH}", d.depth));
        }
        let reps: Vec<&QSet> = d.nested.keys().collect();
        for w in reps.windows(2) {
            if w[0].text() >= w[1].text() {
                return Err(format!("nested classes out of order in {self}"));
            }
        }
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                if crate::relations::weak_ext_indist(a, b) {
                    return Err(format!("indistinguishable nested classes {a} and {b}"));
                }
            }
        }
        for q in reps {
            q.validate()?;
        }
        Ok(())
    }
}

impl PartialEq for QSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.text() == other.text()
    }
}

impl Eq for QSet {}

impl PartialOrd for QSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.text().cmp(other.text())
    }
}

impl Hash for QSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text().hash(state);
    }
}

impl fmt::Display for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

impl fmt::Debug for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSet({})", self.text())
    }
}

/// Incremental construction of a canonical [`QSet`].
#[derive(Default)]
pub struct QSetBuilder {
    inner: QSet,
}

impl QSetBuilder {
    /// Adds `count` elements of the class of `e`; a zero count adds nothing.
    pub fn insert(&mut self, e: Entity, count: u64) -> Result<&mut Self> {
        self.inner.add_class(e, count)?;
        Ok(self)
    }

    pub fn with(mut self, e: Entity, count: u64) -> Result<Self> {
        self.insert(e, count)?;
        Ok(self)
    }

    pub fn build(self) -> QSet {
        self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_qset;

    fn q(s: &str) -> QSet {
        parse_qset(s).unwrap()
    }

    #[test]
    fn qc_examples() {
        assert_eq!(q("[]").qc(), Cardinal::ZERO);
        assert_eq!(q("[m:e*3]").qc(), Cardinal::new(3));
        assert_eq!(q("[m:e*2, M:A, [m:p]*2]").qc(), Cardinal::new(5));
    }

    #[test]
    fn qc_matches_flattened_enumeration() {
        // Oracle: expand every class into its individual occurrences.
        let x = q("[m:e*2, M:A, [m:p]*2]");
        let flattened: Vec<String> = x
            .classes()
            .flat_map(|(e, c)| std::iter::repeat_n(e.to_string(), c as usize))
            .collect();
        assert_eq!(flattened.len(), 5);
        assert_eq!(x.qc().get(), flattened.len() as u128);
    }

    #[test]
    fn is_set_examples() {
        assert!(Entity::Q(q("[]")).is_set());
        assert!(!Entity::Q(q("[m:e]")).is_set());
        assert!(Entity::Q(q("[[M:A], n:3]")).is_set());
        assert!(!Entity::Q(q("[[[m:e]], n:3]")).is_set());
    }

    #[test]
    fn set_qc_is_classical_cardinality() {
        let x = q("[[M:A], n:3, n:4, M:B]");
        assert!(x.is_set());
        assert_eq!(x.qc(), Cardinal::new(4));
    }

    #[test]
    fn member_examples() {
        let a = Entity::macro_atom("A").unwrap();
        assert!(q("[M:A, m:e]").member(&a).unwrap());
        assert!(q("[[m:e*2]*3]").member(&Entity::Q(q("[m:e*2]"))).unwrap());
        assert!(!q("[[m:e*2]*3]").member(&Entity::Q(q("[m:e]"))).unwrap());
        let err = q("[m:e*2]").member(&Entity::m_atom("e").unwrap());
        assert!(matches!(err, Err(Error::IllFormedFormula(_))));
    }

    #[test]
    fn member_species_counts_top_level_only() {
        let e = Species::new("e").unwrap();
        let p = Species::new("p").unwrap();
        assert_eq!(q("[m:e*3]").member_species(&e), Cardinal::new(3));
        assert_eq!(q("[m:e*3]").member_species(&p), Cardinal::ZERO);
        assert_eq!(q("[m:e*2, [m:e*5]]").member_species(&e), Cardinal::new(2));
    }

    #[test]
    fn empty_iff_zero_qc() {
        assert!(QSet::empty().is_empty());
        assert!(QSet::pure(Species::new("e").unwrap(), 0).is_empty());
        assert!(!q("[[]]").is_empty());
        assert_eq!(q("[[]]").qc(), Cardinal::ONE);
    }

    #[test]
    fn nested_sets_do_not_repeat() {
        assert_eq!(q("[[]*3]").text(), "[[]]");
        assert_eq!(q("[[M:A], [M:A]*2, [[m:e]]*2]").text(), "[[M:A], [[m:e]]*2]");
        assert_eq!(q("[[]*3]").qc(), Cardinal::ONE);
        let mut x = q("[m:e, [n:1]]");
        assert!(!x.is_set());
        x.remove_class(&Entity::m_atom("e").unwrap(), 1);
        assert!(x.is_set());
        x.validate().unwrap();
    }

    #[test]
    fn depth_limit_is_enforced() {
        let mut x = QSet::empty();
        for _ in 1..MAX_DEPTH {
            x = QSet::from_elements([(Entity::Q(x), 1)]).unwrap();
        }
        assert_eq!(x.depth(), MAX_DEPTH);
        let err = QSet::from_elements([(Entity::Q(x), 1)]).unwrap_err();
        assert!(matches!(err, Error::DepthExceeded { depth: 33, max: 32 }));
    }

    #[test]
    fn builder_merges_classes() {
        let e = Entity::m_atom("e").unwrap();
        let inner = q("[m:p]");
        let x = QSet::builder()
            .with(e.clone(), 1)
            .unwrap()
            .with(Entity::Q(inner.clone()), 1)
            .unwrap()
            .with(e, 2)
            .unwrap()
            .with(Entity::Q(q("[m:p*1]")), 2)
            .unwrap()
            .with(Entity::label(3), 1)
            .unwrap()
            .with(Entity::label(3), 1)
            .unwrap()
            .build();
        assert_eq!(x.text(), "[m:e*3, n:3, [m:p]*3]");
        x.validate().unwrap();
    }

    #[test]
    fn remove_class_recomputes_depth() {
        let mut x = q("[m:e, [[m:e]]]");
        assert_eq!(x.depth(), 3);
        let inner = Entity::Q(q("[[m:e]]"));
        assert_eq!(x.remove_class(&inner, 5), 1);
        assert_eq!(x.depth(), 1);
        assert_eq!(x.text(), "[m:e]");
        x.validate().unwrap();
    }
}
