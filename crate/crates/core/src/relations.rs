//! Indistinguishability, extensional equality and the quotient by ≡.

use std::collections::HashMap;

use crate::cardinal::Cardinal;
use crate::entity::Entity;
use crate::error::Result;
use crate::qset::QSet;

/// The quotient `x/≡`: one representative per class with its count.
#[derive(Debug, Clone)]
pub struct QuotientView {
    pub classes: Vec<(Entity, Cardinal)>,
}

impl QuotientView {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Sum of the class counts.
    pub fn total(&self) -> Cardinal {
        Cardinal::new(self.classes.iter().map(|(_, c)| c.get()).sum())
    }
}

pub fn quotient(x: &QSet) -> QuotientView {
    QuotientView {
        classes: x.classes().map(|(e, c)| (e, Cardinal::from(c))).collect(),
    }
}

/// `x ≡ y`.
///
/// m-atoms are indistinguishable when their species agree, M-atoms and
/// labels only when identical, and qsets under weak extensionality. Entities
/// of different kinds are never indistinguishable.
pub fn indist(x: &Entity, y: &Entity) -> bool {
    indist_in(x, y, &mut Memo::default())
}

/// Verdicts on pairs of qset nodes already compared during one query. The
/// two-way class matching otherwise revisits shared sub-qsets once per
/// direction at every level.
#[derive(Default)]
struct Memo(HashMap<(usize, usize), bool>);

fn indist_in(x: &Entity, y: &Entity, memo: &mut Memo) -> bool {
    match (x, y) {
        (Entity::MAtom(a), Entity::MAtom(b)) => a == b,
        (Entity::Macro(a), Entity::Macro(b)) => a == b,
        (Entity::Nat(a), Entity::Nat(b)) => a == b,
        (Entity::Q(a), Entity::Q(b)) => weak_ext_in(a, b, memo),
        _ => false,
    }
}

/// Weak extensionality: every class of `x` is matched by an
/// indistinguishable class of `y` with the same count, and conversely.
///
/// Classes are matched by search over the quotients rather than by comparing
/// canonical text, so this stays an independent route to `≡` on qsets.
pub fn weak_ext_indist(x: &QSet, y: &QSet) -> bool {
    weak_ext_in(x, y, &mut Memo::default())
}

fn weak_ext_in(x: &QSet, y: &QSet, memo: &mut Memo) -> bool {
    if x.class_count() != y.class_count() || x.qc() != y.qc() {
        return false;
    }
    let key = (x.node_id(), y.node_id());
    if let Some(&v) = memo.0.get(&key) {
        return v;
    }
    let qx = quotient(x);
    let qy = quotient(y);
    let v = covers(&qx, &qy, memo) && covers(&qy, &qx, memo);
    memo.0.insert(key, v);
    v
}

fn covers(from: &QuotientView, to: &QuotientView, memo: &mut Memo) -> bool {
    from.classes.iter().all(|(r, c)| {
        to.classes
            .iter()
            .any(|(r2, c2)| c == c2 && same_kind(r, r2) && indist_in(r, r2, memo))
    })
}

fn same_kind(a: &Entity, b: &Entity) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

/// `x =_E y`, defined only when neither side is an m-atom.
///
/// On qsets this is structural equality of canonical forms, compared field
/// by field.
pub fn ext_eq(x: &Entity, y: &Entity) -> Result<bool> {
    x.require_identity("extensional equality")?;
    y.require_identity("extensional equality")?;
    Ok(match (x, y) {
        (Entity::Macro(a), Entity::Macro(b)) => a == b,
        (Entity::Nat(a), Entity::Nat(b)) => a == b,
        (Entity::Q(a), Entity::Q(b)) => structural_eq(a, b),
        _ => false,
    })
}

fn structural_eq(a: &QSet, b: &QSet) -> bool {
    a.atoms().eq(b.atoms())
        && a.macros().eq(b.macros())
        && a.labels().eq(b.labels())
        && a.class_count() == b.class_count()
        && a.nested()
            .zip(b.nested())
            .all(|((qa, ca), (qb, cb))| ca == cb && structural_eq(qa, qb))
}

/// Every element of `x` is indistinguishable from every element of `y`.
/// Vacuously true when either is empty.
pub fn sim(x: &QSet, y: &QSet) -> bool {
    let qy = quotient(y);
    x.classes().all(|(a, _)| qy.classes.iter().all(|(b, _)| indist(&a, b)))
}

/// Similar and of equal quasi-cardinal.
pub fn qsim(x: &QSet, y: &QSet) -> bool {
    sim(x, y) && x.qc() == y.qc()
}
