//! Constructions licensed by the axioms: pairs, separation, union,
//! difference, strong singletons, sub-qsets of a given quasi-cardinal, the
//! power-qset cardinal and Kuratowski ordered pairs.

use crate::cardinal::Cardinal;
use crate::entity::{Entity, Species};
use crate::error::{Error, Result};
use crate::qset::QSet;
use crate::relations::indist;

/// A qset with exactly one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongSingleton {
    inner: QSet,
}

impl StrongSingleton {
    /// The strong singleton holding one element of the class of `e`.
    pub fn of(e: Entity) -> Result<Self> {
        Ok(StrongSingleton {
            inner: QSet::from_elements([(e, 1)])?,
        })
    }

    pub fn from_qset(q: QSet) -> Option<Self> {
        (q.qc() == Cardinal::ONE).then_some(StrongSingleton { inner: q })
    }

    pub fn inner(&self) -> &QSet {
        &self.inner
    }

    pub fn into_inner(self) -> QSet {
        self.inner
    }

    /// A representative of the single element.
    pub fn element(&self) -> Entity {
        self.inner.classes().next().expect("qc = 1").0
    }
}

/// The weak pair of `x` and `y` relative to `universe`: every element of
/// the universe indistinguishable from `x` or from `y`, with full counts.
pub fn weak_pair(x: &Entity, y: &Entity, universe: &QSet) -> Result<QSet> {
    let mut hit_x = false;
    let mut hit_y = false;
    let mut out = QSet::builder();
    for (r, c) in universe.classes() {
        let is_x = indist(&r, x);
        let is_y = indist(&r, y);
        hit_x |= is_x;
        hit_y |= is_y;
        if is_x || is_y {
            out.insert(r, c)?;
        }
    }
    if !hit_x {
        return Err(Error::UniverseMiss(x.to_string()));
    }
    if !hit_y {
        return Err(Error::UniverseMiss(y.to_string()));
    }
    Ok(out.build())
}

/// `[x, y]` with each class at count 1, collapsing to `[x]` when `x ≡ y`.
pub fn strong_pair(x: &Entity, y: &Entity) -> Result<QSet> {
    let mut b = QSet::builder();
    b.insert(x.clone(), 1)?;
    if !indist(x, y) {
        b.insert(y.clone(), 1)?;
    }
    Ok(b.build())
}

/// Fixed menu of class-level predicates for separation. None of them can
/// tell two members of one ≡-class apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassPredicate {
    Always,
    Never,
    IsMAtom,
    IsMacro,
    IsLabel,
    IsQset,
    Species(Species),
    /// Nested qsets that are classical sets.
    IsSet,
}

impl ClassPredicate {
    pub fn holds(&self, representative: &Entity) -> bool {
        match self {
            ClassPredicate::Always => true,
            ClassPredicate::Never => false,
            ClassPredicate::IsMAtom => representative.is_m_atom(),
            ClassPredicate::IsMacro => matches!(representative, Entity::Macro(_)),
            ClassPredicate::IsLabel => matches!(representative, Entity::Nat(_)),
            ClassPredicate::IsQset => matches!(representative, Entity::Q(_)),
            ClassPredicate::Species(s) => matches!(representative, Entity::MAtom(t) if t == s),
            ClassPredicate::IsSet => matches!(representative, Entity::Q(q) if q.is_set()),
        }
    }
}

/// The sub-qset of `x` keeping every class, with its full count, whose
/// representative satisfies `pred`.
pub fn separation(x: &QSet, pred: &ClassPredicate) -> QSet {
    let mut out = x.clone();
    for (r, c) in x.classes() {
        if !pred.holds(&r) {
            out.remove_class(&r, c);
        }
    }
    out
}

/// Classwise union: counts of indistinguishable classes add, M-atoms and
/// labels merge as sets.
pub fn union(x: &QSet, y: &QSet) -> Result<QSet> {
    union_into(x.clone(), y)
}

/// [`union`] consuming its left operand, which avoids a copy when it is not
/// shared.
pub fn union_into(mut x: QSet, y: &QSet) -> Result<QSet> {
    for (r, c) in y.classes() {
        x.add_class(r, c)?;
    }
    Ok(x)
}

/// `x − s`: removes one element of the class of `s` from `x`.
pub fn difference(x: &QSet, s: &StrongSingleton) -> Result<QSet> {
    difference_into(x.clone(), s)
}

pub fn difference_into(mut x: QSet, s: &StrongSingleton) -> Result<QSet> {
    let e = s.element();
    if x.remove_class(&e, 1) == 0 {
        return Err(Error::NotAMember(e.to_string()));
    }
    Ok(x)
}

/// Splits one element off the first canonical class of `x`, returning the
/// strong singleton and the remainder.
pub fn strong_singleton_of(x: &QSet) -> Result<(StrongSingleton, QSet)> {
    strong_singleton_into(x.clone())
}

pub fn strong_singleton_into(x: QSet) -> Result<(StrongSingleton, QSet)> {
    let first = x.classes().next().ok_or(Error::EmptyQset)?.0;
    let s = StrongSingleton::of(first)?;
    let rest = difference_into(x, &s)?;
    Ok((s, rest))
}

/// A sub-qset of `x` with quasi-cardinal `beta`, filling classes in
/// canonical order.
pub fn sub_qset_of_card(x: &QSet, beta: Cardinal) -> Result<QSet> {
    let available = x.qc();
    if beta > available {
        return Err(Error::CardinalTooLarge {
            requested: beta.get(),
            available: available.get(),
        });
    }
    let mut remaining = beta.get();
    let mut out = QSet::builder();
    for (r, c) in x.classes() {
        if remaining == 0 {
            break;
        }
        let take = remaining.min(u128::from(c));
        out.insert(r, take as u64)?;
        remaining -= take;
    }
    Ok(out.build())
}

/// `qc(P(x)) = 2^qc(x)`.
pub fn power_qc(x: &QSet) -> Result<Cardinal> {
    x.qc().pow2()
}

/// Number of sub-qsets of `x` the model can tell apart: a class of count `c`
/// contributes `c + 1` choices (how many of its members to keep), since
/// which members are kept is not expressible.
pub fn distinguishable_subqsets(x: &QSet) -> Result<Cardinal> {
    x.classes().try_fold(Cardinal::ONE, |acc, (_, c)| {
        acc.checked_mul(Cardinal::from(c).checked_add(Cardinal::ONE)?)
    })
}

/// A Kuratowski ordered pair `[[a], [a, b]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPair {
    encoding: QSet,
}

/// Builds `⟨a, b⟩`. When `a ≡ b` both inner pairs coincide and the encoding
/// collapses to `[[a]]`.
pub fn ordered_pair(a: &Entity, b: &Entity) -> Result<OrderedPair> {
    let left = Entity::Q(strong_pair(a, a)?);
    let right = Entity::Q(strong_pair(a, b)?);
    Ok(OrderedPair {
        encoding: strong_pair(&left, &right)?,
    })
}

impl OrderedPair {
    pub fn encoding(&self) -> &QSet {
        &self.encoding
    }

    pub fn into_encoding(self) -> QSet {
        self.encoding
    }

    pub fn is_collapsed(&self) -> bool {
        self.encoding.class_count() == 1
    }

    /// Recognises a Kuratowski encoding and returns the pair.
    pub fn from_encoding(q: QSet) -> Result<OrderedPair> {
        decode(&q)?;
        Ok(OrderedPair { encoding: q })
    }

    /// The coordinates, up to ≡.
    pub fn coordinates(&self) -> (Entity, Entity) {
        decode(&self.encoding).expect("validated at construction")
    }

    pub fn first(&self) -> Entity {
        self.coordinates().0
    }

    pub fn second(&self) -> Entity {
        self.coordinates().1
    }
}

fn decode(q: &QSet) -> Result<(Entity, Entity)> {
    let bad = |why: &str| Error::MalformedPair(format!("{q}: {why}"));
    if q.atoms().next().is_some() || q.macros().next().is_some() || q.labels().next().is_some() {
        return Err(bad("elements must be qsets"));
    }
    let classes: Vec<(&QSet, u64)> = q.nested().collect();
    if classes.iter().any(|&(_, c)| c != 1) {
        return Err(bad("inner qsets must occur once"));
    }
    let is_strong = |s: &QSet| s.class_count() == s.qc().get() as usize;
    match classes.as_slice() {
        [(single, _)] => {
            if single.qc() != Cardinal::ONE {
                return Err(bad("collapsed pair must be [[a]]"));
            }
            let a = single.classes().next().expect("qc = 1").0;
            Ok((a.clone(), a))
        }
        [(x, _), (y, _)] => {
            let (single, double) = match (x.qc().get(), y.qc().get()) {
                (1, 2) => (*x, *y),
                (2, 1) => (*y, *x),
                _ => return Err(bad("expected [[a], [a, b]]")),
            };
            if !is_strong(double) {
                return Err(bad("inner pair has a repeated class"));
            }
            let a = single.classes().next().expect("qc = 1").0;
            let mut others = double.classes().map(|(e, _)| e).filter(|e| !indist(e, &a));
            let b = others.next().ok_or_else(|| bad("[a] is not contained in [a, b]"))?;
            if double.classes().filter(|(e, _)| indist(e, &a)).count() != 1 {
                return Err(bad("[a] is not contained in [a, b]"));
            }
            Ok((a, b))
        }
        _ => Err(bad("expected one or two inner qsets")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, parse_qset};
    use crate::relations::ext_eq;

    fn e(s: &str) -> Entity {
        parse(s).unwrap()
    }

    fn q(s: &str) -> QSet {
        parse_qset(s).unwrap()
    }

    fn single(s: &str) -> StrongSingleton {
        StrongSingleton::of(e(s)).unwrap()
    }

    #[test]
    fn weak_pair_examples() {
        let w = weak_pair(&e("M:A"), &e("M:B"), &q("[M:A, M:B, M:C]")).unwrap();
        assert_eq!((w.text(), w.qc().get()), ("[M:A, M:B]", 2));
        let w = weak_pair(&e("m:e"), &e("m:e"), &q("[m:e*5, m:p*2]")).unwrap();
        assert_eq!((w.text(), w.qc().get()), ("[m:e*5]", 5));
        let w = weak_pair(&e("m:e"), &e("m:p"), &q("[m:e*2, m:p*3]")).unwrap();
        assert_eq!((w.text(), w.qc().get()), ("[m:e*2, m:p*3]", 5));
    }

    #[test]
    fn weak_pair_requires_witnesses() {
        let u = q("[m:e*2]");
        assert!(matches!(weak_pair(&e("m:e"), &e("m:p"), &u), Err(Error::UniverseMiss(s)) if s == "m:p"));
        assert!(matches!(weak_pair(&e("M:A"), &e("m:e"), &u), Err(Error::UniverseMiss(s)) if s == "M:A"));
    }

    #[test]
    fn weak_pair_counts_match_oracle() {
        // Oracle: count universe occurrences indistinguishable from x or y.
        let u = q("[m:e*5, m:p*2, [m:e]*3, M:A]");
        for (x, y) in [("m:e", "m:e"), ("m:e", "[m:e]"), ("M:A", "m:p")] {
            let (x, y) = (e(x), e(y));
            let expected: u64 = u
                .classes()
                .filter(|(r, _)| indist(r, &x) || indist(r, &y))
                .map(|(_, c)| c)
                .sum();
            assert_eq!(weak_pair(&x, &y, &u).unwrap().qc().get(), u128::from(expected));
        }
    }

    #[test]
    fn strong_pair_examples() {
        assert_eq!(strong_pair(&e("n:1"), &e("n:2")).unwrap().text(), "[n:1, n:2]");
        assert_eq!(strong_pair(&e("m:e"), &e("m:e")).unwrap().text(), "[m:e]");
        assert_eq!(strong_pair(&e("[m:e]"), &e("[m:e]")).unwrap().text(), "[[m:e]]");
        assert_eq!(strong_pair(&e("m:e"), &e("m:p")).unwrap().text(), "[m:e, m:p]");
    }

    #[test]
    fn separation_examples() {
        let x = q("[m:e*2, M:A]");
        assert_eq!(separation(&x, &ClassPredicate::IsMAtom).text(), "[m:e*2]");
        assert_eq!(separation(&q("[m:e*2]"), &ClassPredicate::Never).text(), "[]");
        let p = ClassPredicate::Species(Species::new("p").unwrap());
        assert_eq!(separation(&q("[m:e*2, m:p*3]"), &p).text(), "[m:p*3]");
        let mixed = q("[m:e, M:A, n:2, [M:B], [m:e]*2]");
        assert_eq!(separation(&mixed, &ClassPredicate::IsSet).text(), "[[M:B]]");
        assert_eq!(separation(&mixed, &ClassPredicate::IsQset).text(), "[[M:B], [m:e]*2]");
        assert_eq!(separation(&mixed, &ClassPredicate::Always), mixed);
    }

    #[test]
    fn union_examples() {
        assert_eq!(union(&q("[m:e*2]"), &q("[m:e*3]")).unwrap().text(), "[m:e*5]");
        let x = q("[m:e, [m:p]*2, n:1]");
        assert_eq!(union(&QSet::empty(), &x).unwrap(), x);
        assert_eq!(union(&x, &QSet::empty()).unwrap(), x);
        assert_eq!(union(&q("[M:A]"), &q("[M:A]")).unwrap().text(), "[M:A]");
        assert_eq!(
            union(&q("[[m:p*1], n:1]"), &q("[[m:p], n:2]")).unwrap().text(),
            "[n:1, n:2, [m:p]*2]"
        );
    }

    #[test]
    fn union_leaves_operands_untouched() {
        let x = q("[m:e*2]");
        let alias = x.clone();
        let u = union(&x, &q("[m:e]")).unwrap();
        assert_eq!(u.text(), "[m:e*3]");
        assert_eq!(alias.text(), "[m:e*2]");
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference(&q("[m:e*3]"), &single("m:e")).unwrap().text(), "[m:e*2]");
        assert_eq!(difference(&q("[m:e*1]"), &single("m:e")).unwrap().text(), "[]");
        assert!(matches!(
            difference(&q("[m:p*2]"), &single("m:e")),
            Err(Error::NotAMember(_))
        ));
        assert_eq!(
            difference(&q("[[m:e]*2, M:A]"), &single("[m:e]")).unwrap().text(),
            "[M:A, [m:e]]"
        );
        assert_eq!(difference(&q("[M:A]"), &single("M:A")).unwrap().text(), "[]");
    }

    #[test]
    fn strong_singleton_examples() {
        let (s, rest) = strong_singleton_of(&q("[m:e*3]")).unwrap();
        assert_eq!((s.inner().text(), rest.text()), ("[m:e]", "[m:e*2]"));
        assert_eq!(union(s.inner(), &rest).unwrap(), q("[m:e*3]"));
        let (s, rest) = strong_singleton_of(&q("[M:A]")).unwrap();
        assert_eq!((s.inner().text(), rest.text()), ("[M:A]", "[]"));
        assert_eq!(strong_singleton_of(&QSet::empty()).unwrap_err(), Error::EmptyQset);
    }

    #[test]
    fn sub_qset_examples() {
        let x = q("[m:e*2, M:A]");
        assert_eq!(sub_qset_of_card(&x, Cardinal::ZERO).unwrap().text(), "[]");
        assert_eq!(sub_qset_of_card(&x, x.qc()).unwrap(), x);
        assert_eq!(sub_qset_of_card(&x, Cardinal::new(2)).unwrap().text(), "[m:e*2]");
        assert_eq!(sub_qset_of_card(&x, Cardinal::ONE).unwrap().text(), "[m:e]");
        assert!(matches!(
            sub_qset_of_card(&x, Cardinal::new(4)),
            Err(Error::CardinalTooLarge {
                requested: 4,
                available: 3
            })
        ));
    }

    #[test]
    fn power_qc_examples() {
        assert_eq!(power_qc(&QSet::empty()).unwrap(), Cardinal::ONE);
        assert_eq!(power_qc(&q("[m:e*3]")).unwrap(), Cardinal::new(8));
        assert_eq!(
            power_qc(&q("[m:e*4, m:p*4, M:A, M:B, [m:e]*2]")).unwrap(),
            Cardinal::new(4096)
        );
        assert!(matches!(power_qc(&q("[m:e*65]")), Err(Error::Overflow(_))));
        assert_eq!(power_qc(&q("[m:e*64]")).unwrap().get(), 1u128 << 64);
    }

    /// Oracle: enumerate sub-qsets as choice vectors (how many of each class
    /// to keep) and count the distinct canonical results.
    fn enumerate_subqsets(x: &QSet) -> usize {
        let classes: Vec<(Entity, u64)> = x.classes().collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut choice = vec![0u64; classes.len()];
        loop {
            let sub = QSet::from_elements(classes.iter().zip(&choice).map(|((e, _), &k)| (e.clone(), k))).unwrap();
            assert!(sub.is_subqset_of(x));
            seen.insert(sub.text().to_owned());
            let mut i = 0;
            loop {
                if i == classes.len() {
                    return seen.len();
                }
                if choice[i] < classes[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn distinguishable_subqsets_examples() {
        assert_eq!(enumerate_subqsets(&q("[m:e*3]")), 4);
        assert_eq!(distinguishable_subqsets(&q("[m:e*3]")).unwrap(), Cardinal::new(4));
        assert_eq!(distinguishable_subqsets(&q("[M:A, M:B]")).unwrap(), Cardinal::new(4));
        assert_eq!(distinguishable_subqsets(&QSet::empty()).unwrap(), Cardinal::ONE);
        for s in ["[m:e*2, m:p, M:A]", "[[m:e]*3, n:1, n:2]", "[m:e*4, [[]]*2]"] {
            let x = q(s);
            assert_eq!(
                distinguishable_subqsets(&x).unwrap().get(),
                enumerate_subqsets(&x) as u128,
                "{s}"
            );
        }
    }

    #[test]
    fn ordered_pair_examples() {
        let p = ordered_pair(&e("m:e"), &e("m:e")).unwrap();
        assert_eq!(p.encoding().text(), "[[m:e]]");
        assert!(p.is_collapsed());
        let p12 = ordered_pair(&e("n:1"), &e("n:2")).unwrap();
        let p21 = ordered_pair(&e("n:2"), &e("n:1")).unwrap();
        assert_eq!(p12.encoding().text(), "[[n:1, n:2], [n:1]]");
        assert_ne!(p12, p21);
        assert!(!indist(
            &Entity::Q(p12.encoding().clone()),
            &Entity::Q(p21.encoding().clone())
        ));
    }

    #[test]
    fn ordered_pair_coordinates_round_trip() {
        for (a, b) in [
            ("n:1", "n:2"),
            ("m:e", "M:A"),
            ("[m:e]", "n:7"),
            ("m:e", "m:e"),
            ("[]", "[[]]"),
        ] {
            let p = ordered_pair(&e(a), &e(b)).unwrap();
            let (x, y) = p.coordinates();
            assert!(indist(&x, &e(a)) && indist(&y, &e(b)), "{a} {b}");
            let again = OrderedPair::from_encoding(p.encoding().clone()).unwrap();
            assert_eq!(again, p);
        }
    }

    #[test]
    fn malformed_pairs_are_rejected() {
        for s in [
            "[]",
            "[m:e]",
            "[[m:e]*2]",
            "[[m:e, m:p]]",
            "[[m:e], [m:p, M:A]]",
            "[[m:e], [m:e*2]]",
            "[[m:e], [m:p], [M:A]]",
        ] {
            assert!(
                matches!(OrderedPair::from_encoding(q(s)), Err(Error::MalformedPair(_))),
                "{s}"
            );
        }
    }

    #[test]
    fn collapsed_pair_matches_nested_strong_pair() {
        for s in ["m:e", "[m:e*2]", "M:A"] {
            let a = e(s);
            let inner = Entity::Q(strong_pair(&a, &a).unwrap());
            let expected = strong_pair(&inner, &inner).unwrap();
            let p = ordered_pair(&a, &a).unwrap();
            assert!(ext_eq(&Entity::Q(p.into_encoding()), &Entity::Q(expected)).unwrap());
        }
    }

    #[test]
    fn pair_depth_is_bounded() {
        let mut x = QSet::empty();
        for _ in 1..crate::qset::MAX_DEPTH - 1 {
            x = QSet::from_elements([(Entity::Q(x), 1)]).unwrap();
        }
        let deep = Entity::Q(x);
        assert!(matches!(ordered_pair(&deep, &deep), Err(Error::DepthExceeded { .. })));
    }
}
