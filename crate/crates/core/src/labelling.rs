//! Attaching integer labels to indiscernible objects.
//!
//! [`label`] repeatedly splits a strong singleton off a finite weak
//! singleton `[x]`, pairs it with the next natural number `m`, and stores
//! `⟨x', m⟩` in a warehouse `w`. The resulting pairs can be told apart by
//! their labels while their first coordinates stay indistinguishable, which
//! [`verify_weak_labelling`] checks.

use std::collections::HashSet;

use crate::algebra::{ordered_pair, strong_singleton_into, union_into, OrderedPair};
use crate::cardinal::Cardinal;
use crate::entity::{Entity, NatLabel};
use crate::error::{Error, Result};
use crate::qset::QSet;
use crate::relations::indist;

/// The output `w` of the labelling loop together with the number of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledWarehouse {
    w: QSet,
    n: Cardinal,
}

impl LabelledWarehouse {
    /// Wraps an arbitrary qset as a warehouse. Nothing is checked; use
    /// [`verify_weak_labelling`].
    pub fn from_parts(w: QSet, n: Cardinal) -> Self {
        LabelledWarehouse { w, n }
    }

    pub fn warehouse(&self) -> &QSet {
        &self.w
    }

    pub fn len(&self) -> Cardinal {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == Cardinal::ZERO
    }

    /// The stored pairs decoded as `(first coordinate, label)`, ordered by
    /// label.
    pub fn pairs(&self) -> Result<Vec<(Entity, NatLabel)>> {
        let mut out = Vec::with_capacity(self.w.class_count());
        for (encoding, count) in decode_elements(&self.w)? {
            let pair = OrderedPair::from_encoding(encoding.clone())?;
            let (first, second) = pair.coordinates();
            let Entity::Nat(label) = second else {
                return Err(Error::MalformedPair(format!(
                    "{encoding}: second coordinate is not a label"
                )));
            };
            for _ in 0..count {
                out.push((first.clone(), label));
            }
        }
        out.sort_by_key(|(_, l)| *l);
        Ok(out)
    }
}

fn decode_elements(w: &QSet) -> Result<Vec<(&QSet, u64)>> {
    if w.atoms().next().is_some() || w.macros().next().is_some() || w.labels().next().is_some() {
        return Err(Error::MalformedPair(format!(
            "{w}: warehouse elements must be ordered pairs"
        )));
    }
    Ok(w.nested().collect())
}

/// Labels the elements of a finite pure weak singleton.
///
/// Empty input yields an empty warehouse without entering the loop, since
/// the subtraction step has nothing to remove.
pub fn label(input: &QSet) -> Result<LabelledWarehouse> {
    if !input.is_pure() || input.class_count() > 1 {
        return Err(Error::NotPure(format!(
            "{input} has {} classes; labelling needs one species of m-atoms",
            input.class_count()
        )));
    }
    let n = input.qc();
    let mut rest = input.clone();
    let mut m: u64 = 0;
    let mut w = QSet::empty();
    while !rest.is_empty() {
        m += 1;
        let (x_prime, remainder) = strong_singleton_into(rest)?;
        rest = remainder;
        let pair = ordered_pair(&Entity::Q(x_prime.into_inner()), &Entity::label(m))?;
        w = union_into(w, &QSet::from_elements([(Entity::Q(pair.into_encoding()), 1)])?)?;
    }
    debug_assert_eq!(Cardinal::from(m), n);
    Ok(LabelledWarehouse { w, n })
}

/// Checks that the warehouse labels without individuating:
///
/// - every label is a distinct natural number,
/// - every first coordinate is a strong singleton and all of them are
///   pairwise indistinguishable,
/// - the stored pairs themselves are pairwise distinguishable.
///
/// Fails only if an element of `w` is not an ordered pair.
pub fn verify_weak_labelling(lw: &LabelledWarehouse) -> Result<bool> {
    let elements = decode_elements(&lw.w)?;
    if lw.w.qc() != lw.n {
        return Ok(false);
    }
    let mut labels = HashSet::with_capacity(elements.len());
    let mut first_of_all: Option<Entity> = None;
    for (encoding, count) in elements {
        // A repeated class is one pair stored twice, so its label repeats
        // and the two copies are indistinguishable.
        if count != 1 {
            return Ok(false);
        }
        let (first, second) = OrderedPair::from_encoding(encoding.clone())?.coordinates();
        let Entity::Nat(n) = second else {
            return Ok(false);
        };
        if !labels.insert(n) {
            return Ok(false);
        }
        match &first {
            Entity::Q(q) if q.qc() == Cardinal::ONE => {}
            _ => return Ok(false),
        }
        match &first_of_all {
            None => first_of_all = Some(first),
            Some(f) if indist(f, &first) => {}
            Some(_) => return Ok(false),
        }
    }
    // Distinct nested classes of a canonical qset are never indistinguishable,
    // so with every count at 1 the pairs are pairwise distinguishable.
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_qset;

    fn q(s: &str) -> QSet {
        parse_qset(s).unwrap()
    }

    #[test]
    fn three_indistinguishable_electrons() {
        let lw = label(&q("[m:e*3]")).unwrap();
        // Hand trace of the loop: m = 1, 2, 3 with [x] = [m:e*2], [m:e], [].
        assert_eq!(
            lw.warehouse().text(),
            "[[[[m:e]], [n:1, [m:e]]], [[[m:e]], [n:2, [m:e]]], [[[m:e]], [n:3, [m:e]]]]"
        );
        assert_eq!(lw.len(), Cardinal::new(3));
        assert_eq!(lw.warehouse().qc(), Cardinal::new(3));
        let pairs = lw.pairs().unwrap();
        let labels: Vec<u64> = pairs.iter().map(|(_, l)| l.value()).collect();
        assert_eq!(labels, vec![1, 2, 3]);
        assert!(pairs.iter().all(|(f, _)| f.to_string() == "[m:e]"));
        assert!(verify_weak_labelling(&lw).unwrap());
    }

    #[test]
    fn single_and_empty_inputs() {
        let lw = label(&q("[m:e*1]")).unwrap();
        assert_eq!(lw.pairs().unwrap().len(), 1);
        assert_eq!(lw.warehouse().text(), "[[[[m:e]], [n:1, [m:e]]]]");
        let empty = label(&QSet::empty()).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.warehouse().text(), "[]");
        assert!(verify_weak_labelling(&empty).unwrap());
    }

    #[test]
    fn rejects_anything_but_a_pure_weak_singleton() {
        for s in ["[m:e, m:p]", "[M:A]", "[n:1]", "[[m:e]*3]", "[m:e*2, M:A]"] {
            assert!(matches!(label(&q(s)), Err(Error::NotPure(_))), "{s}");
        }
    }

    #[test]
    fn duplicated_label_fails_verification() {
        let pair = ordered_pair(&Entity::Q(q("[m:e]")), &Entity::label(1)).unwrap();
        let w = QSet::from_elements([(Entity::Q(pair.into_encoding()), 2)]).unwrap();
        let lw = LabelledWarehouse::from_parts(w, Cardinal::new(2));
        assert!(!verify_weak_labelling(&lw).unwrap());
    }

    #[test]
    fn distinguishable_first_coordinates_fail_verification() {
        let a = ordered_pair(&Entity::Q(q("[m:e]")), &Entity::label(1)).unwrap();
        let b = ordered_pair(&Entity::Q(q("[m:p]")), &Entity::label(2)).unwrap();
        let w = QSet::from_elements([(Entity::Q(a.into_encoding()), 1), (Entity::Q(b.into_encoding()), 1)]).unwrap();
        assert!(!verify_weak_labelling(&LabelledWarehouse::from_parts(w, Cardinal::new(2))).unwrap());
    }

    #[test]
    fn non_singleton_first_coordinates_fail_verification() {
        let a = ordered_pair(&Entity::Q(q("[m:e*2]")), &Entity::label(1)).unwrap();
        let w = QSet::from_elements([(Entity::Q(a.into_encoding()), 1)]).unwrap();
        assert!(!verify_weak_labelling(&LabelledWarehouse::from_parts(w, Cardinal::ONE)).unwrap());
    }

    #[test]
    fn wrong_cardinal_fails_verification() {
        let lw = label(&q("[m:e*2]")).unwrap();
        let forged = LabelledWarehouse::from_parts(lw.warehouse().clone(), Cardinal::new(3));
        assert!(!verify_weak_labelling(&forged).unwrap());
    }

    #[test]
    fn malformed_elements_are_errors() {
        for s in ["[m:e]", "[[m:e]]", "[M:A]"] {
            let lw = LabelledWarehouse::from_parts(q(s), Cardinal::ONE);
            assert!(
                matches!(verify_weak_labelling(&lw), Err(Error::MalformedPair(_))),
                "{s}"
            );
        }
    }

    #[test]
    fn pairs_are_pairwise_distinguishable_but_firsts_are_not() {
        // Brute force over every pair of warehouse elements.
        let lw = label(&q("[m:e*6]")).unwrap();
        let elements: Vec<Entity> = lw.warehouse().classes().map(|(e, _)| e).collect();
        let firsts: Vec<Entity> = lw.pairs().unwrap().into_iter().map(|(f, _)| f).collect();
        for i in 0..elements.len() {
            for j in 0..elements.len() {
                assert_eq!(indist(&elements[i], &elements[j]), i == j);
                assert!(indist(&firsts[i], &firsts[j]));
            }
        }
    }

    #[test]
    fn label_is_deterministic() {
        let a = label(&q("[m:x*9]")).unwrap();
        let b = label(&q("[m:x*9]")).unwrap();
        assert_eq!(a.warehouse().text(), b.warehouse().text());
    }
}
