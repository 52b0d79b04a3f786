//! The kinds of things a qset can contain.

use std::fmt;

use crate::error::{Error, Result};
use crate::qset::QSet;

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The sort of an m-atom. Two m-atoms are indistinguishable exactly when
/// their species coincide; nothing finer can be said about them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Species(String);

impl Species {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Species(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Name of an M-atom, a classical urelement. Name equality is identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MAtomId(String);

impl MAtomId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(MAtomId(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MAtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An opaque natural-number label. Labels are classical sets: distinct
/// values are distinct objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NatLabel(pub u64);

impl NatLabel {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for NatLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Anything that can be an element of a qset.
///
/// `Entity` deliberately has no `PartialEq`: an m-atom admits no identity
/// statement. Use [`crate::relations::indist`] or
/// [`crate::relations::ext_eq`] instead, or compare canonical strings.
#[derive(Debug, Clone)]
pub enum Entity {
    MAtom(Species),
    Macro(MAtomId),
    Nat(NatLabel),
    Q(QSet),
}

impl Entity {
    pub fn m_atom(species: &str) -> Result<Entity> {
        Species::new(species).map(Entity::MAtom)
    }

    pub fn macro_atom(name: &str) -> Result<Entity> {
        MAtomId::new(name).map(Entity::Macro)
    }

    pub fn label(value: u64) -> Entity {
        Entity::Nat(NatLabel(value))
    }

    pub fn is_m_atom(&self) -> bool {
        matches!(self, Entity::MAtom(_))
    }

    pub fn as_qset(&self) -> Option<&QSet> {
        match self {
            Entity::Q(q) => Some(q),
            _ => None,
        }
    }

    /// Qset nesting depth; atoms have depth 0 and `[]` has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Entity::Q(q) => q.depth(),
            _ => 0,
        }
    }

    /// True iff no m-atom occurs anywhere inside the entity.
    pub fn is_set(&self) -> bool {
        match self {
            Entity::MAtom(_) => false,
            Entity::Macro(_) | Entity::Nat(_) => true,
            Entity::Q(q) => q.is_set(),
        }
    }

    /// Fails with [`Error::IllFormedFormula`] when the entity is an m-atom.
    pub(crate) fn require_identity(&self, context: &str) -> Result<()> {
        match self {
            Entity::MAtom(s) => Err(Error::IllFormedFormula(format!(
                "{context} is not defined for the m-atom m:{s}"
            ))),
            _ => Ok(()),
        }
    }
}

impl From<QSet> for Entity {
    fn from(q: QSet) -> Self {
        Entity::Q(q)
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::print_canonical(self))
    }
}
