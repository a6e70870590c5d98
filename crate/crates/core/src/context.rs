//! Typing contexts.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ty::Type;

/// An ordered association of term variables to types; a name occurs at most
/// once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<(String, Type)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicateBinding(pub String);

impl fmt::Display for DuplicateBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variable `{}` is already bound in the context", self.0)
    }
}

impl core::error::Error for DuplicateBinding {}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_bindings<S: Into<String>>(
        bindings: impl IntoIterator<Item = (S, Type)>,
    ) -> Result<Context, DuplicateBinding> {
        let mut ctx = Context::new();
        for (name, ty) in bindings {
            ctx.insert(name, ty)?;
        }
        Ok(ctx)
    }

    pub fn insert(&mut self, name: impl Into<String>, ty: Type) -> Result<(), DuplicateBinding> {
        let name = name.into();
        if self.contains(&name) {
            return Err(DuplicateBinding(name));
        }
        self.entries.push((name, ty));
        Ok(())
    }

    /// A copy of the context extended with `name : ty`.
    pub fn with(&self, name: impl Into<String>, ty: Type) -> Result<Context, DuplicateBinding> {
        let mut ctx = self.clone();
        ctx.insert(name, ty)?;
        Ok(ctx)
    }

    pub fn remove(&mut self, name: &str) -> Option<Type> {
        let i = self.entries.iter().position(|(n, _)| n == name)?;
        Some(self.entries.remove(i).1)
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    /// Type variables free in some entry.
    pub fn free_type_vars(&self) -> BTreeSet<String> {
        self.entries
            .iter()
            .flat_map(|(_, t)| t.free_vars())
            .collect()
    }

    pub fn has_free_type_var(&self, x: &str) -> bool {
        self.entries.iter().any(|(_, t)| t.has_free(x))
    }

    /// Same domain and α-equivalent types, in any order.
    pub fn equiv(&self, other: &Context) -> bool {
        self.len() == other.len()
            && self
                .iter()
                .all(|(n, t)| other.lookup(n).is_some_and(|u| t.alpha_eq(u)))
    }

    pub fn map_types(&self, f: impl Fn(&Type) -> Type) -> Context {
        Context {
            entries: self.entries.iter().map(|(n, t)| (n.clone(), f(t))).collect(),
        }
    }
}

/// `x : A, y : B`; the empty context prints as nothing.
impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n} : {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        let mut ctx = Context::new();
        ctx.insert("x", Type::var("X")).unwrap();
        assert_eq!(
            ctx.insert("x", Type::var("Y")),
            Err(DuplicateBinding("x".into()))
        );
        assert_eq!(ctx.lookup("x"), Some(&Type::var("X")));
        assert_eq!(ctx.lookup("y"), None);
    }

    #[test]
    fn equivalence_ignores_order_and_bound_names() {
        let a = Context::from_bindings([
            ("x", Type::forall("X", Type::var("X"))),
            ("y", Type::var("Y")),
        ])
        .unwrap();
        let b = Context::from_bindings([
            ("y", Type::var("Y")),
            ("x", Type::forall("Z", Type::var("Z"))),
        ])
        .unwrap();
        assert!(a.equiv(&b));
    }
}
