use std::fmt;
use std::sync::Arc;

use crate::Error;

/// Upper bound on the number of distinct variables in one problem instance.
pub const MAX_VARS: usize = 8;

/// What a symbol stands for in a summation problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// The variable the recurrence runs in (`n`, or `k` for Cauchy products).
    Recurrence,
    /// The bound summation variable (`k`, or `j`).
    Summation,
    /// Free parameters (`a`, `b`) and series arguments (`x`, `y`).
    Parameter,
}

/// Ordered, duplicate-free list of variable names. The order fixes the
/// graded-lexicographic monomial order and therefore every canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    roles: Vec<Role>,
}

/// Shared handle to a variable table; polynomials carry one.
pub type Vars = Arc<VarTable>;

impl VarTable {
    pub fn new<S: AsRef<str>>(entries: &[(S, Role)]) -> Result<Vars, Error> {
        let mut names = Vec::with_capacity(entries.len());
        let mut roles = Vec::with_capacity(entries.len());
        for (name, role) in entries {
            let name = name.as_ref().to_string();
            if names.contains(&name) {
                return Err(Error::Invalid(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            roles.push(*role);
        }
        if names.len() > MAX_VARS {
            return Err(Error::Invalid(format!(
                "{} variables exceed the supported maximum of {MAX_VARS}",
                names.len()
            )));
        }
        for role in [Role::Recurrence, Role::Summation] {
            if roles.iter().filter(|r| **r == role).count() > 1 {
                return Err(Error::Invalid(format!("more than one {role:?} variable")));
            }
        }
        Ok(Arc::new(VarTable { names, roles }))
    }

    /// Table of parameters only, in the given order.
    pub fn params<S: AsRef<str>>(names: &[S]) -> Result<Vars, Error> {
        let entries: Vec<(&str, Role)> = names.iter().map(|n| (n.as_ref(), Role::Parameter)).collect();
        VarTable::new(&entries)
    }

    /// Table for a summation problem: recurrence variable first, then the
    /// parameters, then the summation variable.
    pub fn problem<S: AsRef<str>>(sum_var: &str, rec_var: Option<&str>, params: &[S]) -> Result<Vars, Error> {
        let mut entries: Vec<(String, Role)> = Vec::new();
        if let Some(r) = rec_var {
            entries.push((r.to_string(), Role::Recurrence));
        }
        for p in params {
            entries.push((p.as_ref().to_string(), Role::Parameter));
        }
        entries.push((sum_var.to_string(), Role::Summation));
        VarTable::new(&entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, Error> {
        self.index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn role(&self, idx: usize) -> Role {
        self.roles[idx]
    }

    pub fn summation(&self) -> Option<usize> {
        self.roles.iter().position(|r| *r == Role::Summation)
    }

    pub fn recurrence(&self) -> Option<usize> {
        self.roles.iter().position(|r| *r == Role::Recurrence)
    }
}

impl fmt::Display for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

/// Two handles describe the same variables.
pub fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
