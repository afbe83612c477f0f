//! Variable contexts shared by jets, ideals and systems.
//!
//! A context fixes an ordered list of base variables (the `x` block), an
//! ordered list of unknowns (the `y` block) and optionally one deformation
//! parameter `t`.  Monomial exponent vectors are always indexed in that
//! order: `x` first, then `y`, then `t`.  The parameter `t` carries weight
//! zero: truncation orders and valuations count `x` and `y` exponents only,
//! so a jet may hold arbitrarily high (but finite) powers of `t` at any
//! truncation order.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Error raised by [`VarContext::new`] for malformed variable lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextError {
    /// A variable name is empty or does not match `[a-zA-Z][a-zA-Z0-9_]*`.
    BadName(String),
    /// The same name appears twice across the x/y/t blocks.
    DuplicateName(String),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::BadName(n) => write!(f, "invalid variable name `{}`", n),
            ContextError::DuplicateName(n) => write!(f, "duplicate variable name `{}`", n),
        }
    }
}

impl core::error::Error for ContextError {}

/// Ordered variable lists for one computation.
///
/// Equality is structural; two contexts are interchangeable exactly when all
/// three blocks match.  Contexts are small and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    x_vars: Vec<String>,
    y_vars: Vec<String>,
    t_var: Option<String>,
}

fn name_ok(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarContext {
    /// Builds a context, validating names and uniqueness across all blocks.
    pub fn new<S1: Into<String>, S2: Into<String>>(
        x_vars: impl IntoIterator<Item = S1>,
        y_vars: impl IntoIterator<Item = S2>,
        t_var: Option<&str>,
    ) -> Result<Self, ContextError> {
        let x_vars: Vec<String> = x_vars.into_iter().map(Into::into).collect();
        let y_vars: Vec<String> = y_vars.into_iter().map(Into::into).collect();
        let t_var: Option<String> = t_var.map(String::from);
        let mut seen: Vec<&str> = Vec::new();
        for name in x_vars
            .iter()
            .chain(y_vars.iter())
            .chain(t_var.iter())
        {
            if !name_ok(name) {
                return Err(ContextError::BadName(name.clone()));
            }
            if seen.contains(&name.as_str()) {
                return Err(ContextError::DuplicateName(name.clone()));
            }
            seen.push(name);
        }
        Ok(VarContext { x_vars, y_vars, t_var })
    }

    /// Context with only x-variables (used by ideals and base-ring jets).
    pub fn x_only<S: Into<String>>(x_vars: impl IntoIterator<Item = S>) -> Result<Self, ContextError> {
        Self::new(x_vars, core::iter::empty::<String>(), None)
    }

    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    pub fn y_vars(&self) -> &[String] {
        &self.y_vars
    }

    pub fn t_var(&self) -> Option<&str> {
        self.t_var.as_deref()
    }

    pub fn num_x(&self) -> usize {
        self.x_vars.len()
    }

    pub fn num_y(&self) -> usize {
        self.y_vars.len()
    }

    /// Total number of exponent slots in a monomial over this context.
    pub fn num_vars(&self) -> usize {
        self.x_vars.len() + self.y_vars.len() + usize::from(self.t_var.is_some())
    }

    /// Index of the weight-zero `t` slot, if present (always the last slot).
    pub fn t_index(&self) -> Option<usize> {
        self.t_var.as_ref().map(|_| self.num_vars() - 1)
    }

    /// Number of slots that count toward the truncation degree.
    pub fn weighted_len(&self) -> usize {
        self.x_vars.len() + self.y_vars.len()
    }

    /// Resolves a variable name to its exponent-slot index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        let nx = self.x_vars.len();
        if let Some(i) = self.x_vars.iter().position(|v| v == name) {
            return Some(i);
        }
        if let Some(i) = self.y_vars.iter().position(|v| v == name) {
            return Some(nx + i);
        }
        match &self.t_var {
            Some(t) if t == name => Some(self.num_vars() - 1),
            _ => None,
        }
    }

    /// Name of the variable sitting at exponent-slot `idx`.
    pub fn name_of(&self, idx: usize) -> &str {
        let nx = self.x_vars.len();
        let ny = self.y_vars.len();
        if idx < nx {
            &self.x_vars[idx]
        } else if idx < nx + ny {
            &self.y_vars[idx - nx]
        } else {
            self.t_var.as_deref().expect("slot index out of range")
        }
    }

    /// The same context with the y-block removed (where assignments live).
    pub fn without_y(&self) -> VarContext {
        VarContext {
            x_vars: self.x_vars.clone(),
            y_vars: Vec::new(),
            t_var: self.t_var.clone(),
        }
    }

    /// The x-block alone, as its own context.
    pub fn x_part(&self) -> VarContext {
        VarContext {
            x_vars: self.x_vars.clone(),
            y_vars: Vec::new(),
            t_var: None,
        }
    }

    /// Replaces the y-block wholesale (names must stay valid and unique).
    pub fn with_y_vars<S: Into<String>>(
        &self,
        y_vars: impl IntoIterator<Item = S>,
    ) -> Result<VarContext, ContextError> {
        VarContext::new(
            self.x_vars.iter().cloned(),
            y_vars.into_iter().map(Into::into).collect::<Vec<_>>(),
            self.t_var.as_deref(),
        )
    }

    /// Whether `other` has the same x-block and t-slot (y-blocks may differ).
    pub fn same_base(&self, other: &VarContext) -> bool {
        self.x_vars == other.x_vars && self.t_var == other.t_var
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_names() {
        assert!(matches!(
            VarContext::x_only(["1x"]),
            Err(ContextError::BadName(_))
        ));
        assert!(matches!(
            VarContext::x_only([""]),
            Err(ContextError::BadName(_))
        ));
        assert!(VarContext::x_only(["x_1"]).is_ok());
    }

    #[test]
    fn rejects_duplicates_across_blocks() {
        let err = VarContext::new(["x"], ["x"], None).unwrap_err();
        assert_eq!(err, ContextError::DuplicateName("x".into()));
    }

    #[test]
    fn slot_layout_is_x_then_y_then_t() {
        let ctx = VarContext::new(["x1", "x2"], ["y"], Some("t")).unwrap();
        assert_eq!(ctx.index_of("x2"), Some(1));
        assert_eq!(ctx.index_of("y"), Some(2));
        assert_eq!(ctx.index_of("t"), Some(3));
        assert_eq!(ctx.t_index(), Some(3));
        assert_eq!(ctx.weighted_len(), 3);
        assert_eq!(ctx.name_of(3), "t");
    }
}
