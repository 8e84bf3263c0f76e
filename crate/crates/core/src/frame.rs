use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state_set::StateSet;

/// Largest number of binary variables a frame may hold. A joint state set
/// is a bitset of `2^n` bits, so 24 variables cap one set at 2 MiB.
pub const MAX_VARIABLES: usize = 24;

/// Name of a binary variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Variable(name))
        } else {
            Err(Error::InvalidVariableName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Variable {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Variable::new(value)
    }
}

impl From<Variable> for String {
    fn from(value: Variable) -> Self {
        value.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Letters, digits and underscores, not starting with a digit.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered set of binary variables. Configuration `i` assigns bit `k` of
/// `i` to `variables[k]`.
///
/// Frames are cheap to clone; equality compares the variable lists.
#[derive(Clone)]
pub struct Frame {
    vars: Arc<[Variable]>,
}

impl Frame {
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> Result<Self> {
        let vars: Vec<Variable> = vars.into_iter().collect();
        if vars.is_empty() || vars.len() > MAX_VARIABLES {
            return Err(Error::FrameSize { got: vars.len(), max: MAX_VARIABLES });
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.0.clone()));
            }
        }
        Ok(Frame { vars: vars.into() })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let vars = names
            .iter()
            .map(|n| Variable::new(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(vars)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of configurations, `2^n`.
    pub fn size(&self) -> usize {
        1usize << self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.0 == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Positions of every variable of `self` inside `other`, or `None` when
    /// some variable is missing from `other`.
    pub fn positions_in(&self, other: &Frame) -> Option<Vec<usize>> {
        self.vars.iter().map(|v| other.index_of(&v.0)).collect()
    }

    pub fn is_subframe_of(&self, other: &Frame) -> bool {
        self.positions_in(other).is_some()
    }

    /// The frame made of the named variables, ordered as in `self`.
    pub fn subframe<S: AsRef<str>>(&self, names: &[S]) -> Result<Frame> {
        for n in names {
            if !self.contains(n.as_ref()) {
                return Err(Error::UnknownVariable(n.as_ref().to_owned()));
            }
        }
        Frame::new(
            self.vars
                .iter()
                .filter(|v| names.iter().any(|n| n.as_ref() == v.0))
                .cloned(),
        )
    }

    pub fn full(&self) -> StateSet {
        StateSet::full(self)
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self)
    }

    /// The configurations where `name` takes `value`.
    pub fn literal(&self, name: &str, value: bool) -> Result<StateSet> {
        let k = self
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))?;
        let set = StateSet::variable_true(self, k);
        Ok(if value { set } else { set.complement() })
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vars.iter().map(|v| &v.0)).finish()
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&v.0)?;
        }
        f.write_str("}")
    }
}
