//! Evidential networks: variables, weighted formula beliefs and
//! observations, evaluated on the full joint frame.

use serde::{Deserialize, Serialize};

use crate::combination::{combine_all_inspect, ConflictReport};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::frame::{is_identifier, Frame, Variable};
use crate::mass::{Marginal, MassFunction};

/// Labels starting with this prefix mark hard-exception links, which
/// weak-exception mode removes.
pub const HARD_EXCEPTION_PREFIX: &str = "exc_";

#[derive(Clone, Debug, PartialEq)]
pub struct Belief {
    pub label: String,
    pub formula: Formula,
    pub weight: f64,
}

impl Belief {
    pub fn new(label: impl Into<String>, formula: Formula, weight: f64) -> Self {
        Belief { label: label.into(), formula, weight }
    }

    pub fn is_hard_exception(&self) -> bool {
        self.label.starts_with(HARD_EXCEPTION_PREFIX)
    }
}

/// A validated network. Every formula compiles on the network frame,
/// labels are unique identifiers and weights lie in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    name: String,
    frame: Frame,
    beliefs: Vec<Belief>,
    observations: Vec<Formula>,
}

impl NetworkSpec {
    pub fn new(
        name: impl Into<String>,
        variables: Vec<Variable>,
        beliefs: Vec<Belief>,
        observations: Vec<Formula>,
    ) -> Result<Self> {
        let frame = Frame::new(variables)?;
        let spec = NetworkSpec { name: name.into(), frame, beliefs, observations };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (i, b) in self.beliefs.iter().enumerate() {
            if !is_identifier(&b.label) {
                return Err(Error::InvalidNetwork(format!("label `{}` is not an identifier", b.label)));
            }
            if self.beliefs[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::InvalidNetwork(format!("duplicate label `{}`", b.label)));
            }
            if !(0.0..=1.0).contains(&b.weight) {
                return Err(Error::WeightOutOfRange(b.weight));
            }
            b.formula.subframe_of(&self.frame)?;
        }
        for o in &self.observations {
            o.subframe_of(&self.frame)?;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn variables(&self) -> &[Variable] {
        self.frame.variables()
    }

    pub fn beliefs(&self) -> &[Belief] {
        &self.beliefs
    }

    pub fn observations(&self) -> &[Formula] {
        &self.observations
    }

    pub fn belief(&self, label: &str) -> Option<&Belief> {
        self.beliefs.iter().find(|b| b.label == label)
    }

    pub fn with_belief(&self, belief: Belief) -> Result<Self> {
        let mut next = self.clone();
        next.beliefs.push(belief);
        next.validate()?;
        Ok(next)
    }

    pub fn with_observation(&self, observation: Formula) -> Result<Self> {
        self.with_observations([observation])
    }

    pub fn with_observations(&self, observations: impl IntoIterator<Item = Formula>) -> Result<Self> {
        let mut next = self.clone();
        next.observations.extend(observations);
        next.validate()?;
        Ok(next)
    }

    /// The same network with its observation list replaced.
    pub fn observing(&self, observations: Vec<Formula>) -> Result<Self> {
        let mut next = self.clone();
        next.observations = observations;
        next.validate()?;
        Ok(next)
    }

    pub fn without_observations(&self) -> Self {
        NetworkSpec { observations: Vec::new(), ..self.clone() }
    }

    /// Weak-exception variant: drops the hard-exception links.
    pub fn without_hard_exceptions(&self) -> Self {
        NetworkSpec {
            beliefs: self.beliefs.iter().filter(|b| !b.is_hard_exception()).cloned().collect(),
            ..self.clone()
        }
    }

    pub fn with_exception_mode(&self, mode: ExceptionMode) -> Self {
        match mode {
            ExceptionMode::Hard => self.clone(),
            ExceptionMode::Weak => self.without_hard_exceptions(),
        }
    }

    /// One simple support function per belief and observation, each on the
    /// subframe of the variables it mentions. Beliefs come first, in
    /// declaration order, then observations.
    pub fn mass_functions(&self) -> Result<Vec<MassFunction>> {
        let weighted = self
            .beliefs
            .iter()
            .map(|b| (&b.formula, b.weight))
            .chain(self.observations.iter().map(|o| (o, 1.0)));
        weighted
            .map(|(f, w)| f.weighted_belief(w, &f.subframe_of(&self.frame)?))
            .collect()
    }
}

/// How exceptions to a default are encoded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionMode {
    /// An exception asserts the opposite conclusion.
    #[default]
    Hard,
    /// An exception only disables the default.
    Weak,
}

impl std::str::FromStr for ExceptionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hard" => Ok(ExceptionMode::Hard),
            "weak" => Ok(ExceptionMode::Weak),
            other => Err(Error::InvalidNetwork(format!("unknown exception mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableMarginal {
    pub variable: String,
    #[serde(flatten)]
    pub marginal: Marginal,
}

/// Per-variable marginals of the combined joint belief function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationResult {
    pub marginals: Vec<VariableMarginal>,
    pub conflict: ConflictReport,
    pub joint_focal_count: usize,
}

impl EvaluationResult {
    pub fn marginal(&self, variable: &str) -> Option<Marginal> {
        self.marginals.iter().find(|v| v.variable == variable).map(|v| v.marginal)
    }
}

/// Combines every belief and observation on the joint frame with Dempster's
/// rule and projects onto each variable.
pub fn evaluate(net: &NetworkSpec) -> Result<EvaluationResult> {
    evaluate_inspect(net, |_| {})
}

/// [`evaluate`], handing every extended input and intermediate joint mass
/// function to `inspect`.
pub fn evaluate_inspect(net: &NetworkSpec, inspect: impl FnMut(&MassFunction)) -> Result<EvaluationResult> {
    let masses = net.mass_functions()?;
    let (joint, conflict) = combine_all_inspect(&masses, net.frame(), true, inspect)?;
    summarize(net, &joint, conflict)
}

/// Unnormalized evaluation: never fails on conflict. Returns the result
/// (marginals ignore the empty-set mass) and the joint mass left on `∅`.
pub fn evaluate_unnormalized(net: &NetworkSpec) -> Result<(EvaluationResult, f64)> {
    let masses = net.mass_functions()?;
    let (joint, conflict) = combine_all_inspect(&masses, net.frame(), false, |_| {})?;
    let empty = joint.empty_mass();
    Ok((summarize(net, &joint, conflict)?, empty))
}

fn summarize(net: &NetworkSpec, joint: &MassFunction, conflict: ConflictReport) -> Result<EvaluationResult> {
    let marginals = net
        .variables()
        .iter()
        .map(|v| {
            Ok(VariableMarginal {
                variable: v.name().to_owned(),
                marginal: joint.marginal_summary(v.name())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationResult {
        marginals,
        conflict,
        joint_focal_count: joint.focal_elements().len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub weight: f64,
    pub marginal: Marginal,
}

/// Evaluates `build(w)` with `observations` for every `w` in `weights` and
/// returns the marginal of `probe` at each point.
///
/// A weight of exactly 1 may make the combination impossible; that case
/// surfaces as [`Error::TotalConflict`].
pub fn limit_sweep(
    build: impl Fn(f64) -> NetworkSpec,
    weights: &[f64],
    observations: &[Formula],
    probe: &str,
) -> Result<Vec<SweepPoint>> {
    weights
        .iter()
        .map(|&w| {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange(w));
            }
            let net = build(w).with_observations(observations.iter().cloned())?;
            let result = evaluate(&net)?;
            let marginal = result
                .marginal(probe)
                .ok_or_else(|| Error::UnknownVariable(probe.to_owned()))?;
            Ok(SweepPoint { weight: w, marginal })
        })
        .collect()
}
