use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combination::marginalize;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::state_set::StateSet;

/// Tolerance on `Σ m = 1`.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Focal elements lighter than this are dropped after every combination.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// A basic belief assignment over one frame: a list of distinct focal
/// state sets with positive masses summing to one.
///
/// The empty set may only carry mass in the output of an unnormalized
/// conjunctive combination, where it holds the conflict.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: Vec<(StateSet, f64)>,
}

/// Merges equal focal sets by summing their masses, keeping first-seen order.
#[derive(Default)]
pub(crate) struct FocalAccumulator {
    index: HashMap<StateSet, usize>,
    focal: Vec<(StateSet, f64)>,
}

impl FocalAccumulator {
    pub(crate) fn add(&mut self, set: StateSet, mass: f64) {
        match self.index.get(&set) {
            Some(&i) => self.focal[i].1 += mass,
            None => {
                self.index.insert(set.clone(), self.focal.len());
                self.focal.push((set, mass));
            }
        }
    }

    /// Removes and returns the mass sitting on the empty set.
    pub(crate) fn take_empty(&mut self) -> f64 {
        match self.focal.iter().position(|(s, _)| s.is_empty()) {
            Some(i) => {
                let (_, mass) = self.focal.remove(i);
                self.index = self.focal.iter().enumerate().map(|(j, (s, _))| (s.clone(), j)).collect();
                mass
            }
            None => 0.0,
        }
    }

    pub(crate) fn finish(self, frame: &Frame, scale: f64) -> MassFunction {
        let focal = self
            .focal
            .into_iter()
            .map(|(s, m)| (s, m * scale))
            .filter(|&(_, m)| m >= PRUNE_THRESHOLD)
            .collect();
        MassFunction { frame: frame.clone(), focal }
    }
}

impl MassFunction {
    /// Validates and deduplicates a focal list. Zero masses are dropped.
    pub fn new(frame: &Frame, focal: impl IntoIterator<Item = (StateSet, f64)>) -> Result<Self> {
        let mut acc = FocalAccumulator::default();
        let mut total = 0.0;
        for (set, mass) in focal {
            if set.frame() != frame {
                return Err(Error::FrameMismatch);
            }
            if !mass.is_finite() || mass < 0.0 {
                return Err(Error::InvalidMass(format!("mass {mass} is negative or not finite")));
            }
            total += mass;
            if mass > 0.0 {
                acc.add(set, mass);
            }
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMass(format!("masses sum to {total}, not 1")));
        }
        let focal = acc.focal;
        Ok(MassFunction { frame: frame.clone(), focal })
    }

    /// All mass on the tautology.
    pub fn vacuous(frame: &Frame) -> Self {
        MassFunction { frame: frame.clone(), focal: vec![(StateSet::full(frame), 1.0)] }
    }

    /// `m(focus) = weight`, `m(Ω) = 1 - weight`.
    pub fn simple_support(frame: &Frame, focus: StateSet, weight: f64) -> Result<Self> {
        if focus.frame() != frame {
            return Err(Error::FrameMismatch);
        }
        if focus.is_empty() {
            return Err(Error::EmptyFocus);
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::WeightOutOfRange(weight));
        }
        let focal = if weight == 0.0 || focus.is_full() {
            vec![(StateSet::full(frame), 1.0)]
        } else if weight == 1.0 {
            vec![(focus, 1.0)]
        } else {
            vec![(focus, weight), (StateSet::full(frame), 1.0 - weight)]
        };
        Ok(MassFunction { frame: frame.clone(), focal })
    }

    pub(crate) fn from_parts(frame: &Frame, focal: Vec<(StateSet, f64)>) -> Self {
        MassFunction { frame: frame.clone(), focal }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn focal_elements(&self) -> &[(StateSet, f64)] {
        &self.focal
    }

    /// Mass on exactly `set` (zero when `set` is not focal).
    pub fn mass_of(&self, set: &StateSet) -> f64 {
        self.focal.iter().filter(|(s, _)| s == set).map(|(_, m)| m).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.iter().map(|(_, m)| m).sum()
    }

    /// Mass on the empty set (non-zero only for unnormalized results).
    pub fn empty_mass(&self) -> f64 {
        self.focal.iter().filter(|(s, _)| s.is_empty()).map(|(_, m)| m).sum()
    }

    pub fn is_vacuous(&self) -> bool {
        self.focal.len() == 1 && self.focal[0].0.is_full()
    }

    /// Hygiene check for normalized mass functions: masses positive and
    /// summing to one, no duplicate and no empty focal sets.
    pub fn check_normalized(&self) -> Result<()> {
        let total = self.total_mass();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMass(format!("masses sum to {total}")));
        }
        for (i, (set, mass)) in self.focal.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidMass("empty focal set".into()));
            }
            if *mass <= 0.0 {
                return Err(Error::InvalidMass(format!("non-positive mass {mass}")));
            }
            if self.focal[..i].iter().any(|(s, _)| s == set) {
                return Err(Error::InvalidMass("duplicate focal set".into()));
            }
        }
        Ok(())
    }

    /// `bel(A)`: total mass of non-empty focal sets included in `A`.
    pub fn belief(&self, a: &StateSet) -> Result<f64> {
        if a.frame() != &self.frame {
            return Err(Error::FrameMismatch);
        }
        Ok(self
            .focal
            .iter()
            .filter(|(s, _)| !s.is_empty() && s.subset(a))
            .map(|(_, m)| m)
            .sum())
    }

    /// `pl(A)`: total mass of focal sets meeting `A`.
    pub fn plausibility(&self, a: &StateSet) -> Result<f64> {
        if a.frame() != &self.frame {
            return Err(Error::FrameMismatch);
        }
        Ok(self.focal.iter().filter(|(s, _)| s.meets(a)).map(|(_, m)| m).sum())
    }

    /// Masses on `{v}`, `{¬v}` and `{v, ¬v}` after projecting onto `v`.
    pub fn marginal_summary(&self, variable: &str) -> Result<Marginal> {
        if !self.frame.contains(variable) {
            return Err(Error::UnknownVariable(variable.to_owned()));
        }
        let single = self.frame.subframe(&[variable])?;
        let projected = marginalize(self, &single)?;
        let mut out = Marginal { m_true: 0.0, m_false: 0.0, m_unknown: 0.0 };
        for (set, mass) in projected.focal_elements() {
            match (set.contains(0), set.contains(1)) {
                (false, true) => out.m_true += mass,
                (true, false) => out.m_false += mass,
                (true, true) => out.m_unknown += mass,
                (false, false) => {}
            }
        }
        Ok(out)
    }
}

/// Masses a belief function puts on `{v}`, `{¬v}` and `{v, ¬v}` for one
/// binary variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    pub m_true: f64,
    pub m_false: f64,
    pub m_unknown: f64,
}

impl Marginal {
    pub const VACUOUS: Marginal = Marginal { m_true: 0.0, m_false: 0.0, m_unknown: 1.0 };

    pub const fn new(m_true: f64, m_false: f64, m_unknown: f64) -> Self {
        Marginal { m_true, m_false, m_unknown }
    }

    pub fn is_vacuous(&self) -> bool {
        self.m_true <= PRUNE_THRESHOLD && self.m_false <= PRUNE_THRESHOLD
    }

    /// Largest component-wise deviation.
    pub fn max_deviation(&self, other: &Marginal) -> f64 {
        (self.m_true - other.m_true)
            .abs()
            .max((self.m_false - other.m_false).abs())
            .max((self.m_unknown - other.m_unknown).abs())
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn single(name: &str) -> Frame {
        Frame::from_names(&[name]).unwrap()
    }

    #[test]
    fn simple_support_shapes() {
        let f = single("F");
        let focus = f.literal("F", true).unwrap();
        let m = MassFunction::simple_support(&f, focus.clone(), 0.9).unwrap();
        assert_eq!(m.mass_of(&focus), 0.9);
        assert_abs_diff_eq!(m.mass_of(&f.full()), 0.1, epsilon = 1e-15);

        let zero = MassFunction::simple_support(&f, focus.clone(), 0.0).unwrap();
        assert!(zero.is_vacuous());
        let one = MassFunction::simple_support(&f, focus.clone(), 1.0).unwrap();
        assert_eq!(one.focal_elements().len(), 1);

        assert_eq!(
            MassFunction::simple_support(&f, f.empty_set(), 0.5),
            Err(Error::EmptyFocus)
        );
        assert_eq!(
            MassFunction::simple_support(&f, focus.clone(), 1.5),
            Err(Error::WeightOutOfRange(1.5))
        );
        assert!(MassFunction::simple_support(&f, focus, -0.1).is_err());
    }

    #[test]
    fn implication_focus() {
        let f = Frame::from_names(&["B", "F"]).unwrap();
        // B -> F excludes only B ∧ ¬F (config 0b01)
        let focus = StateSet::from_configs(&f, [0, 2, 3]).unwrap();
        let m = MassFunction::simple_support(&f, focus.clone(), 0.9).unwrap();
        assert_eq!(m.mass_of(&focus), 0.9);
        assert_abs_diff_eq!(m.mass_of(&f.full()), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn vacuous_belief_and_plausibility() {
        let f = Frame::from_names(&["B", "F"]).unwrap();
        let v = MassFunction::vacuous(&f);
        assert_eq!(v.focal_elements().len(), 1);
        let b = f.literal("B", true).unwrap();
        assert_eq!(v.belief(&b).unwrap(), 0.0);
        assert_eq!(v.plausibility(&b).unwrap(), 1.0);
        assert_eq!(v.belief(&f.full()).unwrap(), 1.0);
        assert_eq!(v.belief(&f.empty_set()).unwrap(), 0.0);
    }

    #[test]
    fn belief_of_focus() {
        let f = single("F");
        let t = f.literal("F", true).unwrap();
        let m = MassFunction::simple_support(&f, t.clone(), 0.9).unwrap();
        assert_eq!(m.belief(&t).unwrap(), 0.9);
        assert_abs_diff_eq!(m.plausibility(&t.complement()).unwrap(), 0.1, epsilon = 1e-15);
        let other = single("G");
        assert_eq!(m.belief(&other.full()), Err(Error::FrameMismatch));
    }

    #[test]
    fn new_merges_duplicates_and_validates_sum() {
        let f = single("F");
        let t = f.literal("F", true).unwrap();
        let m = MassFunction::new(&f, [(t.clone(), 0.25), (t.clone(), 0.25), (f.full(), 0.5)])
            .unwrap();
        assert_eq!(m.focal_elements().len(), 2);
        assert_eq!(m.mass_of(&t), 0.5);
        assert!(MassFunction::new(&f, [(t.clone(), 0.3)]).is_err());
        assert!(MassFunction::new(&f, [(t, -0.5), (f.full(), 1.5)]).is_err());
    }

    #[test]
    fn marginal_summary_of_joint() {
        let f = Frame::from_names(&["B", "F"]).unwrap();
        let b_and_not_f = f.literal("B", true).unwrap().and(&f.literal("F", false).unwrap());
        let m = MassFunction::simple_support(&f, b_and_not_f, 0.95).unwrap();
        let on_f = m.marginal_summary("F").unwrap();
        assert_eq!(on_f.m_false, 0.95);
        assert_eq!(on_f.m_true, 0.0);
        assert_abs_diff_eq!(on_f.m_unknown, 0.05, epsilon = 1e-15);
        assert_eq!(m.marginal_summary("X"), Err(Error::UnknownVariable("X".into())));
        assert!(MassFunction::vacuous(&f).marginal_summary("B").unwrap().is_vacuous());
    }
}
