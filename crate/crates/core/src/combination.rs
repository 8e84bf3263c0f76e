//! Vacuous extension, marginalization and the combination rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::{FocalAccumulator, MassFunction};
use crate::state_set::StateSet;

/// Conflict at or above `1 - TOTAL_CONFLICT_EPS` cannot be normalized away.
pub const TOTAL_CONFLICT_EPS: f64 = 1e-12;

/// Mass that fell on the empty set before normalization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictReport {
    pub conflict_mass: f64,
    pub normalizable: bool,
}

impl ConflictReport {
    pub fn new(conflict_mass: f64) -> Self {
        ConflictReport {
            conflict_mass,
            normalizable: conflict_mass < 1.0 - TOTAL_CONFLICT_EPS,
        }
    }

    pub const NONE: ConflictReport = ConflictReport { conflict_mass: 0.0, normalizable: true };
}

/// Index of configuration `config` of a larger frame restricted to the
/// variables sitting at `positions` of that frame.
#[inline]
fn restrict(config: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &p)| acc | (((config >> p) & 1) << k))
}

/// Lifts every focal set of `m` to its cylinder on `target`.
pub fn vacuous_extension(m: &MassFunction, target: &Frame) -> Result<MassFunction> {
    if m.frame() == target {
        return Ok(m.clone());
    }
    let positions = m.frame().positions_in(target).ok_or(Error::NotASuperframe)?;
    let focal = m
        .focal_elements()
        .iter()
        .map(|(set, mass)| {
            let cylinder = if set.is_full() {
                StateSet::full(target)
            } else {
                StateSet::from_fn(target, |c| set.contains(restrict(c, &positions)))
            };
            (cylinder, *mass)
        })
        .collect();
    Ok(MassFunction::from_parts(target, focal))
}

/// Projects `m` onto `target`, merging focal sets with equal projections.
pub fn marginalize(m: &MassFunction, target: &Frame) -> Result<MassFunction> {
    if m.frame() == target {
        return Ok(m.clone());
    }
    let positions = target.positions_in(m.frame()).ok_or(Error::NotASubframe)?;
    let mut acc = FocalAccumulator::default();
    for (set, mass) in m.focal_elements() {
        let projected = if set.is_full() {
            StateSet::full(target)
        } else {
            let mut p = StateSet::empty(target);
            for c in set.configs() {
                p.insert(restrict(c, &positions));
            }
            p
        };
        acc.add(projected, *mass);
    }
    Ok(acc.finish(target, 1.0))
}

/// Conjunctive combination. With `normalize` this is Dempster's rule;
/// without it the conflict stays on the empty set.
pub fn combine_conjunctive(
    m1: &MassFunction,
    m2: &MassFunction,
    normalize: bool,
) -> Result<(MassFunction, ConflictReport)> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let mut acc = FocalAccumulator::default();
    for (a, ma) in m1.focal_elements() {
        for (b, mb) in m2.focal_elements() {
            acc.add(a.and(b), ma * mb);
        }
    }
    if !normalize {
        let out = acc.finish(m1.frame(), 1.0);
        let report = ConflictReport::new(out.empty_mass());
        return Ok((out, report));
    }
    let conflict = acc.take_empty();
    let report = ConflictReport::new(conflict);
    if !report.normalizable {
        return Err(Error::TotalConflict { conflict_mass: conflict });
    }
    Ok((acc.finish(m1.frame(), 1.0 / (1.0 - conflict)), report))
}

/// Disjunctive combination: `m(C) = Σ_{A ∪ B = C} m1(A) m2(B)`, so that
/// `bel(A) = bel1(A) · bel2(A)`.
pub fn combine_disjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    let mut acc = FocalAccumulator::default();
    for (a, ma) in m1.focal_elements() {
        for (b, mb) in m2.focal_elements() {
            acc.add(a.or(b), ma * mb);
        }
    }
    Ok(acc.finish(m1.frame(), 1.0))
}

/// Extends every belief to `joint` and folds them with Dempster's rule in
/// list order.
pub fn combine_all(beliefs: &[MassFunction], joint: &Frame) -> Result<(MassFunction, ConflictReport)> {
    combine_all_inspect(beliefs, joint, true, |_| {})
}

/// Same fold without normalization; the result keeps the conflict on `∅`.
pub fn combine_all_unnormalized(
    beliefs: &[MassFunction],
    joint: &Frame,
) -> Result<(MassFunction, ConflictReport)> {
    combine_all_inspect(beliefs, joint, false, |_| {})
}

/// The fold behind [`combine_all`]. `inspect` sees every extended input and
/// every intermediate result, the final one included.
///
/// The reported conflict is the aggregate `1 - Π(1 - k_i)` over the fold
/// steps, which equals the empty-set mass of the unnormalized fold.
pub fn combine_all_inspect(
    beliefs: &[MassFunction],
    joint: &Frame,
    normalize: bool,
    mut inspect: impl FnMut(&MassFunction),
) -> Result<(MassFunction, ConflictReport)> {
    let (first, rest) = beliefs
        .split_first()
        .ok_or_else(|| Error::InvalidMass("nothing to combine".into()))?;
    let mut acc = vacuous_extension(first, joint)?;
    inspect(&acc);
    let mut retained = 1.0;
    for m in rest {
        let ext = vacuous_extension(m, joint)?;
        inspect(&ext);
        let (next, report) = combine_conjunctive(&acc, &ext, normalize)?;
        retained *= 1.0 - report.conflict_mass;
        acc = next;
        inspect(&acc);
    }
    let report = if normalize {
        ConflictReport::new(1.0 - retained)
    } else {
        ConflictReport::new(acc.empty_mass())
    };
    Ok((acc, report))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn literal_support(frame: &Frame, name: &str, value: bool, w: f64) -> MassFunction {
        MassFunction::simple_support(frame, frame.literal(name, value).unwrap(), w).unwrap()
    }

    #[test]
    fn dempster_on_opposite_literals() {
        let f = Frame::from_names(&["F"]).unwrap();
        let m1 = literal_support(&f, "F", true, 0.9);
        let m2 = literal_support(&f, "F", false, 0.95);
        let (m, report) = combine_conjunctive(&m1, &m2, true).unwrap();
        assert_abs_diff_eq!(report.conflict_mass, 0.855, epsilon = 1e-12);
        let t = m.marginal_summary("F").unwrap();
        assert_abs_diff_eq!(t.m_true, 0.045 / 0.145, epsilon = 1e-12);
        assert_abs_diff_eq!(t.m_false, 0.095 / 0.145, epsilon = 1e-12);
        assert_abs_diff_eq!(t.m_unknown, 0.005 / 0.145, epsilon = 1e-12);
        m.check_normalized().unwrap();
    }

    #[test]
    fn unnormalized_keeps_conflict_on_empty_set() {
        let f = Frame::from_names(&["F"]).unwrap();
        let m1 = literal_support(&f, "F", true, 0.9);
        let m2 = literal_support(&f, "F", false, 0.95);
        let (m, report) = combine_conjunctive(&m1, &m2, false).unwrap();
        assert_abs_diff_eq!(m.empty_mass(), report.conflict_mass, epsilon = 0.0);
        assert_abs_diff_eq!(m.total_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn categorical_contradiction_is_total_conflict() {
        let f = Frame::from_names(&["F"]).unwrap();
        let m1 = literal_support(&f, "F", true, 1.0);
        let m2 = literal_support(&f, "F", false, 1.0);
        assert!(matches!(
            combine_conjunctive(&m1, &m2, true),
            Err(Error::TotalConflict { .. })
        ));
        let (m, report) = combine_conjunctive(&m1, &m2, false).unwrap();
        assert!(!report.normalizable);
        assert_eq!(m.empty_mass(), 1.0);
    }

    #[test]
    fn vacuous_is_neutral() {
        let f = Frame::from_names(&["B", "F"]).unwrap();
        let m = literal_support(&f, "B", true, 0.7);
        let (out, report) = combine_conjunctive(&MassFunction::vacuous(&f), &m, true).unwrap();
        assert_eq!(out, m);
        assert_eq!(report, ConflictReport::NONE);
    }

    #[test]
    fn disjunctive_multiplies_beliefs() {
        let f = Frame::from_names(&["F"]).unwrap();
        let t = f.literal("F", true).unwrap();
        let m1 = literal_support(&f, "F", true, 0.9);
        let m2 = literal_support(&f, "F", true, 0.95);
        let m = combine_disjunctive(&m1, &m2).unwrap();
        assert_abs_diff_eq!(m.mass_of(&t), 0.855, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mass_of(&f.full()), 0.145, epsilon = 1e-15);

        let v = combine_disjunctive(&MassFunction::vacuous(&f), &m1).unwrap();
        assert!(v.is_vacuous());

        let cat = literal_support(&f, "F", true, 1.0);
        assert_eq!(combine_disjunctive(&cat, &cat).unwrap(), cat);
    }

    #[test]
    fn extension_builds_cylinders() {
        let small = Frame::from_names(&["B"]).unwrap();
        let big = Frame::from_names(&["B", "F"]).unwrap();
        let m = literal_support(&small, "B", true, 1.0);
        let ext = vacuous_extension(&m, &big).unwrap();
        assert_eq!(ext.focal_elements()[0].0, big.literal("B", true).unwrap());
        assert_eq!(vacuous_extension(&ext, &small), Err(Error::NotASuperframe));
        assert_eq!(marginalize(&m, &big), Err(Error::NotASubframe));
        assert_eq!(marginalize(&ext, &small).unwrap(), m);

        let v = vacuous_extension(&MassFunction::vacuous(&small), &Frame::from_names(&["B", "TB", "F"]).unwrap())
            .unwrap();
        assert!(v.is_vacuous());
    }

    #[test]
    fn implication_cylinder_over_typicality() {
        let bf = Frame::from_names(&["B", "F"]).unwrap();
        let joint = Frame::from_names(&["B", "TB", "F"]).unwrap();
        // truth table of B -> F, doubled over TB
        let focus = StateSet::from_fn(&bf, |c| !(c & 1 == 1 && c & 2 == 0));
        let m = MassFunction::simple_support(&bf, focus, 0.9).unwrap();
        let ext = vacuous_extension(&m, &joint).unwrap();
        let (cyl, w) = &ext.focal_elements()[0];
        assert_eq!(*w, 0.9);
        assert_eq!(cyl.len(), 6);
        for c in 0..8 {
            let (b, fly) = (c & 1 == 1, c & 4 == 4);
            assert_eq!(cyl.contains(c), !b || fly);
        }
    }

    #[test]
    fn misuse_stack_with_combine_all() {
        let f = Frame::from_names(&["B", "F"]).unwrap();
        let b_implies_f = StateSet::from_fn(&f, |c| !(c & 1 == 1 && c & 2 == 0));
        let beliefs = vec![
            MassFunction::simple_support(&f, b_implies_f, 0.9).unwrap(),
            literal_support(&Frame::from_names(&["B"]).unwrap(), "B", true, 1.0),
        ];
        let (joint, report) = combine_all(&beliefs, &f).unwrap();
        assert_eq!(report.conflict_mass, 0.0);
        let t = joint.marginal_summary("F").unwrap();
        assert_abs_diff_eq!(t.m_true, 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(t.m_unknown, 0.1, epsilon = 1e-12);

        let single = combine_all(&[MassFunction::vacuous(&Frame::from_names(&["B"]).unwrap())], &f)
            .unwrap()
            .0;
        assert!(single.is_vacuous());
        assert!(combine_all(&[], &f).is_err());
    }
}
