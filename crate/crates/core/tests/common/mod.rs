//! Reference evaluators that share no combination code with the engine.
#![allow(dead_code)]

use tbm_core::{Formula, Frame, Marginal, MassFunction, NetworkSpec, StateSet};

/// Truth value of `f` under an assignment given as a name lookup.
pub fn eval_truth(f: &Formula, value: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(n) => value(n),
        Formula::Not(a) => !eval_truth(a, value),
        Formula::And(a, b) => eval_truth(a, value) && eval_truth(b, value),
        Formula::Or(a, b) => eval_truth(a, value) || eval_truth(b, value),
        Formula::Implies(a, b) => !eval_truth(a, value) || eval_truth(b, value),
    }
}

/// Evaluates a network made of simple support functions by enumerating
/// which weighted foci are asserted. Every subset of asserted foci carries
/// the product of its weights (and of the complements of the others); its
/// models are the assignments satisfying all categorical constraints plus
/// the asserted foci. Subsets without models are conflict.
///
/// Returns per-variable marginals, or `None` on total conflict.
pub fn assertion_oracle(net: &NetworkSpec) -> Option<Vec<(String, Marginal)>> {
    let names: Vec<String> = net.variables().iter().map(|v| v.name().to_owned()).collect();
    let n = names.len();
    let mut hard: Vec<&Formula> = Vec::new();
    let mut soft: Vec<(&Formula, f64)> = Vec::new();
    for b in net.beliefs() {
        if b.weight == 1.0 {
            hard.push(&b.formula);
        } else if b.weight > 0.0 {
            soft.push((&b.formula, b.weight));
        }
    }
    hard.extend(net.observations());

    // per assignment: categorical satisfaction and a bitmask of satisfied soft foci
    let mut rows: Vec<(usize, u32)> = Vec::new();
    for a in 0..(1usize << n) {
        let value = |name: &str| {
            let k = names.iter().position(|x| x == name).unwrap();
            (a >> k) & 1 == 1
        };
        if hard.iter().all(|f| eval_truth(f, &value)) {
            let mut mask = 0u32;
            for (i, (f, _)) in soft.iter().enumerate() {
                if eval_truth(f, &value) {
                    mask |= 1 << i;
                }
            }
            rows.push((a, mask));
        }
    }

    let mut conflict = 0.0;
    let mut acc = vec![[0.0f64; 3]; n];
    for subset in 0u32..(1 << soft.len()) {
        let mut mass = 1.0;
        for (i, (_, w)) in soft.iter().enumerate() {
            mass *= if subset >> i & 1 == 1 { *w } else { 1.0 - w };
        }
        let models: Vec<usize> = rows.iter().filter(|(_, m)| m & subset == subset).map(|(a, _)| *a).collect();
        if models.is_empty() {
            conflict += mass;
            continue;
        }
        for (k, slot) in acc.iter_mut().enumerate() {
            let all_true = models.iter().all(|a| (a >> k) & 1 == 1);
            let all_false = models.iter().all(|a| (a >> k) & 1 == 0);
            let idx = if all_true { 0 } else if all_false { 1 } else { 2 };
            slot[idx] += mass;
        }
    }
    if conflict >= 1.0 - 1e-12 {
        return None;
    }
    Some(
        names
            .into_iter()
            .zip(acc)
            .map(|(name, [t, f, u])| {
                let z = 1.0 - conflict;
                (name, Marginal::new(t / z, f / z, u / z))
            })
            .collect(),
    )
}

/// A mass function on a frame of at most three variables, stored densely
/// over the whole subset lattice: index `s` is the set whose member
/// configurations are the set bits of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub configs: usize,
    pub mass: Vec<f64>,
}

impl Dense {
    pub fn from_mass(m: &MassFunction) -> Dense {
        let configs = m.frame().size();
        assert!(configs <= 8, "dense oracle supports at most 3 variables");
        let mut mass = vec![0.0; 1 << configs];
        for (set, w) in m.focal_elements() {
            mass[subset_index(set)] += w;
        }
        Dense { configs, mass }
    }

    pub fn conjunctive(&self, other: &Dense) -> Dense {
        let mut out = vec![0.0; self.mass.len()];
        for (a, ma) in self.mass.iter().enumerate() {
            for (b, mb) in other.mass.iter().enumerate() {
                out[a & b] += ma * mb;
            }
        }
        Dense { configs: self.configs, mass: out }
    }

    pub fn disjunctive(&self, other: &Dense) -> Dense {
        let mut out = vec![0.0; self.mass.len()];
        for (a, ma) in self.mass.iter().enumerate() {
            for (b, mb) in other.mass.iter().enumerate() {
                out[a | b] += ma * mb;
            }
        }
        Dense { configs: self.configs, mass: out }
    }

    /// Dempster normalization; `None` on total conflict.
    pub fn normalized(&self) -> Option<Dense> {
        let k = self.mass[0];
        if k >= 1.0 - 1e-12 {
            return None;
        }
        let mut mass: Vec<f64> = self.mass.iter().map(|m| m / (1.0 - k)).collect();
        mass[0] = 0.0;
        Some(Dense { configs: self.configs, mass })
    }

    pub fn belief(&self, a: usize) -> f64 {
        (1..self.mass.len()).filter(|b| b & !a == 0).map(|b| self.mass[b]).sum()
    }

    pub fn max_deviation(&self, other: &Dense) -> f64 {
        self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn subset_index(set: &StateSet) -> usize {
    set.configs().fold(0, |acc, c| acc | (1 << c))
}

pub fn set_from_index(frame: &Frame, index: usize) -> StateSet {
    StateSet::from_configs(frame, (0..frame.size()).filter(|c| index >> c & 1 == 1)).unwrap()
}

pub fn frame_of(n: usize) -> Frame {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    Frame::from_names(&names).unwrap()
}
