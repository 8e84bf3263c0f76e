//! Built-in networks: the Tweety penguin under both default encodings,
//! Clyde the elephant, and the naive single-frame treatment of Tweety.

use crate::formula::parse_formula;
use crate::frame::Variable;
use crate::network::{Belief, ExceptionMode, NetworkSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoPrereqOptions {
    pub exception_mode: ExceptionMode,
    /// Prior on `TB`.
    pub bird_typicality: f64,
    /// Prior on `TP`.
    pub penguin_typicality: f64,
    /// Prior on `TS`.
    pub superpenguin_typicality: f64,
}

impl Default for NoPrereqOptions {
    fn default() -> Self {
        NoPrereqOptions {
            exception_mode: ExceptionMode::Hard,
            bird_typicality: 0.9,
            penguin_typicality: 0.95,
            superpenguin_typicality: 0.99,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardOptions {
    pub exception_mode: ExceptionMode,
    /// Adds `~TB -> P`: penguins are the only atypical birds.
    pub include_only_exception_rule: bool,
    /// Adds the `Eggs` variable and `B -> Eggs`.
    pub include_eggs: bool,
    /// Weight of `InB -> TB`.
    pub bird_typicality: f64,
    /// Weight of `InP -> TP`.
    pub penguin_typicality: f64,
    /// Weight of `InS -> TS`.
    pub superpenguin_typicality: f64,
}

impl Default for StandardOptions {
    fn default() -> Self {
        StandardOptions {
            exception_mode: ExceptionMode::Hard,
            include_only_exception_rule: false,
            include_eggs: false,
            bird_typicality: 0.9,
            penguin_typicality: 0.95,
            superpenguin_typicality: 0.99,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClydeOptions {
    /// Adds the shortcut `CE -> E`.
    pub include_circus_elephant_link: bool,
    /// Weight of the defeasible greyness defaults.
    pub default_weight: f64,
}

impl Default for ClydeOptions {
    fn default() -> Self {
        ClydeOptions { include_circus_elephant_link: false, default_weight: 0.9 }
    }
}

fn vars(names: &[&str]) -> Vec<Variable> {
    names.iter().map(|n| Variable::new(*n).expect("builtin variable")).collect()
}

fn b(label: &str, formula: &str, weight: f64) -> Belief {
    Belief::new(label, parse_formula(formula).expect("builtin formula"), weight)
}

fn build(name: &str, variables: &[&str], beliefs: Vec<Belief>) -> NetworkSpec {
    NetworkSpec::new(name, vars(variables), beliefs, Vec::new()).expect("builtin network is valid")
}

/// Normal defaults without prerequisite: `B & TB -> F` with a prior on the
/// typicality variable, layered for penguins and super-penguins.
pub fn build_tweety_noprereq(opts: &NoPrereqOptions) -> NetworkSpec {
    let beliefs = vec![
        b("bird_flies", "B & TB -> F", 1.0),
        b("birds_typical", "TB", opts.bird_typicality),
        b("penguin_is_bird", "P -> B", 1.0),
        b("penguin_atypical_bird", "P -> ~TB", 1.0),
        b("exc_penguin_not_fly", "P & TP -> ~F", 1.0),
        b("penguins_typical", "TP", opts.penguin_typicality),
        b("superpenguin_is_penguin", "S -> P", 1.0),
        b("superpenguin_atypical_penguin", "S -> ~TP", 1.0),
        b("exc_superpenguin_flies", "S & TS -> F", 1.0),
        b("superpenguins_typical", "TS", opts.superpenguin_typicality),
    ];
    build("tweety_noprereq", &["B", "TB", "F", "P", "TP", "S", "TS"], beliefs)
        .with_exception_mode(opts.exception_mode)
}

/// Standard normal defaults: instantiation variables (`InB`, `InP`, `InS`)
/// carry the typicality, blockers (`XP`, `XS`) stop back-propagation.
///
/// The super-penguin block mirrors the penguin block and adds
/// `S & XS -> XP`, so learning `InS` also blocks the bird default.
pub fn build_tweety_standard(opts: &StandardOptions) -> NetworkSpec {
    let mut beliefs = vec![
        b("learn_bird_is_bird", "InB -> B", 1.0),
        b("learn_bird_typical", "InB -> TB", opts.bird_typicality),
        b("bird_flies", "B & TB -> F", 1.0),
        b("learn_penguin_typical", "InP -> TP", opts.penguin_typicality),
        b("learn_penguin_is_penguin", "InP -> P", 1.0),
        b("learn_penguin_blocks", "InP -> XP", 1.0),
        b("penguin_is_bird", "P -> B", 1.0),
        b("penguin_atypical_bird", "P & XP -> ~TB", 1.0),
        b("exc_penguin_not_fly", "P & TP -> ~F", 1.0),
        b("learn_superpenguin_is_superpenguin", "InS -> S", 1.0),
        b("learn_superpenguin_typical", "InS -> TS", opts.superpenguin_typicality),
        b("learn_superpenguin_blocks", "InS -> XS", 1.0),
        b("superpenguin_is_penguin", "S -> P", 1.0),
        b("superpenguin_atypical_penguin", "S & XS -> ~TP", 1.0),
        b("exc_superpenguin_flies", "S & TS -> F", 1.0),
        b("superpenguin_blocks_penguin", "S & XS -> XP", 1.0),
    ];
    let mut variables = vec!["InB", "B", "TB", "F", "InP", "P", "TP", "XP", "InS", "S", "TS", "XS"];
    if opts.include_only_exception_rule {
        beliefs.push(b("only_penguins_atypical", "~TB -> P", 1.0));
    }
    if opts.include_eggs {
        variables.push("Eggs");
        beliefs.push(b("birds_lay_eggs", "B -> Eggs", 1.0));
    }
    build("tweety_standard", &variables, beliefs).with_exception_mode(opts.exception_mode)
}

/// Clyde: circus elephants are royal elephants, royal elephants are
/// elephants, elephants are grey, royal elephants are not grey.
///
/// Learning `InCE` asserts `CE`, carries the royal-elephant typicality and
/// blocks the elephant default through `XCE -> XRE`.
pub fn build_clyde(opts: &ClydeOptions) -> NetworkSpec {
    let w = opts.default_weight;
    let mut beliefs = vec![
        b("learn_elephant_is_elephant", "InE -> E", 1.0),
        b("learn_elephant_typical", "InE -> TE", w),
        b("elephant_grey", "E & TE -> Grey", 1.0),
        b("learn_royal_is_royal", "InRE -> RE", 1.0),
        b("learn_royal_typical", "InRE -> TRE", w),
        b("learn_royal_blocks", "InRE -> XRE", 1.0),
        b("royal_is_elephant", "RE -> E", 1.0),
        b("royal_atypical_elephant", "RE & XRE -> ~TE", 1.0),
        b("exc_royal_not_grey", "RE & TRE -> ~Grey", 1.0),
        b("learn_circus_is_circus", "InCE -> CE", 1.0),
        b("learn_circus_typical_royal", "InCE -> TRE", w),
        b("learn_circus_blocks", "InCE -> XCE", 1.0),
        b("circus_is_royal", "CE -> RE", 1.0),
        b("circus_blocks_royal", "CE & XCE -> XRE", 1.0),
    ];
    if opts.include_circus_elephant_link {
        beliefs.push(b("circus_is_elephant", "CE -> E", 1.0));
    }
    build(
        "clyde",
        &["InE", "E", "TE", "Grey", "InRE", "RE", "TRE", "XRE", "InCE", "CE", "XCE"],
        beliefs,
    )
}

/// Tweety modelled naively on one frame: both defaults as weighted material
/// implications, combined as if they were distinct evidence.
pub fn build_misuse() -> NetworkSpec {
    let beliefs = vec![
        b("bird_flies", "B -> F", 0.9),
        b("penguin_is_bird", "P -> B", 1.0),
        b("penguin_not_fly", "P -> ~F", 0.95),
    ];
    let obs = ["B", "P"].iter().map(|o| parse_formula(o).expect("builtin formula")).collect();
    NetworkSpec::new("misuse", vars(&["B", "P", "F"]), beliefs, obs).expect("builtin network is valid")
}

/// Name and one-line description of every built-in network.
pub const BUILTINS: &[(&str, &str)] = &[
    ("tweety_noprereq", "Tweety with normal defaults without prerequisite (B & TB -> F)"),
    ("tweety_standard", "Tweety with standard normal defaults (InB/InP/InS, XP/XS blockers)"),
    ("clyde", "Clyde the circus elephant (royal elephants are not grey)"),
    ("misuse", "Tweety combined naively with Dempster's rule on non-distinct evidence"),
];

/// Network-file text shipped for a built-in network.
pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "tweety_noprereq" => Some(include_str!("../networks/tweety_noprereq.tbm")),
        "tweety_standard" => Some(include_str!("../networks/tweety_standard.tbm")),
        "clyde" => Some(include_str!("../networks/clyde.tbm")),
        "misuse" => Some(include_str!("../networks/misuse.tbm")),
        _ => None,
    }
}

/// Default-option build of a named built-in network.
pub fn builtin(name: &str) -> Option<NetworkSpec> {
    match name {
        "tweety_noprereq" => Some(build_tweety_noprereq(&NoPrereqOptions::default())),
        "tweety_standard" => Some(build_tweety_standard(&StandardOptions::default())),
        "clyde" => Some(build_clyde(&ClydeOptions::default())),
        "misuse" => Some(build_misuse()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosters() {
        let np = build_tweety_noprereq(&NoPrereqOptions::default());
        assert_eq!(np.variables().len(), 7);
        assert_eq!(np.beliefs().len(), 10);
        let st = build_tweety_standard(&StandardOptions::default());
        assert_eq!(st.variables().len(), 12);
        assert_eq!(st.beliefs().len(), 16);
        let eggs = build_tweety_standard(&StandardOptions { include_eggs: true, ..Default::default() });
        assert_eq!(eggs.variables().len(), 13);
        assert_eq!(build_clyde(&ClydeOptions::default()).variables().len(), 11);
        assert_eq!(build_misuse().observations().len(), 2);
    }

    #[test]
    fn weak_mode_removes_two_links() {
        let weak = build_tweety_noprereq(&NoPrereqOptions {
            exception_mode: ExceptionMode::Weak,
            ..Default::default()
        });
        assert_eq!(weak.beliefs().len(), 8);
        assert!(weak.belief("exc_penguin_not_fly").is_none());
        assert!(weak.belief("exc_superpenguin_flies").is_none());
        let weak = build_tweety_standard(&StandardOptions {
            exception_mode: ExceptionMode::Weak,
            ..Default::default()
        });
        assert_eq!(weak.beliefs().len(), 14);
    }

    #[test]
    fn builtins_resolve() {
        for (name, _) in BUILTINS {
            assert_eq!(builtin(name).unwrap().name(), *name);
        }
        assert!(builtin("nope").is_none());
        assert!(builtin_text("nope").is_none());
    }
}
