//! Propositional formulas over binary variables.
//!
//! Surface syntax, loosest to tightest:
//!
//! ```text
//! formula := or ( "->" formula )?        right-associative
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | atom | "(" formula ")"
//! atom    := [A-Za-z_][A-Za-z0-9_]*
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::MassFunction;
use crate::state_set::StateSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::Atom(n) => {
                    if !out.contains(&n.as_str()) {
                        out.push(n);
                    }
                }
                Formula::Not(a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Atom(..) => 5,
        }
    }

    /// Configurations of `frame` satisfying the formula. Implication is the
    /// material conditional.
    pub fn compile(&self, frame: &Frame) -> Result<StateSet> {
        Ok(match self {
            Formula::Atom(n) => {
                let k = frame.index_of(n).ok_or_else(|| Error::UnknownAtom(n.clone()))?;
                StateSet::variable_true(frame, k)
            }
            Formula::Not(a) => a.compile(frame)?.complement(),
            Formula::And(a, b) => a.compile(frame)?.and(&b.compile(frame)?),
            Formula::Or(a, b) => a.compile(frame)?.or(&b.compile(frame)?),
            Formula::Implies(a, b) => a.compile(frame)?.complement().or(&b.compile(frame)?),
        })
    }

    /// Simple support function giving `weight` to the formula's models.
    pub fn weighted_belief(&self, weight: f64, frame: &Frame) -> Result<MassFunction> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::WeightOutOfRange(weight));
        }
        let focus = self.compile(frame)?;
        if focus.is_empty() {
            return Err(Error::ContradictoryConstraint(self.to_string()));
        }
        MassFunction::simple_support(frame, focus, weight)
    }

    /// The smallest frame holding the formula's atoms, ordered as in `frame`.
    pub fn subframe_of(&self, frame: &Frame) -> Result<Frame> {
        let atoms = self.atoms();
        for a in &atoms {
            if !frame.contains(a) {
                return Err(Error::UnknownAtom((*a).to_owned()));
            }
        }
        frame.subframe(&atoms)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    if parser.tokens.is_empty() {
        return Err(syntax(0, "empty formula"));
    }
    let f = parser.implication()?;
    match parser.peek() {
        None => Ok(f),
        Some((at, Token::RParen)) => Err(syntax(at, "unbalanced `)`")),
        Some((at, t)) => Err(syntax(at, format!("unexpected {t}"))),
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(n) => write!(f, "identifier `{n}`"),
            Token::Not => f.write_str("`~`"),
            Token::And => f.write_str("`&`"),
            Token::Or => f.write_str("`|`"),
            Token::Arrow => f.write_str("`->`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
        }
    }
}

/// Tokens with their byte offsets.
fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '~' => {
                chars.next();
                out.push((i, Token::Not));
            }
            '&' => {
                chars.next();
                out.push((i, Token::And));
            }
            '|' => {
                chars.next();
                out.push((i, Token::Or));
            }
            '(' => {
                chars.next();
                out.push((i, Token::LParen));
            }
            ')' => {
                chars.next();
                out.push((i, Token::RParen));
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => out.push((i, Token::Arrow)),
                    _ => return Err(syntax(i, "expected `->`")),
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let name = &text[i..end];
                if name.starts_with(|d: char| d.is_ascii_digit()) {
                    return Err(syntax(i, format!("illegal identifier `{name}`")));
                }
                out.push((i, Token::Ident(name.to_owned())));
            }
            other => return Err(syntax(i, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, &Token)> {
        self.tokens.get(self.pos).map(|(i, t)| (*i, t))
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek().map(|(_, t)| t) == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Token::Or) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some((at, token)) = self.peek() else {
            return Err(syntax(self.end, "dangling operator: expected a formula"));
        };
        match token.clone() {
            Token::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Token::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.eat(&Token::RParen) {
                    Ok(inner)
                } else {
                    Err(syntax(at, "unbalanced `(`"))
                }
            }
            other => Err(syntax(at, format!("expected a formula, found {other}"))),
        }
    }
}

impl fmt::Display for Formula {
    /// Prints with the fewest parentheses that re-parse to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        let p = self.precedence();
        match self {
            Formula::Atom(n) => f.write_str(n),
            Formula::Not(a) => {
                f.write_str("~")?;
                child(f, a, a.precedence() < p)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let op = if matches!(self, Formula::And(..)) { " & " } else { " | " };
                child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                child(f, b, b.precedence() <= p)
            }
            Formula::Implies(a, b) => {
                child(f, a, a.precedence() <= p)?;
                f.write_str(" -> ")?;
                child(f, b, b.precedence() < p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn precedence_and_association() {
        assert_eq!(p("B & TB -> F"), Formula::implies(Formula::and(a("B"), a("TB")), a("F")));
        assert_eq!(p("P -> ~TB"), Formula::implies(a("P"), Formula::not(a("TB"))));
        assert_eq!(p("A -> B -> C"), Formula::implies(a("A"), Formula::implies(a("B"), a("C"))));
        assert_eq!(p("A | B & C"), Formula::or(a("A"), Formula::and(a("B"), a("C"))));
        assert_eq!(p("~A & B"), Formula::and(Formula::not(a("A")), a("B")));
        assert_eq!(p("(A -> B) -> C"), Formula::implies(Formula::implies(a("A"), a("B")), a("C")));
        assert_eq!(p("  ~ ( A|B )"), Formula::not(Formula::or(a("A"), a("B"))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = |s: &str| match parse_formula(s) {
            Err(Error::Syntax { position, .. }) => position,
            other => panic!("{s:?} gave {other:?}"),
        };
        assert_eq!(err(""), 0);
        assert_eq!(err("   "), 0);
        assert_eq!(err("(A & B"), 0);
        assert_eq!(err("A & B)"), 5);
        assert_eq!(err("A &"), 3);
        assert_eq!(err("A -> "), 5);
        assert_eq!(err("A 1x"), 2);
        assert_eq!(err("A - B"), 2);
        assert_eq!(err("A B"), 2);
        assert_eq!(err("A $ B"), 2);
        assert_eq!(err("& A"), 0);
    }

    #[test]
    fn display_round_trips() {
        for s in ["B & TB -> F", "A -> B -> C", "(A -> B) -> C", "~(A | B) & C", "A & (B & C)", "~~A", "(A | B) | C"] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
        assert_eq!(p("(A & B) & C").to_string(), "A & B & C");
    }

    #[test]
    fn compile_truth_tables() {
        let bf = Frame::from_names(&["B", "F"]).unwrap();
        assert_eq!(p("B -> F").compile(&bf).unwrap().len(), 3);
        assert!(!p("B -> F").compile(&bf).unwrap().contains(0b01));
        let btf = Frame::from_names(&["B", "TB", "F"]).unwrap();
        assert_eq!(p("B & TB -> F").compile(&btf).unwrap().len(), 7);
        let single = Frame::from_names(&["P"]).unwrap();
        assert_eq!(p("P").compile(&single).unwrap().configs().collect::<Vec<_>>(), vec![1]);
        assert_eq!(p("Q").compile(&single), Err(Error::UnknownAtom("Q".into())));
        assert_eq!(
            p("A -> B").compile(&Frame::from_names(&["A", "B"]).unwrap()),
            p("~A | B").compile(&Frame::from_names(&["A", "B"]).unwrap())
        );
    }

    #[test]
    fn weighted_beliefs() {
        let f = Frame::from_names(&["InB", "TB"]).unwrap();
        let m = p("InB -> TB").weighted_belief(0.9, &f).unwrap();
        assert_eq!(m.focal_elements().len(), 2);
        assert_eq!(m.focal_elements()[0].1, 0.9);
        assert_eq!(
            p("InB & ~InB").weighted_belief(0.5, &f),
            Err(Error::ContradictoryConstraint("InB & ~InB".into()))
        );
        assert_eq!(p("TB").weighted_belief(1.1, &f), Err(Error::WeightOutOfRange(1.1)));
    }

    #[test]
    fn minimal_subframe() {
        let f = Frame::from_names(&["B", "TB", "F", "P"]).unwrap();
        let sub = p("F | ~B & F").subframe_of(&f).unwrap();
        assert_eq!(sub, Frame::from_names(&["B", "F"]).unwrap());
        assert_eq!(p("X").subframe_of(&f), Err(Error::UnknownAtom("X".into())));
    }
}
