//! Abstract syntax for lattice terms and the statements built from them.
//!
//! Concrete syntax (see [`crate::parser`]): `^` for natural join, `v` for
//! inner union, `+` for the Date & Darwen OR, constants `R00 R01 R10 R11`.
//! Identifiers starting with a lowercase letter are variables; identifiers
//! starting with an uppercase letter are ground names bound to fixed
//! relations by the caller (`E`, `D`, `E0`, `EmD`, ...).

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    R00,
    R01,
    R10,
    R11,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::R00 => "R00",
            Constant::R01 => "R01",
            Constant::R10 => "R10",
            Constant::R11 => "R11",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "R00" => Some(Constant::R00),
            "R01" => Some(Constant::R01),
            "R10" => Some(Constant::R10),
            "R11" => Some(Constant::R11),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Ground(String),
    Const(Constant),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_owned())
    }

    pub fn ground(name: &str) -> Term {
        Term::Ground(name.to_owned())
    }

    pub fn meet(self, other: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Term) -> Term {
        Term::Join(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Term) -> Term {
        Term::Or(Box::new(self), Box::new(other))
    }

    /// `x + y` spelled out: `(x ^ (y v R11)) v (y ^ (x v R11))`.
    pub fn or_expanded(a: Term, b: Term) -> Term {
        let r11 = Term::Const(Constant::R11);
        a.clone()
            .meet(b.clone().join(r11.clone()))
            .join(b.meet(a.join(r11)))
    }

    /// Replaces every `+` with its definition.
    pub fn expand_or(&self) -> Term {
        match self {
            Term::Var(_) | Term::Ground(_) | Term::Const(_) => self.clone(),
            Term::Meet(a, b) => a.expand_or().meet(b.expand_or()),
            Term::Join(a, b) => a.expand_or().join(b.expand_or()),
            Term::Or(a, b) => Term::or_expanded(a.expand_or(), b.expand_or()),
        }
    }

    /// Variables and ground names occurring in the term.
    pub fn names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(n) | Term::Ground(n) => {
                out.insert(n);
            }
            Term::Const(_) => {}
            Term::Meet(a, b) | Term::Join(a, b) | Term::Or(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(n) = t {
                out.insert(n.as_str());
            }
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        if let Term::Meet(a, b) | Term::Join(a, b) | Term::Or(a, b) = self {
            a.visit(f);
            b.visit(f);
        }
    }

    /// Renames variables (not ground names) through `f`.
    pub fn rename_vars(&self, f: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(n) => Term::Var(f(n)),
            Term::Ground(_) | Term::Const(_) => self.clone(),
            Term::Meet(a, b) => a.rename_vars(f).meet(b.rename_vars(f)),
            Term::Join(a, b) => a.rename_vars(f).join(b.rename_vars(f)),
            Term::Or(a, b) => a.rename_vars(f).or(b.rename_vars(f)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Ground(_) | Term::Const(_) => 1,
            Term::Meet(a, b) | Term::Join(a, b) | Term::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn is_binary(&self) -> bool {
        matches!(self, Term::Meet(..) | Term::Join(..) | Term::Or(..))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, op, b) = match self {
            Term::Var(n) | Term::Ground(n) => return f.write_str(n),
            Term::Const(c) => return f.write_str(c.name()),
            Term::Meet(a, b) => (a, "^", b),
            Term::Join(a, b) => (a, "v", b),
            Term::Or(a, b) => (a, "+", b),
        };
        let side = |t: &Term, f: &mut fmt::Formatter<'_>| {
            if t.is_binary() {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        side(a, f)?;
        write!(f, " {op} ")?;
        side(b, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn names(&self) -> BTreeSet<&str> {
        let mut n = self.lhs.names();
        n.extend(self.rhs.names());
        n
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Equation {
        Equation::new(f(&self.lhs), f(&self.rhs))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Horn-style law: the conjunction of the premises implies the conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Implication {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl Implication {
    pub fn names(&self) -> BTreeSet<&str> {
        let mut n = self.conclusion.names();
        for p in &self.premises {
            n.extend(p.names());
        }
        n
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|p| format!("({p})")).collect();
            write!(f, "{} -> ", ps.join(" & "))?;
        }
        write!(f, "{}", self.conclusion)
    }
}

/// What a law asserts: a Horn implication (possibly unconditional) or the
/// equivalence of two equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Implies(Implication),
    Iff(Equation, Equation),
}

impl Statement {
    pub fn equation(eq: Equation) -> Self {
        Statement::Implies(Implication { premises: Vec::new(), conclusion: eq })
    }

    pub fn names(&self) -> BTreeSet<&str> {
        match self {
            Statement::Implies(i) => i.names(),
            Statement::Iff(a, b) => {
                let mut n = a.names();
                n.extend(b.names());
                n
            }
        }
    }

    /// The statement as one or two implications.
    pub fn directions(&self) -> Vec<Implication> {
        match self {
            Statement::Implies(i) => vec![i.clone()],
            Statement::Iff(a, b) => vec![
                Implication { premises: vec![a.clone()], conclusion: b.clone() },
                Implication { premises: vec![b.clone()], conclusion: a.clone() },
            ],
        }
    }

    pub fn has_premises(&self) -> bool {
        match self {
            Statement::Implies(i) => !i.premises.is_empty(),
            Statement::Iff(..) => true,
        }
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Statement {
        match self {
            Statement::Implies(i) => Statement::Implies(Implication {
                premises: i.premises.iter().map(|p| p.map_terms(f)).collect(),
                conclusion: i.conclusion.map_terms(f),
            }),
            Statement::Iff(a, b) => Statement::Iff(a.map_terms(f), b.map_terms(f)),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Implies(i) => write!(f, "{i}"),
            Statement::Iff(a, b) => write!(f, "({a}) <-> ({b})"),
        }
    }
}

/// Canonical form modulo associativity and commutativity of `^` and `v`:
/// chains are flattened, their operands sorted, and the result rebuilt
/// right-nested. `+` is left in place (its operands are normalized).
pub fn normalize_ac(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Ground(_) | Term::Const(_) => t.clone(),
        Term::Or(a, b) => normalize_ac(a).or(normalize_ac(b)),
        Term::Meet(..) => rebuild(flatten_chain(t, true), Term::meet),
        Term::Join(..) => rebuild(flatten_chain(t, false), Term::join),
    }
}

/// Normalized operands of a maximal `^` (or `v`) chain rooted at `t`.
pub fn flatten_chain(t: &Term, meet: bool) -> Vec<Term> {
    fn go(t: &Term, meet: bool, out: &mut Vec<Term>) {
        match (t, meet) {
            (Term::Meet(a, b), true) | (Term::Join(a, b), false) => {
                go(a, meet, out);
                go(b, meet, out);
            }
            _ => out.push(normalize_ac(t)),
        }
    }
    let mut out = Vec::new();
    go(t, meet, &mut out);
    out.sort();
    out
}

fn rebuild(mut args: Vec<Term>, op: fn(Term, Term) -> Term) -> Term {
    let mut acc = args.pop().expect("chain has operands");
    while let Some(next) = args.pop() {
        acc = op(next, acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn display_parenthesizes_compound_operands() {
        let t = Term::ground("E0").join(Term::ground("E").meet(Term::ground("D")));
        assert_eq!(t.to_string(), "E0 v (E ^ D)");
        let t = v("x").or(v("y")).meet(Term::Const(Constant::R11));
        assert_eq!(t.to_string(), "(x + y) ^ R11");
    }

    #[test]
    fn normalize_sorts_chains() {
        let t = v("y").meet(v("x").meet(v("z")));
        let n = normalize_ac(&t);
        assert_eq!(n, v("x").meet(v("y").meet(v("z"))));
        assert_eq!(normalize_ac(&n), n);
        let u = v("z").meet(v("y")).meet(v("x"));
        assert_eq!(normalize_ac(&u), n);
    }

    #[test]
    fn normalize_keeps_mixed_operators_apart() {
        let t = v("y").join(v("x")).meet(v("a"));
        assert_eq!(normalize_ac(&t), v("a").meet(v("x").join(v("y"))));
    }

    #[test]
    fn iff_has_two_directions() {
        let a = Equation::new(v("x"), v("y"));
        let b = Equation::new(v("y"), v("x"));
        let s = Statement::Iff(a.clone(), b.clone());
        let d = s.directions();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].premises, vec![a.clone()]);
        assert_eq!(d[1].conclusion, a);
    }

    #[test]
    fn or_expansion() {
        let t = v("x").or(v("y"));
        assert_eq!(t.expand_or().to_string(), "(x ^ (y v R11)) v (y ^ (x v R11))");
    }
}
