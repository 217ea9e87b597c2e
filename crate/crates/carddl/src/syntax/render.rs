//! Printing in the surface syntax accepted by the parser.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

/// Concept in a position where only a primary may appear (operands of
/// `and`/`or`, assertion heads, set variables).
struct Primary<'a>(&'a Concept);

impl Display for Primary<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            c if c.is_top() || c.is_bottom() => write!(f, "{c}"),
            Concept::And(_) | Concept::Or(_) => write!(f, "({})", self.0),
            c => write!(f, "{c}"),
        }
    }
}

impl Display for Concept {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.is_top() {
            return f.write_str("top");
        }
        if self.is_bottom() {
            return f.write_str("bottom");
        }
        match self {
            Concept::Name(n) => f.write_str(n),
            Concept::And(v) => join(f, v.iter().map(Primary), " and "),
            Concept::Or(v) => {
                // an `and` operand binds tighter, so only nested `or` needs parentheses
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" or ")?;
                    }
                    write!(f, "{}", Primary(c))?;
                }
                Ok(())
            }
            Concept::Not(c) => write!(f, "not {}", Primary(c)),
            Concept::Constr(c) => write!(f, "sat({c})"),
            Concept::Succ(c) => write!(f, "succ({c})"),
        }
    }
}

fn join<T: Display>(f: &mut Formatter<'_>, items: impl Iterator<Item = T>, sep: &str) -> fmt::Result {
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl Display for SetVar {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetVar::Role(r) => f.write_str(r),
            SetVar::Concept(Concept::Name(n)) => f.write_str(n),
            SetVar::Concept(c) if c.is_top() || c.is_bottom() => write!(f, "{c}"),
            SetVar::Concept(c) => write!(f, "({c})"),
            SetVar::Indiv(a) => write!(f, "{{{a}}}"),
        }
    }
}

struct SetOperand<'a, V>(&'a SetTerm<V>);

impl<V: Display> Display for SetOperand<'_, V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            SetTerm::Union(..) | SetTerm::Inter(..) => write!(f, "({})", self.0),
            t => write!(f, "{t}"),
        }
    }
}

impl<V: Display> Display for SetTerm<V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Empty => f.write_str("empty"),
            SetTerm::Universe => f.write_str("univ"),
            SetTerm::Var(v) => write!(f, "{v}"),
            SetTerm::Union(a, b) => {
                let rhs = SetOperand(b);
                match **a {
                    SetTerm::Union(..) => write!(f, "{a} union {rhs}"),
                    _ => write!(f, "{} union {rhs}", SetOperand(a)),
                }
            }
            SetTerm::Inter(a, b) => {
                let rhs = SetOperand(b);
                match **a {
                    SetTerm::Inter(..) => write!(f, "{a} inter {rhs}"),
                    _ => write!(f, "{} inter {rhs}", SetOperand(a)),
                }
            }
            SetTerm::Complement(a) => write!(f, "comp({a})"),
        }
    }
}

struct PaOperand<'a, V>(&'a PaExpr<V>);

impl<V: Display> Display for PaOperand<'_, V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            PaExpr::Sum(..) | PaExpr::Mul(..) => write!(f, "({})", self.0),
            e => write!(f, "{e}"),
        }
    }
}

impl<V: Display> Display for PaExpr<V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            PaExpr::Const(c) => write!(f, "{c}"),
            PaExpr::Card(s) => write!(f, "card({s})"),
            PaExpr::Sum(a, b) => match **b {
                PaExpr::Sum(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
            PaExpr::Mul(n, a) => write!(f, "{n} * {}", PaOperand(a)),
        }
    }
}

impl<V: Display> Display for Atom<V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::SetEq(a, b) => write!(f, "{a} = {b}"),
            Atom::SetSub(a, b) => write!(f, "{a} <= {b}"),
            Atom::CardEq(a, b) => write!(f, "{a} = {b}"),
            Atom::CardLt(a, b) => write!(f, "{a} < {b}"),
            Atom::Divides(n, a) => write!(f, "div({n}, {a})"),
        }
    }
}

struct ConstraintOperand<'a, V>(&'a Constraint<V>);

impl<V: Display> Display for ConstraintOperand<'_, V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            Constraint::And(v) | Constraint::Or(v) if v.len() > 1 => write!(f, "({})", self.0),
            c => write!(f, "{c}"),
        }
    }
}

impl<V: Display> Display for Constraint<V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Atom(a) => write!(f, "{a}"),
            Constraint::And(v) if v.is_empty() => f.write_str("empty = empty"),
            Constraint::Or(v) if v.is_empty() => f.write_str("univ = empty"),
            Constraint::And(v) => join(f, v.iter().map(ConstraintOperand), " and "),
            Constraint::Or(v) => join(f, v.iter().map(ConstraintOperand), " or "),
            Constraint::Not(c) => write!(f, "not ({c})"),
        }
    }
}

fn write_side(f: &mut Formatter<'_>, side: &[(i64, Concept)], offset: u64) -> fmt::Result {
    let mut first = true;
    for (n, c) in side {
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        write!(f, "{n} * card({c})")?;
    }
    if offset > 0 || first {
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "{offset}")?;
    }
    Ok(())
}

impl Display for SemiRestricted {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_side(f, &self.lhs, self.offset)?;
        f.write_str(" <= ")?;
        write_side(f, &self.rhs, 0)
    }
}

impl Display for Erc {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let operand = |f: &mut Formatter<'_>, e: &Erc| match e {
            Erc::Atom(a) => write!(f, "{a}"),
            e => write!(f, "({e})"),
        };
        match self {
            Erc::Atom(a) => write!(f, "{a}"),
            Erc::And(v) | Erc::Or(v) => {
                let sep = if matches!(self, Erc::And(_)) { " and " } else { " or " };
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    operand(f, e)?;
                }
                Ok(())
            }
        }
    }
}

impl Display for Assertion {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept(c, a) => write!(f, "{}({a})", Primary(c)),
            Assertion::Role(r, a, b) => write!(f, "{r}({a}, {b})"),
            Assertion::NotRole(r, a, b) => write!(f, "not {r}({a}, {b})"),
        }
    }
}

impl Display for Ci {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.sub, self.sup)
    }
}

impl Display for Kb {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for ci in &self.tbox {
            writeln!(f, "tbox: {ci}")?;
        }
        for a in &self.abox {
            writeln!(f, "abox: {a}")?;
        }
        match &self.erc {
            Erc::And(v) => {
                for e in v {
                    writeln!(f, "erc: {e}")?;
                }
            }
            e => writeln!(f, "erc: {e}")?,
        }
        match &self.ec {
            Some(Constraint::And(v)) if !v.is_empty() => {
                for c in v {
                    writeln!(f, "ec: {c}")?;
                }
            }
            Some(c) => writeln!(f, "ec: {c}")?,
            None => {}
        }
        if let Some(g) = &self.goal {
            writeln!(f, "goal: {g}")?;
        }
        Ok(())
    }
}

impl Display for Query {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("q :- ")?;
        let mut first = true;
        for (r, x, y) in &self.role_atoms {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{r}({x}, {y})")?;
        }
        for (c, z) in &self.concept_atoms {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{}({z})", Primary(c))?;
        }
        Ok(())
    }
}

impl Display for Signature {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "concepts {:?}, roles {:?}, individuals {:?}", self.concepts, self.roles, self.individuals)
    }
}
