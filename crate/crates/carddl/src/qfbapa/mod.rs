//! Quantifier-free Boolean algebra with Presburger arithmetic.
//!
//! A [`Formula`] is a Boolean combination of set and cardinality atoms over an
//! indexed variable table. Variables are either shared or belong to a local
//! group; a single set term may mix shared variables with the variables of at
//! most one group. Groups keep the Venn decomposition small when many
//! variables never meet in one term (groups that do meet are merged).

pub mod field;
pub mod lattice;
pub mod linear;
mod solve;
pub mod sparse;
pub mod special;
pub mod venn;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::syntax::{Atom, Constraint, PaExpr, SetTerm};
use crate::{Error, Result};

pub use solve::{solve, solve_with_support};
pub use sparse::sparse_bound;
pub use special::{lin_feasible_rational, lin_integer_solution, lin_positive_support, lin_sum, LinearSystem};
pub use venn::{venn_decompose, Decomposition};

pub type Term = SetTerm<usize>;
pub type Pa = PaExpr<usize>;
pub type QAtom = Atom<usize>;
pub type QConstraint = Constraint<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub vars: Vec<String>,
    /// `None` for shared variables, `Some(g)` for variables local to group `g`.
    pub groups: Vec<Option<usize>>,
    pub body: QConstraint,
}

impl Default for Formula {
    fn default() -> Self {
        Self::new()
    }
}

impl Formula {
    pub fn new() -> Self {
        Formula { vars: Vec::new(), groups: Vec::new(), body: Constraint::truth() }
    }

    /// Add a variable, or return the index of an existing one with the same name.
    pub fn var(&mut self, name: impl Into<String>, group: Option<usize>) -> usize {
        let name = name.into();
        if let Some(i) = self.vars.iter().position(|v| *v == name) {
            return i;
        }
        self.vars.push(name);
        self.groups.push(group);
        self.vars.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn conjoin(&mut self, c: QConstraint) {
        let body = std::mem::replace(&mut self.body, Constraint::truth());
        self.body = Constraint::and([body, c]);
    }

    /// Largest absolute constant of the body.
    pub fn max_const(&self) -> u64 {
        self.body.max_const()
    }

    pub fn render(&self) -> String {
        let names = &self.vars;
        let named = self.body.subst(&mut |v| SetTerm::Var(names[*v].clone()));
        named.to_string()
    }
}

pub fn var(v: usize) -> Term {
    SetTerm::Var(v)
}

pub fn card(t: Term) -> Pa {
    PaExpr::Card(t)
}

pub fn atom(a: QAtom) -> QConstraint {
    Constraint::Atom(a)
}

/// Cardinality witness: the non-empty Venn regions with their sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub nvars: usize,
    /// Full sign vectors over the variable table with positive counts.
    pub regions: Vec<(Vec<bool>, u64)>,
}

impl Solution {
    pub fn universe_size(&self) -> u64 {
        self.regions.iter().map(|r| r.1).sum()
    }

    pub fn term_count(&self, t: &Term) -> u64 {
        self.regions.iter().filter(|(s, _)| t.holds(&|v: &usize| s[*v])).map(|r| r.1).sum()
    }

    pub fn region_count(&self, signs: &[bool]) -> u64 {
        self.regions.iter().filter(|(s, _)| s.as_slice() == signs).map(|r| r.1).sum()
    }

    /// Elements `0..n` assigned region by region; returns the set of each variable.
    pub fn materialize(&self) -> Vec<BTreeSet<usize>> {
        let mut sets = vec![BTreeSet::new(); self.nvars];
        let mut next = 0usize;
        for (signs, count) in &self.regions {
            for _ in 0..*count {
                for (v, s) in signs.iter().enumerate() {
                    if *s {
                        sets[v].insert(next);
                    }
                }
                next += 1;
            }
        }
        sets
    }

    /// Region-level evaluation, equivalent to evaluating the materialization.
    pub fn satisfies(&self, f: &Formula) -> bool {
        eval_constraint(&f.body, &|t| self.term_count(t) as i128, &|s, t| {
            self.regions.iter().all(|(sg, _)| {
                let val = |v: &usize| sg[*v];
                !s.holds(&val) || t.holds(&val)
            })
        })
    }
}

fn eval_pa(e: &Pa, count: &impl Fn(&Term) -> i128) -> i128 {
    match e {
        PaExpr::Const(c) => *c as i128,
        PaExpr::Card(t) => count(t),
        PaExpr::Sum(a, b) => eval_pa(a, count) + eval_pa(b, count),
        PaExpr::Mul(n, a) => *n as i128 * eval_pa(a, count),
    }
}

fn eval_constraint(
    c: &QConstraint,
    count: &impl Fn(&Term) -> i128,
    subset: &impl Fn(&Term, &Term) -> bool,
) -> bool {
    match c {
        Constraint::Atom(a) => match a {
            Atom::SetEq(s, t) => subset(s, t) && subset(t, s),
            Atom::SetSub(s, t) => subset(s, t),
            Atom::CardEq(k, l) => eval_pa(k, count) == eval_pa(l, count),
            Atom::CardLt(k, l) => eval_pa(k, count) < eval_pa(l, count),
            Atom::Divides(n, l) => eval_pa(l, count).rem_euclid(*n as i128) == 0,
        },
        Constraint::And(v) => v.iter().all(|c| eval_constraint(c, count, subset)),
        Constraint::Or(v) => v.iter().any(|c| eval_constraint(c, count, subset)),
        Constraint::Not(c) => !eval_constraint(c, count, subset),
    }
}

/// Evaluate `f` under an explicit substitution of finite sets, with universe `0..universe`.
pub fn eval_formula(f: &Formula, universe: usize, sets: &[BTreeSet<usize>]) -> Result<bool> {
    if sets.len() != f.vars.len() {
        return Err(Error::Invalid(format!("expected {} sets, got {}", f.vars.len(), sets.len())));
    }
    if let Some(v) = sets.iter().position(|s| s.iter().any(|e| *e >= universe)) {
        return Err(Error::Invalid(format!("set of '{}' is not a subset of the universe", f.vars[v])));
    }
    let member = |e: usize| move |v: &usize| sets[*v].contains(&e);
    let count = |t: &Term| (0..universe).filter(|e| t.holds(&member(*e))).count() as i128;
    let subset = |s: &Term, t: &Term| (0..universe).all(|e| !s.holds(&member(e)) || t.holds(&member(e)));
    Ok(eval_constraint(&f.body, &count, &subset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Atom;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn inclusion_exclusion_instance() {
        // |x| = |a| + |b| ∧ x = a ∪ b ∧ |a ∩ b| ≥ 1
        let mut f = Formula::new();
        let (x, a, b) = (f.var("x", None), f.var("a", None), f.var("b", None));
        f.body = Constraint::and([
            atom(Atom::CardEq(card(var(x)), PaExpr::sum(card(var(a)), card(var(b))))),
            atom(Atom::SetEq(var(x), SetTerm::union(var(a), var(b)))),
            atom(Atom::CardLt(PaExpr::Const(0), card(SetTerm::inter(var(a), var(b))))),
        ]);
        assert!(!eval_formula(&f, 1, &[set(&[0]), set(&[0]), set(&[0])]).unwrap());
    }

    #[test]
    fn empty_universe() {
        let mut f = Formula::new();
        f.body = atom(Atom::SetEq(SetTerm::Universe, SetTerm::Empty));
        assert!(eval_formula(&f, 0, &[]).unwrap());
    }

    #[test]
    fn divisibility() {
        let mut f = Formula::new();
        let a = f.var("a", None);
        f.body = atom(Atom::Divides(2, card(var(a))));
        assert!(eval_formula(&f, 2, &[set(&[0, 1])]).unwrap());
        assert!(!eval_formula(&f, 2, &[set(&[1])]).unwrap());
    }

    #[test]
    fn rejects_out_of_universe_sets() {
        let mut f = Formula::new();
        f.var("a", None);
        assert!(eval_formula(&f, 1, &[set(&[3])]).is_err());
    }
}
