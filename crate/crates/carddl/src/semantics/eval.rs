//! Concept evaluation under the global and the local reading of constraints.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::bits::Bits;
use super::interp::Interp;
use crate::syntax::{encode::ecbox_to_concept, Assertion, Atom, Concept, Constraint, Kb, PaExpr, SetTerm, SetVar};
use crate::{Error, Result};

/// Memoizing evaluator over one interpretation.
pub struct Evaluator<'a> {
    i: &'a Interp,
    n: usize,
    memo: HashMap<Concept, Bits>,
    allow_constr: bool,
    allow_succ: bool,
}

struct Ctx {
    d: usize,
    univ: Bits,
    roles: HashMap<String, Bits>,
}

/// Successor-local context: sets are subsets of the successors of `d`.
struct Local {
    d: usize,
    univ: BTreeSet<usize>,
}

impl<'a> Evaluator<'a> {
    pub fn new(i: &'a Interp) -> Self {
        Evaluator { i, n: i.size(), memo: HashMap::new(), allow_constr: true, allow_succ: true }
    }

    /// Only global constraint expressions are accepted.
    pub fn pp(i: &'a Interp) -> Self {
        Evaluator { allow_succ: false, ..Evaluator::new(i) }
    }

    /// Only successor expressions are accepted.
    pub fn scc(i: &'a Interp) -> Self {
        Evaluator { allow_constr: false, ..Evaluator::new(i) }
    }

    pub fn ext(&mut self, c: &Concept) -> Result<Bits> {
        if let Some(b) = self.memo.get(c) {
            return Ok(b.clone());
        }
        let n = self.n;
        let b = match c {
            Concept::Name(a) => Bits::from_iter(n, self.i.concepts.get(a).into_iter().flatten().copied()),
            Concept::And(v) => {
                let mut acc = Bits::full(n);
                for d in v {
                    acc = acc.and(&self.ext(d)?);
                }
                acc
            }
            Concept::Or(v) => {
                let mut acc = Bits::empty(n);
                for d in v {
                    acc = acc.or(&self.ext(d)?);
                }
                acc
            }
            Concept::Not(d) => Bits::full(n).minus(&self.ext(d)?),
            Concept::Constr(k) => {
                self.check_dialect(c)?;
                if n > 0 && is_global(k) {
                    if self.constraint_at(k, 0, false)? {
                        Bits::full(n)
                    } else {
                        Bits::empty(n)
                    }
                } else {
                    self.pointwise(k, false)?
                }
            }
            Concept::Succ(k) => {
                self.check_dialect(c)?;
                self.pointwise(k, true)?
            }
        };
        self.memo.insert(c.clone(), b.clone());
        Ok(b)
    }

    /// Membership of a single element, evaluating constraint expressions only at `d`.
    pub fn holds_at(&mut self, c: &Concept, d: usize) -> Result<bool> {
        if let Some(b) = self.memo.get(c) {
            return Ok(b.contains(d));
        }
        match c {
            Concept::Name(a) => Ok(self.i.in_concept(a, d)),
            Concept::And(v) => {
                for x in v {
                    if !self.holds_at(x, d)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Concept::Or(v) => {
                for x in v {
                    if self.holds_at(x, d)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Concept::Not(x) => Ok(!self.holds_at(x, d)?),
            Concept::Constr(k) => {
                self.check_dialect(c)?;
                self.constraint_at(k, d, false)
            }
            Concept::Succ(k) => {
                self.check_dialect(c)?;
                self.constraint_at(k, d, true)
            }
        }
    }

    fn check_dialect(&self, c: &Concept) -> Result<()> {
        match c {
            Concept::Constr(_) if !self.allow_constr => {
                Err(Error::Invalid("constraint expression sat(...) in an ALCSCC concept".into()))
            }
            Concept::Succ(_) if !self.allow_succ => {
                Err(Error::Invalid("successor expression succ(...) in an ALCSCC++ concept".into()))
            }
            _ => Ok(()),
        }
    }

    fn pointwise(&mut self, k: &Constraint<SetVar>, local: bool) -> Result<Bits> {
        let mut out = Bits::empty(self.n);
        for d in 0..self.n {
            if self.constraint_at(k, d, local)? {
                out.insert(d);
            }
        }
        Ok(out)
    }

    fn constraint_at(&mut self, k: &Constraint<SetVar>, d: usize, local: bool) -> Result<bool> {
        if local {
            let ctx = Local { d, univ: self.i.ars(d)? };
            return self.local_constraint(k, &ctx);
        }
        let mut ctx = Ctx { d, univ: Bits::full(self.n), roles: HashMap::new() };
        self.constraint(k, &mut ctx)
    }

    fn member(&mut self, c: &Concept, d: usize) -> Result<bool> {
        if !self.memo.contains_key(c) {
            self.ext(c)?;
        }
        Ok(self.memo[c].contains(d))
    }

    fn local_constraint(&mut self, k: &Constraint<SetVar>, ctx: &Local) -> Result<bool> {
        Ok(match k {
            Constraint::Atom(a) => match a {
                Atom::SetEq(s, t) => self.local_term(s, ctx)? == self.local_term(t, ctx)?,
                Atom::SetSub(s, t) => self.local_term(s, ctx)?.is_subset(&self.local_term(t, ctx)?),
                Atom::CardEq(k, l) => self.local_pa(k, ctx)? == self.local_pa(l, ctx)?,
                Atom::CardLt(k, l) => self.local_pa(k, ctx)? < self.local_pa(l, ctx)?,
                Atom::Divides(m, l) => self.local_pa(l, ctx)?.rem_euclid(*m as i128) == 0,
            },
            Constraint::And(v) => {
                for x in v {
                    if !self.local_constraint(x, ctx)? {
                        return Ok(false);
                    }
                }
                true
            }
            Constraint::Or(v) => {
                for x in v {
                    if self.local_constraint(x, ctx)? {
                        return Ok(true);
                    }
                }
                false
            }
            Constraint::Not(x) => !self.local_constraint(x, ctx)?,
        })
    }

    fn local_pa(&mut self, e: &PaExpr<SetVar>, ctx: &Local) -> Result<i128> {
        Ok(match e {
            PaExpr::Const(c) => *c as i128,
            PaExpr::Card(s) => self.local_term(s, ctx)?.len() as i128,
            PaExpr::Sum(a, b) => self.local_pa(a, ctx)? + self.local_pa(b, ctx)?,
            PaExpr::Mul(m, a) => *m as i128 * self.local_pa(a, ctx)?,
        })
    }

    fn local_term(&mut self, s: &SetTerm<SetVar>, ctx: &Local) -> Result<BTreeSet<usize>> {
        Ok(match s {
            SetTerm::Empty => BTreeSet::new(),
            SetTerm::Universe => ctx.univ.clone(),
            SetTerm::Var(SetVar::Concept(c)) => {
                let mut out = BTreeSet::new();
                for &e in &ctx.univ {
                    if self.member(c, e)? {
                        out.insert(e);
                    }
                }
                out
            }
            SetTerm::Var(SetVar::Role(r)) => self.i.successors(r, ctx.d).collect(),
            SetTerm::Var(SetVar::Indiv(b)) => {
                let d = *self
                    .i
                    .individuals
                    .get(b)
                    .ok_or_else(|| Error::Invalid(format!("individual '{b}' is not interpreted")))?;
                ctx.univ.iter().copied().filter(|e| *e == d).collect()
            }
            SetTerm::Union(a, b) => &self.local_term(a, ctx)? | &self.local_term(b, ctx)?,
            SetTerm::Inter(a, b) => &self.local_term(a, ctx)? & &self.local_term(b, ctx)?,
            SetTerm::Complement(a) => &ctx.univ - &self.local_term(a, ctx)?,
        })
    }

    fn constraint(&mut self, k: &Constraint<SetVar>, ctx: &mut Ctx) -> Result<bool> {
        Ok(match k {
            Constraint::Atom(a) => self.atom(a, ctx)?,
            Constraint::And(v) => {
                for x in v {
                    if !self.constraint(x, ctx)? {
                        return Ok(false);
                    }
                }
                true
            }
            Constraint::Or(v) => {
                for x in v {
                    if self.constraint(x, ctx)? {
                        return Ok(true);
                    }
                }
                false
            }
            Constraint::Not(x) => !self.constraint(x, ctx)?,
        })
    }

    fn atom(&mut self, a: &Atom<SetVar>, ctx: &mut Ctx) -> Result<bool> {
        Ok(match a {
            Atom::SetEq(s, t) => self.term(s, ctx)? == self.term(t, ctx)?,
            Atom::SetSub(s, t) => self.term(s, ctx)?.is_subset(&self.term(t, ctx)?),
            Atom::CardEq(k, l) => self.pa(k, ctx)? == self.pa(l, ctx)?,
            Atom::CardLt(k, l) => self.pa(k, ctx)? < self.pa(l, ctx)?,
            Atom::Divides(m, l) => self.pa(l, ctx)?.rem_euclid(*m as i128) == 0,
        })
    }

    fn pa(&mut self, e: &PaExpr<SetVar>, ctx: &mut Ctx) -> Result<i128> {
        Ok(match e {
            PaExpr::Const(c) => *c as i128,
            PaExpr::Card(s) => self.term(s, ctx)?.count() as i128,
            PaExpr::Sum(a, b) => self.pa(a, ctx)? + self.pa(b, ctx)?,
            PaExpr::Mul(m, a) => *m as i128 * self.pa(a, ctx)?,
        })
    }

    fn term(&mut self, s: &SetTerm<SetVar>, ctx: &mut Ctx) -> Result<Bits> {
        Ok(match s {
            SetTerm::Empty => Bits::empty(self.n),
            SetTerm::Universe => ctx.univ.clone(),
            SetTerm::Var(SetVar::Concept(c)) => self.ext(c)?,
            SetTerm::Var(SetVar::Role(r)) => {
                let (i, n, d) = (self.i, self.n, ctx.d);
                ctx.roles.entry(r.clone()).or_insert_with(|| Bits::from_iter(n, i.successors(r, d))).clone()
            }
            SetTerm::Var(SetVar::Indiv(b)) => {
                let d = *self
                    .i
                    .individuals
                    .get(b)
                    .ok_or_else(|| Error::Invalid(format!("individual '{b}' is not interpreted")))?;
                Bits::from_iter(self.n, [d])
            }
            SetTerm::Union(a, b) => self.term(a, ctx)?.or(&self.term(b, ctx)?),
            SetTerm::Inter(a, b) => self.term(a, ctx)?.and(&self.term(b, ctx)?),
            SetTerm::Complement(a) => {
                let x = self.term(a, ctx)?;
                ctx.univ.minus(&x)
            }
        })
    }
}

/// A constraint without role or individual variables has the same value at every element.
fn is_global(k: &Constraint<SetVar>) -> bool {
    let mut global = true;
    k.for_each_var(&mut |v| {
        if !matches!(v, SetVar::Concept(_)) {
            global = false
        }
    });
    global
}

fn to_set(b: Bits) -> BTreeSet<usize> {
    b.iter().collect()
}

/// `C^I` accepting both constraint and successor expressions.
pub fn eval(i: &Interp, c: &Concept) -> Result<BTreeSet<usize>> {
    Evaluator::new(i).ext(c).map(to_set)
}

/// `C^I` for an ALCSCC++ concept.
pub fn eval_pp(i: &Interp, c: &Concept) -> Result<BTreeSet<usize>> {
    Evaluator::pp(i).ext(c).map(to_set)
}

/// `C^I` for an ALCSCC concept.
pub fn eval_scc(i: &Interp, c: &Concept) -> Result<BTreeSet<usize>> {
    Evaluator::scc(i).ext(c).map(to_set)
}

pub fn holds_at(i: &Interp, c: &Concept, d: usize) -> Result<bool> {
    Evaluator::new(i).holds_at(c, d)
}

/// Outcome of checking an interpretation against a KB.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub satisfied: bool,
    pub violations: Vec<String>,
}

impl Report {
    pub fn is_model(&self) -> bool {
        self.satisfied
    }
}

/// Check every CI, assertion, ERCBox constraint, the ECBox and the goal.
pub fn satisfies(i: &Interp, kb: &Kb) -> Result<Report> {
    let mut v = Vec::new();
    if let Err(e) = i.validate() {
        v.push(e.to_string());
        return Ok(Report { satisfied: false, violations: v });
    }
    for a in kb.individuals() {
        if !i.individuals.contains_key(&a) {
            v.push(format!("individual {a} is not interpreted"));
        }
    }
    if !v.is_empty() {
        return Ok(Report { satisfied: false, violations: v });
    }
    let mut ev = Evaluator::new(i);
    for ci in &kb.tbox {
        let bad = ev.ext(&ci.sub)?.minus(&ev.ext(&ci.sup)?);
        let first = bad.iter().next();
        if let Some(d) = first {
            v.push(format!("{ci} fails at {}", i.labels[d]));
        }
    }
    for a in &kb.abox {
        let ok = match a {
            Assertion::Concept(c, x) => ev.ext(c)?.contains(i.individuals[x]),
            Assertion::Role(r, x, y) => i.has_edge(r, i.individuals[x], i.individuals[y]),
            Assertion::NotRole(r, x, y) => !i.has_edge(r, i.individuals[x], i.individuals[y]),
        };
        if !ok {
            v.push(format!("assertion {a} fails"));
        }
    }
    let card = |ev: &mut Evaluator, side: &[(i64, Concept)]| -> Result<i128> {
        side.iter().map(|(n, c)| Ok(*n as i128 * ev.ext(c)?.count() as i128)).sum()
    };
    let mut atom_err = None;
    let mut failed = Vec::new();
    let holds = kb.erc.holds(&mut |s| {
        let r = (|| Ok::<_, Error>(card(&mut ev, &s.lhs)? + s.offset as i128 <= card(&mut ev, &s.rhs)?))();
        match r {
            Ok(b) => {
                if !b {
                    failed.push(s.to_string());
                }
                b
            }
            Err(e) => {
                atom_err.get_or_insert(e);
                false
            }
        }
    });
    if let Some(e) = atom_err {
        return Err(e);
    }
    if !holds {
        v.push(format!("ERCBox fails (violated: {})", failed.join("; ")));
    }
    if let Some(ec) = &kb.ec {
        if ev.ext(&ecbox_to_concept(ec))?.is_empty() {
            v.push("ECBox fails".into());
        }
    }
    if let Some(g) = &kb.goal {
        if ev.ext(g)?.is_empty() {
            v.push(format!("goal {g} has an empty extension"));
        }
    }
    Ok(Report { satisfied: v.is_empty(), violations: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_kb, Signature};

    fn all_a(n: usize) -> Interp {
        let mut i = Interp::new(n, &Signature::default());
        for d in 0..n {
            i.insert_concept("A", d);
        }
        i.roles.insert("r".into(), BTreeSet::new());
        i
    }

    #[test]
    fn example_one_concepts() {
        let i = all_a(4);
        let e = parse_concept("sat(card(A) >= 4) and sat(A <= r) and sat(card(r) <= 3)").unwrap();
        assert!(eval_pp(&i, &e).unwrap().is_empty());
        let g = parse_concept("sat(card(A) >= 4)").unwrap();
        assert_eq!(eval_pp(&i, &g).unwrap().len(), 4);
        let e2 = parse_concept("succ(A <= r) and succ(card(r) <= 3)").unwrap();
        assert_eq!(eval_scc(&i, &e2).unwrap().len(), 4);
    }

    #[test]
    fn dialect_violations() {
        let i = all_a(1);
        assert!(eval_pp(&i, &parse_concept("succ(card(r) >= 1)").unwrap()).is_err());
        assert!(eval_scc(&i, &parse_concept("sat(card(r) >= 1)").unwrap()).is_err());
    }

    #[test]
    fn isolated_successor_semantics() {
        let i = all_a(1);
        assert!(eval_scc(&i, &parse_concept("succ(card(r) >= 1)").unwrap()).unwrap().is_empty());
        assert_eq!(eval_scc(&i, &parse_concept("succ(card(r) = 0)").unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn kb_reports() {
        let i = all_a(1);
        assert!(satisfies(&i, &Kb::default()).unwrap().is_model());
        let mut j = Interp::new(1, &Signature::default());
        j.individuals.insert("a".into(), 0);
        let kb = parse_kb("abox: A(a)").unwrap();
        let r = satisfies(&j, &kb).unwrap();
        assert_eq!(r.violations.len(), 1);
        let kb = parse_kb("abox: A(a)\nerc: card(A) + 1 <= card(A)").unwrap();
        j.insert_concept("A", 0);
        assert!(!satisfies(&j, &kb).unwrap().is_model());
    }
}
