//! ALCSCC++ concept satisfiability through a QFBAPA translation, and finite
//! model extraction from solutions of that translation.
//!
//! Every subdescription `C` of the input concept gets a shared set variable
//! `X_C`; every type `t` gets its own copy `X_r^t` of each role. The
//! translation states that the extension of the input is non-empty, that the
//! Boolean structure is respected, and that every type with elements
//! satisfies the constraint expressions it contains.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::config::Config;
use crate::qfbapa::{self, atom, card, var, Formula, QConstraint, Solution, Term};
use crate::semantics::{eval_pp, Interp};
use crate::syntax::{Atom, Concept, Constraint, PaExpr, SetTerm, SetVar, Signature, TOP_NAME};
use crate::{Error, Result};

/// All subdescriptions of `e` in pre-order, each followed by its negation.
pub fn closure_me(e: &Concept) -> Vec<Concept> {
    let mut out: Vec<Concept> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in e.subdescriptions() {
        for c in [s.clone(), Concept::not(s)] {
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out
}

/// Membership signs over the closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TypeSet {
    pub signs: Vec<bool>,
}

impl TypeSet {
    pub fn members<'a>(&'a self, closure: &'a [Concept]) -> impl Iterator<Item = &'a Concept> + 'a {
        closure.iter().zip(&self.signs).filter(|(_, s)| **s).map(|(c, _)| c)
    }

    pub fn contains(&self, closure: &[Concept], c: &Concept) -> bool {
        closure.iter().position(|d| d == c).is_some_and(|i| self.signs[i])
    }
}

fn is_base(c: &Concept) -> bool {
    matches!(c, Concept::Name(_) | Concept::Constr(_) | Concept::Succ(_))
}

/// Truth of closure members under a sign choice for the base members.
fn propagate(closure: &[Concept], index: &HashMap<&Concept, usize>, signs: &mut [Option<bool>]) {
    fn value(c: &Concept, index: &HashMap<&Concept, usize>, signs: &mut [Option<bool>]) -> bool {
        let i = index[c];
        if let Some(v) = signs[i] {
            return v;
        }
        let v = match c {
            Concept::Not(d) => !value(d, index, signs),
            Concept::And(v) => v.iter().all(|d| value(d, index, signs)),
            Concept::Or(v) => v.iter().any(|d| value(d, index, signs)),
            _ => unreachable!("base members are assigned before propagation"),
        };
        signs[i] = Some(v);
        v
    }
    for c in closure {
        value(c, index, signs);
    }
}

/// Check the three type conditions directly.
pub fn is_type(closure: &[Concept], t: &TypeSet) -> bool {
    let has = |c: &Concept| t.contains(closure, c);
    closure.iter().zip(&t.signs).all(|(c, s)| {
        let neg_ok = match c {
            Concept::Not(d) => *s != has(d),
            _ => true,
        };
        let bool_ok = match c {
            Concept::And(v) => *s == v.iter().all(has),
            Concept::Or(v) => *s == v.iter().any(has),
            _ => true,
        };
        neg_ok && bool_ok
    })
}

/// The translation of one concept, with its closure, types and variable table.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub concept: Concept,
    pub closure: Vec<Concept>,
    pub types: Vec<TypeSet>,
    pub roles: Vec<String>,
    /// Formula holding the shared variables `X_C` (closure order) and the role
    /// copies `X_r^t` (type-major, roles sorted).
    pub table: Formula,
    /// Closure positions of the constraint expressions that mention no role.
    pub globals: Vec<usize>,
    role_vars: HashMap<(usize, String), usize>,
}

impl Reduction {
    pub fn new(e: &Concept, cfg: &Config) -> Result<Self> {
        if e.has_succ() {
            return Err(Error::Invalid("successor expression in an ALCSCC++ concept; translate it first".into()));
        }
        let closure = closure_me(e);
        let types = types_of_closure(&closure, cfg)?;
        let mut roles = BTreeSet::new();
        e.role_names(&mut roles);
        let roles: Vec<String> = roles.into_iter().collect();
        let mut table = Formula::new();
        for c in &closure {
            table.var(format!("X[{c}]"), None);
        }
        let mut role_vars = HashMap::new();
        if closure.iter().any(|c| matches!(c, Concept::Constr(_))) {
            for t in 0..types.len() {
                for r in &roles {
                    let v = table.var(format!("X[{r}]^t{t}"), Some(t));
                    role_vars.insert((t, r.clone()), v);
                }
            }
        }
        let globals = (0..closure.len())
            .filter(|i| match &closure[*i] {
                Concept::Constr(k) => {
                    let mut has_role = false;
                    k.for_each_var(&mut |v| has_role |= matches!(v, SetVar::Role(_)));
                    !has_role
                }
                _ => false,
            })
            .collect();
        Ok(Reduction { concept: e.clone(), closure, types, roles, table, globals, role_vars })
    }

    pub fn var_of(&self, c: &Concept) -> usize {
        self.closure.iter().position(|d| d == c).expect("closure member")
    }

    /// Types containing the input concept.
    pub fn types_containing(&self) -> Vec<&TypeSet> {
        let i = self.var_of(&self.concept);
        self.types.iter().filter(|t| t.signs[i]).collect()
    }

    fn translate(&self, k: &Constraint<SetVar>, t: usize) -> Result<QConstraint> {
        let mut err = None;
        let out = k.subst(&mut |v| match v {
            SetVar::Concept(c) => var(self.var_of(c)),
            SetVar::Role(r) => var(self.role_vars[&(t, r.clone())]),
            SetVar::Indiv(b) => {
                err.get_or_insert_with(|| Error::Invalid(format!("individual {b} inside a concept")));
                SetTerm::Empty
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Body of `ψ_t`: the constraints of the constraint expressions of type `t`,
    /// negated for those it does not contain.
    pub fn psi_body(&self, t: usize) -> Result<QConstraint> {
        self.psi_parts(t, false)
    }

    fn psi_parts(&self, t: usize, local_only: bool) -> Result<QConstraint> {
        let mut parts = Vec::new();
        for (i, (c, s)) in self.closure.iter().zip(&self.types[t].signs).enumerate() {
            if let Concept::Constr(k) = c {
                if local_only && self.globals.contains(&i) {
                    continue;
                }
                let tr = self.translate(k, t)?;
                parts.push(if *s { tr } else { Constraint::negate(tr) });
            }
        }
        Ok(Constraint::and(parts))
    }

    /// `ψ_t` over the full variable table.
    pub fn psi_t(&self, t: usize) -> Result<Formula> {
        let mut f = self.table.clone();
        f.body = self.psi_body(t)?;
        Ok(f)
    }

    /// `β`: the Boolean structure of the closure.
    pub fn beta(&self) -> QConstraint {
        let x = |c: &Concept| var(self.var_of(c));
        let mut parts = Vec::new();
        for c in &self.closure {
            let rhs = match c {
                Concept::And(v) => SetTerm::inter_all(v.iter().map(x)),
                Concept::Or(v) => SetTerm::union_all(v.iter().map(x)),
                Concept::Not(d) => SetTerm::complement(x(d)),
                _ => continue,
            };
            parts.push(atom(Atom::SetEq(x(c), rhs)));
        }
        Constraint::and(parts)
    }

    fn type_term(&self, t: usize) -> Term {
        SetTerm::inter_all(
            self.types[t].signs.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| var(i)),
        )
    }

    /// `δ_E` restricted to the models in which the role-free constraint
    /// expressions `globals[i]` take the value `guess[i]`. Such expressions
    /// have the same value at every element, so `δ_E` is satisfiable iff one
    /// of these cases is, and each case only involves the agreeing types.
    pub fn delta_case(&self, guess: &[bool]) -> Result<Formula> {
        if guess.len() != self.globals.len() {
            return Err(Error::Invalid("one value per global constraint expression expected".into()));
        }
        let mut parts = vec![
            atom(Atom::CardLt(PaExpr::Const(0), card(var(self.var_of(&self.concept))))),
            self.beta(),
        ];
        let top = Concept::name(TOP_NAME);
        if self.closure.contains(&top) {
            parts.push(atom(Atom::SetEq(var(self.var_of(&top)), SetTerm::Universe)));
        }
        for (&g, &v) in self.globals.iter().zip(guess) {
            let Concept::Constr(k) = &self.closure[g] else { unreachable!("globals are constraint expressions") };
            let tr = self.translate(k, 0)?;
            parts.push(atom(Atom::SetEq(var(g), if v { SetTerm::Universe } else { SetTerm::Empty })));
            parts.push(if v { tr } else { Constraint::negate(tr) });
        }
        for t in 0..self.types.len() {
            let signs = &self.types[t].signs;
            if self.globals.iter().zip(guess).any(|(g, v)| signs[*g] != *v) {
                continue;
            }
            let psi = self.psi_parts(t, true)?;
            if psi == Constraint::truth() {
                continue;
            }
            let empty = atom(Atom::CardEq(card(self.type_term(t)), PaExpr::Const(0)));
            parts.push(Constraint::or([empty, psi]));
        }
        let mut f = self.table.clone();
        f.body = Constraint::and(parts);
        Ok(f)
    }

    /// `δ_E`.
    pub fn delta(&self) -> Result<Formula> {
        let mut parts = vec![
            atom(Atom::CardLt(PaExpr::Const(0), card(var(self.var_of(&self.concept))))),
            self.beta(),
        ];
        let top = Concept::name(TOP_NAME);
        if self.closure.contains(&top) {
            parts.push(atom(Atom::SetEq(var(self.var_of(&top)), SetTerm::Universe)));
        }
        for t in 0..self.types.len() {
            let psi = self.psi_body(t)?;
            if psi == Constraint::truth() {
                continue;
            }
            let empty = atom(Atom::CardEq(card(self.type_term(t)), PaExpr::Const(0)));
            parts.push(Constraint::or([empty, psi]));
        }
        let mut f = self.table.clone();
        f.body = Constraint::and(parts);
        Ok(f)
    }

    /// Shared signs of an element of the materialized solution.
    fn type_index(&self, signs: &[bool]) -> Result<usize> {
        let shared = &signs[..self.closure.len()];
        self.types
            .iter()
            .position(|t| t.signs == shared)
            .ok_or_else(|| Error::Invalid("solution region is not a type".into()))
    }

    /// Model built from copies of the realized types.
    pub fn extract_model(&self, sol: &Solution) -> Result<Interp> {
        if sol.nvars != self.table.vars.len() {
            return Err(Error::Invalid("solution does not match the variable table".into()));
        }
        let sets = sol.materialize();
        let mut elems: Vec<(usize, usize)> = Vec::new();
        let mut per_type: HashMap<usize, usize> = HashMap::new();
        for (signs, count) in &sol.regions {
            let t = self.type_index(signs)?;
            for _ in 0..*count {
                let j = per_type.entry(t).or_insert(0);
                *j += 1;
                elems.push((t, *j));
            }
        }
        let mut sig = Signature::default();
        self.concept.concept_names(&mut sig.concepts);
        sig.concepts.remove(TOP_NAME);
        sig.roles = self.roles.iter().cloned().collect();
        let mut m = Interp::with_labels(elems.iter().map(|(t, j)| format!("t{t}.{j}")).collect());
        m.extend_signature(&sig);
        for (d, (t, _)) in elems.iter().enumerate() {
            for c in self.types[*t].members(&self.closure) {
                if let Concept::Name(a) = c {
                    if a != TOP_NAME {
                        m.insert_concept(a, d);
                    }
                }
            }
            for r in &self.roles {
                if let Some(v) = self.role_vars.get(&(*t, r.clone())) {
                    for e in &sets[*v] {
                        m.insert_edge(r, d, *e);
                    }
                }
            }
        }
        Ok(m)
    }
}

fn types_of_closure(closure: &[Concept], cfg: &Config) -> Result<Vec<TypeSet>> {
    let index: HashMap<&Concept, usize> = closure.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let bases: Vec<usize> = (0..closure.len()).filter(|i| is_base(&closure[*i])).collect();
    let top = closure.iter().position(|c| *c == Concept::name(TOP_NAME));
    let free: Vec<usize> = bases.iter().copied().filter(|b| Some(*b) != top).collect();
    if free.len() >= usize::BITS as usize - 1 || (1usize << free.len()) > cfg.max_types {
        return Err(Error::ResourceExceeded(format!("2^{} types exceed the type cap", free.len())));
    }
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0..(1usize << free.len()) {
        let mut signs = vec![None; closure.len()];
        if let Some(t) = top {
            signs[t] = Some(true);
        }
        for (k, b) in free.iter().enumerate() {
            signs[*b] = Some(mask & (1 << (free.len() - 1 - k)) != 0);
        }
        propagate(closure, &index, &mut signs);
        out.push(TypeSet { signs: signs.into_iter().map(|s| s.expect("propagated")).collect() });
    }
    Ok(out)
}

/// All types of `e`.
pub fn types_of(e: &Concept, cfg: &Config) -> Result<Vec<TypeSet>> {
    types_of_closure(&closure_me(e), cfg)
}

#[derive(Clone, Debug)]
pub enum SatOutcome {
    Sat { solution: Solution, model: Interp },
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        !self.is_sat()
    }

    pub fn model(&self) -> Option<&Interp> {
        match self {
            SatOutcome::Sat { model, .. } => Some(model),
            SatOutcome::Unsat => None,
        }
    }
}

/// Decide satisfiability of `e`; a positive answer carries an audited model.
pub fn sat(e: &Concept, cfg: &Config) -> Result<SatOutcome> {
    let red = Reduction::new(e, cfg)?;
    let g = red.globals.len();
    if g >= usize::BITS as usize - 1 || (1usize << g) > cfg.max_types {
        return Err(Error::ResourceExceeded(format!("2^{g} global cases exceed the type cap")));
    }
    for mask in 0..(1usize << g) {
        let guess: Vec<bool> = (0..g).map(|i| mask & (1 << (g - 1 - i)) != 0).collect();
        let Some(solution) = qfbapa::solve(&red.delta_case(&guess)?, cfg)? else { continue };
        let model = red.extract_model(&solution)?;
        if eval_pp(&model, e)?.is_empty() {
            return Err(Error::Internal("extracted model has no instance of the concept".into()));
        }
        return Ok(SatOutcome::Sat { solution, model });
    }
    Ok(SatOutcome::Unsat)
}

/// Convenience wrapper building the reduction for `e` first.
pub fn extract_model(e: &Concept, sol: &Solution, cfg: &Config) -> Result<Interp> {
    Reduction::new(e, cfg)?.extract_model(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_concept;

    fn example_e() -> Concept {
        parse_concept("sat(card(A) >= 4) and sat(A <= r) and sat(card(r) <= 3)").unwrap()
    }

    #[test]
    fn closure_sizes() {
        assert_eq!(closure_me(&example_e()).len(), 10);
        let a = parse_concept("A").unwrap();
        assert_eq!(closure_me(&a), vec![a.clone(), Concept::not(a.clone())]);
        let na = parse_concept("not A").unwrap();
        assert_eq!(closure_me(&na), vec![na.clone(), a]);
    }

    #[test]
    fn types_are_coherent() {
        let e = parse_concept("(A and not B) or sat(card(A) = 1)").unwrap();
        let cl = closure_me(&e);
        let ts = types_of(&e, &Config::default()).unwrap();
        assert_eq!(ts.len(), 8);
        assert!(ts.iter().all(|t| is_type(&cl, t)));
    }

    #[test]
    fn example_one_is_unsat() {
        let red = Reduction::new(&example_e(), &Config::default()).unwrap();
        assert_eq!(red.types_containing().len(), 2);
        assert!(sat(&example_e(), &Config::default()).unwrap().is_unsat());
    }

    #[test]
    fn simple_verdicts() {
        let cfg = Config::default();
        assert!(sat(&parse_concept("A").unwrap(), &cfg).unwrap().is_sat());
        assert!(sat(&parse_concept("A and not A").unwrap(), &cfg).unwrap().is_unsat());
        let out = sat(&parse_concept("sat(card(A) = 1) and not A").unwrap(), &cfg).unwrap();
        let m = out.model().unwrap();
        assert_eq!(m.concepts["A"].len(), 1);
        assert!(m.size() >= 2);
    }

    #[test]
    fn case_split_matches_full_translation() {
        let cfg = Config::default();
        for text in [
            "sat(card(A) >= 4) and sat(A <= r) and sat(card(r) <= 3)",
            "sat(card(A) = 1) and not A",
            "sat(card(A) >= 2) and not sat(card(B) = 0) and sat(B <= A) and sat(card(r inter B) >= 1)",
            "(A and sat(card(not A) = 0)) or (B and sat(card(A) >= 1))",
            "sat(card(A) >= 1) and sat(card(A) = 0)",
        ] {
            let e = parse_concept(text).unwrap();
            let red = Reduction::new(&e, &cfg).unwrap();
            let full = qfbapa::solve(&red.delta().unwrap(), &cfg).unwrap().is_some();
            assert_eq!(sat(&e, &cfg).unwrap().is_sat(), full, "{text}");
        }
    }

    #[test]
    fn global_cardinality_model() {
        let out = sat(&parse_concept("sat(card(A) >= 4)").unwrap(), &Config::default()).unwrap();
        assert!(out.model().unwrap().concepts["A"].len() >= 4);
    }
}
