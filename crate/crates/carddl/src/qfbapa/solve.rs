//! Satisfiability search: literals become linear rows over region counts,
//! disjunctions are explored depth first with LP-based pruning, and each
//! leaf is settled by an exact integer feasibility check.

use std::collections::BTreeMap;

use super::lattice::{int_feasible, IntOutcome};
use super::linear::{lp_feasible, Cmp, Row};
use super::venn::{decompose, Decomposition};
use super::{Formula, Pa, QAtom, Solution};
use crate::config::Config;
use crate::syntax::{Atom, Constraint, PaExpr};
use crate::{Error, Result};

#[derive(Clone, Debug)]
enum Node {
    Rows(Vec<Row>),
    And(Vec<Node>),
    Or(Vec<Node>),
}

struct Builder<'a> {
    dec: &'a Decomposition,
    free: Vec<bool>,
}

impl Builder<'_> {
    fn fresh(&mut self, free: bool) -> usize {
        self.free.push(free);
        self.free.len() - 1
    }

    fn lin(&self, e: &Pa, scale: i128, acc: &mut BTreeMap<usize, i128>, k: &mut i128) {
        match e {
            PaExpr::Const(c) => *k += scale * *c as i128,
            PaExpr::Card(t) => {
                for c in self.dec.cells_of(t) {
                    *acc.entry(c).or_insert(0) += scale;
                }
            }
            PaExpr::Sum(a, b) => {
                self.lin(a, scale, acc, k);
                self.lin(b, scale, acc, k);
            }
            PaExpr::Mul(n, a) => self.lin(a, scale * *n as i128, acc, k),
        }
    }

    /// `k - l` as (coefficients, constant).
    fn diff(&self, k: &Pa, l: &Pa) -> (Vec<(usize, i128)>, i128) {
        let mut acc = BTreeMap::new();
        let mut c = 0;
        self.lin(k, 1, &mut acc, &mut c);
        self.lin(l, -1, &mut acc, &mut c);
        (acc.into_iter().collect(), c)
    }

    fn literal(&mut self, a: &QAtom, positive: bool) -> Node {
        match a {
            Atom::SetEq(s, t) | Atom::SetSub(s, t) => {
                let cells = self.dec.violating_cells(s, t, matches!(a, Atom::SetEq(..)));
                let coeffs = cells.into_iter().map(|c| (c, 1)).collect();
                if positive {
                    Node::Rows(vec![Row::new(coeffs, Cmp::Eq, 0)])
                } else {
                    Node::Rows(vec![Row::new(coeffs, Cmp::Ge, 1)])
                }
            }
            Atom::CardEq(k, l) => {
                let (d, c) = self.diff(k, l);
                if positive {
                    Node::Rows(vec![Row::new(d, Cmp::Eq, -c)])
                } else {
                    Node::Or(vec![
                        Node::Rows(vec![Row::new(d.clone(), Cmp::Ge, 1 - c)]),
                        Node::Rows(vec![Row::new(d, Cmp::Le, -1 - c)]),
                    ])
                }
            }
            Atom::CardLt(k, l) => {
                let (d, c) = self.diff(k, l);
                if positive {
                    Node::Rows(vec![Row::new(d, Cmp::Le, -1 - c)])
                } else {
                    Node::Rows(vec![Row::new(d, Cmp::Ge, -c)])
                }
            }
            Atom::Divides(n, l) => {
                let n = *n as i128;
                let (mut d, c) = self.diff(l, &PaExpr::Const(0));
                if positive {
                    let m = self.fresh(true);
                    d.push((m, -n));
                    Node::Rows(vec![Row::new(d, Cmp::Eq, -c)])
                } else if n == 1 {
                    Node::Or(vec![])
                } else {
                    let m = self.fresh(true);
                    let rho = self.fresh(false);
                    d.push((m, -n));
                    d.push((rho, -1));
                    Node::Rows(vec![
                        Row::new(d, Cmp::Eq, -c),
                        Row::new(vec![(rho, 1)], Cmp::Ge, 1),
                        Row::new(vec![(rho, 1)], Cmp::Le, n - 1),
                    ])
                }
            }
        }
    }

    fn node(&mut self, c: &Constraint<usize>, positive: bool) -> Node {
        match (c, positive) {
            (Constraint::Atom(a), p) => self.literal(a, p),
            (Constraint::Not(c), p) => self.node(c, !p),
            (Constraint::And(v), true) | (Constraint::Or(v), false) => {
                Node::And(v.iter().map(|c| self.node(c, positive)).collect())
            }
            (Constraint::Or(v), true) | (Constraint::And(v), false) => {
                Node::Or(v.iter().map(|c| self.node(c, positive)).collect())
            }
        }
    }
}

/// Rows that hold in every branch of `n`.
fn definite_rows(n: &Node, out: &mut Vec<Row>) {
    match n {
        Node::Rows(r) => out.extend(r.iter().cloned()),
        Node::And(v) => v.iter().for_each(|c| definite_rows(c, out)),
        Node::Or(v) if v.len() == 1 => definite_rows(&v[0], out),
        Node::Or(_) => {}
    }
}

struct Search<'a> {
    free: Vec<bool>,
    cfg: &'a Config,
    nodes: usize,
    incomplete: bool,
}

impl Search<'_> {
    fn lp(&self, rows: &[Row]) -> bool {
        lp_feasible(self.free.len(), &self.free, rows).is_some()
    }

    fn run(&mut self, mut committed: Vec<Row>, mut pending: Vec<Node>) -> Result<Option<Vec<i128>>> {
        self.nodes += 1;
        if self.nodes > self.cfg.max_branches {
            return Err(Error::ResourceExceeded(format!("more than {} search nodes", self.cfg.max_branches)));
        }
        self.cfg.check_deadline()?;
        let mut ors: Vec<Vec<Node>> = Vec::new();
        loop {
            while let Some(n) = pending.pop() {
                match n {
                    Node::Rows(r) => committed.extend(r),
                    Node::And(v) => pending.extend(v),
                    Node::Or(mut v) => match v.len() {
                        0 => return Ok(None),
                        1 => pending.push(v.pop().unwrap()),
                        _ => ors.push(v),
                    },
                }
            }
            if !self.lp(&committed) {
                return Ok(None);
            }
            let mut units = Vec::new();
            for (i, or) in ors.iter_mut().enumerate() {
                let mut keep = Vec::with_capacity(or.len());
                for d in or.drain(..) {
                    let mut rows = committed.clone();
                    definite_rows(&d, &mut rows);
                    if self.lp(&rows) {
                        keep.push(d);
                    }
                }
                if keep.is_empty() {
                    return Ok(None);
                }
                if keep.len() == 1 {
                    units.push(i);
                }
                *or = keep;
            }
            if units.is_empty() {
                break;
            }
            for i in units.into_iter().rev() {
                let mut or = ors.swap_remove(i);
                pending.push(or.pop().unwrap());
            }
        }
        if ors.is_empty() {
            return Ok(match int_feasible(self.free.len(), &self.free, &committed, self.cfg.max_bb_nodes) {
                IntOutcome::Feasible(x) => Some(x),
                IntOutcome::Infeasible => None,
                IntOutcome::Unknown => {
                    self.incomplete = true;
                    None
                }
            });
        }
        let pick = (0..ors.len()).min_by_key(|&i| ors[i].len()).unwrap();
        let branch = ors.swap_remove(pick);
        for d in branch {
            let mut pend: Vec<Node> = ors.iter().map(|o| Node::Or(o.clone())).collect();
            pend.push(d);
            if let Some(x) = self.run(committed.clone(), pend)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

fn solve_impl(
    f: &Formula,
    all_vars: bool,
    extra: impl FnOnce(&Decomposition) -> Result<Vec<Row>>,
    cfg: &Config,
) -> Result<Option<Solution>> {
    let dec = decompose(f, all_vars, cfg)?;
    let mut b = Builder { dec: &dec, free: vec![false; dec.ncount] };
    let mut rows = extra(&dec)?;
    for gc in &dec.groups {
        for ci in 0..gc.classes.len() {
            let mut coeffs: Vec<(usize, i128)> = gc
                .cells
                .iter()
                .enumerate()
                .filter(|(_, (c, _))| *c == ci)
                .map(|(i, _)| (gc.offset + i, 1))
                .collect();
            coeffs.extend(gc.class_of_region.iter().enumerate().filter(|(_, c)| **c == ci).map(|(r, _)| (r, -1)));
            rows.push(Row::new(coeffs, Cmp::Eq, 0));
        }
    }
    let root = b.node(&f.body, true);
    let mut search = Search { free: b.free, cfg, nodes: 0, incomplete: false };
    match search.run(rows, vec![root])? {
        Some(x) => {
            let counts: Vec<u64> = x[..dec.ncount]
                .iter()
                .map(|v| u64::try_from(*v).map_err(|_| Error::Internal("negative region count".into())))
                .collect::<Result<_>>()?;
            let sol = Solution { nvars: f.vars.len(), regions: dec.assemble(&counts) };
            if !sol.satisfies(f) {
                return Err(Error::Internal("solver witness does not satisfy the formula".into()));
            }
            Ok(Some(sol))
        }
        None if search.incomplete => {
            Err(Error::ResourceExceeded("integer feasibility search budget exhausted".into()))
        }
        None => Ok(None),
    }
}

/// Decide `f`; a returned solution satisfies `f` exactly.
pub fn solve(f: &Formula, cfg: &Config) -> Result<Option<Solution>> {
    solve_impl(f, false, |_| Ok(Vec::new()), cfg)
}

/// Decide `f` with the regions in `must_nonempty` non-empty and those in
/// `must_empty` empty. Regions are full sign vectors over the variable table;
/// every variable must be shared.
pub fn solve_with_support(
    f: &Formula,
    must_nonempty: &[Vec<bool>],
    must_empty: &[Vec<bool>],
    cfg: &Config,
) -> Result<Option<Solution>> {
    if f.groups.iter().any(|g| g.is_some()) {
        return Err(Error::Invalid("support constraints need a formula without local groups".into()));
    }
    if must_nonempty.iter().any(|r| must_empty.contains(r)) {
        return Err(Error::Invalid("region required both empty and non-empty".into()));
    }
    if must_nonempty.iter().chain(must_empty).any(|r| r.len() != f.vars.len()) {
        return Err(Error::Invalid("region length differs from the variable table".into()));
    }
    let mut missing = false;
    let res = solve_impl(
        f,
        true,
        |dec| {
            let mut rows = Vec::new();
            for (regs, nonempty) in [(must_nonempty, true), (must_empty, false)] {
                for r in regs {
                    match dec.regions.iter().position(|s| s == r) {
                        Some(i) if nonempty => rows.push(Row::new(vec![(i, 1)], Cmp::Ge, 1)),
                        Some(i) => rows.push(Row::new(vec![(i, 1)], Cmp::Eq, 0)),
                        None if nonempty => missing = true,
                        None => {}
                    }
                }
            }
            Ok(rows)
        },
        cfg,
    )?;
    if missing {
        return Ok(None);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfbapa::{atom, card, var};
    use crate::syntax::{card_ge, card_le, SetTerm};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn forced_empty_but_required() {
        let mut f = Formula::new();
        let e = f.var("e", None);
        f.body = Constraint::and([
            card_ge(card(var(e)), PaExpr::Const(1)),
            atom(Atom::SetEq(var(e), SetTerm::Empty)),
        ]);
        assert!(solve(&f, &cfg()).unwrap().is_none());
    }

    #[test]
    fn example_psi_is_unsat() {
        // |X_A| >= 4 ∧ X_A ⊆ X_r ∧ |X_r| <= 3, with X_r in a local group
        let mut f = Formula::new();
        let a = f.var("X_A", None);
        let r = f.var("X_r^t1", Some(0));
        f.body = Constraint::and([
            card_ge(card(var(a)), PaExpr::Const(4)),
            atom(Atom::SetSub(var(a), var(r))),
            card_le(card(var(r)), PaExpr::Const(3)),
        ]);
        assert!(solve(&f, &cfg()).unwrap().is_none());
    }

    #[test]
    fn divisibility_witness() {
        // |a| = 3 ∧ 2 | |a ∩ b| ∧ b ⊆ a
        let mut f = Formula::new();
        let (a, b) = (f.var("a", None), f.var("b", None));
        f.body = Constraint::and([
            atom(Atom::CardEq(card(var(a)), PaExpr::Const(3))),
            atom(Atom::Divides(2, card(SetTerm::inter(var(a), var(b))))),
            atom(Atom::SetSub(var(b), var(a))),
        ]);
        let s = solve(&f, &cfg()).unwrap().unwrap();
        assert!([0, 2].contains(&s.term_count(&SetTerm::inter(var(a), var(b)))));
        assert_eq!(s.term_count(&var(a)), 3);
    }

    #[test]
    fn negated_divisibility() {
        let mut f = Formula::new();
        let a = f.var("a", None);
        f.body = Constraint::and([
            Constraint::negate(atom(Atom::Divides(3, card(var(a))))),
            card_le(card(var(a)), PaExpr::Const(2)),
            card_ge(card(var(a)), PaExpr::Const(1)),
        ]);
        let s = solve(&f, &cfg()).unwrap().unwrap();
        assert!(s.term_count(&var(a)) % 3 != 0);
        f.conjoin(Constraint::negate(atom(Atom::Divides(1, card(var(a))))));
        assert!(solve(&f, &cfg()).unwrap().is_none());
    }

    #[test]
    fn support_constraints() {
        let mut f = Formula::new();
        let a = f.var("a", None);
        f.body = card_ge(card(var(a)), PaExpr::Const(1));
        assert!(solve_with_support(&f, &[vec![true]], &[], &cfg()).unwrap().is_some());
        assert!(solve_with_support(&f, &[], &[vec![true]], &cfg()).unwrap().is_none());
        let s = solve_with_support(&f, &[vec![true], vec![false]], &[], &cfg()).unwrap().unwrap();
        assert!(s.region_count(&[false]) >= 1);
    }

    #[test]
    fn groups_couple_through_shared_regions() {
        // shared A with |A| = 2, two groups each requiring their set to equal A
        let mut f = Formula::new();
        let a = f.var("A", None);
        let r1 = f.var("r1", Some(0));
        let r2 = f.var("r2", Some(1));
        f.body = Constraint::and([
            atom(Atom::CardEq(card(var(a)), PaExpr::Const(2))),
            atom(Atom::SetEq(var(r1), var(a))),
            atom(Atom::CardEq(card(var(r2)), PaExpr::Const(1))),
            atom(Atom::SetSub(var(r2), var(a))),
        ]);
        let s = solve(&f, &cfg()).unwrap().unwrap();
        assert_eq!(s.term_count(&var(r1)), 2);
        assert_eq!(s.term_count(&var(r2)), 1);
        assert!(s.satisfies(&f));
    }
}
