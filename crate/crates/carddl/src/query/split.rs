//! Splittings of a query with respect to a set of individual names, and
//! rolling tree-shaped queries up into concepts.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::syntax::{card_ge, Concept, PaExpr, Query, SetTerm, SetVar};
use crate::{Error, Result};

/// `q` restricted to the atoms whose variables all lie in `vars`.
pub fn restrict(q: &Query, vars: &BTreeSet<String>) -> Query {
    Query {
        role_atoms: q.role_atoms.iter().filter(|(_, x, y)| vars.contains(x) && vars.contains(y)).cloned().collect(),
        concept_atoms: q.concept_atoms.iter().filter(|(_, z)| vars.contains(z)).cloned().collect(),
    }
}

/// Distinct directed edges of `G_q` among `vars`.
fn edges(q: &Query, vars: &BTreeSet<String>) -> BTreeSet<(String, String)> {
    q.role_atoms
        .iter()
        .filter(|(_, x, y)| vars.contains(x) && vars.contains(y))
        .map(|(_, x, y)| (x.clone(), y.clone()))
        .collect()
}

/// Weakly connected components of `G_q` restricted to `vars`.
pub fn components(q: &Query, vars: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let e = edges(q, vars);
    let mut left: BTreeSet<String> = vars.clone();
    let mut out = Vec::new();
    while let Some(start) = left.iter().next().cloned() {
        left.remove(&start);
        let mut comp = BTreeSet::from([start.clone()]);
        let mut todo = vec![start];
        while let Some(v) = todo.pop() {
            for (x, y) in &e {
                let other = if *x == v { y } else if *y == v { x } else { continue };
                if left.remove(other) {
                    comp.insert(other.clone());
                    todo.push(other.clone());
                }
            }
        }
        out.push(comp);
    }
    out
}

/// The root when `G_q` restricted to `vars` is a directed tree.
pub fn tree_root(q: &Query, vars: &BTreeSet<String>) -> Option<String> {
    if vars.is_empty() {
        return None;
    }
    let e = edges(q, vars);
    if e.iter().any(|(x, y)| x == y) || e.len() + 1 != vars.len() {
        return None;
    }
    let mut indeg: BTreeMap<&String, usize> = vars.iter().map(|v| (v, 0)).collect();
    for (_, y) in &e {
        *indeg.get_mut(y).expect("edge inside vars") += 1;
    }
    let roots: Vec<&String> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    if roots.len() != 1 || indeg.values().any(|d| *d > 1) || components(q, vars).len() != 1 {
        return None;
    }
    Some(roots[0].clone())
}

pub fn is_tree_shaped(q: &Query) -> bool {
    tree_root(q, &q.vars()).is_some()
}

/// `C_{q,x}` for a tree-shaped `q` and a variable `x` of it.
pub fn roll_up(q: &Query, x: &str) -> Result<Concept> {
    let vars = q.vars();
    if tree_root(q, &vars).is_none() {
        return Err(Error::Invalid("roll-up needs a tree-shaped query".into()));
    }
    Ok(roll(q, x))
}

pub(crate) fn roll(q: &Query, x: &str) -> Concept {
    let mut parts: Vec<Concept> = q.concept_atoms.iter().filter(|(_, z)| z == x).map(|(c, _)| c.clone()).collect();
    let children: BTreeSet<&String> = q.role_atoms.iter().filter(|(_, a, _)| a == x).map(|(_, _, b)| b).collect();
    for y in children {
        let roles: BTreeSet<&String> =
            q.role_atoms.iter().filter(|(_, a, b)| a == x && b == y).map(|(r, _, _)| r).collect();
        parts.push(exists(roles.into_iter().cloned(), roll(q, y)));
    }
    Concept::and(parts)
}

/// `∃(s₁ ∩ … ∩ s_k).C` as `succ(card(s₁ inter … inter s_k inter C) >= 1)`.
pub fn exists(roles: impl IntoIterator<Item = String>, c: Concept) -> Concept {
    let mut terms: Vec<SetTerm<SetVar>> = roles.into_iter().map(|r| SetTerm::var(SetVar::Role(r))).collect();
    if !c.is_top() {
        terms.push(SetTerm::var(SetVar::Concept(c)));
    }
    Concept::succ(card_ge(PaExpr::card(SetTerm::inter_all(terms)), PaExpr::Const(1)))
}

/// A splitting `(R, T, S_1..S_n, μ, ν)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Splitting {
    /// `ν` on the variables of `R`.
    pub nu: BTreeMap<String, String>,
    /// Tree components of `q|T` with their roots.
    pub t: Vec<(BTreeSet<String>, String)>,
    /// `S_i` with its root.
    pub s: Vec<(BTreeSet<String>, String)>,
    pub mu: Vec<String>,
}

impl Splitting {
    pub fn r(&self) -> BTreeSet<String> {
        self.nu.keys().cloned().collect()
    }
}

/// Every splitting of `q` w.r.t. the individual names `inds`. Once `R` and
/// `ν` are fixed the rest is forced: the components of the remaining
/// variables are `T`-trees when untouched by `R` and `S`-trees otherwise.
pub fn splittings(q: &Query, inds: &[String], cap: usize) -> Result<Vec<Splitting>> {
    let vars: Vec<String> = q.vars().into_iter().collect();
    let mut out = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; vars.len()];
    let mut visited = 0usize;
    assign_r(q, inds, &vars, 0, &mut assign, &mut out, &mut visited, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn assign_r(
    q: &Query,
    inds: &[String],
    vars: &[String],
    k: usize,
    assign: &mut Vec<Option<usize>>,
    out: &mut Vec<Splitting>,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    if k == vars.len() {
        *visited += 1;
        if *visited > cap {
            return Err(Error::ResourceExceeded(format!("more than {cap} candidate splittings")));
        }
        let nu: BTreeMap<String, String> = vars
            .iter()
            .zip(assign.iter())
            .filter_map(|(v, a)| a.map(|i| (v.clone(), inds[i].clone())))
            .collect();
        if let Some(s) = complete(q, nu) {
            out.push(s);
        }
        return Ok(());
    }
    for choice in std::iter::once(None).chain((0..inds.len()).map(Some)) {
        assign[k] = choice;
        assign_r(q, inds, vars, k + 1, assign, out, visited, cap)?;
    }
    assign[k] = None;
    Ok(())
}

fn complete(q: &Query, nu: BTreeMap<String, String>) -> Option<Splitting> {
    let r: BTreeSet<String> = nu.keys().cloned().collect();
    let rest: BTreeSet<String> = q.vars().difference(&r).cloned().collect();
    let mut t = Vec::new();
    let mut s = Vec::new();
    let mut mu = Vec::new();
    for comp in components(q, &rest) {
        let root = tree_root(q, &comp)?;
        let mut sources = BTreeSet::new();
        for (_, x, y) in &q.role_atoms {
            match (r.contains(x), comp.contains(x), r.contains(y), comp.contains(y)) {
                (true, _, _, true) => {
                    if *y != root {
                        return None;
                    }
                    sources.insert(x.clone());
                }
                (_, true, true, _) => return None,
                _ => {}
            }
        }
        match sources.len() {
            0 => t.push((comp, root)),
            1 => {
                mu.push(sources.into_iter().next().expect("one source"));
                s.push((comp, root));
            }
            _ => return None,
        }
    }
    Some(Splitting { nu, t, s, mu })
}

/// Direct check of the splitting conditions, used to audit [`splittings`].
pub fn is_splitting(q: &Query, sp: &Splitting) -> bool {
    let r = sp.r();
    let mut all: Vec<&BTreeSet<String>> = sp.t.iter().map(|(c, _)| c).chain(sp.s.iter().map(|(c, _)| c)).collect();
    let rset = r.clone();
    all.push(&rset);
    let covered: usize = all.iter().map(|c| c.len()).sum();
    let union: BTreeSet<&String> = all.iter().flat_map(|c| c.iter()).collect();
    if covered != union.len() || union.len() != q.vars().len() || sp.mu.len() != sp.s.len() {
        return false;
    }
    let tvars: BTreeSet<String> = sp.t.iter().flat_map(|(c, _)| c.iter().cloned()).collect();
    let t_ok = components(q, &tvars)
        .iter()
        .all(|c| tree_root(q, c).is_some_and(|root| sp.t.iter().any(|(cc, rr)| cc == c && *rr == root)));
    let s_ok = sp.s.iter().all(|(c, root)| tree_root(q, c).as_deref() == Some(root.as_str()));
    if !t_ok || !s_ok || sp.t.len() != components(q, &tvars).len() {
        return false;
    }
    let block = |v: &String| -> Option<usize> {
        if r.contains(v) {
            return Some(0);
        }
        if let Some(i) = sp.t.iter().position(|(c, _)| c.contains(v)) {
            return Some(1 + i);
        }
        sp.s.iter().position(|(c, _)| c.contains(v)).map(|i| 1 + sp.t.len() + i)
    };
    for (_, x, y) in &q.role_atoms {
        if block(x) == block(y) {
            continue;
        }
        let ok = r.contains(x)
            && sp.s.iter().enumerate().any(|(i, (c, root))| c.contains(y) && y == root && sp.mu[i] == *x);
        if !ok {
            return false;
        }
    }
    sp.s.iter()
        .enumerate()
        .all(|(i, (_, root))| q.role_atoms.iter().any(|(_, x, y)| *x == sp.mu[i] && y == root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_query};

    #[test]
    fn single_concept_atom() {
        let q = parse_query("A(x)").unwrap();
        let sp = splittings(&q, &["a".to_string()], 1000).unwrap();
        assert_eq!(sp.len(), 2);
        assert!(sp.iter().any(|s| s.nu.get("x").map(String::as_str) == Some("a")));
        assert!(sp.iter().any(|s| s.t.len() == 1 && s.nu.is_empty()));
    }

    #[test]
    fn cycle_in_t_rejected() {
        let q = parse_query("r(x,y), r(y,x)").unwrap();
        let sp = splittings(&q, &[], 1000).unwrap();
        assert!(sp.is_empty());
        let sp = splittings(&q, &["a".to_string()], 1000).unwrap();
        assert!(sp.iter().all(|s| !s.nu.is_empty()));
        assert!(sp.iter().all(|s| is_splitting(&q, s)));
    }

    #[test]
    fn roll_up_examples() {
        assert_eq!(roll_up(&parse_query("A(x)").unwrap(), "x").unwrap(), Concept::name("A"));
        let c = roll_up(&parse_query("A(x), r(x,y), B(y)").unwrap(), "x").unwrap();
        assert_eq!(c, parse_concept("A and succ(card(r inter B) >= 1)").unwrap());
        let c = roll_up(&parse_query("r(x,y), s(x,y), B(y)").unwrap(), "x").unwrap();
        assert_eq!(c, parse_concept("succ(card(r inter s inter B) >= 1)").unwrap());
        assert!(roll_up(&parse_query("r(x,y), r(y,x)").unwrap(), "x").is_err());
    }
}
