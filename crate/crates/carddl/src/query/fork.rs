//! Fork elimination, fork rewritings and canonical forms up to renaming.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::Query;
use crate::{Error, Result};

/// Sort atoms and drop duplicates.
pub fn tidy(mut q: Query) -> Query {
    q.role_atoms.sort();
    q.role_atoms.dedup();
    q.concept_atoms.sort();
    q.concept_atoms.dedup();
    q
}

/// Replace every occurrence of variable `from` by `to`.
pub fn merge_vars(q: &Query, from: &str, to: &str) -> Query {
    let s = |v: &String| if v == from { to.to_string() } else { v.clone() };
    tidy(Query {
        role_atoms: q.role_atoms.iter().map(|(r, x, y)| (r.clone(), s(x), s(y))).collect(),
        concept_atoms: q.concept_atoms.iter().map(|(c, z)| (c.clone(), s(z))).collect(),
    })
}

/// Rename variables by `map` (variables outside the map are kept).
pub fn rename(q: &Query, map: &BTreeMap<String, String>) -> Query {
    let s = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
    tidy(Query {
        role_atoms: q.role_atoms.iter().map(|(r, x, y)| (r.clone(), s(x), s(y))).collect(),
        concept_atoms: q.concept_atoms.iter().map(|(c, z)| (c.clone(), s(z))).collect(),
    })
}

/// Pairs of distinct variables that are parents of a common child.
fn forks(q: &Query) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for (i, (_, y, x)) in q.role_atoms.iter().enumerate() {
        for (_, z, x2) in &q.role_atoms[i + 1..] {
            if x == x2 && y != z {
                out.insert(if y < z { (y.clone(), z.clone()) } else { (z.clone(), y.clone()) });
            }
        }
    }
    out
}

/// One result per pair of atoms `r(y,x)`, `s(z,x)` with `y ≠ z`: the query with
/// `y` and `z` identified (the larger name is replaced by the smaller).
pub fn fork_eliminations(q: &Query) -> Vec<(Query, (String, String))> {
    forks(q).into_iter().map(|(y, z)| (merge_vars(q, &z, &y), (y, z))).collect()
}

/// Closure of `{q}` under fork elimination, canonicalized.
pub fn fork_rewritings(q: &Query, cap: usize) -> Result<BTreeSet<Query>> {
    let start = canonical(q)?;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut todo = vec![start];
    while let Some(p) = todo.pop() {
        for (next, _) in fork_eliminations(&p) {
            let c = canonical(&next)?;
            if seen.insert(c.clone()) {
                if seen.len() > cap {
                    return Err(Error::ResourceExceeded(format!("more than {cap} fork rewritings")));
                }
                todo.push(c);
            }
        }
    }
    Ok(seen)
}

/// Exhaustive fork elimination, always taking the first available fork.
pub fn maximal_fork_rewriting(q: &Query) -> Query {
    maximal_fork_rewriting_by(q, |_| 0)
}

/// Exhaustive fork elimination where `pick(n)` selects which of the `n`
/// available eliminations to apply next.
pub fn maximal_fork_rewriting_by(q: &Query, mut pick: impl FnMut(usize) -> usize) -> Query {
    let mut cur = tidy(q.clone());
    loop {
        let f: Vec<_> = forks(&cur).into_iter().collect();
        if f.is_empty() {
            return cur;
        }
        let (y, z) = &f[pick(f.len()) % f.len()];
        cur = merge_vars(&cur, z, y);
    }
}

const PERMUTATION_CAP: usize = 100_000;

/// Representative of the renaming class of `q`: variables become `v0, v1, ...`
/// in the order minimizing the sorted atom list.
pub fn canonical(q: &Query) -> Result<Query> {
    let vars: Vec<String> = q.vars().into_iter().collect();
    // Colour refinement narrows the orders to try.
    let idx: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut color: Vec<String> = vars
        .iter()
        .map(|v| {
            let mut cs: Vec<String> =
                q.concept_atoms.iter().filter(|(_, z)| z == v).map(|(c, _)| c.to_string()).collect();
            cs.sort();
            cs.join(",")
        })
        .collect();
    for _ in 0..vars.len().max(1) {
        let next: Vec<String> = (0..vars.len())
            .map(|i| {
                let mut nb: Vec<String> = q
                    .role_atoms
                    .iter()
                    .filter_map(|(r, x, y)| {
                        let (xi, yi) = (idx[x.as_str()], idx[y.as_str()]);
                        match (xi == i, yi == i) {
                            (true, true) => Some(format!("loop {r}")),
                            (true, false) => Some(format!("out {r} {}", color[yi])),
                            (false, true) => Some(format!("in {r} {}", color[xi])),
                            _ => None,
                        }
                    })
                    .collect();
                nb.sort();
                format!("{}[{}]", color[i], nb.join(";"))
            })
            .collect();
        let changed = distinct(&next) != distinct(&color);
        color = next;
        if !changed {
            break;
        }
    }
    let mut classes: BTreeMap<&String, Vec<usize>> = BTreeMap::new();
    for (i, c) in color.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = classes.into_values().collect();
    let total = groups.iter().try_fold(1usize, |acc, g| {
        (1..=g.len()).try_fold(acc, |a, k| a.checked_mul(k)).filter(|a| *a <= PERMUTATION_CAP)
    });
    if total.is_none() {
        return Err(Error::ResourceExceeded("query too symmetric to canonicalize".into()));
    }
    let mut best: Option<Query> = None;
    let mut order = Vec::new();
    orders(&groups, 0, &mut order, &mut |ord| {
        let map: BTreeMap<String, String> =
            ord.iter().enumerate().map(|(k, i)| (vars[*i].clone(), format!("v{k}"))).collect();
        let cand = rename(q, &map);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    });
    Ok(best.unwrap_or_else(|| tidy(q.clone())))
}

fn distinct(v: &[String]) -> usize {
    v.iter().collect::<BTreeSet<_>>().len()
}

fn orders(groups: &[Vec<usize>], g: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if g == groups.len() {
        f(prefix);
        return;
    }
    permute(&groups[g], &mut vec![false; groups[g].len()], prefix, &mut |p| orders(groups, g + 1, p, f));
}

fn permute(items: &[usize], used: &mut Vec<bool>, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&mut Vec<usize>)) {
    if used.iter().all(|u| *u) {
        f(prefix);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            prefix.push(items[i]);
            permute(items, used, prefix, f);
            prefix.pop();
            used[i] = false;
        }
    }
}

/// `a` and `b` are equal up to variable renaming.
pub fn alpha_equivalent(a: &Query, b: &Query) -> Result<bool> {
    Ok(canonical(a)? == canonical(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_query;

    fn q0() -> Query {
        parse_query("r(x,y), r(x,z), r(t,z), s(t,y)").unwrap()
    }

    #[test]
    fn fork_merges_x_and_t() {
        let elims = fork_eliminations(&q0());
        assert!(elims.iter().any(|(_, p)| *p == ("t".to_string(), "x".to_string())));
        let merged = parse_query("r(x,y), r(x,z), s(x,y)").unwrap();
        assert!(alpha_equivalent(&maximal_fork_rewriting(&q0()), &merged).unwrap());
        let all = fork_rewritings(&q0(), 100).unwrap();
        assert!(all.contains(&canonical(&q0()).unwrap()));
        assert!(all.contains(&canonical(&merged).unwrap()));
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn forkless_queries_are_fixed_points() {
        let q = parse_query("r(x,y), s(y,z), A(z)").unwrap();
        assert!(fork_eliminations(&q).is_empty());
        assert_eq!(maximal_fork_rewriting(&q), tidy(q.clone()));
        assert_eq!(fork_rewritings(&q, 10).unwrap().len(), 1);
        let single = parse_query("r(x,y)").unwrap();
        assert!(fork_eliminations(&single).is_empty());
    }

    #[test]
    fn canonical_ignores_names() {
        let a = parse_query("r(x,y), A(y), s(y,x)").unwrap();
        let b = parse_query("r(u,w), A(w), s(w,u)").unwrap();
        let c = parse_query("r(u,w), A(u), s(w,u)").unwrap();
        assert!(alpha_equivalent(&a, &b).unwrap());
        assert!(!alpha_equivalent(&a, &c).unwrap());
    }

    #[test]
    fn rewriting_is_idempotent() {
        let m = maximal_fork_rewriting(&q0());
        assert_eq!(maximal_fork_rewriting(&m), m);
    }
}
