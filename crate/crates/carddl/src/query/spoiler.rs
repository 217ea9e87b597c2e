//! Spoilers: small knowledge bases that rule out every forest-shaped match.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::fork::fork_rewritings;
use super::split::{exists, restrict, roll, splittings, Splitting};
use crate::config::Config;
use crate::syntax::{Assertion, Ci, Concept, Query};
use crate::{Error, Result};

/// One spoiler clause.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    /// `⊤ ⊑ ¬C`.
    Kill(#[serde(serialize_with = "as_string")] Concept),
    /// `¬C(a)`.
    NotConcept(#[serde(serialize_with = "as_string")] Concept, String),
    /// `¬r(a, b)`.
    NotRole(String, String, String),
}

fn as_string<S: serde::Serializer>(c: &Concept, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Kill(c) => write!(f, "top <= not ({c})"),
            Clause::NotConcept(c, a) => write!(f, "(not ({c}))({a})"),
            Clause::NotRole(r, a, b) => write!(f, "not {r}({a}, {b})"),
        }
    }
}

/// A spoiler `K_s = (A_s, T_s)`, kept as its clause set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Spoiler {
    pub clauses: BTreeSet<Clause>,
}

impl Spoiler {
    pub fn abox_part(&self) -> Vec<Assertion> {
        self.clauses
            .iter()
            .filter_map(|c| match c {
                Clause::NotConcept(d, a) => Some(Assertion::Concept(Concept::not(d.clone()), a.clone())),
                Clause::NotRole(r, a, b) => Some(Assertion::NotRole(r.clone(), a.clone(), b.clone())),
                Clause::Kill(_) => None,
            })
            .collect()
    }

    pub fn tbox_part(&self) -> Vec<Ci> {
        self.clauses
            .iter()
            .filter_map(|c| match c {
                Clause::Kill(d) => Some(Ci { sub: Concept::top(), sup: Concept::not(d.clone()) }),
                _ => None,
            })
            .collect()
    }

    /// `K_s` hits the clause set of every (rewriting, splitting) pair.
    pub fn spoils_all(&self, family: &[BTreeSet<Clause>]) -> bool {
        family.iter().all(|f| !f.is_disjoint(&self.clauses))
    }
}

/// The clauses any one of which spoils `(q, Π)`.
pub fn clauses_for(q: &Query, sp: &Splitting) -> BTreeSet<Clause> {
    let mut out = BTreeSet::new();
    for (comp, root) in &sp.t {
        out.insert(Clause::Kill(roll(&restrict(q, comp), root)));
    }
    for (c, x) in &q.concept_atoms {
        if let Some(a) = sp.nu.get(x) {
            out.insert(Clause::NotConcept(c.clone(), a.clone()));
        }
    }
    for (r, x, y) in &q.role_atoms {
        if let (Some(a), Some(b)) = (sp.nu.get(x), sp.nu.get(y)) {
            out.insert(Clause::NotRole(r.clone(), a.clone(), b.clone()));
        }
    }
    for (i, (comp, root)) in sp.s.iter().enumerate() {
        let m = &sp.mu[i];
        let roles: BTreeSet<String> =
            q.role_atoms.iter().filter(|(_, x, y)| x == m && y == root).map(|(r, _, _)| r.clone()).collect();
        let d = exists(roles, roll(&restrict(q, comp), root));
        out.insert(Clause::NotConcept(d, sp.nu[m].clone()));
    }
    out
}

/// Clause sets of all pairs of a fork rewriting of `q` and one of its
/// splittings, with supersets of other sets removed.
pub fn clause_family(q: &Query, inds: &[String], cfg: &Config) -> Result<Vec<BTreeSet<Clause>>> {
    let mut all = BTreeSet::new();
    for rw in fork_rewritings(q, cfg.max_spoilers)? {
        for sp in splittings(&rw, inds, cfg.max_branches)? {
            all.insert(clauses_for(&rw, &sp));
        }
    }
    let all: Vec<BTreeSet<Clause>> = all.into_iter().collect();
    Ok(all
        .iter()
        .filter(|s| !all.iter().any(|o| o != *s && o.is_subset(s)))
        .cloned()
        .collect())
}

/// Every minimal clause set hitting the whole family, in a deterministic order.
pub fn super_spoilers(q: &Query, inds: &[String], cfg: &Config) -> Result<Vec<Spoiler>> {
    let family = clause_family(q, inds, cfg)?;
    let mut out = Vec::new();
    hitting_sets(&family, &mut BTreeSet::new(), &mut BTreeSet::new(), &mut |h| {
        if is_minimal(h, &family) {
            let s = Spoiler { clauses: h.clone() };
            if !out.contains(&s) {
                out.push(s);
            }
        }
        if out.len() > cfg.max_spoilers {
            return Err(Error::ResourceExceeded(format!("more than {} super-spoilers", cfg.max_spoilers)));
        }
        Ok(true)
    })?;
    Ok(out)
}

pub fn is_minimal(h: &BTreeSet<Clause>, family: &[BTreeSet<Clause>]) -> bool {
    h.iter().all(|c| family.iter().any(|f| f.contains(c) && f.intersection(h).count() == 1))
}

/// Drop clauses from `h` while it still hits every set.
pub fn minimize(h: &BTreeSet<Clause>, family: &[BTreeSet<Clause>]) -> BTreeSet<Clause> {
    let mut cur = h.clone();
    for c in h {
        cur.remove(c);
        if !family.iter().all(|f| !f.is_disjoint(&cur)) {
            cur.insert(c.clone());
        }
    }
    cur
}

/// Branch on the clauses of the smallest set not yet hit. `visit` sees each
/// complete hitting set and returns `false` to stop. Clauses rejected on an
/// earlier branch stay excluded, so no set is produced twice.
pub(crate) fn hitting_sets(
    family: &[BTreeSet<Clause>],
    chosen: &mut BTreeSet<Clause>,
    banned: &mut BTreeSet<Clause>,
    visit: &mut dyn FnMut(&BTreeSet<Clause>) -> Result<bool>,
) -> Result<bool> {
    let open = family.iter().filter(|f| f.is_disjoint(chosen)).min_by_key(|f| f.len());
    let Some(open) = open else { return visit(chosen) };
    let options: Vec<Clause> = open.iter().filter(|c| !banned.contains(*c)).cloned().collect();
    let mut added = Vec::new();
    let mut go_on = true;
    for c in options {
        chosen.insert(c.clone());
        let cont = hitting_sets(family, chosen, banned, visit)?;
        chosen.remove(&c);
        banned.insert(c.clone());
        added.push(c);
        if !cont {
            go_on = false;
            break;
        }
    }
    for c in added {
        banned.remove(&c);
    }
    Ok(go_on)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_query;

    #[test]
    fn concept_query_spoilers() {
        let q = parse_query("B(x)").unwrap();
        let inds = vec!["a".to_string()];
        let family = clause_family(&q, &inds, &Config::default()).unwrap();
        let ss = super_spoilers(&q, &inds, &Config::default()).unwrap();
        assert_eq!(ss.len(), 1);
        let expect: BTreeSet<Clause> =
            [Clause::Kill(Concept::name("B")), Clause::NotConcept(Concept::name("B"), "a".into())].into_iter().collect();
        assert_eq!(ss[0].clauses, expect);
        for s in &ss {
            assert!(s.spoils_all(&family));
            assert!(is_minimal(&s.clauses, &family));
        }
    }

    #[test]
    fn minimize_keeps_hitting() {
        let q = parse_query("r(x,y), A(y)").unwrap();
        let inds = vec!["a".to_string(), "b".to_string()];
        let family = clause_family(&q, &inds, &Config::default()).unwrap();
        let everything: BTreeSet<Clause> = family.iter().flatten().cloned().collect();
        let m = minimize(&everything, &family);
        assert!(family.iter().all(|f| !f.is_disjoint(&m)));
        assert!(is_minimal(&m, &family));
    }
}
