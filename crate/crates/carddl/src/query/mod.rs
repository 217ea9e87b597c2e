//! Conjunctive query entailment.
//!
//! Every pair of a fork rewriting and a splitting contributes the set of
//! spoiler clauses that would rule it out. The query is not entailed exactly
//! when some set of clauses hitting all pairs is consistent with the KB. The
//! search branches on clauses and stops a branch as soon as the partial
//! spoiler is inconsistent, since adding clauses cannot restore consistency.

pub mod fork;
pub mod spoiler;
pub mod split;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use fork::{
    alpha_equivalent, canonical, fork_eliminations, fork_rewritings, maximal_fork_rewriting,
    maximal_fork_rewriting_by,
};
pub use spoiler::{clause_family, clauses_for, super_spoilers, Clause, Spoiler};
pub use split::{is_splitting, is_tree_shaped, roll_up, splittings, Splitting};

use crate::config::Config;
use crate::consist::{consistent, Consistency};
use crate::semantics::{cq_match, satisfies, Interp};
use crate::syntax::{Assertion, Concept, Kb, Query};
use crate::transforms::cyclic_cover;
use crate::{Error, Result};

const ROOT_INDIVIDUAL: &str = "_root";

#[derive(Clone, Debug)]
pub enum Entailment {
    Entailed,
    NotEntailed { model: Interp, spoiler: Spoiler },
}

impl Entailment {
    pub fn is_entailed(&self) -> bool {
        matches!(self, Entailment::Entailed)
    }

    pub fn countermodel(&self) -> Option<&Interp> {
        match self {
            Entailment::NotEntailed { model, .. } => Some(model),
            Entailment::Entailed => None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EntailStats {
    pub pairs: usize,
    pub consistency_checks: usize,
}

/// `kb` extended by a spoiler.
pub fn with_spoiler(kb: &Kb, s: &Spoiler) -> Kb {
    let mut out = kb.clone();
    out.abox.extend(s.abox_part());
    out.tbox.extend(s.tbox_part());
    out
}

/// Does every model of `kb` admit a match of `q`? Negative answers carry a
/// countermodel that is audited against `kb` and `q`.
pub fn entails(kb: &Kb, q: &Query, cfg: &Config) -> Result<(Entailment, EntailStats)> {
    if kb.ec.is_some() {
        return Err(Error::Invalid("query entailment does not support ECBoxes".into()));
    }
    let mut stats = EntailStats::default();
    if q.atom_count() == 0 {
        return Ok((Entailment::Entailed, stats));
    }
    let mut base = kb.clone();
    let added_root = base.abox.is_empty();
    if added_root {
        base.abox.push(Assertion::Concept(Concept::top(), ROOT_INDIVIDUAL.into()));
    }
    let inds = base.individuals();
    let family = clause_family(q, &inds, cfg)?;
    stats.pairs = family.len();

    let mut cache: BTreeMap<BTreeSet<Clause>, bool> = BTreeMap::new();
    let mut check = |h: &BTreeSet<Clause>, stats: &mut EntailStats| -> Result<bool> {
        if let Some(v) = cache.get(h) {
            return Ok(*v);
        }
        cfg.check_deadline()?;
        stats.consistency_checks += 1;
        let s = Spoiler { clauses: h.clone() };
        let v = consistent(&with_spoiler(&base, &s), cfg)?.is_consistent();
        cache.insert(h.clone(), v);
        Ok(v)
    };
    let found = search(&family, &mut BTreeSet::new(), &mut BTreeSet::new(), &mut |h| check(h, &mut stats))?;
    let Some(hit) = found else { return Ok((Entailment::Entailed, stats)) };

    let spoiler = Spoiler { clauses: spoiler::minimize(&hit, &family) };
    let Consistency::Consistent { model, .. } = consistent(&with_spoiler(&base, &spoiler), cfg)? else {
        return Err(Error::Internal("a subset of a consistent spoiler became inconsistent".into()));
    };
    let mut model = cyclic_cover(&model, q.atom_count() + 2)?;
    if added_root {
        model.individuals.remove(ROOT_INDIVIDUAL);
    }
    if !satisfies(&model, kb)?.is_model() {
        return Err(Error::Internal("countermodel does not satisfy the knowledge base".into()));
    }
    if cq_match(&model, q)?.is_some() {
        return Err(Error::Internal("countermodel admits a match of the query".into()));
    }
    Ok((Entailment::NotEntailed { model, spoiler }, stats))
}

/// Depth-first search for a consistent hitting set; `ok` decides consistency
/// of partial sets.
fn search(
    family: &[BTreeSet<Clause>],
    chosen: &mut BTreeSet<Clause>,
    banned: &mut BTreeSet<Clause>,
    ok: &mut dyn FnMut(&BTreeSet<Clause>) -> Result<bool>,
) -> Result<Option<BTreeSet<Clause>>> {
    if !ok(chosen)? {
        return Ok(None);
    }
    let open = family.iter().filter(|f| f.is_disjoint(chosen)).min_by_key(|f| f.len());
    let Some(open) = open else { return Ok(Some(chosen.clone())) };
    let options: Vec<Clause> = open.iter().filter(|c| !banned.contains(*c)).cloned().collect();
    let mut added = Vec::new();
    let mut result = None;
    for c in options {
        chosen.insert(c.clone());
        let r = search(family, chosen, banned, ok)?;
        chosen.remove(&c);
        if r.is_some() {
            result = r;
            break;
        }
        banned.insert(c.clone());
        added.push(c);
    }
    for c in added {
        banned.remove(&c);
    }
    Ok(result)
}
