//! Finite model from a successful elimination run.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{EliminationState, Problem};
use crate::config::Config;
use crate::qfbapa::lin_positive_support;
use crate::semantics::Interp;
use crate::syntax::{Concept, TOP_NAME};
use crate::{Error, Result};

/// Copies `(t)^1 .. (t)^{σ_N(v_t)}` of every surviving type, where `σ` is a
/// positive solution of the ERCBox system and `N` bounds every witness size.
/// Each copy of `t` gets the successors of the witness of `t`, mapped
/// injectively onto copies of the types realizing their regions.
pub fn extract_model(p: &Problem, st: &EliminationState, cfg: &Config) -> Result<Interp> {
    let alive: Vec<usize> = st.alive.iter().copied().collect();
    let sys = p.erc_system(&alive);
    let all: Vec<usize> = (0..alive.len()).collect();
    let sigma = lin_positive_support(&sys, &all)?
        .ok_or_else(|| Error::Internal("surviving types admit no positive ERCBox solution".into()))?;
    let n = alive.iter().map(|t| st.witnesses[t].universe_size()).max().unwrap_or(0).max(1);
    let mut copies = Vec::with_capacity(alive.len());
    let mut total = 0usize;
    for s in &sigma {
        let c = (s * BigInt::from(n)).to_usize().filter(|c| *c <= cfg.max_elements);
        let c = c.ok_or_else(|| Error::ResourceExceeded("extracted model too large".into()))?;
        total = total.saturating_add(c);
        if total > cfg.max_elements {
            return Err(Error::ResourceExceeded(format!("extracted model exceeds {} elements", cfg.max_elements)));
        }
        copies.push(c);
    }

    let mut model = Interp::default();
    let mut first = HashMap::new();
    for (k, t) in alive.iter().enumerate() {
        first.insert(*t, model.size());
        for i in 1..=copies[k] {
            model.add_element(format!("t{t}.{i}"));
        }
    }
    for c in &p.closure {
        if let Concept::Name(a) = c {
            if a != TOP_NAME {
                model.concepts.entry(a.clone()).or_default();
            }
        }
    }
    for r in &p.roles {
        model.roles.entry(r.clone()).or_default();
    }
    for (k, t) in alive.iter().enumerate() {
        for ci in 0..p.closure.len() {
            if let (Concept::Name(a), true) = (&p.closure[ci], p.types[*t].concepts[ci]) {
                if a != TOP_NAME {
                    for i in 0..copies[k] {
                        model.insert_concept(a, first[t] + i);
                    }
                }
            }
        }
    }

    let nb = p.bases.len();
    let nr = p.roles.len();
    for t in &alive {
        // Successor targets of one copy; identical for all copies of `t`.
        let mut used: HashMap<usize, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (signs, count) in &st.witnesses[t].regions {
            let target = p
                .region_type(signs)
                .filter(|u| st.alive.contains(u))
                .ok_or_else(|| Error::Internal("witness region is not realized".into()))?;
            let named = signs[nb + nr..].iter().any(|s| *s);
            for _ in 0..*count {
                let idx = if named {
                    0
                } else {
                    let c = used.entry(target).or_insert(0);
                    *c += 1;
                    *c - 1
                };
                let k = alive.iter().position(|u| *u == target).expect("alive");
                if idx >= copies[k] {
                    return Err(Error::Internal("not enough copies for an injective successor map".into()));
                }
                for (ri, r) in p.roles.iter().enumerate() {
                    if signs[nb + ri] {
                        edges.push((r.clone(), first[&target] + idx));
                    }
                }
            }
        }
        let k = alive.iter().position(|u| u == t).expect("alive");
        for i in 0..copies[k] {
            for (r, e) in &edges {
                model.insert_edge(r, first[t] + i, *e);
            }
        }
    }
    for (name, t) in &st.chosen {
        model.individuals.insert(name.clone(), first[t]);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use crate::config::Config;
    use crate::consist::consistent;
    use crate::semantics::satisfies;
    use crate::syntax::parse_kb;

    #[test]
    fn counts_follow_the_erc() {
        let kb = parse_kb("abox: A(a)\nerc: card(A) + 1 <= card(B)").unwrap();
        let out = consistent(&kb, &Config::default()).unwrap();
        let m = out.model().unwrap();
        assert!(satisfies(m, &kb).unwrap().is_model());
        assert!(m.concepts["A"].len() < m.concepts["B"].len());
    }

    #[test]
    fn individuals_share_a_type_when_forced() {
        let kb = parse_kb("abox: r(a, b)\nabox: r(a, c)\nabox: succ(card(r) <= 1)(a)").unwrap();
        let m = consistent(&kb, &Config::default()).unwrap().model().unwrap().clone();
        assert_eq!(m.individuals["b"], m.individuals["c"]);
    }
}
