//! Augmented types `(t, V)`.

use serde::Serialize;

use super::Problem;
use crate::config::Config;
use crate::qfbapa::{self, atom, sparse_bound, var, Solution};
use crate::syntax::{Atom, SetTerm};
use crate::{Error, Result};

/// A type together with the non-empty Venn regions of a witness solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugType {
    pub t: usize,
    pub regions: Vec<Vec<bool>>,
    pub witness: Solution,
}

impl AugType {
    pub fn from_witness(t: usize, witness: Solution) -> Self {
        let regions = witness.regions.iter().map(|(r, _)| r.clone()).collect();
        AugType { t, regions, witness }
    }

    /// Number of successors `k_(t,V)` in the witness.
    pub fn k(&self) -> u64 {
        self.witness.universe_size()
    }
}

/// `φ_t′` has a solution whose non-empty regions are exactly `regions`.
pub fn support_witness(p: &Problem, t: usize, regions: &[Vec<bool>], cfg: &Config) -> Result<Option<Solution>> {
    let mut f = p.phi_t_prime(t)?;
    let cover = SetTerm::union_all(regions.iter().map(|r| {
        SetTerm::inter_all(r.iter().enumerate().map(|(v, s)| if *s { var(v) } else { SetTerm::complement(var(v)) }))
    }));
    f.conjoin(atom(Atom::SetSub(SetTerm::Universe, cover)));
    qfbapa::solve_with_support(&f, regions, &[], cfg)
}

/// Every augmented type of `p`, by brute force over region sets of size at
/// most `N_t`. Only regions realizable by some type and lying in some role are
/// candidates. Meant for small inputs; bounded by `cfg.max_branches`.
pub fn augmented_types(p: &Problem, cfg: &Config) -> Result<Vec<AugType>> {
    let nb = p.bases.len();
    let nr = p.roles.len();
    let mut candidates = Vec::new();
    for ty in &p.types {
        let base: Vec<bool> = p.bases.iter().map(|b| ty.concepts[*b]).collect();
        for mask in 1u64..(1 << nr) {
            let mut r = base.clone();
            r.extend((0..nr).map(|i| mask & (1 << i) != 0));
            r.extend(ty.inds.iter().copied());
            debug_assert_eq!(r.len(), nb + nr + p.inds.len());
            candidates.push(r);
        }
    }
    let mut out = Vec::new();
    let mut budget = cfg.max_branches;
    for t in 0..p.types.len() {
        let bound = sparse_bound(&p.phi_t_prime(t)?, cfg) as usize;
        let mut pick = Vec::new();
        subsets(p, t, &candidates, 0, bound, &mut pick, &mut out, &mut budget, cfg)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn subsets(
    p: &Problem,
    t: usize,
    cand: &[Vec<bool>],
    from: usize,
    bound: usize,
    pick: &mut Vec<Vec<bool>>,
    out: &mut Vec<AugType>,
    budget: &mut usize,
    cfg: &Config,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::ResourceExceeded("augmented type enumeration exceeds the branch cap".into()));
    }
    *budget -= 1;
    cfg.check_deadline()?;
    if let Some(w) = support_witness(p, t, pick, cfg)? {
        out.push(AugType { t, regions: pick.clone(), witness: w });
    }
    if pick.len() == bound {
        return Ok(());
    }
    for i in from..cand.len() {
        pick.push(cand[i].clone());
        subsets(p, t, cand, i + 1, bound, pick, out, budget, cfg)?;
        pick.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_kb, Concept};

    #[test]
    fn empty_region_set_for_role_free_type() {
        let kb = parse_kb("abox: A(a)\nabox: succ(card(r) >= 0)(a)").unwrap();
        let p = Problem::new(&kb.abox, &Vec::new(), &[], &Config::default()).unwrap();
        let all = augmented_types(&p, &Config::default()).unwrap();
        let t = (0..p.types.len())
            .find(|t| p.type_has_ind(*t, 0) && p.type_has(*t, &Concept::name("A")))
            .unwrap();
        assert!(all.iter().any(|a| a.t == t && a.regions.is_empty()));
        for a in &all {
            assert!(a.witness.satisfies(&p.phi_t_prime(a.t).unwrap()));
            assert_eq!(a.witness.regions.len(), a.regions.len());
        }
    }

    #[test]
    fn role_assertion_forces_a_region() {
        let kb = parse_kb("abox: r(a, b)").unwrap();
        let p = Problem::new(&kb.abox, &Vec::new(), &[], &Config::default()).unwrap();
        let all = augmented_types(&p, &Config::default()).unwrap();
        for a in all.iter().filter(|a| p.type_has_ind(a.t, 0)) {
            let b = p.bases.len() + p.roles.len() + 1;
            assert!(a.regions.iter().any(|r| r[b] && r[p.bases.len()]));
        }
    }
}
