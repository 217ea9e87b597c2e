//! ABox consistency with respect to ERCBoxes (and a TBox) by type elimination.
//!
//! Types range over the subdescriptions of the input, their negations and the
//! individual names. Every surviving type `t` keeps one augmented type
//! `(t, V)`: a solution of `φ_t′` whose non-empty Venn regions are all realized
//! by surviving types. Witnesses are recomputed only when one of their regions
//! stops being realized, so the family is built lazily instead of listing every
//! augmented type up front.

pub mod aug;
pub mod extract;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::config::Config;
use crate::qfbapa::{self, atom, card, var, Formula, LinearSystem, QConstraint, Solution, Term};
use crate::semantics::Interp;
use crate::syntax::{
    Assertion, Atom, Ci, Concept, Constraint, Erc, Kb, PaExpr, SemiRestricted, SetTerm, SetVar, TOP_NAME,
};
use crate::{Error, Result};

pub use aug::{augmented_types, AugType};

/// Conjunction of semi-restricted constraints.
pub type ConjErc = Vec<SemiRestricted>;

/// One conjunctive ERCBox per valuation of the atoms that makes `r` true.
pub fn dnf_split(r: &Erc) -> Result<Vec<ConjErc>> {
    Ok(valuations(r)?.into_iter().map(|(_, c)| c).collect())
}

/// Only the valuations whose set of true atoms is ⊆-minimal; the others are
/// stronger and cannot be consistent when these are not.
pub fn minimal_dnf(r: &Erc) -> Result<Vec<ConjErc>> {
    let all = valuations(r)?;
    let masks: Vec<u32> = all.iter().map(|(m, _)| *m).collect();
    Ok(all
        .into_iter()
        .filter(|(m, _)| !masks.iter().any(|o| o != m && o & m == *o))
        .map(|(_, c)| c)
        .collect())
}

fn valuations(r: &Erc) -> Result<Vec<(u32, ConjErc)>> {
    let atoms = r.atoms();
    if atoms.len() > 20 {
        return Err(Error::ResourceExceeded(format!("{} ERCBox atoms", atoms.len())));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << atoms.len()) {
        let mut k = 0;
        let mut bits = Vec::with_capacity(atoms.len());
        for i in 0..atoms.len() {
            bits.push(mask & (1 << i) != 0);
        }
        let holds = r.holds(&mut |_| {
            k += 1;
            bits[k - 1]
        });
        if holds {
            out.push((mask, (0..atoms.len()).filter(|i| bits[*i]).map(|i| atoms[i].clone()).collect()));
        }
    }
    Ok(out)
}

/// Membership signs over the concept closure and the individual names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RaType {
    pub concepts: Vec<bool>,
    pub inds: Vec<bool>,
}

/// Closure, types and the shape of `φ_t′` for one input.
#[derive(Clone, Debug)]
pub struct Problem {
    pub abox: Vec<Assertion>,
    pub erc: ConjErc,
    pub tbox: Vec<Ci>,
    pub closure: Vec<Concept>,
    pub inds: Vec<String>,
    pub roles: Vec<String>,
    pub types: Vec<RaType>,
    /// Closure positions of names and successor expressions.
    pub bases: Vec<usize>,
    index: HashMap<Concept, usize>,
    by_signs: HashMap<(Vec<bool>, Vec<bool>), usize>,
}

impl Problem {
    pub fn new(abox: &[Assertion], erc: &ConjErc, tbox: &[Ci], cfg: &Config) -> Result<Self> {
        let mut concepts: Vec<&Concept> = Vec::new();
        let mut inds = BTreeSet::new();
        let mut roles = BTreeSet::new();
        for ci in tbox {
            concepts.push(&ci.sub);
            concepts.push(&ci.sup);
        }
        for a in abox {
            match a {
                Assertion::Concept(c, x) => {
                    concepts.push(c);
                    inds.insert(x.clone());
                }
                Assertion::Role(r, x, y) | Assertion::NotRole(r, x, y) => {
                    roles.insert(r.clone());
                    inds.insert(x.clone());
                    inds.insert(y.clone());
                }
            }
        }
        for s in erc {
            concepts.extend(s.lhs.iter().chain(&s.rhs).map(|(_, c)| c));
        }
        if concepts.iter().any(|c| c.has_constr()) {
            return Err(Error::Invalid("constraint expression sat(...) in an ALCSCC knowledge base".into()));
        }
        let mut closure = Vec::new();
        let mut index = HashMap::new();
        for c in &concepts {
            c.role_names(&mut roles);
            for s in c.subdescriptions() {
                for x in [s.clone(), Concept::not(s)] {
                    if !index.contains_key(&x) {
                        index.insert(x.clone(), closure.len());
                        closure.push(x);
                    }
                }
            }
        }
        let bases: Vec<usize> =
            (0..closure.len()).filter(|i| matches!(closure[*i], Concept::Name(_) | Concept::Succ(_))).collect();
        let mut p = Problem {
            abox: abox.to_vec(),
            erc: erc.clone(),
            tbox: tbox.to_vec(),
            closure,
            inds: inds.into_iter().collect(),
            roles: roles.into_iter().collect(),
            types: Vec::new(),
            bases,
            index,
            by_signs: HashMap::new(),
        };
        p.types = p.generate_types(cfg)?;
        p.by_signs = p.types.iter().enumerate().map(|(i, t)| ((p.base_signs(t), t.inds.clone()), i)).collect();
        Ok(p)
    }

    pub fn index_of(&self, c: &Concept) -> usize {
        self.index[c]
    }

    fn base_signs(&self, t: &RaType) -> Vec<bool> {
        self.bases.iter().map(|b| t.concepts[*b]).collect()
    }

    pub fn type_has(&self, t: usize, c: &Concept) -> bool {
        self.types[t].concepts[self.index[c]]
    }

    pub fn type_has_ind(&self, t: usize, b: usize) -> bool {
        self.types[t].inds[b]
    }

    /// Depth-first sign choice over the base members, pruning on the TBox.
    fn generate_types(&self, cfg: &Config) -> Result<Vec<RaType>> {
        let top = self.index.get(&Concept::name(TOP_NAME)).copied();
        let free: Vec<usize> = self.bases.iter().copied().filter(|b| Some(*b) != top).collect();
        let mut out = Vec::new();
        let mut signs: Vec<Option<bool>> = vec![None; self.closure.len()];
        if let Some(t) = top {
            signs[t] = Some(true);
        }
        self.dfs_types(&free, 0, &mut signs, &mut out, cfg)?;
        let mut types = Vec::new();
        for concepts in out {
            for mask in 0u64..(1 << self.inds.len()) {
                if types.len() >= cfg.max_types {
                    return Err(Error::ResourceExceeded(format!("more than {} types", cfg.max_types)));
                }
                let inds = (0..self.inds.len()).map(|i| mask & (1 << (self.inds.len() - 1 - i)) != 0).collect();
                types.push(RaType { concepts: concepts.clone(), inds });
            }
        }
        Ok(types)
    }

    fn dfs_types(
        &self,
        free: &[usize],
        k: usize,
        signs: &mut Vec<Option<bool>>,
        out: &mut Vec<Vec<bool>>,
        cfg: &Config,
    ) -> Result<()> {
        if self.tbox_violated(signs) {
            return Ok(());
        }
        if k == free.len() {
            if out.len() >= cfg.max_types {
                return Err(Error::ResourceExceeded(format!("more than {} types", cfg.max_types)));
            }
            let full: Vec<bool> = self.closure.iter().map(|c| self.value(c, signs).expect("all bases set")).collect();
            out.push(full);
            return Ok(());
        }
        for s in [true, false] {
            signs[free[k]] = Some(s);
            self.dfs_types(free, k + 1, signs, out, cfg)?;
        }
        signs[free[k]] = None;
        Ok(())
    }

    /// Kleene value of a closure member under partial base signs.
    fn value(&self, c: &Concept, signs: &[Option<bool>]) -> Option<bool> {
        match c {
            Concept::Name(_) | Concept::Succ(_) | Concept::Constr(_) => signs[self.index[c]],
            Concept::Not(d) => self.value(d, signs).map(|v| !v),
            Concept::And(v) => {
                let mut unknown = false;
                for d in v {
                    match self.value(d, signs) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        _ => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            Concept::Or(v) => {
                let mut unknown = false;
                for d in v {
                    match self.value(d, signs) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        _ => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }

    fn tbox_violated(&self, signs: &[Option<bool>]) -> bool {
        self.tbox
            .iter()
            .any(|ci| self.value(&ci.sub, signs) == Some(true) && self.value(&ci.sup, signs) == Some(false))
    }

    /// Variable table of `φ_t′`: base concepts, roles, individuals.
    fn table(&self) -> Formula {
        let mut f = Formula::new();
        for b in &self.bases {
            f.var(format!("X[{}]", self.closure[*b]), None);
        }
        for r in &self.roles {
            f.var(format!("X[{r}]"), None);
        }
        for b in &self.inds {
            f.var(format!("X[{{{b}}}]"), None);
        }
        f
    }

    fn role_var(&self, r: &str) -> usize {
        self.bases.len() + self.roles.iter().position(|x| x == r).expect("role in signature")
    }

    fn ind_var(&self, b: usize) -> usize {
        self.bases.len() + self.roles.len() + b
    }

    /// `X_D` as a Boolean term over the base variables.
    fn concept_term(&self, c: &Concept) -> Term {
        match c {
            Concept::Name(_) | Concept::Succ(_) | Concept::Constr(_) => {
                var(self.bases.iter().position(|b| *b == self.index[c]).expect("base member"))
            }
            Concept::Not(d) => SetTerm::complement(self.concept_term(d)),
            Concept::And(v) => SetTerm::inter_all(v.iter().map(|d| self.concept_term(d))),
            Concept::Or(v) => SetTerm::union_all(v.iter().map(|d| self.concept_term(d))),
        }
    }

    fn translate(&self, k: &Constraint<SetVar>) -> Result<QConstraint> {
        let mut err = None;
        let out = k.subst(&mut |v| match v {
            SetVar::Concept(c) => self.concept_term(c),
            SetVar::Role(r) => var(self.role_var(r)),
            SetVar::Indiv(b) => {
                err.get_or_insert_with(|| Error::Invalid(format!("individual {b} inside a concept")));
                SetTerm::Empty
            }
        });
        err.map_or(Ok(out), Err)
    }

    /// `φ_t′` for type `t`.
    pub fn phi_t_prime(&self, t: usize) -> Result<Formula> {
        let mut parts = Vec::new();
        for (c, s) in self.closure.iter().zip(&self.types[t].concepts) {
            if let Concept::Succ(k) = c {
                let tr = self.translate(k)?;
                parts.push(if *s { tr } else { Constraint::negate(tr) });
            }
        }
        let roles = SetTerm::union_all((0..self.roles.len()).map(|i| var(self.bases.len() + i)));
        parts.push(atom(Atom::SetEq(roles, SetTerm::Universe)));
        for b in 0..self.inds.len() {
            parts.push(atom(Atom::CardLt(card(var(self.ind_var(b))), PaExpr::Const(2))));
        }
        for (a, name) in self.inds.iter().enumerate() {
            if !self.types[t].inds[a] {
                continue;
            }
            for asr in &self.abox {
                let (r, x, y, positive) = match asr {
                    Assertion::Role(r, x, y) => (r, x, y, true),
                    Assertion::NotRole(r, x, y) => (r, x, y, false),
                    _ => continue,
                };
                if x != name {
                    continue;
                }
                let b = self.inds.iter().position(|i| i == y).expect("individual");
                let both = card(SetTerm::inter(var(self.ind_var(b)), var(self.role_var(r))));
                parts.push(atom(if positive {
                    Atom::CardLt(PaExpr::Const(0), both)
                } else {
                    Atom::CardEq(both, PaExpr::Const(0))
                }));
            }
        }
        let mut f = self.table();
        f.body = Constraint::and(parts);
        Ok(f)
    }

    /// The term covering exactly the regions realized by the types in `alive`.
    fn realized_term(&self, alive: &BTreeSet<usize>) -> Term {
        SetTerm::union_all(alive.iter().map(|t| {
            let ty = &self.types[*t];
            let lits = self
                .bases
                .iter()
                .enumerate()
                .map(|(i, b)| (i, ty.concepts[*b]))
                .chain((0..self.inds.len()).map(|b| (self.ind_var(b), ty.inds[b])))
                .map(|(v, s)| if s { var(v) } else { SetTerm::complement(var(v)) });
            SetTerm::inter_all(lits)
        }))
    }

    /// The type whose signs match the concept and individual part of a region.
    pub fn region_type(&self, signs: &[bool]) -> Option<usize> {
        let base = signs[..self.bases.len()].to_vec();
        let inds = signs[self.bases.len() + self.roles.len()..].to_vec();
        self.by_signs.get(&(base, inds)).copied()
    }

    /// `S_v ⊆ t` for some `t` in `alive`.
    pub fn realized(&self, signs: &[bool], alive: &BTreeSet<usize>) -> bool {
        self.region_type(signs).is_some_and(|t| alive.contains(&t))
    }

    /// A solution of `φ_t′` whose regions are all realized by `alive`.
    fn witness(&self, t: usize, alive: &BTreeSet<usize>, cfg: &Config) -> Result<Option<Solution>> {
        let mut f = self.phi_t_prime(t)?;
        f.conjoin(atom(Atom::SetSub(SetTerm::Universe, self.realized_term(alive))));
        qfbapa::solve(&f, cfg)
    }

    /// `φ_{T}` for the ERCBox over the types in `alive` (variable `i` is the `i`-th alive type).
    pub fn erc_system(&self, alive: &[usize]) -> LinearSystem {
        let mut sys = LinearSystem::new(alive.len());
        for s in &self.erc {
            let mut coeffs = Vec::new();
            for (sign, side) in [(1i64, &s.rhs), (-1, &s.lhs)] {
                for (n, c) in side.iter() {
                    for (i, t) in alive.iter().enumerate() {
                        if self.type_has(*t, c) {
                            coeffs.push((i, sign * n));
                        }
                    }
                }
            }
            sys.push(&coeffs, s.offset as i64);
        }
        sys
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub step: u8,
    pub removed: Vec<usize>,
    pub reason: String,
}

/// Result of a successful elimination run.
#[derive(Clone, Debug)]
pub struct EliminationState {
    pub alive: BTreeSet<usize>,
    /// Type chosen for each individual.
    pub chosen: BTreeMap<String, usize>,
    pub witnesses: HashMap<usize, Solution>,
    pub trace: Vec<TraceEvent>,
}

impl EliminationState {
    pub fn aug_types(&self) -> Vec<AugType> {
        self.alive
            .iter()
            .map(|t| AugType::from_witness(*t, self.witnesses[t].clone()))
            .collect()
    }
}

struct Run<'a> {
    p: &'a Problem,
    cfg: &'a Config,
    trace: Vec<TraceEvent>,
}

impl Run<'_> {
    /// Alternate the region and linear steps until nothing changes.
    /// Fails when a type in `required` is removed.
    fn eliminate(
        &mut self,
        alive: &mut BTreeSet<usize>,
        witnesses: &mut HashMap<usize, Solution>,
        required: &dyn Fn(&BTreeSet<usize>) -> bool,
    ) -> Result<bool> {
        loop {
            loop {
                let mut removed = Vec::new();
                for t in alive.clone() {
                    self.cfg.check_deadline()?;
                    if !alive.contains(&t) {
                        continue;
                    }
                    let valid = witnesses
                        .get(&t)
                        .is_some_and(|s| s.regions.iter().all(|(r, _)| self.p.realized(r, alive)));
                    if valid {
                        continue;
                    }
                    match self.p.witness(t, alive, self.cfg)? {
                        Some(s) => {
                            witnesses.insert(t, s);
                        }
                        None => {
                            alive.remove(&t);
                            witnesses.remove(&t);
                            removed.push(t);
                        }
                    }
                }
                if removed.is_empty() {
                    break;
                }
                self.trace.push(TraceEvent { step: 2, removed, reason: "unrealized Venn region".into() });
                if !required(alive) {
                    return Ok(false);
                }
            }
            let list: Vec<usize> = alive.iter().copied().collect();
            let sys = self.p.erc_system(&list);
            let mut removed = Vec::new();
            for (i, t) in list.iter().enumerate() {
                let mut ext = sys.clone();
                ext.push(&[(i, 1)], 1);
                if qfbapa::lin_feasible_rational(&ext)?.is_none() {
                    removed.push(*t);
                }
            }
            if removed.is_empty() {
                return Ok(required(alive));
            }
            for t in &removed {
                alive.remove(t);
                witnesses.remove(t);
            }
            self.trace.push(TraceEvent { step: 3, removed, reason: "forced empty by the ERCBox".into() });
            if !required(alive) {
                return Ok(false);
            }
        }
    }
}

/// Type elimination for a conjunctive ERCBox and a non-empty ABox.
pub fn algorithm1(p: &Problem, cfg: &Config) -> Result<Option<EliminationState>> {
    if p.inds.is_empty() {
        return Err(Error::Invalid("ABox must be non-empty".into()));
    }
    let mut run = Run { p, cfg, trace: Vec::new() };
    let nind = p.inds.len();
    // Condition (b): types of an individual contain its asserted concepts.
    let mut alive: BTreeSet<usize> = (0..p.types.len())
        .filter(|t| {
            p.abox.iter().all(|a| match a {
                Assertion::Concept(c, x) => {
                    let b = p.inds.iter().position(|i| i == x).expect("individual");
                    !p.type_has_ind(*t, b) || p.type_has(*t, c)
                }
                _ => true,
            })
        })
        .collect();
    let covers = |alive: &BTreeSet<usize>| (0..nind).all(|b| alive.iter().any(|t| p.type_has_ind(*t, b)));
    if !covers(&alive) {
        return Ok(None);
    }
    let mut witnesses = HashMap::new();
    if !run.eliminate(&mut alive, &mut witnesses, &covers)? {
        return Ok(None);
    }
    let pool = alive;
    let candidates: Vec<Vec<usize>> =
        (0..nind).map(|b| pool.iter().copied().filter(|t| p.type_has_ind(*t, b)).collect()).collect();
    let mut choice: Vec<Option<usize>> = vec![None; nind];
    let mut branches = 0usize;
    choose(p, &mut run, &pool, &witnesses, &candidates, &mut choice, 0, &mut branches)
}

#[allow(clippy::too_many_arguments)]
fn choose(
    p: &Problem,
    run: &mut Run,
    pool: &BTreeSet<usize>,
    witnesses: &HashMap<usize, Solution>,
    candidates: &[Vec<usize>],
    choice: &mut Vec<Option<usize>>,
    b: usize,
    branches: &mut usize,
) -> Result<Option<EliminationState>> {
    if b == choice.len() {
        *branches += 1;
        if *branches > run.cfg.max_branches {
            return Err(Error::ResourceExceeded("individual type choices exceed the branch cap".into()));
        }
        let chosen: Vec<usize> = choice.iter().map(|c| c.expect("chosen")).collect();
        let mut alive: BTreeSet<usize> = pool
            .iter()
            .copied()
            .filter(|t| (0..chosen.len()).all(|i| !p.type_has_ind(*t, i) || chosen[i] == *t))
            .collect();
        let mut w = witnesses.clone();
        w.retain(|t, _| alive.contains(t));
        let keep = chosen.clone();
        let required = move |a: &BTreeSet<usize>| keep.iter().all(|t| a.contains(t));
        let mark = run.trace.len();
        if run.eliminate(&mut alive, &mut w, &required)? {
            return Ok(Some(EliminationState {
                chosen: p.inds.iter().cloned().zip(chosen).collect(),
                alive,
                witnesses: w,
                trace: run.trace.clone(),
            }));
        }
        run.trace.truncate(mark);
        return Ok(None);
    }
    if let Some(t) = choice[b] {
        // Already fixed by an earlier individual sharing the type.
        let _ = t;
        return choose(p, run, pool, witnesses, candidates, choice, b + 1, branches);
    }
    for &t in &candidates[b] {
        // Every individual in `t` must be unchosen or chosen to be `t`.
        let consistent = (0..choice.len()).all(|i| !p.type_has_ind(t, i) || choice[i].is_none_or(|c| c == t));
        let earlier_ok = (0..b).all(|i| choice[i] != Some(t) || p.type_has_ind(t, b));
        if !consistent || !earlier_ok {
            continue;
        }
        let set: Vec<usize> = (0..choice.len()).filter(|i| p.type_has_ind(t, *i) && choice[*i].is_none()).collect();
        for i in &set {
            choice[*i] = Some(t);
        }
        if let Some(s) = choose(p, run, pool, witnesses, candidates, choice, b + 1, branches)? {
            return Ok(Some(s));
        }
        for i in &set {
            choice[*i] = None;
        }
    }
    Ok(None)
}

/// Outcome of a consistency check.
#[derive(Clone, Debug)]
pub enum Consistency {
    Consistent { model: Interp, state: Box<EliminationState>, problem: Box<Problem> },
    Inconsistent,
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }

    pub fn model(&self) -> Option<&Interp> {
        match self {
            Consistency::Consistent { model, .. } => Some(model),
            Consistency::Inconsistent => None,
        }
    }
}

/// Consistency of the ABox of `kb` w.r.t. its TBox and ERCBox. Positive
/// answers carry an audited model.
pub fn consistent(kb: &Kb, cfg: &Config) -> Result<Consistency> {
    if kb.ec.is_some() {
        return Err(Error::Invalid("ECBoxes are decided through concept satisfiability, not ABox consistency".into()));
    }
    let mut abox = kb.abox.clone();
    if let Some(g) = &kb.goal {
        abox.push(Assertion::Concept(g.clone(), "_goal".into()));
    }
    if abox.is_empty() {
        return Err(Error::Invalid("ABox must be non-empty".into()));
    }
    for r in minimal_dnf(&kb.erc)? {
        let p = Problem::new(&abox, &r, &kb.tbox, cfg)?;
        if let Some(state) = algorithm1(&p, cfg)? {
            let mut model = extract::extract_model(&p, &state, cfg)?;
            if kb.goal.is_some() {
                model.individuals.remove("_goal");
            }
            let report = crate::semantics::satisfies(&model, kb)?;
            if !report.is_model() {
                return Err(Error::Internal(format!("extracted model fails the audit: {:?}", report.violations)));
            }
            return Ok(Consistency::Consistent { model, state: Box::new(state), problem: Box::new(p) });
        }
    }
    Ok(Consistency::Inconsistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    fn check(text: &str) -> bool {
        consistent(&parse_kb(text).unwrap(), &Config::default()).unwrap().is_consistent()
    }

    #[test]
    fn dnf_valuations() {
        let kb = parse_kb("erc: card(A) <= card(B) or card(B) <= card(A)").unwrap();
        assert_eq!(dnf_split(&kb.erc).unwrap().len(), 3);
        assert_eq!(minimal_dnf(&kb.erc).unwrap().len(), 2);
        assert_eq!(dnf_split(&Erc::empty()).unwrap(), vec![Vec::<SemiRestricted>::new()]);
    }

    #[test]
    fn linear_step_verdicts() {
        assert!(!check("abox: A(a)\nerc: card(A) + 1 <= card(A)"));
        assert!(check("abox: A(a)\nerc: card(A) + 1 <= card(B)"));
        assert!(check("abox: A(a)"));
    }

    #[test]
    fn role_assertions() {
        assert!(!check("abox: r(a, b)\nabox: succ(card(r) = 0)(a)"));
        assert!(check("abox: r(a, b)\nabox: succ(card(r) = 1)(a)\nabox: B(b)"));
        assert!(!check("abox: r(a, b)\nabox: succ(card(r inter B) = 0)(a)\nabox: B(b)"));
        assert!(!check("abox: r(a, b)\nabox: not r(a, b)"));
    }

    #[test]
    fn tbox_interaction() {
        assert!(check("tbox: A <= succ(card(r inter A) >= 1)\nabox: A(a)"));
        assert!(!check("tbox: A <= succ(card(r inter A) >= 1)\ntbox: A <= succ(card(r) = 0)\nabox: A(a)"));
    }
}
