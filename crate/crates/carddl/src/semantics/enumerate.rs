//! Bounded model enumeration.
//!
//! The exact mode walks every interpretation of the signature with domain
//! size in the requested range, in lexicographic order. The pruned mode is
//! restricted to KBs whose TBox, ABox and goal concepts have constraint depth
//! at most one and whose ERCBox and ECBox concepts are edge free: the concept
//! memberships of an element then depend only on the concept labels of the
//! whole domain and on the element's own outgoing edges. The pruned mode
//! enumerates labellings up to permutations of unnamed elements and searches
//! edge sets element by element, which decides whether a model of the given
//! size exists without walking all role relations.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use super::cq::cq_match;
use super::eval::{satisfies, Evaluator};
use super::interp::Interp;
use crate::config::Config;
use crate::syntax::{encode::ecbox_to_concept, Assertion, Concept, Kb, Query, SetVar, Signature, TOP_NAME};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub min_size: usize,
    pub max_size: usize,
    pub pruned: bool,
    /// Names interpreted in addition to the KB signature.
    pub signature: Signature,
}

impl EnumOptions {
    pub fn up_to(max_size: usize) -> Self {
        EnumOptions { min_size: 1, max_size, pruned: false, signature: Signature::default() }
    }

    pub fn exactly(size: usize) -> Self {
        EnumOptions { min_size: size, ..EnumOptions::up_to(size) }
    }

    pub fn pruned(mut self) -> Self {
        self.pruned = true;
        self
    }

    pub fn with_signature(mut self, sig: Signature) -> Self {
        self.signature = sig;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub yielded: u64,
    /// Whether the pruned search was used (it falls back to the exact walk outside its fragment).
    pub pruned: bool,
}

/// Stream models of `kb` to `visit` until it breaks or the range is exhausted.
pub fn enumerate_models(
    kb: &Kb,
    opts: &EnumOptions,
    cfg: &Config,
    mut visit: impl FnMut(&Interp) -> ControlFlow<()>,
) -> Result<EnumStats> {
    if opts.max_size == 0 || opts.min_size == 0 {
        return Err(Error::Invalid("model sizes start at 1".into()));
    }
    let sig = full_signature(kb, &opts.signature);
    if opts.pruned && in_pruned_fragment(kb, None) {
        let search = Pruned::new(kb, &sig, cfg)?;
        let mut yielded = 0;
        for n in opts.min_size..=opts.max_size {
            let flow = search.labellings(n, &mut |w| {
                if let Some(m) = search.first_model(w)? {
                    yielded += 1;
                    return Ok(visit(&m));
                }
                Ok(ControlFlow::Continue(()))
            })?;
            if flow.is_break() {
                break;
            }
        }
        return Ok(EnumStats { yielded, pruned: true });
    }
    let yielded = exact(kb, &sig, opts, cfg, &mut |m| visit(m))?;
    Ok(EnumStats { yielded, pruned: false })
}

pub fn count_models(kb: &Kb, opts: &EnumOptions, cfg: &Config) -> Result<u64> {
    Ok(enumerate_models(kb, opts, cfg, |_| ControlFlow::Continue(()))?.yielded)
}

/// Some model of size `≤ max_size`, using the pruned search where possible.
pub fn find_model(kb: &Kb, max_size: usize, cfg: &Config) -> Result<Option<Interp>> {
    let mut found = None;
    enumerate_models(kb, &EnumOptions::up_to(max_size).pruned(), cfg, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// A model of `kb` of size `≤ max_size` in which `q` has no match.
///
/// In the pruned fragment (with edge-free query concepts) only ⊆-minimal
/// feasible edge sets are tried per element: dropping edges never creates a
/// match and does not affect the constraints of other elements.
pub fn find_countermodel(kb: &Kb, q: &Query, max_size: usize, cfg: &Config) -> Result<Option<Interp>> {
    let mut extra = q.signature();
    extra.individuals.clear();
    let sig = full_signature(kb, &extra);
    if !in_pruned_fragment(kb, Some(q)) {
        let mut found: Option<Result<Interp>> = None;
        exact(kb, &sig, &EnumOptions::up_to(max_size), cfg, &mut |m| match cq_match(m, q) {
            Ok(None) => {
                found = Some(Ok(m.clone()));
                ControlFlow::Break(())
            }
            Ok(Some(_)) => ControlFlow::Continue(()),
            Err(e) => {
                found = Some(Err(e));
                ControlFlow::Break(())
            }
        })?;
        return found.transpose();
    }
    let search = Pruned::new(kb, &sig, cfg)?;
    let mut found = None;
    for n in 1..=max_size {
        let flow = search.labellings(n, &mut |w| {
            let mut options = Vec::with_capacity(n);
            for d in 0..n {
                let c = search.minimal_choices(w, d)?;
                if c.is_empty() {
                    return Ok(ControlFlow::Continue(()));
                }
                options.push(c);
            }
            let mut m = w.clone();
            if search.no_match_dfs(&mut m, &options, 0, q)? {
                found = Some(m);
                return Ok(ControlFlow::Break(()));
            }
            Ok(ControlFlow::Continue(()))
        })?;
        if flow.is_break() {
            break;
        }
    }
    Ok(found)
}

fn full_signature(kb: &Kb, extra: &Signature) -> Signature {
    let mut sig = kb.signature();
    sig.merge(extra);
    sig.concepts.remove(TOP_NAME);
    sig
}

fn edge_free(c: &Concept) -> bool {
    !c.has_constr() && !c.has_succ()
}

fn in_pruned_fragment(kb: &Kb, q: Option<&Query>) -> bool {
    let shallow = |c: &Concept| c.depth() <= 1;
    let tbox = kb.tbox.iter().all(|ci| shallow(&ci.sub) && shallow(&ci.sup));
    let abox = kb.abox.iter().all(|a| !matches!(a, Assertion::Concept(c, _) if !shallow(c)));
    let erc = kb.erc.atoms().iter().all(|a| a.lhs.iter().chain(&a.rhs).all(|(_, c)| edge_free(c)));
    let mut ec = true;
    if let Some(k) = &kb.ec {
        k.for_each_var(&mut |v| ec &= matches!(v, SetVar::Concept(c) if edge_free(c)));
    }
    let goal = match (&kb.goal, q) {
        (None, _) => true,
        (Some(g), None) => shallow(g),
        (Some(g), Some(_)) => edge_free(g),
    };
    let query = q.is_none_or(|q| q.concept_atoms.iter().all(|(c, _)| edge_free(c)));
    tbox && abox && erc && ec && goal && query
}

struct Pruned<'a> {
    kb: &'a Kb,
    sig: Signature,
    names: Vec<String>,
    roles: Vec<String>,
    inds: Vec<String>,
    cfg: &'a Config,
}

impl<'a> Pruned<'a> {
    fn new(kb: &'a Kb, sig: &Signature, cfg: &'a Config) -> Result<Self> {
        let names: Vec<String> = sig.concepts.iter().cloned().collect();
        if names.len() > 16 {
            return Err(Error::ResourceExceeded("too many concept names for model enumeration".into()));
        }
        Ok(Pruned {
            kb,
            sig: sig.clone(),
            names,
            roles: sig.roles.iter().cloned().collect(),
            inds: sig.individuals.iter().cloned().collect(),
            cfg,
        })
    }

    /// Edgeless interpretations of size `n`: individual identifications, labels
    /// of named elements, and sorted labels of unnamed elements. Labellings
    /// violating the edge-independent parts of the KB are skipped.
    fn labellings(
        &self,
        n: usize,
        f: &mut dyn FnMut(&Interp) -> Result<ControlFlow<()>>,
    ) -> Result<ControlFlow<()>> {
        if self.roles.len() * n > 24 {
            return Err(Error::ResourceExceeded(format!("{} roles over {n} elements", self.roles.len())));
        }
        let labels = 1usize << self.names.len();
        let mut blocks = Vec::new();
        partitions(self.inds.len(), n, &mut Vec::new(), &mut blocks);
        let mut visited = 0u64;
        for part in blocks {
            let named = part.iter().copied().max().map_or(0, |m| m + 1);
            let anon = n - named;
            let mut named_labels = vec![0usize; named];
            loop {
                let mut anon_labels = vec![0usize; anon];
                loop {
                    visited += 1;
                    if visited % 1024 == 0 {
                        self.cfg.check_deadline()?;
                    }
                    if visited > self.cfg.max_models {
                        return Err(Error::ResourceExceeded("model enumeration cap".into()));
                    }
                    let w = self.build(n, &part, named_labels.iter().chain(&anon_labels));
                    if self.label_level_ok(&w)? && f(&w)?.is_break() {
                        return Ok(ControlFlow::Break(()));
                    }
                    if !next_sorted(&mut anon_labels, labels) {
                        break;
                    }
                }
                if !next_digits(&mut named_labels, labels) {
                    break;
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn build<'b>(&self, n: usize, part: &[usize], labels: impl Iterator<Item = &'b usize>) -> Interp {
        let mut w = Interp::new(n, &self.sig);
        for (d, l) in labels.enumerate() {
            for (k, name) in self.names.iter().enumerate() {
                if l & (1 << k) != 0 {
                    w.insert_concept(name, d);
                }
            }
        }
        for (a, b) in self.inds.iter().zip(part) {
            w.individuals.insert(a.clone(), *b);
        }
        w
    }

    fn label_level_ok(&self, w: &Interp) -> Result<bool> {
        let mut ev = Evaluator::new(w);
        let mut err = None;
        let erc = self.kb.erc.holds(&mut |s| {
            let mut side = |v: &[(i64, Concept)]| -> i128 {
                v.iter()
                    .map(|(k, c)| match ev.ext(c) {
                        Ok(b) => *k as i128 * b.count() as i128,
                        Err(e) => {
                            err.get_or_insert(e);
                            0
                        }
                    })
                    .sum()
            };
            side(&s.lhs) + s.offset as i128 <= side(&s.rhs)
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !erc {
            return Ok(false);
        }
        if let Some(ec) = &self.kb.ec {
            if ev.ext(&ecbox_to_concept(ec))?.is_empty() {
                return Ok(false);
            }
        }
        for a in &self.kb.abox {
            if let Assertion::Concept(c, x) = a {
                if edge_free(c) && !ev.holds_at(c, w.individuals[x])? {
                    return Ok(false);
                }
            }
        }
        match &self.kb.goal {
            Some(g) if edge_free(g) => Ok(!ev.ext(g)?.is_empty()),
            _ => Ok(true),
        }
    }

    /// Required and forbidden edge bits of element `d`.
    fn fixed(&self, w: &Interp, d: usize) -> (u64, u64) {
        let n = w.size();
        let (mut on, mut off) = (0u64, 0u64);
        for a in &self.kb.abox {
            match a {
                Assertion::Role(r, x, y) if w.individuals[x] == d => on |= self.bit(r, w.individuals[y], n),
                Assertion::NotRole(r, x, y) if w.individuals[x] == d => off |= self.bit(r, w.individuals[y], n),
                _ => {}
            }
        }
        (on, off)
    }

    fn bit(&self, r: &str, e: usize, n: usize) -> u64 {
        let k = self.roles.iter().position(|x| x == r).expect("role in signature");
        1 << (k * n + e)
    }

    fn apply(&self, w: &mut Interp, d: usize, mask: u64) {
        let n = w.size();
        for (k, r) in self.roles.iter().enumerate() {
            let set = w.roles.entry(r.clone()).or_default();
            set.retain(|(a, _)| *a != d);
            for e in 0..n {
                if mask & (1 << (k * n + e)) != 0 {
                    set.insert((d, e));
                }
            }
        }
    }

    /// Whether `d` with edge set `mask` meets its local obligations (and `extra` if given).
    fn feasible(&self, w: &mut Interp, d: usize, mask: u64, extra: Option<&Concept>) -> Result<bool> {
        self.apply(w, d, mask);
        let mut ev = Evaluator::new(w);
        for ci in &self.kb.tbox {
            if ev.holds_at(&ci.sub, d)? && !ev.holds_at(&ci.sup, d)? {
                return Ok(false);
            }
        }
        for a in &self.kb.abox {
            if let Assertion::Concept(c, x) = a {
                if w.individuals[x] == d && !ev.holds_at(c, d)? {
                    return Ok(false);
                }
            }
        }
        match extra {
            Some(g) => ev.holds_at(g, d),
            None => Ok(true),
        }
    }

    /// Feasible masks of `d` in increasing order of the free part; stops at the first when `first_only`.
    fn choices(&self, w: &Interp, d: usize, extra: Option<&Concept>, first_only: bool) -> Result<Vec<u64>> {
        let n = w.size();
        let all = if self.roles.len() * n == 64 { u64::MAX } else { (1u64 << (self.roles.len() * n)) - 1 };
        let (on, off) = self.fixed(w, d);
        if on & off != 0 {
            return Ok(vec![]);
        }
        let free = all & !on & !off;
        let mut w = w.clone();
        let mut out = Vec::new();
        let mut sub = 0u64;
        loop {
            if self.feasible(&mut w, d, on | sub, extra)? {
                out.push(on | sub);
                if first_only {
                    break;
                }
            }
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        Ok(out)
    }

    fn minimal_choices(&self, w: &Interp, d: usize) -> Result<Vec<u64>> {
        let mut all = self.choices(w, d, None, false)?;
        all.sort_by_key(|m| (m.count_ones(), *m));
        let mut kept: Vec<u64> = Vec::new();
        for m in all {
            if !kept.iter().any(|k| k & m == *k) {
                kept.push(m);
            }
        }
        Ok(kept)
    }

    fn first_model(&self, w: &Interp) -> Result<Option<Interp>> {
        let n = w.size();
        let mut picks = Vec::with_capacity(n);
        for d in 0..n {
            match self.choices(w, d, None, true)?.first() {
                Some(m) => picks.push(*m),
                None => return Ok(None),
            }
        }
        if let Some(g) = self.kb.goal.as_ref().filter(|g| !edge_free(g)) {
            let mut holder = None;
            for d in 0..n {
                if let Some(m) = self.choices(w, d, Some(g), true)?.first() {
                    holder = Some((d, *m));
                    break;
                }
            }
            let Some((d, m)) = holder else { return Ok(None) };
            picks[d] = m;
        }
        let mut m = w.clone();
        for (d, mask) in picks.into_iter().enumerate() {
            self.apply(&mut m, d, mask);
        }
        let report = satisfies(&m, self.kb)?;
        if !report.is_model() {
            return Err(Error::Internal(format!("pruned enumeration built a non-model: {:?}", report.violations)));
        }
        Ok(Some(m))
    }

    fn no_match_dfs(&self, m: &mut Interp, options: &[Vec<u64>], d: usize, q: &Query) -> Result<bool> {
        if cq_match(m, q)?.is_some() {
            return Ok(false);
        }
        if d == options.len() {
            return Ok(satisfies(m, self.kb)?.is_model());
        }
        for &mask in &options[d] {
            self.apply(m, d, mask);
            if self.no_match_dfs(m, options, d + 1, q)? {
                return Ok(true);
            }
        }
        self.apply(m, d, 0);
        Ok(false)
    }
}

/// Restricted-growth assignments of `k` individuals to at most `n` elements.
fn partitions(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let next = cur.iter().copied().max().map_or(0, |m| m + 1);
    for b in 0..=next.min(n - 1) {
        cur.push(b);
        partitions(k, n, cur, out);
        cur.pop();
    }
}

fn next_digits(v: &mut [usize], base: usize) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// Next non-decreasing sequence over `0..base`.
fn next_sorted(v: &mut [usize], base: usize) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] + 1 < base {
            let x = v[i] + 1;
            for y in &mut v[i..] {
                *y = x;
            }
            return true;
        }
    }
    false
}

fn exact(
    kb: &Kb,
    sig: &Signature,
    opts: &EnumOptions,
    cfg: &Config,
    visit: &mut dyn FnMut(&Interp) -> ControlFlow<()>,
) -> Result<u64> {
    let names: Vec<&String> = sig.concepts.iter().collect();
    let roles: Vec<&String> = sig.roles.iter().collect();
    let inds: Vec<&String> = sig.individuals.iter().collect();
    let mut yielded = 0;
    let mut budget = cfg.max_models;
    for n in opts.min_size..=opts.max_size {
        let bits = n * names.len() + n * n * roles.len();
        let maps = (n as u64).checked_pow(inds.len() as u32);
        let total = maps.and_then(|m| if bits < 63 { m.checked_mul(1 << bits) } else { None });
        match total {
            Some(t) if t <= budget => budget -= t,
            _ => return Err(Error::ResourceExceeded(format!("more than {} candidate models", cfg.max_models))),
        }
        let mut map = vec![0usize; inds.len()];
        loop {
            for code in 0..(1u64 << bits) {
                if code % 4096 == 0 {
                    cfg.check_deadline()?;
                }
                let mut m = Interp::new(n, sig);
                let mut b = 0;
                for c in &names {
                    for d in 0..n {
                        if code & (1 << b) != 0 {
                            m.insert_concept(c, d);
                        }
                        b += 1;
                    }
                }
                for r in &roles {
                    for d in 0..n {
                        for e in 0..n {
                            if code & (1 << b) != 0 {
                                m.insert_edge(r, d, e);
                            }
                            b += 1;
                        }
                    }
                }
                m.individuals = inds.iter().map(|a| (a.to_string(), 0)).collect::<BTreeMap<_, _>>();
                for (a, d) in inds.iter().zip(&map) {
                    m.individuals.insert(a.to_string(), *d);
                }
                if satisfies(&m, kb)?.is_model() {
                    yielded += 1;
                    if visit(&m).is_break() {
                        return Ok(yielded);
                    }
                }
            }
            if !next_digits(&mut map, n) {
                break;
            }
        }
    }
    Ok(yielded)
}

/// Distinct labellings visited by the pruned search; exposed for tests.
#[allow(dead_code)]
fn sorted_count(len: usize, base: usize) -> usize {
    let mut v = vec![0; len];
    let mut seen = BTreeSet::new();
    loop {
        seen.insert(v.clone());
        if !next_sorted(&mut v, base) {
            break;
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_kb, parse_query};

    #[test]
    fn empty_kb_single_name() {
        let mut sig = Signature::default();
        sig.concepts.insert("A".into());
        let n = count_models(&Kb::default(), &EnumOptions::exactly(1).with_signature(sig), &Config::default()).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn inconsistent_erc_has_no_models() {
        let kb = parse_kb("abox: A(a)\nerc: card(A) + 1 <= card(A)").unwrap();
        assert_eq!(count_models(&kb, &EnumOptions::up_to(2), &Config::default()).unwrap(), 0);
        assert!(find_model(&kb, 4, &Config::default()).unwrap().is_none());
    }

    #[test]
    fn pruned_and_exact_agree_on_existence() {
        let texts = [
            "abox: A(a)\nerc: card(A) + 1 <= card(B)",
            "abox: r(a,b)\nabox: succ(card(r) = 0)(a)",
            "abox: succ(card(r inter B) >= 2)(a)",
            "abox: A(a)\ntbox: A <= succ(card(r inter A) = 1)",
        ];
        for t in texts {
            let kb = parse_kb(t).unwrap();
            let exact = count_models(&kb, &EnumOptions::up_to(2), &Config::default()).unwrap() > 0;
            let pruned = find_model(&kb, 2, &Config::default()).unwrap().is_some();
            assert_eq!(exact, pruned, "{t}");
        }
    }

    #[test]
    fn sorted_sequences() {
        assert_eq!(sorted_count(3, 4), 20);
    }

    #[test]
    fn countermodels() {
        let kb = parse_kb("abox: A(a)").unwrap();
        let m = find_countermodel(&kb, &parse_query("B(x)").unwrap(), 2, &Config::default()).unwrap();
        assert!(m.unwrap().concepts["B"].is_empty());
        let kb = parse_kb("abox: A(a)\ntbox: top <= succ(card(r inter B) >= 1)").unwrap();
        let q = parse_query("r(x,y), B(y)").unwrap();
        assert!(find_countermodel(&kb, &q, 3, &Config::default()).unwrap().is_none());
    }
}
