//! Model transformations: forward unraveling, k-loosening, S-duplication,
//! ERCBox repair, cyclic covers, girth and forward-neighbourhood bisimilarity.
//!
//! Unravelings and loosenings only build sequences that follow role edges;
//! sequences with a non-edge step are unreachable from the rest and are left out.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::semantics::{Evaluator, Interp};
use crate::syntax::{Concept, Erc};
use crate::{Error, Result};

/// An element of an unraveling: a sequence over the base domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceElement(pub Vec<usize>);

impl SequenceElement {
    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("sequences are non-empty")
    }
}

fn named_set(i: &Interp) -> BTreeSet<usize> {
    i.individuals.values().copied().collect()
}

/// All `(role index, target)` pairs leaving `d`, roles indexed in name order.
fn out_edges(i: &Interp, d: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> =
        i.roles.keys().enumerate().flat_map(|(k, r)| i.successors(r, d).map(move |e| (k, e))).collect();
    v.sort();
    v
}

/// Sequence-based interpretation under construction. Sequences are stored as
/// a trie: `child[(w, d)]` is the id of `w·d`, singletons `d` have id `d`.
struct SeqBuilder<'a> {
    base: &'a Interp,
    named: BTreeSet<usize>,
    seqs: Vec<SequenceElement>,
    child: HashMap<(usize, usize), usize>,
    edges: Vec<(usize, usize, usize)>,
}

impl<'a> SeqBuilder<'a> {
    fn new(base: &'a Interp) -> Self {
        let mut b =
            SeqBuilder { base, named: named_set(base), seqs: Vec::new(), child: HashMap::new(), edges: Vec::new() };
        for d in 0..base.size() {
            b.seqs.push(SequenceElement(vec![d]));
        }
        for (k, pairs) in base.roles.values().enumerate() {
            for (d, e) in pairs {
                if b.named.contains(d) && b.named.contains(e) {
                    b.edges.push((k, *d, *e));
                }
            }
        }
        b
    }

    fn add_child(&mut self, w: usize, s: SequenceElement) -> usize {
        let id = self.seqs.len();
        self.child.insert((w, s.last()), id);
        self.seqs.push(s);
        id
    }

    /// Id of a sequence already present.
    fn find(&self, s: &[usize]) -> Option<usize> {
        s[1..].iter().try_fold(s[0], |id, d| self.child.get(&(id, *d)).copied())
    }

    /// Children `w·d` of `w` are skipped when `w` and `d` are both named singletons.
    fn skip_child(&self, w: &SequenceElement, d: usize) -> bool {
        w.0.len() == 1 && self.named.contains(&w.0[0]) && self.named.contains(&d)
    }

    fn finish(self) -> (Interp, Vec<SequenceElement>) {
        let labels = self
            .seqs
            .iter()
            .map(|s| s.0.iter().map(|d| self.base.labels[*d].as_str()).collect::<Vec<_>>().join("/"))
            .collect();
        let mut out = Interp::with_labels(labels);
        out.extend_signature(&self.base.signature());
        for (k, s) in self.seqs.iter().enumerate() {
            for (a, ext) in &self.base.concepts {
                if ext.contains(&s.last()) {
                    out.insert_concept(a, k);
                }
            }
        }
        let roles: Vec<&String> = self.base.roles.keys().collect();
        for (r, d, e) in self.edges {
            out.insert_edge(roles[r], d, e);
        }
        out.individuals = self.base.individuals.clone();
        (out, self.seqs)
    }
}

/// Forward unraveling cut at sequences of length `depth`.
pub fn unravel(i: &Interp, depth: usize, cap: usize) -> Result<(Interp, Vec<SequenceElement>)> {
    if depth == 0 {
        return Err(Error::Invalid("unraveling depth must be at least 1".into()));
    }
    let mut b = SeqBuilder::new(i);
    let mut queue: VecDeque<usize> = (0..b.seqs.len()).collect();
    while let Some(w) = queue.pop_front() {
        let ws = b.seqs[w].clone();
        if ws.0.len() >= depth {
            continue;
        }
        for (r, d) in out_edges(i, ws.last()) {
            if b.skip_child(&ws, d) {
                continue;
            }
            let id = match b.child.get(&(w, d)) {
                Some(id) => *id,
                None => {
                    if b.seqs.len() >= cap {
                        return Err(Error::ResourceExceeded(format!("unraveling exceeds {cap} elements")));
                    }
                    let mut u = ws.0.clone();
                    u.push(d);
                    let id = b.add_child(w, SequenceElement(u));
                    queue.push_back(id);
                    id
                }
            };
            b.edges.push((r, w, id));
        }
    }
    Ok(b.finish())
}

/// The longest proper prefix `p` of `u` with `|u| - |p| > k` whose length-`k`
/// suffix equals that of `u`.
fn blocker(u: &[usize], k: usize) -> Option<usize> {
    let n = u.len();
    if n < 2 * k + 1 {
        return None;
    }
    let suffix = &u[n - k..];
    (k..n - k).rev().find(|&len| &u[len - k..len] == suffix)
}

/// k-loosening: breadth-first unraveling in which each minimally k-blocked
/// sequence is replaced by its blocking prefix.
pub fn k_loosening(i: &Interp, k: usize, cap: usize) -> Result<(Interp, Vec<SequenceElement>)> {
    if k == 0 {
        return Err(Error::Invalid("loosening needs k ≥ 1".into()));
    }
    let mut b = SeqBuilder::new(i);
    let mut queue: VecDeque<usize> = (0..b.seqs.len()).collect();
    while let Some(w) = queue.pop_front() {
        let ws = b.seqs[w].clone();
        for (r, d) in out_edges(i, ws.last()) {
            if b.skip_child(&ws, d) {
                continue;
            }
            let target = match b.child.get(&(w, d)) {
                Some(id) => *id,
                None => {
                    let mut u = ws.0.clone();
                    u.push(d);
                    match blocker(&u, k) {
                        Some(len) => b.find(&u[..len]).expect("prefixes of kept sequences are kept"),
                        None => {
                            if b.seqs.len() >= cap {
                                return Err(Error::ResourceExceeded(format!("loosening exceeds {cap} elements")));
                            }
                            let id = b.add_child(w, SequenceElement(u));
                            queue.push_back(id);
                            id
                        }
                    }
                }
            };
            b.edges.push((r, w, target));
        }
    }
    Ok(b.finish())
}

/// Adds `n` copies of each listed element, with the same concept names and the
/// same outgoing edges.
pub fn s_duplicate(i: &Interp, s: &[(usize, usize)]) -> Result<Interp> {
    let mut out = i.clone();
    for &(v, n) in s {
        if v >= i.size() {
            return Err(Error::Invalid(format!("element {v} is not in the domain")));
        }
        for c in 1..=n {
            let id = out.add_element(format!("{}+{c}", i.labels[v]));
            for (a, ext) in &i.concepts {
                if ext.contains(&v) {
                    out.insert_concept(a, id);
                }
            }
            for (r, pairs) in &i.roles {
                for (_, e) in pairs.iter().filter(|(x, _)| *x == v) {
                    out.insert_edge(r, id, *e);
                }
            }
        }
    }
    Ok(out)
}

/// The concepts the ERCBox counts.
pub fn erc_concepts(r: &Erc) -> Vec<Concept> {
    let set: BTreeSet<Concept> =
        r.atoms().iter().flat_map(|a| a.lhs.iter().chain(&a.rhs).map(|(_, c)| c.clone())).collect();
    set.into_iter().collect()
}

/// Membership vector over the ERCBox concepts, per element.
pub fn erc_types(i: &Interp, r: &Erc) -> Result<Vec<Vec<bool>>> {
    let cs = erc_concepts(r);
    let mut ev = Evaluator::new(i);
    let exts = cs.iter().map(|c| ev.ext(c)).collect::<Result<Vec<_>>>()?;
    Ok((0..i.size()).map(|d| exts.iter().map(|e| e.contains(d)).collect()).collect())
}

/// Number of elements per ERCBox type.
pub fn erc_type_counts(i: &Interp, r: &Erc) -> Result<BTreeMap<Vec<bool>, u64>> {
    let mut m = BTreeMap::new();
    for t in erc_types(i, r)? {
        *m.entry(t).or_insert(0) += 1;
    }
    Ok(m)
}

/// Copies that bring every type of `loose` to `(1 + |Δ|)` times its count in
/// the original model.
pub fn repair_ercbox(loose: &Interp, r: &Erc, base_counts: &BTreeMap<Vec<bool>, u64>) -> Result<Vec<(usize, usize)>> {
    let factor = 1 + loose.size() as u64;
    let types = erc_types(loose, r)?;
    let mut have: BTreeMap<&Vec<bool>, (u64, usize)> = BTreeMap::new();
    for (d, t) in types.iter().enumerate() {
        have.entry(t).or_insert((0, d)).0 += 1;
    }
    for t in have.keys() {
        if !base_counts.contains_key(*t) {
            return Err(Error::Invalid("loosened model has a type the base model lacks".into()));
        }
    }
    let mut s = Vec::new();
    for (t, c) in base_counts {
        if *c == 0 {
            continue;
        }
        let &(n, w) = have.get(t).ok_or_else(|| Error::Invalid("a base type is not realized".into()))?;
        let want = factor * c;
        if want > n {
            s.push((w, (want - n) as usize));
        }
    }
    Ok(s)
}

/// `m`-fold cyclic cover: elements `(d, j)` for `j < m` with edges
/// `(d, j) → (e, j+1 mod m)`. Individuals sit at layer 0 and keep their mutual
/// edges inside that layer. The projection is a successor-preserving
/// bijection on neighbourhoods, so every concept keeps its members, every
/// count is multiplied by `m`, and each cycle through an unnamed element has
/// length at least `m`.
pub fn cyclic_cover(i: &Interp, m: usize) -> Result<Interp> {
    if m == 0 {
        return Err(Error::Invalid("cover needs at least one layer".into()));
    }
    let n = i.size();
    let named = named_set(i);
    let id = |d: usize, j: usize| j * n + d;
    let mut labels = Vec::with_capacity(n * m);
    for j in 0..m {
        for d in 0..n {
            labels.push(if m == 1 { i.labels[d].clone() } else { format!("{}~{j}", i.labels[d]) });
        }
    }
    let mut out = Interp::with_labels(labels);
    out.extend_signature(&i.signature());
    for (a, ext) in &i.concepts {
        for d in ext {
            for j in 0..m {
                out.insert_concept(a, id(*d, j));
            }
        }
    }
    for (r, pairs) in &i.roles {
        for &(d, e) in pairs {
            for j in 0..m {
                let both_named = j == 0 && named.contains(&d) && named.contains(&e);
                let to = if both_named { id(e, 0) } else { id(e, (j + 1) % m) };
                out.insert_edge(r, id(d, j), to);
            }
        }
    }
    out.individuals = i.individuals.clone();
    Ok(out)
}

/// Length of the shortest role cycle through an unnamed element; `None` when
/// there is none.
pub fn girth(i: &Interp) -> Option<usize> {
    let named = named_set(i);
    let n = i.size();
    let mut succ = vec![BTreeSet::new(); n];
    for pairs in i.roles.values() {
        for &(d, e) in pairs {
            succ[d].insert(e);
        }
    }
    let mut best: Option<usize> = None;
    for start in (0..n).filter(|d| !named.contains(d)) {
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::from([start]);
        dist[start] = 0;
        'bfs: while let Some(d) = queue.pop_front() {
            for &e in &succ[d] {
                if e == start {
                    let len = dist[d] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                    break 'bfs;
                }
                if dist[e] == usize::MAX {
                    dist[e] = dist[d] + 1;
                    queue.push_back(e);
                }
            }
        }
    }
    best
}

/// Length of the shortest role cycle through an unnamed element among the
/// cycles of length at most `max_len`. Each search stops at depth `max_len`,
/// so the cost does not grow with the size of the interpretation.
pub fn short_cycle(i: &Interp, max_len: usize) -> Option<usize> {
    let named = named_set(i);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); i.size()];
    for pairs in i.roles.values() {
        for &(d, e) in pairs {
            succ[d].push(e);
        }
    }
    let mut best: Option<usize> = None;
    for start in (0..i.size()).filter(|d| !named.contains(d)) {
        let limit = best.map_or(max_len, |b| b - 1);
        let mut seen: HashMap<usize, usize> = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([start]);
        'bfs: while let Some(d) = queue.pop_front() {
            let dist = seen[&d];
            if dist >= limit {
                break;
            }
            for &e in &succ[d] {
                if e == start {
                    best = Some(dist + 1);
                    break 'bfs;
                }
                if !seen.contains_key(&e) {
                    seen.insert(e, dist + 1);
                    queue.push_back(e);
                }
            }
        }
    }
    best
}

/// Forward-neighbourhood bisimilarity of `d` in `i` and `e` in `j`: equal
/// concept names, and a bijection between successors preserving concept
/// names and the roles linking them to `d` and `e`.
pub fn fb_bisimilar(i: &Interp, d: usize, j: &Interp, e: usize) -> bool {
    let names: BTreeSet<&String> = i.concepts.keys().chain(j.concepts.keys()).collect();
    let roles: BTreeSet<&String> = i.roles.keys().chain(j.roles.keys()).collect();
    let label = |m: &Interp, x: usize| -> Vec<bool> { names.iter().map(|a| m.in_concept(a, x)).collect() };
    if label(i, d) != label(j, e) {
        return false;
    }
    let sigs = |m: &Interp, x: usize| -> Result<Vec<(Vec<bool>, Vec<bool>)>> {
        let mut v: Vec<_> = m
            .ars(x)?
            .into_iter()
            .map(|y| (label(m, y), roles.iter().map(|r| m.has_edge(r, x, y)).collect()))
            .collect();
        v.sort();
        Ok(v)
    };
    matches!((sigs(i, d), sigs(j, e)), (Ok(a), Ok(b)) if a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn self_loop() -> Interp {
        let mut i = Interp::new(1, &Signature::default());
        i.insert_edge("r", 0, 0);
        i.insert_concept("A", 0);
        i
    }

    #[test]
    fn unravel_self_loop_is_a_path() {
        let (u, seqs) = unravel(&self_loop(), 3, 100).unwrap();
        assert_eq!(u.size(), 3);
        assert_eq!(seqs[2].0, vec![0, 0, 0]);
        assert_eq!(u.roles["r"].len(), 2);
        assert_eq!(girth(&u), None);
    }

    #[test]
    fn loosening_self_loop() {
        let (l, _) = k_loosening(&self_loop(), 2, 100).unwrap();
        let g = girth(&l).unwrap();
        assert!(g >= 2);
        assert!((0..l.size()).all(|w| fb_bisimilar(&l, w, &self_loop(), 0)));
    }

    #[test]
    fn girth_cases() {
        assert_eq!(girth(&self_loop()), Some(1));
        let mut i = Interp::new(2, &Signature::default());
        i.individuals.insert("a".into(), 0);
        i.individuals.insert("b".into(), 1);
        i.insert_edge("r", 0, 1);
        i.insert_edge("r", 1, 0);
        assert_eq!(girth(&i), None);
        let mut j = Interp::new(3, &Signature::default());
        j.insert_edge("r", 0, 1);
        assert_eq!(girth(&j), None);
    }

    #[test]
    fn bounded_cycle_search() {
        let c = cyclic_cover(&self_loop(), 4).unwrap();
        assert_eq!(short_cycle(&c, 3), None);
        assert_eq!(short_cycle(&c, 4), Some(4));
        assert_eq!(short_cycle(&self_loop(), 10), Some(1));
    }

    #[test]
    fn duplication_counts() {
        let i = self_loop();
        assert_eq!(s_duplicate(&i, &[]).unwrap(), i);
        let d = s_duplicate(&i, &[(0, 2)]).unwrap();
        assert_eq!(d.size(), 3);
        assert_eq!(d.concepts["A"].len(), 3);
        assert!(d.has_edge("r", 2, 0));
        assert!(s_duplicate(&i, &[(5, 1)]).is_err());
    }

    #[test]
    fn bisimilarity_basics() {
        let i = Interp::new(2, &Signature::default());
        assert!(fb_bisimilar(&i, 0, &i, 1));
        let mut j = Interp::new(3, &Signature::default());
        j.insert_edge("r", 0, 1);
        assert!(!fb_bisimilar(&j, 0, &j, 2));
    }

    #[test]
    fn cover_raises_girth() {
        let c = cyclic_cover(&self_loop(), 4).unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(girth(&c), Some(4));
        assert!((0..4).all(|w| fb_bisimilar(&c, w, &self_loop(), 0)));
    }
}
