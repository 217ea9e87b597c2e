//! Conjunctive query matching by backtracking.

use std::collections::BTreeMap;

use super::bits::Bits;
use super::eval::Evaluator;
use super::interp::Interp;
use crate::syntax::Query;
use crate::Result;

/// A match of `q` in `i`, or `None`.
pub fn cq_match(i: &Interp, q: &Query) -> Result<Option<BTreeMap<String, usize>>> {
    let vars: Vec<String> = q.vars().into_iter().collect();
    let idx = |x: &str| vars.iter().position(|v| v == x).expect("query variable");
    let n = i.size();
    let mut ev = Evaluator::new(i);
    let mut cand = vec![Bits::full(n); vars.len()];
    for (c, z) in &q.concept_atoms {
        let k = idx(z);
        cand[k] = cand[k].and(&ev.ext(c)?);
    }
    if cand.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    let edges: Vec<(&str, usize, usize)> = q.role_atoms.iter().map(|(r, x, y)| (r.as_str(), idx(x), idx(y))).collect();

    // Most constrained first, then grow along role atoms.
    let mut order: Vec<usize> = Vec::new();
    while order.len() < vars.len() {
        let next = (0..vars.len())
            .filter(|v| !order.contains(v))
            .max_by_key(|v| {
                let linked = edges
                    .iter()
                    .filter(|(_, x, y)| (x == v && order.contains(y)) || (y == v && order.contains(x)))
                    .count();
                (linked, usize::MAX - cand[*v].count())
            })
            .expect("remaining variable");
        order.push(next);
    }

    let mut assign: Vec<Option<usize>> = vec![None; vars.len()];
    if search(i, &order, 0, &cand, &edges, &mut assign) {
        Ok(Some(vars.iter().cloned().zip(assign.into_iter().map(|a| a.expect("assigned"))).collect()))
    } else {
        Ok(None)
    }
}

fn search(
    i: &Interp,
    order: &[usize],
    pos: usize,
    cand: &[Bits],
    edges: &[(&str, usize, usize)],
    assign: &mut Vec<Option<usize>>,
) -> bool {
    let Some(&v) = order.get(pos) else { return true };
    for d in cand[v].iter() {
        assign[v] = Some(d);
        let ok = edges.iter().all(|(r, x, y)| match (assign[*x], assign[*y]) {
            (Some(a), Some(b)) if *x == v || *y == v => i.has_edge(r, a, b),
            _ => true,
        });
        if ok && search(i, order, pos + 1, cand, edges, assign) {
            return true;
        }
    }
    assign[v] = None;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_query, Signature};

    #[test]
    fn empty_concept_blocks_match() {
        let i = Interp::new(2, &Signature::default());
        assert!(cq_match(&i, &parse_query("B(x)").unwrap()).unwrap().is_none());
    }

    #[test]
    fn path_match() {
        let mut i = Interp::new(3, &Signature::default());
        i.insert_edge("r", 0, 1);
        i.insert_edge("s", 1, 2);
        i.insert_concept("B", 2);
        let q = parse_query("r(x,y), s(y,z), B(z)").unwrap();
        let m = cq_match(&i, &q).unwrap().unwrap();
        assert_eq!(m["x"], 0);
        assert_eq!(m["z"], 2);
        let q = parse_query("r(x,y), s(x,z)").unwrap();
        assert!(cq_match(&i, &q).unwrap().is_none());
    }
}
