//! Venn decomposition of a formula into region-count variables.
//!
//! Shared regions are sign vectors over the shared variables that occur in
//! the formula. For each local group, a cell is a pair (projection class of a
//! shared region onto the shared variables that meet the group, sign vector
//! over the group variables). Cells of a class are tied to the regions of
//! that class by one coupling equation. Top-level positive set atoms remove
//! regions and cells up front.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Formula, Term};
use crate::config::Config;
use crate::syntax::{Atom, Constraint};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct GroupCells {
    /// Variables local to the group.
    pub local: Vec<usize>,
    /// Shared variables that meet the group in some term.
    pub proj: Vec<usize>,
    /// Distinct sign vectors of shared regions over `proj`.
    pub classes: Vec<Vec<bool>>,
    /// Class index of each shared region.
    pub class_of_region: Vec<usize>,
    /// (class, signs over `local`).
    pub cells: Vec<(usize, Vec<bool>)>,
    /// Index of the first cell among the region-count variables.
    pub offset: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub nvars: usize,
    /// Shared variables taking part in the enumeration.
    pub shared: Vec<usize>,
    /// Sign vectors over `shared`.
    pub regions: Vec<Vec<bool>>,
    pub groups: Vec<GroupCells>,
    /// Group (index into `groups`) of each variable, `None` for shared ones.
    pub group_of: Vec<Option<usize>>,
    /// Number of region-count variables (shared regions plus all cells).
    pub ncount: usize,
}

/// Where a term lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Shared,
    Group(usize),
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Units that must live in one space: each side pair of a set atom, each card term.
pub(crate) fn units(c: &Constraint<usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    c.for_each_atom(&mut |a| match a {
        Atom::SetEq(s, t) | Atom::SetSub(s, t) => {
            let mut vs = Vec::new();
            s.for_each_var(&mut |v| vs.push(*v));
            t.for_each_var(&mut |v| vs.push(*v));
            out.push(vs);
        }
        _ => a.for_each_term(&mut |t| {
            let mut vs = Vec::new();
            t.for_each_var(&mut |v| vs.push(*v));
            out.push(vs);
        }),
    });
    out
}

/// Positive set atoms among the top-level conjuncts.
pub(crate) fn top_set_atoms(c: &Constraint<usize>) -> Vec<(Term, Term, bool)> {
    let mut out = Vec::new();
    match c {
        Constraint::Atom(Atom::SetEq(s, t)) => out.push((s.clone(), t.clone(), true)),
        Constraint::Atom(Atom::SetSub(s, t)) => out.push((s.clone(), t.clone(), false)),
        Constraint::And(v) => v.iter().for_each(|c| out.extend(top_set_atoms(c))),
        _ => {}
    }
    out
}

/// Kleene check of a set atom under a partial assignment: `Some(false)` means violated.
fn atom_ok(atom: &(Term, Term, bool), val: &impl Fn(&usize) -> Option<bool>) -> Option<bool> {
    let (s, t, eq) = atom;
    match (s.holds3(val), t.holds3(val)) {
        (Some(a), Some(b)) => Some(if *eq { a == b } else { !a || b }),
        (Some(false), _) if !eq => Some(true),
        (_, Some(true)) if !eq => Some(true),
        _ => None,
    }
}

/// Enumerate sign vectors over `order` (positions into `assign`) consistent with `atoms`.
fn enumerate(
    nvars: usize,
    fixed: &[(usize, bool)],
    order: &[usize],
    atoms: &[&(Term, Term, bool)],
    cap: usize,
    out: &mut Vec<Vec<bool>>,
) -> Result<()> {
    let mut assign: Vec<Option<bool>> = vec![None; nvars];
    for &(v, s) in fixed {
        assign[v] = Some(s);
    }
    // check each atom once all its variables are assigned
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); order.len() + 1];
    for (i, a) in atoms.iter().enumerate() {
        let mut last = 0;
        let mut ok = true;
        let mut visit = |v: &usize| match pos.get(v) {
            Some(p) => last = last.max(p + 1),
            None => {
                if assign[*v].is_none() {
                    ok = false
                }
            }
        };
        a.0.for_each_var(&mut visit);
        a.1.for_each_var(&mut visit);
        if ok {
            due[last].push(i);
        }
    }
    let check = |assign: &[Option<bool>], k: usize| -> bool {
        due[k].iter().all(|&i| atom_ok(atoms[i], &|v: &usize| assign[*v]) != Some(false))
    };
    if !check(&assign, 0) {
        return Ok(());
    }
    fn rec(
        k: usize,
        order: &[usize],
        assign: &mut Vec<Option<bool>>,
        check: &dyn Fn(&[Option<bool>], usize) -> bool,
        cap: usize,
        out: &mut Vec<Vec<bool>>,
    ) -> Result<()> {
        if k == order.len() {
            if out.len() >= cap {
                return Err(Error::ResourceExceeded(format!("more than {cap} Venn regions")));
            }
            out.push(order.iter().map(|v| assign[*v].unwrap()).collect());
            return Ok(());
        }
        for s in [false, true] {
            assign[order[k]] = Some(s);
            if check(assign, k + 1) {
                rec(k + 1, order, assign, check, cap, out)?;
            }
        }
        assign[order[k]] = None;
        Ok(())
    }
    rec(0, order, &mut assign, &check, cap, out)
}

/// Decompose `f`. With `all_vars`, shared variables that do not occur in the
/// body still take part in the enumeration.
pub fn decompose(f: &Formula, all_vars: bool, cfg: &Config) -> Result<Decomposition> {
    let n = f.vars.len();
    let raw_groups: BTreeSet<usize> = f.groups.iter().flatten().copied().collect();
    let gmax = raw_groups.iter().max().map(|g| g + 1).unwrap_or(0);
    let mut parent: Vec<usize> = (0..gmax).collect();
    let units = units(&f.body);
    let mut occurs = vec![all_vars; n];
    for u in &units {
        let mut first: Option<usize> = None;
        for v in u {
            occurs[*v] = true;
            if let Some(g) = f.groups[*v] {
                match first {
                    None => first = Some(g),
                    Some(h) => {
                        let (a, b) = (find(&mut parent, g), find(&mut parent, h));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut root_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut group_of = vec![None; n];
    for v in 0..n {
        if let Some(g) = f.groups[v] {
            if !occurs[v] {
                continue;
            }
            let r = find(&mut parent, g);
            let next = root_index.len();
            let gi = *root_index.entry(r).or_insert(next);
            group_of[v] = Some(gi);
        }
    }
    let ngroups = root_index.len();
    let shared: Vec<usize> = (0..n).filter(|&v| f.groups[v].is_none() && occurs[v]).collect();
    let space_of = |vs: &[usize]| -> Space {
        vs.iter().find_map(|v| group_of[*v]).map(Space::Group).unwrap_or(Space::Shared)
    };
    let set_atoms = top_set_atoms(&f.body);
    let atom_space = |a: &(Term, Term, bool)| {
        let mut vs = Vec::new();
        a.0.for_each_var(&mut |v| vs.push(*v));
        a.1.for_each_var(&mut |v| vs.push(*v));
        space_of(&vs)
    };
    // shared regions, enumerated with later table entries first
    let shared_atoms: Vec<&(Term, Term, bool)> =
        set_atoms.iter().filter(|a| atom_space(a) == Space::Shared).collect();
    let order: Vec<usize> = shared.iter().rev().copied().collect();
    let mut rev_regions = Vec::new();
    enumerate(n, &[], &order, &shared_atoms, cfg.max_venn, &mut rev_regions)?;
    let mut regions: Vec<Vec<bool>> =
        rev_regions.into_iter().map(|r| r.into_iter().rev().collect()).collect();
    regions.sort();
    cfg.check_deadline()?;
    // group cells
    let mut proj_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ngroups];
    for u in &units {
        if let Space::Group(g) = space_of(u) {
            for v in u {
                if f.groups[*v].is_none() {
                    proj_sets[g].insert(*v);
                }
            }
        }
    }
    let shared_pos: BTreeMap<usize, usize> = shared.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut groups = Vec::with_capacity(ngroups);
    let mut offset = regions.len();
    let mut total_cells = 0usize;
    for g in 0..ngroups {
        let local: Vec<usize> = (0..n).filter(|v| group_of[*v] == Some(g)).collect();
        let proj: Vec<usize> = proj_sets[g].iter().copied().collect();
        let mut classes: Vec<Vec<bool>> = Vec::new();
        let mut class_index: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        let mut class_of_region = Vec::with_capacity(regions.len());
        for r in &regions {
            let key: Vec<bool> = proj.iter().map(|v| r[shared_pos[v]]).collect();
            let next = classes.len();
            let ci = *class_index.entry(key.clone()).or_insert_with(|| {
                classes.push(key);
                next
            });
            class_of_region.push(ci);
        }
        let gatoms: Vec<&(Term, Term, bool)> =
            set_atoms.iter().filter(|a| atom_space(a) == Space::Group(g)).collect();
        let lorder: Vec<usize> = local.iter().rev().copied().collect();
        let mut cells = Vec::new();
        for (ci, key) in classes.iter().enumerate() {
            let fixed: Vec<(usize, bool)> = proj.iter().copied().zip(key.iter().copied()).collect();
            let mut locals = Vec::new();
            enumerate(n, &fixed, &lorder, &gatoms, cfg.max_venn.saturating_sub(total_cells), &mut locals)?;
            for l in locals {
                cells.push((ci, l.into_iter().rev().collect::<Vec<bool>>()));
            }
            total_cells = offset - regions.len() + cells.len();
        }
        cells.sort();
        let len = cells.len();
        groups.push(GroupCells { local, proj, classes, class_of_region, cells, offset });
        offset += len;
        cfg.check_deadline()?;
    }
    Ok(Decomposition { nvars: n, shared, regions, groups, group_of, ncount: offset })
}

/// Public entry point: decomposition over the variables that occur in `f`.
pub fn venn_decompose(f: &Formula, cfg: &Config) -> Result<Decomposition> {
    decompose(f, false, cfg)
}

impl Decomposition {
    pub fn space_of(&self, vs: &[usize]) -> Space {
        vs.iter().find_map(|v| self.group_of[*v]).map(Space::Group).unwrap_or(Space::Shared)
    }

    /// Region-count variables whose region or cell lies inside `t`.
    pub fn cells_of(&self, t: &Term) -> Vec<usize> {
        let mut vs = Vec::new();
        t.for_each_var(&mut |v| vs.push(*v));
        self.cells_of_space(t, self.space_of(&vs))
    }

    pub fn cells_of_space(&self, t: &Term, space: Space) -> Vec<usize> {
        match space {
            Space::Shared => {
                let pos: BTreeMap<usize, usize> = self.shared.iter().enumerate().map(|(i, v)| (*v, i)).collect();
                self.regions
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| t.holds(&|v: &usize| pos.get(v).map(|p| r[*p]).unwrap_or(false)))
                    .map(|(i, _)| i)
                    .collect()
            }
            Space::Group(g) => {
                let gc = &self.groups[g];
                gc.cells
                    .iter()
                    .enumerate()
                    .filter(|(_, (ci, l))| {
                        let key = &gc.classes[*ci];
                        t.holds(&|v: &usize| {
                            if let Some(p) = gc.local.iter().position(|x| x == v) {
                                l[p]
                            } else if let Some(p) = gc.proj.iter().position(|x| x == v) {
                                key[p]
                            } else {
                                false
                            }
                        })
                    })
                    .map(|(i, _)| gc.offset + i)
                    .collect()
            }
        }
    }

    /// Cells in the symmetric difference (`eq`) or difference `s ∖ t`.
    pub fn violating_cells(&self, s: &Term, t: &Term, eq: bool) -> Vec<usize> {
        let mut vs = Vec::new();
        s.for_each_var(&mut |v| vs.push(*v));
        t.for_each_var(&mut |v| vs.push(*v));
        let space = self.space_of(&vs);
        let a: BTreeSet<usize> = self.cells_of_space(s, space).into_iter().collect();
        let b: BTreeSet<usize> = self.cells_of_space(t, space).into_iter().collect();
        if eq {
            a.symmetric_difference(&b).copied().collect()
        } else {
            a.difference(&b).copied().collect()
        }
    }

    /// Full sign vector of shared region `r` over the whole table.
    pub fn region_signs(&self, r: usize) -> Vec<bool> {
        let mut s = vec![false; self.nvars];
        for (i, v) in self.shared.iter().enumerate() {
            s[*v] = self.regions[r][i];
        }
        s
    }

    /// Combine region and cell counts into full regions of the variable table.
    pub fn assemble(&self, counts: &[u64]) -> Vec<(Vec<bool>, u64)> {
        // per group and class: split cell counts over the regions of the class
        let mut per_region: Vec<Vec<Vec<(Vec<bool>, u64)>>> = vec![Vec::new(); self.regions.len()];
        for gc in &self.groups {
            let mut by_class_regions: Vec<Vec<(usize, u64)>> = vec![Vec::new(); gc.classes.len()];
            for (r, ci) in gc.class_of_region.iter().enumerate() {
                if counts[r] > 0 {
                    by_class_regions[*ci].push((r, counts[r]));
                }
            }
            let mut by_class_cells: Vec<Vec<(Vec<bool>, u64)>> = vec![Vec::new(); gc.classes.len()];
            for (i, (ci, l)) in gc.cells.iter().enumerate() {
                let c = counts[gc.offset + i];
                if c > 0 {
                    by_class_cells[*ci].push((l.clone(), c));
                }
            }
            let mut split: Vec<Vec<(Vec<bool>, u64)>> = vec![Vec::new(); self.regions.len()];
            for ci in 0..gc.classes.len() {
                for (r, l, c) in refine(&by_class_regions[ci], &by_class_cells[ci]) {
                    split[r].push((l, c));
                }
            }
            for (r, parts) in split.into_iter().enumerate() {
                per_region[r].push(parts);
            }
        }
        let mut out = Vec::new();
        for (r, &cnt) in counts.iter().take(self.regions.len()).enumerate() {
            if cnt == 0 {
                continue;
            }
            let mut pieces: Vec<(Vec<bool>, u64)> = vec![(self.region_signs(r), cnt)];
            for (g, parts) in per_region[r].iter().enumerate() {
                let gc = &self.groups[g];
                let mut next = Vec::new();
                for (base, l, c) in refine(&pieces, parts) {
                    let mut s = base;
                    for (p, v) in gc.local.iter().enumerate() {
                        s[*v] = l[p];
                    }
                    next.push((s, c));
                }
                pieces = next;
            }
            out.extend(pieces);
        }
        let mut merged: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
        for (s, c) in out {
            *merged.entry(s).or_insert(0) += c;
        }
        merged.into_iter().collect()
    }
}

/// Overlay two partitions of the same total into labelled pieces.
fn refine<A: Clone, B: Clone>(a: &[(A, u64)], b: &[(B, u64)]) -> Vec<(A, B, u64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a.first().map(|x| x.1).unwrap_or(0), b.first().map(|x| x.1).unwrap_or(0));
    while i < a.len() && j < b.len() {
        let take = ra.min(rb);
        if take > 0 {
            out.push((a[i].0.clone(), b[j].0.clone(), take));
        }
        ra -= take;
        rb -= take;
        if ra == 0 {
            i += 1;
            ra = a.get(i).map(|x| x.1).unwrap_or(0);
        }
        if rb == 0 {
            j += 1;
            rb = b.get(j).map(|x| x.1).unwrap_or(0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfbapa::{atom, var};

    #[test]
    fn single_variable() {
        let mut f = Formula::new();
        let a = f.var("a", None);
        f.body = atom(Atom::CardLt(crate::syntax::PaExpr::Const(3), super::super::card(var(a))));
        let d = venn_decompose(&f, &Config::default()).unwrap();
        assert_eq!(d.regions, vec![vec![false], vec![true]]);
        assert_eq!(d.cells_of(&var(a)), vec![1]);
    }

    #[test]
    fn subset_atom_prunes_region() {
        let mut f = Formula::new();
        let (a, b) = (f.var("a", None), f.var("b", None));
        f.body = atom(Atom::SetSub(var(a), var(b)));
        let d = venn_decompose(&f, &Config::default()).unwrap();
        assert_eq!(d.regions.len(), 3);
        assert!(!d.regions.contains(&vec![true, false]));
    }

    #[test]
    fn refine_overlays() {
        let r = refine(&[('a', 2), ('b', 3)], &[(1, 4), (2, 1)]);
        assert_eq!(r, vec![('a', 1, 2), ('b', 1, 2), ('b', 2, 1)]);
    }
}
