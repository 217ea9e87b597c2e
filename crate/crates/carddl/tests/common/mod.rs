//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use carddl::qfbapa::{atom, card, var, Formula, Pa, QConstraint, Term};
use carddl::semantics::Interp;
use carddl::syntax::{parse_kb, parse_query, Atom, Constraint, Kb, PaExpr, Query, SetTerm, Signature};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const NAMES: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["r", "s"];
pub const INDS: [&str; 2] = ["a", "b"];

// ---- QFBAPA formulas ----

fn set_term(r: &mut Rng8, nvars: usize, depth: u32) -> Term {
    if depth == 0 || r.gen_bool(0.4) {
        return match r.gen_range(0..10) {
            0 => SetTerm::Empty,
            1 => SetTerm::Universe,
            _ => var(r.gen_range(0..nvars)),
        };
    }
    match r.gen_range(0..3) {
        0 => SetTerm::union(set_term(r, nvars, depth - 1), set_term(r, nvars, depth - 1)),
        1 => SetTerm::inter(set_term(r, nvars, depth - 1), set_term(r, nvars, depth - 1)),
        _ => SetTerm::complement(set_term(r, nvars, depth - 1)),
    }
}

fn pa_term(r: &mut Rng8, nvars: usize) -> Pa {
    match r.gen_range(0..5) {
        0 => PaExpr::Const(r.gen_range(0..=4)),
        1 => PaExpr::sum(card(set_term(r, nvars, 1)), PaExpr::Const(r.gen_range(0..=4))),
        2 => PaExpr::mul(r.gen_range(1..=2), card(set_term(r, nvars, 1))),
        _ => card(set_term(r, nvars, 2)),
    }
}

fn q_atom(r: &mut Rng8, nvars: usize) -> QConstraint {
    let a = match r.gen_range(0..6) {
        0 => Atom::SetEq(set_term(r, nvars, 2), set_term(r, nvars, 2)),
        1 => Atom::SetSub(set_term(r, nvars, 2), set_term(r, nvars, 2)),
        2 => Atom::CardEq(pa_term(r, nvars), pa_term(r, nvars)),
        3 => Atom::Divides(r.gen_range(2..=3), pa_term(r, nvars)),
        _ => Atom::CardLt(pa_term(r, nvars), pa_term(r, nvars)),
    };
    atom(a)
}

/// ≤ 3 set variables, constants ≤ 4, ≤ 4 atoms.
pub fn formula(r: &mut Rng8) -> Formula {
    let nvars = r.gen_range(1..=3);
    let mut f = Formula::new();
    for i in 0..nvars {
        f.var(format!("S{i}"), None);
    }
    let natoms = r.gen_range(1..=4);
    let atoms: Vec<QConstraint> = (0..natoms).map(|_| q_atom(r, nvars)).collect();
    f.body = combine(r, atoms);
    f
}

fn combine(r: &mut Rng8, mut parts: Vec<QConstraint>) -> QConstraint {
    if parts.len() == 1 {
        let c = parts.pop().unwrap();
        return if r.gen_bool(0.2) { Constraint::negate(c) } else { c };
    }
    let k = r.gen_range(1..parts.len());
    let rest = parts.split_off(k);
    let (a, b) = (combine(r, parts), combine(r, rest));
    if r.gen_bool(0.6) {
        Constraint::and([a, b])
    } else {
        Constraint::or([a, b])
    }
}

// ---- concepts and knowledge bases (surface syntax) ----

fn literal(r: &mut Rng8, names: &[&str]) -> String {
    let n = names.choose(r).unwrap();
    if r.gen_bool(0.3) {
        format!("not {n}")
    } else {
        n.to_string()
    }
}

/// Boolean combination of concept names.
pub fn boolean_concept(r: &mut Rng8, names: &[&str]) -> String {
    match r.gen_range(0..4) {
        0 => format!("({} and {})", literal(r, names), literal(r, names)),
        1 => format!("({} or {})", literal(r, names), literal(r, names)),
        _ => literal(r, names),
    }
}

/// A successor constraint over names.
pub fn succ_concept(r: &mut Rng8, names: &[&str], roles: &[&str]) -> String {
    let role = roles.choose(r).unwrap();
    let set = if r.gen_bool(0.5) { role.to_string() } else { format!("{role} inter {}", names.choose(r).unwrap()) };
    let op = ["<=", ">=", "="].choose(r).unwrap();
    format!("succ(card({set}) {op} {})", r.gen_range(0..=2))
}

/// Concept of depth at most one.
pub fn shallow_concept(r: &mut Rng8, names: &[&str], roles: &[&str]) -> String {
    match r.gen_range(0..5) {
        0 | 1 => succ_concept(r, names, roles),
        2 => format!("({} and {})", literal(r, names), succ_concept(r, names, roles)),
        _ => boolean_concept(r, names),
    }
}

fn erc_atom(r: &mut Rng8, names: &[&str]) -> String {
    let side = |r: &mut Rng8| -> String {
        let k = r.gen_range(1..=2);
        (0..k)
            .map(|_| {
                let n = r.gen_range(1..=3);
                let c = boolean_concept(r, names);
                if n == 1 {
                    format!("card({c})")
                } else {
                    format!("{n} * card({c})")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let lhs = side(r);
    let m = r.gen_range(0..=2);
    let rhs = side(r);
    if m == 0 {
        format!("{lhs} <= {rhs}")
    } else {
        format!("{lhs} + {m} <= {rhs}")
    }
}

/// ABox (1–3 assertions, ≤ 2 individuals) with concepts of depth ≤ 1 and an
/// ERCBox of up to two semi-restricted atoms over Boolean concepts.
pub fn kb_text(r: &mut Rng8) -> String {
    let nnames = r.gen_range(1..=3);
    let names = &NAMES[..nnames];
    let roles = &ROLES[..r.gen_range(1..=2)];
    let inds = &INDS[..r.gen_range(1..=2)];
    let mut lines = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let a = inds.choose(r).unwrap();
        match r.gen_range(0..6) {
            0 | 1 => {
                let b = inds.choose(r).unwrap();
                let role = roles.choose(r).unwrap();
                lines.push(format!("abox: {role}({a}, {b})"));
            }
            _ => lines.push(format!("abox: {}({a})", shallow_concept(r, names, roles))),
        }
    }
    match r.gen_range(0..4) {
        0 => {}
        1 => lines.push(format!("erc: {} or {}", erc_atom(r, names), erc_atom(r, names))),
        2 => lines.push(format!("erc: {} and {}", erc_atom(r, names), erc_atom(r, names))),
        _ => lines.push(format!("erc: {}", erc_atom(r, names))),
    }
    lines.join("\n")
}

pub fn kb(r: &mut Rng8) -> Kb {
    let t = kb_text(r);
    parse_kb(&t).unwrap_or_else(|e| panic!("generated KB does not parse: {e}\n{t}"))
}

/// Query with `1..=max_atoms` atoms over variables x, y, z.
pub fn query(r: &mut Rng8, max_atoms: usize, vars: &[&str]) -> Query {
    let n = r.gen_range(1..=max_atoms);
    let mut atoms = Vec::new();
    for _ in 0..n {
        if r.gen_bool(0.6) {
            let role = ROLES.choose(r).unwrap();
            atoms.push(format!("{role}({}, {})", vars.choose(r).unwrap(), vars.choose(r).unwrap()));
        } else {
            atoms.push(format!("{}({})", NAMES.choose(r).unwrap(), vars.choose(r).unwrap()));
        }
    }
    parse_query(&atoms.join(", ")).unwrap()
}

/// Interpretation with `1..=max_n` elements, sparse edges and up to two individuals.
pub fn interp(r: &mut Rng8, max_n: usize, edge_p: f64) -> Interp {
    let n = r.gen_range(1..=max_n);
    let mut sig = Signature::default();
    for a in NAMES {
        sig.concepts.insert(a.to_string());
    }
    for ro in ROLES {
        sig.roles.insert(ro.to_string());
    }
    let mut i = Interp::new(n, &sig);
    for d in 0..n {
        for a in NAMES {
            if r.gen_bool(0.4) {
                i.insert_concept(a, d);
            }
        }
        for e in 0..n {
            for ro in ROLES {
                if r.gen_bool(edge_p) {
                    i.insert_edge(ro, d, e);
                }
            }
        }
    }
    for a in INDS.iter().take(r.gen_range(0..=2.min(n))) {
        let d = r.gen_range(0..n);
        i.individuals.insert(a.to_string(), d);
    }
    i
}
