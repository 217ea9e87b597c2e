//! Expressing nominals, the universal role, role negation, role conjunction,
//! ECBoxes and ALCSCC successor constraints with global constraint expressions.

use super::ast::*;

fn concept_var(c: Concept) -> SetTerm<SetVar> {
    SetTerm::Var(SetVar::Concept(c))
}

fn role_var(r: &str) -> SetTerm<SetVar> {
    SetTerm::Var(SetVar::Role(r.to_string()))
}

/// `sat(top <= sat(c))`: every element satisfies the local constraint `c`.
fn everywhere(c: ConceptConstraint) -> Concept {
    Concept::constr(Constraint::Atom(Atom::SetSub(concept_var(Concept::top()), concept_var(Concept::constr(c)))))
}

/// `sat(card(A) = 1)`.
pub fn encode_nominal(a: &str) -> Concept {
    Concept::constr(Constraint::Atom(Atom::CardEq(PaExpr::Card(concept_var(Concept::name(a))), PaExpr::Const(1))))
}

/// `sat(top <= sat(u = univ))`.
pub fn encode_universal_role(u: &str) -> Concept {
    everywhere(Constraint::Atom(Atom::SetEq(role_var(u), SetTerm::Universe)))
}

/// Forces `rc` to be interpreted as the complement of `r`.
pub fn encode_role_negation(r: &str, rc: &str) -> Concept {
    let disjoint = Atom::SetSub(SetTerm::inter(role_var(r), role_var(rc)), SetTerm::Empty);
    let cover = Atom::CardEq(
        PaExpr::sum(PaExpr::Card(role_var(r)), PaExpr::Card(role_var(rc))),
        PaExpr::Card(SetTerm::Universe),
    );
    Concept::and([everywhere(Constraint::Atom(disjoint)), everywhere(Constraint::Atom(cover))])
}

/// Forces `t` to be interpreted as the intersection of `r` and `s`.
pub fn encode_role_conjunction(t: &str, r: &str, s: &str) -> Concept {
    everywhere(Constraint::Atom(Atom::SetEq(role_var(t), SetTerm::inter(role_var(r), role_var(s)))))
}

/// An ECBox as a conjunction of global constraint expressions.
pub fn ecbox_to_concept(ec: &ConceptConstraint) -> Concept {
    match ec {
        Constraint::And(parts) if !parts.is_empty() => Concept::and(parts.iter().map(|c| Concept::constr(c.clone()))),
        c => Concept::constr(c.clone()),
    }
}

/// Rewrite every successor expression into a global constraint expression
/// whose set terms are restricted to the role successors `⋃ roles`.
pub fn scc_to_pp(c: &Concept, roles: &[String]) -> Concept {
    match c {
        Concept::Name(_) => c.clone(),
        Concept::And(v) => Concept::and(v.iter().map(|d| scc_to_pp(d, roles))),
        Concept::Or(v) => Concept::or(v.iter().map(|d| scc_to_pp(d, roles))),
        Concept::Not(d) => Concept::not(scc_to_pp(d, roles)),
        Concept::Constr(k) => Concept::constr(map_constraint(k, roles, false)),
        Concept::Succ(k) => Concept::constr(map_constraint(k, roles, true)),
    }
}

fn successors(roles: &[String]) -> SetTerm<SetVar> {
    SetTerm::union_all(roles.iter().map(|r| role_var(r)))
}

fn map_constraint(k: &ConceptConstraint, roles: &[String], local: bool) -> ConceptConstraint {
    match k {
        Constraint::Atom(a) => Constraint::Atom(map_atom(a, roles, local)),
        Constraint::And(v) => Constraint::And(v.iter().map(|c| map_constraint(c, roles, local)).collect()),
        Constraint::Or(v) => Constraint::Or(v.iter().map(|c| map_constraint(c, roles, local)).collect()),
        Constraint::Not(c) => Constraint::Not(Box::new(map_constraint(c, roles, local))),
    }
}

fn map_atom(a: &Atom<SetVar>, roles: &[String], local: bool) -> Atom<SetVar> {
    let t = |s: &SetTerm<SetVar>| map_term(s, roles, local);
    match a {
        Atom::SetEq(x, y) => Atom::SetEq(t(x), t(y)),
        Atom::SetSub(x, y) => Atom::SetSub(t(x), t(y)),
        Atom::CardEq(x, y) => Atom::CardEq(map_pa(x, roles, local), map_pa(y, roles, local)),
        Atom::CardLt(x, y) => Atom::CardLt(map_pa(x, roles, local), map_pa(y, roles, local)),
        Atom::Divides(n, x) => Atom::Divides(*n, map_pa(x, roles, local)),
    }
}

fn map_pa(e: &PaExpr<SetVar>, roles: &[String], local: bool) -> PaExpr<SetVar> {
    match e {
        PaExpr::Const(c) => PaExpr::Const(*c),
        PaExpr::Card(s) => PaExpr::Card(map_term(s, roles, local)),
        PaExpr::Sum(a, b) => PaExpr::sum(map_pa(a, roles, local), map_pa(b, roles, local)),
        PaExpr::Mul(n, a) => PaExpr::mul(*n, map_pa(a, roles, local)),
    }
}

/// Under the local reading the universe is the successor set, concepts are
/// intersected with it and complements are taken relative to it.
fn map_term(s: &SetTerm<SetVar>, roles: &[String], local: bool) -> SetTerm<SetVar> {
    match s {
        SetTerm::Empty => SetTerm::Empty,
        SetTerm::Universe if local => successors(roles),
        SetTerm::Universe => SetTerm::Universe,
        SetTerm::Var(SetVar::Concept(d)) => {
            let d = concept_var(scc_to_pp(d, roles));
            if local {
                SetTerm::inter(d, successors(roles))
            } else {
                d
            }
        }
        SetTerm::Var(v) => SetTerm::Var(v.clone()),
        SetTerm::Union(a, b) => SetTerm::union(map_term(a, roles, local), map_term(b, roles, local)),
        SetTerm::Inter(a, b) => SetTerm::inter(map_term(a, roles, local), map_term(b, roles, local)),
        SetTerm::Complement(a) => {
            let c = SetTerm::complement(map_term(a, roles, local));
            if local {
                SetTerm::inter(c, successors(roles))
            } else {
                c
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_constraint};

    #[test]
    fn nominal_shape() {
        assert_eq!(encode_nominal("A"), parse_concept("sat(card(A) = 1)").unwrap());
    }

    #[test]
    fn universal_role_shape() {
        assert_eq!(encode_universal_role("u"), parse_concept("sat(top <= sat(u = univ))").unwrap());
    }

    #[test]
    fn role_conjunction_shape() {
        assert_eq!(encode_role_conjunction("t", "r", "s"), parse_concept("sat(top <= sat(t = r inter s))").unwrap());
    }

    #[test]
    fn role_negation_shape() {
        let want =
            parse_concept("sat(top <= sat(r inter rc <= empty)) and sat(top <= sat(card(r) + card(rc) = card(univ)))")
                .unwrap();
        assert_eq!(encode_role_negation("r", "rc"), want);
    }

    #[test]
    fn ecbox_atom() {
        let ec = parse_constraint("card(A) >= 4").unwrap();
        assert_eq!(ecbox_to_concept(&ec), parse_concept("sat(card(A) >= 4)").unwrap());
    }

    #[test]
    fn scc_to_pp_leaves_plain_concepts() {
        let c = parse_concept("A and not B").unwrap();
        assert_eq!(scc_to_pp(&c, &["r".into()]), c);
    }

    #[test]
    fn scc_to_pp_restricts_to_successors() {
        let c = parse_concept("succ(A <= r)").unwrap();
        let want = parse_concept("sat((A) inter (r union s) <= r)").unwrap();
        assert_eq!(scc_to_pp(&c, &["r".into(), "s".into()]), want);
    }
}
