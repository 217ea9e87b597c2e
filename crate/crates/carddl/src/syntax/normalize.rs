//! KB normalization: constraint nesting depth at most one in the TBox and
//! concept names only in the ABox and ERCBox.
//!
//! Every complex subconcept that has to be abbreviated gets a fresh name `X`
//! together with the two CIs `X ⊑ C` and `C ⊑ X`.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;

/// A normalized KB plus the definitions of the fresh names it introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub kb: Kb,
    /// Fresh name → the (flattened) concept it abbreviates.
    pub definitions: BTreeMap<String, Concept>,
}

struct Namer {
    used: BTreeSet<String>,
    next: usize,
    memo: BTreeMap<Concept, String>,
    defs: BTreeMap<String, Concept>,
    order: Vec<String>,
}

impl Namer {
    fn new(used: BTreeSet<String>) -> Self {
        Namer { used, next: 0, memo: BTreeMap::new(), defs: BTreeMap::new(), order: Vec::new() }
    }

    fn name_for(&mut self, c: Concept) -> String {
        if let Some(n) = self.memo.get(&c) {
            return n.clone();
        }
        let name = loop {
            self.next += 1;
            let cand = format!("_X{}", self.next);
            if !self.used.contains(&cand) {
                break cand;
            }
        };
        self.used.insert(name.clone());
        self.memo.insert(c.clone(), name.clone());
        self.defs.insert(name.clone(), c);
        self.order.push(name.clone());
        name
    }

    /// Rewrite `c` so that no constraint expression occurs inside another one.
    fn flatten(&mut self, c: &Concept) -> Concept {
        match c {
            Concept::Name(_) => c.clone(),
            Concept::And(v) => Concept::and(v.iter().map(|d| self.flatten(d))),
            Concept::Or(v) => Concept::or(v.iter().map(|d| self.flatten(d))),
            Concept::Not(d) => Concept::not(self.flatten(d)),
            Concept::Constr(k) | Concept::Succ(k) => {
                let inner = k.subst(&mut |v| match v {
                    SetVar::Concept(d) => {
                        let d = self.flatten(d);
                        if d.depth() >= 1 {
                            SetTerm::Var(SetVar::Concept(Concept::Name(self.name_for(d))))
                        } else {
                            SetTerm::Var(SetVar::Concept(d))
                        }
                    }
                    other => SetTerm::Var(other.clone()),
                });
                if matches!(c, Concept::Constr(_)) {
                    Concept::constr(inner)
                } else {
                    Concept::succ(inner)
                }
            }
        }
    }

    /// A concept name standing for `c`.
    fn atomic(&mut self, c: &Concept) -> String {
        match c {
            Concept::Name(n) => n.clone(),
            _ => {
                let f = self.flatten(c);
                match f {
                    Concept::Name(n) => n,
                    f => self.name_for(f),
                }
            }
        }
    }
}

/// Normalize a KB. The result is equisatisfiable with the input; models of
/// the result are models of the input once the fresh names are forgotten.
pub fn normalize_kb(kb: &Kb) -> Normalized {
    let mut used = kb.signature().concepts;
    for c in kb.concepts() {
        c.concept_names(&mut used);
    }
    let mut namer = Namer::new(used);
    let mut tbox: Vec<Ci> = kb
        .tbox
        .iter()
        .map(|ci| Ci { sub: namer.flatten(&ci.sub), sup: namer.flatten(&ci.sup) })
        .collect();
    let abox = kb
        .abox
        .iter()
        .map(|a| match a {
            Assertion::Concept(c, i) => Assertion::Concept(Concept::Name(namer.atomic(c)), i.clone()),
            other => other.clone(),
        })
        .collect();
    let erc = kb.erc.map_concepts(&mut |c| Concept::Name(namer.atomic(c)));
    let mut done = 0;
    // definitions may themselves introduce fresh names; emit until stable
    while done < namer.order.len() {
        let name = namer.order[done].clone();
        let def = namer.defs[&name].clone();
        tbox.push(Ci { sub: Concept::Name(name.clone()), sup: def.clone() });
        tbox.push(Ci { sub: def, sup: Concept::Name(name) });
        done += 1;
    }
    let out = Kb { tbox, abox, erc, ec: kb.ec.clone(), goal: kb.goal.clone() };
    Normalized { kb: out, definitions: namer.defs }
}

/// Whether `kb` already meets the normal form.
pub fn is_normalized(kb: &Kb) -> bool {
    let tbox_ok = kb.tbox.iter().all(|ci| ci.sub.depth() <= 1 && ci.sup.depth() <= 1);
    let abox_ok = kb.abox.iter().all(|a| !matches!(a, Assertion::Concept(c, _) if !matches!(c, Concept::Name(_))));
    let erc_ok = kb
        .erc
        .atoms()
        .iter()
        .all(|a| a.lhs.iter().chain(a.rhs.iter()).all(|(_, c)| matches!(c, Concept::Name(_))));
    tbox_ok && abox_ok && erc_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    #[test]
    fn nested_succ_gets_fresh_name() {
        let kb = parse_kb("tbox: A <= succ(card(r inter succ(card(s) >= 1)) >= 1)").unwrap();
        let n = normalize_kb(&kb);
        assert!(is_normalized(&n.kb));
        assert_eq!(n.definitions.len(), 1);
        assert_eq!(n.kb.tbox.len(), 3);
    }

    #[test]
    fn complex_assertion_is_named() {
        let kb = parse_kb("abox: (B and C)(a)").unwrap();
        let n = normalize_kb(&kb);
        assert!(matches!(&n.kb.abox[0], Assertion::Concept(Concept::Name(x), a) if x == "_X1" && a == "a"));
        assert_eq!(n.definitions["_X1"], Concept::and([Concept::name("B"), Concept::name("C")]));
        assert_eq!(n.kb.tbox.len(), 2);
    }

    #[test]
    fn normalized_kb_is_unchanged() {
        let kb = parse_kb("tbox: A <= succ(card(r inter B) = 2)\nabox: A(a)\nabox: r(a, b)").unwrap();
        let n = normalize_kb(&kb);
        assert_eq!(n.kb, kb);
        assert!(n.definitions.is_empty());
    }

    #[test]
    fn fresh_names_avoid_existing_ones() {
        let kb = parse_kb("abox: _X1(a)\nabox: (B or C)(b)").unwrap();
        let n = normalize_kb(&kb);
        assert!(n.definitions.contains_key("_X2"));
    }
}
