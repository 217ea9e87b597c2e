//! Recursive-descent parser for knowledge bases, concepts and queries.
//!
//! Concept names start with an upper-case letter or `_`; role, individual and
//! query-variable names start with a lower-case letter.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::lexer::{lex_line, Tok, Token, KEYWORDS};
use super::ParseError;

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    eol_col: usize,
}

fn is_concept_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

fn is_lower_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase()) && !KEYWORDS.contains(&s)
}

fn le<V>(k: PaExpr<V>, l: PaExpr<V>) -> Atom<V> {
    Atom::CardLt(k, plus_one(l))
}

fn plus_one<V>(l: PaExpr<V>) -> PaExpr<V> {
    match l {
        PaExpr::Const(c) => PaExpr::Const(c + 1),
        other => PaExpr::sum(other, PaExpr::Const(1)),
    }
}

/// `k ≤ l` in the desugared form produced by the parser.
pub fn card_le<V>(k: PaExpr<V>, l: PaExpr<V>) -> Constraint<V> {
    Constraint::Atom(le(k, l))
}

/// `k ≥ l` in the desugared form produced by the parser.
pub fn card_ge<V>(k: PaExpr<V>, l: PaExpr<V>) -> Constraint<V> {
    Constraint::Atom(le(l, k))
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], line: usize, eol_col: usize) -> Self {
        Parser { toks, pos: 0, line, eol_col }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: &str) -> PResult<T> {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.line, self.eol_col),
        };
        Err(ParseError::syntax(line, col, msg))
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn lower_name(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if is_lower_name(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(&format!("expected {what}")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer"),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    // ---- concepts ----

    fn concept(&mut self) -> PResult<Concept> {
        let mut parts = vec![self.concept_and()?];
        while self.eat_kw("or") {
            parts.push(self.concept_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::or(parts) })
    }

    fn concept_and(&mut self) -> PResult<Concept> {
        let mut parts = vec![self.concept_not()?];
        while self.eat_kw("and") {
            parts.push(self.concept_not()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Concept::and(parts) })
    }

    fn concept_not(&mut self) -> PResult<Concept> {
        if self.eat_kw("not") {
            return Ok(Concept::not(self.concept_not()?));
        }
        self.concept_atom()
    }

    fn concept_atom(&mut self) -> PResult<Concept> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "top" => {
                self.pos += 1;
                Ok(Concept::top())
            }
            Some(Tok::Ident(s)) if s == "bottom" => {
                self.pos += 1;
                Ok(Concept::bottom())
            }
            Some(Tok::Ident(s)) if s == "sat" || s == "succ" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'('")?;
                let c = self.constraint()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(if s == "sat" { Concept::constr(c) } else { Concept::succ(c) })
            }
            Some(Tok::Ident(s)) if is_concept_name(&s) => {
                self.pos += 1;
                Ok(Concept::Name(s))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.concept()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(c)
            }
            _ => self.err("expected concept"),
        }
    }

    fn starts_concept(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                matches!(s.as_str(), "top" | "bottom" | "sat" | "succ" | "not") || is_concept_name(s)
            }
            _ => false,
        }
    }

    // ---- constraints ----

    fn constraint(&mut self) -> PResult<ConceptConstraint> {
        let mut parts = vec![self.constraint_and()?];
        while self.eat_kw("or") {
            parts.push(self.constraint_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Constraint::or(parts) })
    }

    fn constraint_and(&mut self) -> PResult<ConceptConstraint> {
        let mut parts = vec![self.constraint_not()?];
        while self.eat_kw("and") {
            parts.push(self.constraint_not()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Constraint::and(parts) })
    }

    fn constraint_not(&mut self) -> PResult<ConceptConstraint> {
        // `not` followed by a concept atom inside a set term is handled by the comparison path.
        if self.is_kw("not") {
            let save = self.pos;
            self.pos += 1;
            match self.constraint_not() {
                Ok(c) => return Ok(Constraint::negate(c)),
                Err(e) => {
                    self.pos = save;
                    return self.comparison().map_err(|_| e);
                }
            }
        }
        self.constraint_primary()
    }

    fn constraint_primary(&mut self) -> PResult<ConceptConstraint> {
        if self.is_kw("div") {
            self.pos += 1;
            self.expect(Tok::LParen, "'('")?;
            let n = self.int()?;
            if n <= 0 {
                return self.err("divisor must be a positive integer");
            }
            self.expect(Tok::Comma, "','")?;
            let e = self.pa()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(Constraint::Atom(Atom::Divides(n, e)));
        }
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            if let Ok(c) = self.constraint() {
                if self.eat(&Tok::RParen) && !self.continues_operand() {
                    return Ok(c);
                }
            }
            self.pos = save;
        }
        self.comparison()
    }

    fn continues_operand(&self) -> bool {
        match self.peek() {
            Some(Tok::Plus | Tok::Minus | Tok::Star | Tok::Eq | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge) => true,
            Some(Tok::Ident(s)) => s == "inter" || s == "union",
            _ => false,
        }
    }

    fn relop(&mut self) -> Option<Tok> {
        match self.peek() {
            Some(t @ (Tok::Eq | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)) => {
                let t = t.clone();
                self.pos += 1;
                Some(t)
            }
            _ => None,
        }
    }

    fn comparison(&mut self) -> PResult<ConceptConstraint> {
        let save = self.pos;
        let pa_err = match self.pa() {
            Ok(k) => match self.relop() {
                Some(op) => {
                    let l = self.pa()?;
                    let atom = match op {
                        Tok::Eq => Atom::CardEq(k, l),
                        Tok::Lt => Atom::CardLt(k, l),
                        Tok::Le => le(k, l),
                        Tok::Gt => Atom::CardLt(l, k),
                        Tok::Ge => le(l, k),
                        _ => unreachable!(),
                    };
                    return Ok(Constraint::Atom(atom));
                }
                None => self.err::<()>("expected comparison operator").unwrap_err(),
            },
            Err(e) => e,
        };
        let pa_pos = self.pos;
        self.pos = save;
        let s = match self.set_term() {
            Ok(s) => s,
            Err(e) => {
                // report whichever attempt got further
                return Err(if pa_pos > self.pos { pa_err } else { e });
            }
        };
        match self.relop() {
            Some(Tok::Eq) => Ok(Constraint::Atom(Atom::SetEq(s, self.set_term()?))),
            Some(Tok::Le) => Ok(Constraint::Atom(Atom::SetSub(s, self.set_term()?))),
            Some(Tok::Ge) => {
                let t = self.set_term()?;
                Ok(Constraint::Atom(Atom::SetSub(t, s)))
            }
            Some(_) => {
                self.pos -= 1;
                self.err("set terms compare with '=', '<=' or '>=' only")
            }
            None => {
                if pa_pos > self.pos {
                    Err(pa_err)
                } else {
                    self.err("expected comparison operator")
                }
            }
        }
    }

    fn pa(&mut self) -> PResult<PaExpr<SetVar>> {
        let mut acc = self.pa_term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = PaExpr::sum(acc, self.pa_term()?);
            } else if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                acc = PaExpr::sum(acc, PaExpr::mul(-1, self.pa_term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn pa_term(&mut self) -> PResult<PaExpr<SetVar>> {
        let is_int = matches!(self.peek(), Some(Tok::Int(_)))
            || (self.peek() == Some(&Tok::Minus) && matches!(self.peek_at(1), Some(Tok::Int(_))));
        if is_int {
            let n = self.int()?;
            if self.eat(&Tok::Star) {
                return Ok(PaExpr::mul(n, self.pa_factor()?));
            }
            return Ok(PaExpr::Const(n));
        }
        self.pa_factor()
    }

    fn pa_factor(&mut self) -> PResult<PaExpr<SetVar>> {
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Minus) => Ok(PaExpr::Const(self.int()?)),
            Some(Tok::Ident(s)) if s == "card" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'('")?;
                let s = self.card_arg()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(PaExpr::Card(s))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.pa()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => self.err("expected cardinality expression"),
        }
    }

    fn card_arg(&mut self) -> PResult<SetTerm<SetVar>> {
        let save = self.pos;
        match self.set_term() {
            Ok(s) if self.peek() == Some(&Tok::RParen) => Ok(s),
            first => {
                let end = self.pos;
                self.pos = save;
                if self.starts_concept() {
                    if let Ok(c) = self.concept() {
                        if self.peek() == Some(&Tok::RParen) {
                            return Ok(SetTerm::Var(SetVar::Concept(c)));
                        }
                    }
                }
                self.pos = end;
                match first {
                    Ok(_) => self.err("expected ')'"),
                    Err(e) => Err(e),
                }
            }
        }
    }

    fn set_term(&mut self) -> PResult<SetTerm<SetVar>> {
        let mut acc = self.set_inter()?;
        while self.eat_kw("union") {
            acc = SetTerm::union(acc, self.set_inter()?);
        }
        Ok(acc)
    }

    fn set_inter(&mut self) -> PResult<SetTerm<SetVar>> {
        let mut acc = self.set_unary()?;
        while self.eat_kw("inter") {
            acc = SetTerm::inter(acc, self.set_unary()?);
        }
        Ok(acc)
    }

    fn set_unary(&mut self) -> PResult<SetTerm<SetVar>> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "comp" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'('")?;
                let t = self.set_term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(SetTerm::complement(t))
            }
            Some(Tok::Ident(s)) if s == "empty" => {
                self.pos += 1;
                Ok(SetTerm::Empty)
            }
            Some(Tok::Ident(s)) if s == "univ" => {
                self.pos += 1;
                Ok(SetTerm::Universe)
            }
            Some(Tok::Ident(s)) if is_lower_name(&s) => {
                self.pos += 1;
                Ok(SetTerm::Var(SetVar::Role(s)))
            }
            Some(Tok::LParen) => {
                let save = self.pos;
                self.pos += 1;
                if self.starts_concept() || self.peek() == Some(&Tok::LParen) {
                    if let Ok(c) = self.concept() {
                        if self.eat(&Tok::RParen) {
                            return Ok(SetTerm::Var(SetVar::Concept(c)));
                        }
                    }
                    self.pos = save + 1;
                }
                let t = self.set_term()?;
                self.expect(Tok::RParen, "')'")?;
                let _ = save;
                Ok(t)
            }
            _ if self.starts_concept() => Ok(SetTerm::Var(SetVar::Concept(self.concept_not()?))),
            _ => self.err("expected set term"),
        }
    }

    // ---- ERC ----

    fn erc(&mut self) -> PResult<Erc> {
        let mut parts = vec![self.erc_and()?];
        while self.eat_kw("or") {
            parts.push(self.erc_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Erc::Or(flatten_or(parts)) })
    }

    fn erc_and(&mut self) -> PResult<Erc> {
        let mut parts = vec![self.erc_primary()?];
        while self.eat_kw("and") {
            parts.push(self.erc_primary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Erc::and(parts) })
    }

    fn erc_primary(&mut self) -> PResult<Erc> {
        if self.is_kw("not") {
            return self.err("ERCBox must be positive");
        }
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            match self.erc() {
                Ok(e) if self.eat(&Tok::RParen) => return Ok(e),
                Err(e) if e.to_string().contains("ERCBox must be positive") => return Err(e),
                _ => self.pos = save,
            }
        }
        self.semi_restricted().map(Erc::Atom)
    }

    fn erc_side(&mut self) -> PResult<(Vec<(i64, Concept)>, i64)> {
        let mut terms = Vec::new();
        let mut konst = 0i64;
        let mut sign = 1i64;
        loop {
            let mut coef = Some(sign);
            let is_int = matches!(self.peek(), Some(Tok::Int(_)))
                || (self.peek() == Some(&Tok::Minus) && matches!(self.peek_at(1), Some(Tok::Int(_))));
            if is_int {
                let n = self.int()?;
                if self.eat(&Tok::Star) {
                    coef = Some(sign * n);
                } else {
                    konst += sign * n;
                    coef = None;
                }
            }
            if let Some(coef) = coef {
                if !self.eat_kw("card") {
                    return self.err("expected card(...)");
                }
                self.expect(Tok::LParen, "'('")?;
                let c = self.concept()?;
                self.expect(Tok::RParen, "')'")?;
                terms.push((coef, c));
            }
            if self.eat(&Tok::Plus) {
                sign = 1;
            } else if self.peek() == Some(&Tok::Minus) && !matches!(self.peek_at(1), Some(Tok::Int(_))) {
                self.pos += 1;
                sign = -1;
            } else {
                return Ok((terms, konst));
            }
        }
    }

    fn semi_restricted(&mut self) -> PResult<SemiRestricted> {
        let (l, lc) = self.erc_side()?;
        let op = match self.relop() {
            Some(op @ (Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt)) => op,
            _ => return self.err("expected '<=', '<', '>=' or '>' in cardinality constraint"),
        };
        let (r, rc) = self.erc_side()?;
        let (lhs, rhs, mut m) = match op {
            Tok::Le | Tok::Lt => (l, r, lc - rc),
            _ => (r, l, rc - lc),
        };
        if matches!(op, Tok::Lt | Tok::Gt) {
            m += 1;
        }
        if m < 0 {
            return self.err("offset must be non-negative");
        }
        Ok(SemiRestricted { lhs, offset: m as u64, rhs })
    }

    // ---- assertions and atoms ----

    fn assertion(&mut self) -> PResult<Assertion> {
        let negated_role = self.is_kw("not")
            && matches!(self.peek_at(1), Some(Tok::Ident(s)) if is_lower_name(s))
            && self.peek_at(2) == Some(&Tok::LParen);
        if negated_role {
            self.pos += 1;
            let (r, a, b) = self.role_atom()?;
            return Ok(Assertion::NotRole(r, a, b));
        }
        if matches!(self.peek(), Some(Tok::Ident(s)) if is_lower_name(s)) {
            let (r, a, b) = self.role_atom()?;
            return Ok(Assertion::Role(r, a, b));
        }
        let c = self.concept()?;
        self.expect(Tok::LParen, "'('")?;
        let a = self.lower_name("individual name")?;
        self.expect(Tok::RParen, "')'")?;
        Ok(Assertion::Concept(c, a))
    }

    fn role_atom(&mut self) -> PResult<(String, String, String)> {
        let r = self.lower_name("role name")?;
        self.expect(Tok::LParen, "'('")?;
        let a = self.lower_name("name")?;
        self.expect(Tok::Comma, "','")?;
        let b = self.lower_name("name")?;
        self.expect(Tok::RParen, "')'")?;
        Ok((r, a, b))
    }
}

fn flatten_or(parts: Vec<Erc>) -> Vec<Erc> {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Erc::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    out
}

fn parse_all<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let toks = lex_line(text, 1)?;
    let mut p = Parser::new(&toks, 1, text.chars().count() + 1);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

/// Parse a single concept.
pub fn parse_concept(text: &str) -> PResult<Concept> {
    parse_all(text, |p| p.concept())
}

/// Parse a single constraint (the body of `sat(...)` or `succ(...)`).
pub fn parse_constraint(text: &str) -> PResult<ConceptConstraint> {
    parse_all(text, |p| p.constraint())
}

const SECTIONS: &[&str] = &["tbox", "abox", "erc", "ec", "goal"];

/// Parse a knowledge-base document.
pub fn parse_kb(text: &str) -> PResult<Kb> {
    let mut kb = Kb::default();
    let mut ercs = Vec::new();
    let mut ecs = Vec::new();
    let mut open_blocks: BTreeSet<String> = BTreeSet::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut start = 0;
        let section = match (&toks[0].tok, toks.get(1).map(|t| &t.tok)) {
            (Tok::Ident(s), Some(Tok::Colon)) if SECTIONS.contains(&s.as_str()) => {
                start = 2;
                if toks.len() == 2 {
                    if !open_blocks.insert(s.clone()) {
                        return Err(ParseError::DuplicateSection(s.clone()));
                    }
                    current = Some(s.clone());
                    continue;
                }
                s.clone()
            }
            _ => match &current {
                Some(s) => s.clone(),
                None => {
                    return Err(ParseError::syntax(line, toks[0].col, "expected section name (tbox, abox, erc, ec, goal)"))
                }
            },
        };
        let body = &toks[start..];
        let mut p = Parser::new(body, line, raw.chars().count() + 1);
        match section.as_str() {
            "tbox" => {
                let sub = p.concept()?;
                p.expect(Tok::Le, "'<='")?;
                let sup = p.concept()?;
                p.finish()?;
                kb.tbox.push(Ci { sub, sup });
            }
            "abox" => {
                let a = p.assertion()?;
                p.finish()?;
                kb.abox.push(a);
            }
            "erc" => {
                let e = p.erc()?;
                p.finish()?;
                ercs.push(e);
            }
            "ec" => {
                let c = p.constraint()?;
                p.finish()?;
                let mut role = None;
                c.for_each_var(&mut |v| {
                    if let SetVar::Role(r) = v {
                        role.get_or_insert_with(|| r.clone());
                    }
                });
                if let Some(r) = role {
                    return Err(ParseError::syntax(line, 1, &format!("ECBox may not mention role '{r}'")));
                }
                ecs.push(c);
            }
            "goal" => {
                let c = p.concept()?;
                p.finish()?;
                if kb.goal.is_some() {
                    return Err(ParseError::DuplicateSection("goal".into()));
                }
                kb.goal = Some(c);
            }
            _ => unreachable!(),
        }
    }
    kb.erc = Erc::and(ercs);
    if !ecs.is_empty() {
        kb.ec = Some(Constraint::and(ecs));
    }
    check_categories(&kb)?;
    Ok(kb)
}

fn check_categories(kb: &Kb) -> PResult<()> {
    let mut cat: BTreeMap<String, &'static str> = BTreeMap::new();
    let mut note = |name: &str, kind: &'static str| -> PResult<()> {
        match cat.get(name) {
            Some(k) if *k != kind => Err(ParseError::NameClash { name: name.to_string(), first: k.to_string(), second: kind.to_string() }),
            _ => {
                cat.insert(name.to_string(), kind);
                Ok(())
            }
        }
    };
    let mut roles = BTreeSet::new();
    for c in kb.concepts() {
        c.role_names(&mut roles);
    }
    if let Some(ec) = &kb.ec {
        ec.for_each_var(&mut |v| {
            if let SetVar::Concept(c) = v {
                c.role_names(&mut roles)
            }
        });
    }
    for r in &roles {
        note(r, "role")?;
    }
    for a in &kb.abox {
        match a {
            Assertion::Concept(_, i) => note(i, "individual")?,
            Assertion::Role(r, x, y) | Assertion::NotRole(r, x, y) => {
                note(r, "role")?;
                note(x, "individual")?;
                note(y, "individual")?;
            }
        }
    }
    Ok(())
}

/// Parse a conjunctive query `q :- r(x,y), B(y)`; the head is optional.
pub fn parse_query(text: &str) -> PResult<Query> {
    let mut toks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        toks.extend(lex_line(raw, idx + 1)?);
    }
    let mut p = Parser::new(&toks, text.lines().count().max(1), 1);
    if matches!(p.peek(), Some(Tok::Ident(_))) && p.peek_at(1) == Some(&Tok::Turnstile) {
        p.pos += 2;
    }
    let mut q = Query::default();
    let mut roles = BTreeSet::new();
    let mut vars = BTreeSet::new();
    loop {
        if matches!(p.peek(), Some(Tok::Ident(s)) if is_lower_name(s)) {
            let (r, x, y) = p.role_atom()?;
            roles.insert(r.clone());
            vars.insert(x.clone());
            vars.insert(y.clone());
            q.role_atoms.push((r, x, y));
        } else {
            let c = p.concept()?;
            p.expect(Tok::LParen, "'('")?;
            let z = p.lower_name("variable")?;
            p.expect(Tok::RParen, "')'")?;
            c.role_names(&mut roles);
            vars.insert(z.clone());
            q.concept_atoms.push((c, z));
        }
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.finish()?;
    if let Some(v) = roles.intersection(&vars).next() {
        return Err(ParseError::NameClash { name: v.clone(), first: "role".into(), second: "variable".into() });
    }
    Ok(q)
}
