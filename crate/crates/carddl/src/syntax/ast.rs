//! Abstract syntax for concepts, QFBAPA constraints, knowledge bases and queries.
//!
//! The constraint language (`SetTerm`, `PaExpr`, `Atom`, `Constraint`) is generic
//! over its set-variable type so the same trees serve both as the body of
//! `sat(...)`/`succ(...)` expressions and as solver input over indexed variables.

use std::collections::BTreeSet;

/// Reserved concept name used to express top and bottom.
pub const TOP_NAME: &str = "__T";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetTerm<V> {
    Empty,
    Universe,
    Var(V),
    Union(Box<SetTerm<V>>, Box<SetTerm<V>>),
    Inter(Box<SetTerm<V>>, Box<SetTerm<V>>),
    Complement(Box<SetTerm<V>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaExpr<V> {
    Const(i64),
    Card(SetTerm<V>),
    Sum(Box<PaExpr<V>>, Box<PaExpr<V>>),
    /// Constant multiple of an expression.
    Mul(i64, Box<PaExpr<V>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom<V> {
    SetEq(SetTerm<V>, SetTerm<V>),
    SetSub(SetTerm<V>, SetTerm<V>),
    CardEq(PaExpr<V>, PaExpr<V>),
    CardLt(PaExpr<V>, PaExpr<V>),
    /// `N | l` with `N` a positive constant.
    Divides(i64, PaExpr<V>),
}

/// Boolean combination of atoms. `And(vec![])` is true, `Or(vec![])` is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint<V> {
    Atom(Atom<V>),
    And(Vec<Constraint<V>>),
    Or(Vec<Constraint<V>>),
    Not(Box<Constraint<V>>),
}

/// Set variable of a constraint expression inside a concept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetVar {
    Role(String),
    Concept(Concept),
    /// Individual name; only produced internally by the consistency procedure.
    Indiv(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Name(String),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    Not(Box<Concept>),
    /// Global constraint expression (ALCSCC++).
    Constr(Box<Constraint<SetVar>>),
    /// Successor constraint expression (ALCSCC).
    Succ(Box<Constraint<SetVar>>),
}

pub type ConceptConstraint = Constraint<SetVar>;

impl<V> SetTerm<V> {
    pub fn var(v: V) -> Self {
        SetTerm::Var(v)
    }
    pub fn union(a: SetTerm<V>, b: SetTerm<V>) -> Self {
        SetTerm::Union(Box::new(a), Box::new(b))
    }
    pub fn inter(a: SetTerm<V>, b: SetTerm<V>) -> Self {
        SetTerm::Inter(Box::new(a), Box::new(b))
    }
    pub fn complement(a: SetTerm<V>) -> Self {
        SetTerm::Complement(Box::new(a))
    }

    /// Intersection of all terms; the universe when empty.
    pub fn inter_all(terms: impl IntoIterator<Item = SetTerm<V>>) -> Self {
        let mut it = terms.into_iter();
        match it.next() {
            None => SetTerm::Universe,
            Some(first) => it.fold(first, SetTerm::inter),
        }
    }

    /// Union of all terms; the empty set when empty.
    pub fn union_all(terms: impl IntoIterator<Item = SetTerm<V>>) -> Self {
        let mut it = terms.into_iter();
        match it.next() {
            None => SetTerm::Empty,
            Some(first) => it.fold(first, SetTerm::union),
        }
    }

    /// Replace every variable by a term.
    pub fn subst<W>(&self, f: &mut impl FnMut(&V) -> SetTerm<W>) -> SetTerm<W> {
        match self {
            SetTerm::Empty => SetTerm::Empty,
            SetTerm::Universe => SetTerm::Universe,
            SetTerm::Var(v) => f(v),
            SetTerm::Union(a, b) => SetTerm::union(a.subst(f), b.subst(f)),
            SetTerm::Inter(a, b) => SetTerm::inter(a.subst(f), b.subst(f)),
            SetTerm::Complement(a) => SetTerm::complement(a.subst(f)),
        }
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            SetTerm::Empty | SetTerm::Universe => {}
            SetTerm::Var(v) => f(v),
            SetTerm::Union(a, b) | SetTerm::Inter(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            SetTerm::Complement(a) => a.for_each_var(f),
        }
    }

    /// Evaluate under a Boolean membership assignment of the variables.
    pub fn holds(&self, val: &impl Fn(&V) -> bool) -> bool {
        match self {
            SetTerm::Empty => false,
            SetTerm::Universe => true,
            SetTerm::Var(v) => val(v),
            SetTerm::Union(a, b) => a.holds(val) || b.holds(val),
            SetTerm::Inter(a, b) => a.holds(val) && b.holds(val),
            SetTerm::Complement(a) => !a.holds(val),
        }
    }

    /// Kleene evaluation under a partial assignment.
    pub fn holds3(&self, val: &impl Fn(&V) -> Option<bool>) -> Option<bool> {
        match self {
            SetTerm::Empty => Some(false),
            SetTerm::Universe => Some(true),
            SetTerm::Var(v) => val(v),
            SetTerm::Union(a, b) => match (a.holds3(val), b.holds3(val)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            SetTerm::Inter(a, b) => match (a.holds3(val), b.holds3(val)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            SetTerm::Complement(a) => a.holds3(val).map(|b| !b),
        }
    }
}

impl<V> PaExpr<V> {
    pub fn card(s: SetTerm<V>) -> Self {
        PaExpr::Card(s)
    }
    pub fn sum(a: PaExpr<V>, b: PaExpr<V>) -> Self {
        PaExpr::Sum(Box::new(a), Box::new(b))
    }
    pub fn mul(n: i64, a: PaExpr<V>) -> Self {
        PaExpr::Mul(n, Box::new(a))
    }

    pub fn subst<W>(&self, f: &mut impl FnMut(&V) -> SetTerm<W>) -> PaExpr<W> {
        match self {
            PaExpr::Const(c) => PaExpr::Const(*c),
            PaExpr::Card(s) => PaExpr::Card(s.subst(f)),
            PaExpr::Sum(a, b) => PaExpr::sum(a.subst(f), b.subst(f)),
            PaExpr::Mul(n, a) => PaExpr::mul(*n, a.subst(f)),
        }
    }

    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a SetTerm<V>)) {
        match self {
            PaExpr::Const(_) => {}
            PaExpr::Card(s) => f(s),
            PaExpr::Sum(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
            PaExpr::Mul(_, a) => a.for_each_term(f),
        }
    }

    /// Largest absolute constant occurring in the expression.
    pub fn max_const(&self) -> u64 {
        match self {
            PaExpr::Const(c) => c.unsigned_abs(),
            PaExpr::Card(_) => 0,
            PaExpr::Sum(a, b) => a.max_const().max(b.max_const()),
            PaExpr::Mul(n, a) => n.unsigned_abs().max(a.max_const()),
        }
    }
}

impl<V> Atom<V> {
    pub fn subst<W>(&self, f: &mut impl FnMut(&V) -> SetTerm<W>) -> Atom<W> {
        match self {
            Atom::SetEq(a, b) => Atom::SetEq(a.subst(f), b.subst(f)),
            Atom::SetSub(a, b) => Atom::SetSub(a.subst(f), b.subst(f)),
            Atom::CardEq(a, b) => Atom::CardEq(a.subst(f), b.subst(f)),
            Atom::CardLt(a, b) => Atom::CardLt(a.subst(f), b.subst(f)),
            Atom::Divides(n, a) => Atom::Divides(*n, a.subst(f)),
        }
    }

    /// Every set term of the atom, including those under cardinalities.
    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a SetTerm<V>)) {
        match self {
            Atom::SetEq(a, b) | Atom::SetSub(a, b) => {
                f(a);
                f(b);
            }
            Atom::CardEq(a, b) | Atom::CardLt(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
            Atom::Divides(_, a) => a.for_each_term(f),
        }
    }

    pub fn is_set_atom(&self) -> bool {
        matches!(self, Atom::SetEq(..) | Atom::SetSub(..))
    }

    pub fn max_const(&self) -> u64 {
        match self {
            Atom::SetEq(..) | Atom::SetSub(..) => 0,
            Atom::CardEq(a, b) | Atom::CardLt(a, b) => a.max_const().max(b.max_const()),
            Atom::Divides(n, a) => n.unsigned_abs().max(a.max_const()),
        }
    }
}

impl<V> Constraint<V> {
    pub fn atom(a: Atom<V>) -> Self {
        Constraint::Atom(a)
    }

    pub fn truth() -> Self {
        Constraint::And(vec![])
    }

    pub fn falsity() -> Self {
        Constraint::Or(vec![])
    }

    /// Conjunction, flattening nested conjunctions; a single conjunct is returned as is.
    pub fn and(parts: impl IntoIterator<Item = Constraint<V>>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Constraint::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Constraint::And(out)
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Constraint<V>>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Constraint::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Constraint::Or(out)
        }
    }

    /// Negation with double negations collapsed.
    pub fn negate(c: Constraint<V>) -> Self {
        match c {
            Constraint::Not(inner) => *inner,
            other => Constraint::Not(Box::new(other)),
        }
    }

    pub fn subst<W>(&self, f: &mut impl FnMut(&V) -> SetTerm<W>) -> Constraint<W> {
        match self {
            Constraint::Atom(a) => Constraint::Atom(a.subst(f)),
            Constraint::And(v) => Constraint::And(v.iter().map(|c| c.subst(f)).collect()),
            Constraint::Or(v) => Constraint::Or(v.iter().map(|c| c.subst(f)).collect()),
            Constraint::Not(c) => Constraint::Not(Box::new(c.subst(f))),
        }
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom<V>)) {
        match self {
            Constraint::Atom(a) => f(a),
            Constraint::And(v) | Constraint::Or(v) => v.iter().for_each(|c| c.for_each_atom(f)),
            Constraint::Not(c) => c.for_each_atom(f),
        }
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        self.for_each_atom(&mut |a| a.for_each_term(&mut |t| t.for_each_var(f)));
    }

    pub fn max_const(&self) -> u64 {
        let mut m = 0;
        self.for_each_atom(&mut |a| m = m.max(a.max_const()));
        m
    }

    /// Number of atoms involving cardinalities or divisibility.
    pub fn card_atom_count(&self) -> usize {
        let mut n = 0;
        self.for_each_atom(&mut |a| {
            if !a.is_set_atom() {
                n += 1
            }
        });
        n
    }
}

impl Concept {
    pub fn name(n: impl Into<String>) -> Self {
        Concept::Name(n.into())
    }

    pub fn top() -> Self {
        Concept::Or(vec![Concept::name(TOP_NAME), Concept::not(Concept::name(TOP_NAME))])
    }

    pub fn bottom() -> Self {
        Concept::And(vec![Concept::name(TOP_NAME), Concept::not(Concept::name(TOP_NAME))])
    }

    pub fn is_top(&self) -> bool {
        *self == Concept::top()
    }

    pub fn is_bottom(&self) -> bool {
        *self == Concept::bottom()
    }

    /// Negation with double negation collapsed.
    pub fn not(c: Concept) -> Self {
        match c {
            Concept::Not(inner) => *inner,
            other => Concept::Not(Box::new(other)),
        }
    }

    /// n-ary conjunction; nested conjunctions are flattened.
    pub fn and(parts: impl IntoIterator<Item = Concept>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Concept::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Concept::top(),
            1 => out.pop().unwrap(),
            _ => Concept::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Concept>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Concept::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Concept::bottom(),
            1 => out.pop().unwrap(),
            _ => Concept::Or(out),
        }
    }

    pub fn constr(c: ConceptConstraint) -> Self {
        Concept::Constr(Box::new(c))
    }

    pub fn succ(c: ConceptConstraint) -> Self {
        Concept::Succ(Box::new(c))
    }

    /// Direct sub-concepts, including concepts used as set variables.
    pub fn children(&self) -> Vec<&Concept> {
        match self {
            Concept::Name(_) => vec![],
            Concept::And(v) | Concept::Or(v) => v.iter().collect(),
            Concept::Not(c) => vec![c],
            Concept::Constr(c) | Concept::Succ(c) => {
                let mut out = Vec::new();
                c.for_each_var(&mut |v| {
                    if let SetVar::Concept(d) = v {
                        out.push(d)
                    }
                });
                out
            }
        }
    }

    /// All subdescriptions in pre-order, duplicates removed.
    pub fn subdescriptions(&self) -> Vec<Concept> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subs(&mut seen, &mut out);
        out
    }

    fn collect_subs(&self, seen: &mut BTreeSet<Concept>, out: &mut Vec<Concept>) {
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
        for c in self.children() {
            c.collect_subs(seen, out);
        }
    }

    /// Number of nodes of the concept tree (set-variable concepts included).
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Nesting depth of constraint expressions.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Name(_) => 0,
            Concept::And(v) | Concept::Or(v) => v.iter().map(|c| c.depth()).max().unwrap_or(0),
            Concept::Not(c) => c.depth(),
            Concept::Constr(_) | Concept::Succ(_) => {
                1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
            }
        }
    }

    pub fn has_constr(&self) -> bool {
        match self {
            Concept::Constr(_) => true,
            _ => self.children().iter().any(|c| c.has_constr()),
        }
    }

    pub fn has_succ(&self) -> bool {
        match self {
            Concept::Succ(_) => true,
            _ => self.children().iter().any(|c| c.has_succ()),
        }
    }

    pub fn concept_names(&self, out: &mut BTreeSet<String>) {
        if let Concept::Name(n) = self {
            out.insert(n.clone());
        }
        for c in self.children() {
            c.concept_names(out);
        }
    }

    pub fn role_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Concept::Constr(c) | Concept::Succ(c) => c.for_each_var(&mut |v| match v {
                SetVar::Role(r) => {
                    out.insert(r.clone());
                }
                SetVar::Concept(d) => d.role_names(out),
                SetVar::Indiv(_) => {}
            }),
            _ => {
                for c in self.children() {
                    c.role_names(out);
                }
            }
        }
    }
}

/// Semi-restricted cardinality constraint `Σ N_i|C_i| + M ≤ Σ N_j|C_j|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemiRestricted {
    pub lhs: Vec<(i64, Concept)>,
    pub offset: u64,
    pub rhs: Vec<(i64, Concept)>,
}

/// Positive Boolean combination of semi-restricted constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Erc {
    Atom(SemiRestricted),
    And(Vec<Erc>),
    Or(Vec<Erc>),
}

impl Erc {
    pub fn empty() -> Self {
        Erc::And(vec![])
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Erc::And(v) if v.is_empty())
    }

    pub fn and(parts: impl IntoIterator<Item = Erc>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Erc::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Erc::And(out)
        }
    }

    pub fn atoms(&self) -> Vec<&SemiRestricted> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a SemiRestricted>) {
        match self {
            Erc::Atom(a) => out.push(a),
            Erc::And(v) | Erc::Or(v) => v.iter().for_each(|e| e.collect(out)),
        }
    }

    pub fn map_concepts(&self, f: &mut impl FnMut(&Concept) -> Concept) -> Erc {
        match self {
            Erc::Atom(a) => Erc::Atom(SemiRestricted {
                lhs: a.lhs.iter().map(|(n, c)| (*n, f(c))).collect(),
                offset: a.offset,
                rhs: a.rhs.iter().map(|(n, c)| (*n, f(c))).collect(),
            }),
            Erc::And(v) => Erc::And(v.iter().map(|e| e.map_concepts(f)).collect()),
            Erc::Or(v) => Erc::Or(v.iter().map(|e| e.map_concepts(f)).collect()),
        }
    }

    /// Evaluate the positive structure given the truth of each atom.
    pub fn holds(&self, atom_holds: &mut impl FnMut(&SemiRestricted) -> bool) -> bool {
        match self {
            Erc::Atom(a) => atom_holds(a),
            Erc::And(v) => v.iter().all(|e| e.holds(atom_holds)),
            Erc::Or(v) => v.iter().any(|e| e.holds(atom_holds)),
        }
    }
}

/// Concept inclusion `sub ⊑ sup`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ci {
    pub sub: Concept,
    pub sup: Concept,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Concept(Concept, String),
    Role(String, String, String),
    /// Negated role assertion `¬r(a,b)`.
    NotRole(String, String, String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Kb {
    pub tbox: Vec<Ci>,
    pub abox: Vec<Assertion>,
    pub erc: Erc,
    pub ec: Option<ConceptConstraint>,
    /// Concept whose extension must be non-empty (used for satisfiability files).
    pub goal: Option<Concept>,
}

impl Default for Erc {
    fn default() -> Self {
        Erc::empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub concepts: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

impl Signature {
    pub fn merge(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
        self.individuals.extend(other.individuals.iter().cloned());
    }

    pub fn add_concept(&mut self, c: &Concept) {
        c.concept_names(&mut self.concepts);
        c.role_names(&mut self.roles);
    }
}

impl Kb {
    /// Every concept occurring in the KB.
    pub fn concepts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        for ci in &self.tbox {
            out.push(&ci.sub);
            out.push(&ci.sup);
        }
        for a in &self.abox {
            if let Assertion::Concept(c, _) = a {
                out.push(c);
            }
        }
        for a in self.erc.atoms() {
            out.extend(a.lhs.iter().map(|(_, c)| c));
            out.extend(a.rhs.iter().map(|(_, c)| c));
        }
        if let Some(ec) = &self.ec {
            let mut tmp = Vec::new();
            ec.for_each_var(&mut |v| {
                if let SetVar::Concept(c) = v {
                    tmp.push(c)
                }
            });
            out.extend(tmp);
        }
        if let Some(g) = &self.goal {
            out.push(g);
        }
        out
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for c in self.concepts() {
            sig.add_concept(c);
        }
        if let Some(ec) = &self.ec {
            ec.for_each_var(&mut |v| {
                if let SetVar::Role(r) = v {
                    sig.roles.insert(r.clone());
                }
            });
        }
        for a in &self.abox {
            match a {
                Assertion::Concept(_, i) => {
                    sig.individuals.insert(i.clone());
                }
                Assertion::Role(r, x, y) | Assertion::NotRole(r, x, y) => {
                    sig.roles.insert(r.clone());
                    sig.individuals.insert(x.clone());
                    sig.individuals.insert(y.clone());
                }
            }
        }
        sig
    }

    pub fn individuals(&self) -> Vec<String> {
        self.signature().individuals.into_iter().collect()
    }
}

/// Boolean conjunctive query.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Query {
    pub role_atoms: Vec<(String, String, String)>,
    pub concept_atoms: Vec<(Concept, String)>,
}

impl Query {
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (_, x, y) in &self.role_atoms {
            out.insert(x.clone());
            out.insert(y.clone());
        }
        for (_, z) in &self.concept_atoms {
            out.insert(z.clone());
        }
        out
    }

    pub fn atom_count(&self) -> usize {
        self.role_atoms.len() + self.concept_atoms.len()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for (r, _, _) in &self.role_atoms {
            sig.roles.insert(r.clone());
        }
        for (c, _) in &self.concept_atoms {
            sig.add_concept(c);
        }
        sig
    }
}
