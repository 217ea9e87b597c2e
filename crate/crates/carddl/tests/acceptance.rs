//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use carddl::consist::{consistent, Consistency};
use carddl::qfbapa::special::scale_to_integer;
use carddl::qfbapa::{
    atom, card, lin_feasible_rational, lin_integer_solution, lin_positive_support, lin_sum, solve, var, Formula,
    LinearSystem, QConstraint,
};
use carddl::query::{
    alpha_equivalent, entails, fork_eliminations, maximal_fork_rewriting, maximal_fork_rewriting_by, Entailment,
};
use carddl::satpp::{sat, Reduction};
use carddl::semantics::{cq_match, eval_pp, find_countermodel, find_model, satisfies, Interp};
use carddl::syntax::{
    card_ge, card_le, ecbox_to_concept, encode_nominal, encode_role_conjunction, encode_role_negation,
    encode_universal_role, parse_concept, parse_constraint, parse_kb, parse_query, scc_to_pp, Atom, Ci, Concept,
    Constraint, Kb, PaExpr, SetTerm,
};
use carddl::transforms::{fb_bisimilar, k_loosening, s_duplicate, short_cycle, unravel};
use carddl::Config;
use common::Rng8;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

// ---------------------------------------------------------------- item 1

fn example_goldens() -> Outcome {
    let cfg = Config::default();
    let e = parse_concept("sat(card(A) >= 4) and sat(A <= r) and sat(card(r) <= 3)").unwrap();

    let t = Instant::now();
    let out = sat(&e, &cfg).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1), "sat(E)")?;
    ensure(out.is_unsat(), || "E reported satisfiable".into())?;

    let t = Instant::now();
    let red = Reduction::new(&e, &cfg).map_err(|e| e.to_string())?;
    let containing = red.types_containing();
    within(t, Duration::from_secs(1), "types of E")?;
    let k1 = parse_concept("sat(card(A) >= 4)").unwrap();
    let k2 = parse_concept("sat(A <= r)").unwrap();
    let k3 = parse_concept("sat(card(r) <= 3)").unwrap();
    let a = Concept::name("A");
    let expect = |lit: Concept| -> BTreeSet<String> {
        [e.clone(), k1.clone(), k2.clone(), k3.clone(), lit].iter().map(|c| c.to_string()).collect()
    };
    let want: BTreeSet<BTreeSet<String>> = [expect(a.clone()), expect(Concept::not(a.clone()))].into_iter().collect();
    let got: BTreeSet<BTreeSet<String>> =
        containing.iter().map(|t| t.members(&red.closure).map(|c| c.to_string()).collect()).collect();
    ensure(containing.len() == 2 && got == want, || format!("types containing E: {got:?}"))?;

    let t1 = red
        .types
        .iter()
        .position(|t| t.signs[red.var_of(&e)] && t.signs[red.var_of(&a)])
        .ok_or("no type with E and A")?;
    let xa = red.var_of(&a);
    let xr = red.table.index_of(&format!("X[r]^t{t1}")).ok_or("missing role copy for t1")?;
    let want_psi: Vec<QConstraint> = vec![
        card_ge(card(var(xa)), PaExpr::Const(4)),
        atom(Atom::SetSub(var(xa), var(xr))),
        card_le(card(var(xr)), PaExpr::Const(3)),
    ];
    let psi = red.psi_body(t1).map_err(|e| e.to_string())?;
    let conj = match &psi {
        Constraint::And(parts) => parts.clone(),
        other => vec![other.clone()],
    };
    let key = |v: &[QConstraint]| -> BTreeSet<String> { v.iter().map(|c| format!("{c:?}")).collect() };
    ensure(conj.len() == 3 && key(&conj) == key(&want_psi), || format!("psi_t1 = {psi:?}"))?;
    let mut f = red.psi_t(t1).map_err(|e| e.to_string())?;
    f.body = psi;
    ensure(solve(&f, &cfg).map_err(|e| e.to_string())?.is_none(), || "psi_t1 solvable".into())?;

    let t = Instant::now();
    let e2 = parse_concept("succ(A <= r) and succ(card(r) <= 3)").unwrap();
    let ec = parse_constraint("card(A) >= 4").unwrap();
    let c = Concept::and([scc_to_pp(&e2, &["r".to_string()]), ecbox_to_concept(&ec)]);
    let out = sat(&c, &cfg).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1), "sat(E' with the ECBox)")?;
    let m = out.model().ok_or("E' with the ECBox reported unsatisfiable")?;
    let n_a = m.concepts.get("A").map_or(0, |s| s.len());
    ensure(n_a >= 4, || format!("model has {n_a} A-elements"))?;
    let inst = eval_pp(m, &c).map_err(|e| e.to_string())?;
    ensure(!inst.is_empty(), || "extracted model has no instance".into())?;
    Ok(format!("types=2, |A^I|={n_a}, |Δ|={}", m.size()))
}

// ---------------------------------------------------------------- item 2

/// Bitmask over the `2^n` Venn regions of `n ≤ 3` variables.
fn mask(t: &SetTerm<usize>, n: usize) -> u32 {
    let all = (1u32 << (1 << n)) - 1;
    match t {
        SetTerm::Empty => 0,
        SetTerm::Universe => all,
        SetTerm::Var(v) => (0..1u32 << n).filter(|r| r >> v & 1 == 1).fold(0, |m, r| m | 1 << r),
        SetTerm::Union(a, b) => mask(a, n) | mask(b, n),
        SetTerm::Inter(a, b) => mask(a, n) & mask(b, n),
        SetTerm::Complement(a) => all & !mask(a, n),
    }
}

fn pa_val(e: &PaExpr<usize>, n: usize, counts: &[u32]) -> i64 {
    match e {
        PaExpr::Const(c) => *c,
        PaExpr::Card(t) => {
            let m = mask(t, n);
            (0..counts.len()).filter(|r| m >> r & 1 == 1).map(|r| counts[r] as i64).sum()
        }
        PaExpr::Sum(a, b) => pa_val(a, n, counts) + pa_val(b, n, counts),
        PaExpr::Mul(k, a) => k * pa_val(a, n, counts),
    }
}

fn holds(c: &QConstraint, n: usize, counts: &[u32]) -> bool {
    let occupied = (0..counts.len()).filter(|r| counts[*r] > 0).fold(0u32, |m, r| m | 1 << r);
    match c {
        Constraint::Atom(a) => match a {
            Atom::SetEq(x, y) => (mask(x, n) ^ mask(y, n)) & occupied == 0,
            Atom::SetSub(x, y) => mask(x, n) & !mask(y, n) & occupied == 0,
            Atom::CardEq(x, y) => pa_val(x, n, counts) == pa_val(y, n, counts),
            Atom::CardLt(x, y) => pa_val(x, n, counts) < pa_val(y, n, counts),
            Atom::Divides(k, x) => pa_val(x, n, counts).rem_euclid(*k) == 0,
        },
        Constraint::And(v) => v.iter().all(|d| holds(d, n, counts)),
        Constraint::Or(v) => v.iter().any(|d| holds(d, n, counts)),
        Constraint::Not(d) => !holds(d, n, counts),
    }
}

/// Calls `f` on every distribution of `total` elements over the regions until it returns true.
fn compositions(counts: &mut Vec<u32>, k: usize, left: u32, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    if k + 1 == counts.len() {
        counts[k] = left;
        return f(counts);
    }
    for c in 0..=left {
        counts[k] = c;
        if compositions(counts, k + 1, left - c, f) {
            return true;
        }
    }
    false
}

fn brute_force(f: &Formula, bound: u32) -> bool {
    let n = f.vars.len();
    let mut counts = vec![0u32; 1 << n];
    (0..=bound).any(|u| compositions(&mut counts, 0, u, &mut |c| holds(&f.body, n, c)))
}

fn qfbapa_oracle() -> Outcome {
    let cfg = Config::default();
    let start = Instant::now();
    let results: Vec<Result<bool, String>> = (0..500u64)
        .into_par_iter()
        .map(|seed| {
            let f = common::formula(&mut common::rng(1000 + seed));
            let got = solve(&f, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
            let oracle = brute_force(&f, 16);
            if let Some(sol) = &got {
                let n = f.vars.len();
                let mut counts = vec![0u32; 1 << n];
                for (signs, c) in &sol.regions {
                    let r = signs.iter().enumerate().filter(|(_, s)| **s).fold(0usize, |m, (i, _)| m | 1 << i);
                    counts[r] += *c as u32;
                }
                if !holds(&f.body, n, &counts) || !sol.satisfies(&f) {
                    return Err(format!("seed {seed}: witness does not satisfy {}", f.render()));
                }
            }
            if got.is_some() != oracle {
                return Err(format!("seed {seed}: solve={} oracle={oracle} for {}", got.is_some(), f.render()));
            }
            Ok(oracle)
        })
        .collect();
    let mut sat_count = 0;
    for r in results {
        sat_count += r? as usize;
    }
    within(start, Duration::from_secs(60), "500 formulas")?;
    Ok(format!("500 formulas, {sat_count} SAT, {:.1}s", start.elapsed().as_secs_f64()))
}

// ---------------------------------------------------------------- item 3

fn random_system(r: &mut Rng8, nvars: usize) -> LinearSystem {
    let mut sys = LinearSystem::new(nvars);
    for _ in 0..r.gen_range(1..=3) {
        let coeffs: Vec<(usize, i64)> = (0..nvars).map(|v| (v, r.gen_range(-3..=3))).collect();
        sys.push(&coeffs, r.gen_range(0..=3));
    }
    sys
}

fn small_solutions(sys: &LinearSystem, bound: i64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut v = vec![0i64; sys.nvars];
    loop {
        let big: Vec<BigInt> = v.iter().map(|x| BigInt::from(*x)).collect();
        if sys.holds(&big) {
            out.push(big);
        }
        let mut k = 0;
        while k < v.len() && v[k] == bound {
            v[k] = 0;
            k += 1;
        }
        if k == v.len() {
            return out;
        }
        v[k] += 1;
    }
}

fn linear_properties() -> Outcome {
    let mut r = common::rng(3);
    let mut pairs = 0;
    while pairs < 50 {
        let nvars = r.gen_range(2..=4);
        let sys = random_system(&mut r, nvars);
        let sols = small_solutions(&sys, 3);
        if sols.is_empty() {
            continue;
        }
        let c = sols.choose(&mut r).unwrap();
        let d = sols.choose(&mut r).unwrap();
        let s = lin_sum(&sys, c, d).map_err(|e| e.to_string())?;
        let direct: Vec<BigInt> = c.iter().zip(d).map(|(x, y)| x + y).collect();
        ensure(s == direct && sys.holds(&s), || format!("sum of {c:?} and {d:?} fails {sys:?}"))?;
        pairs += 1;
    }

    let mut scaled = 0;
    while scaled < 50 {
        let nvars = r.gen_range(2..=4);
        let sys = random_system(&mut r, nvars);
        let Some(q) = lin_feasible_rational(&sys).map_err(|e| e.to_string())? else { continue };
        ensure(sys.holds_rational(&q), || format!("rational witness fails {sys:?}"))?;
        let l = q.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ours: Vec<BigInt> = q.iter().map(|x| (x * &l).to_integer()).collect();
        let theirs = scale_to_integer(&q);
        ensure(sys.holds(&ours) && sys.holds(&theirs), || format!("lcm scaling fails {sys:?}"))?;
        let z = lin_integer_solution(&sys).map_err(|e| e.to_string())?;
        ensure(z.is_some_and(|z| sys.holds(&z)), || format!("no integer solution for {sys:?}"))?;
        scaled += 1;
    }

    let subsets: [&[usize]; 4] = [&[], &[0], &[1], &[0, 1]];
    let mut checked = 0;
    for _ in 0..200 {
        let sys = random_system(&mut r, 2);
        let sols = small_solutions(&sys, 40);
        for vars in subsets {
            let oracle = sols.iter().any(|s| vars.iter().all(|v| s[*v] > BigInt::zero()));
            let got = lin_positive_support(&sys, vars).map_err(|e| e.to_string())?;
            if let Some(v) = &got {
                ensure(sys.holds(v) && vars.iter().all(|i| v[*i] > BigInt::zero()), || {
                    format!("support witness {v:?} fails {sys:?}")
                })?;
            }
            ensure(got.is_some() == oracle, || format!("support on {vars:?}: oracle {oracle} for {sys:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{pairs} sums, {scaled} scalings, {checked} support checks"))
}

// ---------------------------------------------------------------- item 4

fn consistency_oracle() -> Outcome {
    let cfg = Config::default();
    let start = Instant::now();
    let results: Vec<Result<bool, String>> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let text = common::kb_text(&mut common::rng(4000 + seed));
            let kb = parse_kb(&text).unwrap();
            let fail = |m: String| format!("seed {seed}: {m}\n{text}");
            match consistent(&kb, &cfg).map_err(|e| fail(e.to_string()))? {
                Consistency::Consistent { model, .. } => {
                    let rep = satisfies(&model, &kb).map_err(|e| fail(e.to_string()))?;
                    ensure(rep.is_model(), || fail(format!("model violates {:?}", rep.violations)))?;
                    Ok(true)
                }
                Consistency::Inconsistent => {
                    let m = find_model(&kb, 5, &cfg).map_err(|e| fail(e.to_string()))?;
                    ensure(m.is_none(), || fail("inconsistent, but the oracle found a model".into()))?;
                    Ok(false)
                }
            }
        })
        .collect();
    let mut yes = 0;
    for r in results {
        yes += r? as usize;
    }
    within(start, Duration::from_secs(600), "200 instances")?;
    Ok(format!("200 instances, {yes} consistent, {:.1}s", start.elapsed().as_secs_f64()))
}

// ---------------------------------------------------------------- item 5

const EXTRAS: [&str; 10] = [
    "A",
    "not A",
    "B",
    "sat(card(A) >= 2)",
    "sat(card(B) <= 1)",
    "sat(A <= B)",
    "sat(card(r) >= 1)",
    "sat(card(r inter A) <= 1)",
    "sat(card(s) <= 2)",
    "not sat(card(r) = 0)",
];

fn audit_encoding(
    name: &str,
    enc: &Concept,
    seed: u64,
    check: &dyn Fn(&Interp) -> bool,
) -> Result<usize, String> {
    let cfg = Config::default();
    let mut r = common::rng(seed);
    let mut found = 0;
    for _ in 0..200 {
        if found == 20 {
            break;
        }
        let k = r.gen_range(1..=3);
        let extras: Vec<Concept> = EXTRAS.choose_multiple(&mut r, k).map(|s| parse_concept(s).unwrap()).collect();
        let c = Concept::and(std::iter::once(enc.clone()).chain(extras));
        let out = sat(&c, &cfg).map_err(|e| format!("{name}: {e} on {c}"))?;
        if let Some(m) = out.model() {
            ensure(check(m), || format!("{name}: condition fails for {c}"))?;
            found += 1;
        }
    }
    ensure(found == 20, || format!("{name}: only {found} satisfiable conjunctions"))?;
    Ok(found)
}

fn all_pairs(m: &Interp) -> impl Iterator<Item = (usize, usize)> {
    let n = m.size();
    (0..n).flat_map(move |d| (0..n).map(move |e| (d, e)))
}

fn encoding_audits() -> Outcome {
    let nominal = audit_encoding("nominal", &encode_nominal("N"), 51, &|m| {
        m.concepts.get("N").is_some_and(|s| s.len() == 1)
    })?;
    let universal = audit_encoding("universal role", &encode_universal_role("u"), 52, &|m| {
        all_pairs(m).all(|(d, e)| m.has_edge("u", d, e))
    })?;
    let negation = audit_encoding("role negation", &encode_role_negation("r", "rc"), 53, &|m| {
        all_pairs(m).all(|(d, e)| m.has_edge("r", d, e) != m.has_edge("rc", d, e))
    })?;
    let conj = audit_encoding("role conjunction", &encode_role_conjunction("t", "r", "s"), 54, &|m| {
        all_pairs(m).all(|(d, e)| m.has_edge("t", d, e) == (m.has_edge("r", d, e) && m.has_edge("s", d, e)))
    })?;
    Ok(format!("{} audited models", nominal + universal + negation + conj))
}

// ---------------------------------------------------------------- item 6

fn cq_oracle() -> Outcome {
    let cfg = Config::default();
    let results: Vec<Result<bool, String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut r = common::rng(6000 + seed);
            let text = common::kb_text(&mut r);
            let kb = parse_kb(&text).unwrap();
            let q = common::query(&mut r, 3, &["x", "y", "z"]);
            let fail = |m: String| format!("seed {seed}: {m}\nquery {q}\n{text}");
            let (ans, _) = entails(&kb, &q, &cfg).map_err(|e| fail(e.to_string()))?;
            match ans {
                Entailment::Entailed => {
                    let cm = find_countermodel(&kb, &q, 4, &cfg).map_err(|e| fail(e.to_string()))?;
                    ensure(cm.is_none(), || fail("entailed, but the oracle found a countermodel".into()))?;
                    Ok(true)
                }
                Entailment::NotEntailed { model, .. } => {
                    let m = cq_match(&model, &q).map_err(|e| fail(e.to_string()))?;
                    ensure(m.is_none(), || fail("countermodel admits a match".into()))?;
                    let rep = satisfies(&model, &kb).map_err(|e| fail(e.to_string()))?;
                    ensure(rep.is_model(), || fail("countermodel violates the KB".into()))?;
                    Ok(false)
                }
            }
        })
        .collect();
    let mut yes = 0;
    for r in results {
        yes += r? as usize;
    }
    Ok(format!("100 instances, {yes} entailed"))
}

// ---------------------------------------------------------------- item 7

/// Axioms that hold in `i`, chosen from random candidates.
fn kb_satisfied_by(i: &Interp, r: &mut Rng8) -> Result<Kb, String> {
    let mut kb = Kb::default();
    let err = |e: carddl::Error| e.to_string();
    for _ in 0..8 {
        let sub = parse_concept(&common::shallow_concept(r, &common::NAMES, &common::ROLES)).unwrap();
        let sup = parse_concept(&common::shallow_concept(r, &common::NAMES, &common::ROLES)).unwrap();
        let mut trial = kb.clone();
        trial.tbox.push(Ci { sub, sup });
        if satisfies(i, &trial).map_err(err)?.is_model() {
            kb = trial;
        }
    }
    let mut text = Vec::new();
    for a in i.individuals.keys() {
        for _ in 0..3 {
            text.push(format!("abox: {}({a})", common::shallow_concept(r, &common::NAMES, &common::ROLES)));
        }
        for b in i.individuals.keys() {
            for role in common::ROLES {
                text.push(format!("abox: {role}({a}, {b})"));
                text.push(format!("abox: not {role}({a}, {b})"));
            }
        }
    }
    for line in text {
        let mut trial = kb.clone();
        trial.abox.extend(parse_kb(&line).unwrap().abox);
        if satisfies(i, &trial).map_err(err)?.is_model() {
            kb = trial;
        }
    }
    Ok(kb)
}

fn transform_properties() -> Outcome {
    let cap = 4_000_000;
    let mut largest = 0;
    let mut axioms = 0;
    let mut unravelled = 0;
    let mut matches = 0;
    for idx in 0..50u64 {
        let mut r = common::rng(7000 + idx);
        let i = common::interp(&mut r, 5, 0.12);
        let k = 2 + (idx as usize % 3);
        let fail = |m: String| format!("instance {idx} (k={k}): {m}\n{}", i.to_json());

        let (loose, _) = k_loosening(&i, k, cap).map_err(|e| fail(e.to_string()))?;
        let g = short_cycle(&loose, k - 1);
        ensure(g.is_none(), || fail(format!("anonymous cycle of length {g:?}")))?;
        largest = largest.max(loose.size());

        let kb = kb_satisfied_by(&i, &mut r).map_err(&fail)?;
        axioms += kb.tbox.len() + kb.abox.len();
        let rep = satisfies(&loose, &kb).map_err(|e| fail(e.to_string()))?;
        ensure(rep.is_model(), || fail(format!("loosening violates {:?}", rep.violations)))?;

        let named: BTreeSet<usize> = i.individuals.values().copied().collect();
        let mut s: Vec<(usize, usize)> = Vec::new();
        for d in (0..i.size()).filter(|d| !named.contains(d)) {
            if r.gen_bool(0.5) {
                s.push((d, r.gen_range(1..=2)));
            }
        }
        let dup = s_duplicate(&i, &s).map_err(|e| fail(e.to_string()))?;
        for _ in 0..3 {
            let q = common::query(&mut r, 3, &["x", "y", "z"]);
            let before = cq_match(&i, &q).map_err(|e| fail(e.to_string()))?.is_some();
            let after = cq_match(&dup, &q).map_err(|e| fail(e.to_string()))?.is_some();
            ensure(before == after, || fail(format!("duplication changes the answer to {q}")))?;
            matches += before as usize;
        }

        let depth = 3;
        let (u, seqs) = unravel(&i, depth, cap).map_err(|e| fail(e.to_string()))?;
        for (w, s) in seqs.iter().enumerate().filter(|(_, s)| s.0.len() < depth) {
            ensure(fb_bisimilar(&u, w, &i, s.last()), || fail(format!("{s:?} not bisimilar to its last element")))?;
            unravelled += 1;
        }
    }
    Ok(format!("50 interpretations, largest loosening {largest}, {axioms} axioms preserved, {unravelled} unraveling elements, {matches} matches"))
}

// ---------------------------------------------------------------- item 8

fn fork_confluence() -> Outcome {
    let q0 = parse_query("r(x,y), r(x,z), r(t,z), s(t,y)").unwrap();
    let elims = fork_eliminations(&q0);
    ensure(elims.iter().any(|(_, p)| *p == ("t".to_string(), "x".to_string())), || {
        format!("merge example eliminations: {:?}", elims.iter().map(|e| &e.1).collect::<Vec<_>>())
    })?;
    let merged = parse_query("r(x,y), r(x,z), s(x,y)").unwrap();
    let max0 = maximal_fork_rewriting(&q0);
    ensure(alpha_equivalent(&max0, &merged).map_err(|e| e.to_string())?, || format!("merge example rewriting {max0}"))?;

    let vars = ["x", "y", "z", "u", "v"];
    let mut nontrivial = 0;
    for seed in 0..50u64 {
        let q = common::query(&mut common::rng(8000 + seed), 5, &vars);
        let mut r1 = common::rng(80_000 + seed);
        let mut r2 = common::rng(90_000 + seed);
        let a = maximal_fork_rewriting_by(&q, |n| r1.gen_range(0..n));
        let b = maximal_fork_rewriting_by(&q, |n| r2.gen_range(0..n));
        ensure(alpha_equivalent(&a, &b).map_err(|e| e.to_string())?, || format!("{q}: {a} vs {b}"))?;
        nontrivial += (!fork_eliminations(&q).is_empty()) as usize;
    }
    Ok(format!("merge example joins x and t; 50 queries, {nontrivial} with forks"))
}

fn main() -> ExitCode {
    let items: [(&str, fn() -> Outcome); 8] = [
        ("1 example goldens", example_goldens),
        ("2 qfbapa oracle equivalence", qfbapa_oracle),
        ("3 linear system properties", linear_properties),
        ("4 consistency soundness and bounded completeness", consistency_oracle),
        ("5 encoding audits", encoding_audits),
        ("6 cq entailment oracle agreement", cq_oracle),
        ("7 transform properties", transform_properties),
        ("8 fork rewriting confluence", fork_confluence),
    ];
    // `cargo test --test acceptance -- 2 5` runs items 2 and 5 only.
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in items {
        if !only.is_empty() && !only.iter().any(|o| name.split(' ').next() == Some(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
