//! Integer feasibility: equality elimination by column Hermite reduction,
//! then branch and bound over the remaining free lattice coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linear::{lp_feasible, Cmp, Row};

/// Outcome of an integer feasibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntOutcome {
    Feasible(Vec<i128>),
    Infeasible,
    /// The node or coefficient budget ran out.
    Unknown,
}

fn forced_zero(nvars: usize, free: &[bool], rows: &[Row]) -> Vec<bool> {
    let mut fixed = vec![false; nvars];
    let mut changed = true;
    while changed {
        changed = false;
        for r in rows {
            if r.rhs != 0 || r.coeffs.iter().any(|(v, _)| free[*v]) {
                continue;
            }
            let live: Vec<&(usize, i128)> = r.coeffs.iter().filter(|(v, _)| !fixed[*v]).collect();
            if live.is_empty() {
                continue;
            }
            let all_pos = live.iter().all(|(_, c)| *c > 0);
            let all_neg = live.iter().all(|(_, c)| *c < 0);
            let forces = match r.cmp {
                Cmp::Eq => all_pos || all_neg,
                Cmp::Le => all_pos,
                Cmp::Ge => all_neg,
            };
            if forces {
                live.iter().for_each(|(v, _)| fixed[*v] = true);
                changed = true;
            }
        }
    }
    fixed
}

/// Decide whether `rows` has an integer solution with the non-free variables non-negative.
pub fn int_feasible(nvars: usize, free: &[bool], rows: &[Row], max_nodes: usize) -> IntOutcome {
    // compress away variables forced to zero and unused ones
    let fixed = forced_zero(nvars, free, rows);
    let mut used = vec![false; nvars];
    for r in rows {
        for (v, _) in &r.coeffs {
            if !fixed[*v] {
                used[*v] = true;
            }
        }
    }
    let mut index = vec![usize::MAX; nvars];
    let mut back = Vec::new();
    for v in 0..nvars {
        if used[v] {
            index[v] = back.len();
            back.push(v);
        }
    }
    let mut crow = Vec::new();
    for r in rows {
        let coeffs: Vec<(usize, i128)> =
            r.coeffs.iter().filter(|(v, _)| used[*v]).map(|&(v, c)| (index[v], c)).collect();
        if coeffs.is_empty() {
            let ok = match r.cmp {
                Cmp::Eq => r.rhs == 0,
                Cmp::Ge => 0 >= r.rhs,
                Cmp::Le => 0 <= r.rhs,
            };
            if !ok {
                return IntOutcome::Infeasible;
            }
            continue;
        }
        crow.push(Row::new(coeffs, r.cmp, r.rhs));
    }
    let cfree: Vec<bool> = back.iter().map(|&v| free[v]).collect();
    match solve_compressed(back.len(), &cfree, &crow, max_nodes) {
        IntOutcome::Feasible(x) => {
            let mut out = vec![0i128; nvars];
            for (i, v) in back.iter().enumerate() {
                out[*v] = x[i];
            }
            debug_assert!(rows.iter().all(|r| r.eval(&out)));
            IntOutcome::Feasible(out)
        }
        other => other,
    }
}

struct Lattice {
    /// Particular solution of the equalities.
    x0: Vec<BigInt>,
    /// Columns spanning the integer kernel.
    kernel: Vec<Vec<BigInt>>,
}

/// Integer solutions of `A x = b` as `x0 + K z`, or `None` if there is none.
fn equality_lattice(n: usize, eqs: &[&Row]) -> Option<Lattice> {
    let k = eqs.len();
    let mut a: Vec<Vec<BigInt>> = eqs
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); n];
            for &(v, c) in &r.coeffs {
                row[v] += BigInt::from(c);
            }
            row
        })
        .collect();
    let b: Vec<BigInt> = eqs.iter().map(|r| BigInt::from(r.rhs)).collect();
    // u holds columns of the unimodular transform: u[j] is column j
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut col = 0;
    let mut pivot_of_row = vec![None; k];
    for i in 0..k {
        if col == n {
            break;
        }
        loop {
            let best = (col..n).filter(|&j| !a[i][j].is_zero()).min_by_key(|&j| a[i][j].abs());
            let Some(j) = best else { break };
            swap_cols(&mut a, &mut u, col, j);
            let p = a[i][col].clone();
            let mut done = true;
            for j2 in col + 1..n {
                if a[i][j2].is_zero() {
                    continue;
                }
                let q = a[i][j2].div_floor(&p);
                if !q.is_zero() {
                    axpy_col(&mut a, &mut u, j2, col, &q);
                }
                if !a[i][j2].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[i][col].is_zero() {
            continue;
        }
        if a[i][col].is_negative() {
            for row in a.iter_mut() {
                row[col] = -row[col].clone();
            }
            for x in u[col].iter_mut() {
                *x = -x.clone();
            }
        }
        pivot_of_row[i] = Some(col);
        col += 1;
    }
    let r = col;
    let mut w = vec![BigInt::zero(); r];
    for i in 0..k {
        let mut s = b[i].clone();
        for (c, wc) in w.iter().enumerate() {
            if !a[i][c].is_zero() {
                s -= &a[i][c] * wc;
            }
        }
        match pivot_of_row[i] {
            Some(c) => {
                let (q, rem) = s.div_rem(&a[i][c]);
                if !rem.is_zero() {
                    return None;
                }
                w[c] = q;
            }
            None => {
                if !s.is_zero() {
                    return None;
                }
            }
        }
    }
    let mut x0 = vec![BigInt::zero(); n];
    for (c, wc) in w.iter().enumerate() {
        if wc.is_zero() {
            continue;
        }
        for i in 0..n {
            x0[i] += &u[c][i] * wc;
        }
    }
    Some(Lattice { x0, kernel: u[r..].to_vec() })
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// column `dst` -= q * column `src`
fn axpy_col(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let d = &row[src] * q;
            row[dst] -= d;
        }
    }
    let s = u[src].clone();
    for (x, y) in u[dst].iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= y * q;
        }
    }
}

fn to_i128(v: &BigInt) -> Option<i128> {
    v.to_i128()
}

/// `Σ g z ≥ h` with the coefficients divided by their gcd and `h` rounded up.
fn tighten(coeffs: Vec<(usize, i128)>, h: i128) -> (Vec<(usize, i128)>, i128) {
    let g = coeffs.iter().fold(0i128, |g, (_, c)| g.gcd(c));
    if g <= 1 {
        return (coeffs, h);
    }
    (coeffs.into_iter().map(|(v, c)| (v, c / g)).collect(), Integer::div_ceil(&h, &g))
}

fn solve_compressed(n: usize, free: &[bool], rows: &[Row], max_nodes: usize) -> IntOutcome {
    let eqs: Vec<&Row> = rows.iter().filter(|r| r.cmp == Cmp::Eq).collect();
    let Some(lat) = equality_lattice(n, &eqs) else { return IntOutcome::Infeasible };
    let d = lat.kernel.len();
    let (Some(x0), Some(kernel)) = (
        lat.x0.iter().map(to_i128).collect::<Option<Vec<i128>>>(),
        lat.kernel.iter().map(|c| c.iter().map(to_i128).collect::<Option<Vec<i128>>>()).collect::<Option<Vec<_>>>(),
    ) else {
        return IntOutcome::Unknown;
    };
    // inequalities over z: Σ_j (a·K_j) z_j ≥ h - a·x0
    let mut zrows: Vec<Row> = Vec::new();
    let mut push = |coeffs: Vec<(usize, i128)>, h: i128| -> bool {
        let coeffs: Vec<(usize, i128)> = coeffs.into_iter().filter(|c| c.1 != 0).collect();
        if coeffs.is_empty() {
            return 0 >= h;
        }
        let (c, h) = tighten(coeffs, h);
        zrows.push(Row::new(c, Cmp::Ge, h));
        true
    };
    let project = |a: &[(usize, i128)]| -> Option<(Vec<(usize, i128)>, i128)> {
        let mut base: i128 = 0;
        for &(v, c) in a {
            base = base.checked_add(c.checked_mul(x0[v])?)?;
        }
        let mut coeffs = Vec::with_capacity(d);
        for (j, col) in kernel.iter().enumerate() {
            let mut s: i128 = 0;
            for &(v, c) in a {
                s = s.checked_add(c.checked_mul(col[v])?)?;
            }
            coeffs.push((j, s));
        }
        Some((coeffs, base))
    };
    for r in rows.iter().filter(|r| r.cmp != Cmp::Eq) {
        let sign = if r.cmp == Cmp::Ge { 1 } else { -1 };
        let a: Vec<(usize, i128)> = r.coeffs.iter().map(|&(v, c)| (v, sign * c)).collect();
        let Some((coeffs, base)) = project(&a) else { return IntOutcome::Unknown };
        if !push(coeffs, sign * r.rhs - base) {
            return IntOutcome::Infeasible;
        }
    }
    for v in 0..n {
        if free[v] {
            continue;
        }
        let Some((coeffs, base)) = project(&[(v, 1)]) else { return IntOutcome::Unknown };
        if !push(coeffs, -base) {
            return IntOutcome::Infeasible;
        }
    }
    let assemble = |z: &[i128]| -> Option<Vec<i128>> {
        let mut x = x0.clone();
        for (j, col) in kernel.iter().enumerate() {
            if z[j] == 0 {
                continue;
            }
            for i in 0..n {
                x[i] = x[i].checked_add(col[i].checked_mul(z[j])?)?;
            }
        }
        Some(x)
    };
    if d == 0 {
        return if zrows.iter().all(|r| r.eval(&[])) {
            match assemble(&[]) {
                Some(x) => IntOutcome::Feasible(x),
                None => IntOutcome::Unknown,
            }
        } else {
            IntOutcome::Infeasible
        };
    }
    let zfree = vec![true; d];
    let mut stack: Vec<Vec<Row>> = vec![Vec::new()];
    let mut nodes = 0;
    let mut all_rows = zrows.clone();
    let base_len = all_rows.len();
    while let Some(extra) = stack.pop() {
        nodes += 1;
        if nodes > max_nodes {
            return IntOutcome::Unknown;
        }
        all_rows.truncate(base_len);
        all_rows.extend(extra.iter().cloned());
        let Some(z) = lp_feasible(d, &zfree, &all_rows) else { continue };
        match z.iter().position(|v| !v.is_integer()) {
            None => {
                let zi: Option<Vec<i128>> = z.iter().map(|v| v.to_integer().to_i128()).collect();
                return match zi.and_then(|zi| assemble(&zi)) {
                    Some(x) => IntOutcome::Feasible(x),
                    None => IntOutcome::Unknown,
                };
            }
            Some(j) => {
                let fl = z[j].floor().to_integer();
                let Some(f) = fl.to_i128() else { return IntOutcome::Unknown };
                let frac = &z[j] - BigRational::from_integer(fl);
                let up_first = frac > BigRational::new(1.into(), 2.into());
                let mut down = extra.clone();
                down.push(Row::new(vec![(j, 1)], Cmp::Le, f));
                let mut up = extra;
                up.push(Row::new(vec![(j, 1)], Cmp::Ge, f + 1));
                if up_first {
                    stack.push(down);
                    stack.push(up);
                } else {
                    stack.push(up);
                    stack.push(down);
                }
            }
        }
    }
    IntOutcome::Infeasible
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: usize, free: &[bool], rows: &[Row]) -> IntOutcome {
        let out = int_feasible(n, free, rows, 10_000);
        if let IntOutcome::Feasible(x) = &out {
            assert!(rows.iter().all(|r| r.eval(x)));
            assert!(x.iter().zip(free).all(|(v, f)| *f || *v >= 0));
        }
        out
    }

    #[test]
    fn parity_is_decided_exactly() {
        // 2m = 2k + 1 has rational but no integer solutions
        let rows = [Row::new(vec![(0, 2), (1, -2)], Cmp::Eq, 1)];
        assert_eq!(solve(2, &[true, true], &rows), IntOutcome::Infeasible);
    }

    #[test]
    fn divisibility_with_bounds() {
        // x = 3m, 1 <= x <= 2 is infeasible; 1 <= x <= 3 is feasible
        let mut rows = vec![
            Row::new(vec![(0, 1), (1, -3)], Cmp::Eq, 0),
            Row::new(vec![(0, 1)], Cmp::Ge, 1),
            Row::new(vec![(0, 1)], Cmp::Le, 2),
        ];
        assert_eq!(solve(2, &[false, true], &rows), IntOutcome::Infeasible);
        rows[2] = Row::new(vec![(0, 1)], Cmp::Le, 3);
        assert!(matches!(solve(2, &[false, true], &rows), IntOutcome::Feasible(_)));
    }

    #[test]
    fn thin_slab_without_lattice_points() {
        // 1 <= 3a - 3b <= 2
        let rows = [Row::new(vec![(0, 3), (1, -3)], Cmp::Ge, 1), Row::new(vec![(0, 3), (1, -3)], Cmp::Le, 2)];
        assert_eq!(solve(2, &[false, false], &rows), IntOutcome::Infeasible);
    }

    #[test]
    fn exhaustive_agreement_on_small_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = 3;
            let nrows = rng.gen_range(1..4);
            let rows: Vec<Row> = (0..nrows)
                .map(|_| {
                    let coeffs = (0..n).map(|v| (v, rng.gen_range(-3i128..=3))).collect();
                    let cmp = [Cmp::Eq, Cmp::Ge, Cmp::Le][rng.gen_range(0..3)];
                    Row::new(coeffs, cmp, rng.gen_range(-4..=4))
                })
                .collect();
            let mut bounded = rows.clone();
            for v in 0..n {
                bounded.push(Row::new(vec![(v, 1)], Cmp::Le, 6));
            }
            let mut brute = false;
            for a in 0..=6 {
                for b in 0..=6 {
                    for c in 0..=6 {
                        if bounded.iter().all(|r| r.eval(&[a, b, c])) {
                            brute = true;
                        }
                    }
                }
            }
            let got = solve(n, &[false; 3], &bounded);
            assert_eq!(matches!(got, IntOutcome::Feasible(_)), brute, "{bounded:?}");
        }
    }
}
