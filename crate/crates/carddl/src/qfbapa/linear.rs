//! Linear rows over integer coefficients and an exact phase-one simplex.

use num_rational::BigRational;
use serde::Serialize;

use super::field::{Field, Small};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cmp {
    Eq,
    Ge,
    Le,
}

/// `Σ coeffs · x  cmp  rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Row {
    pub coeffs: Vec<(usize, i128)>,
    pub cmp: Cmp,
    pub rhs: i128,
}

impl Row {
    pub fn new(mut coeffs: Vec<(usize, i128)>, cmp: Cmp, rhs: i128) -> Row {
        coeffs.sort_by_key(|c| c.0);
        let mut merged: Vec<(usize, i128)> = Vec::with_capacity(coeffs.len());
        for (v, c) in coeffs {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|c| c.1 != 0);
        Row { coeffs: merged, cmp, rhs }
    }

    pub fn eval(&self, x: &[i128]) -> bool {
        let lhs: i128 = self.coeffs.iter().map(|&(v, c)| c * x[v]).sum();
        match self.cmp {
            Cmp::Eq => lhs == self.rhs,
            Cmp::Ge => lhs >= self.rhs,
            Cmp::Le => lhs <= self.rhs,
        }
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> bool {
        let mut lhs = BigRational::from_integer(0.into());
        for &(v, c) in &self.coeffs {
            lhs += &x[v] * BigRational::from_integer(c.into());
        }
        let rhs = BigRational::from_integer(self.rhs.into());
        match self.cmp {
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Le => lhs <= rhs,
        }
    }
}

struct Overflow;

/// Rational feasibility of `rows` with every variable non-negative unless
/// marked free. Returns a feasible point.
pub fn lp_feasible(nvars: usize, free: &[bool], rows: &[Row]) -> Option<Vec<BigRational>> {
    let pre = match presolve(nvars, free, rows) {
        Some(p) => p,
        None => return None,
    };
    let res = match phase_one::<Small>(&pre) {
        Ok(r) => r,
        Err(Overflow) => match phase_one::<BigRational>(&pre) {
            Ok(r) => r,
            Err(Overflow) => unreachable!("big rationals do not overflow"),
        },
    }?;
    let zero = BigRational::from_integer(0.into());
    let mut out = vec![zero; nvars];
    for (v, cols) in pre.columns.iter().enumerate() {
        match cols {
            Columns::Fixed => {}
            Columns::Pos(c) => out[v] = res[*c].clone(),
            Columns::Split(p, q) => out[v] = &res[*p] - &res[*q],
        }
    }
    Some(out)
}

enum Columns {
    Fixed,
    Pos(usize),
    Split(usize, usize),
}

struct Presolved {
    columns: Vec<Columns>,
    ncols: usize,
    rows: Vec<(Vec<(usize, i128)>, Cmp, i128)>,
}

/// Fix non-negative variables that a row forces to zero and drop unused ones.
fn presolve(nvars: usize, free: &[bool], rows: &[Row]) -> Option<Presolved> {
    let mut fixed = vec![false; nvars];
    let mut changed = true;
    while changed {
        changed = false;
        for r in rows {
            let live: Vec<&(usize, i128)> = r.coeffs.iter().filter(|(v, _)| !fixed[*v]).collect();
            if live.is_empty() || r.rhs != 0 || live.iter().any(|(v, _)| free[*v]) {
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
                for (v, _) in live {
                    fixed[*v] = true;
                }
                changed = true;
            }
        }
    }
    let mut used = vec![false; nvars];
    let mut out_rows = Vec::new();
    for r in rows {
        let coeffs: Vec<(usize, i128)> = r.coeffs.iter().copied().filter(|(v, _)| !fixed[*v]).collect();
        if coeffs.is_empty() {
            let ok = match r.cmp {
                Cmp::Eq => r.rhs == 0,
                Cmp::Ge => 0 >= r.rhs,
                Cmp::Le => 0 <= r.rhs,
            };
            if !ok {
                return None;
            }
            continue;
        }
        for (v, _) in &coeffs {
            used[*v] = true;
        }
        out_rows.push((coeffs, r.cmp, r.rhs));
    }
    let mut columns = Vec::with_capacity(nvars);
    let mut ncols = 0;
    for v in 0..nvars {
        if !used[v] {
            columns.push(Columns::Fixed);
        } else if free[v] {
            columns.push(Columns::Split(ncols, ncols + 1));
            ncols += 2;
        } else {
            columns.push(Columns::Pos(ncols));
            ncols += 1;
        }
    }
    let rows = out_rows
        .into_iter()
        .map(|(coeffs, cmp, rhs)| {
            let mut cs = Vec::new();
            for (v, c) in coeffs {
                match columns[v] {
                    Columns::Pos(k) => cs.push((k, c)),
                    Columns::Split(p, q) => {
                        cs.push((p, c));
                        cs.push((q, -c));
                    }
                    Columns::Fixed => {}
                }
            }
            (cs, cmp, rhs)
        })
        .collect();
    Some(Presolved { columns, ncols, rows })
}

fn ck<T>(v: Option<T>) -> Result<T, Overflow> {
    v.ok_or(Overflow)
}

/// Phase one of the simplex with Bland's rule over the field `F`.
/// `Ok(None)` means infeasible.
fn phase_one<F: Field>(p: &Presolved) -> Result<Option<Vec<BigRational>>, Overflow> {
    let m = p.rows.len();
    let n = p.ncols;
    let nslack = p.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
    let width = n + nslack; // artificial columns are not stored
    let mut tab: Vec<Vec<F>> = Vec::with_capacity(m);
    let mut rhs: Vec<F> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificial: Vec<bool> = Vec::with_capacity(m);
    let mut slack_col = n;
    for (coeffs, cmp, b) in &p.rows {
        let mut row = vec![F::zero(); width];
        for &(c, a) in coeffs {
            row[c] = ck(row[c].add(&ck(F::from_i128(a))?))?;
        }
        let mut slack = None;
        match cmp {
            Cmp::Eq => {}
            Cmp::Le => {
                row[slack_col] = F::one();
                slack = Some(slack_col);
                slack_col += 1;
            }
            Cmp::Ge => {
                row[slack_col] = ck(F::zero().sub(&F::one()))?;
                slack = Some(slack_col);
                slack_col += 1;
            }
        }
        let mut bb = ck(F::from_i128(*b))?;
        if *b < 0 {
            for x in row.iter_mut() {
                *x = ck(F::zero().sub(x))?;
            }
            bb = ck(F::zero().sub(&bb))?;
        }
        match slack {
            Some(s) if row[s].is_positive() => {
                basis.push(s);
                artificial.push(false);
            }
            _ => {
                basis.push(width + tab.len());
                artificial.push(true);
            }
        }
        tab.push(row);
        rhs.push(bb);
    }
    // objective row: reduced costs of the sum of artificials
    let mut z = vec![F::zero(); width];
    let mut zval = F::zero();
    for i in 0..m {
        if artificial[i] {
            for j in 0..width {
                if !tab[i][j].is_zero() {
                    z[j] = ck(z[j].add(&tab[i][j]))?;
                }
            }
            zval = ck(zval.add(&rhs[i]))?;
        }
    }
    loop {
        if zval.is_zero() {
            break;
        }
        let Some(enter) = (0..width).find(|&j| z[j].is_positive()) else { break };
        let mut best: Option<(usize, F)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = ck(rhs[i].div(&tab[i][enter]))?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            // an improving direction without a blocking row cannot occur in phase one
            break;
        };
        let piv = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            if !x.is_zero() {
                *x = ck(x.div(&piv))?;
            }
        }
        rhs[r] = ck(rhs[r].div(&piv))?;
        let prow = tab[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i == r || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for j in 0..width {
                if !prow[j].is_zero() {
                    tab[i][j] = ck(tab[i][j].sub(&ck(f.mul(&prow[j]))?))?;
                }
            }
            rhs[i] = ck(rhs[i].sub(&ck(f.mul(&prhs))?))?;
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for j in 0..width {
                if !prow[j].is_zero() {
                    z[j] = ck(z[j].sub(&ck(f.mul(&prow[j]))?))?;
                }
            }
            zval = ck(zval.sub(&ck(f.mul(&prhs))?))?;
        }
        basis[r] = enter;
        artificial[r] = false;
    }
    if !zval.is_zero() {
        return Ok(None);
    }
    let mut x = vec![BigRational::from_integer(0.into()); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = rhs[i].to_big();
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feasible(nvars: usize, rows: &[Row]) -> bool {
        let free = vec![false; nvars];
        match lp_feasible(nvars, &free, rows) {
            Some(x) => {
                assert!(rows.iter().all(|r| r.eval_rational(&x)), "witness violates rows");
                assert!(x.iter().all(|v| *v >= BigRational::from_integer(0.into())));
                true
            }
            None => false,
        }
    }

    #[test]
    fn simple_systems() {
        assert!(feasible(2, &[Row::new(vec![(0, 1), (1, -2)], Cmp::Ge, 0)]));
        assert!(!feasible(1, &[Row::new(vec![(0, -1)], Cmp::Ge, 1)]));
        assert!(feasible(2, &[Row::new(vec![(0, 2), (1, 3)], Cmp::Eq, 7), Row::new(vec![(0, 1)], Cmp::Le, 1)]));
        assert!(!feasible(2, &[Row::new(vec![(0, 1), (1, 1)], Cmp::Eq, 0), Row::new(vec![(0, 1)], Cmp::Ge, 1)]));
    }

    #[test]
    fn fractional_vertex() {
        let rows = [Row::new(vec![(0, 3)], Cmp::Eq, 1)];
        let x = lp_feasible(1, &[false], &rows).unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn free_variables_may_go_negative() {
        let rows = [Row::new(vec![(0, 1)], Cmp::Le, -5)];
        let x = lp_feasible(1, &[true], &rows).unwrap();
        assert!(x[0] <= BigRational::from_integer((-5).into()));
        assert!(lp_feasible(1, &[false], &rows).is_none());
    }

    #[test]
    fn large_coefficients_fall_back_to_big_rationals() {
        let big = i128::MAX / 3;
        let rows = [
            Row::new(vec![(0, big), (1, big - 1)], Cmp::Ge, big),
            Row::new(vec![(0, big - 7), (1, big)], Cmp::Le, big),
        ];
        assert!(feasible(2, &rows));
    }
}
