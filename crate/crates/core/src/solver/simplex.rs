//! Exact-rational phase-1 simplex (plus an optional phase-2 objective) with
//! Bland's rule, so feasibility decisions carry no floating-point doubt and
//! termination is guaranteed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Where a row came from, for infeasibility reports.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowOrigin {
    /// index into the constraint store
    Constraint(usize),
    /// a `--goal` pin on the conclusion type
    Goal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Geq,
}

/// One linear row `sum coeff*var REL rhs` over variable indices.
#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, i64)>,
    pub rel: Rel,
    pub rhs: i64,
    pub origin: Vec<RowOrigin>,
}

#[derive(Clone, Debug)]
pub struct Infeasible {
    /// phase-1 optimum: the total residual that cannot be driven to zero
    pub excess: BigRational,
    /// origins of the rows left unsatisfied at the optimum
    pub origins: Vec<RowOrigin>,
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum SimplexError {
    #[error("linear objective is unbounded below")]
    Unbounded,
    #[error("internal simplex invariant breached: {0}")]
    Internal(String),
}

/// Decide feasibility of the rows over `nvars` free variables (each split
/// into a difference of nonnegatives), returning a satisfying rational
/// point. With `objective`, a second phase minimizes `sum obj[v] * var[v]`.
pub fn solve(
    nvars: usize,
    rows: &[Row],
    objective: Option<&[BigRational]>,
) -> Result<Result<Vec<BigRational>, Infeasible>, SimplexError> {
    let m = rows.len();
    let n_split = 2 * nvars;
    let n_surplus = rows.iter().filter(|r| r.rel == Rel::Geq).count();
    let n_cols = n_split + n_surplus + m;
    let art0 = n_split + n_surplus;

    let zero = BigRational::zero();
    let one = BigRational::one();

    let mut t: Vec<Vec<BigRational>> = vec![vec![zero.clone(); n_cols]; m];
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut surplus_at = n_split;
    for (i, row) in rows.iter().enumerate() {
        debug_assert!(row.rhs >= 0, "rows are normalized to nonnegative rhs");
        for (v, c) in &row.coeffs {
            let c = BigRational::from(BigInt::from(*c));
            t[i][2 * v] += &c;
            t[i][2 * v + 1] -= &c;
        }
        if row.rel == Rel::Geq {
            t[i][surplus_at] = -one.clone();
            surplus_at += 1;
        }
        t[i][art0 + i] = one.clone();
        rhs.push(BigRational::from(BigInt::from(row.rhs)));
        basis.push(art0 + i);
    }

    // phase 1: minimize the artificial total; initial reduced costs are
    // c_j - sum_i T[i][j] with c = 1 exactly on artificial columns
    let mut red: Vec<BigRational> = (0..n_cols)
        .map(|j| {
            let c_j = if j >= art0 { one.clone() } else { zero.clone() };
            let col_sum: BigRational = t.iter().map(|row| row[j].clone()).sum();
            c_j - col_sum
        })
        .collect();

    pivot_to_optimum(&mut t, &mut rhs, &mut basis, &mut red, n_cols)?;

    let excess: BigRational = basis
        .iter()
        .zip(&rhs)
        .filter(|(b, _)| **b >= art0)
        .map(|(_, v)| v.clone())
        .sum();
    if excess.is_positive() {
        let mut origins: Vec<RowOrigin> = basis
            .iter()
            .zip(&rhs)
            .filter(|(b, v)| **b >= art0 && v.is_positive())
            .flat_map(|(b, _)| rows[*b - art0].origin.clone())
            .collect();
        origins.sort();
        origins.dedup();
        return Ok(Err(Infeasible { excess, origins }));
    }

    if let Some(obj) = objective {
        debug_assert_eq!(obj.len(), nvars);
        // drive artificials out of the basis; drop redundant rows
        let mut keep: Vec<bool> = vec![true; t.len()];
        for i in 0..t.len() {
            if basis[i] < art0 {
                continue;
            }
            match (0..art0).find(|j| !t[i][*j].is_zero()) {
                Some(j) => pivot(&mut t, &mut rhs, &mut basis, &mut red, i, j),
                None => keep[i] = false,
            }
        }
        let mut kept = 0;
        for i in 0..keep.len() {
            if keep[i] {
                t.swap(kept, i);
                rhs.swap(kept, i);
                basis.swap(kept, i);
                kept += 1;
            }
        }
        t.truncate(kept);
        rhs.truncate(kept);
        basis.truncate(kept);

        // phase 2 over the real columns only
        let cost = |j: usize| -> BigRational {
            if j >= n_split {
                return zero.clone();
            }
            let v = j / 2;
            if j % 2 == 0 {
                obj[v].clone()
            } else {
                -obj[v].clone()
            }
        };
        for j in 0..art0 {
            let basic_part: BigRational =
                t.iter().zip(&basis).map(|(row, b)| cost(*b) * &row[j]).sum();
            red[j] = cost(j) - basic_part;
        }
        for j in art0..n_cols {
            red[j] = one.clone(); // artificial columns may not re-enter
        }
        pivot_to_optimum(&mut t, &mut rhs, &mut basis, &mut red, art0)?;
    }

    let mut values = vec![zero.clone(); n_cols];
    for (i, b) in basis.iter().enumerate() {
        values[*b] = rhs[i].clone();
    }
    let point: Vec<BigRational> =
        (0..nvars).map(|v| values[2 * v].clone() - values[2 * v + 1].clone()).collect();
    Ok(Ok(point))
}

fn pivot_to_optimum(
    t: &mut Vec<Vec<BigRational>>,
    rhs: &mut Vec<BigRational>,
    basis: &mut Vec<usize>,
    red: &mut Vec<BigRational>,
    entering_limit: usize,
) -> Result<(), SimplexError> {
    loop {
        // Bland: lowest-index column with negative reduced cost
        let Some(e) = (0..entering_limit).find(|j| red[*j].is_negative()) else {
            return Ok(());
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..t.len() {
            if t[i][e].is_positive() {
                let ratio = &rhs[i] / &t[i][e];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(SimplexError::Unbounded);
        };
        pivot(t, rhs, basis, red, l, e);
    }
}

fn pivot(
    t: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    red: &mut [BigRational],
    l: usize,
    e: usize,
) {
    let piv = t[l][e].clone();
    for x in t[l].iter_mut() {
        *x /= &piv;
    }
    rhs[l] /= &piv;
    for i in 0..t.len() {
        if i == l || t[i][e].is_zero() {
            continue;
        }
        let f = t[i][e].clone();
        for j in 0..t[i].len() {
            let d = &t[l][j] * &f;
            t[i][j] -= d;
        }
        let d = &rhs[l] * &f;
        rhs[i] -= d;
    }
    if !red[e].is_zero() {
        let f = red[e].clone();
        for j in 0..red.len() {
            let d = &t[l][j] * &f;
            red[j] -= d;
        }
    }
    basis[l] = e;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn run(nvars: usize, rows: Vec<Row>) -> Result<Vec<BigRational>, Infeasible> {
        solve(nvars, &rows, None).unwrap()
    }

    fn row(coeffs: Vec<(usize, i64)>, rel: Rel, rhs: i64) -> Row {
        Row { coeffs, rel, rhs, origin: vec![] }
    }

    #[test]
    fn equality_with_lower_bound() {
        // x0 = x1, x0 >= 1
        let point = run(
            2,
            vec![
                row(vec![(0, 1), (1, -1)], Rel::Eq, 0),
                row(vec![(0, 1)], Rel::Geq, 1),
            ],
        )
        .unwrap();
        assert_eq!(point[0], point[1]);
        assert!(point[0] >= rat(1));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        // x >= 1, x = 0
        let err = run(1, vec![row(vec![(0, 1)], Rel::Geq, 1), row(vec![(0, 1)], Rel::Eq, 0)])
            .unwrap_err();
        assert!(err.excess.is_positive());
    }

    #[test]
    fn free_variables_go_negative() {
        // x <= -2 encoded as -x >= 2
        let point = run(1, vec![row(vec![(0, -1)], Rel::Geq, 2)]).unwrap();
        assert!(point[0] <= rat(-2));
    }

    #[test]
    fn phase_two_minimizes() {
        // x0 >= 1, x0 = x1: minimize x0 + x1 → both exactly 1
        let rows = vec![
            row(vec![(0, 1)], Rel::Geq, 1),
            row(vec![(0, 1), (1, -1)], Rel::Eq, 0),
            row(vec![(1, 1)], Rel::Geq, 0),
        ];
        let obj = vec![rat(1), rat(1)];
        let point = solve(2, &rows, Some(&obj)).unwrap().unwrap();
        assert_eq!(point[0], rat(1));
        assert_eq!(point[1], rat(1));
    }

    #[test]
    fn origins_reported_on_infeasibility() {
        let rows = vec![
            Row { coeffs: vec![(0, 1)], rel: Rel::Geq, rhs: 1, origin: vec![RowOrigin::Constraint(7)] },
            Row { coeffs: vec![(0, 1)], rel: Rel::Eq, rhs: 0, origin: vec![RowOrigin::Constraint(9)] },
        ];
        let err = solve(1, &rows, None).unwrap().unwrap_err();
        assert!(!err.origins.is_empty());
    }
}
