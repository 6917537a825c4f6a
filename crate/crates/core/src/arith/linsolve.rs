//! Fraction-free Gauss-Jordan elimination over a polynomial ring, giving
//! exact solutions over its fraction field.

use super::gcd::{gcd, gcd_all, lcm};
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::vars::Vars;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<RatFunc>),
    Inconsistent,
    /// Particular solution (free unknowns set to 0) and a nullspace basis,
    /// one vector per free unknown.
    Underdetermined {
        particular: Vec<RatFunc>,
        basis: Vec<Vec<RatFunc>>,
    },
}

/// Reduced row echelon form of a polynomial matrix.
pub struct Echelon {
    pub rows: Vec<Vec<MultiPoly>>,
    /// `pivots[i]` is the pivot column of `rows[i]`.
    pub pivots: Vec<usize>,
}

/// Eliminates on the first `ncols` columns; later columns (a right-hand
/// side) are carried along. Pivot: first column with a nonzero entry, the
/// entry with the fewest terms, ties to the lowest row.
pub fn echelon(mut rows: Vec<Vec<MultiPoly>>, ncols: usize) -> Echelon {
    for r in rows.iter_mut() {
        remove_content(r);
    }
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    let mut pivots = Vec::new();
    let mut cur = 0;
    for col in 0..ncols {
        if cur == rows.len() {
            break;
        }
        let Some(p) = (cur..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| (rows[r][col].len(), r))
        else {
            continue;
        };
        rows.swap(cur, p);
        let (before, rest) = rows.split_at_mut(cur);
        let (prow, after) = rest.split_first_mut().unwrap();
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let g = gcd(&prow[col], &row[col]);
            let mp = prow[col].div_exact(&g).expect("gcd divides");
            let mr = row[col].div_exact(&g).expect("gcd divides");
            for (x, y) in row.iter_mut().zip(prow.iter()) {
                let a = if x.is_zero() { x.clone() } else { &*x * &mp };
                *x = if y.is_zero() { a } else { &a - &(y * &mr) };
            }
            debug_assert!(row[col].is_zero());
            remove_content(row);
        }
        pivots.push(col);
        cur += 1;
    }
    rows.retain(|r| r.iter().any(|e| !e.is_zero()));
    Echelon { rows, pivots }
}

fn remove_content(row: &mut [MultiPoly]) {
    let Some(g) = gcd_all(row.iter()) else { return };
    let lead = row.iter().find(|e| !e.is_zero()).unwrap();
    // Keep the first nonzero entry's leading coefficient positive.
    let g = if lead.div_exact(&g).unwrap().lc().signum() < 0 { -g } else { g };
    if g.is_one() {
        return;
    }
    for e in row.iter_mut() {
        if !e.is_zero() {
            *e = e.div_exact(&g).expect("content divides");
        }
    }
}

/// Solves `rows · x = rhs` over the fraction field.
pub fn linsolve(rows: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Solution {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let vars = match rows.iter().flatten().chain(rhs.iter()).next() {
        Some(e) => e.vars().clone(),
        None => return Solution::Unique(Vec::new()),
    };
    let matrix: Vec<Vec<MultiPoly>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut full: Vec<RatFunc> = r.clone();
            full.push(b.clone());
            clear_row(&full)
        })
        .collect();
    let ech = echelon(matrix, ncols);
    if ech.pivots.len() < ech.rows.len() {
        // A row without a pivot has only a right-hand side entry.
        return Solution::Inconsistent;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut particular = vec![RatFunc::zero(&vars); ncols];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        particular[pc] = RatFunc::new(row[ncols].clone(), row[pc].clone()).expect("pivot nonzero");
    }
    if free.is_empty() {
        return Solution::Unique(particular);
    }
    let basis = nullspace_from(&ech, ncols, &free, &vars);
    Solution::Underdetermined { particular, basis }
}

fn nullspace_from(ech: &Echelon, ncols: usize, free: &[usize], vars: &Vars) -> Vec<Vec<RatFunc>> {
    free.iter()
        .map(|&f| {
            let mut v = vec![RatFunc::zero(vars); ncols];
            v[f] = RatFunc::one(vars);
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                if !row[f].is_zero() {
                    v[pc] = RatFunc::new(-&row[f], row[pc].clone()).expect("pivot nonzero");
                }
            }
            v
        })
        .collect()
}

/// Nullspace basis of a homogeneous polynomial system, one vector per
/// free column (in increasing column order).
pub fn nullspace(rows: Vec<Vec<MultiPoly>>, ncols: usize, vars: &Vars) -> Vec<Vec<RatFunc>> {
    let ech = echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    nullspace_from(&ech, ncols, &free, vars)
}

/// Multiplies a row of rational functions by the lcm of its denominators.
pub fn clear_row(row: &[RatFunc]) -> Vec<MultiPoly> {
    let vars = row[0].vars();
    let mut l = MultiPoly::one(vars);
    for e in row {
        if !e.den().is_one() {
            l = lcm(&l, e.den());
        }
    }
    row.iter()
        .map(|e| {
            if e.is_zero() {
                MultiPoly::zero(vars)
            } else {
                e.num() * &l.div_exact(e.den()).expect("lcm is divisible")
            }
        })
        .collect()
}

/// Scales a vector of rational functions to coprime polynomials.
pub fn primitive_vector(v: &[RatFunc]) -> Vec<MultiPoly> {
    let mut row = clear_row(v);
    remove_content(&mut row);
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::Scalar;
    use crate::arith::vars::VarTable;

    #[test]
    fn identity_system() {
        let v = VarTable::params(&["n"]).unwrap();
        let one = RatFunc::one(&v);
        let zero = RatFunc::zero(&v);
        let rows = vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        let sol = linsolve(&rows, &[one.clone(), zero.clone()]);
        assert_eq!(sol, Solution::Unique(vec![one, zero]));
    }

    #[test]
    fn one_by_one_polynomial() {
        let v = VarTable::params(&["n"]).unwrap();
        let n = MultiPoly::var(&v, 0);
        let one = MultiPoly::one(&v);
        let rows = vec![vec![RatFunc::from(&n + &one)]];
        let rhs = vec![RatFunc::from(&(&n * &n) - &one)];
        assert_eq!(linsolve(&rows, &rhs), Solution::Unique(vec![RatFunc::from(&n - &one)]));
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let v = VarTable::params(&["n"]).unwrap();
        let n = RatFunc::var(&v, 0);
        let one = RatFunc::one(&v);
        let two = RatFunc::constant(&v, Scalar::from_int(2));
        let rows = vec![vec![n.clone(), one.clone()], vec![&n * &two, &one * &two]];
        assert_eq!(linsolve(&rows, &[one.clone(), one.clone()]), Solution::Inconsistent);
        match linsolve(&rows, &[one.clone(), two.clone()]) {
            Solution::Underdetermined { particular, basis } => {
                assert_eq!(basis.len(), 1);
                let r0 = &(&n * &particular[0]) + &particular[1];
                assert_eq!(r0, one);
                let h = &(&n * &basis[0][0]) + &basis[0][1];
                assert!(h.is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
