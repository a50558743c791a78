//! Exact-rational dense simplex for small feasibility and optimization
//! problems in standard equality form: find `z >= 0` with `A z = b`.
//!
//! Phase 1 minimizes the sum of artificial variables with Bland's rule, so
//! termination is guaranteed. An infeasible system yields a Farkas
//! certificate `pi` with `pi . A_j <= 0` for every column and `pi . b > 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A solution `z >= 0` of `A z = b`.
    Feasible(Vec<Rat>),
    /// Farkas certificate: `pi . A_j <= 0` for all columns, `pi . b > 0`.
    Infeasible(Vec<Rat>),
}

#[derive(Debug, Clone)]
pub enum Optimum {
    /// Optimal value and an attaining solution for `max c.z, A z = b, z >= 0`.
    Optimal {
        value: Rat,
        solution: Vec<Rat>,
    },
    Infeasible(Vec<Rat>),
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize, // original columns
    /// rows x (cols + rows + 1): original | artificial | rhs
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    /// sign applied to each input row to make the rhs nonnegative
    row_sign: Vec<bool>,
}

impl Tableau {
    fn new(a: &[Vec<Rat>], b: &[Rat]) -> Tableau {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut t = Vec::with_capacity(rows);
        let mut row_sign = vec![false; rows];
        for i in 0..rows {
            debug_assert_eq!(a[i].len(), cols);
            let flip = b[i].is_negative();
            row_sign[i] = flip;
            let mut row: Vec<Rat> = Vec::with_capacity(cols + rows + 1);
            for v in &a[i] {
                row.push(if flip { -v.clone() } else { v.clone() });
            }
            for j in 0..rows {
                row.push(if j == i { Rat::one() } else { Rat::zero() });
            }
            row.push(if flip { -b[i].clone() } else { b[i].clone() });
            t.push(row);
        }
        let basis = (cols..cols + rows).collect();
        Tableau {
            rows,
            cols,
            t,
            basis,
            row_sign,
        }
    }

    fn rhs(&self, i: usize) -> &Rat {
        &self.t[i][self.cols + self.rows]
    }

    /// Row elimination for one pivot. The objective row `obj` has one entry
    /// per column plus a final cell holding the negated objective value; the
    /// elimination keeps that invariant.
    fn pivot(&mut self, row: usize, col: usize, obj: &mut [Rat]) {
        let piv = self.t[row][col].clone();
        debug_assert!(!piv.is_zero());
        for v in self.t[row].iter_mut() {
            *v /= &piv;
        }
        let prow = self.t[row].clone();
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.t[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in self.t[i].iter_mut().zip(prow.iter()) {
                *v -= &f * p;
            }
        }
        let f = obj[col].clone();
        if !f.is_zero() {
            for (v, p) in obj.iter_mut().zip(prow.iter()) {
                *v -= &f * p;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest-index negative reduced
    /// cost among `allowed`, leaving row breaks ratio ties by lowest basis
    /// variable. Returns false when the objective row is optimal.
    fn bland_step(&mut self, obj: &mut [Rat], allowed: usize) -> Option<bool> {
        let enter = (0..allowed).find(|&j| obj[j].is_negative());
        let enter = match enter {
            Some(j) => j,
            None => return Some(false),
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..self.rows {
            if self.t[i][enter].is_positive() {
                let ratio = self.rhs(i) / &self.t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && self.basis[i] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        match leave {
            Some(r) => {
                self.pivot(r, enter, obj);
                Some(true)
            }
            None => None, // unbounded direction
        }
    }
}

/// Runs phase 1. On success returns the tableau positioned at a basic
/// feasible solution with every artificial variable at zero.
fn phase1(a: &[Vec<Rat>], b: &[Rat]) -> Result<Tableau, Vec<Rat>> {
    let mut tab = Tableau::new(a, b);
    let (rows, cols) = (tab.rows, tab.cols);
    let total = cols + rows;
    // reduced costs for minimizing the sum of artificials; the final cell
    // holds the negated objective value
    let mut obj = vec![Rat::zero(); total + 1];
    for i in 0..rows {
        for (o, v) in obj.iter_mut().zip(tab.t[i].iter()) {
            *o -= v;
        }
    }
    for o in &mut obj[cols..total] {
        *o += Rat::one();
    }
    loop {
        match tab.bland_step(&mut obj, total) {
            Some(true) => continue,
            Some(false) => break,
            None => unreachable!("phase 1 objective is bounded below by zero"),
        }
    }
    if !obj[total].is_zero() {
        // Farkas vector in the sign-normalized system: pi_i = 1 - rc(artificial_i)
        let mut pi: Vec<Rat> = (0..rows).map(|i| Rat::one() - &obj[cols + i]).collect();
        for (p, &flipped) in pi.iter_mut().zip(tab.row_sign.iter()) {
            if flipped {
                *p = -p.clone();
            }
        }
        debug_assert!({
            let dot_b: Rat = (0..rows).map(|i| &pi[i] * &b[i]).sum();
            dot_b.is_positive()
        });
        debug_assert!((0..cols).all(|j| {
            let dot: Rat = (0..rows).map(|i| &pi[i] * &a[i][j]).sum();
            !dot.is_positive()
        }));
        return Err(pi);
    }
    // Drive basic artificials out where possible so phase 2 can ignore them.
    for i in 0..rows {
        if tab.basis[i] >= cols {
            debug_assert!(tab.rhs(i).is_zero());
            if let Some(j) = (0..cols).find(|&j| !tab.t[i][j].is_zero()) {
                let mut dummy_obj = vec![Rat::zero(); total + 1];
                tab.pivot(i, j, &mut dummy_obj);
            }
            // else: the row is redundant; the artificial stays basic at zero
            // and no original column can change it.
        }
    }
    Ok(tab)
}

fn extract(tab: &Tableau) -> Vec<Rat> {
    let mut z = vec![Rat::zero(); tab.cols];
    for i in 0..tab.rows {
        if tab.basis[i] < tab.cols {
            z[tab.basis[i]] = tab.rhs(i).clone();
        }
    }
    z
}

/// Find any `z >= 0` with `A z = b`.
pub fn feasible_point(a: &[Vec<Rat>], b: &[Rat]) -> Feasibility {
    debug_assert_eq!(a.len(), b.len());
    match phase1(a, b) {
        Ok(tab) => {
            let z = extract(&tab);
            debug_assert!(verify_solution(a, b, &z));
            Feasibility::Feasible(z)
        }
        Err(pi) => Feasibility::Infeasible(pi),
    }
}

/// Maximize `c . z` subject to `A z = b`, `z >= 0`.
pub fn maximize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Optimum {
    let mut tab = match phase1(a, b) {
        Ok(t) => t,
        Err(pi) => return Optimum::Infeasible(pi),
    };
    let (rows, cols) = (tab.rows, tab.cols);
    let total = cols + rows;
    // reduced costs for minimizing -c.z; artificial columns are barred by
    // giving the entering rule `allowed = cols`.
    let mut obj = vec![Rat::zero(); total + 1];
    for (o, cj) in obj.iter_mut().zip(c.iter()) {
        *o = -cj.clone();
    }
    for i in 0..rows {
        let bi = tab.basis[i];
        if bi < cols && !c[bi].is_zero() {
            let f = c[bi].clone();
            let row = tab.t[i].clone();
            for (v, p) in obj.iter_mut().zip(row.iter()) {
                *v += &f * p;
            }
        }
    }
    loop {
        match tab.bland_step(&mut obj, cols) {
            Some(true) => continue,
            Some(false) => break,
            None => return Optimum::Unbounded,
        }
    }
    let z = extract(&tab);
    debug_assert!(verify_solution(a, b, &z));
    let attained: Rat = (0..cols).map(|j| &c[j] * &z[j]).sum();
    Optimum::Optimal {
        value: attained,
        solution: z,
    }
}

pub fn verify_solution(a: &[Vec<Rat>], b: &[Rat], z: &[Rat]) -> bool {
    if z.iter().any(|v| v.is_negative()) {
        return false;
    }
    a.iter().zip(b.iter()).all(|(row, bi)| {
        let dot: Rat = row.iter().zip(z.iter()).map(|(x, y)| x * y).sum();
        dot == *bi
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn feasible_system_solved_exactly() {
        // z1 + z2 = 1, z1 - z2 = 0 -> z = (1/2, 1/2)
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        let b = vec![r(1), r(0)];
        match feasible_point(&a, &b) {
            Feasibility::Feasible(z) => assert_eq!(z, vec![rq(1, 2), rq(1, 2)]),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // column-major access
    fn infeasible_system_yields_farkas() {
        // z1 + z2 = 1, z1 + z2 = 2 is contradictory
        let a = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        let b = vec![r(1), r(2)];
        match feasible_point(&a, &b) {
            Feasibility::Infeasible(pi) => {
                let dot_b: Rat = pi.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
                assert!(dot_b.is_positive());
                for j in 0..2 {
                    let dot: Rat = (0..2).map(|i| &pi[i] * &a[i][j]).sum();
                    assert!(!dot.is_positive());
                }
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn sign_constrained_variable_infeasible() {
        // z = -1 with z >= 0
        let a = vec![vec![r(1)]];
        let b = vec![r(-1)];
        assert!(matches!(feasible_point(&a, &b), Feasibility::Infeasible(_)));
    }

    #[test]
    fn redundant_rows_are_fine() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        let b = vec![r(1), r(2)];
        assert!(matches!(feasible_point(&a, &b), Feasibility::Feasible(_)));
    }

    #[test]
    fn maximize_simple_lp() {
        // max z2 s.t. z1 + z2 = 1 -> 1 at (0, 1)
        let a = vec![vec![r(1), r(1)]];
        let b = vec![r(1)];
        let c = vec![r(0), r(1)];
        match maximize(&a, &b, &c) {
            Optimum::Optimal { value, solution } => {
                assert_eq!(value, r(1));
                assert_eq!(solution, vec![r(0), r(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn maximize_detects_unbounded() {
        // max z1 s.t. z1 - z2 = 0
        let a = vec![vec![r(1), r(-1)]];
        let b = vec![r(0)];
        let c = vec![r(1), r(0)];
        assert!(matches!(maximize(&a, &b, &c), Optimum::Unbounded));
    }

    #[test]
    fn degenerate_pivots_terminate() {
        // multiple zero rhs rows force degenerate pivots; Bland must terminate
        let a = vec![
            vec![r(1), r(-1), r(0), r(0)],
            vec![r(0), r(1), r(-1), r(0)],
            vec![r(0), r(0), r(1), r(1)],
        ];
        let b = vec![r(0), r(0), r(1)];
        let c = vec![r(1), r(1), r(1), r(0)];
        match maximize(&a, &b, &c) {
            Optimum::Optimal { value, .. } => assert_eq!(value, r(3)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
