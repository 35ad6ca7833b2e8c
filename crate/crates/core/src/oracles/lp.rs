//! Dense exact simplex for `max cᵀx s.t. Ax ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! The origin is feasible when `b ≥ 0`, so no phase one is needed. Bland's
//! rule is used for both entering and leaving variables; the systems solved
//! here are heavily degenerate.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Optimal dual prices, one per constraint row.
        duals: Vec<Rational>,
    },
    Unbounded,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let rows = a.len();
    let vars = c.len();
    let cols = vars + rows;
    debug_assert!(b.iter().all(|v| !v.is_negative()), "b must be non-negative");

    // tableau[r] = [A_r | e_r | b_r]
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row = Vec::with_capacity(cols + 1);
            row.extend(a[r].iter().cloned());
            row.extend((0..rows).map(|k| Rational::from_integer(i64::from(k == r).into())));
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|v| -v).collect();
    obj.extend((0..=rows).map(|_| Rational::zero()));
    let mut basis: Vec<usize> = (vars..cols).collect();

    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab[r][cols] / &tab[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tab, &mut obj, pr, enter);
        basis[pr] = enter;
    }

    let mut x = vec![Rational::zero(); vars];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = tab[r][cols].clone();
        }
    }
    LpOutcome::Optimal {
        x,
        value: obj[cols].clone(),
        duals: obj[vars..cols].to_vec(),
    }
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], pr: usize, pc: usize) {
    let p = tab[pr][pc].clone();
    for v in tab[pr].iter_mut() {
        *v /= &p;
    }
    let prow = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !obj[pc].is_zero() {
        let f = obj[pc].clone();
        for (v, pv) in obj.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
