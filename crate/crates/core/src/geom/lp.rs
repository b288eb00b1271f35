//! Dense two-phase simplex for the small linear programs of the kernel
//! (Chebyshev centers, inscribed-slice radii). Variables are free; the
//! solver splits them into positive parts internally. Bland's rule keeps
//! the degenerate geometry instances from cycling.

const TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Maximize `obj . x` subject to `a . x <= b` for each `(a, b)` in
/// `constraints`, with `x` free. Returns `None` when infeasible or
/// unbounded.
pub fn maximize(obj: &[f64], constraints: &[(Vec<f64>, f64)]) -> Option<LpSolution> {
    let nv = obj.len();
    let m = constraints.len();
    let ns = 2 * nv; // structural columns: x = x+ - x-
    let n_art = constraints.iter().filter(|(_, b)| *b < 0.0).count();
    let ncols = ns + m + n_art; // + rhs held separately

    // rows[r] = coefficients, rhs[r] >= 0 after normalization
    let mut rows = vec![vec![0.0; ncols]; m];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0usize; m];
    let mut art_col = ns + m;
    for (r, (a, b)) in constraints.iter().enumerate() {
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for (j, &aj) in a.iter().enumerate() {
            rows[r][j] = sign * aj;
            rows[r][nv + j] = -sign * aj;
        }
        rows[r][ns + r] = sign; // slack
        rhs[r] = sign * b;
        if *b < 0.0 {
            rows[r][art_col] = 1.0;
            basis[r] = art_col;
            art_col += 1;
        } else {
            basis[r] = ns + r;
        }
    }

    // Phase 1: maximize -(sum of artificials); feasible iff optimum is 0.
    if n_art > 0 {
        let mut cost = vec![0.0; ncols];
        let mut value = 0.0;
        for r in 0..m {
            if basis[r] >= ns + m {
                for j in 0..ncols {
                    cost[j] += rows[r][j];
                }
                value -= rhs[r];
            }
        }
        for j in ns + m..ncols {
            cost[j] = 0.0;
        }
        if !pivot_loop(&mut rows, &mut rhs, &mut basis, &mut cost, &mut value, ncols) {
            return None;
        }
        if value < -1e-7 {
            return None; // infeasible
        }
        // pivot any artificial still basic (at zero) out if possible
        for r in 0..m {
            if basis[r] >= ns + m {
                if let Some(j) = (0..ns + m).find(|&j| rows[r][j].abs() > TOL) {
                    pivot(&mut rows, &mut rhs, &mut basis, r, j, &mut vec![0.0; ncols], &mut 0.0);
                }
            }
        }
    }

    // Phase 2: the real objective, reduced against the current basis.
    let mut cost = vec![0.0; ncols];
    for j in 0..nv {
        cost[j] = obj[j];
        cost[nv + j] = -obj[j];
    }
    for j in ns + m..ncols {
        cost[j] = f64::NEG_INFINITY; // artificials may not re-enter
    }
    let mut value = 0.0;
    for r in 0..m {
        let cb = basic_cost(basis[r], nv, ns, m, obj);
        if cb != 0.0 {
            for j in 0..ncols {
                cost[j] -= cb * rows[r][j];
            }
            value += cb * rhs[r];
        }
    }
    for r in 0..m {
        cost[basis[r]] = if basis[r] >= ns + m { f64::NEG_INFINITY } else { 0.0 };
    }
    if !pivot_loop(&mut rows, &mut rhs, &mut basis, &mut cost, &mut value, ncols) {
        return None;
    }

    let mut xpm = vec![0.0; ns];
    for r in 0..m {
        if basis[r] < ns {
            xpm[basis[r]] = rhs[r];
        }
    }
    let x: Vec<f64> = (0..nv).map(|j| xpm[j] - xpm[nv + j]).collect();
    Some(LpSolution { x, objective: value })
}

fn basic_cost(col: usize, nv: usize, ns: usize, m: usize, obj: &[f64]) -> f64 {
    if col < nv {
        obj[col]
    } else if col < ns {
        -obj[col - nv]
    } else if col < ns + m {
        0.0
    } else {
        0.0
    }
}

/// Run simplex pivots until optimal. Returns false on unboundedness.
fn pivot_loop(
    rows: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    cost: &mut Vec<f64>,
    value: &mut f64,
    ncols: usize,
) -> bool {
    let max_iter = 200 * (rows.len() + ncols);
    for _ in 0..max_iter {
        // Bland: first column with positive reduced cost
        let Some(enter) = (0..ncols).find(|&j| cost[j] > TOL && cost[j].is_finite()) else {
            return true;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows.len() {
            if rows[r][enter] > TOL {
                let ratio = rhs[r] / rows[r][enter];
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lv)) => {
                        if ratio < lv - TOL
                            || (ratio < lv + TOL && basis[r] < basis[lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return false; // unbounded
        };
        pivot(rows, rhs, basis, r, enter, cost, value);
    }
    false
}

fn pivot(
    rows: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    r: usize,
    enter: usize,
    cost: &mut [f64],
    value: &mut f64,
) {
    let piv = rows[r][enter];
    for v in rows[r].iter_mut() {
        *v /= piv;
    }
    rhs[r] /= piv;
    for r2 in 0..rows.len() {
        if r2 != r && rows[r2][enter].abs() > 0.0 {
            let f = rows[r2][enter];
            for j in 0..rows[r].len() {
                rows[r2][j] -= f * rows[r][j];
            }
            rhs[r2] -= f * rhs[r];
        }
    }
    if cost[enter].is_finite() && cost[enter].abs() > 0.0 {
        let f = cost[enter];
        for j in 0..rows[r].len() {
            if cost[j].is_finite() {
                cost[j] -= f * rows[r][j];
            }
        }
        *value += f * rhs[r];
    }
    basis[r] = enter;
}
