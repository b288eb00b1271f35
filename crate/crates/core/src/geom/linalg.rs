//! Tiny dense solvers and orthonormalization helpers for systems of size <= 3.

use super::Point;

/// Solve a square system up to 3x3 by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular at `tol`.
pub fn solve(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    for col in 0..n {
        let (pivot, pv) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pv <= tol {
            return None;
        }
        m.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Least-squares coefficients of `u ~ sum_i x_i g_i` for up to 3 generators,
/// via the normal equations. `None` if the Gram matrix is singular at `tol`.
pub fn lstsq_coeffs(gens: &[Point], u: &Point, tol: f64) -> Option<Vec<f64>> {
    let k = gens.len();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| gens[i].dot(&gens[j])).collect())
        .collect();
    let rhs: Vec<f64> = (0..k).map(|i| gens[i].dot(u)).collect();
    solve(&gram, &rhs, tol)
}

/// Gram-Schmidt orthonormalization; vectors whose residual is below `tol`
/// are dropped. Returns an orthonormal basis of the span.
pub fn orthonormalize(vecs: &[Point], tol: f64) -> Vec<Point> {
    let mut basis: Vec<Point> = Vec::new();
    for v in vecs {
        let mut w = *v;
        for b in &basis {
            w = w - b.scale(b.dot(&w));
        }
        // re-orthogonalize once for numerical hygiene
        for b in &basis {
            w = w - b.scale(b.dot(&w));
        }
        if w.norm() > tol {
            basis.push(w.unit().unwrap());
        }
    }
    basis
}

/// Rank of the span of `vecs` at tolerance `tol`.
pub fn rank(vecs: &[Point], tol: f64) -> usize {
    orthonormalize(vecs, tol).len()
}

/// Deterministic orthonormal basis of the orthogonal complement of
/// `basis` (itself orthonormal) inside ℝ^dim. Built by projecting the
/// canonical basis vectors and sign-normalizing, so equal subspaces give
/// bitwise-reproducible complements.
pub fn orthonormal_complement(basis: &[Point], dim: usize, tol: f64) -> Vec<Point> {
    let mut all = basis.to_vec();
    let mut comp = Vec::new();
    for i in 0..dim {
        let e = Point::basis(dim, i);
        let mut w = e;
        for b in &all {
            w = w - b.scale(b.dot(&w));
        }
        for b in &all {
            w = w - b.scale(b.dot(&w));
        }
        if w.norm() > tol {
            let mut u = w.unit().unwrap();
            // first significant component positive
            for c in 0..dim {
                if u.coord(c).abs() > 1e-12 {
                    if u.coord(c) < 0.0 {
                        u = -u;
                    }
                    break;
                }
            }
            all.push(u);
            comp.push(u);
        }
    }
    comp
}

/// Deterministic orthonormal basis of the span of `vecs`: canonical basis
/// vectors are projected into the span and orthonormalized in index order,
/// so the result depends only on the subspace, not on the generating set.
pub fn canonical_subspace_basis(vecs: &[Point], dim: usize, tol: f64) -> Vec<Point> {
    let raw = orthonormalize(vecs, tol);
    if raw.is_empty() {
        return Vec::new();
    }
    let mut basis: Vec<Point> = Vec::new();
    for i in 0..dim {
        let e = Point::basis(dim, i);
        // project e onto span(raw)
        let mut p = Point::zero(dim);
        for b in &raw {
            p = p + b.scale(b.dot(&e));
        }
        for b in &basis {
            p = p - b.scale(b.dot(&p));
        }
        if p.norm() > tol {
            let mut u = p.unit().unwrap();
            for c in 0..dim {
                if u.coord(c).abs() > 1e-12 {
                    if u.coord(c) < 0.0 {
                        u = -u;
                    }
                    break;
                }
            }
            basis.push(u);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_3x3() {
        let a = vec![
            vec![2.0, 0.0, 1.0],
            vec![0.0, 3.0, 0.0],
            vec![1.0, 0.0, 1.0],
        ];
        let x = solve(&a, &[5.0, 6.0, 3.0], 1e-12).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 2.0).abs() < 1e-12);
        assert!((x[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complement_of_line_in_3d() {
        let b = vec![Point::xyz(0.0, 0.0, 1.0)];
        let c = orthonormal_complement(&b, 3, 1e-12);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(v.dot(&b[0]).abs() < 1e-12);
        }
        assert!(c[0].dot(&c[1]).abs() < 1e-12);
    }

    #[test]
    fn canonical_basis_is_representation_independent() {
        let b1 = canonical_subspace_basis(&[Point::xyz(1.0, 1.0, 0.0)], 3, 1e-12);
        let b2 = canonical_subspace_basis(&[Point::xyz(-2.0, -2.0, 0.0)], 3, 1e-12);
        assert_eq!(b1.len(), 1);
        assert!(b1[0].dist(&b2[0]) < 1e-12);
    }
}
