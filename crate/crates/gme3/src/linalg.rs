//! Small fixed-size real linear algebra for the Bloch-vector formalism.
//!
//! Everything operates on plain `[f64; 3]` vectors and row-major
//! `[[f64; 3]; 3]` matrices. The sizes never change, so there is no
//! allocation and no external solver; the only non-trivial routine is a
//! Jacobi eigensolver for symmetric matrices.

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sq(a: Vec3) -> f64 {
    dot(a, a)
}

pub fn norm(a: Vec3) -> f64 {
    norm_sq(a).sqrt()
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, k: f64) -> Vec3 {
    [k * a[0], k * a[1], k * a[2]]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `m v`
pub fn matvec(m: &Mat3, v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// `m^T v`
pub fn tmatvec(m: &Mat3, v: Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = *x;
        }
    }
    t
}

pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Adjugate (transposed cofactor matrix); `adj(m) * m = det(m) * I`.
pub fn adjugate(m: &Mat3) -> Mat3 {
    let c = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    [
        [c(1, 1, 2, 2), c(0, 2, 2, 1), c(0, 1, 1, 2)],
        [c(1, 2, 2, 0), c(0, 0, 2, 2), c(0, 2, 1, 0)],
        [c(1, 0, 2, 1), c(0, 1, 2, 0), c(0, 0, 1, 1)],
    ]
}

pub fn frob_sq(m: &Mat3) -> f64 {
    m.iter().flatten().map(|x| x * x).sum()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in ascending order together with the matrix
/// whose columns are the matching unit eigenvectors. The input is
/// symmetrized first, so tiny asymmetries from rounding are harmless.
pub fn sym_eigen(m: &Mat3) -> (Vec3, Mat3) {
    let mut a = *m;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..50 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 * (1.0 + frob_sq(&a)) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            // classic 2x2 rotation annihilating a[p][q]
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let rot = |mat: &mut Mat3, row: bool| {
                for k in 0..3 {
                    let (x, y) = if row { (mat[p][k], mat[q][k]) } else { (mat[k][p], mat[k][q]) };
                    if row {
                        mat[p][k] = c * x - s * y;
                        mat[q][k] = s * x + c * y;
                    } else {
                        mat[k][p] = c * x - s * y;
                        mat[k][q] = s * x + c * y;
                    }
                }
            };
            rot(&mut a, true);
            rot(&mut a, false);
            rot(&mut v, false);
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let vals = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let mut vecs = [[0.0; 3]; 3];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..3 {
            vecs[r][new] = v[r][old];
        }
    }
    (vals, vecs)
}

/// Largest singular value.
pub fn sigma_max(m: &Mat3) -> f64 {
    let (vals, _) = sym_eigen(&matmul(&transpose(m), m));
    vals[2].max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn adjugate_inverts() {
        let m: Mat3 = [[2.0, 1.0, 0.5], [-1.0, 3.0, 0.0], [0.25, -0.5, 1.5]];
        let d = det3(&m);
        assert!(d.abs() > 1e-12);
        let adj = adjugate(&m);
        let prod = matmul(&adj, &m);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d } else { 0.0 };
                close(prod[i][j], expect, 1e-12);
            }
        }
    }

    #[test]
    fn eigen_recovers_rotated_diagonal() {
        // R diag(1, 2, 5) R^T for a rotation R about an oblique axis
        let (c, s) = (0.8f64, 0.6f64);
        let r: Mat3 = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let r2: Mat3 = [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]];
        let rot = matmul(&r2, &r);
        let d: Mat3 = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let m = matmul(&rot, &matmul(&d, &transpose(&rot)));
        let (vals, vecs) = sym_eigen(&m);
        close(vals[0], 1.0, 1e-12);
        close(vals[1], 2.0, 1e-12);
        close(vals[2], 5.0, 1e-12);
        // columns are unit eigenvectors
        for k in 0..3 {
            let v = [vecs[0][k], vecs[1][k], vecs[2][k]];
            close(norm(v), 1.0, 1e-12);
            let mv = matvec(&m, v);
            close(norm(sub(mv, scale(v, vals[k]))), 0.0, 1e-11);
        }
    }

    #[test]
    fn sigma_max_of_diagonal() {
        let m: Mat3 = [[0.3, 0.0, 0.0], [0.0, -0.9, 0.0], [0.0, 0.0, 0.5]];
        close(sigma_max(&m), 0.9, 1e-13);
    }
}
