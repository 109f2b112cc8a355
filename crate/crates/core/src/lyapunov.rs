//! Shifted Lyapunov solver and matrix-exponential utilities.

use crate::error::{Error, Result};
use crate::C64;
use ndarray::{Array1, Array2};
use ndarray_linalg::{EigVals, Factorize, OperationNorm, Solve};

/// Largest matrix dimension accepted by the dense Kronecker solver.
pub const MAX_DIM: usize = 64;

const RESIDUAL_TOL: f64 = 1e-10;

/// Kronecker product of two square matrices.
pub(crate) fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = Array2::<C64>::zeros((n * m, n * m));
    for i in 0..n {
        for k in 0..n {
            let aik = a[[i, k]];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..m {
                for l in 0..m {
                    out[[i * m + j, k * m + l]] = aik * b[[j, l]];
                }
            }
        }
    }
    out
}

/// Solves A·Y = B for a matrix right-hand side via one LU factorization.
pub(crate) fn solve_matrix(a: &Array2<C64>, b: &Array2<C64>) -> Result<Array2<C64>> {
    let lu = a.factorize().map_err(|e| Error::LinearSolve(e.to_string()))?;
    let mut out = Array2::<C64>::zeros(b.raw_dim());
    for (j, col) in b.columns().into_iter().enumerate() {
        let x = lu
            .solve(&col.to_owned())
            .map_err(|e| Error::LinearSolve(e.to_string()))?;
        out.column_mut(j).assign(&x);
    }
    Ok(out)
}

pub(crate) fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves A·X + X·Aᵀ + μ·X + Q = 0 by dense Kronecker vectorization.
pub fn solve_lyapunov(a: &Array2<C64>, q: &Array2<C64>, mu: C64) -> Result<Array2<C64>> {
    let d = a.nrows();
    if a.ncols() != d || q.nrows() != d || q.ncols() != d {
        return Err(Error::Config("solve_lyapunov: A and Q must be square of equal size".into()));
    }
    if d > MAX_DIM {
        return Err(Error::Config(format!(
            "solve_lyapunov: dimension {d} exceeds supported bound {MAX_DIM}"
        )));
    }
    let norm_a = frobenius(a);
    let eigs = a.eigvals().map_err(|e| Error::Eigensolver(e.to_string()))?;
    let mut min_shift = f64::INFINITY;
    for li in eigs.iter() {
        for lj in eigs.iter() {
            min_shift = min_shift.min((li + lj + mu).norm());
        }
    }
    if min_shift < 1e-12 * norm_a.max(1e-300) {
        return Err(Error::ResonantLyapunov(min_shift));
    }

    let norm_q = frobenius(q);
    if norm_q == 0.0 {
        return Ok(Array2::zeros((d, d)));
    }

    let eye = Array2::<C64>::eye(d);
    let mut k = kron(&eye, a) + kron(a, &eye);
    for i in 0..d * d {
        k[[i, i]] += mu;
    }
    let mut rhs = Array1::<C64>::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            rhs[i * d + j] = -q[[i, j]];
        }
    }
    let x = k
        .factorize()
        .and_then(|lu| lu.solve_into(rhs))
        .map_err(|e| Error::LinearSolve(e.to_string()))?;
    let x = Array2::from_shape_fn((d, d), |(i, j)| x[i * d + j]);

    let residual = frobenius(&(a.dot(&x) + x.dot(&a.t()) + x.mapv(|z| mu * z) + q)) / norm_q;
    if residual > RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge { residual, tol: RESIDUAL_TOL });
    }
    Ok(x)
}

/// Matrix exponential e^A by scaling-and-squaring with a degree-13 Padé approximant.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    const THETA_13: f64 = 5.371920351148152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let d = a.nrows();
    let norm = a.opnorm_one().unwrap_or_else(|_| frobenius(a));
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = a.mapv(|z| z / C64::new(2f64.powi(s as i32), 0.0));
    let eye = Array2::<C64>::eye(d);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let u_inner = a6.mapv(|z| z * B[13]) + a4.mapv(|z| z * B[11]) + a2.mapv(|z| z * B[9]);
    let u = a.dot(
        &(a6.dot(&u_inner)
            + a6.mapv(|z| z * B[7])
            + a4.mapv(|z| z * B[5])
            + a2.mapv(|z| z * B[3])
            + eye.mapv(|z| z * B[1])),
    );
    let v_inner = a6.mapv(|z| z * B[12]) + a4.mapv(|z| z * B[10]) + a2.mapv(|z| z * B[8]);
    let v = a6.dot(&v_inner)
        + a6.mapv(|z| z * B[6])
        + a4.mapv(|z| z * B[4])
        + a2.mapv(|z| z * B[2])
        + eye.mapv(|z| z * B[0]);
    let mut r = solve_matrix(&(&v - &u), &(&v + &u)).expect("Pade denominator is nonsingular");
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// Matrix exponential e^{A·t} for t ≥ 0.
pub fn propagate_expm(a: &Array2<C64>, t: f64) -> Array2<C64> {
    expm(&a.mapv(|z| z * t))
}
