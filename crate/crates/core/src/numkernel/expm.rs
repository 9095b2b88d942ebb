//! Matrix exponential and principal logarithm.

use super::decomp::{inverse, solve};
use super::matrix::Matrix;
use super::KernelError;
use crate::scalar::Real;

const PADE13: [f64; 14] = [
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
const THETA13: f64 = 5.371920351148152;
/// Largest number of squarings we are willing to perform.
const MAX_SQUARINGS: i32 = 60;

/// `e^a` by scaling and squaring around a degree-13 Padé approximant.
pub fn mat_exp<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    if !a.is_square() {
        return Err(KernelError::NotSquare(a.rows(), a.cols()));
    }
    if !a.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let norm = a.norm_1().as_f64();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if s > MAX_SQUARINGS {
        return Err(KernelError::ExpOverflow(norm));
    }
    let a = a.scale(T::c(0.5f64.powi(s)));
    let b: Vec<T> = PADE13.iter().map(|&x| T::c(x)).collect();
    let id = Matrix::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let lin = |m6: T, m4: T, m2: T, m0: T| -> Matrix<T> {
        &(&(&a6.scale(m6) + &a4.scale(m4)) + &a2.scale(m2)) + &id.scale(m0)
    };
    let u_inner = &a6.matmul(&(&(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9])))
        + &lin(b[7], b[5], b[3], b[1]);
    let u = a.matmul(&u_inner);
    let v = &a6.matmul(&(&(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8])))
        + &lin(b[6], b[4], b[2], b[0]);
    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    if !r.is_finite() {
        return Err(KernelError::ExpOverflow(norm));
    }
    Ok(r)
}

/// Principal square root by the Denman-Beavers iteration.
pub fn mat_sqrt<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    if !a.is_square() {
        return Err(KernelError::NotSquare(a.rows(), a.cols()));
    }
    let mut y = a.clone();
    let mut z = Matrix::identity(a.rows());
    let half = T::c(0.5);
    for _ in 0..100 {
        let yi = inverse(&y).map_err(|_| KernelError::LogDomain)?;
        let zi = inverse(&z).map_err(|_| KernelError::LogDomain)?;
        let y_next = (&y + &zi).scale(half);
        let z_next = (&z + &yi).scale(half);
        let change = y_next.dist(&y);
        y = y_next;
        z = z_next;
        if !y.is_finite() {
            return Err(KernelError::LogDomain);
        }
        if change <= T::epsilon() * T::c(10.0) * (T::one() + y.frobenius_norm()) {
            return Ok(y);
        }
    }
    Err(KernelError::LogDomain)
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Repeated square roots bring `a` within `1/4` of the identity, where the
/// Mercator series is summed. Fails when `a` has spectrum on the closed
/// negative real axis (the square-root iteration then breaks down).
pub fn mat_log<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    if !a.is_square() {
        return Err(KernelError::NotSquare(a.rows(), a.cols()));
    }
    if !a.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let n = a.rows();
    let id = Matrix::identity(n);
    let mut x = a.clone();
    let mut k = 0;
    while x.dist(&id) > T::c(0.25) {
        if k >= 50 {
            return Err(KernelError::LogDomain);
        }
        x = mat_sqrt(&x)?;
        k += 1;
    }
    let d = &x - &id;
    let mut term = d.clone();
    let mut sum = d.clone();
    for j in 2..=60 {
        term = term.matmul(&d);
        let coef = if j % 2 == 0 { -T::one() } else { T::one() } / T::c(j as f64);
        let inc = term.scale(coef);
        sum = &sum + &inc;
        if inc.max_abs() <= T::epsilon() * T::c(1e-2) {
            break;
        }
    }
    Ok(sum.scale(T::c(2f64.powi(k))))
}
