//! Dense complex linear-algebra helpers: matrix exponential, Hermitian
//! eigenvalues, and Gauss-Legendre quadrature rules.
//!
//! Everything here targets desk-scale matrices (dimension up to a few
//! hundred), so the implementations favor robustness over asymptotics.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

/// Largest absolute entry of a matrix.
pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Conjugate transpose.
pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

/// Max-norm of `a - a^dagger`.
pub fn hermiticity_defect(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut defect = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    defect
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0_f64;
    for col in a.columns() {
        best = best.max(col.iter().map(|z| z.norm()).sum());
    }
    best
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
///
/// Accurate to roundoff for the well-conditioned (anti-Hermitian) arguments
/// used by the propagators in this crate; `expm` of the zero matrix returns
/// the exact identity.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2.0_f64.powi(squarings as i32));

    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..=40 {
        term = term.dot(&scaled).mapv(|z| z / (k as f64));
        result += &term;
        if max_abs(&term) <= 1e-17 * (1.0 + max_abs(&result)) {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
pub fn eigvalsh(a: &Array2<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigvalsh requires a square matrix");
    let mut m = a.clone();
    let scale = max_abs(&m).max(1e-300);

    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[[p, q]].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let abs_apq = apq.norm();
                if abs_apq <= 1e-300 {
                    continue;
                }
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let phase = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary 2x2 block [[c, s*phase], [-s*conj(phase), c]].
                let sp = phase * s;
                for r in 0..n {
                    let mrp = m[[r, p]];
                    let mrq = m[[r, q]];
                    m[[r, p]] = c * mrp - sp.conj() * mrq;
                    m[[r, q]] = sp * mrp + c * mrq;
                }
                for r in 0..n {
                    let mpr = m[[p, r]];
                    let mqr = m[[q, r]];
                    m[[p, r]] = c * mpr - sp * mqr;
                    m[[q, r]] = sp.conj() * mpr + c * mqr;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[[i, i]].re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                // one final recurrence pass so dp matches the converged x
                let mut q0 = 1.0;
                let mut q1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let q2 = ((2.0 * kf - 1.0) * x * q1 - (kf - 1.0) * q0) / kf;
                    q0 = q1;
                    q1 = q2;
                }
                dp = nf * (x * q1 - q0) / (x * x - 1.0);
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
