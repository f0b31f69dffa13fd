//! Dense complex linear algebra on top of `nalgebra`.
//!
//! Thin wrappers that fix the conventions used by the rest of the crate:
//! eigenvalues and singular values sorted in descending order, Hermitian
//! input validated, and singular systems reported as [`Error::Rank`].

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{domain, Error, Result};
use crate::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Maximum allowed `‖M − Mᴴ‖_F / ‖M‖_F` for [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        domain("matrix has non-finite entries")
    }
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix: `M = Q diag(λ) Qᴴ`, with the
/// eigenvalues in descending order and `Q`'s columns permuted to match.
pub fn hermitian_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return domain(format!("eigen-decomposition needs a square matrix, got {}x{}", m.nrows(), m.ncols()));
    }
    check_finite(m)?;
    let scale = frobenius(m);
    let asym = frobenius(&(m - m.adjoint()));
    if asym > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return domain(format!("matrix is not Hermitian (relative asymmetry {:e})", asym / scale));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Thin SVD `M = U diag(σ) Vᴴ` with `σ` descending.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    check_finite(m)?;
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return Ok(Svd {
            u: CMatrix::zeros(m.nrows(), 0),
            singular_values: Vec::new(),
            v: CMatrix::zeros(m.ncols(), 0),
        });
    }
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("requested U");
    let v_t = dec.v_t.expect("requested Vᴴ");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    Ok(Svd {
        u: CMatrix::from_fn(m.nrows(), k, |r, c| u[(r, order[c])]),
        singular_values: order.iter().map(|&i| dec.singular_values[i]).collect(),
        v: CMatrix::from_fn(m.ncols(), k, |r, c| v_t[(order[c], r)].conj()),
    })
}

/// 2-norm condition number `σ_max / σ_min` (infinite when singular).
pub fn condition_number(m: &CMatrix) -> Result<f64> {
    let s = svd(m)?;
    let (max, min) = match (s.singular_values.first(), s.singular_values.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(1.0),
    };
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}

/// Solves `A X = B` for square `A`.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return domain(format!(
            "solve needs square A with matching rows: A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        ));
    }
    check_finite(a)?;
    check_finite(b)?;
    let n = a.nrows();
    let s = svd(a)?;
    let max = s.singular_values.first().copied().unwrap_or(0.0);
    let min = s.singular_values.last().copied().unwrap_or(0.0);
    if n > 0 && (max == 0.0 || min <= max * n as f64 * f64::EPSILON) {
        return Err(Error::Rank(format!(
            "matrix is singular to working precision (σ_min/σ_max = {:e})",
            if max > 0.0 { min / max } else { 0.0 }
        )));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Rank("LU factorisation hit a zero pivot".into()))
}
