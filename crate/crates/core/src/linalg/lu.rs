use super::{LinalgError, Matrix};
use crate::field::Elem;

/// Doolittle factorization `D = L·U` with `L` unitriangular.
///
/// Fails with `NoLu` exactly when a leading principal minor of `D` vanishes.
pub fn lu_decompose(d: &Matrix) -> Result<(Matrix, Matrix), LinalgError> {
    if !d.is_square() {
        return Err(LinalgError::DimensionMismatch("LU of a non-square matrix".into()));
    }
    let f = d.field().clone();
    let n = d.rows();
    let mut l = Matrix::identity(&f, n);
    let mut u = Matrix::zeros(&f, n, n);
    for i in 0..n {
        for j in i..n {
            let s = f.sum((0..i).map(|k| f.mul(l[(i, k)], u[(k, j)])));
            u[(i, j)] = f.sub(d[(i, j)], s);
        }
        if u[(i, i)].is_zero() {
            return Err(LinalgError::NoLu);
        }
        let inv = f.inv(u[(i, i)]);
        for r in i + 1..n {
            let s = f.sum((0..i).map(|k| f.mul(l[(r, k)], u[(k, i)])));
            l[(r, i)] = f.mul(f.sub(d[(r, i)], s), inv);
        }
    }
    debug_assert_eq!(l.mul(&u), *d);
    debug_assert!((0..n).all(|i| l[(i, i)] == Elem::ONE));
    Ok((l, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn examples() {
        let f2 = Field::prime(2).unwrap();
        let i3 = Matrix::identity(&f2, 3);
        assert_eq!(lu_decompose(&i3).unwrap(), (i3.clone(), i3));
        let swap = Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]);
        assert_eq!(lu_decompose(&swap).unwrap_err(), LinalgError::NoLu);
        let d = Matrix::from_ints(&f2, &[&[1, 1], &[1, 0]]);
        let (l, u) = lu_decompose(&d).unwrap();
        assert_eq!(l, Matrix::from_ints(&f2, &[&[1, 0], &[1, 1]]));
        assert_eq!(u, Matrix::from_ints(&f2, &[&[1, 1], &[0, 1]]));
    }

    fn leading_minors_nonzero(d: &Matrix) -> bool {
        (1..=d.rows()).all(|k| !d.submatrix(0, 0, k, k).det().is_zero())
    }

    #[test]
    fn exists_iff_leading_minors_nonzero() {
        for q in [2u64, 3] {
            let f = Field::prime(q).unwrap();
            for n in 1..=3usize {
                let total = (q as usize).pow((n * n) as u32);
                for code in 0..total {
                    let mut c = code;
                    let data = (0..n * n)
                        .map(|_| {
                            let e = f.elem(c % q as usize);
                            c /= q as usize;
                            e
                        })
                        .collect();
                    let d = Matrix::from_vec(&f, n, n, data);
                    match lu_decompose(&d) {
                        Ok((l, u)) => {
                            assert!(leading_minors_nonzero(&d));
                            assert_eq!(l.mul(&u), d);
                            assert!(l.is_lower_triangular() && u.is_upper_triangular());
                        }
                        Err(e) => {
                            assert_eq!(e, LinalgError::NoLu);
                            assert!(!leading_minors_nonzero(&d));
                        }
                    }
                }
            }
        }
    }
}
