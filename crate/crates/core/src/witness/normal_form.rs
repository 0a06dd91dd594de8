use super::{conj, WitnessError};
use crate::field::Elem;
use crate::linalg::{cyclic_vector, minpoly, Matrix};

/// `T⁻¹cT` in block shape `[[0, I], [C, *]]` (even) or
/// `[[0, 0, I], [0, β, *], [C, *, *]]` (odd), with `C` cyclic and nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavedForm {
    pub conjugator: Matrix,
    pub form: Matrix,
    pub m: usize,
}

impl InterleavedForm {
    /// The `m×m` block `C` in the lower left corner.
    pub fn c_block(&self) -> Matrix {
        let n = self.form.rows();
        self.form.submatrix(n - self.m, 0, self.m, self.m)
    }

    /// The scalar `β` of the odd shape.
    pub fn beta(&self) -> Option<Elem> {
        (self.form.rows() % 2 == 1).then(|| self.form[(self.m, self.m)])
    }
}

fn has_shape(form: &Matrix, m: usize) -> bool {
    let n = form.rows();
    let odd = n % 2;
    let top = form.submatrix(0, 0, m, n);
    let shape_top = (0..m).all(|i| (0..n).all(|j| top[(i, j)] == if j == i + m + odd { Elem::ONE } else { Elem::ZERO }));
    let shape_mid = odd == 0 || (0..m).all(|j| form[(m, j)].is_zero());
    let c = form.submatrix(n - m, 0, m, m);
    shape_top && shape_mid && c.is_invertible() && minpoly(&c).deg() == m
}

/// Interleaves the Krylov basis `v, vφ², …` then `vφ, vφ³, …`; the odd case puts
/// `w = vφ^{2m} + v` in the middle and clears its row with a unipotent conjugation.
pub fn interleave_form(c: &Matrix) -> Result<InterleavedForm, WitnessError> {
    let f = c.field().clone();
    let n = c.rows();
    if !c.is_square() || n < 3 {
        return Err(WitnessError::PreconditionViolated(format!("need a square matrix of size at least 3, got {n}")));
    }
    if !c.is_invertible() {
        return Err(WitnessError::PreconditionViolated("matrix is singular".into()));
    }
    let v = cyclic_vector(c)?;
    let mut krylov = vec![v];
    for i in 1..=n {
        let next = c.vec_mul(&krylov[i - 1]);
        krylov.push(next);
    }
    let m = n / 2;
    let mut rows: Vec<Vec<Elem>> = (0..m).map(|i| krylov[2 * i].clone()).collect();
    if n % 2 == 1 {
        rows.push(krylov[2 * m].iter().zip(&krylov[0]).map(|(&a, &b)| f.add(a, b)).collect());
    }
    rows.extend((0..m).map(|i| krylov[2 * i + 1].clone()));
    let b = Matrix::from_rows(&f, &rows)?;
    if !b.is_invertible() {
        return Err(WitnessError::DegenerateBasis);
    }
    let mut t = b.inverse()?;
    if n % 2 == 1 {
        let phi = conj(c, &t)?;
        let a: Vec<Elem> = phi.row(m)[..m].to_vec();
        let cb = phi.submatrix(m + 1, 0, m, m);
        let ac = cb.inverse()?.vec_mul(&a);
        let mut u = Matrix::identity(&f, n);
        for (j, &x) in ac.iter().enumerate() {
            u[(m, m + 1 + j)] = x;
        }
        t = t.mul(&u);
    }
    let form = conj(c, &t)?;
    if !has_shape(&form, m) {
        return Err(WitnessError::InternalInconsistency("interleaved form has the wrong shape".into()));
    }
    Ok(InterleavedForm { conjugator: t, form, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::{charpoly, is_similar};
    use crate::poly::Poly;

    #[test]
    fn even_over_gf2() {
        let f2 = Field::prime(2).unwrap();
        let c = Matrix::companion(&Poly::from_ints(&f2, &[1, 1, 0, 0, 1]));
        let r = interleave_form(&c).unwrap();
        assert_eq!(r.m, 2);
        assert_eq!(r.form.submatrix(0, 0, 2, 2), Matrix::zeros(&f2, 2, 2));
        assert_eq!(r.form.submatrix(0, 2, 2, 2), Matrix::identity(&f2, 2));
        assert!(is_similar(&r.form, &c));
        assert_eq!(minpoly(&r.c_block()).deg(), 2);
    }

    #[test]
    fn odd_over_gf5() {
        let f5 = Field::prime(5).unwrap();
        let c = Matrix::companion(&Poly::from_ints(&f5, &[-1, 0, 0, 1]));
        let r = interleave_form(&c).unwrap();
        assert_eq!(r.m, 1);
        assert!(r.beta().is_some());
        assert!(r.form[(1, 0)].is_zero());
        assert_eq!(charpoly(&r.form), charpoly(&c));
    }

    #[test]
    fn random_conjugates_of_many_sizes() {
        let f3 = Field::prime(3).unwrap();
        let mut rng = super::super::rng(2);
        for n in 3..8 {
            let mut coeffs: Vec<i64> = vec![1];
            coeffs.extend((1..n).map(|i| (i % 3) as i64));
            coeffs.push(1);
            let c = Matrix::companion(&Poly::from_ints(&f3, &coeffs));
            let x = super::super::random_invertible(&f3, n, &mut rng);
            let c = conj(&c, &x).unwrap();
            let r = interleave_form(&c).unwrap();
            assert_eq!(conj(&c, &r.conjugator).unwrap(), r.form);
        }
    }

    #[test]
    fn rejects_non_cyclic() {
        let f3 = Field::prime(3).unwrap();
        let j = Matrix::jordan(&f3, 2, Elem::ONE);
        assert_eq!(interleave_form(&j.oplus(&Matrix::identity(&f3, 1))), Err(WitnessError::NotCyclic));
    }
}
