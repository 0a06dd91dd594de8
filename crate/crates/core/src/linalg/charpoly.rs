use super::Matrix;
use crate::field::Elem;
use crate::poly::Poly;

/// Characteristic polynomial `det(xI - A)` via reduction to upper Hessenberg form.
pub fn charpoly(a: &Matrix) -> Poly {
    assert!(a.is_square(), "charpoly of a non-square matrix");
    let f = a.field().clone();
    let n = a.rows();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else { continue };
        if p != j + 1 {
            for c in 0..n {
                let t = h[(p, c)];
                h[(p, c)] = h[(j + 1, c)];
                h[(j + 1, c)] = t;
            }
            for r in 0..n {
                let t = h[(r, p)];
                h[(r, p)] = h[(r, j + 1)];
                h[(r, j + 1)] = t;
            }
        }
        let inv = f.inv(h[(j + 1, j)]);
        for i in j + 2..n {
            let m = f.mul(h[(i, j)], inv);
            if m.is_zero() {
                continue;
            }
            // row_i -= m row_{j+1}; col_{j+1} += m col_i
            for c in 0..n {
                let v = f.mul(m, h[(j + 1, c)]);
                h[(i, c)] = f.sub(h[(i, c)], v);
            }
            for r in 0..n {
                let v = f.mul(m, h[(r, i)]);
                h[(r, j + 1)] = f.add(h[(r, j + 1)], v);
            }
        }
    }
    let mut ps: Vec<Poly> = vec![Poly::one(&f)];
    for m in 1..=n {
        let mut pm = Poly::linear(&f, h[(m - 1, m - 1)]).mul(&ps[m - 1]);
        let mut prod = Elem::ONE;
        for i in (1..m).rev() {
            prod = f.mul(prod, h[(i, i - 1)]);
            let c = f.mul(h[(i - 1, m - 1)], prod);
            if !c.is_zero() {
                pm = pm.sub(&ps[i - 1].scale(c));
            }
        }
        ps.push(pm);
    }
    ps.pop().expect("nonempty")
}

/// Minimal polynomial as the lcm of the local minimal polynomials of the
/// standard basis vectors (Krylov dependence).
pub fn minpoly(a: &Matrix) -> Poly {
    assert!(a.is_square(), "minpoly of a non-square matrix");
    let f = a.field().clone();
    let n = a.rows();
    let mut acc = Poly::one(&f);
    for i in 0..n {
        let mut e = vec![Elem::ZERO; n];
        e[i] = Elem::ONE;
        if acc.eval_vector(a, &e).iter().all(|c| c.is_zero()) {
            continue;
        }
        let local = local_minpoly(a, &e);
        let g = acc.gcd(&local);
        acc = acc.mul(&local).divrem(&g).0;
    }
    acc.monic()
}

/// Monic polynomial `g` of least degree with `v·g(A) = 0`.
pub fn local_minpoly(a: &Matrix, v: &[Elem]) -> Poly {
    let f = a.field().clone();
    let n = a.rows();
    // Krylov rows kept alongside the combination of powers that produced them.
    let mut basis: Vec<(Vec<Elem>, usize, Vec<Elem>)> = Vec::new();
    let mut cur = v.to_vec();
    for k in 0..=n {
        let mut r = cur.clone();
        let mut comb = vec![Elem::ZERO; k + 1];
        comb[k] = Elem::ONE;
        for (row, piv, c) in &basis {
            let m = r[*piv];
            if m.is_zero() {
                continue;
            }
            for j in 0..n {
                r[j] = f.sub(r[j], f.mul(m, row[j]));
            }
            for (j, cj) in c.iter().enumerate() {
                comb[j] = f.sub(comb[j], f.mul(m, *cj));
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            None => return Poly::new(&f, comb),
            Some(p) => {
                let inv = f.inv(r[p]);
                let r = r.into_iter().map(|x| f.mul(x, inv)).collect();
                let c = comb.into_iter().map(|x| f.mul(x, inv)).collect();
                basis.push((r, p, c));
            }
        }
        cur = a.vec_mul(&cur);
    }
    unreachable!("Krylov sequence must become dependent within n+1 steps")
}

impl Poly {
    /// `v·p(A)` by Horner's rule on vectors.
    pub fn eval_vector(&self, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
        let f = a.field().clone();
        let mut acc = vec![Elem::ZERO; v.len()];
        for &c in self.coeffs().iter().rev() {
            acc = a.vec_mul(&acc);
            for (x, &vi) in acc.iter_mut().zip(v) {
                *x = f.add(*x, f.mul(c, vi));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn companion_and_scalar() {
        let f3 = Field::prime(3).unwrap();
        let p = Poly::from_ints(&f3, &[1, 0, 2, 1]);
        let c = Matrix::companion(&p);
        assert_eq!(charpoly(&c), p);
        assert_eq!(minpoly(&c), p);
        let l = f3.from_int(2);
        let s = Matrix::scalar(&f3, 3, l);
        assert_eq!(minpoly(&s), Poly::linear(&f3, l));
        assert_eq!(charpoly(&s), Poly::linear(&f3, l).pow(3));
    }

    #[test]
    fn jordan_blocks() {
        let f3 = Field::prime(3).unwrap();
        let j = Matrix::jordan(&f3, 2, Elem::ONE);
        let a = j.oplus(&j);
        let xm1 = Poly::linear(&f3, Elem::ONE);
        assert_eq!(charpoly(&a), xm1.pow(4));
        assert_eq!(minpoly(&a), xm1.pow(2));
        assert!(minpoly(&a).eval_matrix(&a).is_zero());
    }

    #[test]
    fn charpoly_matches_det_at_points() {
        // det(tI - A) = charpoly(t) for every t in a field with many points.
        let f = Field::prime(31).unwrap();
        let a = Matrix::from_ints(&f, &[&[1, 2, 3, 4], &[0, 5, 6, 7], &[8, 0, 9, 1], &[2, 3, 0, 4]]);
        let cp = charpoly(&a);
        for t in f.elements() {
            let m = Matrix::scalar(&f, 4, t).sub(&a);
            assert_eq!(m.det(), cp.eval(t));
        }
        assert!(cp.eval_matrix(&a).is_zero());
        assert!(minpoly(&a).divides(&cp));
    }
}
