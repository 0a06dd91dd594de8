use super::WitnessError;
use crate::classes::SimilarityClass;
use crate::field::Elem;
use crate::linalg::{lu_decompose, Matrix};
use crate::poly::Poly;

/// `W ∈ C(f)`, `Q ∈ C(g)` with `W·Q = [[δ, z], [0, D]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFactor {
    pub w: Matrix,
    pub q: Matrix,
    pub delta: Elem,
    pub z: Vec<Elem>,
}

fn col_mul(a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    let f = a.field();
    (0..a.rows()).map(|i| f.sum((0..a.cols()).map(|j| f.mul(a[(i, j)], v[j])))).collect()
}

/// Row `r` with `charpoly(N + e_k^T r) = p`, where `N` is nilpotent and
/// `N^j e_k` (as columns) are triangular with nonzero pivots.
fn solve_row(n_mat: &Matrix, k: usize, p: &Poly) -> Result<Vec<Elem>, WitnessError> {
    let f = n_mat.field();
    let n = n_mat.rows();
    // det(xI - N - e_k r) = x^n - Σ_j (r·N^j e_k) x^{n-1-j}
    let mut v = vec![Elem::ZERO; n];
    v[k] = Elem::ONE;
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for j in 0..n {
        rows.push(v.clone());
        rhs.push(f.neg(p.coeff(n - 1 - j)));
        v = col_mul(n_mat, &v);
    }
    let sys = Matrix::from_rows(f, &rows)?;
    sys.solve(&rhs).ok_or(WitnessError::SolveFailed)
}

/// Writes `D = LU` and completes `[[y, β], [L, 0]]` and `[[0, U], [γ, x]]` to
/// matrices with charpolys `f` and `g`.
///
/// The product is `[[βγ, yU + βx], [0, D]]`, and `βγ = det(f)·det(g)/det D`.
pub fn lemma22_factor(f: &Poly, g: &Poly, d: &Matrix) -> Result<BlockFactor, WitnessError> {
    let field = d.field().clone();
    let n = d.rows() + 1;
    if !d.is_square() || f.deg() != n || g.deg() != n || !f.is_monic() || !g.is_monic() {
        return Err(WitnessError::Mismatch(format!(
            "need monic polynomials of degree {n} for a {}x{} block",
            d.rows(),
            d.cols()
        )));
    }
    let (l, u) = lu_decompose(d)?;
    let mut nw = Matrix::zeros(&field, n, n);
    nw.set_block(1, 0, &l);
    let mut nq = Matrix::zeros(&field, n, n);
    nq.set_block(0, 1, &u);
    let r = solve_row(&nw, 0, f)?;
    let rq = solve_row(&nq, n - 1, g)?;
    let mut w = nw;
    let mut q = nq;
    for j in 0..n {
        w[(0, j)] = r[j];
        q[(n - 1, j)] = rq[j];
    }
    let prod = w.mul(&q);
    let ok = SimilarityClass::cyclic(f).contains(&w)
        && SimilarityClass::cyclic(g).contains(&q)
        && (1..n).all(|i| prod[(i, 0)].is_zero())
        && prod.submatrix(1, 1, n - 1, n - 1) == *d;
    if !ok {
        return Err(WitnessError::InternalInconsistency("block factorization failed its check".into()));
    }
    let z = prod.row(0)[1..].to_vec();
    Ok(BlockFactor { delta: prod[(0, 0)], z, w, q })
}

/// Cyclic `A ∈ C(f)`, `R ∈ C(g)` of size `r ≥ 3` with `tr(AR) = t`.
///
/// Uses the block factorization with `D = [[1,1],[t'-2,t'-1]] ⊕ I`, which has
/// determinant one, trace `t' + r - 3`, and nonzero leading minors.
pub fn steer_trace(f: &Poly, g: &Poly, t: Elem) -> Result<(Matrix, Matrix), WitnessError> {
    let field = f.field().clone();
    let r = f.deg();
    if r < 3 || g.deg() != r {
        return Err(WitnessError::HypothesisViolated(format!("trace steering needs size at least 3, got {r}")));
    }
    let delta0 = field.mul(Matrix::companion(f).det(), Matrix::companion(g).det());
    let t1 = field.sub(field.sub(t, delta0), field.from_int(r as i64 - 3));
    let two = field.from_int(2);
    let top = Matrix::from_rows(
        &field,
        &[vec![Elem::ONE, Elem::ONE], vec![field.sub(t1, two), field.sub(t1, Elem::ONE)]],
    )?;
    let d = top.oplus(&Matrix::identity(&field, r - 3));
    let b = lemma22_factor(f, g, &d)?;
    debug_assert_eq!(b.w.trace_of_product(&b.q), t);
    Ok((b.w, b.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf2_cubic_example() {
        let f2 = Field::prime(2).unwrap();
        let f = Poly::from_ints(&f2, &[1, 1, 0, 1]);
        let d = Matrix::from_ints(&f2, &[&[1, 1], &[0, 1]]);
        let b = lemma22_factor(&f, &f, &d).unwrap();
        assert_eq!(b.delta, Elem::ONE);
        let prod = b.w.mul(&b.q);
        assert_eq!(prod[(0, 0)], Elem::ONE);
        assert_eq!(prod.submatrix(1, 1, 2, 2), d);
        // trace identity: tr(WQ) = βγ + tr D
        assert_eq!(prod.trace(), f2.add(b.delta, d.trace()));
    }

    #[test]
    fn no_lu_is_reported() {
        let f3 = Field::prime(3).unwrap();
        let f = Poly::from_ints(&f3, &[1, 0, 0, 1]);
        let d = Matrix::from_ints(&f3, &[&[0, 1], &[1, 0]]);
        assert_eq!(lemma22_factor(&f, &f, &d), Err(WitnessError::NoLu));
    }

    #[test]
    fn delta_identity_on_random_inputs() {
        let f7 = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 200 {
            let n = rng.gen_range(2..6);
            let rp = |rng: &mut ChaCha8Rng| {
                let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(0..7)).collect();
                c.push(1);
                Poly::from_ints(&f7, &c)
            };
            let (f, g) = (rp(&mut rng), rp(&mut rng));
            let d = super::super::random_matrix(&f7, n - 1, n - 1, &mut rng);
            let Ok(b) = lemma22_factor(&f, &g, &d) else { continue };
            let dets = f7.mul(Matrix::companion(&f).det(), Matrix::companion(&g).det());
            assert_eq!(b.delta, f7.div(dets, d.det()));
            done += 1;
        }
    }

    #[test]
    fn steering_hits_every_trace() {
        for q in [2u64, 3, 4, 5] {
            let k = Field::of_order(q).unwrap();
            for r in 3..6 {
                let f = Poly::x(&k).pow(r as u32);
                let mut gc = vec![Elem::ZERO; r];
                gc[0] = Elem::ONE;
                gc.push(Elem::ONE);
                let g = Poly::new(&k, gc);
                for t in k.elements() {
                    let (a, b) = steer_trace(&f, &g, t).unwrap();
                    assert_eq!(a.trace_of_product(&b), t);
                }
            }
        }
    }
}
