use rand_chacha::ChaCha8Rng;

use super::{conj, random_elem, rng, WitnessError};
use crate::classes::minimal_rank;
use crate::field::{Elem, Field};
use crate::linalg::Matrix;

const GREEDY_RESTARTS: usize = 64;
const GREEDY_TRIES: usize = 256;
/// Exhaustive backtracking only when `q^n` is at most this.
const DFS_BOUND: u64 = 1 << 16;

fn rank_of(f: &Field, rows: &[Vec<Elem>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(f, rows).map(|m| m.rank()).unwrap_or(0)
}

/// Rows `b_1..b_m` such that all `b_i` and `b_i M` together are independent.
fn greedy(m_mat: &Matrix, m: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Elem>>> {
    let f = m_mat.field();
    let n = m_mat.rows();
    for _ in 0..GREEDY_RESTARTS {
        let mut chosen: Vec<Vec<Elem>> = Vec::new();
        let mut span: Vec<Vec<Elem>> = Vec::new();
        for _ in 0..m {
            let mut found = false;
            for _ in 0..GREEDY_TRIES {
                let b: Vec<Elem> = (0..n).map(|_| random_elem(f, rng)).collect();
                let bm = m_mat.vec_mul(&b);
                let mut trial = span.clone();
                trial.push(b.clone());
                trial.push(bm);
                if rank_of(f, &trial) == trial.len() {
                    chosen.push(b);
                    span = trial;
                    found = true;
                    break;
                }
            }
            if !found {
                break;
            }
        }
        if chosen.len() == m {
            return Some(chosen);
        }
    }
    None
}

fn dfs(m_mat: &Matrix, m: usize, span: &mut Vec<Vec<Elem>>, chosen: &mut Vec<Vec<Elem>>, start: u64) -> bool {
    if chosen.len() == m {
        return true;
    }
    let f = m_mat.field();
    let n = m_mat.rows();
    let q = f.order() as u64;
    let total = q.pow(n as u32);
    for code in start..total {
        let mut c = code;
        let b: Vec<Elem> = (0..n)
            .map(|_| {
                let e = f.elem((c % q) as usize);
                c /= q;
                e
            })
            .collect();
        let bm = m_mat.vec_mul(&b);
        span.push(b.clone());
        span.push(bm);
        if rank_of(f, span) == span.len() {
            chosen.push(b);
            if dfs(m_mat, m, span, chosen, code + 1) {
                return true;
            }
            chosen.pop();
        }
        span.pop();
        span.pop();
    }
    false
}

/// `T` with `T⁻¹MT = [[A, *], [*, *]]` for `A` of size `m ≤ mr(M)`, `2m ≤ n`.
///
/// Picks `b_i` so that `b_i, b_i M` are independent, which puts `M` in the form
/// `[[0, I, *], …]`, then conjugates by `[[I,0,0],[A,I,0],[0,0,I]]`.
pub fn sourour_embed(m_mat: &Matrix, a: &Matrix, seed: u64) -> Result<Matrix, WitnessError> {
    let f = m_mat.field().clone();
    let n = m_mat.rows();
    let m = a.rows();
    if !m_mat.is_square() || !a.is_square() || a.field() != &f {
        return Err(WitnessError::Mismatch("square matrices over one field expected".into()));
    }
    let mr = minimal_rank(m_mat);
    if 2 * m > n || m > mr {
        return Err(WitnessError::PreconditionViolated(format!("block size {m} with n = {n} and mr = {mr}")));
    }
    if m_mat.submatrix(0, 0, m, m) == *a {
        return Ok(Matrix::identity(&f, n));
    }
    let mut rng = rng(seed);
    let chosen = match greedy(m_mat, m, &mut rng) {
        Some(c) => c,
        None => {
            let q = f.order() as u64;
            if q.checked_pow(n as u32).is_none_or(|t| t > DFS_BOUND) {
                return Err(WitnessError::EmbedSearchFailed(format!("greedy search exhausted for n = {n}, m = {m}")));
            }
            let mut chosen = Vec::new();
            if !dfs(m_mat, m, &mut Vec::new(), &mut chosen, 1) {
                return Err(WitnessError::EmbedSearchFailed(format!("no basis for n = {n}, m = {m}")));
            }
            chosen
        }
    };
    let mut basis: Vec<Vec<Elem>> = chosen.clone();
    basis.extend(chosen.iter().map(|b| m_mat.vec_mul(b)));
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![Elem::ZERO; n];
        e[j] = Elem::ONE;
        basis.push(e);
        if rank_of(&f, &basis) < basis.len() {
            basis.pop();
        }
    }
    let b = Matrix::from_rows(&f, &basis)?;
    let mut x = Matrix::identity(&f, n);
    x.set_block(m, 0, a);
    let t = b.inverse()?.mul(&x);
    if conj(m_mat, &t)?.submatrix(0, 0, m, m) != *a {
        return Err(WitnessError::InternalInconsistency("embedded corner does not match".into()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::invariant_factors;
    use crate::poly::Poly;

    #[test]
    fn identity_when_already_there() {
        let f3 = Field::prime(3).unwrap();
        let m = Matrix::companion(&Poly::from_ints(&f3, &[1, 1, 0, 0, 1]));
        let a = m.submatrix(0, 0, 2, 2);
        assert_eq!(sourour_embed(&m, &a, 1).unwrap(), Matrix::identity(&f3, 4));
    }

    #[test]
    fn plants_diag_in_a_cyclic_matrix() {
        let f3 = Field::prime(3).unwrap();
        let m = Matrix::companion(&Poly::from_ints(&f3, &[2, 0, 0, 1, 1]));
        assert_eq!(minimal_rank(&m), 3);
        let a = Matrix::from_ints(&f3, &[&[0, 0], &[0, 1]]);
        let t = sourour_embed(&m, &a, 7).unwrap();
        let c = conj(&m, &t).unwrap();
        assert_eq!(c.submatrix(0, 0, 2, 2), a);
        assert_eq!(invariant_factors(&c), invariant_factors(&m));
    }

    #[test]
    fn rejects_blocks_beyond_minimal_rank() {
        let f5 = Field::prime(5).unwrap();
        let j = Matrix::jordan(&f5, 2, Elem::ONE);
        let m = j.oplus(&j);
        let a = Matrix::identity(&f5, 3);
        assert!(matches!(sourour_embed(&m, &a, 1), Err(WitnessError::PreconditionViolated(_))));
    }

    #[test]
    fn plants_arbitrary_blocks_at_the_bound() {
        let f2 = Field::prime(2).unwrap();
        let j = Matrix::jordan(&f2, 2, Elem::ONE);
        let m = j.oplus(&j).oplus(&Matrix::companion(&Poly::from_ints(&f2, &[1, 1, 1])));
        let mr = minimal_rank(&m);
        assert_eq!(mr, 4);
        let mut rng = rng(5);
        for _ in 0..20 {
            let a = super::super::random_matrix(&f2, 3, 3, &mut rng);
            let t = sourour_embed(&m, &a, 11).unwrap();
            assert_eq!(conj(&m, &t).unwrap().submatrix(0, 0, 3, 3), a);
        }
    }
}
