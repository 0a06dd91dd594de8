use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{invariant_factors, LinalgError, Matrix};
use crate::field::{Elem, Field};

const DEFAULT_SEED: u64 = 0x5eed_c1a5;
/// Algebras with at most this many elements are enumerated exhaustively.
const EXHAUSTIVE_ALGEBRA_BOUND: f64 = (1u64 << 24) as f64;
const UNIT_SAMPLES: usize = 96;
const CONJUGATOR_ATTEMPTS: usize = 4096;

/// `X⁻¹AX`
pub fn conjugate(a: &Matrix, x: &Matrix) -> Result<Matrix, LinalgError> {
    let xi = x.inverse()?;
    xi.checked_mul(a)?.checked_mul(x)
}

pub fn is_similar(a: &Matrix, b: &Matrix) -> bool {
    a.field() == b.field()
        && a.is_square()
        && b.rows() == a.rows()
        && b.cols() == a.cols()
        && invariant_factors(a) == invariant_factors(b)
}

fn is_cyclic_vector(a: &Matrix, v: &[Elem]) -> bool {
    super::charpoly::local_minpoly(a, v).deg() == a.rows()
}

fn index_vector(field: &Field, n: usize, mut code: u64) -> Vec<Elem> {
    let q = field.order() as u64;
    (0..n)
        .map(|_| {
            let e = field.elem((code % q) as usize);
            code /= q;
            e
        })
        .collect()
}

/// A vector `v` with `v, vA, …, vA^{n-1}` independent.
pub fn cyclic_vector(a: &Matrix) -> Result<Vec<Elem>, LinalgError> {
    let n = a.rows();
    let f = a.field().clone();
    if super::minpoly(a).deg() != n {
        return Err(LinalgError::NotCyclic);
    }
    for i in 0..n {
        let mut e = vec![Elem::ZERO; n];
        e[i] = Elem::ONE;
        if is_cyclic_vector(a, &e) {
            return Ok(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..256 {
        let v: Vec<Elem> = (0..n).map(|_| f.elem(rng.gen_range(0..f.order()))).collect();
        if is_cyclic_vector(a, &v) {
            return Ok(v);
        }
    }
    let total = (f.order() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (1..total)
        .map(|c| index_vector(&f, n, c))
        .find(|v| is_cyclic_vector(a, v))
        .ok_or(LinalgError::NotCyclic)
}

/// Basis of the solution space of `AX = XB` (both square of equal size).
fn intertwiner_basis(a: &Matrix, b: &Matrix) -> Vec<Matrix> {
    let f = a.field().clone();
    let n = a.rows();
    let nn = n * n;
    // Unknown X_{kl} at index k*n + l; equation (i, j) is row i*n + j.
    let mut sys = Matrix::zeros(&f, nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let c = a[(i, k)];
                if !c.is_zero() {
                    let idx = k * n + j;
                    sys[(row, idx)] = f.add(sys[(row, idx)], c);
                }
                let c = b[(k, j)];
                if !c.is_zero() {
                    let idx = i * n + k;
                    sys[(row, idx)] = f.sub(sys[(row, idx)], c);
                }
            }
        }
    }
    sys.nullspace().into_iter().map(|v| Matrix::from_vec(&f, n, n, v)).collect()
}

/// Basis of the commutant `{X : AX = XA}`.
pub fn centralizer_basis(a: &Matrix) -> Vec<Matrix> {
    intertwiner_basis(a, a)
}

fn combine(field: &Field, basis: &[Matrix], coeffs: &[Elem]) -> Matrix {
    let n = basis[0].rows();
    let mut out = Matrix::zeros(field, n, n);
    for (m, &c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        out = out.add(&m.scale(c));
    }
    out
}

fn random_combination(field: &Field, basis: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
    let coeffs: Vec<Elem> = basis.iter().map(|_| field.elem(rng.gen_range(0..field.order()))).collect();
    combine(field, basis, &coeffs)
}

/// Some invertible `X` with `X⁻¹AX = B`, or `None` if the matrices are not similar.
pub fn find_conjugator(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    find_conjugator_seeded(a, b, DEFAULT_SEED)
}

pub fn find_conjugator_seeded(a: &Matrix, b: &Matrix, seed: u64) -> Option<Matrix> {
    if a.field() != b.field() || a.rows() != b.rows() || !a.is_square() || !b.is_square() {
        return None;
    }
    if invariant_factors(a) != invariant_factors(b) {
        return None;
    }
    let f = a.field().clone();
    let basis = intertwiner_basis(a, b);
    if let Some(x) = basis.iter().find(|x| x.is_invertible()) {
        return Some(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CONJUGATOR_ATTEMPTS {
        let x = random_combination(&f, &basis, &mut rng);
        if x.is_invertible() {
            return Some(x);
        }
    }
    // Similar matrices always admit one; enumerate as a last resort.
    let total = (f.order() as u64).checked_pow(basis.len() as u32)?;
    (1..total).map(|c| combine(&f, &basis, &index_vector(&f, basis.len(), c))).find(Matrix::is_invertible)
}

/// A subgroup `H ≤ K*`, stored by its order; `H = (K*)^{(q-1)/|H|}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetImage {
    field: Field,
    order: usize,
    certified: bool,
}

impl DetImage {
    pub fn full(field: &Field) -> DetImage {
        DetImage { field: field.clone(), order: field.order() - 1, certified: true }
    }

    /// Subgroup generated by the given units.
    pub fn generated_by(field: &Field, gens: &[Elem], certified: bool) -> DetImage {
        let qm1 = field.order() - 1;
        let g = gens.iter().fold(qm1, |acc, &e| gcd(acc, field.log(e)));
        DetImage { field: field.clone(), order: qm1 / g, certified }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `[K* : H]`, the number of SL classes the GL class splits into.
    pub fn index(&self) -> usize {
        (self.field.order() - 1) / self.order
    }

    pub fn is_full(&self) -> bool {
        self.index() == 1
    }

    /// True when the subgroup was established exactly rather than by sampling.
    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn contains(&self, x: Elem) -> bool {
        !x.is_zero() && self.field.log(x).is_multiple_of(self.index())
    }

    pub fn members(&self) -> Vec<Elem> {
        self.field.nonzero().filter(|&x| self.contains(x)).collect()
    }

    /// Smallest element (in field order) of the coset `θH`.
    pub fn canonical(&self, theta: Elem) -> Elem {
        assert!(!theta.is_zero(), "labels live in K*");
        let idx = self.index();
        let r = self.field.log(theta) % idx;
        self.field.nonzero().find(|&x| self.field.log(x) % idx == r).expect("coset is nonempty")
    }

    /// Canonical labels of all cosets, in field order.
    pub fn coset_labels(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.field.nonzero().map(|x| self.canonical(x)).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `{det X : X invertible, XA = AX}`.
pub fn centralizer_det_image(a: &Matrix) -> DetImage {
    centralizer_det_image_seeded(a, DEFAULT_SEED)
}

/// Random units give a lower bound that is exact once it reaches `K*`; otherwise
/// the centralizer algebra is enumerated when small enough, and the sampled
/// subgroup is returned uncertified when it is not.
pub fn centralizer_det_image_seeded(a: &Matrix, seed: u64) -> DetImage {
    let f = a.field().clone();
    let qm1 = f.order() - 1;
    if qm1 == 1 {
        return DetImage::full(&f);
    }
    let basis = centralizer_basis(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = qm1;
    let mut units = 0;
    let mut draws = 0;
    while units < UNIT_SAMPLES && draws < 64 * UNIT_SAMPLES {
        draws += 1;
        let d = random_combination(&f, &basis, &mut rng).det();
        if d.is_zero() {
            continue;
        }
        units += 1;
        g = gcd(g, f.log(d));
        if g == 1 {
            return DetImage::full(&f);
        }
    }
    let size = (f.order() as f64).powi(basis.len() as i32);
    if size <= EXHAUSTIVE_ALGEBRA_BOUND {
        let total = (f.order() as u64).pow(basis.len() as u32);
        for c in 1..total {
            let d = combine(&f, &basis, &index_vector(&f, basis.len(), c)).det();
            if !d.is_zero() {
                g = gcd(g, f.log(d));
                if g == 1 {
                    break;
                }
            }
        }
        return DetImage { field: f, order: qm1 / g, certified: true };
    }
    DetImage { field: f, order: qm1 / g, certified: false }
}
