use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::block::{lemma22_factor, steer_trace};
use super::embed::sourour_embed;
use super::normal_form::interleave_form;
use super::{
    check_same_shape, conj, conjugator, finish, label_fix, label_of, random_matrix, rng, similarity, two_by_two,
    Trail, WitnessError, WitnessPair,
};
use crate::classes::{label_diag, Class, SimilarityClass, SlClass};
use crate::field::{Elem, Field};
use crate::linalg::{charpoly, lu_decompose, InvariantFactors, Matrix};
use crate::poly::Poly;

/// Random candidates tried for the normalizing block `M`.
const NORMALIZE_ATTEMPTS: usize = 20_000;

fn inconsistent(msg: impl Into<String>) -> WitnessError {
    WitnessError::InternalInconsistency(msg.into())
}

fn class_of_block(a: &Matrix) -> Result<SimilarityClass, WitnessError> {
    SimilarityClass::of_matrix(a).map_err(|e| inconsistent(e.to_string()))
}

/// `X` with `X⁻¹AX` having entries `A[σ(i)][σ(j)]`.
fn permutation(f: &Field, sigma: &[usize]) -> Matrix {
    let n = sigma.len();
    let mut x = Matrix::zeros(f, n, n);
    for (i, &s) in sigma.iter().enumerate() {
        x[(s, i)] = Elem::ONE;
    }
    x
}

/// `I + (c-1)·A^{r-1}` for `A = C(x^{r-1}(x-1))`: commutes with `A`, determinant `c`.
fn corner_unit(a: &Matrix, c: Elem) -> Matrix {
    let f = a.field();
    let r = a.rows();
    let proj = a.pow(r as u64 - 1);
    Matrix::identity(f, r).add(&proj.scale(f.sub(c, Elem::ONE)))
}

/// Both labels set by a simultaneous conjugation of a witness for the closures.
pub(crate) fn build_via_closure(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let (w, q) = similarity::build(o.closure(), p.closure(), tau, rng, trail)?;
    // One class equals its closure, so moving the other's label is enough.
    let g = if !p.is_full() { label_fix(p, &q)? } else { label_fix(o, &w)? };
    trail.step("label-shift");
    trail.conj("simultaneous", &g);
    Ok((conj(&w, &g)?, conj(&q, &g)?))
}

/// `λ ⊕ M` with `M` LU-admissible, `M - λI` nonsingular and `λ·det M = d`.
fn normal_target(f: &Field, m: usize, d: Elem, rng: &mut ChaCha8Rng) -> Result<(Elem, Matrix), WitnessError> {
    let admissible = |mm: &Matrix| -> Option<Elem> {
        let det = mm.det();
        if det.is_zero() || lu_decompose(mm).is_err() {
            return None;
        }
        let lambda = f.div(d, det);
        mm.sub_scalar(lambda).is_invertible().then_some(lambda)
    };
    for mu in f.nonzero() {
        let mm = Matrix::scalar(f, m - 1, mu);
        if let Some(l) = admissible(&mm) {
            return Ok((l, mm));
        }
    }
    for _ in 0..NORMALIZE_ATTEMPTS {
        let mm = random_matrix(f, m - 1, m - 1, rng);
        if let Some(l) = admissible(&mm) {
            return Ok((l, mm));
        }
    }
    Err(WitnessError::ConstructionFailed(format!("no normalizing block of size {} over GF({})", m - 1, f.order())))
}

/// `Z₁ ∈ C(h1)`, `Z₂ ∈ C(h2)` with `Z₁Z₂ = λ ⊕ M`.
///
/// The block factorization gives `[[λ, z], [0, M]]`; conjugating by
/// `[[1, w], [0, I]]` with `w = z(M - λI)⁻¹` clears `z`.
fn split_cf(lambda: Elem, mm: &Matrix, h1: &Poly, h2: &Poly) -> Result<(Matrix, Matrix), WitnessError> {
    let f = mm.field();
    let b = lemma22_factor(h1, h2, mm)?;
    if b.delta != lambda {
        return Err(inconsistent("corner scalar differs from the normalized one"));
    }
    let w = mm.sub_scalar(lambda).inverse()?.vec_mul(&b.z);
    let m = mm.rows() + 1;
    let mut p = Matrix::identity(f, m);
    for (j, &x) in w.iter().enumerate() {
        p[(0, j + 1)] = x;
    }
    let z1 = conj(&b.w, &p)?;
    let z2 = conj(&b.q, &p)?;
    let target = Matrix::diag(f, &[lambda]).oplus(mm);
    if z1.mul(&z2) != target {
        return Err(inconsistent("split product is not block diagonal"));
    }
    Ok((z1, z2))
}

/// `R, S` with `C^R F^S = λ ⊕ M`; returns `(R, S, λ, M)`.
fn normalize_cf(
    c: &Matrix,
    fm: &Matrix,
    rng: &mut ChaCha8Rng,
) -> Result<(Matrix, Matrix, Elem, Matrix), WitnessError> {
    let f = c.field();
    let m = c.rows();
    let d = f.mul(c.det(), fm.det());
    let (lambda, mm) = normal_target(f, m, d, rng)?;
    let (c2, f2) = split_cf(lambda, &mm, &charpoly(c), &charpoly(fm))?;
    Ok((conjugator(c, &c2)?, conjugator(fm, &f2)?, lambda, mm))
}

fn trace_zero_poly(f: &Field, m: usize, det: Elem) -> Poly {
    // x^m + c0 with c0 = (-1)^m det
    let mut c = vec![Elem::ZERO; m + 1];
    c[m] = Elem::ONE;
    c[0] = if m.is_multiple_of(2) { det } else { f.neg(det) };
    Poly::new(f, c)
}

fn trace_det_poly(f: &Field, m: usize, trace: Elem, det: Elem) -> Poly {
    let mut p = trace_zero_poly(f, m, det).coeffs().to_vec();
    p[m - 1] = f.add(p[m - 1], f.neg(trace));
    Poly::new(f, p)
}

pub(crate) fn build_cyclic_even(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    let n = o.n();
    let m = n / 2;
    trail.step("sl-cyclic-even");
    trail.step("interleave");
    let w1 = interleave_form(&Matrix::companion(o.closure().minpoly()))?.form;
    let qf = interleave_form(&Matrix::companion(p.closure().minpoly()))?.form;
    let swap: Vec<usize> = (0..n).map(|i| (i + m) % n).collect();
    let q1 = conj(&qf, &permutation(&f, &swap))?;
    let c = w1.submatrix(m, 0, m, m);
    let fm = q1.submatrix(0, m, m, m);
    let (r, s, lambda, mm) = normalize_cf(&c, &fm, rng)?;
    trail.step("block-factor");
    let w2 = conj(&w1, &r.oplus(&r))?;
    let q2 = conj(&q1, &s.oplus(&s))?;
    let g_w = label_of(o, &w2)?;
    let g_q = label_of(p, &q2)?;
    let delta = f.div(o.label(), g_w);
    let eps = f.div(g_q, p.label());
    let ed = f.mul(eps, delta);
    let dcf = f.mul(c.det(), fm.det());
    let h1 = trace_zero_poly(&f, m, ed);
    let h2 = trace_det_poly(&f, m, tau, f.div(dcf, ed));
    let (z1, _z2) = split_cf(lambda, &mm, &h1, &h2)?;
    let x = label_diag(&f, m, delta);
    let y = x.inverse()?.mul(&z1);
    let sx = Matrix::identity(&f, m).oplus(&x);
    let ty = Matrix::identity(&f, m).oplus(&y.inverse()?);
    trail.conj("omega", &sx);
    trail.conj("psi", &ty);
    Ok((conj(&w2, &sx)?, conj(&q2, &ty)?))
}

pub(crate) fn build_cyclic_odd(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    let n = o.n();
    let m = n / 2;
    trail.step("sl-cyclic-odd");
    trail.step("interleave");
    let w1 = interleave_form(&Matrix::companion(o.closure().minpoly()))?.form;
    let qf = interleave_form(&Matrix::companion(p.closure().minpoly()))?.form;
    // Reverse the block order: [[E, q, F], [p, γ, 0], [I, 0, 0]].
    let rev: Vec<usize> = (0..n)
        .map(|i| match i.cmp(&m) {
            std::cmp::Ordering::Less => i + m + 1,
            std::cmp::Ordering::Equal => m,
            std::cmp::Ordering::Greater => i - m - 1,
        })
        .collect();
    let q1 = conj(&qf, &permutation(&f, &rev))?;
    let c = w1.submatrix(m + 1, 0, m, m);
    let fm = q1.submatrix(0, m + 1, m, m);
    let (r, s, lambda, mm) = normalize_cf(&c, &fm, rng)?;
    trail.step("block-factor");
    let one = Matrix::identity(&f, 1);
    let w2 = conj(&w1, &Matrix::direct_sum(&f, &[&r, &one, &r]))?;
    let q2 = conj(&q1, &Matrix::direct_sum(&f, &[&s, &one, &s]))?;
    let mid = |c: Elem| {
        let mut d = vec![Elem::ONE; n];
        d[m] = c;
        Matrix::diag(&f, &d)
    };
    let w3 = conj(&w2, &mid(f.div(o.label(), label_of(o, &w2)?)))?;
    let q3 = conj(&q2, &mid(f.div(p.label(), label_of(p, &q2)?)))?;
    let beta = w3[(m, m)];
    let gamma = q3[(m, m)];
    let dcf = f.mul(c.det(), fm.det());
    let h1 = trace_zero_poly(&f, m, Elem::ONE);
    let h2 = trace_det_poly(&f, m, f.sub(tau, f.mul(beta, gamma)), dcf);
    let (x, _z) = split_cf(lambda, &mm, &h1, &h2)?;
    let t = Matrix::identity(&f, m + 1).oplus(&x);
    trail.conj("omega", &t);
    Ok((conj(&w3, &t)?, q3))
}

/// `(λ, J₃(λ))` for a class whose elementary divisors are all non-irreducible.
fn sl3_jordan_scalar(c: &SlClass) -> Result<Elem, WitnessError> {
    let cl = c.closure();
    if cl.has_irreducible_elementary_divisor() {
        return Err(inconsistent(format!("{} has an irreducible elementary divisor", cl.to_text())));
    }
    match (cl.is_cyclic(), cl.eigenvalues().as_slice()) {
        (true, [l]) if cl.minpoly().deg() == 3 => Ok(*l),
        _ => Err(inconsistent(format!("{} is not a regular Jordan class", cl.to_text()))),
    }
}

/// Upper triangular member of the class, `[[A, b], [0, λ]]` with `μ(A) = (x-λ)²`.
fn sl3_member(c: &SlClass, lambda: Elem) -> Result<Matrix, WitnessError> {
    let j = Matrix::jordan(c.field(), 3, lambda);
    conj(&j, &label_fix(c, &j)?)
}

pub(crate) fn build_sl3(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    _rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    trail.step("sl3");
    let (lo, lp) = (sl3_jordan_scalar(o)?, sl3_jordan_scalar(p)?);
    let w0 = sl3_member(o, lo)?;
    let q0 = sl3_member(p, lp)?;
    let a = w0.submatrix(0, 0, 2, 2);
    let at = q0.submatrix(0, 0, 2, 2);
    // tr = tr(A^X Ã) + λμ once the corners are conjugated by X ⊕ det(X)⁻¹.
    let t = f.sub(tau, f.mul(lo, lp));
    let (a2, at2) = two_by_two::build(&class_of_block(&a)?, &class_of_block(&at)?, t, trail)?;
    let lift = |x: Matrix| -> Matrix {
        let d = f.inv(x.det());
        x.oplus(&Matrix::diag(&f, &[d]))
    };
    let g1 = lift(conjugator(&a, &a2)?);
    let g2 = lift(conjugator(&at, &at2)?);
    trail.conj("omega", &g1);
    trail.conj("psi", &g2);
    Ok((conj(&w0, &g1)?, conj(&q0, &g2)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sl43Kind {
    /// Powers of an irreducible quadratic.
    Irreducible,
    /// `J₄(a)` or `J₂(a) ⊕ J₂(b)`.
    Unipotent,
}

fn gl2(f: &Field) -> Vec<Matrix> {
    let q = f.order();
    (0..q.pow(4))
        .map(|mut c| {
            let data = (0..4)
                .map(|_| {
                    let e = f.elem(c % q);
                    c /= q;
                    e
                })
                .collect();
            Matrix::from_vec(f, 2, 2, data)
        })
        .filter(Matrix::is_invertible)
        .collect()
}

/// Block upper triangular `[[A, *], [0, D]]` with indecomposable 2×2 diagonal blocks.
fn sl43_member(c: &SlClass) -> Result<(Sl43Kind, Matrix), WitnessError> {
    let cl = c.closure();
    let f = cl.field();
    if cl.has_irreducible_elementary_divisor() {
        return Err(inconsistent(format!("{} has an irreducible elementary divisor", cl.to_text())));
    }
    let eds = cl.factors().elementary_divisors();
    let (kind, base) = match eds.as_slice() {
        [(g, 4)] if g.deg() == 1 => (Sl43Kind::Unipotent, Matrix::jordan(f, 4, g.roots()[0])),
        [(g, 2), (h, 2)] if g.deg() == 1 && h.deg() == 1 => (
            Sl43Kind::Unipotent,
            Matrix::jordan(f, 2, g.roots()[0]).oplus(&Matrix::jordan(f, 2, h.roots()[0])),
        ),
        [(g, 2)] if g.deg() == 2 => {
            let cg = Matrix::companion(g);
            let mut first = Matrix::zeros(f, 2, 2);
            first[(1, 0)] = Elem::ONE;
            let candidates = std::iter::once(first).chain((1..f.order().pow(4)).map(|mut k| {
                let data = (0..4)
                    .map(|_| {
                        let e = f.elem(k % f.order());
                        k /= f.order();
                        e
                    })
                    .collect();
                Matrix::from_vec(f, 2, 2, data)
            }));
            let mut found = None;
            for e in candidates {
                let mut w = cg.oplus(&cg);
                w.set_block(0, 2, &e);
                if cl.contains(&w) {
                    found = Some(w);
                    break;
                }
            }
            (Sl43Kind::Irreducible, found.ok_or_else(|| inconsistent("no cyclic coupling block"))?)
        }
        _ => return Err(inconsistent(format!("unexpected class {} in SL(4,3)", cl.to_text()))),
    };
    let w = conj(&base, &label_fix(c, &base)?)?;
    Ok((kind, w))
}

pub(crate) fn build_sl43(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let (ko, w0) = sl43_member(o)?;
    let (kp, q0) = sl43_member(p)?;
    if ko == Sl43Kind::Unipotent && kp == Sl43Kind::Irreducible {
        let (q, w) = build_sl43(p, o, tau, trail)?;
        return Ok((w, q));
    }
    trail.step("sl4-over-gf3");
    let f = o.field().clone();
    let all = gl2(&f);
    let sl: Vec<&Matrix> = all.iter().filter(|x| x.det() == Elem::ONE).collect();
    let id = Matrix::identity(&f, 2);
    // Conjugators X ⊕ Y of determinant one keep both the block shape and the label.
    let family: Vec<Matrix> = match (ko, kp) {
        (Sl43Kind::Irreducible, Sl43Kind::Irreducible) => sl.iter().map(|x| x.oplus(&id)).collect(),
        (Sl43Kind::Unipotent, Sl43Kind::Unipotent) => all
            .iter()
            .map(|x| x.oplus(&Matrix::diag(&f, &[Elem::ONE, f.inv(x.det())])))
            .collect(),
        _ => sl.iter().flat_map(|x| sl.iter().map(move |y| x.oplus(y))).collect(),
    };
    let general = all.iter().flat_map(|x| {
        let d = f.inv(x.det());
        all.iter().filter(move |y| y.det() == d).map(move |y| x.oplus(y))
    });
    for g in family.into_iter().chain(general) {
        let w = conj(&w0, &g)?;
        if w.trace_of_product(&q0) == tau {
            trail.conj("omega", &g);
            return Ok((w, q0));
        }
    }
    Err(WitnessError::ConstructionFailed(format!(
        "no block conjugate reaches trace {} for {} and {}",
        f.format(tau),
        o.to_text(),
        p.to_text()
    )))
}

/// Smallest elementary divisor `f^e` whose prime occurs at least twice.
fn split_off_cyclic(c: &SimilarityClass) -> Option<(Poly, InvariantFactors)> {
    let eds = c.factors().elementary_divisors();
    let idx = (0..eds.len())
        .filter(|&i| eds.iter().filter(|(g, _)| *g == eds[i].0).count() >= 2)
        .min_by_key(|&i| (eds[i].0.deg() * eds[i].1 as usize, i))?;
    let (g, e) = eds[idx].clone();
    let rest: Vec<(Poly, u32)> = eds.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, d)| d.clone()).collect();
    Some((g.pow(e), InvariantFactors::from_elementary_divisors(c.field(), &rest)))
}

/// Ψ noncyclic: `Q = R ⊕ S`, a corner `A` with a simple eigenvalue planted in `W`,
/// and `tr(A^X R)` steered with `det X = 1`.
pub(crate) fn build_general(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    let n = o.n();
    trail.step("sl-general");
    let (psi1, rest) = split_off_cyclic(p.closure())
        .ok_or_else(|| WitnessError::HypothesisViolated(format!("{} is cyclic", p.to_text())))?;
    let r = psi1.deg();
    if r < 2 || 2 * r > n {
        return Err(WitnessError::HypothesisViolated(format!("cyclic summand of size {r} for n = {n}")));
    }
    let rr = Matrix::companion(&psi1);
    let q0 = rr.oplus(&rest.representative());
    let fix = Matrix::identity(&f, r).oplus(&label_diag(&f, n - r, f.div(p.label(), label_of(p, &q0)?)));
    let q1 = conj(&q0, &fix)?;
    let s = q1.submatrix(r, r, n - r, n - r);
    let mr = o.closure().minimal_rank();
    if 2 * mr < n {
        return Err(WitnessError::MrTooSmall { mr, n });
    }
    // C(x^{r-1}(x-1)): eigenvalue 1 is simple, so its centralizer has every determinant.
    let a = Matrix::companion(&Poly::x(&f).pow(r as u32 - 1).mul(&Poly::linear(&f, Elem::ONE)));
    let w0 = o.closure().representative();
    let t0 = sourour_embed(&w0, &a, rng.gen())?;
    trail.step("corner-embed");
    trail.conj("corner", &t0);
    let w1 = conj(&w0, &t0)?;
    let z = corner_unit(&a, f.div(o.label(), label_of(o, &w1)?)).oplus(&Matrix::identity(&f, n - r));
    let w2 = conj(&w1, &z)?;
    let d = w2.submatrix(r, r, n - r, n - r);
    let t = f.sub(tau, d.trace_of_product(&s));
    let (a2, r2) = if r >= 3 {
        trail.step("block-factor");
        steer_trace(&charpoly(&a), &psi1, t)?
    } else {
        two_by_two::build(&class_of_block(&a)?, &SimilarityClass::cyclic(&psi1), t, trail)?
    };
    let y = conjugator(&a, &a2)?.mul(&conjugator(&rr, &r2)?.inverse()?);
    let x = corner_unit(&a, f.inv(y.det())).mul(&y);
    debug_assert_eq!(x.det(), Elem::ONE);
    let g = x.oplus(&Matrix::identity(&f, n - r));
    trail.conj("omega", &g);
    Ok((conj(&w2, &g)?, q1))
}

fn check_sl(o: &SlClass, p: &SlClass) -> Result<(), WitnessError> {
    check_same_shape(o.closure(), p.closure())
}

fn run(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    seed: u64,
    build: impl FnOnce(&SlClass, &SlClass, Elem, &mut ChaCha8Rng, &mut Trail) -> Result<(Matrix, Matrix), WitnessError>,
) -> Result<WitnessPair, WitnessError> {
    let mut trail = Trail::default();
    let pair = build(o, p, tau, &mut rng(seed), &mut trail)?;
    finish(Class::Sl(o.clone()), Class::Sl(p.clone()), tau, pair, trail)
}

/// Cyclic classes of `SL(2m, K)` with `m ≥ 2`, and `m ≥ 3` when `|K| ≤ 3`.
///
/// `W = [[0, I], [C, D]]`, `Q = [[E, F], [I, 0]]`; after normalizing
/// `CF = λ ⊕ M` and splitting it as `Z₁Z₂` with `tr Z₁ = 0`, `tr Z₂ = τ`,
/// the conjugated product is `[[XY, 0], [*, X⁻¹CFY⁻¹]]` with `XY = Z₁`.
pub fn sl_cyclic_even(o: &SlClass, p: &SlClass, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_sl(o, p)?;
    let (n, q) = (o.n(), o.field().order());
    if !o.closure().is_cyclic() || !p.closure().is_cyclic() {
        return Err(WitnessError::HypothesisViolated("both classes must be cyclic".into()));
    }
    if n % 2 != 0 || n < 4 || (q <= 3 && n < 6) {
        return Err(WitnessError::HypothesisViolated(format!("SL({n}, {q}) is outside the even cyclic case")));
    }
    run(o, p, tau, seed, build_cyclic_even)
}

/// Cyclic classes of `SL(2m+1, K)` with `m ≥ 2` and `|K| ≥ 4`.
///
/// The product `W^T Q` is `[[X, 0, 0], [*, βγ, 0], [*, *, Z]]` with `tr X = 0`,
/// `det X = 1` and `tr Z = τ - βγ`.
pub fn sl_cyclic_odd(o: &SlClass, p: &SlClass, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_sl(o, p)?;
    let (n, q) = (o.n(), o.field().order());
    if !o.closure().is_cyclic() || !p.closure().is_cyclic() {
        return Err(WitnessError::HypothesisViolated("both classes must be cyclic".into()));
    }
    if n % 2 != 1 || n < 5 || q < 4 {
        return Err(WitnessError::HypothesisViolated(format!("SL({n}, {q}) is outside the odd cyclic case")));
    }
    run(o, p, tau, seed, build_cyclic_odd)
}

/// `SL(3, q)`: classes equal to their closure go through the similarity
/// construction; the rest are regular Jordan classes handled blockwise.
pub fn sl3_witness(o: &SlClass, p: &SlClass, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_sl(o, p)?;
    if o.n() != 3 {
        return Err(WitnessError::HypothesisViolated(format!("expected n = 3, got {}", o.n())));
    }
    if o.is_full() || p.is_full() {
        return run(o, p, tau, seed, build_via_closure);
    }
    run(o, p, tau, seed, build_sl3)
}

/// `SL(4, 3)`: upper block triangular members with indecomposable 2×2 blocks.
pub fn sl43_witness(o: &SlClass, p: &SlClass, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_sl(o, p)?;
    if o.n() != 4 || o.field().order() != 3 {
        return Err(WitnessError::HypothesisViolated("expected SL(4, 3)".into()));
    }
    if o.is_full() || p.is_full() {
        return run(o, p, tau, seed, build_via_closure);
    }
    run(o, p, tau, seed, |o, p, t, _, tr| build_sl43(o, p, t, tr))
}

/// `n ≥ 4` with Ψ noncyclic.
pub fn sl_general_witness(o: &SlClass, p: &SlClass, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_sl(o, p)?;
    if o.n() < 4 {
        return Err(WitnessError::HypothesisViolated(format!("expected n >= 4, got {}", o.n())));
    }
    if o.is_full() || p.is_full() {
        return run(o, p, tau, seed, build_via_closure);
    }
    if p.closure().is_cyclic() {
        return Err(WitnessError::HypothesisViolated(format!("{} is cyclic", p.to_text())));
    }
    run(o, p, tau, seed, build_general)
}
