use rand_chacha::ChaCha8Rng;

use super::block::steer_trace;
use super::embed::sourour_embed;
use super::{check_same_shape, conj, conjugator, finish, random_invertible, rng, two_by_two, Trail};
use super::{WitnessError, WitnessPair};
use crate::classes::{Class, SimilarityClass};
use crate::field::Elem;
use crate::linalg::{charpoly, Matrix};
use rand::Rng;

const CORNER_ATTEMPTS: usize = 20_000;

/// `C(μ) ⊕ (companions of the remaining invariant factors)`.
pub(crate) fn minpoly_first(c: &SimilarityClass) -> (Matrix, Matrix) {
    let f = c.field();
    let chain = c.factors().chain();
    let (last, rest) = chain.split_last().expect("nonempty chain");
    let blocks: Vec<Matrix> = rest.iter().map(Matrix::companion).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    (Matrix::companion(last), Matrix::direct_sum(f, &refs))
}

fn distinct_roots_2x2(a: &Matrix) -> bool {
    charpoly(a).roots().len() == 2
}

/// A member of Ω whose top-left 2×2 block has two distinct eigenvalues in K.
fn plant_corner(
    o: &SimilarityClass,
    w0: &Matrix,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<Matrix, WitnessError> {
    let f = o.field().clone();
    let n = o.n();
    if o.minpoly().deg() >= 3 {
        // Basis e0, e1, e2 - e1, e3, … turns the leading companion into [[0,1],[0,1]].
        let mut b = Matrix::identity(&f, n);
        b[(2, 1)] = f.neg(Elem::ONE);
        trail.step("corner-basis");
        let x = b.inverse()?;
        trail.conj("corner", &x);
        return conj(w0, &x);
    }
    if n >= 4 && o.minimal_rank() >= 2 {
        let target = Matrix::diag(&f, &[Elem::ZERO, Elem::ONE]);
        match sourour_embed(w0, &target, rng.gen()) {
            Ok(t) => {
                trail.step("corner-embed");
                trail.conj("corner", &t);
                return conj(w0, &t);
            }
            Err(WitnessError::EmbedSearchFailed(_)) => {}
            Err(e) => return Err(e),
        }
    }
    trail.step("corner-search");
    for _ in 0..CORNER_ATTEMPTS {
        let x = random_invertible(&f, n, rng);
        let w = conj(w0, &x)?;
        if distinct_roots_2x2(&w.submatrix(0, 0, 2, 2)) {
            trail.conj("corner", &x);
            return Ok(w);
        }
    }
    Err(WitnessError::ConstructionFailed(format!("no member of {} has a split 2x2 corner", o.to_text())))
}

/// Assumes `deg μ(Ψ) ≤ deg μ(Ω)`.
fn build_ordered(
    o: &SimilarityClass,
    p: &SimilarityClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    let n = o.n();
    let r = p.minpoly().deg();
    let (big, rest) = minpoly_first(o);
    let w0 = big.oplus(&rest);
    let (rr, s) = minpoly_first(p);
    let q0 = rr.oplus(&s);
    let w1 = if r >= 3 { w0 } else { plant_corner(o, &w0, rng, trail)? };
    let a = w1.submatrix(0, 0, r, r);
    let d = w1.submatrix(r, r, n - r, n - r);
    let t = f.sub(tau, d.trace_of_product(&s));
    let (a2, r2) = if r >= 3 {
        trail.step("block-factor");
        steer_trace(&charpoly(&a), p.minpoly(), t)?
    } else {
        let ca = SimilarityClass::of_matrix(&a).map_err(|e| WitnessError::InternalInconsistency(e.to_string()))?;
        two_by_two::build(&ca, &SimilarityClass::cyclic(p.minpoly()), t, trail)?
    };
    let x1 = conjugator(&a, &a2)?.oplus(&Matrix::identity(&f, n - r));
    let x2 = conjugator(&rr, &r2)?.oplus(&Matrix::identity(&f, n - r));
    trail.conj("omega", &x1);
    trail.conj("psi", &x2);
    Ok((conj(&w1, &x1)?, conj(&q0, &x2)?))
}

pub(crate) fn build(
    o: &SimilarityClass,
    p: &SimilarityClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    if o.n() < 3 {
        return Err(WitnessError::HypothesisViolated(format!("need n >= 3, got {}", o.n())));
    }
    trail.step("similarity-classes");
    if p.minpoly().deg() <= o.minpoly().deg() {
        build_ordered(o, p, tau, rng, trail)
    } else {
        let (q, w) = build_ordered(p, o, tau, rng, trail)?;
        Ok((w, q))
    }
}

/// Any trace for two nonscalar similarity classes with `n ≥ 3`.
///
/// Puts `Q = R ⊕ S` with `R` the companion of `μ(Ψ)` and a cyclic block `A` in
/// the corner of `W`; then `tr(WQ) = tr(A^X R) + tr(DS)` and only the first
/// term moves under `X ⊕ I`.
pub fn theorem1_witness(
    o: &SimilarityClass,
    p: &SimilarityClass,
    tau: Elem,
    seed: u64,
) -> Result<WitnessPair, WitnessError> {
    check_same_shape(o, p)?;
    let mut trail = Trail::default();
    let pair = build(o, p, tau, &mut rng(seed), &mut trail)?;
    finish(Class::Similarity(o.clone()), Class::Similarity(p.clone()), tau, pair, trail)
}
