use rand_chacha::ChaCha8Rng;

use super::{check_same_shape, conj, finish, random_invertible, Trail, WitnessError, WitnessPair};
use crate::classes::{Class, SimilarityClass};
use crate::field::Elem;
use crate::linalg::Matrix;

const SEARCH_ATTEMPTS: usize = 20_000;
const EXHAUSTIVE_BOUND: u64 = 1 << 20;

/// Whether `tr(ΩΨ)` is all of K, and the single missing value when it is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceDichotomy {
    pub full: bool,
    pub excluded: Option<Elem>,
}

fn check_2x2(o: &SimilarityClass, p: &SimilarityClass) -> Result<(), WitnessError> {
    check_same_shape(o, p)?;
    if o.n() != 2 {
        return Err(WitnessError::Mismatch(format!("expected 2x2 classes, got n = {}", o.n())));
    }
    Ok(())
}

/// Roots `(α, λ)` of `μ(Ω)`, with `α = λ` in the primary case.
fn roots(o: &SimilarityClass) -> Result<(Elem, Elem), WitnessError> {
    let r = o.minpoly().roots();
    match r.as_slice() {
        [a] => Ok((*a, *a)),
        [a, l] => Ok((*a, *l)),
        _ => Err(WitnessError::IrreducibleOmega),
    }
}

/// Full iff Ω is not primary or Ψ is not irreducible; otherwise `α·trΨ` is missing.
pub fn trace_dichotomy_2x2(o: &SimilarityClass, p: &SimilarityClass) -> Result<TraceDichotomy, WitnessError> {
    check_2x2(o, p)?;
    let (alpha, lambda) = roots(o)?;
    if alpha != lambda || !p.is_irreducible() {
        return Ok(TraceDichotomy { full: true, excluded: None });
    }
    let f = o.field();
    Ok(TraceDichotomy { full: false, excluded: Some(f.mul(alpha, p.trace())) })
}

/// Witness from the two explicit product templates; Ω must have an eigenvalue in K.
pub fn witness_2x2(o: &SimilarityClass, p: &SimilarityClass, tau: Elem) -> Result<WitnessPair, WitnessError> {
    check_2x2(o, p)?;
    let mut trail = Trail::default();
    let pair = build(o, p, tau, &mut trail)?;
    finish(Class::Similarity(o.clone()), Class::Similarity(p.clone()), tau, pair, trail)
}

pub(crate) fn build(
    o: &SimilarityClass,
    p: &SimilarityClass,
    tau: Elem,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let f = o.field().clone();
    let (alpha, lambda) = roots(o)?;
    let s = p.trace();
    trail.step("two-by-two");
    // [[α,0],[μ,λ]]·[[0,1],[-d,s]] has trace μ + λs; μ = 0 is only allowed when α ≠ λ.
    let mu = f.sub(tau, f.mul(lambda, s));
    if alpha != lambda || !mu.is_zero() {
        let w = Matrix::from_rows(&f, &[vec![alpha, Elem::ZERO], vec![mu, lambda]])?;
        return Ok((w, Matrix::companion(p.minpoly())));
    }
    // [[α,1],[0,α]]·[[s-ε,ρ],[0,ε]] has trace αs; needs a root ε of μ(Ψ).
    let Some(&eps) = p.minpoly().roots().first() else {
        return Err(WitnessError::TraceExcluded { value: tau, text: f.format(tau) });
    };
    let other = f.sub(s, eps);
    let rho = if other == eps { Elem::ONE } else { Elem::ZERO };
    let w = Matrix::from_rows(&f, &[vec![alpha, Elem::ONE], vec![Elem::ZERO, alpha]])?;
    let q = Matrix::from_rows(&f, &[vec![other, rho], vec![Elem::ZERO, eps]])?;
    Ok((w, q))
}

/// Any 2x2 pair: swaps when only Ψ has an eigenvalue, searches when neither does.
pub(crate) fn build_any(
    o: &SimilarityClass,
    p: &SimilarityClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    if !o.minpoly().roots().is_empty() {
        return build(o, p, tau, trail);
    }
    if !p.minpoly().roots().is_empty() {
        let (q, w) = build(p, o, tau, trail)?;
        return Ok((w, q));
    }
    trail.step("two-by-two-search");
    let f = o.field().clone();
    let w = Matrix::companion(o.minpoly());
    let base = Matrix::companion(p.minpoly());
    let hit = |x: &Matrix| -> Option<Matrix> {
        let q = conj(&base, x).ok()?;
        (w.trace_of_product(&q) == tau).then_some(q)
    };
    for _ in 0..SEARCH_ATTEMPTS {
        if let Some(q) = hit(&random_invertible(&f, 2, rng)) {
            return Ok((w, q));
        }
    }
    let qn = f.order() as u64;
    if qn.pow(4) <= EXHAUSTIVE_BOUND {
        for code in 0..qn.pow(4) {
            let mut c = code;
            let data = (0..4)
                .map(|_| {
                    let e = f.elem((c % qn) as usize);
                    c /= qn;
                    e
                })
                .collect();
            let x = Matrix::from_vec(&f, 2, 2, data);
            if !x.is_invertible() {
                continue;
            }
            if let Some(q) = hit(&x) {
                return Ok((w, q));
            }
        }
    }
    Err(WitnessError::ConstructionFailed(format!(
        "no conjugate of {} has trace {} against {}",
        p.to_text(),
        f.format(tau),
        o.to_text()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn class(f: &Field, s: &str) -> SimilarityClass {
        SimilarityClass::parse(f, s).unwrap()
    }

    /// All traces `tr(W·Q)` by exhausting both orbits in M(2, q).
    fn brute_trace_set(o: &SimilarityClass, p: &SimilarityClass) -> Vec<Elem> {
        let f = o.field();
        let qn = f.order();
        let all: Vec<Matrix> = (0..qn.pow(4))
            .map(|mut c| {
                let data = (0..4)
                    .map(|_| {
                        let e = f.elem(c % qn);
                        c /= qn;
                        e
                    })
                    .collect();
                Matrix::from_vec(f, 2, 2, data)
            })
            .collect();
        let ws: Vec<&Matrix> = all.iter().filter(|m| o.contains(m)).collect();
        let qs: Vec<&Matrix> = all.iter().filter(|m| p.contains(m)).collect();
        let mut seen = vec![false; qn];
        for w in &ws {
            for q in &qs {
                seen[w.trace_of_product(q).index()] = true;
            }
        }
        f.elements().filter(|e| seen[e.index()]).collect()
    }

    #[test]
    fn unipotent_against_irreducible_over_gf3() {
        let f3 = Field::prime(3).unwrap();
        let o = class(&f3, "(x-1)^2");
        let p = class(&f3, "x^2+1");
        assert!(matches!(
            witness_2x2(&o, &p, Elem::ZERO),
            Err(WitnessError::TraceExcluded { value, .. }) if value == Elem::ZERO
        ));
        for t in [1, 2] {
            let w = witness_2x2(&o, &p, f3.from_int(t)).unwrap();
            assert_eq!(w.product().trace(), f3.from_int(t));
        }
        assert_eq!(brute_trace_set(&o, &p), vec![f3.from_int(1), f3.from_int(2)]);
    }

    #[test]
    fn not_primary_is_full_over_gf2() {
        let f2 = Field::prime(2).unwrap();
        let o = class(&f2, "x^2+x");
        let p = class(&f2, "x^2+x+1");
        for t in f2.elements() {
            witness_2x2(&o, &p, t).unwrap();
        }
        assert_eq!(trace_dichotomy_2x2(&o, &p).unwrap(), TraceDichotomy { full: true, excluded: None });
    }

    #[test]
    fn template_trace_formula() {
        // [[α,0],[μ,λ]]·[[0,1],[γ,δ]] with λ = δ = 0 has trace μ.
        let f5 = Field::prime(5).unwrap();
        let mu = f5.from_int(3);
        let w = Matrix::from_rows(&f5, &[vec![f5.from_int(2), Elem::ZERO], vec![mu, Elem::ZERO]]).unwrap();
        let q = Matrix::from_ints(&f5, &[&[0, 1], &[4, 0]]);
        assert_eq!(w.trace_of_product(&q), mu);
    }

    #[test]
    fn dichotomy_examples() {
        let f5 = Field::prime(5).unwrap();
        let p = class(&f5, "x^2+2");
        assert!(p.is_irreducible());
        let d = trace_dichotomy_2x2(&class(&f5, "(x-1)^2"), &p).unwrap();
        assert_eq!(d, TraceDichotomy { full: false, excluded: Some(p.trace()) });
        let f3 = Field::prime(3).unwrap();
        let d = trace_dichotomy_2x2(&class(&f3, "(x-1)^2"), &class(&f3, "(x-1)*(x-2)")).unwrap();
        assert!(d.full);
        assert!(matches!(
            trace_dichotomy_2x2(&class(&f3, "x^2+1"), &class(&f3, "(x-1)^2")),
            Err(WitnessError::IrreducibleOmega)
        ));
    }

    #[test]
    fn dichotomy_matches_brute_force() {
        for q in [2u64, 3] {
            let f = Field::prime(q).unwrap();
            let classes: Vec<SimilarityClass> = crate::classes::enumerate_chains(2, &f)
                .unwrap()
                .into_iter()
                .map(SimilarityClass::new)
                .filter(|c| !c.is_scalar())
                .collect();
            for o in classes.iter().filter(|c| !c.minpoly().roots().is_empty()) {
                for p in &classes {
                    let brute = brute_trace_set(o, p);
                    let d = trace_dichotomy_2x2(o, p).unwrap();
                    let expected: Vec<Elem> = f.elements().filter(|&e| Some(e) != d.excluded).collect();
                    assert_eq!(brute, expected, "{} {}", o.to_text(), p.to_text());
                    for t in f.elements() {
                        assert_eq!(witness_2x2(o, p, t).is_ok(), brute.contains(&t));
                    }
                }
            }
        }
    }
}
