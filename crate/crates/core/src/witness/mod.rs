//! Explicit pairs `(W, Q)` with prescribed classes and `tr(WQ) = τ`.
//!
//! Every builder constructs candidates and checks class membership (invariant
//! factors, plus the SL label) and the trace before returning.

mod block;
mod embed;
mod normal_form;
mod similarity;
mod sl;
mod two_by_two;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classes::{label_diag, Class, SimilarityClass, SlClass};
use crate::field::{Elem, Field};
use crate::linalg::{conjugate, find_conjugator, LinalgError, Matrix};

pub use block::{lemma22_factor, steer_trace, BlockFactor};
pub use embed::sourour_embed;
pub use normal_form::{interleave_form, InterleavedForm};
pub use similarity::theorem1_witness;
pub use sl::{sl3_witness, sl43_witness, sl_cyclic_even, sl_cyclic_odd, sl_general_witness};
pub use two_by_two::{trace_dichotomy_2x2, witness_2x2, TraceDichotomy};

pub const DEFAULT_SEED: u64 = 0x7ace_5eed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("class {0} is scalar")]
    ScalarClass(String),
    #[error("the first class has no eigenvalue in the field")]
    IrreducibleOmega,
    #[error("trace {text} is not attained by this pair of classes")]
    TraceExcluded { value: Elem, text: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("a leading principal minor vanishes")]
    NoLu,
    #[error("linear system for the first row is singular")]
    SolveFailed,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no embedding basis found: {0}")]
    EmbedSearchFailed(String),
    #[error("minimal rank {mr} is below n/2 for n = {n}")]
    MrTooSmall { mr: usize, n: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("matrix is not cyclic")]
    NotCyclic,
    #[error("basis from the cyclic vector is degenerate")]
    DegenerateBasis,
    #[error("inputs do not match: {0}")]
    Mismatch(String),
}

impl From<LinalgError> for WitnessError {
    fn from(e: LinalgError) -> WitnessError {
        match e {
            LinalgError::NoLu => WitnessError::NoLu,
            LinalgError::NotCyclic => WitnessError::NotCyclic,
            other => WitnessError::InternalInconsistency(other.to_string()),
        }
    }
}

/// Step ids and conjugators recorded while a witness is assembled.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trail {
    pub steps: Vec<String>,
    pub conjugators: Vec<(String, Matrix)>,
}

impl Trail {
    pub(crate) fn step(&mut self, id: &str) {
        self.steps.push(id.to_string());
    }

    pub(crate) fn conj(&mut self, what: &str, x: &Matrix) {
        self.conjugators.push((what.to_string(), x.clone()));
    }
}

/// A verified `(W, Q, τ)` with the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    pub omega: Class,
    pub psi: Class,
    pub tau: Elem,
    pub w: Matrix,
    pub q: Matrix,
    pub trail: Trail,
}

impl WitnessPair {
    pub fn product(&self) -> Matrix {
        self.w.mul(&self.q)
    }

    pub fn provenance(&self) -> &[String] {
        &self.trail.steps
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.w.field();
        serde_json::json!({
            "omega": self.omega.to_text(),
            "psi": self.psi.to_text(),
            "group": self.omega.group().to_string(),
            "tau": f.format(self.tau),
            "W": self.w.to_json(),
            "Q": self.q.to_json(),
            "product": self.product().to_json(),
            "trace": f.format(self.product().trace()),
            "provenance": self.trail.steps,
            "conjugators": self.trail.conjugators.iter().map(|(s, m)| serde_json::json!({
                "step": s,
                "matrix": m.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks membership of both matrices and the trace of the product.
pub fn verify_pair(omega: &Class, psi: &Class, tau: Elem, w: &Matrix, q: &Matrix) -> Result<(), WitnessError> {
    if !omega.contains(w) {
        return Err(WitnessError::InternalInconsistency(format!("W is not in {}", omega.to_text())));
    }
    if !psi.contains(q) {
        return Err(WitnessError::InternalInconsistency(format!("Q is not in {}", psi.to_text())));
    }
    if w.trace_of_product(q) != tau {
        return Err(WitnessError::InternalInconsistency("trace of the product is off target".into()));
    }
    Ok(())
}

pub(crate) fn finish(
    omega: Class,
    psi: Class,
    tau: Elem,
    (w, q): (Matrix, Matrix),
    trail: Trail,
) -> Result<WitnessPair, WitnessError> {
    verify_pair(&omega, &psi, tau, &w, &q)?;
    Ok(WitnessPair { omega, psi, tau, w, q, trail })
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    f.elem(rng.gen_range(0..f.order()))
}

pub(crate) fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| random_elem(f, rng)).collect();
    Matrix::from_vec(f, rows, cols, data)
}

pub(crate) fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let x = random_matrix(f, n, n, rng);
        if x.is_invertible() {
            return x;
        }
    }
}

pub(crate) fn conj(a: &Matrix, x: &Matrix) -> Result<Matrix, WitnessError> {
    conjugate(a, x).map_err(|e| WitnessError::InternalInconsistency(format!("conjugation: {e}")))
}

/// `X` with `X⁻¹·from·X = to`.
pub(crate) fn conjugator(from: &Matrix, to: &Matrix) -> Result<Matrix, WitnessError> {
    find_conjugator(from, to).ok_or_else(|| WitnessError::InternalInconsistency("matrices are not similar".into()))
}

pub(crate) fn label_of(class: &SlClass, a: &Matrix) -> Result<Elem, WitnessError> {
    class
        .label_of(a)
        .ok_or_else(|| WitnessError::InternalInconsistency(format!("matrix outside {}", class.to_text())))
}

/// `diag(θ/ℓ, 1, …)` moving a member of the closure to the label of `target`.
pub(crate) fn label_fix(target: &SlClass, a: &Matrix) -> Result<Matrix, WitnessError> {
    let current = label_of(target, a)?;
    let f = a.field();
    Ok(label_diag(f, a.rows(), f.div(target.label(), current)))
}

pub(crate) fn check_nonscalar(c: &SimilarityClass) -> Result<(), WitnessError> {
    if c.is_scalar() {
        Err(WitnessError::ScalarClass(c.to_text()))
    } else {
        Ok(())
    }
}

pub(crate) fn check_same_shape(o: &SimilarityClass, p: &SimilarityClass) -> Result<(), WitnessError> {
    if o.field() != p.field() {
        return Err(WitnessError::Mismatch("classes are over different fields".into()));
    }
    if o.n() != p.n() {
        return Err(WitnessError::Mismatch(format!("dimensions {} and {}", o.n(), p.n())));
    }
    check_nonscalar(o)?;
    check_nonscalar(p)
}

/// Builds a verified pair in the given classes with `tr(WQ) = τ`.
///
/// Similarity classes with `n ≥ 3` go through the block construction, `n = 2`
/// through the explicit two-by-two templates, and SL classes through the case
/// analysis on fullness, cyclicity, dimension and field size.
pub fn witness(omega: &Class, psi: &Class, tau: Elem, seed: u64) -> Result<WitnessPair, WitnessError> {
    check_same_shape(omega.closure(), psi.closure())?;
    let mut rng = rng(seed);
    let mut trail = Trail::default();
    let pair = match (omega, psi) {
        (Class::Similarity(o), Class::Similarity(p)) => {
            if o.n() == 2 {
                two_by_two::build_any(o, p, tau, &mut rng, &mut trail)?
            } else {
                similarity::build(o, p, tau, &mut rng, &mut trail)?
            }
        }
        (Class::Sl(o), Class::Sl(p)) => sl_dispatch(o, p, tau, &mut rng, &mut trail)?,
        _ => return Err(WitnessError::Mismatch("mixed similarity and SL classes".into())),
    };
    finish(omega.clone(), psi.clone(), tau, pair, trail)
}

fn sl_dispatch(
    o: &SlClass,
    p: &SlClass,
    tau: Elem,
    rng: &mut ChaCha8Rng,
    trail: &mut Trail,
) -> Result<(Matrix, Matrix), WitnessError> {
    let n = o.n();
    let q = o.field().order();
    if n < 3 {
        return Err(WitnessError::UnsupportedCase(format!("SL({n}, {q}) is outside the constructions")));
    }
    if o.is_full() || p.is_full() {
        return sl::build_via_closure(o, p, tau, rng, trail);
    }
    if n == 3 {
        return sl::build_sl3(o, p, tau, rng, trail);
    }
    if n == 4 && q == 3 {
        return sl::build_sl43(o, p, tau, trail);
    }
    let (oc, pc) = (o.closure().is_cyclic(), p.closure().is_cyclic());
    if oc && pc {
        let m = n / 2;
        if n.is_multiple_of(2) && (q >= 4 || m >= 3) {
            return sl::build_cyclic_even(o, p, tau, rng, trail);
        }
        if n % 2 == 1 && q >= 4 {
            return sl::build_cyclic_odd(o, p, tau, rng, trail);
        }
        return Err(WitnessError::UnsupportedCase(format!("cyclic classes of SL({n}, {q})")));
    }
    if pc {
        let (qq, w) = sl::build_general(p, o, tau, rng, trail)?;
        return Ok((w, qq));
    }
    sl::build_general(o, p, tau, rng, trail)
}
