//! Brute-force ground truth: conjugacy orbits, trace sets, class products, and
//! verification reports that compare the constructive witnesses against them.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classes::{class_of, enumerate_classes, Class, ClassError, Group, SimilarityClass};
use crate::field::{Elem, Field};
use crate::linalg::{centralizer_basis, Matrix};
use crate::poly::{monic_polys, Poly};
use crate::witness::{trace_dichotomy_2x2, verify_pair, witness, WitnessError, DEFAULT_SEED};

/// Default cap on the number of orbit elements generated per orbit.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("orbit exceeds the budget of {budget} elements")]
    BudgetExceeded { budget: u64 },
    #[error("classes do not match: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// Conjugation generators `(g, g⁻¹)`: elementary transvections `I + aE_ij` with
/// `a` running over an additive basis of `K`, plus `diag(ζ, 1, …)` for `GL`.
fn generators(field: &Field, n: usize, group: Group) -> Vec<(Matrix, Matrix)> {
    let p = field.characteristic() as usize;
    let basis: Vec<Elem> = (0..field.degree()).map(|i| field.elem(p.pow(i))).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &a in &basis {
                let mut g = Matrix::identity(field, n);
                g[(i, j)] = a;
                let mut h = Matrix::identity(field, n);
                h[(i, j)] = field.neg(a);
                out.push((g, h));
            }
        }
    }
    if group != Group::SL && field.order() > 2 {
        let z = field.primitive();
        let mut d = vec![Elem::ONE; n];
        d[0] = z;
        let mut e = vec![Elem::ONE; n];
        e[0] = field.inv(z);
        out.push((Matrix::diag(field, &d), Matrix::diag(field, &e)));
    }
    out
}

fn orbit_group(group: Group) -> Group {
    if group == Group::SL {
        Group::SL
    } else {
        Group::GL
    }
}

/// Visits the conjugacy orbit of `rep` breadth-first, each element once.
///
/// Returns the number of elements visited. `visit` may stop the walk early.
pub fn visit_orbit<F>(rep: &Matrix, group: Group, budget: u64, mut visit: F) -> Result<u64, OracleError>
where
    F: FnMut(&Matrix) -> ControlFlow<()>,
{
    let gens = generators(rep.field(), rep.rows(), orbit_group(group));
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(rep.key());
    let mut count = 1u64;
    if visit(rep).is_break() {
        return Ok(count);
    }
    queue.push_back(rep.clone());
    while let Some(a) = queue.pop_front() {
        for (g, h) in &gens {
            let b = h.mul(&a).mul(g);
            if seen.insert(b.key()) {
                count += 1;
                if count > budget {
                    return Err(OracleError::BudgetExceeded { budget });
                }
                if visit(&b).is_break() {
                    return Ok(count);
                }
                queue.push_back(b);
            }
        }
    }
    Ok(count)
}

/// The full conjugacy orbit of `rep`, in breadth-first order.
pub fn orbit(rep: &Matrix, group: Group, budget: u64) -> Result<Vec<Matrix>, OracleError> {
    let mut out = Vec::new();
    visit_orbit(rep, group, budget, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Order of `GL(n, q)` or `SL(n, q)`; `M` is treated as `GL`.
pub fn group_order(n: usize, q: u64, group: Group) -> u128 {
    let q = q as u128;
    let qn = q.pow(n as u32);
    let gl: u128 = (0..n as u32).map(|i| qn - q.pow(i)).product();
    if group == Group::SL {
        gl / (q - 1)
    } else {
        gl
    }
}

/// Number of invertible (or determinant one) matrices commuting with `a`, by
/// enumerating the centralizer algebra.
pub fn centralizer_order(a: &Matrix, group: Group, budget: u64) -> Result<u64, OracleError> {
    let f = a.field();
    let basis = centralizer_basis(a);
    let q = f.order() as u64;
    let total = q.checked_pow(basis.len() as u32).filter(|&t| t <= budget).ok_or(OracleError::BudgetExceeded { budget })?;
    let n = a.rows();
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut x = Matrix::zeros(f, n, n);
        for b in &basis {
            let coef = f.elem((c % q) as usize);
            c /= q;
            if !coef.is_zero() {
                x = x.add(&b.scale(coef));
            }
        }
        let d = x.det();
        let ok = if group == Group::SL { d == Elem::ONE } else { !d.is_zero() };
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

fn check_pair(o: &Class, p: &Class) -> Result<(), OracleError> {
    if o.field() != p.field() || o.n() != p.n() {
        return Err(OracleError::Mismatch("classes live in different matrix algebras".into()));
    }
    if (o.group() == Group::SL) != (p.group() == Group::SL) {
        return Err(OracleError::Mismatch("cannot mix SL classes with similarity classes".into()));
    }
    Ok(())
}

/// `{tr ωψ : ω ∈ Ω, ψ ∈ Ψ}`.
///
/// Traces are conjugation invariant, so `ψ` is fixed to the representative of
/// `Ψ` and only `ω` ranges over its orbit. `early_exit` stops once every
/// element of `K` has appeared.
pub fn trace_set(o: &Class, p: &Class, early_exit: bool, budget: u64) -> Result<TraceSet, OracleError> {
    check_pair(o, p)?;
    let f = o.field().clone();
    let psi = p.representative();
    let mut seen = vec![false; f.order()];
    let mut hits = 0;
    visit_orbit(&o.representative(), o.group(), budget, |w| {
        let t = w.trace_of_product(&psi).index();
        if !seen[t] {
            seen[t] = true;
            hits += 1;
        }
        if early_exit && hits == f.order() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(TraceSet::new(&f, f.elements().filter(|x| seen[x.index()]).collect()))
}

/// The same set by enumerating both orbits in full.
pub fn trace_set_double(o: &Class, p: &Class, budget: u64) -> Result<TraceSet, OracleError> {
    check_pair(o, p)?;
    let f = o.field().clone();
    let left = orbit(&o.representative(), o.group(), budget)?;
    let right = orbit(&p.representative(), p.group(), budget)?;
    let mut seen = BTreeSet::new();
    for w in &left {
        for q in &right {
            seen.insert(w.trace_of_product(q));
        }
    }
    Ok(TraceSet::new(&f, seen.into_iter().collect()))
}

pub use crate::classes::TraceSet;

/// Every class meeting `ΩΨ`, sorted by class text.
///
/// Membership of `ωψ` in a class is conjugation equivariant and every product is
/// conjugate to one whose second factor is the representative of `Ψ`, so the
/// orbit of `Ω` times that one matrix meets every class of `ΩΨ`.
pub fn class_product_decomposition(o: &Class, p: &Class, budget: u64) -> Result<Vec<Class>, OracleError> {
    check_pair(o, p)?;
    let psi = p.representative();
    let group = if o.group() == Group::SL { Group::SL } else { Group::M };
    let mut by_key: HashSet<Vec<u8>> = HashSet::new();
    let mut found: BTreeMap<String, Class> = BTreeMap::new();
    let mut err = None;
    visit_orbit(&o.representative(), o.group(), budget, |w| {
        let prod = w.mul(&psi);
        if by_key.insert(prod.key()) {
            match class_of(&prod, group) {
                Ok(c) => {
                    found.entry(c.to_text()).or_insert(c);
                }
                Err(e) => {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(found.into_values().collect())
}

/// How the pairs of a verification run are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub budget: u64,
    /// Run the oracle on the first this many pairs only; `None` means all.
    pub oracle_pairs: Option<usize>,
    pub early_exit: bool,
    /// Base seed for the witness builders; each pair derives its own.
    pub witness_seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            mode: Mode::Exhaustive,
            budget: DEFAULT_BUDGET,
            oracle_pairs: None,
            early_exit: true,
            witness_seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub n: usize,
    pub q: usize,
    pub group: Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub omega: String,
    pub psi: String,
    pub tau: Option<String>,
    pub kind: String,
    pub detail: String,
}

/// A pair whose trace set misses some values, with the missing values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedCase {
    pub omega: String,
    pub psi: String,
    pub missing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scope: Scope,
    pub claim: String,
    pub mode: Mode,
    pub classes: usize,
    pub pairs_checked: usize,
    pub witnesses_built: usize,
    pub oracle_checked: usize,
    pub oracle_over_budget: usize,
    pub exhaustive: bool,
    pub oracle_only: bool,
    pub failures: Vec<Failure>,
    pub excluded_cases: Vec<ExcludedCase>,
    pub unsupported: usize,
    pub mr_too_small: usize,
    pub uncertified_images: usize,
    pub provenance_counts: BTreeMap<String, usize>,
    pub budget: u64,
    pub seed: u64,
    pub note: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(scope: Scope, claim: &str, mode: Mode, budget: u64, seed: u64) -> VerificationReport {
        VerificationReport {
            scope,
            claim: claim.into(),
            mode,
            classes: 0,
            pairs_checked: 0,
            witnesses_built: 0,
            oracle_checked: 0,
            oracle_over_budget: 0,
            exhaustive: false,
            oracle_only: false,
            failures: Vec::new(),
            excluded_cases: Vec::new(),
            unsupported: 0,
            mr_too_small: 0,
            uncertified_images: 0,
            provenance_counts: BTreeMap::new(),
            budget,
            seed,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Deterministic JSON: timing is left out.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_with_timing(&self) -> serde_json::Value {
        let mut v = self.to_json();
        v["elapsed_ms"] = serde_json::json!(self.elapsed.as_millis() as u64);
        v
    }
}

#[derive(Default)]
struct PairOutcome {
    witnesses: usize,
    oracle_checked: bool,
    over_budget: bool,
    failures: Vec<Failure>,
    excluded: Option<ExcludedCase>,
    unsupported: usize,
    mr_too_small: usize,
    provenance: Vec<String>,
}

fn pair_seed(base: u64, index: usize) -> u64 {
    base ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(usize, &T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(usize, &T) -> U + Sync + Send) -> Vec<U> {
    items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
}

fn check_one(o: &Class, p: &Class, index: usize, opts: &VerifyOptions) -> PairOutcome {
    let f = o.field().clone();
    let mut out = PairOutcome::default();
    let fail = |tau: Option<Elem>, kind: &str, detail: String| Failure {
        omega: o.to_text(),
        psi: p.to_text(),
        tau: tau.map(|t| f.format(t)),
        kind: kind.into(),
        detail,
    };
    let in_scope = o.n() >= 3;
    let seed = pair_seed(opts.witness_seed, index);
    let mut excluded_by_witness = Vec::new();
    for tau in f.elements() {
        match witness(o, p, tau, seed) {
            Ok(pair) => match verify_pair(o, p, tau, &pair.w, &pair.q) {
                Ok(()) => {
                    out.witnesses += 1;
                    out.provenance.extend(pair.provenance().iter().cloned());
                }
                Err(e) => out.failures.push(fail(Some(tau), "verification", e.to_string())),
            },
            Err(WitnessError::TraceExcluded { value, .. }) if !in_scope => excluded_by_witness.push(value),
            Err(WitnessError::UnsupportedCase(_)) if !in_scope => out.unsupported += 1,
            Err(e @ WitnessError::MrTooSmall { .. }) => {
                out.mr_too_small += 1;
                out.failures.push(fail(Some(tau), "mr-too-small", e.to_string()));
            }
            Err(e) => out.failures.push(fail(Some(tau), "witness", e.to_string())),
        }
    }
    if !in_scope && o.group() != Group::SL {
        // 2x2: the dichotomy needs one reducible class; tr(ωψ) = tr(ψω) allows either.
        let dich = trace_dichotomy_2x2(o.closure(), p.closure()).or_else(|_| trace_dichotomy_2x2(p.closure(), o.closure()));
        if let Ok(d) = dich {
            if excluded_by_witness.len() > 1 || excluded_by_witness.first().copied() != d.excluded {
                out.failures.push(fail(None, "dichotomy", "witness exclusions disagree with the dichotomy".into()));
            }
        }
    }
    if opts.oracle_pairs.is_none_or(|k| index < k) {
        match trace_set(o, p, opts.early_exit, opts.budget) {
            Ok(ts) => {
                out.oracle_checked = true;
                if in_scope {
                    if !ts.complete() {
                        let missing = ts.missing().iter().map(|&x| f.format(x)).collect::<Vec<_>>().join(",");
                        out.failures.push(fail(None, "trace-set", format!("missing {missing}")));
                    }
                } else {
                    let missing = ts.missing();
                    if o.group() != Group::SL && missing != excluded_by_witness {
                        out.failures.push(fail(None, "trace-set", "oracle and witness exclusions differ".into()));
                    }
                    if !missing.is_empty() {
                        out.excluded = Some(ExcludedCase {
                            omega: o.to_text(),
                            psi: p.to_text(),
                            missing: missing.iter().map(|&x| f.format(x)).collect(),
                        });
                    }
                }
            }
            Err(OracleError::BudgetExceeded { .. }) => out.over_budget = true,
            Err(e) => out.failures.push(fail(None, "oracle", e.to_string())),
        }
    }
    out
}

fn nonscalar_classes(n: usize, field: &Field, group: Group) -> Result<Vec<Class>, ClassError> {
    Ok(enumerate_classes(n, field, group)?.into_iter().filter(|c| !c.is_scalar()).collect())
}

/// Checks `tr ΩΨ = K` on pairs of nonscalar classes: every `τ` gets a verified
/// witness and the oracle trace set is all of `K`.
///
/// For `n = 2` the trace set may miss one value; such pairs are recorded in
/// `excluded_cases` and checked against the 2x2 dichotomy instead.
pub fn verify_theorem(n: usize, field: &Field, group: Group, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let claim = if group == Group::SL { "tr(Omega Psi) = K for nonscalar SL classes" } else { "tr(Omega Psi) = K for nonscalar similarity classes" };
    let seed = match opts.mode {
        Mode::Exhaustive => opts.witness_seed,
        Mode::Sampled { seed, .. } => seed,
    };
    let scope = Scope { n, q: field.order(), group };
    let mut report = VerificationReport::new(scope, claim, opts.mode, opts.budget, seed);
    let classes = match nonscalar_classes(n, field, group) {
        Ok(c) => c,
        Err(e) => {
            report.failures.push(Failure {
                omega: String::new(),
                psi: String::new(),
                tau: None,
                kind: "enumeration".into(),
                detail: e.to_string(),
            });
            report.elapsed = start.elapsed();
            return report;
        }
    };
    report.classes = classes.len();
    report.uncertified_images = classes
        .iter()
        .filter(|c| matches!(c, Class::Sl(s) if !s.image().certified()))
        .count();
    let pairs: Vec<(usize, usize)> = match opts.mode {
        Mode::Exhaustive => (0..classes.len()).flat_map(|i| (0..classes.len()).map(move |j| (i, j))).collect(),
        Mode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if classes.is_empty() {
                Vec::new()
            } else {
                (0..count).map(|_| (rng.gen_range(0..classes.len()), rng.gen_range(0..classes.len()))).collect()
            }
        }
    };
    let outcomes = par_map(&pairs, |idx, &(i, j)| check_one(&classes[i], &classes[j], idx, opts));
    report.pairs_checked = pairs.len();
    for o in outcomes {
        report.witnesses_built += o.witnesses;
        report.oracle_checked += o.oracle_checked as usize;
        report.oracle_over_budget += o.over_budget as usize;
        report.failures.extend(o.failures);
        report.excluded_cases.extend(o.excluded);
        report.unsupported += o.unsupported;
        report.mr_too_small += o.mr_too_small;
        for s in o.provenance {
            *report.provenance_counts.entry(s).or_default() += 1;
        }
    }
    report.exhaustive = opts.mode == Mode::Exhaustive && report.oracle_checked == pairs.len();
    report.elapsed = start.elapsed();
    report
}

/// Monic irreducible quadratics over `K`, in field order.
fn irreducible_quadratics(field: &Field) -> Vec<Poly> {
    monic_polys(field, 2).filter(|f| f.roots().is_empty()).collect()
}

/// Checks that `tr ΩΨ = K` for all pairs of irreducible classes of `GL(2, q)`.
///
/// This claim comes without proof, so only the oracle is consulted and the
/// report is flagged `oracle_only`.
pub fn verify_gl2_irreducible_claim(field: &Field, budget: u64) -> VerificationReport {
    let start = Instant::now();
    let scope = Scope { n: 2, q: field.order(), group: Group::GL };
    let mut report = VerificationReport::new(
        scope,
        "tr(Omega Psi) = K for irreducible classes of GL(2, q)",
        Mode::Exhaustive,
        budget,
        0,
    );
    report.oracle_only = true;
    report.note = Some("claim stated without proof; checked by brute force only".into());
    let classes: Vec<Class> =
        irreducible_quadratics(field).iter().map(|f| Class::Similarity(SimilarityClass::cyclic(f))).collect();
    report.classes = classes.len();
    let pairs: Vec<(usize, usize)> =
        (0..classes.len()).flat_map(|i| (0..classes.len()).map(move |j| (i, j))).collect();
    let results = par_map(&pairs, |_, &(i, j)| trace_set(&classes[i], &classes[j], true, budget));
    report.pairs_checked = pairs.len();
    for (&(i, j), r) in pairs.iter().zip(results) {
        let (o, p) = (&classes[i], &classes[j]);
        match r {
            Ok(ts) => {
                report.oracle_checked += 1;
                if !ts.complete() {
                    let missing: Vec<String> = ts.missing().iter().map(|&x| field.format(x)).collect();
                    report.failures.push(Failure {
                        omega: o.to_text(),
                        psi: p.to_text(),
                        tau: None,
                        kind: "trace-set".into(),
                        detail: format!("missing {}", missing.join(",")),
                    });
                }
            }
            Err(OracleError::BudgetExceeded { .. }) => report.oracle_over_budget += 1,
            Err(e) => report.failures.push(Failure {
                omega: o.to_text(),
                psi: p.to_text(),
                tau: None,
                kind: "oracle".into(),
                detail: e.to_string(),
            }),
        }
    }
    report.exhaustive = report.oracle_checked == pairs.len();
    report.elapsed = start.elapsed();
    report
}

/// One product `ΩΨ` split into classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEntry {
    pub omega: String,
    pub psi: String,
    pub classes: Vec<String>,
}

/// Class products of all pairs of nonscalar classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AradHerzogReport {
    pub scope: Scope,
    pub products: Vec<ProductEntry>,
    /// No product of two nontrivial classes is a single class.
    pub never_single_class: bool,
    pub min_classes: usize,
    /// Every product meets at least `q` classes.
    pub at_least_q: bool,
    pub over_budget: usize,
}

impl AradHerzogReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Decomposes `ΩΨ` for every ordered pair of nonscalar classes.
pub fn arad_herzog_summary(n: usize, field: &Field, group: Group, budget: u64) -> Result<AradHerzogReport, OracleError> {
    let classes = nonscalar_classes(n, field, group)?;
    let pairs: Vec<(usize, usize)> =
        (0..classes.len()).flat_map(|i| (0..classes.len()).map(move |j| (i, j))).collect();
    let results = par_map(&pairs, |_, &(i, j)| class_product_decomposition(&classes[i], &classes[j], budget));
    let mut products = Vec::new();
    let mut over_budget = 0;
    for (&(i, j), r) in pairs.iter().zip(results) {
        match r {
            Ok(cs) => products.push(ProductEntry {
                omega: classes[i].to_text(),
                psi: classes[j].to_text(),
                classes: cs.iter().map(Class::to_text).collect(),
            }),
            Err(OracleError::BudgetExceeded { .. }) => over_budget += 1,
            Err(e) => return Err(e),
        }
    }
    let min_classes = products.iter().map(|p| p.classes.len()).min().unwrap_or(0);
    Ok(AradHerzogReport {
        scope: Scope { n, q: field.order(), group },
        never_single_class: products.iter().all(|p| p.classes.len() >= 2),
        at_least_q: products.iter().all(|p| p.classes.len() >= field.order()),
        min_classes,
        products,
        over_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(f: &Field, g: Group, s: &str) -> Class {
        Class::parse(f, g, s).unwrap()
    }

    fn texts(cs: &[Class]) -> Vec<String> {
        let mut v: Vec<String> = cs.iter().map(Class::to_text).collect();
        v.sort();
        v
    }

    #[test]
    fn scalar_orbit_is_a_point() {
        let f3 = Field::prime(3).unwrap();
        let s = Matrix::scalar(&f3, 3, f3.from_int(2));
        assert_eq!(orbit(&s, Group::GL, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn unipotent_orbit_in_sl2_of_3() {
        let f3 = Field::prime(3).unwrap();
        let j = Matrix::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(orbit(&j, Group::SL, DEFAULT_BUDGET).unwrap().len(), 4);
        assert_eq!(orbit(&j, Group::GL, DEFAULT_BUDGET).unwrap().len(), 8);
    }

    #[test]
    fn cubic_companion_orbit_in_gl3_of_2() {
        let f2 = Field::prime(2).unwrap();
        let c = Matrix::companion(&Poly::from_ints(&f2, &[1, 1, 0, 1]));
        assert_eq!(orbit(&c, Group::GL, DEFAULT_BUDGET).unwrap().len(), 24);
    }

    #[test]
    fn budget_is_enforced() {
        let f2 = Field::prime(2).unwrap();
        let c = Matrix::companion(&Poly::from_ints(&f2, &[1, 1, 0, 1]));
        assert_eq!(orbit(&c, Group::GL, 10), Err(OracleError::BudgetExceeded { budget: 10 }));
    }

    #[test]
    fn orbit_stabilizer_on_small_groups() {
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            for group in [Group::GL, Group::SL] {
                for c in enumerate_classes(2, &f, group).unwrap() {
                    let rep = c.representative();
                    if group == Group::GL && rep.det().is_zero() {
                        continue;
                    }
                    let o = orbit(&rep, group, DEFAULT_BUDGET).unwrap().len() as u128;
                    let z = centralizer_order(&rep, group, DEFAULT_BUDGET).unwrap() as u128;
                    assert_eq!(o * z, group_order(2, q, group), "{}", c.to_text());
                }
            }
        }
    }

    #[test]
    fn scalar_psi_gives_a_singleton() {
        let f5 = Field::prime(5).unwrap();
        let o = class(&f5, Group::M, "x^3-2");
        let p = class(&f5, Group::M, "x-2,x-2,x-2");
        let ts = trace_set(&o, &p, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(ts.members(), &[f5.from_int(0)]);
    }

    #[test]
    fn gl2_of_3_irreducible_pair_is_full() {
        let f3 = Field::prime(3).unwrap();
        let o = class(&f3, Group::GL, "x^2+1");
        let p = class(&f3, Group::GL, "x^2+x-1");
        assert!(trace_set(&o, &p, false, DEFAULT_BUDGET).unwrap().complete());
        assert!(trace_set(&o, &o, false, DEFAULT_BUDGET).unwrap().complete());
    }

    #[test]
    fn unipotent_against_irreducible_misses_zero() {
        let f3 = Field::prime(3).unwrap();
        let o = class(&f3, Group::M, "(x-1)^2");
        let p = class(&f3, Group::M, "x^2+1");
        let ts = trace_set(&o, &p, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(ts.members(), &[f3.from_int(1), f3.from_int(2)]);
    }

    #[test]
    fn fixed_psi_matches_double_enumeration() {
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            let cs = enumerate_classes(2, &f, Group::M).unwrap();
            for o in &cs {
                for p in &cs {
                    let a = trace_set(o, p, false, DEFAULT_BUDGET).unwrap();
                    let b = trace_set_double(o, p, DEFAULT_BUDGET).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn irreducible_products_in_gl2_of_3() {
        let f3 = Field::prime(3).unwrap();
        let g = Group::GL;
        let o = class(&f3, g, "x^2+1");
        let p = class(&f3, g, "x^2+x-1");
        let expect = |names: &[&str]| {
            let mut v: Vec<String> = names.iter().map(|s| class(&f3, Group::M, s).to_text()).collect();
            v.sort();
            v
        };
        let oo = class_product_decomposition(&o, &o, DEFAULT_BUDGET).unwrap();
        assert_eq!(texts(&oo), expect(&["x^2+1", "x-1,x-1", "x+1,x+1"]));
        let pp = class_product_decomposition(&p, &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(texts(&pp), expect(&["x^2+1", "x+1,x+1", "(x-1)^2"]));
        let op = class_product_decomposition(&o, &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(texts(&op), expect(&["x^2+x-1", "x^2-x-1", "(x-1)*(x+1)"]));
    }

    #[test]
    fn identity_psi_reproduces_omega() {
        let f3 = Field::prime(3).unwrap();
        let o = class(&f3, Group::GL, "x-1,(x-1)*(x+1)");
        let i = class(&f3, Group::GL, "x-1,x-1,x-1");
        assert_eq!(texts(&class_product_decomposition(&o, &i, DEFAULT_BUDGET).unwrap()), texts(&[o]));
    }

    #[test]
    fn all_similarity_pairs_of_m3_over_gf2() {
        let f2 = Field::prime(2).unwrap();
        let r = verify_theorem(3, &f2, Group::M, &VerifyOptions::default());
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.exhaustive);
        assert_eq!(r.pairs_checked, r.classes * r.classes);
    }

    #[test]
    fn two_by_two_reports_exclusions_without_failures() {
        let f3 = Field::prime(3).unwrap();
        let r = verify_theorem(2, &f3, Group::M, &VerifyOptions::default());
        assert!(r.passed(), "{:?}", r.failures);
        assert!(!r.excluded_cases.is_empty());
    }

    #[test]
    fn sampled_reports_are_deterministic() {
        let f3 = Field::prime(3).unwrap();
        let opts = VerifyOptions { mode: Mode::Sampled { count: 12, seed: 9 }, ..VerifyOptions::default() };
        let a = verify_theorem(3, &f3, Group::SL, &opts);
        let b = verify_theorem(3, &f3, Group::SL, &opts);
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert_eq!(a.pairs_checked, 12);
    }

    #[test]
    fn gl2_claim_for_small_fields() {
        for q in [2u64, 3] {
            let f = Field::of_order(q).unwrap();
            let r = verify_gl2_irreducible_claim(&f, DEFAULT_BUDGET);
            assert!(r.passed() && r.oracle_only);
        }
    }

    #[test]
    fn sl3_of_2_products_are_never_single_classes() {
        let f2 = Field::prime(2).unwrap();
        let r = arad_herzog_summary(3, &f2, Group::SL, DEFAULT_BUDGET).unwrap();
        assert!(r.never_single_class);
        assert!(r.at_least_q);
    }
}
