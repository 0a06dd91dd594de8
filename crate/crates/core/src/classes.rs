//! Similarity classes of `M(n, K)`, conjugacy classes of `SL(n, K)` and their
//! splitting, minimal rank, and enumeration of all classes at small size.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{extension_field, Elem, Field, MAX_FIELD_ORDER};
use crate::linalg::{
    centralizer_det_image, conjugate, find_conjugator, invariant_factors, DetImage,
    InvariantFactors, Matrix,
};
use crate::poly::{monic_polys, poly_order, Poly};

/// Upper bound on `q^n` for chain enumeration.
pub const ENUMERATION_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("matrix does not have determinant 1")]
    DetNotOne,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("class is over a different field")]
    MixedFields,
    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("enumeration too large: q^n = {size} exceeds {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("cannot parse class: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    /// Similarity classes of all matrices.
    #[serde(rename = "M")]
    M,
    /// Similarity classes of invertible matrices.
    #[serde(rename = "GL")]
    GL,
    /// Conjugacy classes of `SL(n, K)`.
    #[serde(rename = "SL")]
    SL,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::M => "M",
            Group::GL => "GL",
            Group::SL => "SL",
        })
    }
}

impl FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Group, String> {
        match s.to_ascii_uppercase().as_str() {
            "M" | "M_SIMILARITY" | "SIMILARITY" => Ok(Group::M),
            "GL" | "GL_SIMILARITY" => Ok(Group::GL),
            "SL" => Ok(Group::SL),
            _ => Err(format!("unknown group '{s}' (expected M, GL or SL)")),
        }
    }
}

/// A similarity class, identified by its invariant factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimilarityClass {
    factors: InvariantFactors,
}

impl fmt::Debug for SimilarityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl SimilarityClass {
    pub fn new(factors: InvariantFactors) -> SimilarityClass {
        SimilarityClass { factors }
    }

    pub fn of_matrix(a: &Matrix) -> Result<SimilarityClass, ClassError> {
        if !a.is_square() || a.rows() == 0 {
            return Err(ClassError::NotSquare);
        }
        Ok(SimilarityClass { factors: invariant_factors(a) })
    }

    pub fn parse(field: &Field, s: &str) -> Result<SimilarityClass, ClassError> {
        InvariantFactors::parse(field, s).map(SimilarityClass::new).map_err(ClassError::Parse)
    }

    /// Class of `companion(f)`.
    pub fn cyclic(f: &Poly) -> SimilarityClass {
        SimilarityClass::new(InvariantFactors::new(vec![f.monic()]).expect("nonconstant"))
    }

    pub fn field(&self) -> &Field {
        self.factors.field()
    }

    pub fn n(&self) -> usize {
        self.factors.dim()
    }

    pub fn factors(&self) -> &InvariantFactors {
        &self.factors
    }

    pub fn det(&self) -> Elem {
        self.factors.det()
    }

    pub fn trace(&self) -> Elem {
        self.factors.trace()
    }

    pub fn minpoly(&self) -> &Poly {
        self.factors.minpoly()
    }

    pub fn charpoly(&self) -> Poly {
        self.factors.charpoly()
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_scalar()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.is_cyclic()
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Minimal polynomial is a power of a single irreducible.
    pub fn is_primary(&self) -> bool {
        self.factors.primes().len() == 1
    }

    /// Minimal polynomial is irreducible of degree `n`.
    pub fn is_irreducible(&self) -> bool {
        self.minpoly().deg() == self.n() && self.minpoly().is_irreducible()
    }

    /// Roots in `K` of the minimal polynomial.
    pub fn eigenvalues(&self) -> Vec<Elem> {
        self.minpoly().roots()
    }

    /// Whether some elementary divisor is irreducible (exponent one).
    pub fn has_irreducible_elementary_divisor(&self) -> bool {
        self.factors.elementary_divisors().iter().any(|(_, e)| *e == 1)
    }

    pub fn minimal_rank(&self) -> usize {
        self.factors.minimal_rank()
    }

    pub fn representative(&self) -> Matrix {
        self.factors.representative()
    }

    pub fn contains(&self, a: &Matrix) -> bool {
        a.field() == self.field()
            && a.is_square()
            && a.rows() == self.n()
            && invariant_factors(a) == self.factors
    }

    /// Determinant image of the centralizer of any member.
    pub fn det_image(&self) -> DetImage {
        centralizer_det_image(&self.representative())
    }

    pub fn to_text(&self) -> String {
        self.factors.to_text()
    }
}

/// A conjugacy class of `SL(n, K)`: a determinant-one similarity class plus
/// the coset of the centralizer determinant image that selects one of its pieces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SlClass {
    closure: SimilarityClass,
    label: Elem,
    image: DetImage,
}

impl fmt::Debug for SlClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl SlClass {
    pub fn new(closure: SimilarityClass, label: Elem) -> Result<SlClass, ClassError> {
        let image = closure.det_image();
        SlClass::with_image(closure, label, image)
    }

    /// Reuses an already computed determinant image.
    pub fn with_image(closure: SimilarityClass, label: Elem, image: DetImage) -> Result<SlClass, ClassError> {
        if closure.det() != Elem::ONE {
            return Err(ClassError::DetNotOne);
        }
        if label.is_zero() {
            return Err(ClassError::Parse("label must be nonzero".into()));
        }
        let label = image.canonical(label);
        Ok(SlClass { closure, label, image })
    }

    pub fn closure(&self) -> &SimilarityClass {
        &self.closure
    }

    pub fn label(&self) -> Elem {
        self.label
    }

    pub fn image(&self) -> &DetImage {
        &self.image
    }

    /// Number of SL classes in the closure.
    pub fn split_count(&self) -> usize {
        self.image.index()
    }

    /// The SL class coincides with its similarity closure.
    pub fn is_full(&self) -> bool {
        self.image.is_full()
    }

    pub fn field(&self) -> &Field {
        self.closure.field()
    }

    pub fn n(&self) -> usize {
        self.closure.n()
    }

    /// Base representative conjugated by `diag(label, 1, …, 1)`.
    pub fn representative(&self) -> Matrix {
        let base = self.closure.representative();
        if self.label == Elem::ONE {
            return base;
        }
        conjugate(&base, &label_diag(self.field(), self.n(), self.label)).expect("diagonal is invertible")
    }

    /// Label of a member of the closure.
    pub fn label_of(&self, a: &Matrix) -> Option<Elem> {
        sl_label(&self.closure, &self.image, a)
    }

    pub fn contains(&self, a: &Matrix) -> bool {
        self.closure.contains(a) && self.label_of(a) == Some(self.label)
    }

    pub fn to_text(&self) -> String {
        if self.split_count() > 1 {
            format!("{}@label={}", self.closure.to_text(), self.field().format(self.label))
        } else {
            self.closure.to_text()
        }
    }
}

pub(crate) fn label_diag(field: &Field, n: usize, theta: Elem) -> Matrix {
    let mut d = vec![Elem::ONE; n];
    d[0] = theta;
    Matrix::diag(field, &d)
}

/// Label of `a` relative to the companion-sum base of `closure`: the canonical
/// coset of `det X` for any `X` with `X⁻¹·base·X = a`.
pub fn sl_label(closure: &SimilarityClass, image: &DetImage, a: &Matrix) -> Option<Elem> {
    let base = closure.representative();
    let x = find_conjugator(&base, a)?;
    Some(image.canonical(x.det()))
}

/// Either kind of class handle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Similarity(SimilarityClass),
    Sl(SlClass),
}

impl Class {
    pub fn group(&self) -> Group {
        match self {
            Class::Similarity(c) if c.is_invertible() => Group::GL,
            Class::Similarity(_) => Group::M,
            Class::Sl(_) => Group::SL,
        }
    }

    pub fn closure(&self) -> &SimilarityClass {
        match self {
            Class::Similarity(c) => c,
            Class::Sl(c) => c.closure(),
        }
    }

    pub fn field(&self) -> &Field {
        self.closure().field()
    }

    pub fn n(&self) -> usize {
        self.closure().n()
    }

    pub fn is_scalar(&self) -> bool {
        self.closure().is_scalar()
    }

    pub fn label(&self) -> Option<Elem> {
        match self {
            Class::Similarity(_) => None,
            Class::Sl(c) => Some(c.label()),
        }
    }

    pub fn representative(&self) -> Matrix {
        match self {
            Class::Similarity(c) => c.representative(),
            Class::Sl(c) => c.representative(),
        }
    }

    pub fn contains(&self, a: &Matrix) -> bool {
        match self {
            Class::Similarity(c) => c.contains(a),
            Class::Sl(c) => c.contains(a),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Class::Similarity(c) => c.to_text(),
            Class::Sl(c) => c.to_text(),
        }
    }

    /// Parses `"f1,f2,…[@label=θ]"`; the label is only meaningful for `SL`.
    pub fn parse(field: &Field, group: Group, s: &str) -> Result<Class, ClassError> {
        let (chain, label) = match s.split_once('@') {
            Some((c, l)) => {
                let l = l.trim();
                let v = l.strip_prefix("label=").unwrap_or(l);
                let theta = field.parse(v).map_err(|e| ClassError::Parse(e.to_string()))?;
                (c, Some(theta))
            }
            None => (s, None),
        };
        let closure = SimilarityClass::parse(field, chain)?;
        match group {
            Group::M => {
                reject_label(label)?;
                Ok(Class::Similarity(closure))
            }
            Group::GL => {
                reject_label(label)?;
                if !closure.is_invertible() {
                    return Err(ClassError::Singular);
                }
                Ok(Class::Similarity(closure))
            }
            Group::SL => Ok(Class::Sl(SlClass::new(closure, label.unwrap_or(Elem::ONE))?)),
        }
    }
}

fn reject_label(label: Option<Elem>) -> Result<(), ClassError> {
    match label {
        Some(_) => Err(ClassError::Parse("labels apply to SL classes only".into())),
        None => Ok(()),
    }
}

/// The class of `a` in the given group.
pub fn class_of(a: &Matrix, group: Group) -> Result<Class, ClassError> {
    let closure = SimilarityClass::of_matrix(a)?;
    match group {
        Group::M => Ok(Class::Similarity(closure)),
        Group::GL => {
            if a.det().is_zero() {
                return Err(ClassError::Singular);
            }
            Ok(Class::Similarity(closure))
        }
        Group::SL => {
            if a.det() != Elem::ONE {
                return Err(ClassError::DetNotOne);
            }
            let image = closure.det_image();
            let label = sl_label(&closure, &image, a).expect("a lies in its own closure");
            Ok(Class::Sl(SlClass::with_image(closure, label, image)?))
        }
    }
}

/// All SL classes inside a determinant-one similarity class.
pub fn sl_split(closure: &SimilarityClass) -> Result<Vec<SlClass>, ClassError> {
    if closure.det() != Elem::ONE {
        return Err(ClassError::DetNotOne);
    }
    let image = closure.det_image();
    image
        .coset_labels()
        .into_iter()
        .map(|l| SlClass::with_image(closure.clone(), l, image.clone()))
        .collect()
}

/// `n - max_f #{invariant factors divisible by f}`.
pub fn minimal_rank(a: &Matrix) -> usize {
    invariant_factors(a).minimal_rank()
}

/// `min rank(A - λI)` over roots `λ` of the minimal polynomial in extension fields.
pub fn minimal_rank_by_extension(a: &Matrix) -> usize {
    let field = a.field();
    let mp = crate::linalg::minpoly(a);
    let mut best = a.rows();
    for (f, _) in mp.factor() {
        let d = f.deg() as u32;
        let ext = extension_field(field, d, MAX_FIELD_ORDER).expect("extension within bound");
        let big = &ext.field;
        let fl = Poly::new(big, f.coeffs().iter().map(|&c| ext.embed(c)).collect());
        let root = fl.roots().into_iter().next().expect("irreducible factor splits in its extension");
        best = best.min(a.embed(&ext).sub_scalar(root).rank());
    }
    best
}

fn chain_order(a: &[Poly], b: &[Poly]) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| {
        a.iter().zip(b).map(|(x, y)| poly_order(x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    })
}

/// Every invariant-factor chain of total degree `n`, in canonical order.
pub fn enumerate_chains(n: usize, field: &Field) -> Result<Vec<InvariantFactors>, ClassError> {
    let size = (field.order() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if size > ENUMERATION_BOUND {
        return Err(ClassError::TooLarge { size, bound: ENUMERATION_BOUND });
    }
    fn rec(field: &Field, prefix: &mut Vec<Poly>, remaining: usize, out: &mut Vec<Vec<Poly>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let last = prefix.last().cloned().unwrap_or_else(|| Poly::one(field));
        let base = last.deg();
        let min_h = if prefix.is_empty() { 1 } else { 0 };
        for dh in min_h..=remaining.saturating_sub(base) {
            let dg = base + dh;
            if dg == 0 || dg > remaining {
                continue;
            }
            let rest = remaining - dg;
            if rest != 0 && rest < dg {
                continue;
            }
            for h in monic_polys(field, dh) {
                prefix.push(last.mul(&h));
                rec(field, prefix, rest, out);
                prefix.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(field, &mut Vec::new(), n, &mut raw);
    raw.sort_by(|a, b| chain_order(a, b));
    Ok(raw.into_iter().map(|c| InvariantFactors::new(c).expect("valid chain")).collect())
}

/// All classes of the given group, in canonical order.
pub fn enumerate_classes(n: usize, field: &Field, group: Group) -> Result<Vec<Class>, ClassError> {
    let chains = enumerate_chains(n, field)?;
    let mut out = Vec::new();
    for c in chains {
        let sc = SimilarityClass::new(c);
        match group {
            Group::M => out.push(Class::Similarity(sc)),
            Group::GL => {
                if sc.is_invertible() {
                    out.push(Class::Similarity(sc));
                }
            }
            Group::SL => {
                if sc.det() == Elem::ONE {
                    out.extend(sl_split(&sc)?.into_iter().map(Class::Sl));
                }
            }
        }
    }
    Ok(out)
}

/// `{tr ωψ}` as a subset of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSet {
    field: Field,
    members: Vec<Elem>,
}

impl TraceSet {
    pub fn new(field: &Field, mut members: Vec<Elem>) -> TraceSet {
        members.sort();
        members.dedup();
        TraceSet { field: field.clone(), members }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.members.len() == self.field.order()
    }

    /// Elements of `K` not in the set.
    pub fn missing(&self) -> Vec<Elem> {
        self.field.elements().filter(|&x| !self.contains(x)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "members": self.members.iter().map(|&x| self.field.format(x)).collect::<Vec<_>>(),
            "complete": self.complete(),
            "missing": self.missing().iter().map(|&x| self.field.format(x)).collect::<Vec<_>>(),
        })
    }
}
