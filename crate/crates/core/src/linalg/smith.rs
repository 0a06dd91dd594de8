use std::fmt;

use super::Matrix;
use crate::field::{Elem, Field};
use crate::poly::{poly_order, Poly};

/// Monic chain `f_1 | f_2 | … | f_s` with `Σ deg f_i = n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InvariantFactors {
    chain: Vec<Poly>,
}

impl fmt::Debug for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl InvariantFactors {
    /// Validates monicity, positive degrees and the divisibility chain.
    pub fn new(chain: Vec<Poly>) -> Result<InvariantFactors, String> {
        if chain.is_empty() {
            return Err("empty invariant-factor chain".into());
        }
        for p in &chain {
            if !p.is_monic() || p.deg() == 0 {
                return Err(format!("invariant factor {p} is not monic of positive degree"));
            }
        }
        for w in chain.windows(2) {
            if !w[0].divides(&w[1]) {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(InvariantFactors { chain })
    }

    /// Groups elementary divisors `f^e` (with repetition) into a chain.
    pub fn from_elementary_divisors(field: &Field, divisors: &[(Poly, u32)]) -> InvariantFactors {
        let mut by_prime: Vec<(Poly, Vec<u32>)> = Vec::new();
        for (f, e) in divisors {
            match by_prime.iter_mut().find(|(g, _)| g == f) {
                Some((_, v)) => v.push(*e),
                None => by_prime.push((f.clone(), vec![*e])),
            }
        }
        let s = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut chain = vec![Poly::one(field); s];
        for (f, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.into_iter().enumerate() {
                let slot = s - 1 - i;
                chain[slot] = chain[slot].mul(&f.pow(e));
            }
        }
        InvariantFactors { chain }
    }

    pub fn chain(&self) -> &[Poly] {
        &self.chain
    }

    pub fn field(&self) -> &Field {
        self.chain[0].field()
    }

    pub fn dim(&self) -> usize {
        self.chain.iter().map(Poly::deg).sum()
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.chain.len() == 1
    }

    pub fn minpoly(&self) -> &Poly {
        self.chain.last().expect("nonempty chain")
    }

    pub fn charpoly(&self) -> Poly {
        self.chain.iter().fold(Poly::one(self.field()), |acc, p| acc.mul(p))
    }

    pub fn is_scalar(&self) -> bool {
        self.minpoly().deg() == 1
    }

    /// `det = (-1)^n · charpoly(0)`.
    pub fn det(&self) -> Elem {
        let f = self.field();
        let c0 = self.charpoly().coeff(0);
        if self.dim() % 2 == 1 {
            f.neg(c0)
        } else {
            c0
        }
    }

    pub fn trace(&self) -> Elem {
        let f = self.field();
        let cp = self.charpoly();
        f.neg(cp.coeff(self.dim() - 1))
    }

    /// Elementary divisors `(f, e)`, one entry per block, sorted by `f` then decreasing `e`.
    pub fn elementary_divisors(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        for p in &self.chain {
            out.extend(p.factor());
        }
        out.sort_by(|a, b| poly_order(&a.0, &b.0).then(b.1.cmp(&a.1)));
        out
    }

    /// Distinct irreducible factors of the minimal polynomial.
    pub fn primes(&self) -> Vec<Poly> {
        self.minpoly().factor().into_iter().map(|(f, _)| f).collect()
    }

    /// Number of invariant factors divisible by `f`.
    pub fn multiplicity(&self, f: &Poly) -> usize {
        self.chain.iter().filter(|p| f.divides(p)).count()
    }

    /// `n - max_f #{i : f | f_i}`.
    pub fn minimal_rank(&self) -> usize {
        let m = self.primes().iter().map(|f| self.multiplicity(f)).max().unwrap_or(0);
        self.dim() - m
    }

    /// Dimension of the commutant, `Σ_i (2i-1) deg f_{s-i+1}`.
    pub fn commutant_dim(&self) -> usize {
        self.chain.iter().rev().enumerate().map(|(i, p)| (2 * i + 1) * p.deg()).sum()
    }

    /// Block diagonal sum of companion matrices.
    pub fn representative(&self) -> Matrix {
        let blocks: Vec<Matrix> = self.chain.iter().map(Matrix::companion).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::direct_sum(self.field(), &refs)
    }

    pub fn to_text(&self) -> String {
        self.chain.iter().map(Poly::to_text).collect::<Vec<_>>().join(",")
    }

    /// Comma-separated chain; parenthesized commas are not split.
    pub fn parse(field: &Field, s: &str) -> Result<InvariantFactors, String> {
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, ch) in s.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        let mut chain = Vec::new();
        for part in parts {
            let p = Poly::parse(field, part.trim())?;
            if p.is_zero() || p.deg() == 0 {
                return Err(format!("'{}' is not a nonconstant polynomial", part.trim()));
            }
            if !p.is_monic() {
                return Err(format!("'{}' is not monic", part.trim()));
            }
            chain.push(p);
        }
        chain.sort_by_key(|a| a.deg());
        InvariantFactors::new(chain)
    }
}

/// Invariant factors from the Smith form of `xI - A` over `K[x]`.
pub fn invariant_factors(a: &Matrix) -> InvariantFactors {
    assert!(a.is_square(), "invariant factors of a non-square matrix");
    let f = a.field().clone();
    let n = a.rows();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(&f, f.neg(a[(i, j)]));
                    if i == j {
                        c.add(&Poly::x(&f))
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();

    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, p) in row.iter().enumerate().skip(k) {
                    if let Some(d) = p.degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let (pi, pj, _) = best.expect("xI - A has full rank over K(x)");
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let piv = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].divrem(&piv);
                for j in k..n {
                    let t = m[k][j].mul(&q);
                    m[i][j] = m[i][j].sub(&t);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].divrem(&piv);
                for row in m.iter_mut().skip(k) {
                    let t = row[k].mul(&q);
                    row[j] = row[j].sub(&t);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // The pivot must divide the remaining block; otherwise fold in the offending row.
            let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !piv.divides(&m[i][j])));
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = m[i][j].clone();
                        m[k][j] = m[k][j].add(&t);
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].monic());
    }
    let chain: Vec<Poly> = diag.into_iter().filter(|p| p.deg() > 0).collect();
    InvariantFactors::new(chain).expect("Smith form yields a divisibility chain")
}

/// Independent path: elementary divisors from the ranks of `f(A)^j`.
pub fn invariant_factors_by_nullity(a: &Matrix) -> InvariantFactors {
    let f = a.field().clone();
    let n = a.rows();
    let cp = super::charpoly(a);
    let mut divisors = Vec::new();
    for (g, mult) in cp.factor() {
        let d = g.deg();
        let ga = g.eval_matrix(a);
        let mut ranks = vec![n];
        let mut pw = Matrix::identity(&f, n);
        for _ in 0..mult {
            pw = pw.mul(&ga);
            ranks.push(pw.rank());
        }
        // blocks of size >= j: (r_{j-1} - r_j)/d
        let at_least: Vec<usize> = (1..ranks.len()).map(|j| (ranks[j - 1] - ranks[j]) / d).collect();
        for j in 0..at_least.len() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..at_least[j] - next {
                divisors.push((g.clone(), (j + 1) as u32));
            }
        }
    }
    InvariantFactors::from_elementary_divisors(&f, &divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f3 = Field::prime(3).unwrap();
        let l = f3.from_int(2);
        let s = Matrix::scalar(&f3, 3, l);
        let inv = invariant_factors(&s);
        assert_eq!(inv.chain(), &vec![Poly::linear(&f3, l); 3][..]);

        let p = Poly::from_ints(&f3, &[2, 1, 0, 1]);
        assert_eq!(invariant_factors(&Matrix::companion(&p)).chain(), &[p][..]);

        let f2 = Field::prime(2).unwrap();
        let a = Matrix::diag(&f2, &[Elem::ZERO, Elem::ONE, Elem::ZERO]);
        let chain = invariant_factors(&a);
        assert_eq!(chain.to_text(), "x,x^2+x");
        assert_eq!(chain.minimal_rank(), 1);
    }

    #[test]
    fn both_paths_agree_exhaustively() {
        for q in [2u64, 3] {
            let f = Field::prime(q).unwrap();
            for n in 1..=3usize {
                let total = (q as usize).pow((n * n) as u32);
                for code in 0..total {
                    let mut c = code;
                    let data = (0..n * n)
                        .map(|_| {
                            let e = f.elem(c % q as usize);
                            c /= q as usize;
                            e
                        })
                        .collect();
                    let a = Matrix::from_vec(&f, n, n, data);
                    let smith = invariant_factors(&a);
                    assert_eq!(smith, invariant_factors_by_nullity(&a), "{a:?}");
                    assert_eq!(smith.charpoly(), super::super::charpoly(&a));
                    assert_eq!(smith.minpoly(), &super::super::minpoly(&a));
                    assert_eq!(smith.det(), a.det());
                    assert_eq!(smith.trace(), a.trace());
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f3 = Field::prime(3).unwrap();
        let c = InvariantFactors::parse(&f3, "x-1,(x-1)^2").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(InvariantFactors::parse(&f3, &c.to_text()).unwrap(), c);
        assert!(InvariantFactors::parse(&f3, "x-1,x^2+1").is_err());
        assert!(InvariantFactors::parse(&f3, "2*x+1").is_err());
    }

    #[test]
    fn elementary_divisors_regroup() {
        let f3 = Field::prime(3).unwrap();
        let c = InvariantFactors::parse(&f3, "x-1,(x-1)^2*(x^2+1)").unwrap();
        let ed = c.elementary_divisors();
        assert_eq!(ed.len(), 3);
        assert_eq!(InvariantFactors::from_elementary_divisors(&f3, &ed), c);
        assert_eq!(c.commutant_dim(), 4 + 3);
    }
}
