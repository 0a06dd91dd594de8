//! Univariate polynomials over a [`Field`], plus the text parser used for
//! field elements and invariant factors.

use std::cmp::Ordering;
use std::fmt;

use crate::field::{Elem, Field};

/// Dense polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    /// `x - root`
    pub fn linear(field: &Field, root: Elem) -> Poly {
        Poly::new(field, vec![field.neg(root), Elem::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0 (callers that never see zero).
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = f.sub(r[idx], f.mul(c, dj));
            }
        }
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn roots(&self) -> Vec<Elem> {
        self.field.elements().filter(|&a| self.eval(a).is_zero()).collect()
    }

    /// Irreducible monic factors with multiplicities, sorted by (degree, coefficients).
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        let f = &self.field;
        let mut work = self.monic();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        if work.deg() == 0 {
            return out;
        }
        let mut push = |g: Poly, work: &mut Poly| {
            let mut e = 0;
            loop {
                let (q, r) = work.divrem(&g);
                if !r.is_zero() {
                    break;
                }
                *work = q;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        };
        for r in f.elements() {
            if work.deg() < 1 {
                break;
            }
            if work.eval(r).is_zero() {
                push(Poly::linear(f, r), &mut work);
            }
        }
        let mut d = 2;
        while 2 * d <= work.deg() {
            for g in monic_polys(f, d) {
                if 2 * d > work.deg() {
                    break;
                }
                if g.coeff(0).is_zero() {
                    continue;
                }
                push(g, &mut work);
            }
            d += 1;
        }
        if work.deg() >= 1 {
            out.push((work, 1));
        }
        out.sort_by(|a, b| poly_order(&a.0, &b.0));
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.deg() >= 1 && {
            let fac = self.factor();
            fac.len() == 1 && fac[0].1 == 1
        }
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &crate::linalg::Matrix) -> crate::linalg::Matrix {
        use crate::linalg::Matrix;
        let n = a.rows();
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add_scalar(c);
        }
        acc
    }

    /// Text form, e.g. `x^2+2*x+1`; extension-field coefficients are wrapped in
    /// parentheses when they have more than one term.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            let cs = f.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (c == Elem::ONE, i) {
                (_, 0) => cs,
                (true, _) => mono,
                (false, _) => format!("{cs}*{mono}"),
            });
        }
        parts.join("+")
    }

    pub fn parse(field: &Field, s: &str) -> Result<Poly, String> {
        let mut p = Parser { field, src: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(format!("unexpected '{}' at offset {}", p.src[p.pos] as char, p.pos));
        }
        Ok(v)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Orders by degree, then by coefficients from the top down.
pub fn poly_order(a: &Poly, b: &Poly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

/// All monic polynomials of degree `d`, in index order of the lower coefficients.
pub fn monic_polys(field: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order();
    let count = q.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(field.elem(idx % q));
            idx /= q;
        }
        c.push(Elem::ONE);
        Poly::new(field, c)
    })
}

pub(crate) fn parse_constant(field: &Field, s: &str) -> Result<Elem, String> {
    let p = Poly::parse(field, s)?;
    match p.degree() {
        None => Ok(Elem::ZERO),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err("expected a constant".into()),
    }
}

struct Parser<'a> {
    field: &'a Field,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c.is_ascii_digit() || c == b'x' || c == b'g' || c == b'(' || c == b'[' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, String> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            let e = u32::try_from(e).map_err(|_| "exponent too large".to_string())?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn uint(&mut self) -> Result<u64, String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(format!("expected a number at offset {start}"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| format!("{e}"))
    }

    fn primary(&mut self) -> Result<Poly, String> {
        let f = self.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.uint()?;
                Ok(Poly::constant(f, f.from_int((v % f.characteristic() as u64) as i64)))
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Poly::x(f))
            }
            Some(b'g') => {
                self.pos += 1;
                if f.degree() == 1 {
                    return Err("'g' is only defined for extension fields".into());
                }
                Ok(Poly::constant(f, f.generator()))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'[') => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b']' {
                    self.pos += 1;
                }
                if self.pos == self.src.len() {
                    return Err("missing ']'".into());
                }
                self.pos += 1;
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let e = f.parse(text).map_err(|e| e.to_string())?;
                Ok(Poly::constant(f, e))
            }
            Some(c) => Err(format!("unexpected '{}' at offset {}", c as char, self.pos)),
            None => Err("unexpected end of input".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_division() {
        let f = Field::prime(5).unwrap();
        let a = Poly::from_ints(&f, &[1, 2, 3]);
        let b = Poly::from_ints(&f, &[4, 1]);
        let (q, r) = a.mul(&b).add(&Poly::from_ints(&f, &[2])).divrem(&b);
        assert_eq!(q, a);
        assert_eq!(r, Poly::from_ints(&f, &[2]));
        assert_eq!(a.gcd(&a.mul(&b)), a.monic());
    }

    #[test]
    fn factorization() {
        let f = Field::prime(2).unwrap();
        // x^4 + x = x (x+1) (x^2+x+1)
        let p = Poly::from_ints(&f, &[0, 1, 0, 0, 1]);
        let fac = p.factor();
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[2].0, Poly::from_ints(&f, &[1, 1, 1]));
        assert!(Poly::from_ints(&f, &[1, 1, 0, 1]).is_irreducible());
        assert!(!Poly::from_ints(&f, &[1, 0, 1]).is_irreducible());

        let f3 = Field::prime(3).unwrap();
        let sq = Poly::from_ints(&f3, &[1, 0, 1]).pow(2);
        assert_eq!(sq.factor(), vec![(Poly::from_ints(&f3, &[1, 0, 1]), 2)]);
    }

    #[test]
    fn parse_and_print() {
        let f = Field::prime(3).unwrap();
        let p = Poly::parse(&f, "(x-1)^2").unwrap();
        assert_eq!(p, Poly::from_ints(&f, &[1, 1, 1]));
        assert_eq!(p.to_text(), "x^2+x+1");
        assert_eq!(Poly::parse(&f, "x^2+x-1").unwrap(), Poly::from_ints(&f, &[2, 1, 1]));
        assert_eq!(Poly::parse(&f, "2x^3 + 4").unwrap(), Poly::from_ints(&f, &[1, 0, 0, 2]));
        assert!(Poly::parse(&f, "x^2+g").is_err());

        let f4 = Field::of_order(4).unwrap();
        let p = Poly::parse(&f4, "x^2+g*x+(g+1)").unwrap();
        assert_eq!(Poly::parse(&f4, &p.to_text()).unwrap(), p);
    }

    #[test]
    fn monic_enumeration() {
        let f = Field::prime(2).unwrap();
        let quads: Vec<Poly> = monic_polys(&f, 2).collect();
        assert_eq!(quads.len(), 4);
        assert_eq!(quads.iter().filter(|p| p.is_irreducible()).count(), 1);
    }
}
