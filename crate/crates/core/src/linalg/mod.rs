//! Dense exact matrices over a finite field.
//!
//! Vectors are rows acting on the right (`v ↦ vA`) and conjugation is
//! `A^X = X⁻¹AX`.

mod centralizer;
mod charpoly;
mod lu;
mod smith;

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::field::{Elem, Extension, Field, FieldSpec};
use crate::poly::Poly;

pub use centralizer::{
    centralizer_basis, centralizer_det_image, conjugate, cyclic_vector, find_conjugator,
    is_similar, DetImage,
};
pub use charpoly::{charpoly, minpoly};
pub use lu::lu_decompose;
pub use smith::{invariant_factors, invariant_factors_by_nullity, InvariantFactors};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrices are over different fields")]
    MixedFields,
    #[error("a leading principal minor vanishes; no LU decomposition")]
    NoLu,
    #[error("matrix is not cyclic")]
    NotCyclic,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|&e| self.field.format(e)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, Elem::ONE)
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn diag(field: &Field, d: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(field, d.len(), d.len());
        for (i, &c) in d.iter().enumerate() {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Matrix, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix::from_vec(field, r, c, rows.concat()))
    }

    /// Square matrix from integer entries (reduced into the prime field).
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let r: Vec<Vec<Elem>> =
            rows.iter().map(|row| row.iter().map(|&v| field.from_int(v)).collect()).collect();
        Matrix::from_rows(field, &r).expect("rectangular input")
    }

    /// Companion matrix of a monic polynomial: ones on the superdiagonal and
    /// `-a_0, …, -a_{n-1}` in the last row, so `e_1` is a cyclic vector.
    pub fn companion(f: &Poly) -> Matrix {
        assert!(f.is_monic() && f.deg() >= 1, "companion needs a monic polynomial of degree >= 1");
        let field = f.field();
        let n = f.deg();
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = Elem::ONE;
        }
        for j in 0..n {
            m[(n - 1, j)] = field.neg(f.coeff(j));
        }
        m
    }

    /// Upper triangular Jordan block `J_n(λ)`.
    pub fn jordan(field: &Field, n: usize, lambda: Elem) -> Matrix {
        let mut m = Matrix::scalar(field, n, lambda);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = Elem::ONE;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        let c = self[(0, 0)];
        (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { c } else { Elem::ZERO }))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    fn check_same(&self, other: &Matrix, what: &str) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::MixedFields);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same(other, "add")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same(other, "sub")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::MixedFields);
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    out.data[base + j] = f.add(out.data[base + j], f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    fn clone_shape(&self) -> Matrix {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    /// Panics on shape mismatch.
    pub fn add(&self, other: &Matrix) -> Matrix {
        self.checked_add(other).expect("matrix add")
    }

    /// Panics on shape mismatch.
    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.checked_sub(other).expect("matrix sub")
    }

    /// Panics on shape mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.checked_mul(other).expect("matrix mul")
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|&a| f.mul(a, c)).collect(), ..self.clone_shape() }
    }

    /// `A + cI`
    pub fn add_scalar(&self, c: Elem) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = self.field.add(m[(i, i)], c);
        }
        m
    }

    /// `A - λI`
    pub fn sub_scalar(&self, lambda: Elem) -> Matrix {
        self.add_scalar(self.field.neg(lambda))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn trace(&self) -> Elem {
        self.field.sum((0..self.rows.min(self.cols)).map(|i| self[(i, i)]))
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> Elem {
        let f = &self.field;
        let mut acc = Elem::ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = f.add(acc, f.mul(self[(i, k)], other[(k, i)]));
            }
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self[(r, c)]);
            for j in c..cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let m = self[(i, c)];
                if m.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let v = f.mul(m, self[(r, j)]);
                    self[(i, j)] = f.sub(self[(i, j)], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn det(&self) -> Elem {
        assert!(self.is_square(), "det of a non-square matrix");
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else { return Elem::ZERO };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = m[c * n + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in c + 1..n {
                let factor = f.mul(m[i * n + c], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    m[i * n + j] = f.sub(m[i * n + j], f.mul(factor, m[c * n + j]));
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Elem::ONE;
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.field, h, w);
        for i in 0..h {
            for j in 0..w {
                m[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(field: &Field, blocks: &[&Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn oplus(&self, other: &Matrix) -> Matrix {
        Matrix::direct_sum(&self.field, &[self, other])
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(vi, self[(i, j)]));
            }
        }
        out
    }

    /// Basis of `{x : A x = 0}` (column vectors).
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r[(row, fc)]);
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(row, self.cols)];
        }
        Some(x)
    }

    /// Copies the matrix into an extension field.
    pub fn embed(&self, ext: &Extension) -> Matrix {
        Matrix {
            field: ext.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| ext.embed(a)).collect(),
        }
    }

    /// Fixed-width row-major encoding of the element indices; used as a hash key.
    pub fn key(&self) -> Vec<u8> {
        encode_key(&self.field, &self.data)
    }
}

impl Matrix {
    /// `{"n", "field", "rows"}` with entries in the field text form.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|&e| self.field.format(e)).collect()).collect();
        serde_json::json!({ "n": self.rows, "field": self.field.spec(), "rows": rows })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Matrix, String> {
        let spec: FieldSpec =
            serde_json::from_value(value.get("field").cloned().ok_or("missing field")?).map_err(|e| e.to_string())?;
        let field = Field::from_spec(&spec).map_err(|e| e.to_string())?;
        let rows = value.get("rows").and_then(|r| r.as_array()).ok_or("missing rows")?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or("row is not an array")?;
            let parsed: Result<Vec<Elem>, String> = row
                .iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => field.parse(s).map_err(|e| e.to_string()),
                    serde_json::Value::Number(n) => {
                        n.as_i64().map(|i| field.from_int(i)).ok_or_else(|| "bad entry".to_string())
                    }
                    _ => Err("bad entry".to_string()),
                })
                .collect();
            out.push(parsed?);
        }
        let m = Matrix::from_rows(&field, &out).map_err(|e| e.to_string())?;
        if !m.is_square() {
            return Err("matrix is not square".into());
        }
        Ok(m)
    }
}

pub(crate) fn encode_key(field: &Field, data: &[Elem]) -> Vec<u8> {
    if field.order() <= 256 {
        data.iter().map(|e| e.index() as u8).collect()
    } else {
        data.iter().flat_map(|e| (e.index() as u16).to_le_bytes()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(Matrix::identity(&f5, 3).trace(), f5.from_int(3));
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]).det(), Elem::ONE);
        let f3 = Field::prime(3).unwrap();
        let ones = Matrix::from_ints(&f3, &[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(ones.rank(), 1);
        assert_eq!(ones.det(), Elem::ZERO);
        assert_eq!(ones.inverse().unwrap_err(), LinalgError::Singular);
    }

    #[test]
    fn dimension_and_field_errors() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let a = Matrix::identity(&f3, 2);
        let b = Matrix::identity(&f3, 3);
        assert!(matches!(a.checked_mul(&b), Err(LinalgError::DimensionMismatch(_))));
        assert!(matches!(a.checked_add(&b), Err(LinalgError::DimensionMismatch(_))));
        assert_eq!(a.checked_mul(&Matrix::identity(&f5, 2)).unwrap_err(), LinalgError::MixedFields);
    }

    #[test]
    fn inverse_and_transpose() {
        let f7 = Field::prime(7).unwrap();
        let a = Matrix::from_ints(&f7, &[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&f7, 3));
        assert_eq!(a.transpose().det(), a.det());
        assert_eq!(a.mul(&a).det(), f7.mul(a.det(), a.det()));
    }

    #[test]
    fn nullspace_and_solve() {
        let f3 = Field::prime(3).unwrap();
        let a = Matrix::from_ints(&f3, &[&[1, 1, 1], &[1, 2, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        let col = Matrix::from_vec(&f3, 3, 1, ns[0].clone());
        assert!(a.mul(&col).is_zero());
        let b = vec![f3.from_int(1), f3.from_int(2)];
        let x = a.solve(&b).unwrap();
        let xm = Matrix::from_vec(&f3, 3, 1, x);
        assert_eq!(a.mul(&xm).data(), &b[..]);
    }

    #[test]
    fn json_round_trip() {
        let f9 = Field::of_order(9).unwrap();
        let g = f9.generator();
        let a = Matrix::from_rows(&f9, &[vec![g, Elem::ONE], vec![f9.mul(g, g), Elem::ZERO]]).unwrap();
        let j = a.to_json();
        assert_eq!(j["n"], 2);
        assert_eq!(Matrix::from_json(&j).unwrap(), a);
    }

    #[test]
    fn blocks() {
        let f2 = Field::prime(2).unwrap();
        let a = Matrix::from_ints(&f2, &[&[1, 1], &[0, 1]]);
        let b = Matrix::identity(&f2, 1);
        let s = a.oplus(&b);
        assert_eq!(s.rows(), 3);
        assert_eq!(s.submatrix(0, 0, 2, 2), a);
        assert_eq!(s[(2, 2)], Elem::ONE);
        assert_eq!(s[(0, 2)], Elem::ZERO);
    }
}
