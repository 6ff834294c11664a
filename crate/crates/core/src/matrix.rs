//! Dense exact linear algebra over `F_q`.
//!
//! Matrices do not carry their field; every operation that needs arithmetic
//! takes the `FieldCtx` explicitly. Subspaces are kept in reduced row echelon
//! form, so two subspaces are equal exactly when their representations are.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from base-`p` integer values in row-major order.
    pub fn from_values(f: &FieldCtx, rows: usize, cols: usize, values: &[u64]) -> Result<Self> {
        let data = values
            .iter()
            .map(|&v| f.element(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_data(rows, cols, data)
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(len: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        let mut m = Self::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: c.len(),
                });
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElement] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, f: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let (orow, srow) = (
                    other.row(k),
                    &mut out.data[i * other.cols..(i + 1) * other.cols],
                );
                f.axpy(srow, a, orow);
            }
        }
        Ok(out)
    }

    /// `A v`.
    pub fn mul_vec(&self, f: &FieldCtx, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| f.dot(self.row(i), v)).collect())
    }

    /// `u^T A v`.
    pub fn bilinear(
        &self,
        f: &FieldCtx,
        u: &[FieldElement],
        v: &[FieldElement],
    ) -> Result<FieldElement> {
        if u.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: u.len(),
            });
        }
        let av = self.mul_vec(f, v)?;
        Ok(f.dot(u, &av))
    }

    pub fn add(&self, f: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, f: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: impl Fn(FieldElement, FieldElement) -> FieldElement,
    ) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, f: &FieldCtx, a: FieldElement) -> Matrix {
        let data = self.data.iter().map(|&x| f.mul(a, x)).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self, f: &FieldCtx) -> Matrix {
        let data = self.data.iter().map(|&x| f.neg(x)).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `A^T = -A` with zero diagonal.
    pub fn is_antisymmetric(&self, f: &FieldCtx) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| self.get(i, j) == f.neg(self.get(j, i)))
            })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, f: &FieldCtx) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is non-zero");
            f.scale(inv, m.row_mut(row));
            let pivot_row: Vec<FieldElement> = m.row(row).to_vec();
            for i in 0..m.rows {
                if i != row {
                    let c = m.get(i, col);
                    if !c.is_zero() {
                        f.axpy(m.row_mut(i), f.neg(c), &pivot_row);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.rref(f).1.len()
    }

    /// Right null space `{x : A x = 0}`.
    pub fn kernel(&self, f: &FieldCtx) -> Subspace {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span(f, self.cols, &basis)
    }

    /// Row space.
    pub fn row_space(&self, f: &FieldCtx) -> Subspace {
        let (r, pivots) = self.rref(f);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient: self.cols,
            basis,
        }
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(r.submatrix(&rows, &cols))
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, f: &FieldCtx, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, &x) in b.iter().enumerate() {
            aug.set(i, self.cols, x);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    pub fn determinant(&self, f: &FieldCtx) -> Result<FieldElement> {
        self.require_square()?;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Ok(FieldElement::ZERO);
            };
            if pr != col {
                for j in 0..n {
                    m.data.swap(pr * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let piv = m.get(col, col);
            det = f.mul(det, piv);
            let inv = f.inv(piv)?;
            let pivot_row: Vec<FieldElement> = m.row(col).to_vec();
            for i in col + 1..n {
                let c = m.get(i, col);
                if !c.is_zero() {
                    f.axpy(m.row_mut(i), f.neg(f.mul(c, inv)), &pivot_row);
                }
            }
        }
        Ok(det)
    }

    /// Text form: a `rows cols q` header, then one line of values per row.
    pub fn to_text(&self, f: &FieldCtx) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, f.q());
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.value().to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses `to_text` output; the header's `q` must match the field.
    pub fn from_text(f: &FieldCtx, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Malformed("empty matrix file".into()))?;
        let nums = parse_numbers(header)?;
        let [rows, cols, q] = nums[..] else {
            return Err(Error::Malformed(format!(
                "header `{header}` is not `rows cols q`"
            )));
        };
        if q != f.q() as u64 {
            return Err(Error::Malformed(format!(
                "matrix over F_{q}, expected F_{}",
                f.q()
            )));
        }
        let (rows, cols) = (rows as usize, cols as usize);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Malformed(format!("missing row {i}")))?;
            let vals = parse_numbers(line)?;
            if vals.len() != cols {
                return Err(Error::Malformed(format!(
                    "row {i} has {} entries, expected {cols}",
                    vals.len()
                )));
            }
            for v in vals {
                data.push(f.element(v)?);
            }
        }
        if lines.next().is_some() {
            return Err(Error::Malformed("trailing rows".into()));
        }
        Self::from_data(rows, cols, data)
    }
}

/// Subspace of `F_q^ambient`, basis in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FieldElement>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Matrix::identity(ambient).row_space_unchecked()
    }

    pub fn span(f: &FieldCtx, ambient: usize, vectors: &[Vec<FieldElement>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        Matrix::from_rows(vectors)
            .expect("equal length vectors")
            .row_space(f)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::zeros(0, self.ambient);
        }
        Matrix::from_rows(&self.basis).expect("basis rows share the ambient length")
    }

    pub fn contains(&self, f: &FieldCtx, v: &[FieldElement]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(&rows)
            .map(|m| m.rank(f) == self.dim())
            .unwrap_or(false)
    }

    pub fn contains_subspace(&self, f: &FieldCtx, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    pub fn sum(&self, f: &FieldCtx, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient, &rows)
    }

    /// `{x : v . x = 0 for all v in self}` for the standard dot product.
    pub fn annihilator(&self, f: &FieldCtx) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        self.basis_matrix().kernel(f)
    }

    pub fn intersection(&self, f: &FieldCtx, other: &Subspace) -> Subspace {
        self.annihilator(f)
            .sum(f, &other.annihilator(f))
            .annihilator(f)
    }

    /// `{x : b^T G x = 0 for all b in self}`.
    pub fn perp(&self, f: &FieldCtx, gram: &Matrix) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        self.basis_matrix()
            .mul(f, gram)
            .expect("gram matches ambient")
            .kernel(f)
    }

    /// Extends a basis of `self` (a subspace of `outer`) to one of `outer`;
    /// returns the added vectors, which span a complement.
    pub fn complement_in(&self, f: &FieldCtx, outer: &Subspace) -> Vec<Vec<FieldElement>> {
        let mut current = self.clone();
        let mut added = Vec::new();
        for v in &outer.basis {
            if !current.contains(f, v) {
                added.push(v.clone());
                current = current.sum(
                    f,
                    &Subspace::span(f, self.ambient, core::slice::from_ref(v)),
                );
            }
        }
        added
    }

    /// Gram matrix `B G B^T` of the basis.
    pub fn restrict(&self, f: &FieldCtx, gram: &Matrix) -> Matrix {
        let b = self.basis_matrix();
        b.mul(f, gram)
            .and_then(|bg| bg.mul(f, &b.transpose()))
            .expect("gram matches ambient")
    }

    /// `b^T G b = 0` on the whole subspace (q odd: polarization vanishes).
    pub fn is_totally_singular(&self, f: &FieldCtx, gram: &Matrix) -> bool {
        self.restrict(f, gram).is_zero()
    }

    /// Same test for an alternating form: every pair of vectors is orthogonal.
    pub fn is_totally_isotropic(&self, f: &FieldCtx, form: &Matrix) -> bool {
        self.restrict(f, form).is_zero()
    }

    /// Number of projective points, `(q^dim - 1)/(q - 1)`.
    pub fn point_count(&self, f: &FieldCtx) -> u64 {
        let q = f.q() as u64;
        (q.pow(self.dim() as u32) - 1) / (q - 1)
    }

    /// All vectors of the subspace, in coefficient order.
    pub fn vectors(&self, f: &FieldCtx) -> Vec<Vec<FieldElement>> {
        let q = f.q() as usize;
        let total = q.pow(self.dim() as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut v = vec![FieldElement::ZERO; self.ambient];
            let mut t = idx;
            for b in &self.basis {
                let c = f.element((t % q) as u64).expect("digit below q");
                t /= q;
                f.axpy(&mut v, c, b);
            }
            out.push(v);
        }
        out
    }
}

impl Matrix {
    fn row_space_unchecked(&self) -> Subspace {
        Subspace {
            ambient: self.cols,
            basis: (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        }
    }
}

/// `ker(A - lambda I)`.
pub fn eigenspace(f: &FieldCtx, a: &Matrix, lambda: FieldElement) -> Result<Subspace> {
    a.require_square()?;
    let shifted = a.sub(f, &Matrix::identity(a.rows).scale(f, lambda))?;
    Ok(shifted.kernel(f))
}

/// Every non-zero `lambda` in `F_q` with a non-trivial eigenspace.
/// Only `F_q`-rational eigenvalues are considered.
pub fn nonzero_eigenvalues(f: &FieldCtx, a: &Matrix) -> Result<BTreeMap<FieldElement, Subspace>> {
    a.require_square()?;
    let mut out = BTreeMap::new();
    for lambda in f.nonzero() {
        let space = eigenspace(f, a, lambda)?;
        if space.dim() > 0 {
            out.insert(lambda, space);
        }
    }
    Ok(out)
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Malformed(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}
