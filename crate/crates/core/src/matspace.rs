//! Dense matrices over a [`Field`] and canonical row spaces.
//!
//! A [`Subspace`] always stores its basis in reduced row echelon form with no
//! zero rows, so two subspaces are equal exactly when their bases are equal
//! entry by entry.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::galois::{Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over {:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::ElementOutOfRange {
                rep: bad.0,
                order: field.order(),
            });
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is needed for the empty case.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Fe>]) -> Result<Matrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    /// Convenience constructor from integer reps.
    pub fn from_reps(field: &Field, rows: &[&[u32]]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&x| Fe(x)).collect()).collect();
        Matrix::from_rows(field, cols, &rows)
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

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_reps(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.0).collect())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(Fe) -> Fe) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            data.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Reduced row echelon form with zero rows dropped, and the pivot columns.
    pub fn echelon(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    a.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                a[r * cols + j] = f.mul(a[r * cols + j], inv);
            }
            for i in 0..rows {
                let factor = a[i * cols + c];
                if i == r || factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = a[r * cols + j];
                    if !v.is_zero() {
                        a[i * cols + j] = f.add(a[i * cols + j], f.mul(neg, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r * cols);
        (
            Matrix {
                field: f.clone(),
                rows: r,
                cols,
                data: a,
            },
            pivots,
        )
    }

    /// Reduced row echelon form (zero rows removed) and the rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let (m, piv) = self.echelon();
        (m, piv.len())
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// The right kernel `{x : M x^T = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.echelon();
        let f = &self.field;
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fe::ZERO; n];
            v[free] = Fe::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        let m = Matrix::from_rows(f, n, &basis).expect("kernel rows have the ambient length");
        Subspace::from_matrix(&m)
    }

    /// Parses the text format: a header `rows cols p m` followed by the rows.
    pub fn parse(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(Error::Parse("empty input".into()))?;
        let h: Vec<u32> = parse_ints(header)?;
        let [rows, cols, p, m] = h[..] else {
            return Err(Error::Parse(format!("header needs 4 integers, got {header:?}")));
        };
        let field = Field::new(p, m)?;
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let vals = parse_ints(line)?;
            if vals.len() != cols as usize {
                return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", vals.len())));
            }
            data.extend(vals.into_iter().map(Fe));
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after the declared count".into()));
        }
        Matrix::new(&field, rows as usize, cols as usize, data)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_ints(line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {} {}",
            self.rows,
            self.cols,
            self.field.characteristic(),
            self.field.degree()
        )?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Matrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Matrix> {
        Matrix::parse(s)
    }
}

/// A row space in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (basis, pivots) = m.echelon();
        Subspace { basis, pivots }
    }

    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis in reduced row echelon form.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.ambient() != other.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    /// The orthogonal complement under the standard dot product.
    pub fn orthogonal(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(Subspace::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection computed as the complement of the sum of complements.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let stacked = self.orthogonal().basis.vstack(&other.orthogonal().basis)?;
        Ok(stacked.kernel())
    }

    /// Membership test by reduction against the echelon basis.
    pub fn contains(&self, v: &[Fe]) -> bool {
        if v.len() != self.ambient() {
            return false;
        }
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            let neg = f.neg(c);
            for (j, x) in self.basis.row(i).iter().enumerate() {
                w[j] = f.add(w[j], f.mul(neg, *x));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Image under an entrywise map that is a field automorphism.
    pub fn map_entries(&self, f: impl Fn(Fe) -> Fe) -> Subspace {
        Subspace::from_matrix(&self.basis.map(f))
    }
}
