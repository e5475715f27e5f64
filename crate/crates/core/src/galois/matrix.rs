use std::fmt::Write as _;
use std::sync::Arc;

use super::field::FieldSpec;
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`FieldSpec`], entries stored as encoded elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    field: Arc<FieldSpec>,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: CodeMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl CodeMatrix {
    pub fn new(field: Arc<FieldSpec>, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let q = field.order();
        if let Some(&bad) = data.iter().find(|&&v| v as u32 >= q) {
            return Err(Error::ElementOutOfRange { value: bad as u32, q });
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of encoded elements; all rows must share one length.
    pub fn from_rows<R: AsRef<[u32]>>(field: Arc<FieldSpec>, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for &v in r {
                if v >= field.order() {
                    return Err(Error::ElementOutOfRange {
                        value: v,
                        q: field.order(),
                    });
                }
                data.push(v as u8);
            }
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(field: Arc<FieldSpec>, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<FieldSpec>, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        assert!((v as u32) < self.field.order());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(Arc::clone(&self.field), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &CodeMatrix) -> Result<CodeMatrix> {
        if *self.field != *rhs.field {
            return Err(Error::MixedFields);
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(Arc::clone(f), self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u8;
                for l in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, l), rhs.get(l, j)));
                }
                out.data[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Rows `range` of `self`.
    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        let data = self.data[range.start * self.cols..range.end * self.cols].to_vec();
        Self {
            field: Arc::clone(&self.field),
            rows: range.len(),
            cols: self.cols,
            data,
        }
    }

    /// New matrix whose column `j` is column `order[j]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * order.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(order.iter().map(|&c| row[c]));
        }
        Self {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: order.len(),
            data,
        }
    }

    /// Stacks `self` on top of `lower`.
    pub fn vstack(&self, lower: &CodeMatrix) -> Result<Self> {
        if *self.field != *lower.field {
            return Err(Error::MixedFields);
        }
        if self.cols != lower.cols {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&lower.data);
        Ok(Self {
            field: Arc::clone(&self.field),
            rows: self.rows + lower.rows,
            cols: self.cols,
            data,
        })
    }

    /// Gauss–Jordan elimination with pivots normalised to one.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(lead, pr);
            let inv = f.inv(m.get(lead, c));
            m.scale_row(lead, inv);
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r != lead && factor != 0 {
                    m.add_scaled_row(r, lead, f.neg(factor));
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u8) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = self.field.mul(self.data[i], s);
        }
    }

    /// `row[dst] += s * row[src]`
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: u8) {
        for c in 0..self.cols {
            let v = self.field.mul(self.data[src * self.cols + c], s);
            let i = dst * self.cols + c;
            self.data[i] = self.field.add(self.data[i], v);
        }
    }

    /// Serialises to the matrix text format:
    ///
    /// ```text
    /// q=2^2 modulus=1,1,1
    /// 1 0 2
    /// 0 1 3
    /// ```
    ///
    /// A matrix with no rows additionally carries ` cols=<n>` on the header
    /// line so that its width survives the round trip.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        let mut s = format!("q={}^{} modulus={}", f.characteristic(), f.degree(), modulus.join(","));
        if self.rows == 0 {
            let _ = write!(s, " cols={}", self.cols);
        }
        s.push('\n');
        for r in self.row_iter() {
            let cells: Vec<String> = r.iter().map(u8::to_string).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let perr = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };

        let mut p = None;
        let mut m = None;
        let mut modulus = None;
        let mut declared_cols = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("q=") {
                let (a, b) = v.split_once('^').ok_or_else(|| perr(0, "expected q=p^m"))?;
                p = Some(a.parse::<u32>().map_err(|_| perr(0, "bad characteristic"))?);
                m = Some(b.parse::<u32>().map_err(|_| perr(0, "bad exponent"))?);
            } else if let Some(v) = tok.strip_prefix("modulus=") {
                let coeffs = v
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| perr(0, "bad modulus coefficient"))?;
                modulus = Some(coeffs);
            } else if let Some(v) = tok.strip_prefix("cols=") {
                declared_cols = Some(v.parse::<usize>().map_err(|_| perr(0, "bad cols"))?);
            } else {
                return Err(perr(0, &format!("unexpected header token '{tok}'")));
            }
        }
        let (p, m, modulus) = match (p, m, modulus) {
            (Some(p), Some(m), Some(md)) => (p, m, md),
            _ => return Err(perr(0, "header must contain q=p^m and modulus=")),
        };
        let field = FieldSpec::with_modulus(p, m, &modulus)?;

        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|c| c.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| perr(ln, "entries must be non-negative integers"))?;
            if let Some(&bad) = row.iter().find(|&&v| v >= field.order()) {
                return Err(perr(ln, &format!("entry {bad} out of range for q={}", field.order())));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(perr(ln, "ragged rows"));
                }
            }
            rows.push(row);
        }
        let cols = match (rows.first(), declared_cols) {
            (Some(r), Some(c)) if r.len() != c => return Err(perr(0, "cols= disagrees with row length")),
            (Some(r), _) => r.len(),
            (None, Some(c)) => c,
            (None, None) => 0,
        };
        Self::from_rows(field, cols, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Arc<FieldSpec> {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn identity_is_its_own_rref() {
        for q in [2, 3, 4, 5] {
            let id = CodeMatrix::identity(gf(q), 4);
            let r = id.rref();
            assert_eq!(r.matrix, id);
            assert_eq!(r.rank, 4);
            assert_eq!(r.pivots, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn dependent_rows_gf2() {
        let m = CodeMatrix::from_rows(gf(2), 2, &[[1, 1], [1, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(r.matrix, CodeMatrix::from_rows(gf(2), 2, &[[1, 1], [0, 0]]).unwrap());
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn singular_gf3() {
        // det = 1 - 4 = -3 = 0 mod 3; second row is twice the first
        let m = CodeMatrix::from_rows(gf(3), 2, &[[1, 2], [2, 1]]).unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, CodeMatrix::from_rows(gf(3), 2, &[[1, 2], [0, 0]]).unwrap());
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = CodeMatrix::zeros(gf(2), 0, 5);
        let r = m.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn text_roundtrip_gf4() {
        let m = CodeMatrix::from_rows(gf(4), 3, &[[1, 0, 2], [0, 1, 3]]).unwrap();
        let text = m.to_text();
        assert_eq!(text, "q=2^2 modulus=1,1,1\n1 0 2\n0 1 3\n");
        assert_eq!(CodeMatrix::from_text(&text).unwrap(), m);
        let empty = CodeMatrix::zeros(gf(3), 0, 6);
        assert_eq!(CodeMatrix::from_text(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!(CodeMatrix::from_text(""), Err(Error::Parse { .. })));
        assert!(matches!(
            CodeMatrix::from_text("q=2^1\n1 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(CodeMatrix::from_text("q=2^1 modulus=0,1\n1 0\n1\n").is_err());
        assert!(CodeMatrix::from_text("q=2^1 modulus=0,1\n1 2\n").is_err());
        assert!(CodeMatrix::from_text("q=6^1 modulus=0,1\n1 0\n").is_err());
        assert!(CodeMatrix::from_text("q=2^2 modulus=1,0,1\n1 0\n").is_err());
    }

    #[test]
    fn product_and_transpose() {
        let f = gf(3);
        let a = CodeMatrix::from_rows(f.clone(), 3, &[[1, 2, 0], [0, 1, 1]]).unwrap();
        let at = a.transpose();
        assert_eq!(at.rows(), 3);
        let g = a.mul(&at).unwrap();
        // [1+4, 2] = [2, 2]; [2, 2] mod 3
        assert_eq!(g, CodeMatrix::from_rows(f, 2, &[[2, 2], [2, 2]]).unwrap());
    }
}
