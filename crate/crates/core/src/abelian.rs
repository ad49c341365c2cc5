//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Matrices act on row vectors: a relation matrix has one row per relation and
//! one column per generator, and a homomorphism `Z^a -> Z^b` is an `a x b`
//! matrix whose row `i` is the image of the `i`-th basis vector. A finitely
//! generated abelian group is the cokernel `Z^cols / rowspace(A)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map is not well defined on the given relations")]
    NotWellDefined,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed for the 0-row case.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(cols, &owned)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[BigInt]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, AbelianError> {
        if self.cols != other.cols {
            return Err(AbelianError::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, AbelianError> {
        if self.cols != other.rows {
            return Err(AbelianError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * self.get(i, j);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u * a * v = s` with `s` diagonal and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with transforms.
///
/// Pivot is always the entry of smallest nonzero absolute value in the active
/// block, ties broken by row-major position.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = smallest_entry(&s, t..r, t..c) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t) / s.get(t, t));
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !s.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j) / s.get(t, t));
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !s.get(t, j).is_zero();
            }
            if dirty {
                // a remainder smaller than the pivot survived in row or column t
                let mut best = (t, t);
                for i in t + 1..r {
                    if !s.get(i, t).is_zero() && s.get(i, t).abs() < s.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !s.get(t, j).is_zero() && s.get(t, j).abs() < s.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    s.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    s.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            let pivot = s.get(t, t).clone();
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfResult { s, u, v }
}

fn smallest_entry(m: &IntMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with
/// `d1 | d2 | ... | dk` and every `di ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FinGenAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinGenAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FinGenAbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds from torsion coefficients given as small integers.
    pub fn from_parts(free_rank: usize, torsion: &[u64]) -> Self {
        FinGenAbelianGroup { free_rank, torsion: torsion.iter().map(|&d| BigInt::from(d)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(|d| d.to_u64()).collect()
    }
}

impl fmt::Display for FinGenAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl Serialize for FinGenAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FinGenAbelianGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("label", &self.to_string())?;
        st.end()
    }
}

/// `Z^cols / rowspace(a)`.
pub fn cokernel(a: &IntMatrix) -> FinGenAbelianGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    let torsion = diag[..rank].iter().filter(|d| !d.is_one()).cloned().collect();
    FinGenAbelianGroup { free_rank: a.cols - rank, torsion }
}

/// Row-style Hermite normal form: an echelon basis of the row space.
///
/// Pivots are positive, entries above each pivot lie in `[0, pivot)`, and zero
/// rows are dropped.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        loop {
            let best = (pivot_row..m.rows)
                .filter(|&i| !m.get(i, col).is_zero())
                .min_by(|&x, &y| m.get(x, col).abs().cmp(&m.get(y, col).abs()).then(x.cmp(&y)));
            let Some(best) = best else { break };
            m.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m.rows {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let q = -(m.get(i, col) / m.get(pivot_row, col));
                m.add_row(i, pivot_row, &q);
                done &= m.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if pivot_row < m.rows && !m.get(pivot_row, col).is_zero() {
            if m.get(pivot_row, col).is_negative() {
                m.negate_row(pivot_row);
            }
            let p = m.get(pivot_row, col).clone();
            for i in 0..pivot_row {
                let q = -m.get(i, col).div_floor(&p);
                if !q.is_zero() {
                    m.add_row(i, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..pivot_row).map(|i| m.row(i).to_vec()).collect();
    IntMatrix::from_rows(m.cols, &rows)
}

/// Coefficients `y` with `y · basis = x`, where `basis` is in Hermite normal
/// form. `None` if `x` is not in the row space.
pub fn solve_in_row_space(basis: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(x.len(), basis.cols);
    let mut rest = x.to_vec();
    let mut coeffs = Vec::with_capacity(basis.rows);
    for k in 0..basis.rows {
        let row = basis.row(k);
        let p = row.iter().position(|v| !v.is_zero()).expect("zero row in HNF basis");
        // entries left of this pivot must already be cleared
        if rest[..p].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        for (j, v) in row.iter().enumerate() {
            rest[j] -= &q * v;
        }
        coeffs.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coeffs)
}

pub fn row_space_contains(basis: &IntMatrix, x: &[BigInt]) -> bool {
    solve_in_row_space(basis, x).is_some()
}

/// A basis of the left kernel `{ y : y · a = 0 }`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let rows: Vec<Vec<BigInt>> = (rank..a.rows).map(|i| snf.u.row(i).to_vec()).collect();
    IntMatrix::from_rows(a.rows, &rows)
}

/// Outcome of an exactness test at the middle group of `A -f-> B -g-> C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub image_in_kernel: bool,
    pub kernel_in_image: bool,
    pub exact: bool,
    /// `ker g / im f`, only meaningful when `image_in_kernel` holds.
    pub homology: Option<FinGenAbelianGroup>,
    pub middle: FinGenAbelianGroup,
}

/// Decides `im f = ker g` at `B = Z^b / rowspace(b_relations)`, where
/// `C = Z^c / rowspace(c_relations)`, `f` is `a x b` and `g` is `b x c`.
///
/// All computations happen in the free covers.
pub fn induced_map_exactness(
    f: &IntMatrix,
    g: &IntMatrix,
    b_relations: &IntMatrix,
    c_relations: &IntMatrix,
) -> Result<ExactnessReport, AbelianError> {
    if f.cols != g.rows {
        return Err(AbelianError::DimensionMismatch(format!("f has {} columns but g has {} rows", f.cols, g.rows)));
    }
    if b_relations.cols != f.cols {
        return Err(AbelianError::DimensionMismatch(format!(
            "B relations have {} columns, expected {}",
            b_relations.cols, f.cols
        )));
    }
    if c_relations.cols != g.cols {
        return Err(AbelianError::DimensionMismatch(format!(
            "C relations have {} columns, expected {}",
            c_relations.cols, g.cols
        )));
    }
    let c_basis = hermite_normal_form(c_relations);
    // g must send relations of B into relations of C
    for r in b_relations.row_vectors() {
        if !row_space_contains(&c_basis, &g.apply_row(&r)) {
            return Err(AbelianError::NotWellDefined);
        }
    }

    let image = f.vstack(b_relations)?;
    let image_basis = hermite_normal_form(&image);

    // ker g = projection to the first b coordinates of the left kernel of [g; R_C]
    let stacked = g.vstack(c_relations)?;
    let lk = left_kernel(&stacked);
    let kernel_rows: Vec<Vec<BigInt>> = lk.row_vectors().into_iter().map(|r| r[..g.rows].to_vec()).collect();
    let kernel = IntMatrix::from_rows(g.rows, &kernel_rows).vstack(b_relations)?;
    let kernel_basis = hermite_normal_form(&kernel);

    let image_in_kernel = image_basis.row_vectors().iter().all(|x| row_space_contains(&c_basis, &g.apply_row(x)));
    let kernel_in_image = kernel_basis.row_vectors().iter().all(|x| row_space_contains(&image_basis, x));

    let homology = image_in_kernel.then(|| {
        let coords: Vec<Vec<BigInt>> = image_basis
            .row_vectors()
            .iter()
            .map(|x| solve_in_row_space(&kernel_basis, x).expect("image inside kernel"))
            .collect();
        cokernel(&IntMatrix::from_rows(kernel_basis.rows, &coords))
    });

    Ok(ExactnessReport {
        image_in_kernel,
        kernel_in_image,
        exact: image_in_kernel && kernel_in_image,
        homology,
        middle: cokernel(b_relations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        let prod = r.u.mul(a).unwrap().mul(&r.v).unwrap();
        assert_eq!(prod, r.s, "u·a·v != s for {a:?}");
        assert!(r.u.determinant().abs().is_one());
        assert!(r.v.determinant().abs().is_one());
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "chain broken: {d:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        r
    }

    #[test]
    fn snf_identity() {
        let r = check_snf(&IntMatrix::identity(3));
        assert_eq!(r.s, IntMatrix::identity(3));
    }

    #[test]
    fn snf_two_by_two() {
        let r = check_snf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_empty_shapes() {
        check_snf(&IntMatrix::zeros(0, 2));
        check_snf(&IntMatrix::zeros(3, 0));
        check_snf(&IntMatrix::zeros(2, 2));
    }

    #[test]
    fn snf_no_overflow_on_large_entries() {
        let big = i64::MAX;
        let r = check_snf(&m(&[&[big, big - 1], &[big - 2, big]]));
        assert_eq!(r.diagonal()[0], BigInt::one());
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::zeros(0, 2)), FinGenAbelianGroup::free(2));
        assert_eq!(cokernel(&m(&[&[3]])), FinGenAbelianGroup::from_parts(0, &[3]));
        assert_eq!(cokernel(&m(&[&[2, 0], &[0, 2], &[2, 2]])), FinGenAbelianGroup::from_parts(0, &[2, 2]));
        assert_eq!(cokernel(&m(&[&[2, 0], &[0, 3]])), FinGenAbelianGroup::from_parts(0, &[6]));
    }

    #[test]
    fn display_of_groups() {
        assert_eq!(FinGenAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FinGenAbelianGroup::from_parts(2, &[2, 4]).to_string(), "Z^2 x Z/2 x Z/4");
    }

    #[test]
    fn hnf_and_membership() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        assert!(row_space_contains(&h, &[BigInt::from(4), BigInt::from(-8)]));
        assert!(!row_space_contains(&h, &[BigInt::from(2), BigInt::from(2)]));
        let y = solve_in_row_space(&h, &[BigInt::from(6), BigInt::from(8)]).unwrap();
        assert_eq!(y, vec![BigInt::from(3), BigInt::from(2)]);
    }

    #[test]
    fn left_kernel_is_annihilating() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn exactness_zero_then_injective() {
        // 0 -> Z -> Z with g = id
        let f = m(&[&[0]]);
        let g = m(&[&[1]]);
        let r = induced_map_exactness(&f, &g, &IntMatrix::zeros(0, 1), &IntMatrix::zeros(0, 1)).unwrap();
        assert!(r.exact);
    }

    #[test]
    fn exactness_times_two_then_mod_two() {
        let f = m(&[&[2]]);
        let g = m(&[&[1]]);
        let c_rel = m(&[&[2]]);
        let r = induced_map_exactness(&f, &g, &IntMatrix::zeros(0, 1), &c_rel).unwrap();
        assert!(r.exact);
        assert_eq!(r.homology, Some(FinGenAbelianGroup::trivial()));
    }

    #[test]
    fn non_exact_sequence_reports_homology() {
        // Z -4-> Z -> Z/2 : kernel 2Z, image 4Z, homology Z/2
        let r = induced_map_exactness(&m(&[&[4]]), &m(&[&[1]]), &IntMatrix::zeros(0, 1), &m(&[&[2]])).unwrap();
        assert!(r.image_in_kernel);
        assert!(!r.kernel_in_image);
        assert_eq!(r.homology, Some(FinGenAbelianGroup::from_parts(0, &[2])));
    }

    #[test]
    fn exactness_dimension_mismatch() {
        let err = induced_map_exactness(&m(&[&[1, 0]]), &m(&[&[1]]), &IntMatrix::zeros(0, 2), &IntMatrix::zeros(0, 1))
            .unwrap_err();
        assert!(matches!(err, AbelianError::DimensionMismatch(_)));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // Z/2 -> Z by 1 is not a homomorphism
        let err = induced_map_exactness(&m(&[&[1]]), &m(&[&[1]]), &m(&[&[2]]), &IntMatrix::zeros(0, 1)).unwrap_err();
        assert_eq!(err, AbelianError::NotWellDefined);
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
        (0..=max_dim, 0..=max_dim).prop_flat_map(|(r, c)| {
            prop::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).take(r).map(|x| x.to_vec()).collect();
                if c == 0 {
                    IntMatrix::zeros(r, 0)
                } else {
                    IntMatrix::from_rows(c, &rows)
                }
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn snf_transform_identity(a in small_matrix(6)) {
            check_snf(&a);
        }

        #[test]
        fn cokernel_invariant_under_column_permutation(a in small_matrix(4), seed in any::<u64>()) {
            let c = a.cols();
            prop_assume!(c > 1);
            let (x, y) = ((seed as usize) % c, (seed as usize / 7) % c);
            let mut b = a.clone();
            b.swap_cols(x, y);
            b.swap_rows(0, (seed as usize / 3) % b.rows().max(1));
            prop_assert_eq!(cokernel(&a), cokernel(&b));
        }

        #[test]
        fn cokernel_invariant_under_unimodular_row_ops(a in small_matrix(4), q in -5i64..=5) {
            prop_assume!(a.rows() >= 2);
            let mut b = a.clone();
            b.add_row(1, 0, &BigInt::from(q));
            prop_assert_eq!(cokernel(&a), cokernel(&b));
        }
    }
}
