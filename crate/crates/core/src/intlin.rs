//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form with transforms, cokernels and kernel ranks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntLinError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("ragged rows: row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("invalid torsion coefficients {0:?}: entries must be >= 2 and each must divide the next")]
    Torsion(Vec<BigInt>),
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, IntLinError> {
        if entries.len() != rows * cols {
            return Err(IntLinError::Shape {
                rows,
                cols,
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from machine-integer rows. An empty slice gives the 0x0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, IntLinError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(IntLinError::Ragged {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product, or `None` when the inner dimensions disagree.
    pub fn checked_mul(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Some(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination; `None` for non-square input.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Some(sign * &m[n - 1][n - 1])
    }

    /// True when every entry off the main diagonal is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * self.get(src, j);
            self.entries[dst * self.cols + j] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * self.get(i, src);
            self.entries[i * self.cols + dst] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = -v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `D`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn min_abs_nonzero(d: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in from..d.rows {
        for j in from..d.cols {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form with unimodular transforms. The diagonal of `D` is
/// nonnegative and each nonzero entry divides the next.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_nonzero(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let pivot = d.get(t, t).clone();
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / &pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / &pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
            }

            // Remainders smaller than the pivot become the next pivot.
            let mut smaller: Option<(usize, usize)> = None;
            let mut best = pivot.abs();
            for i in t + 1..m {
                let x = d.get(i, t).abs();
                if !x.is_zero() && x < best {
                    best = x;
                    smaller = Some((i, t));
                }
            }
            for j in t + 1..n {
                let x = d.get(t, j).abs();
                if !x.is_zero() && x < best {
                    best = x;
                    smaller = Some((t, j));
                }
            }
            if let Some((i, j)) = smaller {
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                continue;
            }

            // Row and column are clear; enforce divisibility on the rest.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition { u, d, v }
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank()
}

/// Dimension of the kernel of `a` acting on column vectors: `cols - rank`.
pub fn kernel_rank(a: &IntMatrix) -> usize {
    a.cols - rank(a)
}

/// Cokernel `Z^rows / a(Z^cols)` as invariant factors.
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let factors = smith_normal_form(a).invariant_factors();
    let free_rank = a.rows - factors.len();
    AbelianGroup::from_invariant_factors(free_rank, factors)
}

/// Finitely generated abelian group `Z^free_rank + Z_{t1} + ... + Z_{tk}`
/// with `t1 | t2 | ... | tk` and every `ti >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawGroup")]
pub struct AbelianGroup {
    free_rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, IntLinError> {
        let two = BigInt::from(2);
        let ok = torsion.iter().all(|t| *t >= two)
            && torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !ok {
            return Err(IntLinError::Torsion(torsion));
        }
        Ok(Self { free_rank, torsion })
    }

    /// `Z^free_rank + Z_{f1} + ...` for arbitrary cyclic orders: signs are
    /// dropped, zero orders count as free rank, and the rest is rewritten
    /// as a divisibility chain.
    pub fn from_invariant_factors(free_rank: usize, factors: Vec<BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut orders = Vec::new();
        for f in factors {
            let f = f.abs();
            if f.is_zero() {
                free_rank += 1;
            } else {
                orders.push(f);
            }
        }
        // after the pass for i, orders[i] divides every later entry
        for i in 0..orders.len() {
            for j in i + 1..orders.len() {
                let g = orders[i].gcd(&orders[j]);
                let l = &orders[i] / &g * &orders[j];
                orders[i] = g;
                orders[j] = l;
            }
        }
        let torsion = orders.into_iter().filter(|f| !f.is_one()).collect();
        Self { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// `Z_n`, read as `Z` for `n = 0` and as the trivial group for `|n| = 1`.
    pub fn cyclic(n: &BigInt) -> Self {
        Self::from_invariant_factors(0, vec![n.clone()])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Same torsion, new free rank.
    pub fn with_free_rank(&self, free_rank: usize) -> Self {
        Self {
            free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Direct sum, re-expressed in invariant-factor form.
    pub fn direct_sum(&self, other: &AbelianGroup) -> Self {
        let n = self.torsion.len() + other.torsion.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, t) in self.torsion.iter().chain(other.torsion.iter()).enumerate() {
            diag.set(i, i, t.clone());
        }
        cokernel(&diag).with_free_rank(self.free_rank + other.free_rank)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    free_rank: usize,
    torsion: Vec<NumberOrString>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Number(u64),
    Text(String),
}

impl TryFrom<RawGroup> for AbelianGroup {
    type Error = String;

    fn try_from(raw: RawGroup) -> Result<Self, Self::Error> {
        let torsion = raw
            .torsion
            .into_iter()
            .map(|t| match t {
                NumberOrString::Number(n) => Ok(BigInt::from(n)),
                NumberOrString::Text(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        AbelianGroup::new(raw.free_rank, torsion).map_err(|e| e.to_string())
    }
}

/// Integers that fit in `u64` are written as JSON numbers, larger ones as decimal strings.
fn serialize_bigints<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        match v.to_u64() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&v.to_string())?,
        }
    }
    seq.end()
}

pub(crate) fn serialize_bigint_list<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    serialize_bigints(values, s)
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
