//! Finitely generated abelian groups and homomorphisms between them.
//!
//! A group `Z^r + Z/d_1 + ... + Z/d_k` (with `d_1 | d_2 | ... | d_k`) has
//! `r + k` standard generators: the free ones first, then the torsion ones
//! in chain order. Elements and homomorphism matrices are written in those
//! coordinates; torsion coordinates are kept reduced into `[0, d)`.
//!
//! Kernels, images and cokernels are computed on the level of lattices in
//! `Z^n`: a group is `Z^n` modulo the diagonal torsion relations, and every
//! subquotient is brought back to canonical form through Smith normal form.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("torsion coefficients {0:?} do not form a divisor chain of integers >= 2")]
    NotCanonical(Vec<u64>),
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("ill-defined map: generator {generator} of order {order} is sent to a non-torsion-compatible image")]
    IllDefined { generator: usize, order: u64 },
    #[error("maps {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("element has {found} coordinates, group has {expected} generators")]
    Coordinates { found: usize, expected: usize },
    #[error("element is not in the subgroup")]
    NotInSubgroup,
    #[error("constraint list is empty; the enumeration would be unbounded")]
    Unbounded,
    #[error("tensor factor must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("cannot parse group {0:?}; expected e.g. \"Z^2 + Z/2 + Z/4\" or \"0\"")]
    Parse(String),
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// `rows x cols` matrix from row-major data; an empty matrix may have
    /// any number of rows or columns.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Matrix product, accumulated in `i128` so that only the result has to
    /// fit in `i64`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimensions do not agree");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let sum: i128 = (0..self.cols).map(|k| self[(i, k)] as i128 * other[(k, j)] as i128).sum();
                out[(i, j)] = i64::try_from(sum).expect("matrix product entry exceeds i64");
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = IntMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Keeps the first `n` rows.
    pub fn top_rows(&self, n: usize) -> IntMatrix {
        IntMatrix { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    pub fn select_columns(&self, cols: impl IntoIterator<Item = usize>) -> IntMatrix {
        let cols: Vec<usize> = cols.into_iter().collect();
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        (sign * a[n * n - 1]) as i64
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// col[target] += c * col[source]
    fn add_col(&mut self, target: usize, source: usize, c: i64) {
        for i in 0..self.rows {
            let v = self[(i, source)];
            self[(i, target)] += c * v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `left * A * right = diagonal`, with `left`, `right` unimodular and the
/// nonnegative diagonal forming a divisor chain (zeros last).
///
/// Transform entries grow roughly like the square of the largest minor, so
/// they fit in `i64` for the small presentation matrices used here (5x5 with
/// single-digit entries stays below 1e12); larger inputs panic rather than
/// wrap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    pub divisors: Vec<i64>,
}

impl SmithNormalForm {
    /// Number of nonzero divisors.
    pub fn rank(&self) -> usize {
        self.divisors.iter().take_while(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithNormalForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = Wide::from(a);
    let mut u = Wide::identity(m);
    let mut v = Wide::identity(n);

    for t in 0..m.min(n) {
        // pivot: smallest nonzero entry in the remaining block
        let Some((pi, pj)) = d.smallest_nonzero(t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                let q = nearest_quotient(d[(i, t)], d[(t, t)]);
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                clean &= d[(i, t)] == 0;
            }
            for j in t + 1..n {
                let q = nearest_quotient(d[(t, j)], d[(t, t)]);
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= d[(t, j)] == 0;
            }
            if clean {
                // divisibility of the rest of the block by the pivot
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[(i, j)] % d[(t, t)] != 0));
                match offender {
                    None => break,
                    Some(i) => {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                        continue;
                    }
                }
            }
            let (pi, pj) = d.smallest_nonzero(t).expect("block still has nonzero entries");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let (left, diagonal, right) = (u.narrow(), d.narrow(), v.narrow());
    let divisors = (0..m.min(n)).map(|i| diagonal[(i, i)]).collect();
    SmithNormalForm { left, diagonal, right, divisors }
}

/// `x / p` rounded to the nearest integer, so the remainder has absolute
/// value at most `|p| / 2`.
fn nearest_quotient(x: i128, p: i128) -> i128 {
    let q = x.div_euclid(p);
    let r = x.rem_euclid(p);
    if 2 * r > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

/// Working copy for elimination, wide enough that transform entries do not
/// overflow on moderately sized inputs.
#[derive(Clone)]
struct Wide {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl From<&IntMatrix> for Wide {
    fn from(a: &IntMatrix) -> Self {
        Wide { rows: a.rows, cols: a.cols, data: a.data.iter().map(|&x| x as i128).collect() }
    }
}

impl Wide {
    fn identity(n: usize) -> Self {
        Wide::from(&IntMatrix::identity(n))
    }

    fn narrow(&self) -> IntMatrix {
        let data = self
            .data
            .iter()
            .map(|&x| i64::try_from(x).expect("Smith normal form entry exceeds i64"))
            .collect();
        IntMatrix::from_vec(self.rows, self.cols, data)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += c * row[source]
    fn add_row(&mut self, target: usize, source: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(source, j)];
            self[(target, j)] += c * v;
        }
    }

    /// col[target] += c * col[source]
    fn add_col(&mut self, target: usize, source: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, source)];
            self[(i, target)] += c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self[(i, j)].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < self[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

impl std::ops::Index<(usize, usize)> for Wide {
    type Output = i128;

    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Wide {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Basis (as columns) of the integer kernel of `a`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    snf.right.select_columns(rank..a.cols)
}

/// Column echelon basis of the lattice spanned by the columns of `a`:
/// column `j` of the result has its first nonzero entry (positive) in row
/// `pivots[j]`, strictly increasing in `j`.
fn column_echelon(a: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let mut h = a.clone();
    let mut pivots = Vec::new();
    let mut next = 0;
    for row in 0..h.rows {
        if next == h.cols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (next..h.cols).filter(|&j| h[(row, j)] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&j| h[(row, j)].abs()).expect("nonempty");
            h.swap_cols(next, best);
            if nonzero.len() == 1 {
                if h[(row, next)] < 0 {
                    for i in 0..h.rows {
                        h[(i, next)] = -h[(i, next)];
                    }
                }
                pivots.push(row);
                next += 1;
                break;
            }
            for j in next + 1..h.cols {
                let q = Integer::div_floor(&h[(row, j)], &h[(row, next)]);
                if q != 0 {
                    h.add_col(j, next, -q);
                }
            }
        }
    }
    (h.select_columns(0..next), pivots)
}

/// Coordinates of `target` in an echelon basis; errors if it is not in the span.
fn solve_in_echelon(basis: &IntMatrix, pivots: &[usize], target: &[i64]) -> Result<Vec<i64>, GroupError> {
    let mut rest = target.to_vec();
    let mut coeffs = Vec::with_capacity(pivots.len());
    for (j, &p) in pivots.iter().enumerate() {
        let b = basis[(p, j)];
        if rest[p] % b != 0 {
            return Err(GroupError::NotInSubgroup);
        }
        let c = rest[p] / b;
        for (i, r) in rest.iter_mut().enumerate() {
            *r -= c * basis[(i, j)];
        }
        coeffs.push(c);
    }
    if rest.iter().any(|&x| x != 0) {
        return Err(GroupError::NotInSubgroup);
    }
    Ok(coeffs)
}

/// The group `span(generators) / span(relations)`; every relation must lie
/// in the span of the generators.
fn subquotient(generators: &IntMatrix, relations: &IntMatrix) -> Result<FgAbGroup, GroupError> {
    let (basis, pivots) = column_echelon(generators);
    let mut coeffs = IntMatrix::zeros(basis.cols, relations.cols);
    for j in 0..relations.cols {
        let c = solve_in_echelon(&basis, &pivots, &relations.column(j))?;
        for (i, x) in c.into_iter().enumerate() {
            coeffs[(i, j)] = x;
        }
    }
    Ok(cokernel_of_matrix(&coeffs))
}

/// `Z^rows / span(columns)` in canonical form.
fn cokernel_of_matrix(a: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let torsion: Vec<u64> = snf.divisors[..rank].iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    FgAbGroup { rank: a.rows - rank, torsion }
}

/// `Z^r + Z/d_1 + ... + Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgAbGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self, GroupError> {
        let chain_ok = torsion.iter().all(|&d| d >= 2) && torsion.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(GroupError::NotCanonical(torsion));
        }
        Ok(FgAbGroup { rank, torsion })
    }

    /// Canonical form of `Z^rank + Z/o_1 + Z/o_2 + ...` for arbitrary orders
    /// `o_i >= 1` (an order of 0 contributes a free summand).
    pub fn from_cyclic_orders(rank: usize, orders: &[u64]) -> Self {
        let diag: Vec<i64> = orders.iter().map(|&o| o as i64).collect();
        let mut g = cokernel_of_matrix(&IntMatrix::diagonal(&diag));
        g.rank += rank;
        g
    }

    pub fn trivial() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    /// `Z/n`; `n = 0` gives `Z` and `n = 1` the trivial group.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FgAbGroup { rank: 0, torsion: vec![n] },
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of each standard generator (0 for free generators).
    pub fn generator_orders(&self) -> Vec<u64> {
        std::iter::repeat_n(0, self.rank).chain(self.torsion.iter().copied()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.num_generators() <= 1
    }

    /// Cardinality, if finite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// `self (x) Z/n`.
    pub fn tensor_cyclic(&self, n: u64) -> Result<FgAbGroup, GroupError> {
        Ok(self.tensor_layout(n)?.0)
    }

    /// The tensored group together with, for each of its generators, the
    /// generator of `self` it comes from.
    fn tensor_layout(&self, n: u64) -> Result<(FgAbGroup, Vec<usize>), GroupError> {
        if n < 2 {
            return Err(GroupError::BadModulus(n));
        }
        let mut torsion = Vec::new();
        let mut origin = Vec::new();
        for (k, &d) in self.torsion.iter().enumerate() {
            let g = d.gcd(&n);
            if g > 1 {
                torsion.push(g);
                origin.push(self.rank + k);
            }
        }
        for k in 0..self.rank {
            torsion.push(n);
            origin.push(k);
        }
        Ok((FgAbGroup { rank: 0, torsion }, origin))
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn reduce(&self, element: &[i64]) -> Result<Vec<i64>, GroupError> {
        self.check_coordinates(element)?;
        Ok(element
            .iter()
            .zip(self.generator_orders())
            .map(|(&x, o)| if o == 0 { x } else { x.rem_euclid(o as i64) })
            .collect())
    }

    fn check_coordinates(&self, element: &[i64]) -> Result<(), GroupError> {
        if element.len() != self.num_generators() {
            return Err(GroupError::Coordinates { found: element.len(), expected: self.num_generators() });
        }
        Ok(())
    }

    /// Order of an element; `None` when it has infinite order.
    pub fn element_order(&self, element: &[i64]) -> Result<Option<u64>, GroupError> {
        let reduced = self.reduce(element)?;
        let mut order = 1u64;
        for (x, o) in reduced.into_iter().zip(self.generator_orders()) {
            if o == 0 {
                if x != 0 {
                    return Ok(None);
                }
            } else {
                order = order.lcm(&(o / (x as u64).gcd(&o)));
            }
        }
        Ok(Some(order))
    }

    /// Diagonal relation matrix: `Z^n` modulo its columns is this group.
    fn relations(&self) -> IntMatrix {
        let n = self.num_generators();
        let mut r = IntMatrix::zeros(n, self.torsion.len());
        for (k, &d) in self.torsion.iter().enumerate() {
            r[(self.rank + k, k)] = d as i64;
        }
        r
    }
}

impl fmt::Display for FgAbGroup {
    /// `Z^2 + Z/2 + Z/4`, `Z`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl FromStr for FgAbGroup {
    type Err = GroupError;

    /// Accepts any direct sum of `Z`, `Z^r`, `Z/d` and `0`, canonicalizing.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::Parse(s.to_string());
        let mut rank = 0;
        let mut orders = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "0" {
                continue;
            }
            if let Some(d) = part.strip_prefix("Z/") {
                orders.push(d.trim().parse::<u64>().map_err(|_| bad())?);
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.trim().parse::<usize>().map_err(|_| bad())?;
            } else if part == "Z" {
                rank += 1;
            } else {
                return Err(bad());
            }
        }
        Ok(FgAbGroup::from_cyclic_orders(rank, &orders))
    }
}

/// Homomorphism given by an integer matrix in the standard generators
/// (`target.num_generators()` rows, `source.num_generators()` columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupMap {
    /// Checks shape and well-definedness, and reduces torsion rows.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, GroupError> {
        let (rows, cols) = (target.num_generators(), source.num_generators());
        if matrix.rows != rows || matrix.cols != cols {
            return Err(GroupError::Shape { rows: matrix.rows, cols: matrix.cols, expected_rows: rows, expected_cols: cols });
        }
        let mut matrix = matrix;
        let target_orders = target.generator_orders();
        for (i, &o) in target_orders.iter().enumerate() {
            if o != 0 {
                for j in 0..cols {
                    matrix[(i, j)] = matrix[(i, j)].rem_euclid(o as i64);
                }
            }
        }
        for (j, d) in source.generator_orders().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            // d * column must vanish in the target
            let ok = target_orders.iter().enumerate().all(|(i, &o)| {
                let x = matrix[(i, j)] as i128 * d as i128;
                if o == 0 { x == 0 } else { x % o as i128 == 0 }
            });
            if !ok {
                return Err(GroupError::IllDefined { generator: j, order: d });
            }
        }
        Ok(GroupMap { source, target, matrix })
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.num_generators(), source.num_generators());
        GroupMap { source, target, matrix }
    }

    /// `0 -> target`.
    pub fn from_trivial(target: FgAbGroup) -> Self {
        Self::zero(FgAbGroup::trivial(), target)
    }

    /// `source -> 0`.
    pub fn to_trivial(source: FgAbGroup) -> Self {
        Self::zero(source, FgAbGroup::trivial())
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, element: &[i64]) -> Result<Vec<i64>, GroupError> {
        self.source.check_coordinates(element)?;
        self.target.reduce(&self.matrix.apply(element))
    }

    /// `other . self`
    pub fn then(&self, other: &GroupMap) -> Result<GroupMap, GroupError> {
        if self.target != other.source {
            return Err(GroupError::NotComposable(0, 1));
        }
        GroupMap::new(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.data.iter().all(|&x| x == 0)
    }

    /// Lattice of `x` in `Z^p` with `f(x) = 0` in the target; contains the
    /// source relations.
    fn kernel_lattice(&self) -> IntMatrix {
        let p = self.source.num_generators();
        let stacked = self.matrix.hcat(&self.target.relations());
        integer_kernel(&stacked).top_rows(p)
    }

    /// Lattice generated by the columns and the target relations.
    fn image_lattice(&self) -> IntMatrix {
        self.matrix.hcat(&self.target.relations())
    }

    pub fn kernel(&self) -> FgAbGroup {
        subquotient(&self.kernel_lattice(), &self.source.relations()).expect("source relations lie in the kernel")
    }

    pub fn image(&self) -> FgAbGroup {
        subquotient(&self.image_lattice(), &self.target.relations()).expect("target relations lie in the image lattice")
    }

    pub fn cokernel(&self) -> FgAbGroup {
        cokernel_of_matrix(&self.image_lattice())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// `f (x) Z/n`.
    pub fn tensor_cyclic(&self, n: u64) -> Result<GroupMap, GroupError> {
        let (source, source_origin) = self.source.tensor_layout(n)?;
        let (target, target_origin) = self.target.tensor_layout(n)?;
        let mut matrix = IntMatrix::zeros(target.num_generators(), source.num_generators());
        for (i, &oi) in target_origin.iter().enumerate() {
            for (j, &oj) in source_origin.iter().enumerate() {
                matrix[(i, j)] = self.matrix[(oi, oj)];
            }
        }
        GroupMap::new(source, target, matrix)
    }
}

/// Image of an element of `group` in `group (x) Z/n`, in the tensored
/// group's coordinates.
pub fn tensor_element(group: &FgAbGroup, element: &[i64], n: u64) -> Result<(FgAbGroup, Vec<i64>), GroupError> {
    group.check_coordinates(element)?;
    let (tensored, origin) = group.tensor_layout(n)?;
    let image: Vec<i64> = origin.iter().map(|&k| element[k]).collect();
    let reduced = tensored.reduce(&image)?;
    Ok((tensored, reduced))
}

/// Order of the class of `element` (an element of `f`'s target) in
/// `target (x) Z/n`.
pub fn element_order_after_tensor(f: &GroupMap, element: &[i64], n: u64) -> Result<u64, GroupError> {
    let (tensored, image) = tensor_element(f.target(), element, n)?;
    Ok(tensored.element_order(&image)?.expect("tensor with Z/n is finite"))
}

pub fn kernel(f: &GroupMap) -> FgAbGroup {
    f.kernel()
}

pub fn cokernel(f: &GroupMap) -> FgAbGroup {
    f.cokernel()
}

/// Exactness at every interior node of `A_0 -> A_1 -> ... -> A_k`.
///
/// Errors when consecutive maps do not share the middle group.
pub fn is_exact(sequence: &[GroupMap]) -> Result<bool, GroupError> {
    for (i, pair) in sequence.windows(2).enumerate() {
        if pair[0].target != pair[1].source {
            return Err(GroupError::NotComposable(i, i + 1));
        }
    }
    for pair in sequence.windows(2) {
        let (f, g) = (&pair[0], &pair[1]);
        if !f.then(g)?.is_zero() {
            return Ok(false);
        }
        // image(f) <= kernel(g); equal iff the quotient is trivial
        let quotient = subquotient(&g.kernel_lattice(), &f.image_lattice())?;
        if !quotient.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conditions on an unknown finite abelian group `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionConstraint {
    /// `T` is isomorphic to a subgroup of `Z/a`.
    EmbedsIn(u64),
    /// `T (x) Z/n` is isomorphic to the given group.
    TensorIsomorphic(u64, FgAbGroup),
    /// `|T| <= bound`.
    OrderAtMost(u64),
}

impl TorsionConstraint {
    pub fn holds(&self, group: &FgAbGroup) -> bool {
        match self {
            // a finite abelian group embeds in Z/a iff it is cyclic of order dividing a
            TorsionConstraint::EmbedsIn(a) => {
                group.is_cyclic() && group.order().is_some_and(|o| *a != 0 && a % o == 0)
            }
            TorsionConstraint::TensorIsomorphic(n, h) => group.tensor_cyclic(*n).is_ok_and(|t| &t == h),
            TorsionConstraint::OrderAtMost(b) => group.order().is_some_and(|o| o <= *b),
        }
    }
}

/// Default bound on `|T|` when no `OrderAtMost` is given.
pub const DEFAULT_ORDER_BOUND: u64 = 64;

/// All finite abelian groups of order at most the bound satisfying every
/// constraint, in canonical form, sorted by order and then torsion chain.
pub fn solve_torsion_constraints(constraints: &[TorsionConstraint]) -> Result<Vec<FgAbGroup>, GroupError> {
    solve_torsion_constraints_with(constraints, Execution::default())
}

pub fn solve_torsion_constraints_with(
    constraints: &[TorsionConstraint],
    exec: Execution,
) -> Result<Vec<FgAbGroup>, GroupError> {
    if constraints.is_empty() {
        return Err(GroupError::Unbounded);
    }
    for c in constraints {
        if let TorsionConstraint::TensorIsomorphic(n, _) = c {
            if *n < 2 {
                return Err(GroupError::BadModulus(*n));
            }
        }
    }
    let bound = constraints
        .iter()
        .filter_map(|c| match c {
            TorsionConstraint::OrderAtMost(b) => Some(*b),
            _ => None,
        })
        .min()
        .unwrap_or(DEFAULT_ORDER_BOUND);
    let orders: Vec<u64> = (1..=bound).collect();
    Ok(par::flat_map_collect(exec, &orders, |&order| {
        finite_abelian_groups(order).into_iter().filter(|g| constraints.iter().all(|c| c.holds(g))).collect()
    }))
}

/// Every abelian group of the given order, up to isomorphism.
pub fn finite_abelian_groups(order: u64) -> Vec<FgAbGroup> {
    assert!(order >= 1);
    // one list of invariant-factor prime powers (largest first) per prime
    let mut per_prime: Vec<Vec<Vec<u64>>> = Vec::new();
    for (p, e) in factorize(order) {
        per_prime.push(
            partitions(e)
                .into_iter()
                .map(|parts| parts.into_iter().map(|k| p.pow(k)).collect())
                .collect(),
        );
    }
    let mut groups = vec![Vec::<u64>::new()];
    for choices in per_prime {
        let mut next = Vec::new();
        for acc in &groups {
            for powers in &choices {
                let len = acc.len().max(powers.len());
                let combined: Vec<u64> = (0..len)
                    .map(|i| acc.get(i).copied().unwrap_or(1) * powers.get(i).copied().unwrap_or(1))
                    .collect();
                next.push(combined);
            }
        }
        groups = next;
    }
    let mut out: Vec<FgAbGroup> = groups
        .into_iter()
        .map(|mut largest_first| {
            largest_first.reverse();
            FgAbGroup::new(0, largest_first).expect("invariant factors form a chain")
        })
        .collect();
    out.sort();
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `n` as non-increasing part lists.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
