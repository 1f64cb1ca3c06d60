//! Integer lattices: Smith and Hermite normal forms, quotient groups
//! `Z^E / K` with the image monoid of `N^E`, and relative valuativity of
//! monoid homomorphisms.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyhedral::{self, rat, LinearConstraint, Rational};

/// Largest ambient rank accepted by the exhaustive membership search.
pub const MAX_MEMBERSHIP_AMBIENT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ambient rank {0} exceeds the exhaustive-search limit of {MAX_MEMBERSHIP_AMBIENT}")]
    AmbientTooLarge(usize),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("column {0} of the homomorphism leaves the target cone")]
    NotInTargetCone(usize),
}

/// Dense integer matrix with explicit shape, so that `0 x n` matrices keep
/// their column count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(cols: usize, entries: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if let Some(bad) = entries.iter().find(|r| r.len() != cols) {
            return Err(LatticeError::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(IntMatrix {
            rows: entries.len(),
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j][i] = self.entries[i][j];
            }
        }
        out
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in self.entries.iter_mut() {
            r.swap(a, b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.entries[src][j];
            self.entries[dst][j] += k * v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        for r in self.entries.iter_mut() {
            r[dst] += k * r[src];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.entries[i].iter_mut() {
            *x = -*x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in self.entries.iter_mut() {
            r[j] = -r[j];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.entries {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

/// `left · m · right = diag(diagonal)` with `d_1 | d_2 | …`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: Vec<i64>,
    pub right: IntMatrix,
    /// Inverse of `right`, maintained alongside it.
    pub right_inverse: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);
    let mut right_inv = IntMatrix::identity(c);

    // Column operation on `a` mirrored into `right` and its inverse.
    let col_add = |a: &mut IntMatrix, right: &mut IntMatrix, inv: &mut IntMatrix, dst: usize, src: usize, k: i64| {
        a.add_col(dst, src, k);
        right.add_col(dst, src, k);
        inv.add_row(src, dst, -k);
    };
    let col_swap = |a: &mut IntMatrix, right: &mut IntMatrix, inv: &mut IntMatrix, x: usize, y: usize| {
        a.swap_cols(x, y);
        right.swap_cols(x, y);
        inv.swap_rows(x, y);
    };

    for t in 0..r.min(c) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = a.entries[i][j];
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < a.entries[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            if pi != t {
                a.swap_rows(t, pi);
                left.swap_rows(t, pi);
            }
            if pj != t {
                col_swap(&mut a, &mut right, &mut right_inv, t, pj);
            }
            let p = a.entries[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = a.entries[i][t] / p;
                if q != 0 {
                    a.add_row(i, t, -q);
                    left.add_row(i, t, -q);
                }
                clean &= a.entries[i][t] == 0;
            }
            for j in t + 1..c {
                let q = a.entries[t][j] / p;
                if q != 0 {
                    col_add(&mut a, &mut right, &mut right_inv, j, t, -q);
                }
                clean &= a.entries[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| a.entries[i][j] % p != 0));
            match bad {
                Some(i) => {
                    a.add_row(t, i, 1);
                    left.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if a.entries[t][t] < 0 {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    SmithForm {
        diagonal: (0..r.min(c)).map(|i| a.entries[i][i]).collect(),
        left,
        right,
        right_inverse: right_inv,
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: nonzero
/// rows only, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Depends only on the lattice, not on the spanning set.
pub fn hermite_rows(cols: usize, rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len())
                .filter(|&i| a[i][c] != 0)
                .min_by_key(|&i| a[i][c].abs());
            let Some(b) = best else {
                break;
            };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..a.len() {
                let q = a[i][c] / a[r][c];
                if q != 0 {
                    for j in 0..cols {
                        a[i][j] -= q * a[r][j];
                    }
                }
                done &= a[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let p = a[r][c];
        for i in 0..r {
            let q = a[i][c].div_euclid(p);
            if q != 0 {
                for j in 0..cols {
                    a[i][j] -= q * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionCoord {
    pub value: i64,
    pub modulus: i64,
}

/// An element of a finitely generated abelian group in coordinates
/// `Z^r ⊕ Z/d_1 ⊕ … ⊕ Z/d_k`. Torsion values are kept reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    pub free: Vec<i64>,
    pub torsion: Vec<TorsionCoord>,
}

impl GroupElem {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|t| t.value == 0)
    }

    pub fn zero_like(&self) -> GroupElem {
        GroupElem {
            free: vec![0; self.free.len()],
            torsion: self
                .torsion
                .iter()
                .map(|t| TorsionCoord {
                    value: 0,
                    modulus: t.modulus,
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &GroupElem) -> GroupElem {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &GroupElem) -> GroupElem {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> GroupElem {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> GroupElem {
        GroupElem {
            free: self.free.iter().map(|x| k * x).collect(),
            torsion: self
                .torsion
                .iter()
                .map(|t| TorsionCoord {
                    value: (k * t.value).rem_euclid(t.modulus),
                    modulus: t.modulus,
                })
                .collect(),
        }
    }

    fn combine(&self, other: &GroupElem, k: i64) -> GroupElem {
        assert_eq!(self.free.len(), other.free.len(), "free rank mismatch");
        assert_eq!(self.torsion.len(), other.torsion.len(), "torsion mismatch");
        GroupElem {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + k * b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&other.torsion)
                .map(|(a, b)| TorsionCoord {
                    value: (a.value + k * b.value).rem_euclid(a.modulus),
                    modulus: a.modulus,
                })
                .collect(),
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.free)?;
        for t in &self.torsion {
            write!(f, " + {} mod {}", t.value, t.modulus)?;
        }
        Ok(())
    }
}

/// `Z^E / K` together with the image of `N^E` (the monoid generated by the
/// images of the standard generators `ℓ_e`).
///
/// Coordinates come from the Smith form of the Hermite basis of `K`, so they
/// depend on `K` only and not on the relations used to present it. Each free
/// coordinate is oriented so that the first generator with a nonzero value
/// there is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeQuotient {
    ambient: usize,
    relations: Vec<Vec<i64>>,
    snf: SmithForm,
    torsion_coords: Vec<usize>,
    moduli: Vec<i64>,
    free_coords: Vec<usize>,
    generator_images: Vec<GroupElem>,
    units: Vec<bool>,
    sharpened: Option<Box<LatticeQuotient>>,
    /// On a sharp quotient: an integer functional on the free part taking a
    /// value `>= 1` on every nonzero generator image.
    grading: Vec<i64>,
}

impl LatticeQuotient {
    pub fn new(ambient: usize, relations: &[Vec<i64>]) -> Result<Self, LatticeError> {
        if let Some(bad) = relations.iter().find(|r| r.len() != ambient) {
            return Err(LatticeError::DimensionMismatch {
                expected: ambient,
                got: bad.len(),
            });
        }
        let hnf = hermite_rows(ambient, relations);
        let mut snf = smith_normal_form(&IntMatrix::new(ambient, hnf.clone())?);
        let rank = snf.rank();
        let torsion_coords: Vec<usize> = (0..rank).filter(|&i| snf.diagonal[i] > 1).collect();
        let moduli = torsion_coords.iter().map(|&i| snf.diagonal[i]).collect();
        let free_coords: Vec<usize> = (rank..ambient).collect();

        for &i in &free_coords {
            let first = (0..ambient).map(|e| snf.right.get(e, i)).find(|&x| x != 0);
            if first.is_some_and(|x| x < 0) {
                snf.right.negate_col(i);
                snf.right_inverse.negate_row(i);
            }
        }

        let mut q = LatticeQuotient {
            ambient,
            relations: hnf,
            snf,
            torsion_coords,
            moduli,
            free_coords,
            generator_images: Vec::new(),
            units: Vec::new(),
            sharpened: None,
            grading: Vec::new(),
        };
        q.generator_images = (0..ambient)
            .map(|e| {
                let mut x = vec![0; ambient];
                x[e] = 1;
                q.reduce(&x)
            })
            .collect();
        q.units = (0..ambient).map(|e| q.generator_is_unit(e)).collect();

        let nonzero_units: Vec<usize> = (0..ambient)
            .filter(|&e| q.units[e] && !q.generator_images[e].is_zero())
            .collect();
        if nonzero_units.is_empty() {
            q.grading = q.find_grading();
        } else {
            let mut rels = q.relations.clone();
            for &e in &nonzero_units {
                let mut r = vec![0; ambient];
                r[e] = 1;
                rels.push(r);
            }
            let s = LatticeQuotient::new(ambient, &rels)?;
            debug_assert!(s.is_sharp());
            q.sharpened = Some(Box::new(s));
        }
        Ok(q)
    }

    /// Unit test for a generator: its free part lies in the lineality space
    /// of the rational cone spanned by all free parts.
    fn generator_is_unit(&self, e: usize) -> bool {
        let img = &self.generator_images[e];
        if img.free.iter().all(|&x| x == 0) {
            return true;
        }
        let n = self.ambient;
        let mut cs = Vec::new();
        for f in 0..n {
            let mut row = vec![rat(0); n];
            row[f] = rat(1);
            cs.push(LinearConstraint::at_least(row, rat(if f == e { 1 } else { 0 })));
        }
        for k in 0..self.free_rank() {
            let row = (0..n).map(|f| rat(self.generator_images[f].free[k])).collect();
            cs.push(LinearConstraint::equal(row, rat(0)));
        }
        polyhedral::feasible_point(n, &cs).is_some()
    }

    fn find_grading(&self) -> Vec<i64> {
        let r = self.free_rank();
        let cs: Vec<LinearConstraint> = self
            .generator_images
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| LinearConstraint::at_least(g.free.iter().map(|&x| rat(x)).collect(), rat(1)))
            .collect();
        let c = polyhedral::feasible_point(r, &cs).expect("sharp quotients have a pointed cone");
        // Clearing denominators keeps every value >= 1.
        let lcm = c
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        c.iter()
            .map(|x| {
                (x * Rational::from_integer(lcm.clone()))
                    .to_integer()
                    .to_i64()
                    .expect("grading fits in i64")
            })
            .collect()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Hermite basis of the relation lattice `K`.
    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn smith_form(&self) -> &SmithForm {
        &self.snf
    }

    pub fn free_rank(&self) -> usize {
        self.free_coords.len()
    }

    pub fn torsion_moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn generator_images(&self) -> &[GroupElem] {
        &self.generator_images
    }

    pub fn generator(&self, e: usize) -> &GroupElem {
        &self.generator_images[e]
    }

    /// Generators that are invertible in the image monoid; they map to 0
    /// after sharpening.
    pub fn degenerate_generators(&self) -> Vec<usize> {
        (0..self.ambient).filter(|&e| self.units[e]).collect()
    }

    /// A generator is degenerate when it becomes 0 after sharpening.
    pub fn is_degenerate(&self, e: usize) -> bool {
        self.units[e]
    }

    /// Whether the image monoid has no nonzero units.
    pub fn is_sharp(&self) -> bool {
        self.sharpened.is_none()
    }

    /// The quotient by the unit group of the image monoid.
    pub fn sharpened(&self) -> &LatticeQuotient {
        self.sharpened.as_deref().unwrap_or(self)
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem {
            free: vec![0; self.free_rank()],
            torsion: self
                .moduli
                .iter()
                .map(|&m| TorsionCoord { value: 0, modulus: m })
                .collect(),
        }
    }

    /// Canonical form of the class of `x ∈ Z^E`.
    pub fn reduce(&self, x: &[i64]) -> GroupElem {
        assert_eq!(x.len(), self.ambient, "ambient mismatch");
        let coord = |i: usize| -> i64 { (0..self.ambient).map(|e| self.snf.right.get(e, i) * x[e]).sum() };
        GroupElem {
            free: self.free_coords.iter().map(|&i| coord(i)).collect(),
            torsion: self
                .torsion_coords
                .iter()
                .zip(&self.moduli)
                .map(|(&i, &m)| TorsionCoord {
                    value: coord(i).rem_euclid(m),
                    modulus: m,
                })
                .collect(),
        }
    }

    /// A representative in `Z^E` of a group element.
    pub fn lift(&self, x: &GroupElem) -> Vec<i64> {
        let mut out = vec![0; self.ambient];
        let coords = self
            .free_coords
            .iter()
            .zip(&x.free)
            .chain(self.torsion_coords.iter().zip(x.torsion.iter().map(|t| &t.value)));
        for (&i, &y) in coords {
            for (e, o) in out.iter_mut().enumerate() {
                *o += y * self.snf.right_inverse.get(i, e);
            }
        }
        out
    }

    /// `Σ coeffs_e · ℓ_e` in the quotient.
    pub fn combination(&self, coeffs: &[i64]) -> GroupElem {
        self.reduce(coeffs)
    }

    /// Whether `x` lies in the image monoid of `N^E`.
    pub fn monoid_member(&self, x: &GroupElem) -> Result<bool, LatticeError> {
        if self.ambient > MAX_MEMBERSHIP_AMBIENT {
            return Err(LatticeError::AmbientTooLarge(self.ambient));
        }
        if let Some(s) = &self.sharpened {
            return s.monoid_member(&s.reduce(&self.lift(x)));
        }
        let Some(budget) = self.membership_bound(x) else {
            return Ok(false);
        };
        if let Some(found) = self.lattice_search(x) {
            return Ok(found);
        }
        let gens: Vec<(usize, i64)> = (0..self.ambient)
            .filter(|&e| !self.generator_images[e].is_zero())
            .map(|e| (e, self.weight(&self.generator_images[e])))
            .collect();
        Ok(self.search(&gens, 0, budget, self.zero(), x))
    }

    /// `x` is a member iff `lift(x) + k >= 0` on the nonzero generators for
    /// some `k` in the relation lattice. Only the relation coordinates are
    /// searched, so the cost depends on the number of relations rather than
    /// on the size of `x`. `None` if the search region is unbounded.
    fn lattice_search(&self, x: &GroupElem) -> Option<bool> {
        let live: Vec<usize> = (0..self.ambient)
            .filter(|&e| !self.generator_images[e].is_zero())
            .collect();
        let n0 = self.lift(x);
        let projected: Vec<Vec<i64>> = self
            .relations
            .iter()
            .map(|r| live.iter().map(|&e| r[e]).collect())
            .collect();
        let basis: Vec<Vec<i64>> = hermite_rows(live.len(), &projected)
            .into_iter()
            .filter(|r| r.iter().any(|&v| v != 0))
            .collect();
        let rows: Vec<(Vec<i64>, i64)> = live
            .iter()
            .enumerate()
            .map(|(i, &e)| (basis.iter().map(|b| b[i]).collect(), -n0[e]))
            .collect();
        integer_point(basis.len(), &rows)
    }

    fn weight(&self, x: &GroupElem) -> i64 {
        self.grading.iter().zip(&x.free).map(|(c, v)| c * v).sum()
    }

    /// On a sharp quotient: an upper bound on `Σ n_e` over any representation
    /// `x = Σ n_e ℓ_e` with `n ∈ N^E` (zero generators aside), or `None` if
    /// the grading already rules out membership.
    pub fn membership_bound(&self, x: &GroupElem) -> Option<i64> {
        if let Some(s) = &self.sharpened {
            return s.membership_bound(&s.reduce(&self.lift(x)));
        }
        let w = self.weight(x);
        if w < 0 || (w == 0 && !x.is_zero()) {
            None
        } else {
            Some(w)
        }
    }

    fn search(&self, gens: &[(usize, i64)], i: usize, budget: i64, acc: GroupElem, x: &GroupElem) -> bool {
        if budget == 0 {
            return acc == *x;
        }
        let Some(&(e, w)) = gens.get(i) else {
            return false;
        };
        let img = &self.generator_images[e];
        let mut acc = acc;
        let mut left = budget;
        loop {
            if self.search(gens, i + 1, left, acc.clone(), x) {
                return true;
            }
            if left < w {
                return false;
            }
            left -= w;
            acc = acc.add(img);
        }
    }

    /// `x <= y` iff `y - x` lies in the image monoid.
    pub fn leq(&self, x: &GroupElem, y: &GroupElem) -> Result<bool, LatticeError> {
        self.monoid_member(&y.sub(x))
    }

    pub fn summary(&self) -> QuotientSummary {
        QuotientSummary {
            ambient: self.ambient,
            relations: self.relations.clone(),
            free_rank: self.free_rank(),
            torsion: self.moduli.clone(),
            generator_images: self.generator_images.clone(),
            degenerate: self.degenerate_generators(),
            sharp: self.is_sharp(),
        }
    }
}

/// Whether some `c ∈ Z^k` satisfies `coeffs · c >= rhs` for every row:
/// bound the first coordinate by elimination, then try each integer value.
fn integer_point(k: usize, rows: &[(Vec<i64>, i64)]) -> Option<bool> {
    if k == 0 {
        return Some(rows.iter().all(|(_, rhs)| *rhs <= 0));
    }
    let system: Vec<LinearConstraint> = rows
        .iter()
        .map(|(c, r)| LinearConstraint::at_least(c.iter().map(|&v| rat(v)).collect(), rat(*r)))
        .collect();
    let Some((lo, hi)) = polyhedral::variable_bounds(k, &system, 0) else {
        return Some(false);
    };
    let lo = lo?.ceil().to_integer().to_i64()?;
    let hi = hi?.floor().to_integer().to_i64()?;
    for c0 in lo..=hi {
        let slice: Vec<(Vec<i64>, i64)> = rows.iter().map(|(c, r)| (c[1..].to_vec(), r - c[0] * c0)).collect();
        if integer_point(k - 1, &slice)? {
            return Some(true);
        }
    }
    Some(false)
}

/// Serializable view of a [`LatticeQuotient`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSummary {
    pub ambient: usize,
    pub relations: Vec<Vec<i64>>,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub generator_images: Vec<GroupElem>,
    pub degenerate: Vec<usize>,
    pub sharp: bool,
}

/// A homomorphism `N^s -> Z^t` given by a `t x s` matrix whose columns lie
/// in the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidHom {
    source_rank: usize,
    target_rank: usize,
    matrix: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuativity {
    pub valuative: bool,
    /// Primitive integer basis of the rational kernel.
    pub kernel: Vec<Vec<i64>>,
}

impl MonoidHom {
    pub fn new(matrix: IntMatrix) -> Result<Self, LatticeError> {
        for j in 0..matrix.cols() {
            if (0..matrix.rows()).any(|i| matrix.get(i, j) < 0) {
                return Err(LatticeError::NotInTargetCone(j));
            }
        }
        Ok(MonoidHom {
            source_rank: matrix.cols(),
            target_rank: matrix.rows(),
            matrix,
        })
    }

    pub fn identity(k: usize) -> Self {
        Self::new(IntMatrix::identity(k)).expect("identity is monotone")
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Relative valuativity over the rational cone: with `V = ker f` and
    /// `C = V ∩ Q^s_{>=0}`, require that `C` spans `V` and that the lineality
    /// space of `C` has codimension at most one in `V`.
    ///
    /// `C` sits inside the orthant, so its lineality space is zero; the test
    /// reduces to `dim V = 0`, or `dim V = 1` with a generator of constant sign.
    pub fn relative_valuativity(&self) -> Valuativity {
        let rows: Vec<Vec<Rational>> = self
            .matrix
            .entries()
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        let basis = polyhedral::kernel(&rows, self.source_rank);
        let kernel: Vec<Vec<i64>> = basis
            .iter()
            .map(|v| {
                polyhedral::primitive_integer(v)
                    .iter()
                    .map(|x| x.to_i64().expect("kernel entries fit in i64"))
                    .collect()
            })
            .collect();
        let lineality_dim = 0;
        let spans = match kernel.as_slice() {
            [] => true,
            [v] => v.iter().all(|&x| x >= 0) || v.iter().all(|&x| x <= 0),
            // Two pointed cones C and -C cannot cover a space of dimension >= 2.
            _ => false,
        };
        let valuative = spans && kernel.len() <= lineality_dim + 1;
        Valuativity { valuative, kernel }
    }

    pub fn is_relatively_valuative(&self) -> bool {
        self.relative_valuativity().valuative
    }
}
