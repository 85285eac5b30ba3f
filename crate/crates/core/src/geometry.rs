//! Points and subspaces of PG(n, q).
//!
//! A point is a normalized coordinate vector (leftmost nonzero entry 1) with
//! its lexicographic ordinal. A subspace is stored by its reduced row-echelon
//! basis, which is unique, so equality of subspaces is equality of matrices.
//! Duality is the orthogonal complement under the standard dot product; a
//! hyperplane's dual coordinate vector `[a_0, .., a_n]` denotes
//! `{ x : sum a_i x_i = 0 }`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use thiserror::Error;

use crate::counting;
use crate::gf::{Fe, FieldError, FieldSpec};

/// Default ceiling on the number of subspaces any single enumeration may produce.
pub const DEFAULT_ENUM_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("projective dimension must be at least 1, got {0}")]
    InvalidAmbient(usize),
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("subspace dimension {dim} is outside [-1, {n}]")]
    InvalidDimension { dim: isize, n: usize },
    #[error("enumeration of {count} objects exceeds the budget of {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error("center and screen are not complementary subspaces")]
    BadFrame,
    #[error("point {0:?} lies in the projection center")]
    PointInCenter(Vec<Fe>),
    #[error("{0}")]
    Field(#[from] FieldError),
}

/// Anything spanned by a list of coordinate vectors.
pub trait Flat {
    fn generators(&self) -> &[Vec<Fe>];
}

/// A projective point in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    index: usize,
    coords: Vec<Fe>,
}

impl Point {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    pub fn codes(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.0 as u32).collect()
    }
}

impl Flat for Point {
    fn generators(&self) -> &[Vec<Fe>] {
        std::slice::from_ref(&self.coords)
    }
}

/// A subspace given by its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    rows: Vec<Vec<Fe>>,
    width: usize,
}

impl Subspace {
    /// Projective dimension; `-1` for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }
}

impl Flat for Subspace {
    fn generators(&self) -> &[Vec<Fe>] {
        &self.rows
    }
}

/// The ambient space PG(n, q).
#[derive(Debug, Clone)]
pub struct GeometryContext {
    field: Arc<FieldSpec>,
    n: usize,
    budget: u64,
}

impl PartialEq for GeometryContext {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field
    }
}

impl Eq for GeometryContext {}

impl GeometryContext {
    pub fn new(field: FieldSpec, n: usize) -> Result<Self, GeometryError> {
        if n < 1 {
            return Err(GeometryError::InvalidAmbient(n));
        }
        let ctx = GeometryContext {
            field: Arc::new(field),
            n,
            budget: DEFAULT_ENUM_BUDGET,
        };
        let theta = ctx.point_count();
        if theta <= 4096 {
            let pts = ctx.all_points()?;
            assert_eq!(pts.len() as u64, theta);
            assert!(pts.iter().enumerate().all(|(i, p)| p.index == i));
        }
        Ok(ctx)
    }

    /// PG(n, q) with the built-in field of order `q`.
    pub fn pg(n: usize, q: u32) -> Result<Self, GeometryError> {
        GeometryContext::new(FieldSpec::of_order(q)?, n)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Vector length, `n + 1`.
    pub fn width(&self) -> usize {
        self.n + 1
    }

    /// θ_n, saturating at `u64::MAX`.
    pub fn point_count(&self) -> u64 {
        counting::theta(self.n as i64, self.q() as u64)
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    /// Number of `m`-spaces, exact.
    pub fn subspace_count(&self, m: isize) -> BigUint {
        counting::gaussian_raw(self.n as i64 + 1, m as i64 + 1, self.q() as u64)
    }

    fn check_budget(&self, count: &BigUint) -> Result<(), GeometryError> {
        if *count > BigUint::from(self.budget) {
            Err(GeometryError::BudgetExceeded {
                count: count.to_string(),
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn check_width(&self, len: usize) -> Result<(), GeometryError> {
        if len == self.width() {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected: self.width(),
                got: len,
            })
        }
    }

    fn check_flat(&self, f: &dyn Flat) -> Result<(), GeometryError> {
        f.generators()
            .iter()
            .try_for_each(|row| self.check_width(row.len()))
    }

    // ---- points ----

    /// Scales a nonzero vector so its leftmost nonzero entry is 1.
    pub fn normalize(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        let lead = *v.iter().find(|x| !x.is_zero())?;
        let s = self.field.inv_nonzero(lead);
        Some(v.iter().map(|&x| self.field.mul(x, s)).collect())
    }

    fn index_of_normalized(&self, v: &[Fe]) -> usize {
        let q = self.q() as usize;
        let pivot = v.iter().position(|x| !x.is_zero()).unwrap();
        // points with more leading zeros sort first: θ_{n-pivot-1} of them
        let before: usize = (0..self.n - pivot).map(|j| q.pow(j as u32)).sum();
        let tail = v[pivot + 1..]
            .iter()
            .fold(0usize, |acc, x| acc * q + x.code());
        before + tail
    }

    /// The point with the given coordinates (normalized here).
    pub fn point(&self, coords: &[Fe]) -> Result<Point, GeometryError> {
        self.check_width(coords.len())?;
        for c in coords {
            self.field.element(c.0 as u32)?;
        }
        let coords = self.normalize(coords).ok_or(GeometryError::ZeroVector)?;
        Ok(Point {
            index: self.index_of_normalized(&coords),
            coords,
        })
    }

    pub fn point_from_codes(&self, codes: &[u32]) -> Result<Point, GeometryError> {
        let v = codes
            .iter()
            .map(|&c| self.field.element(c))
            .collect::<Result<Vec<_>, _>>()?;
        self.point(&v)
    }

    /// Inverse of [`Point::index`].
    pub fn point_at(&self, index: usize) -> Point {
        let q = self.q() as usize;
        let mut rest = index;
        for pivot in (0..=self.n).rev() {
            let block = q.pow((self.n - pivot) as u32);
            if rest < block {
                let mut coords = vec![Fe::ZERO; self.width()];
                coords[pivot] = Fe::ONE;
                for c in (pivot + 1..=self.n).rev() {
                    coords[c] = Fe((rest % q) as u8);
                    rest /= q;
                }
                return Point { index, coords };
            }
            rest -= block;
        }
        panic!("point index {index} out of range");
    }

    /// All θ_n points in index order.
    pub fn all_points(&self) -> Result<Vec<Point>, GeometryError> {
        let count = self.subspace_count(0);
        self.check_budget(&count)?;
        Ok((0..self.point_count() as usize)
            .map(|i| self.point_at(i))
            .collect())
    }

    // ---- linear algebra ----

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| {
            self.field.add(acc, self.field.mul(x, y))
        })
    }

    /// Reduced row-echelon form with zero rows dropped.
    pub fn rref(&self, mut m: Vec<Vec<Fe>>) -> Vec<Vec<Fe>> {
        let f = &*self.field;
        let width = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..width {
            let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            let s = f.inv_nonzero(m[r][c]);
            for x in m[r].iter_mut() {
                *x = f.mul(*x, s);
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        m
    }

    /// Reduces `v` against an echelon basis; zero iff `v` lies in its row space.
    fn reduce(&self, basis: &[Vec<Fe>], v: &[Fe]) -> Vec<Fe> {
        let f = &*self.field;
        let mut v = v.to_vec();
        for row in basis {
            let p = row.iter().position(|x| !x.is_zero()).unwrap();
            let c = v[p];
            if !c.is_zero() {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    /// Subspace spanned by arbitrary vectors (validated).
    pub fn subspace_from_rows(&self, rows: Vec<Vec<Fe>>) -> Result<Subspace, GeometryError> {
        for r in &rows {
            self.check_width(r.len())?;
            for c in r {
                self.field.element(c.0 as u32)?;
            }
        }
        Ok(self.subspace_unchecked(rows))
    }

    pub fn subspace_from_codes(&self, rows: &[Vec<u32>]) -> Result<Subspace, GeometryError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&c| self.field.element(c))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.subspace_from_rows(rows)
    }

    fn subspace_unchecked(&self, rows: Vec<Vec<Fe>>) -> Subspace {
        Subspace {
            rows: self.rref(rows),
            width: self.width(),
        }
    }

    pub fn empty(&self) -> Subspace {
        Subspace {
            rows: Vec::new(),
            width: self.width(),
        }
    }

    pub fn whole(&self) -> Subspace {
        self.coordinate_subspace(0..self.width())
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate_subspace(&self, cols: impl IntoIterator<Item = usize>) -> Subspace {
        let rows = cols
            .into_iter()
            .map(|c| {
                let mut v = vec![Fe::ZERO; self.width()];
                v[c] = Fe::ONE;
                v
            })
            .collect();
        self.subspace_unchecked(rows)
    }

    pub fn point_space(&self, p: &Point) -> Subspace {
        Subspace {
            rows: vec![p.coords.clone()],
            width: self.width(),
        }
    }

    /// Smallest subspace containing every part.
    pub fn span(&self, parts: &[&dyn Flat]) -> Result<Subspace, GeometryError> {
        let mut rows = Vec::new();
        for part in parts {
            self.check_flat(*part)?;
            rows.extend(part.generators().iter().cloned());
        }
        Ok(self.subspace_unchecked(rows))
    }

    pub fn span_points<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Subspace {
        self.subspace_unchecked(pts.into_iter().map(|p| p.coords.clone()).collect())
    }

    pub fn meet(&self, a: &Subspace, b: &Subspace) -> Result<Subspace, GeometryError> {
        self.check_flat(a)?;
        self.check_flat(b)?;
        let (da, db) = (self.dual(a)?, self.dual(b)?);
        self.dual(&self.span(&[&da, &db])?)
    }

    /// Whether every generator of `inner` lies in `outer`.
    pub fn contains(&self, outer: &Subspace, inner: &dyn Flat) -> Result<bool, GeometryError> {
        self.check_flat(outer)?;
        self.check_flat(inner)?;
        if inner.generators().len() > self.width() {
            return Ok(false);
        }
        Ok(inner
            .generators()
            .iter()
            .all(|v| self.reduce(&outer.rows, v).iter().all(|x| x.is_zero())))
    }

    #[inline]
    pub fn contains_point(&self, outer: &Subspace, p: &Point) -> bool {
        self.reduce(&outer.rows, &p.coords)
            .iter()
            .all(|x| x.is_zero())
    }

    /// Orthogonal complement: an inclusion-reversing involution with
    /// `dim a + dim dual(a) = n - 1`.
    pub fn dual(&self, a: &Subspace) -> Result<Subspace, GeometryError> {
        self.check_flat(a)?;
        let f = &*self.field;
        let pivots = a.pivots();
        let mut rows = Vec::new();
        for free in (0..self.width()).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Fe::ZERO; self.width()];
            v[free] = Fe::ONE;
            for (row, &p) in a.rows.iter().zip(&pivots) {
                v[p] = f.neg(row[free]);
            }
            rows.push(v);
        }
        Ok(self.subspace_unchecked(rows))
    }

    /// The hyperplane whose dual coordinates are `p`.
    pub fn hyperplane_of(&self, p: &Point) -> Subspace {
        self.dual(&self.point_space(p)).unwrap()
    }

    /// Dual coordinates of a hyperplane, as a point.
    pub fn dual_point(&self, h: &Subspace) -> Result<Point, GeometryError> {
        let d = self.dual(h)?;
        if d.dim() != 0 {
            return Err(GeometryError::InvalidDimension {
                dim: h.dim(),
                n: self.n,
            });
        }
        self.point(&d.rows[0])
    }

    /// Points of a subspace in the order of their coefficient vectors.
    pub fn points_of(&self, s: &Subspace) -> Vec<Point> {
        let local = s.rows.len();
        if local == 0 {
            return Vec::new();
        }
        let q = self.q() as usize;
        let f = &*self.field;
        let mut out = Vec::new();
        for lead in 0..local {
            let free = local - lead - 1;
            for mut c in 0..q.pow(free as u32) {
                let mut v = s.rows[lead].clone();
                for r in (lead + 1..local).rev() {
                    let coef = Fe((c % q) as u8);
                    c /= q;
                    if !coef.is_zero() {
                        for (x, &y) in v.iter_mut().zip(&s.rows[r]) {
                            *x = f.add(*x, f.mul(coef, y));
                        }
                    }
                }
                let index = self.index_of_normalized(&v);
                out.push(Point { index, coords: v });
            }
        }
        out
    }

    pub fn point_set_of(&self, s: &Subspace) -> BTreeSet<Point> {
        self.points_of(s).into_iter().collect()
    }

    // ---- enumeration ----

    fn check_dim(&self, m: isize) -> Result<(), GeometryError> {
        if m < -1 || m > self.n as isize {
            Err(GeometryError::InvalidDimension { dim: m, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Pivot-column patterns of `m`-spaces in lexicographic order.
    pub fn pivot_patterns(&self, m: isize) -> Vec<Vec<usize>> {
        let r = (m + 1) as usize;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(r);
        fn rec(start: usize, w: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            for c in start..=w - (r - cur.len()) {
                cur.push(c);
                rec(c + 1, w, r, cur, out);
                cur.pop();
            }
        }
        rec(0, self.width(), r, &mut cur, &mut out);
        out
    }

    /// Every `m`-space exactly once, by pivot pattern and then free entries.
    pub fn enumerate_subspaces(&self, m: isize) -> Result<SubspaceIter<'_>, GeometryError> {
        self.check_dim(m)?;
        self.check_budget(&self.subspace_count(m))?;
        Ok(SubspaceIter::new(self, self.pivot_patterns(m)))
    }

    /// The `m`-spaces with one fixed pivot pattern; used to shard enumeration.
    pub fn subspaces_with_pivots(&self, pivots: Vec<usize>) -> SubspaceIter<'_> {
        SubspaceIter::new(self, vec![pivots])
    }

    /// All `m`-dimensional subspaces of `s`.
    pub fn subspaces_within(&self, s: &Subspace, m: isize) -> Result<Vec<Subspace>, GeometryError> {
        if m < -1 || m > s.dim() {
            return Err(GeometryError::InvalidDimension { dim: m, n: self.n });
        }
        if m == -1 {
            return Ok(vec![self.empty()]);
        }
        let local_n = s.dim() as usize;
        let local = GeometryContext {
            field: self.field.clone(),
            n: local_n.max(1),
            budget: self.budget,
        };
        let f = &*self.field;
        let lift = |coef: &[Fe]| -> Vec<Fe> {
            let mut v = vec![Fe::ZERO; self.width()];
            for (c, row) in coef.iter().zip(&s.rows) {
                if !c.is_zero() {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(*c, y));
                    }
                }
            }
            v
        };
        if local_n == 0 {
            return Ok(vec![s.clone()]);
        }
        let mut out: Vec<Subspace> = local
            .enumerate_subspaces(m)?
            .map(|t| self.subspace_unchecked(t.rows.iter().map(|r| lift(r)).collect()))
            .collect();
        out.sort();
        Ok(out)
    }

    /// All `m`-dimensional subspaces containing `s`.
    pub fn superspaces(&self, s: &Subspace, m: isize) -> Result<Vec<Subspace>, GeometryError> {
        self.check_dim(m)?;
        if m < s.dim() {
            return Err(GeometryError::InvalidDimension { dim: m, n: self.n });
        }
        let d = self.dual(s)?;
        let mut out = self
            .subspaces_within(&d, self.n as isize - 1 - m)?
            .iter()
            .map(|t| self.dual(t))
            .collect::<Result<Vec<_>, _>>()?;
        out.sort();
        Ok(out)
    }

    /// Projects each point of `pts` from `center` onto `screen`.
    pub fn project_from(
        &self,
        center: &Subspace,
        screen: &Subspace,
        pts: &BTreeSet<Point>,
    ) -> Result<BTreeSet<Point>, GeometryError> {
        if !self.meet(center, screen)?.is_empty()
            || center.dim() + screen.dim() != self.n as isize - 1
        {
            return Err(GeometryError::BadFrame);
        }
        let mut out = BTreeSet::new();
        for p in pts {
            self.check_width(p.coords.len())?;
            if self.contains_point(center, p) {
                return Err(GeometryError::PointInCenter(p.coords.clone()));
            }
            let joined = self.span(&[center, p])?;
            let image = self.meet(&joined, screen)?;
            debug_assert_eq!(image.dim(), 0);
            out.insert(self.point(&image.rows[0])?);
        }
        Ok(out)
    }

    /// Uniformly random `m`-subspace of `within` (the whole space if `None`).
    pub fn random_subspace<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        within: Option<&Subspace>,
        m: isize,
    ) -> Subspace {
        let whole = self.whole();
        let host = within.unwrap_or(&whole);
        assert!(m <= host.dim());
        let f = &*self.field;
        let q = self.q();
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        while (rows.len() as isize) < m + 1 {
            let mut v = vec![Fe::ZERO; self.width()];
            for row in &host.rows {
                let c = Fe(rng.gen_range(0..q) as u8);
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            let mut candidate = rows.clone();
            candidate.push(v);
            if self.rref(candidate.clone()).len() == candidate.len() {
                rows = candidate;
            }
        }
        self.subspace_unchecked(rows)
    }
}

/// Iterator over canonical echelon matrices for a list of pivot patterns.
pub struct SubspaceIter<'a> {
    ctx: &'a GeometryContext,
    patterns: std::vec::IntoIter<Vec<usize>>,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u8>,
    fresh: bool,
}

impl<'a> SubspaceIter<'a> {
    fn new(ctx: &'a GeometryContext, patterns: Vec<Vec<usize>>) -> Self {
        let mut it = SubspaceIter {
            ctx,
            patterns: patterns.into_iter(),
            pivots: Vec::new(),
            free: Vec::new(),
            counter: Vec::new(),
            fresh: false,
        };
        it.load_next_pattern();
        it
    }

    fn load_next_pattern(&mut self) -> bool {
        match self.patterns.next() {
            Some(p) => {
                self.free = p
                    .iter()
                    .enumerate()
                    .flat_map(|(r, &pc)| {
                        (pc + 1..self.ctx.width())
                            .filter(|c| !p.contains(c))
                            .map(move |c| (r, c))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                self.counter = vec![0; self.free.len()];
                self.pivots = p;
                self.fresh = true;
                true
            }
            None => {
                self.fresh = false;
                false
            }
        }
    }

    fn advance_counter(&mut self) -> bool {
        let q = self.ctx.q() as u8;
        for d in self.counter.iter_mut().rev() {
            *d += 1;
            if *d < q {
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if !self.fresh {
            return None;
        }
        let w = self.ctx.width();
        let mut rows = vec![vec![Fe::ZERO; w]; self.pivots.len()];
        for (r, &p) in self.pivots.iter().enumerate() {
            rows[r][p] = Fe::ONE;
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.counter) {
            rows[r][c] = Fe(d);
        }
        if !self.advance_counter() {
            self.load_next_pattern();
        }
        Some(Subspace { rows, width: w })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn pg(n: usize, q: u32) -> GeometryContext {
        GeometryContext::pg(n, q).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(pg(2, 2).all_points().unwrap().len(), 7);
        assert_eq!(pg(3, 2).all_points().unwrap().len(), 15);
        assert_eq!(pg(3, 3).all_points().unwrap().len(), 40);
    }

    #[test]
    fn point_index_is_lexicographic() {
        let ctx = pg(3, 3);
        let pts = ctx.all_points().unwrap();
        assert!(pts.windows(2).all(|w| w[0].coords < w[1].coords));
        for p in &pts {
            assert_eq!(ctx.point(p.coords()).unwrap(), *p);
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let ctx = pg(2, 5);
        let p = ctx.point(&[Fe(0), Fe(3), Fe(4)]).unwrap();
        assert_eq!(p.coords(), &[Fe(0), Fe(1), Fe(3)]);
        assert_eq!(ctx.point(p.coords()).unwrap(), p);
        assert_eq!(ctx.point(&[Fe(0); 3]), Err(GeometryError::ZeroVector));
        assert!(matches!(
            ctx.point(&[Fe(1), Fe(0)]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn span_examples() {
        let ctx = pg(3, 3);
        let pts = ctx.all_points().unwrap();
        let p = &pts[5];
        assert_eq!(ctx.span(&[p]).unwrap(), ctx.point_space(p));
        assert_eq!(ctx.span(&[&pts[1], &pts[7]]).unwrap().dim(), 1);
        assert_eq!(ctx.span(&[]).unwrap().dim(), -1);
        let plane = ctx.coordinate_subspace(0..3);
        let outside = ctx.point_from_codes(&[0, 0, 0, 1]).unwrap();
        assert_eq!(ctx.span(&[&plane, &outside]).unwrap().dim(), 3);
    }

    #[test]
    fn meet_examples() {
        let ctx = pg(3, 2);
        let l = ctx.coordinate_subspace([0, 1]);
        assert_eq!(ctx.meet(&l, &l).unwrap(), l);
        let h1 = ctx.coordinate_subspace([0, 1, 2]);
        let h2 = ctx.coordinate_subspace([0, 1, 3]);
        assert_eq!(ctx.meet(&h1, &h2).unwrap().dim(), 1);
        let m = ctx.coordinate_subspace([2, 3]);
        assert_eq!(ctx.meet(&l, &m).unwrap().dim(), -1);
    }

    #[test]
    fn contains_examples() {
        let ctx = pg(3, 2);
        let h = ctx.coordinate_subspace([0, 1, 2]);
        let on = ctx.point_from_codes(&[1, 1, 0, 0]).unwrap();
        let off = ctx.point_from_codes(&[1, 0, 0, 1]).unwrap();
        assert!(ctx.contains(&h, &on).unwrap());
        assert!(!ctx.contains(&h, &off).unwrap());
        assert!(ctx.contains(&h, &h).unwrap());
        let l = ctx.coordinate_subspace([0, 1]);
        assert!(!ctx.contains(&l, &h).unwrap());
        let bad = GeometryContext::pg(2, 2).unwrap().coordinate_subspace([0]);
        assert!(matches!(
            ctx.contains(&h, &bad),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_counts_match_gaussian() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            let ctx = pg(n, q);
            for m in -1..=n as isize {
                let all: Vec<Subspace> = ctx.enumerate_subspaces(m).unwrap().collect();
                assert_eq!(
                    BigUint::from(all.len()),
                    ctx.subspace_count(m),
                    "PG({n},{q}) m={m}"
                );
                let distinct: HashSet<&Subspace> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                // already canonical
                for s in &all {
                    assert_eq!(ctx.rref(s.rows.clone()), s.rows);
                    assert_eq!(s.dim(), m);
                }
            }
        }
        assert_eq!(pg(3, 2).enumerate_subspaces(1).unwrap().count(), 35);
        assert_eq!(pg(3, 2).enumerate_subspaces(2).unwrap().count(), 15);
        assert_eq!(pg(4, 2).enumerate_subspaces(2).unwrap().count(), 155);
    }

    #[test]
    fn budget_refuses_large_enumeration() {
        let ctx = pg(4, 2).with_budget(100);
        assert!(matches!(
            ctx.enumerate_subspaces(2),
            Err(GeometryError::BudgetExceeded { .. })
        ));
        assert!(ctx.enumerate_subspaces(0).is_ok());
    }

    #[test]
    fn dual_examples() {
        let ctx = pg(3, 3);
        assert!(ctx.dual(&ctx.whole()).unwrap().is_empty());
        assert_eq!(ctx.dual(&ctx.empty()).unwrap(), ctx.whole());
        let e0 = ctx.point_from_codes(&[1, 0, 0, 0]).unwrap();
        assert_eq!(ctx.hyperplane_of(&e0), ctx.coordinate_subspace([1, 2, 3]));
        for l in ctx.enumerate_subspaces(1).unwrap() {
            assert_eq!(ctx.dual(&ctx.dual(&l).unwrap()).unwrap(), l);
        }
    }

    #[test]
    fn duality_laws_exhaustive_pg32() {
        let ctx = pg(3, 2);
        let all: Vec<Subspace> = (-1..=3)
            .flat_map(|m| ctx.enumerate_subspaces(m).unwrap())
            .collect();
        for a in &all {
            let da = ctx.dual(a).unwrap();
            assert_eq!(a.dim() + da.dim(), 2);
            assert_eq!(&ctx.dual(&da).unwrap(), a);
            for b in &all {
                let db = ctx.dual(b).unwrap();
                assert_eq!(ctx.contains(b, a).unwrap(), ctx.contains(&da, &db).unwrap());
            }
        }
    }

    #[test]
    fn grassmann_and_canonical_form_exhaustive_pg32() {
        let ctx = pg(3, 2);
        let all: Vec<Subspace> = (-1..=3)
            .flat_map(|m| ctx.enumerate_subspaces(m).unwrap())
            .collect();
        let point_sets: Vec<BTreeSet<Point>> = all.iter().map(|s| ctx.point_set_of(s)).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let join = ctx.span(&[a, b]).unwrap();
                let meet = ctx.meet(a, b).unwrap();
                assert_eq!(join.dim() + meet.dim(), a.dim() + b.dim());
                let common: BTreeSet<Point> = point_sets[i]
                    .intersection(&point_sets[j])
                    .cloned()
                    .collect();
                assert_eq!(ctx.point_set_of(&meet), common);
                assert_eq!(point_sets[i] == point_sets[j], a == b);
            }
        }
    }

    #[test]
    fn points_lie_on_gaussian_many_kspaces() {
        for (n, q) in [(3usize, 2u32), (4, 2)] {
            let ctx = pg(n, q);
            for k in 0..n as isize {
                let mut through = vec![0usize; ctx.point_count() as usize];
                for s in ctx.enumerate_subspaces(k).unwrap() {
                    for p in ctx.points_of(&s) {
                        through[p.index()] += 1;
                    }
                }
                let expected = counting::gaussian(n as i64, k as i64, q as u64).unwrap();
                assert!(through.iter().all(|&c| BigUint::from(c) == expected));
            }
        }
    }

    #[test]
    fn subspace_points_have_theta_size() {
        let ctx = pg(3, 3);
        for s in ctx.enumerate_subspaces(2).unwrap().take(10) {
            let pts = ctx.points_of(&s);
            assert_eq!(pts.len(), 13);
            assert!(pts.iter().all(|p| ctx.contains_point(&s, p)));
        }
    }

    #[test]
    fn within_and_superspaces() {
        let ctx = pg(3, 2);
        let plane = ctx.coordinate_subspace(0..3);
        let lines = ctx.subspaces_within(&plane, 1).unwrap();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(|l| ctx.contains(&plane, l).unwrap()));
        let line = ctx.coordinate_subspace([0, 1]);
        let planes = ctx.superspaces(&line, 2).unwrap();
        assert_eq!(planes.len(), 3);
        assert!(planes.iter().all(|p| ctx.contains(p, &line).unwrap()));
        assert_eq!(ctx.subspaces_within(&plane, -1).unwrap(), vec![ctx.empty()]);
    }

    #[test]
    fn sharded_enumeration_covers_everything() {
        let ctx = pg(4, 2);
        let sharded: usize = ctx
            .pivot_patterns(2)
            .into_iter()
            .map(|p| ctx.subspaces_with_pivots(p).count())
            .sum();
        assert_eq!(sharded, 155);
    }

    #[test]
    fn projection_examples() {
        let ctx = pg(3, 2);
        let center = ctx.point_space(&ctx.point_from_codes(&[0, 0, 0, 1]).unwrap());
        let screen = ctx.coordinate_subspace(0..3);
        let on_screen = ctx.point_from_codes(&[1, 1, 0, 0]).unwrap();
        let img = ctx
            .project_from(&center, &screen, &[on_screen.clone()].into())
            .unwrap();
        assert_eq!(img, [on_screen.clone()].into());
        // (1,1,0,1) sits on the line through the center and (1,1,0,0)
        let above = ctx.point_from_codes(&[1, 1, 0, 1]).unwrap();
        let img = ctx
            .project_from(&center, &screen, &[on_screen.clone(), above].into())
            .unwrap();
        assert_eq!(img.len(), 1);
        let c = ctx.point_from_codes(&[0, 0, 0, 1]).unwrap();
        assert!(matches!(
            ctx.project_from(&center, &screen, &[c].into()),
            Err(GeometryError::PointInCenter(_))
        ));
        let bad_screen = ctx.coordinate_subspace([1, 2, 3]);
        assert_eq!(
            ctx.project_from(&center, &bad_screen, &BTreeSet::new()),
            Err(GeometryError::BadFrame)
        );
    }

    #[test]
    fn random_subspaces_have_requested_dim() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let ctx = pg(5, 2);
        for m in -1..=5 {
            let s = ctx.random_subspace(&mut rng, None, m);
            assert_eq!(s.dim(), m);
            let t = ctx.random_subspace(&mut rng, Some(&s), (m - 1).max(-1));
            assert!(ctx.contains(&s, &t).unwrap());
        }
    }
}
