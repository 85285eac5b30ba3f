//! Blocking sets of points and hyperplanes, their verification, and
//! executable forms of the structural properties for the case `n = 2k + 1`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::counting;
use crate::geometry::{GeometryContext, GeometryError, Point, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockingError {
    #[error("target dimension k = {k} must satisfy 0 <= k < n = {n}")]
    InvalidK { n: usize, k: usize },
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: isize, got: isize },
    #[error("the set is not blocking")]
    NotBlocking,
    #[error("this check needs n = 2k + 1 (n = {n}, k = {k})")]
    WrongAmbient { n: usize, k: usize },
    #[error("the (k-1)-space meets B0")]
    RhoMeetsB0,
    #[error("B0 is not contained in the given (k+1)-space")]
    B0NotInSigma,
    #[error("the point lies in B0")]
    PInB0,
    #[error("the point is not in the given (k+1)-space")]
    PNotInSigma,
    #[error("the point set is empty")]
    EmptySet,
    #[error("{0}")]
    Geometry(#[from] GeometryError),
}

/// A member of a blocking set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Point(Point),
    Hyperplane(Subspace),
}

/// `B = B0 ∪ B_{n-1}` together with the ambient space and target dimension `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingSet {
    ctx: GeometryContext,
    k: usize,
    points: BTreeSet<Point>,
    hyperplanes: BTreeSet<Subspace>,
}

impl BlockingSet {
    pub fn new(
        ctx: GeometryContext,
        k: usize,
        points: impl IntoIterator<Item = Point>,
        hyperplanes: impl IntoIterator<Item = Subspace>,
    ) -> Result<Self, BlockingError> {
        if k >= ctx.n() {
            return Err(BlockingError::InvalidK { n: ctx.n(), k });
        }
        let points: BTreeSet<Point> = points.into_iter().collect();
        for p in &points {
            // re-normalize to reject foreign points
            if ctx.point(p.coords())? != *p {
                return Err(GeometryError::DimensionMismatch {
                    expected: ctx.width(),
                    got: p.coords().len(),
                }
                .into());
            }
        }
        let hyperplanes: BTreeSet<Subspace> = hyperplanes.into_iter().collect();
        for h in &hyperplanes {
            let expected = ctx.n() as isize - 1;
            if h.dim() != expected || h.basis().iter().any(|r| r.len() != ctx.width()) {
                return Err(BlockingError::WrongDimension {
                    expected,
                    got: h.dim(),
                });
            }
        }
        Ok(BlockingSet {
            ctx,
            k,
            points,
            hyperplanes,
        })
    }

    pub fn ctx(&self) -> &GeometryContext {
        &self.ctx
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn hyperplanes(&self) -> &BTreeSet<Subspace> {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.points.len() + self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.points
            .iter()
            .cloned()
            .map(Element::Point)
            .chain(self.hyperplanes.iter().cloned().map(Element::Hyperplane))
    }

    /// Universe indices: points by their index, hyperplanes offset by θ_n.
    pub fn element_indices(&self) -> Vec<usize> {
        let offset = self.ctx.point_count() as usize;
        let mut v: Vec<usize> = self
            .points
            .iter()
            .map(Point::index)
            .chain(
                self.hyperplanes
                    .iter()
                    .map(|h| offset + self.ctx.dual_point(h).unwrap().index()),
            )
            .collect();
        v.sort_unstable();
        v
    }

    pub fn from_element_indices(
        ctx: &GeometryContext,
        k: usize,
        indices: &[usize],
    ) -> Result<Self, BlockingError> {
        let offset = ctx.point_count() as usize;
        let mut pts = Vec::new();
        let mut hyps = Vec::new();
        for &i in indices {
            if i < offset {
                pts.push(ctx.point_at(i));
            } else {
                hyps.push(ctx.hyperplane_of(&ctx.point_at(i - offset)));
            }
        }
        BlockingSet::new(ctx.clone(), k, pts, hyps)
    }

    pub fn with_k(&self, k: usize) -> Result<Self, BlockingError> {
        BlockingSet::new(
            self.ctx.clone(),
            k,
            self.points.iter().cloned(),
            self.hyperplanes.iter().cloned(),
        )
    }

    pub fn is_blocking(&self) -> Result<BlockingCheck, BlockingError> {
        Ok(Incidence::new(&self.ctx, self.k as isize)?.check_blocking(self))
    }

    /// Number of `s`-spaces incident with no element: containing no point of
    /// B0 and lying in no hyperplane of B_{n-1}.
    pub fn unblocked_count(&self, s: isize) -> Result<u64, BlockingError> {
        let inc = Incidence::new(&self.ctx, s)?;
        let cover = inc.cover_of(self);
        Ok((cover.len() - cover.count()) as u64)
    }

    pub fn is_minimal(&self) -> Result<MinimalityCheck, BlockingError> {
        Incidence::new(&self.ctx, self.k as isize)?.check_minimal(self)
    }

    /// Image under the standard duality: points become hyperplanes and vice
    /// versa, and `k` becomes `n - 1 - k`.
    pub fn dual_set(&self) -> BlockingSet {
        let ctx = &self.ctx;
        let points = self
            .hyperplanes
            .iter()
            .map(|h| ctx.dual_point(h).unwrap())
            .collect();
        let hyperplanes = self.points.iter().map(|p| ctx.hyperplane_of(p)).collect();
        BlockingSet {
            ctx: ctx.clone(),
            k: ctx.n() - 1 - self.k,
            points,
            hyperplanes,
        }
    }

    fn require_middle(&self) -> Result<(), BlockingError> {
        if self.ctx.n() != 2 * self.k + 1 {
            return Err(BlockingError::WrongAmbient {
                n: self.ctx.n(),
                k: self.k,
            });
        }
        Ok(())
    }

    fn check_dim(s: &Subspace, expected: isize) -> Result<(), BlockingError> {
        if s.dim() != expected {
            return Err(BlockingError::WrongDimension {
                expected,
                got: s.dim(),
            });
        }
        Ok(())
    }

    /// Hyperplanes of B through a `(k-1)`-space `rho` skew to B0, against the
    /// lower bound `q + 1 - |B0| / q^k`.
    pub fn skew_space_profile(&self, rho: &Subspace) -> Result<SkewProfile, BlockingError> {
        self.require_middle()?;
        let ctx = &self.ctx;
        let k = self.k as isize;
        Self::check_dim(rho, k - 1)?;
        if self.points.iter().any(|p| ctx.contains_point(rho, p)) {
            return Err(BlockingError::RhoMeetsB0);
        }
        let q = ctx.q() as u64;
        let qk = q.pow(self.k as u32);
        let b0 = self.points.len() as u64;
        let mut count = 0u64;
        for h in &self.hyperplanes {
            if ctx.contains(h, rho)? {
                count += 1;
            }
        }
        // bound = ((q + 1) q^k - |B0|) / q^k, compared by cross-multiplication
        let bound_num = ((q + 1) * qk) as i64 - b0 as i64;
        let lhs = (count * qk) as i64;
        let holds = lhs >= bound_num;
        let equality = lhs == bound_num;
        let (mut at_most_one, mut divisible) = (None, None);
        if equality {
            at_most_one = Some(self.kspaces_through_meet_b0_at_most_once(rho)?);
            divisible = Some(b0.is_multiple_of(qk));
        }
        Ok(SkewProfile {
            hyperplanes_through: count,
            bound_numerator: bound_num,
            bound_denominator: qk,
            holds,
            equality,
            at_most_one_point_per_kspace: at_most_one,
            b0_multiple_of_qk: divisible,
        })
    }

    /// Largest number of B0 points on a single k-space through `rho`.
    fn max_b0_on_kspace_through(&self, rho: &Subspace) -> Result<usize, BlockingError> {
        let mut per_space: HashMap<Subspace, usize> = HashMap::new();
        for p in &self.points {
            let kappa = self.ctx.span(&[rho, p])?;
            *per_space.entry(kappa).or_default() += 1;
        }
        Ok(per_space.values().copied().max().unwrap_or(0))
    }

    fn kspaces_through_meet_b0_at_most_once(&self, rho: &Subspace) -> Result<bool, BlockingError> {
        Ok(self.max_b0_on_kspace_through(rho)? <= 1)
    }

    /// The hyperplanes `pi` of B with `P ∈ pi` and `Σ ⊄ pi`, and which side of
    /// the dichotomy they satisfy.
    pub fn bp_hyperplanes(
        &self,
        sigma_big: &Subspace,
        p: &Point,
    ) -> Result<BpReport, BlockingError> {
        self.require_middle()?;
        let ctx = &self.ctx;
        let k = self.k;
        Self::check_dim(sigma_big, k as isize + 1)?;
        if !self.points.iter().all(|x| ctx.contains_point(sigma_big, x)) {
            return Err(BlockingError::B0NotInSigma);
        }
        if !ctx.contains_point(sigma_big, p) {
            return Err(BlockingError::PNotInSigma);
        }
        if self.points.contains(p) {
            return Err(BlockingError::PInB0);
        }
        let mut bp = Vec::new();
        let mut traces: HashMap<Subspace, usize> = HashMap::new();
        for h in &self.hyperplanes {
            if ctx.contains_point(h, p) && !ctx.contains(h, sigma_big)? {
                *traces.entry(ctx.meet(h, sigma_big)?).or_default() += 1;
                bp.push(h.clone());
            }
        }
        let q = ctx.q() as u64;
        let qk = q.pow(k as u32);
        // exactly q^k hyperplanes meet Σ in a given k-space
        let mut full: Vec<Subspace> = traces
            .into_iter()
            .filter(|(_, c)| *c as u64 == qk)
            .map(|(rho, _)| rho)
            .collect();
        full.sort();
        let size = bp.len() as u64;
        let case = match full.into_iter().next() {
            Some(rho) => BpCase::FullPencil(rho),
            None => BpCase::Count,
        };
        let conclusion_holds = match case {
            BpCase::FullPencil(_) => size >= qk,
            BpCase::Count => size >= q.pow(k as u32 - 1) * (q + 1),
        };
        let premise_holds = self.is_blocking()?.blocking;
        Ok(BpReport {
            bp,
            case,
            premise_holds,
            conclusion_holds,
        })
    }

    /// Runs every equality-case structural check on this set.
    pub fn check_lemmas(&self) -> Result<LemmaReport, BlockingError> {
        self.require_middle()?;
        let ctx = &self.ctx;
        let k = self.k as isize;
        let q = ctx.q() as u64;
        let qk = q.pow(self.k as u32);
        let inc = Incidence::new(ctx, k)?;
        let blocking = inc.check_blocking(self).blocking;
        let size = self.len() as u64;
        let tight = size == (q + 1) * qk;
        let mut checks = Vec::new();

        checks.push(LemmaCheck::new(
            "blocking",
            1,
            (!blocking).then(|| "the set does not block all k-spaces".to_string()),
        ));
        checks.push(LemmaCheck::new(
            "size_at_least_(q+1)q^k",
            1,
            (blocking && size < (q + 1) * qk).then(|| format!("|B| = {size}")),
        ));

        let rhos: Vec<Subspace> = ctx
            .enumerate_subspaces(k - 1)?
            .filter(|rho| !self.points.iter().any(|p| ctx.contains_point(rho, p)))
            .collect();

        // skew (k-1)-spaces lie in enough hyperplanes of B
        let mut failure = None;
        for rho in &rhos {
            let prof = self.skew_space_profile(rho)?;
            let ok = !blocking
                || (prof.holds
                    && prof.at_most_one_point_per_kspace != Some(false)
                    && prof.b0_multiple_of_qk != Some(false));
            if !ok && failure.is_none() {
                failure = Some(format!("rho = {:?}: {:?}", rho.basis(), prof));
            }
        }
        checks.push(LemmaCheck::new("skew_space_profile", rhos.len(), failure));

        if tight && blocking {
            // no hyperplane of B contains a point of B0
            let bad = self.hyperplanes.iter().find_map(|h| {
                self.points
                    .iter()
                    .find(|p| ctx.contains_point(h, p))
                    .map(|p| format!("point {:?} in hyperplane {:?}", p.codes(), h.basis()))
            });
            checks.push(LemmaCheck::new(
                "no_b0_point_on_hyperplane",
                self.hyperplanes.len(),
                bad,
            ));
            checks.push(LemmaCheck::new(
                "b0_multiple_of_q^k",
                1,
                (!(self.points.len() as u64).is_multiple_of(qk))
                    .then(|| format!("|B0| = {}", self.points.len())),
            ));

            // a k-space through rho with one B0 point and no hyperplane forces
            // at most one B0 point on every k-space through rho
            let mut failure = None;
            for rho in &rhos {
                let mut per_space: HashMap<Subspace, usize> = HashMap::new();
                for p in &self.points {
                    *per_space.entry(ctx.span(&[rho, p])?).or_default() += 1;
                }
                let trigger = per_space.iter().any(|(kappa, &c)| {
                    c == 1
                        && !self
                            .hyperplanes
                            .iter()
                            .any(|h| ctx.contains(h, kappa).unwrap())
                });
                if trigger && per_space.values().any(|&c| c > 1) && failure.is_none() {
                    failure = Some(format!("rho = {:?}", rho.basis()));
                }
            }
            checks.push(LemmaCheck::new("single_point_spreads", rhos.len(), failure));

            if !self.points.is_empty() {
                let closure = tangent_closure(ctx, &self.points)?;
                checks.push(LemmaCheck::new(
                    "no_point_on_tangent_and_secant",
                    1,
                    closure
                        .hypothesis_violation
                        .as_ref()
                        .map(|p| format!("point {:?}", p.codes())),
                ));
                let ok = closure.law_holds() && closure.is_subspace && closure.dim <= k + 1;
                checks.push(LemmaCheck::new(
                    "tangent_closure_subspace",
                    1,
                    (!ok).then(|| {
                        format!(
                            "closure of size {} has dim {}, predicted {}, subspace: {}",
                            closure.closure.len(),
                            closure.dim,
                            closure.predicted_dim,
                            closure.is_subspace
                        )
                    }),
                ));

                let span = ctx.span_points(&self.points);
                let sigmas = if span.dim() <= k + 1 {
                    ctx.superspaces(&span, k + 1)?
                } else {
                    Vec::new()
                };
                let mut tried = 0;
                let mut failure = None;
                for sigma_big in &sigmas {
                    for p in ctx.points_of(sigma_big) {
                        if self.points.contains(&p) {
                            continue;
                        }
                        tried += 1;
                        let r = self.bp_hyperplanes(sigma_big, &p)?;
                        if !r.conclusion_holds && failure.is_none() {
                            failure = Some(format!(
                                "Sigma = {:?}, P = {:?}, |B_P| = {}",
                                sigma_big.basis(),
                                p.codes(),
                                r.bp.len()
                            ));
                        }
                    }
                }
                checks.push(LemmaCheck::new("bp_dichotomy", tried, failure));
            }
        }

        Ok(LemmaReport {
            n: ctx.n(),
            k: self.k,
            q: ctx.q(),
            size: self.len(),
            equality_case: tight && blocking,
            passed: checks.iter().all(|c| c.passed),
            checks,
        })
    }
}

/// Result of [`BlockingSet::is_blocking`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingCheck {
    pub blocking: bool,
    /// An unblocked k-space, when there is one.
    pub witness: Option<Subspace>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityCheck {
    pub minimal: bool,
    pub removable: Option<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkewProfile {
    pub hyperplanes_through: u64,
    pub bound_numerator: i64,
    pub bound_denominator: u64,
    pub holds: bool,
    pub equality: bool,
    /// Checked only in the equality case.
    pub at_most_one_point_per_kspace: Option<bool>,
    /// Checked only in the equality case.
    pub b0_multiple_of_qk: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BpCase {
    /// Every hyperplane meeting Σ exactly in this k-space is in B_P.
    FullPencil(Subspace),
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpReport {
    pub bp: Vec<Subspace>,
    pub case: BpCase,
    /// Whether B is blocking; the dichotomy is only claimed then.
    pub premise_holds: bool,
    pub conclusion_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub passed: bool,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl LemmaCheck {
    fn new(lemma: &str, instances: usize, counterexample: Option<String>) -> Self {
        LemmaCheck {
            lemma: lemma.to_string(),
            passed: counterexample.is_none(),
            instances,
            counterexample,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub size: usize,
    pub equality_case: bool,
    pub passed: bool,
    pub checks: Vec<LemmaCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineType {
    Skew,
    Tangent,
    Secant,
}

pub fn line_type(
    ctx: &GeometryContext,
    line: &Subspace,
    s: &BTreeSet<Point>,
) -> Result<LineType, BlockingError> {
    BlockingSet::check_dim(line, 1)?;
    let hits = s.iter().filter(|p| ctx.contains_point(line, p)).count();
    Ok(match hits {
        0 => LineType::Skew,
        1 => LineType::Tangent,
        _ => LineType::Secant,
    })
}

/// `S` together with every outside point on no tangent line to `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentClosure {
    pub closure: BTreeSet<Point>,
    /// A point outside `S` on both a tangent and a secant, if any.
    pub hypothesis_violation: Option<Point>,
    pub is_subspace: bool,
    /// Dimension of the span of the closure.
    pub dim: isize,
    /// `min { m : |S| <= θ_m }`.
    pub predicted_dim: isize,
}

impl TangentClosure {
    /// The closure law: a violated hypothesis, or a subspace of the predicted dimension.
    pub fn law_holds(&self) -> bool {
        self.hypothesis_violation.is_some() || (self.is_subspace && self.dim == self.predicted_dim)
    }
}

pub fn tangent_closure(
    ctx: &GeometryContext,
    s: &BTreeSet<Point>,
) -> Result<TangentClosure, BlockingError> {
    if s.is_empty() {
        return Err(BlockingError::EmptySet);
    }
    let mut closure = s.clone();
    let mut violation = None;
    for p in ctx.all_points()? {
        if s.contains(&p) {
            continue;
        }
        let mut on_line: HashMap<Subspace, usize> = HashMap::new();
        for r in s {
            *on_line.entry(ctx.span(&[&p, r])?).or_default() += 1;
        }
        let tangent = on_line.values().any(|&c| c == 1);
        let secant = on_line.values().any(|&c| c >= 2);
        if tangent && secant && violation.is_none() {
            violation = Some(p.clone());
        }
        if !tangent {
            closure.insert(p);
        }
    }
    let span = ctx.span_points(&closure);
    let q = ctx.q() as u64;
    let is_subspace = counting::theta(span.dim() as i64, q) == BigUint::from(closure.len());
    let size = BigUint::from(s.len());
    let predicted_dim = (0..)
        .find(|&m| size <= counting::theta(m as i64, q))
        .unwrap();
    Ok(TangentClosure {
        closure,
        hypothesis_violation: violation,
        is_subspace,
        dim: span.dim(),
        predicted_dim,
    })
}

/// Incidence between the universe of candidate blockers (all points, then all
/// hyperplanes) and the `k`-spaces, as bitsets over canonical `k`-space ordinals.
#[derive(Debug, Clone)]
pub struct Incidence {
    ctx: GeometryContext,
    k: isize,
    spaces: Vec<Subspace>,
    cover: Vec<BitSet>,
    blockers: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(ctx: &GeometryContext, k: isize) -> Result<Self, BlockingError> {
        if k < 0 || k >= ctx.n() as isize {
            return Err(BlockingError::InvalidK {
                n: ctx.n(),
                k: k.max(0) as usize,
            });
        }
        let spaces: Vec<Subspace> = ctx.enumerate_subspaces(k)?.collect();
        let theta = ctx.all_points()?.len();
        let mut cover = vec![BitSet::new(spaces.len()); 2 * theta];
        let mut blockers = Vec::with_capacity(spaces.len());
        for (j, kappa) in spaces.iter().enumerate() {
            let mut bl = Vec::new();
            for p in ctx.points_of(kappa) {
                cover[p.index()].insert(j);
                bl.push(p.index());
            }
            // hyperplanes through kappa are the points of its dual
            for d in ctx.points_of(&ctx.dual(kappa)?) {
                cover[theta + d.index()].insert(j);
                bl.push(theta + d.index());
            }
            bl.sort_unstable();
            blockers.push(bl);
        }
        Ok(Incidence {
            ctx: ctx.clone(),
            k,
            spaces,
            cover,
            blockers,
        })
    }

    pub fn ctx(&self) -> &GeometryContext {
        &self.ctx
    }

    pub fn k(&self) -> isize {
        self.k
    }

    /// Number of candidate blockers (`2 θ_n`).
    pub fn universe_len(&self) -> usize {
        self.cover.len()
    }

    pub fn point_count(&self) -> usize {
        self.cover.len() / 2
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    /// The `k`-spaces blocked by universe element `e`.
    pub fn coverage(&self, e: usize) -> &BitSet {
        &self.cover[e]
    }

    /// Universe elements blocking the `j`-th `k`-space, ascending.
    pub fn blockers(&self, j: usize) -> &[usize] {
        &self.blockers[j]
    }

    pub fn element(&self, e: usize) -> Element {
        let theta = self.point_count();
        if e < theta {
            Element::Point(self.ctx.point_at(e))
        } else {
            Element::Hyperplane(self.ctx.hyperplane_of(&self.ctx.point_at(e - theta)))
        }
    }

    pub fn cover_of_indices(&self, indices: &[usize]) -> BitSet {
        let mut acc = BitSet::new(self.spaces.len());
        for &e in indices {
            acc.union_with(&self.cover[e]);
        }
        acc
    }

    pub fn cover_of(&self, b: &BlockingSet) -> BitSet {
        self.cover_of_indices(&b.element_indices())
    }

    pub fn check_blocking(&self, b: &BlockingSet) -> BlockingCheck {
        let cover = self.cover_of(b);
        let witness = cover.first_missing().map(|j| self.spaces[j].clone());
        BlockingCheck {
            blocking: witness.is_none(),
            witness,
        }
    }

    pub fn is_blocking_indices(&self, indices: &[usize]) -> bool {
        self.cover_of_indices(indices).is_full()
    }

    /// Single-element removal test; enough because blocking is monotone.
    pub fn check_minimal(&self, b: &BlockingSet) -> Result<MinimalityCheck, BlockingError> {
        let idx = b.element_indices();
        match self.removable_element(&idx) {
            None => Err(BlockingError::NotBlocking),
            Some(None) => Ok(MinimalityCheck {
                minimal: true,
                removable: None,
            }),
            Some(Some(e)) => Ok(MinimalityCheck {
                minimal: false,
                removable: Some(self.element(e)),
            }),
        }
    }

    /// `None` if not blocking, otherwise the first element whose removal
    /// keeps the set blocking.
    pub fn removable_element(&self, indices: &[usize]) -> Option<Option<usize>> {
        let mut times = vec![0u32; self.spaces.len()];
        for &e in indices {
            for j in self.cover[e].iter() {
                times[j] += 1;
            }
        }
        if times.contains(&0) {
            return None;
        }
        Some(
            indices
                .iter()
                .copied()
                .find(|&e| self.cover[e].iter().all(|j| times[j] >= 2)),
        )
    }
}
