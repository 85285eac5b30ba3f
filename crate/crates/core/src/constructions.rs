//! Generators and recognizers for the extremal blocking sets.
//!
//! The mixed construction lives in PG(2k+1, q): a `(k+1)`-space Σ, a
//! `(k-1)`-space σ ⊂ Σ, and a partition of the `q + 1` k-spaces between them
//! into nonempty parts K1 and K2. B0 is every point of a K1 member outside σ,
//! and B_{n-1} every hyperplane through a K2 member that does not contain Σ.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::blocking::{BlockingError, BlockingSet};
use crate::geometry::{GeometryContext, GeometryError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("the construction needs n = 2k + 1 (n = {n}, k = {k})")]
    WrongAmbient { n: usize, k: isize },
    #[error("{what} has dimension {got}, expected {expected}")]
    WrongDimension {
        what: &'static str,
        expected: isize,
        got: isize,
    },
    #[error("sigma is not contained in Sigma")]
    NotNested,
    #[error("K1 and K2 do not partition the pencil of k-spaces between sigma and Sigma")]
    BadPencil,
    #[error("K1 and K2 must both be nonempty")]
    EmptyPart,
    #[error("anchor has dimension {got}, expected {expected}")]
    WrongAnchorDim { expected: isize, got: isize },
    #[error("{0}")]
    WrongParameters(String),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Blocking(#[from] BlockingError),
}

/// Parameters `(Σ, σ, K1, K2)` of the mixed construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction1Params {
    pub sigma_big: Subspace,
    pub sigma: Subspace,
    pub k1: Vec<Subspace>,
    pub k2: Vec<Subspace>,
}

impl Construction1Params {
    /// Target dimension `k`, read off Σ.
    pub fn k(&self) -> isize {
        self.sigma_big.dim() - 1
    }

    pub fn t(&self) -> usize {
        self.k1.len()
    }

    pub fn validate(&self, ctx: &GeometryContext) -> Result<(), ConstructionError> {
        let k = self.k();
        if k < 0 || ctx.n() as isize != 2 * k + 1 {
            return Err(ConstructionError::WrongAmbient { n: ctx.n(), k });
        }
        if self.sigma.dim() != k - 1 {
            return Err(ConstructionError::WrongDimension {
                what: "sigma",
                expected: k - 1,
                got: self.sigma.dim(),
            });
        }
        if !ctx.contains(&self.sigma_big, &self.sigma)? {
            return Err(ConstructionError::NotNested);
        }
        if self.k1.is_empty() || self.k2.is_empty() {
            return Err(ConstructionError::EmptyPart);
        }
        let members: BTreeSet<&Subspace> = self.k1.iter().chain(&self.k2).collect();
        if members.len() != self.k1.len() + self.k2.len() || members.len() != ctx.q() as usize + 1 {
            return Err(ConstructionError::BadPencil);
        }
        for kappa in &members {
            if kappa.dim() != k
                || !ctx.contains(kappa, &self.sigma)?
                || !ctx.contains(&self.sigma_big, *kappa)?
            {
                return Err(ConstructionError::BadPencil);
            }
        }
        Ok(())
    }

    /// Parameters of the dual instance: `(σ^⊥, Σ^⊥, K2^⊥, K1^⊥)`.
    pub fn dual(&self, ctx: &GeometryContext) -> Result<Self, ConstructionError> {
        let dual_all = |v: &[Subspace]| -> Result<Vec<Subspace>, GeometryError> {
            let mut out = v
                .iter()
                .map(|s| ctx.dual(s))
                .collect::<Result<Vec<_>, _>>()?;
            out.sort();
            Ok(out)
        };
        Ok(Construction1Params {
            sigma_big: ctx.dual(&self.sigma)?,
            sigma: ctx.dual(&self.sigma_big)?,
            k1: dual_all(&self.k2)?,
            k2: dual_all(&self.k1)?,
        })
    }
}

/// The `q + 1` k-spaces between σ and Σ, sorted.
pub fn pencil(
    ctx: &GeometryContext,
    sigma: &Subspace,
    sigma_big: &Subspace,
) -> Result<Vec<Subspace>, ConstructionError> {
    let k = sigma.dim() + 1;
    Ok(ctx
        .subspaces_within(sigma_big, k)?
        .into_iter()
        .filter(|kappa| ctx.contains(kappa, sigma).unwrap())
        .collect())
}

pub fn construction1(
    ctx: &GeometryContext,
    params: &Construction1Params,
) -> Result<BlockingSet, ConstructionError> {
    params.validate(ctx)?;
    let mut points = BTreeSet::new();
    for kappa in &params.k1 {
        for p in ctx.points_of(kappa) {
            if !ctx.contains_point(&params.sigma, &p) {
                points.insert(p);
            }
        }
    }
    let sigma_big_dual = ctx.dual(&params.sigma_big)?;
    let mut hyperplanes = BTreeSet::new();
    for kappa in &params.k2 {
        // hyperplanes through kappa are the points of kappa's dual
        for d in ctx.points_of(&ctx.dual(kappa)?) {
            if !ctx.contains_point(&sigma_big_dual, &d) {
                hyperplanes.insert(ctx.hyperplane_of(&d));
            }
        }
    }
    Ok(BlockingSet::new(
        ctx.clone(),
        params.k() as usize,
        points,
        hyperplanes,
    )?)
}

fn middle_k(ctx: &GeometryContext) -> Result<isize, ConstructionError> {
    let n = ctx.n() as isize;
    if n % 2 == 0 {
        return Err(ConstructionError::WrongAmbient {
            n: ctx.n(),
            k: (n - 1) / 2,
        });
    }
    Ok((n - 1) / 2)
}

fn split_pencil(
    members: Vec<Subspace>,
    mask: u64,
    sigma: Subspace,
    sigma_big: Subspace,
) -> Construction1Params {
    let (mut k1, mut k2) = (Vec::new(), Vec::new());
    for (i, kappa) in members.into_iter().enumerate() {
        if mask >> i & 1 == 1 {
            k1.push(kappa);
        } else {
            k2.push(kappa);
        }
    }
    Construction1Params {
        sigma_big,
        sigma,
        k1,
        k2,
    }
}

/// Standard-basis instance: Σ = ⟨e_0..e_{k+1}⟩, σ = ⟨e_0..e_{k-1}⟩, and K1 the
/// first `t` pencil members in canonical order.
pub fn canonical_params(
    ctx: &GeometryContext,
    t: usize,
) -> Result<Construction1Params, ConstructionError> {
    let k = middle_k(ctx)? as usize;
    if t == 0 || t > ctx.q() as usize {
        return Err(ConstructionError::EmptyPart);
    }
    let sigma_big = ctx.coordinate_subspace(0..k + 2);
    let sigma = ctx.coordinate_subspace(0..k);
    let members = pencil(ctx, &sigma, &sigma_big)?;
    Ok(split_pencil(members, (1 << t) - 1, sigma, sigma_big))
}

pub fn random_params<R: Rng + ?Sized>(
    ctx: &GeometryContext,
    rng: &mut R,
) -> Result<Construction1Params, ConstructionError> {
    let k = middle_k(ctx)?;
    let sigma_big = ctx.random_subspace(rng, None, k + 1);
    let sigma = ctx.random_subspace(rng, Some(&sigma_big), k - 1);
    let mut members = pencil(ctx, &sigma, &sigma_big)?;
    members.shuffle(rng);
    let t = rng.gen_range(1..members.len());
    let mut k1 = members.split_off(members.len() - t);
    let mut k2 = members;
    k1.sort();
    k2.sort();
    Ok(Construction1Params {
        sigma_big,
        sigma,
        k1,
        k2,
    })
}

/// Every parameter tuple `(Σ, σ, K1, K2)` of the ambient space.
pub fn all_params(ctx: &GeometryContext) -> Result<Vec<Construction1Params>, ConstructionError> {
    let k = middle_k(ctx)?;
    let parts = ctx.q() as u64 + 1;
    let mut out = Vec::new();
    for sigma_big in ctx.enumerate_subspaces(k + 1)? {
        for sigma in ctx.subspaces_within(&sigma_big, k - 1)? {
            let members = pencil(ctx, &sigma, &sigma_big)?;
            for mask in 1..(1u64 << parts) - 1 {
                out.push(split_pencil(
                    members.clone(),
                    mask,
                    sigma.clone(),
                    sigma_big.clone(),
                ));
            }
        }
    }
    Ok(out)
}

/// Recovers parameters whenever `b` is exactly an instance of the mixed
/// construction: candidate `(Σ, σ)` pairs come from the span of B0 and the
/// meet of the hyperplanes, and each candidate is regenerated and compared.
pub fn recognize_construction1(b: &BlockingSet) -> Option<Construction1Params> {
    let ctx = b.ctx();
    let k = b.k() as isize;
    let q = ctx.q() as usize;
    if ctx.n() as isize != 2 * k + 1
        || b.len() != (q + 1) * q.pow(k as u32)
        || b.points().is_empty()
        || b.hyperplanes().is_empty()
    {
        return None;
    }

    let span = ctx.span_points(b.points());
    let mut meet = ctx.whole();
    for h in b.hyperplanes() {
        meet = ctx.meet(&meet, h).ok()?;
    }

    // |K1| = 1 leaves span(B0) a k-space; |K2| = 1 leaves the meet a k-space
    let sigma_bigs = match span.dim() {
        d if d == k + 1 => vec![span.clone()],
        d if d == k => ctx.superspaces(&span, k + 1).ok()?,
        _ => return None,
    };
    let sigmas = match meet.dim() {
        d if d == k - 1 => vec![meet.clone()],
        d if d == k => ctx.subspaces_within(&meet, k - 1).ok()?,
        _ => return None,
    };

    for sigma_big in &sigma_bigs {
        for sigma in &sigmas {
            if !ctx.contains(sigma_big, sigma).ok()? {
                continue;
            }
            let members = pencil(ctx, sigma, sigma_big).ok()?;
            let (k1, k2): (Vec<Subspace>, Vec<Subspace>) = members
                .into_iter()
                .partition(|kappa| b.points().iter().any(|p| ctx.contains_point(kappa, p)));
            let params = Construction1Params {
                sigma_big: sigma_big.clone(),
                sigma: sigma.clone(),
                k1,
                k2,
            };
            if let Ok(regenerated) = construction1(ctx, &params) {
                if regenerated == *b {
                    return Some(params);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoseBurtonVariant {
    /// All points of an `(n-k)`-space.
    Points,
    /// All hyperplanes through an `(n-k-2)`-space.
    Hyperplanes,
}

pub fn bose_burton(
    ctx: &GeometryContext,
    k: usize,
    variant: BoseBurtonVariant,
    anchor: &Subspace,
) -> Result<BlockingSet, ConstructionError> {
    let n = ctx.n() as isize;
    let k_i = k as isize;
    if k_i >= n {
        return Err(ConstructionError::WrongParameters(format!(
            "need k < n (k = {k})"
        )));
    }
    let expected = match variant {
        BoseBurtonVariant::Points => n - k_i,
        BoseBurtonVariant::Hyperplanes => n - k_i - 2,
    };
    if anchor.dim() != expected {
        return Err(ConstructionError::WrongAnchorDim {
            expected,
            got: anchor.dim(),
        });
    }
    Ok(match variant {
        BoseBurtonVariant::Points => BlockingSet::new(ctx.clone(), k, ctx.points_of(anchor), [])?,
        BoseBurtonVariant::Hyperplanes => {
            let hyps = ctx
                .points_of(&ctx.dual(anchor)?)
                .iter()
                .map(|d| ctx.hyperplane_of(d))
                .collect::<Vec<_>>();
            BlockingSet::new(ctx.clone(), k, [], hyps)?
        }
    })
}

/// Whether `b` is a Bose–Burton set of the given variant.
pub fn recognize_bose_burton(b: &BlockingSet, variant: BoseBurtonVariant) -> Option<Subspace> {
    let ctx = b.ctx();
    let anchor = match variant {
        BoseBurtonVariant::Points if b.hyperplanes().is_empty() && !b.points().is_empty() => {
            ctx.span_points(b.points())
        }
        BoseBurtonVariant::Hyperplanes if b.points().is_empty() && !b.hyperplanes().is_empty() => {
            let mut meet = ctx.whole();
            for h in b.hyperplanes() {
                meet = ctx.meet(&meet, h).ok()?;
            }
            meet
        }
        _ => return None,
    };
    let regenerated = bose_burton(ctx, b.k(), variant, &anchor).ok()?;
    (regenerated == *b).then_some(anchor)
}

/// The q = 2, k = n/2 example: the points of an (n/2)-space Σ outside an
/// (n/2 - 1)-space κ ⊂ Σ, plus the hyperplanes through κ not containing Σ.
pub fn remark_q2_construction(ctx: &GeometryContext) -> Result<BlockingSet, ConstructionError> {
    let n = ctx.n();
    if ctx.q() != 2 || !n.is_multiple_of(2) {
        return Err(ConstructionError::WrongParameters(format!(
            "needs q = 2 and even n (q = {}, n = {n})",
            ctx.q()
        )));
    }
    let half = n / 2;
    let sigma_big = ctx.coordinate_subspace(0..half + 1);
    let kappa = ctx.coordinate_subspace(0..half);
    let points: Vec<_> = ctx
        .points_of(&sigma_big)
        .into_iter()
        .filter(|p| !ctx.contains_point(&kappa, p))
        .collect();
    let sigma_big_dual = ctx.dual(&sigma_big)?;
    let hyperplanes: Vec<_> = ctx
        .points_of(&ctx.dual(&kappa)?)
        .into_iter()
        .filter(|d| !ctx.contains_point(&sigma_big_dual, d))
        .map(|d| ctx.hyperplane_of(&d))
        .collect();
    Ok(BlockingSet::new(ctx.clone(), half, points, hyperplanes)?)
}
