//! Table-driven arithmetic in GF(q), q = p^e.
//!
//! An element is stored as its code in `[0, q)`: base-p digit `i` of the code
//! is the coefficient of `x^i` in the polynomial representative modulo the
//! field's irreducible modulus. All arithmetic goes through tables built once
//! in [`FieldSpec::new`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order supported by the table layout (codes fit in a byte).
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u32),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("no built-in modulus for q = {0}; supply one")]
    NoBuiltinModulus(u32),
    #[error("modulus {0:?} is not monic of degree e with coefficients in [0, p)")]
    MalformedModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible over GF(p)")]
    ReducibleModulus(Vec<u32>),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("code {code} is not an element of GF({q})")]
    NotAnElement { code: u32, q: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
}

/// A field element, identified by its code.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(pub u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Built-in irreducible moduli, coefficients listed from `x^0` upwards.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),    // x^3 + x + 1
    (3, 2, &[1, 0, 1]),       // x^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (5, 2, &[2, 0, 1]),       // x^2 + 2
    (3, 3, &[1, 2, 0, 1]),    // x^3 + 2x + 1
];

/// The finite field GF(p^e) with precomputed operation tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Polynomials over GF(p), coefficient vectors from x^0 upwards.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * lead) % p;
        }
        r = poly_trim(r);
    }
    r
}

/// All monic polynomials of the given degree over GF(p).
fn monic_polys(degree: u32, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(degree);
    (0..count).map(move |mut c| {
        let mut v = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            v.push(c % p);
            c /= p;
        }
        v.push(1);
        v
    })
}

/// Irreducibility by trial division against every monic divisor of degree `<= e/2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() as u32 - 1;
    (1..=e / 2).all(|d| monic_polys(d, p).all(|f| !poly_rem_monic(modulus, &f, p).is_empty()))
}

impl FieldSpec {
    /// Builds GF(p^e). `modulus` lists the `e + 1` coefficients of a monic
    /// irreducible polynomial from the constant term upwards; when omitted for
    /// `e > 1`, the built-in table is consulted.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrimeP(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;

        // The modulus is unused for prime fields.
        let modulus: Vec<u32> = match modulus {
            _ if e == 1 => vec![0, 1],
            Some(m) => m.to_vec(),
            None => BUILTIN_MODULI
                .iter()
                .find(|(bp, be, _)| *bp == p && *be == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(FieldError::NoBuiltinModulus(q))?,
        };
        if e > 1 {
            if modulus.len() != e as usize + 1
                || modulus[e as usize] != 1
                || modulus.iter().any(|&c| c >= p)
            {
                return Err(FieldError::MalformedModulus(modulus));
            }
            if !is_irreducible(&modulus, p) {
                return Err(FieldError::ReducibleModulus(modulus));
            }
        }

        let decode = |code: u32| -> Vec<u32> {
            let mut c = code;
            (0..e)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        };
        let encode = |poly: &[u32]| -> u32 { poly.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let qs = q as usize;
        let polys: Vec<Vec<u32>> = (0..q).map(decode).collect();
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let sum: Vec<u32> = polys[a]
                    .iter()
                    .zip(&polys[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = encode(&sum) as u8;
                let prod = if e == 1 {
                    vec![(polys[a][0] * polys[b][0]) % p]
                } else {
                    poly_rem_monic(&poly_mul(&polys[a], &polys[b], p), &modulus, p)
                };
                mul[a * qs + b] = encode(&prod) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8;
            }
        }

        Ok(FieldSpec {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    /// GF(q) from the order alone, using the built-in modulus table.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        FieldSpec::new(p, e, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, code: u32) -> Result<Fe, FieldError> {
        if code < self.q {
            Ok(Fe(code as u8))
        } else {
            Err(FieldError::NotAnElement { code, q: self.q })
        }
    }

    /// All elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(|c| Fe(c as u8))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.code() * self.q as usize + b.code()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.code()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.code() * self.q as usize + b.code()])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            Err(FieldError::InverseOfZero)
        } else {
            Ok(Fe(self.inv[a.code()]))
        }
    }

    /// Inverse of a nonzero element; callers guarantee `a != 0`.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        Fe(self.inv[a.code()])
    }

    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Dispatches a single operation; `b` is required for the binary ones.
    pub fn arith(&self, op: ArithOp, a: Fe, b: Option<Fe>) -> Result<Fe, FieldError> {
        let second = || {
            b.ok_or(FieldError::NotAnElement {
                code: u32::MAX,
                q: self.q,
            })
        };
        for x in std::iter::once(a).chain(b) {
            if x.0 as u32 >= self.q {
                return Err(FieldError::NotAnElement {
                    code: x.0 as u32,
                    q: self.q,
                });
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(a, second()?),
            ArithOp::Sub => self.sub(a, second()?),
            ArithOp::Mul => self.mul(a, second()?),
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
        })
    }
}
