//! Exact arithmetic domains: prime and small extension fields, truncated
//! bivariate polynomial rings over them, and the integers.
//!
//! Everything that evaluates polynomials in this crate (circuits, the counting
//! families, symbolic expansion) is generic over [`Ring`], so the same code
//! path runs over `F_q`, over `F_q[z,t]/(z^{Dz+1}, t^{Dt+1})` and over `Z`.

mod field;
mod integers;
mod trunc;

use std::fmt;

pub use field::{Field, FieldDesc, FieldElem, FieldOp};
pub use integers::Integers;
pub use trunc::{TruncPoly, TruncRing};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {0} is too large for table-driven extension arithmetic")]
    FieldTooLarge(u64),
    #[error("no built-in modulus for q = {p}^{k}; supply one explicitly")]
    NoBuiltinModulus { p: u32, k: u32 },
    #[error("modulus {0:?} has the wrong degree or a zero leading coefficient")]
    BadModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("residue {value} is not in [0, {bound})")]
    OutOfRange { value: u64, bound: u64 },
    #[error("truncation caps differ: {0:?} vs {1:?}")]
    CapMismatch((u32, u32), (u32, u32)),
    #[error("coefficient index ({dz}, {dt}) exceeds caps {caps:?}")]
    IndexOutOfCaps { dz: u32, dt: u32, caps: (u32, u32) },
    #[error("cannot parse field descriptor {0:?}")]
    BadFieldSpec(String),
}

/// A commutative ring with identity whose elements are plain values.
///
/// Operations are infallible; operands are assumed to come from `self`.
/// Checked variants live on the concrete types.
pub trait Ring {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Square-and-multiply.
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.zero();
        for x in items {
            self.add_assign(&mut acc, x);
        }
        acc
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        let mut acc = self.one();
        for x in items {
            if !self.is_one(x) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
