use super::Ring;

/// The integers, with overflow treated as a bug.
///
/// Desk-scale enumerations never approach `i128` limits; an overflow panics
/// rather than silently wrapping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i128;

    fn zero(&self) -> i128 {
        0
    }

    fn one(&self) -> i128 {
        1
    }

    fn add(&self, a: &i128, b: &i128) -> i128 {
        a.checked_add(*b).expect("integer overflow in exact arithmetic")
    }

    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a.checked_mul(*b).expect("integer overflow in exact arithmetic")
    }

    fn neg(&self, a: &i128) -> i128 {
        -a
    }

    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }

    fn from_int(&self, n: i64) -> i128 {
        i128::from(n)
    }
}
