use std::fmt;
use std::sync::Arc;

use super::{is_prime, Ring, RingError};

/// Largest extension field we build log/antilog tables for.
const MAX_TABLE_FIELD: u64 = 1 << 22;

/// Built-in irreducible moduli, low-order coefficient first, monic.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (7, 2, &[1, 0, 1]),
];

/// Description of `F_q`, `q = p^k`, in polynomial basis over `F_p`.
#[derive(Debug)]
pub struct FieldDesc {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    q: u64,
    id: u32,
    // Only populated for k > 1.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldDesc {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic modulus `c0, c1, ..., ck`; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

/// An element of some [`Field`]. The packed representation is
/// `sum coeffs[i] * p^i`; the field fingerprint catches mixed-field misuse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    field: u32,
    repr: u32,
}

impl FieldElem {
    /// Packed index in `[0, q)`.
    pub fn repr(self) -> u32 {
        self.repr
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F#{}", self.repr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

/// Shared handle to a [`FieldDesc`]; cheap to clone.
#[derive(Clone)]
pub struct Field {
    desc: Arc<FieldDesc>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.desc.p == other.desc.p && self.desc.modulus == other.desc.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, RingError> {
        Self::with_modulus(p, 1, None)
    }

    /// `F_{p^k}` using the built-in modulus table.
    pub fn new(p: u32, k: u32) -> Result<Self, RingError> {
        Self::with_modulus(p, k, None)
    }

    /// `F_{p^k}` with an explicit modulus `c0, ..., ck` (ignored when `k = 1`
    /// and `modulus` is `None`). The modulus is verified irreducible.
    pub fn with_modulus(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self, RingError> {
        if !is_prime(u64::from(p)) {
            return Err(RingError::NotPrime(u64::from(p)));
        }
        if k == 0 {
            return Err(RingError::ZeroDegree);
        }
        let q = (u64::from(p)).checked_pow(k).unwrap_or(u64::MAX);
        if k == 1 {
            if let Some(m) = modulus {
                // A degree-1 modulus carries no information beyond p.
                let m = normalize_modulus(p, 1, m)?;
                debug_assert_eq!(m.len(), 2);
            }
            let desc = FieldDesc {
                p,
                k,
                modulus: Vec::new(),
                q,
                id: fingerprint(p, &[]),
                exp: Vec::new(),
                log: Vec::new(),
            };
            return Ok(Field { desc: Arc::new(desc) });
        }
        if q > MAX_TABLE_FIELD {
            return Err(RingError::FieldTooLarge(q));
        }
        let modulus = match modulus {
            Some(m) => normalize_modulus(p, k, m)?,
            None => BUILTIN_MODULI
                .iter()
                .find(|(bp, bk, _)| *bp == p && *bk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(RingError::NoBuiltinModulus { p, k })?,
        };
        if !is_irreducible(p, &modulus) {
            return Err(RingError::ReducibleModulus(modulus));
        }
        let (exp, log) = build_tables(p, k, &modulus, q as u32);
        let desc = FieldDesc {
            p,
            k,
            id: fingerprint(p, &modulus),
            modulus,
            q,
            exp,
            log,
        };
        Ok(Field { desc: Arc::new(desc) })
    }

    /// Parses `p` or `p^k`, with an optional modulus `c0,c1,...,ck`.
    pub fn parse(spec: &str, modulus: Option<&[u32]>) -> Result<Self, RingError> {
        let bad = || RingError::BadFieldSpec(spec.to_string());
        let (p, k) = match spec.trim().split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u32>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let p = spec.trim().parse::<u32>().map_err(|_| bad())?;
                (p, 1)
            }
        };
        Self::with_modulus(p, k, modulus)
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }

    pub fn p(&self) -> u32 {
        self.desc.p
    }

    pub fn k(&self) -> u32 {
        self.desc.k
    }

    pub fn q(&self) -> u64 {
        self.desc.q
    }

    pub fn name(&self) -> String {
        if self.desc.k == 1 {
            format!("F_{}", self.desc.p)
        } else {
            format!("F_{}^{}", self.desc.p, self.desc.k)
        }
    }

    /// Element with packed index `repr`.
    pub fn elem(&self, repr: u64) -> Result<FieldElem, RingError> {
        if repr >= self.desc.q {
            return Err(RingError::OutOfRange { value: repr, bound: self.desc.q });
        }
        Ok(self.raw(repr as u32))
    }

    /// Element from polynomial-basis coefficients (at most `k` residues).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, RingError> {
        let p = self.desc.p;
        if coeffs.len() > self.desc.k as usize {
            return Err(RingError::OutOfRange {
                value: coeffs.len() as u64,
                bound: u64::from(self.desc.k) + 1,
            });
        }
        let mut repr: u64 = 0;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(RingError::OutOfRange { value: u64::from(c), bound: u64::from(p) });
            }
            repr = repr * u64::from(p) + u64::from(c);
        }
        Ok(self.raw(repr as u32))
    }

    /// The `k` residues of `a` in polynomial basis, low order first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let p = self.desc.p;
        let mut r = a.repr;
        (0..self.desc.k)
            .map(|_| {
                let d = r % p;
                r /= p;
                d
            })
            .collect()
    }

    /// All `q` elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.desc.q as u32).map(move |r| self.raw(r))
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.field == self.desc.id && u64::from(a.repr) < self.desc.q
    }

    /// Checked binary/unary field operation. `b` is ignored for `Inv` and `Pow`.
    pub fn apply(&self, op: FieldOp, a: FieldElem, b: FieldElem) -> Result<FieldElem, RingError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(RingError::MixedFields);
        }
        Ok(match op {
            FieldOp::Add => self.add_raw(a.repr, b.repr),
            FieldOp::Sub => self.add_raw(a.repr, self.neg_raw(b.repr)),
            FieldOp::Mul => self.mul_raw(a.repr, b.repr),
            FieldOp::Inv => return self.inv(a),
            FieldOp::Pow(e) => Ring::pow(self, &a, e),
        })
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, RingError> {
        if !self.contains(a) {
            return Err(RingError::MixedFields);
        }
        if a.repr == 0 {
            return Err(RingError::InverseOfZero);
        }
        if self.desc.k == 1 {
            Ok(Ring::pow(self, &a, self.desc.q - 2))
        } else {
            let n = self.desc.q as u32 - 1;
            let l = self.desc.log[a.repr as usize];
            Ok(self.raw(self.desc.exp[((n - l) % n) as usize]))
        }
    }

    /// `a^(q-1)`, i.e. 1 for nonzero `a` and 0 for zero.
    pub fn fermat(&self, a: FieldElem) -> FieldElem {
        if a.repr == 0 {
            self.zero()
        } else {
            self.one()
        }
    }

    pub fn format(&self, a: FieldElem) -> String {
        if self.desc.k == 1 {
            return a.repr.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    fn raw(&self, repr: u32) -> FieldElem {
        FieldElem { field: self.desc.id, repr }
    }

    fn add_raw(&self, a: u32, b: u32) -> FieldElem {
        let d = &self.desc;
        if d.k == 1 {
            let s = (u64::from(a) + u64::from(b)) % u64::from(d.p);
            return self.raw(s as u32);
        }
        if d.p == 2 {
            return self.raw(a ^ b);
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..d.k {
            let s = (a % d.p + b % d.p) % d.p;
            out += s * place;
            place = place.wrapping_mul(d.p);
            a /= d.p;
            b /= d.p;
        }
        self.raw(out)
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let d = &self.desc;
        if d.k == 1 {
            return if a == 0 { 0 } else { d.p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..d.k {
            let digit = a % d.p;
            out += ((d.p - digit) % d.p) * place;
            place = place.wrapping_mul(d.p);
            a /= d.p;
        }
        out
    }

    fn mul_raw(&self, a: u32, b: u32) -> FieldElem {
        let d = &self.desc;
        if d.k == 1 {
            let s = (u64::from(a) * u64::from(b)) % u64::from(d.p);
            return self.raw(s as u32);
        }
        if a == 0 || b == 0 {
            return self.raw(0);
        }
        let n = d.q as u32 - 1;
        let l = (d.log[a as usize] + d.log[b as usize]) % n;
        self.raw(d.exp[l as usize])
    }
}

impl Ring for Field {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        self.raw(0)
    }

    fn one(&self) -> FieldElem {
        self.raw(1)
    }

    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        debug_assert!(self.contains(*a) && self.contains(*b));
        self.add_raw(a.repr, b.repr)
    }

    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        debug_assert!(self.contains(*a) && self.contains(*b));
        self.mul_raw(a.repr, b.repr)
    }

    fn neg(&self, a: &FieldElem) -> FieldElem {
        self.raw(self.neg_raw(a.repr))
    }

    fn is_zero(&self, a: &FieldElem) -> bool {
        a.repr == 0
    }

    fn is_one(&self, a: &FieldElem) -> bool {
        a.repr == 1
    }

    fn from_int(&self, n: i64) -> FieldElem {
        let p = i64::from(self.desc.p);
        self.raw(n.rem_euclid(p) as u32)
    }

    fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        let d = &self.desc;
        if d.k == 1 || a.repr == 0 {
            // Generic square-and-multiply.
            let mut base = *a;
            let mut acc = self.one();
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_raw(acc.repr, base.repr);
                }
                e >>= 1;
                if e > 0 {
                    base = self.mul_raw(base.repr, base.repr);
                }
            }
            return acc;
        }
        let n = u64::from(d.q as u32 - 1);
        let l = (u64::from(d.log[a.repr as usize]) * (e % n)) % n;
        self.raw(d.exp[l as usize])
    }
}

fn fingerprint(p: u32, modulus: &[u32]) -> u32 {
    // FNV-1a over the defining data.
    let mut h: u32 = 0x811c_9dc5;
    for w in std::iter::once(p).chain(modulus.iter().copied()) {
        for byte in w.to_le_bytes() {
            h ^= u32::from(byte);
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

fn normalize_modulus(p: u32, k: u32, m: &[u32]) -> Result<Vec<u32>, RingError> {
    let mut m: Vec<u32> = m.iter().map(|&c| c % p).collect();
    if m.len() != k as usize + 1 || *m.last().unwrap() == 0 {
        return Err(RingError::BadModulus(m));
    }
    let lead = *m.last().unwrap();
    let inv = mod_pow(lead, p - 2, p);
    for c in &mut m {
        *c = ((u64::from(*c) * u64::from(inv)) % u64::from(p)) as u32;
    }
    Ok(m)
}

fn mod_pow(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut base = u64::from(b % p);
    let p = u64::from(p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo the monic polynomial `m`, both low order first.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p64 = u64::from(p);
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &c) in m[..dm].iter().enumerate() {
            let sub = lead * u64::from(c) % p64;
            r[shift + i] = (r[shift + i] + p64 - sub) % p64;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (u64::from(p)).pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut r = idx;
            for _ in 0..d {
                divisor.push((r % u64::from(p)) as u32);
                r /= u64::from(p);
            }
            divisor.push(1);
            if poly_rem(p, m, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn unpack(p: u32, k: u32, mut repr: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = repr % p;
            repr /= p;
            d
        })
        .collect()
}

fn pack(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn slow_mul(p: u32, k: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let da = unpack(p, k, a);
    let db = unpack(p, k, b);
    let mut prod = vec![0u32; 2 * k as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((u64::from(prod[i + j]) + u64::from(x) * u64::from(y)) % u64::from(p)) as u32;
        }
    }
    let mut r = poly_rem(p, &prod, modulus);
    r.resize(k as usize, 0);
    pack(p, &r)
}

fn build_tables(p: u32, k: u32, modulus: &[u32], q: u32) -> (Vec<u32>, Vec<u32>) {
    let n = q - 1;
    for g in 2..q {
        let mut exp = Vec::with_capacity(n as usize);
        let mut x = 1u32;
        let mut order = 0u32;
        loop {
            exp.push(x);
            x = slow_mul(p, k, modulus, x, g);
            order += 1;
            if x == 1 || order > n {
                break;
            }
        }
        if order == n {
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            return (exp, log);
        }
    }
    // q = 2^1 is handled by the prime path; every other field has a generator.
    unreachable!("multiplicative group of an extension field is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f5 = Field::prime(5).unwrap();
        let (a, b) = (f5.elem(3).unwrap(), f5.elem(4).unwrap());
        assert_eq!(f5.apply(FieldOp::Mul, a, b).unwrap(), f5.elem(2).unwrap());

        let f7 = Field::prime(7).unwrap();
        let three = f7.elem(3).unwrap();
        assert_eq!(f7.apply(FieldOp::Pow(6), three, three).unwrap(), f7.one());
    }

    #[test]
    fn f4_reduces_by_modulus() {
        let f4 = Field::new(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let x_plus_1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.apply(FieldOp::Mul, x, x).unwrap(), x_plus_1);
        assert_eq!(f4.format(x_plus_1), "x+1");
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.inv(f.zero()), Err(RingError::InverseOfZero));
        let f = Field::prime(11).unwrap();
        assert_eq!(f.apply(FieldOp::Inv, f.zero(), f.zero()), Err(RingError::InverseOfZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let f3 = Field::prime(3).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let a = f3.one();
        let b = f9.one();
        assert_eq!(f9.apply(FieldOp::Add, a, b), Err(RingError::MixedFields));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over F_2.
        assert!(matches!(
            Field::with_modulus(2, 2, Some(&[1, 0, 1])),
            Err(RingError::ReducibleModulus(_))
        ));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over F_2: no roots but a quadratic factor.
        assert!(matches!(
            Field::with_modulus(2, 4, Some(&[1, 0, 1, 0, 1])),
            Err(RingError::ReducibleModulus(_))
        ));
        assert!(Field::with_modulus(3, 2, Some(&[2, 2, 2])).is_err());
        assert!(Field::with_modulus(4, 1, None).is_err());
        assert!(Field::new(11, 2).is_err());
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for &(p, k, m) in BUILTIN_MODULI {
            assert!(is_irreducible(p, m), "{p}^{k}");
            let f = Field::new(p, k).unwrap();
            assert_eq!(f.q(), u64::from(p).pow(k));
        }
    }

    #[test]
    fn user_modulus_for_unlisted_field() {
        // x^3 + x + 1 over F_5 has no roots.
        let f = Field::with_modulus(5, 3, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(f.q(), 125);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(Ring::pow(&f, &x, 124), f.one());
        // Non-monic input is normalized.
        let g = Field::with_modulus(5, 2, Some(&[4, 0, 2])).unwrap();
        assert_eq!(g.desc().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Field::parse("5", None).unwrap().q(), 5);
        assert_eq!(Field::parse("2^2", None).unwrap().q(), 4);
        assert!(Field::parse("x", None).is_err());
        let f = Field::parse("2^3", Some(&[1, 0, 1, 1])).unwrap();
        assert_eq!(f.desc().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn q_equals_two_generic_path() {
        let f = Field::prime(2).unwrap();
        assert_eq!(Ring::pow(&f, &f.one(), 1), f.one());
        assert_eq!(Ring::pow(&f, &f.zero(), 1), f.zero());
        assert_eq!(f.add(&f.one(), &f.one()), f.zero());
    }
}
