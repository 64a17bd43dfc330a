use std::collections::BTreeMap;
use std::fmt;

use super::VarLabel;
use crate::rings::Ring;

/// A power product of labels, kept sorted by label with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<(VarLabel, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(label: VarLabel) -> Self {
        Monomial(vec![(label, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = VarLabel>>(factors: I) -> Self {
        let mut m = Monomial::one();
        for l in factors {
            m.mul_var(l, 1);
        }
        m
    }

    pub fn factors(&self) -> &[(VarLabel, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, label: &VarLabel) -> u32 {
        self.0
            .binary_search_by(|(l, _)| l.cmp(label))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul_var(&mut self, label: VarLabel, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by(|(l, _)| l.cmp(&label)) {
            Ok(i) => self.0[i].1 += e,
            Err(i) => self.0.insert(i, (label, e)),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Drops every factor whose label fails `keep`.
    pub fn restrict(&self, keep: impl Fn(&VarLabel) -> bool) -> Monomial {
        Monomial(self.0.iter().filter(|(l, _)| keep(l)).cloned().collect())
    }

    pub fn eval<R: Ring>(
        &self,
        ring: &R,
        value: &mut impl FnMut(&VarLabel) -> Option<R::Elem>,
    ) -> Option<R::Elem> {
        let mut acc = ring.one();
        for (l, e) in &self.0 {
            let v = value(l)?;
            acc = ring.mul(&acc, &ring.pow(&v, u64::from(*e)));
        }
        Some(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (l, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with coefficients in some [`Ring`]. No
/// zero coefficient is ever stored.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePoly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq + fmt::Debug> SparsePoly<E> {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, c: E) -> Self {
        Self::term(ring, Monomial::one(), c)
    }

    pub fn var<R: Ring<Elem = E>>(ring: &R, label: VarLabel) -> Self {
        Self::term(ring, Monomial::var(label), ring.one())
    }

    pub fn term<R: Ring<Elem = E>>(ring: &R, m: Monomial, c: E) -> Self {
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(m, c);
        }
        SparsePoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, m: Monomial, c: E) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                ring.add_assign(existing, &c);
                if ring.is_zero(existing) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(ring, other);
        out
    }

    pub fn add_assign<R: Ring<Elem = E>>(&mut self, ring: &R, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(ring, m.clone(), c.clone());
        }
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(ring, m1.mul(m2), ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(ring, m.clone(), ring.mul(x, c));
        }
        out
    }

    /// Maps every coefficient through `f` (e.g. integers to `F_p`).
    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&E) -> S::Elem) -> SparsePoly<S::Elem> {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c));
        }
        out
    }

    /// Substitutes ring values for every label; `None` if some label is
    /// unassigned.
    pub fn eval<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        mut value: impl FnMut(&VarLabel) -> Option<E>,
    ) -> Option<E> {
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let v = m.eval(ring, &mut value)?;
            ring.add_assign(&mut acc, &ring.mul(c, &v));
        }
        Some(acc)
    }
}

impl<E: fmt::Display> fmt::Display for SparsePoly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}
