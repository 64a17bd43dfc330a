use super::{Field, FieldElem, Ring, RingError};

/// Element of `F_q[z,t] / (z^{Dz+1}, t^{Dt+1})`.
///
/// Logically a `(Dz+1) x (Dt+1)` coefficient grid; stored as the sorted list
/// of its nonzero entries, since the sums built by the counting families are
/// dominated by products of monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncPoly {
    caps: (u32, u32),
    terms: Vec<(u32, u32, FieldElem)>,
}

impl TruncPoly {
    pub fn caps(&self) -> (u32, u32) {
        self.caps
    }

    /// Nonzero entries `(z-degree, t-degree, coefficient)` in increasing order.
    pub fn terms(&self) -> &[(u32, u32, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The truncated ring itself: base field plus degree caps.
#[derive(Clone, Debug)]
pub struct TruncRing {
    field: Field,
    caps: (u32, u32),
}

impl TruncRing {
    pub fn new(field: Field, dz: u32, dt: u32) -> Self {
        TruncRing { field, caps: (dz, dt) }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn caps(&self) -> (u32, u32) {
        self.caps
    }

    /// `c * z^i * t^j`, or zero if the monomial is above the caps.
    pub fn monomial(&self, i: u32, j: u32, c: FieldElem) -> TruncPoly {
        let mut terms = Vec::new();
        if i <= self.caps.0 && j <= self.caps.1 && !self.field.is_zero(&c) {
            terms.push((i, j, c));
        }
        TruncPoly { caps: self.caps, terms }
    }

    pub fn z(&self) -> TruncPoly {
        self.monomial(1, 0, self.field.one())
    }

    pub fn t(&self) -> TruncPoly {
        self.monomial(0, 1, self.field.one())
    }

    pub fn constant(&self, c: FieldElem) -> TruncPoly {
        self.monomial(0, 0, c)
    }

    /// Builds an element from a full grid; `grid[i][j]` is the coefficient of
    /// `z^i t^j`.
    pub fn from_grid(&self, grid: &[Vec<FieldElem>]) -> Result<TruncPoly, RingError> {
        let rows = grid.len() as u32;
        let cols = grid.first().map_or(0, |r| r.len()) as u32;
        if rows != self.caps.0 + 1 || grid.iter().any(|r| r.len() as u32 != self.caps.1 + 1) {
            return Err(RingError::CapMismatch((rows.saturating_sub(1), cols.saturating_sub(1)), self.caps));
        }
        let mut terms = Vec::new();
        for (i, row) in grid.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if !self.field.contains(c) {
                    return Err(RingError::MixedFields);
                }
                if !self.field.is_zero(&c) {
                    terms.push((i as u32, j as u32, c));
                }
            }
        }
        Ok(TruncPoly { caps: self.caps, terms })
    }

    pub fn to_grid(&self, a: &TruncPoly) -> Vec<Vec<FieldElem>> {
        let mut grid =
            vec![vec![self.field.zero(); a.caps.1 as usize + 1]; a.caps.0 as usize + 1];
        for &(i, j, c) in &a.terms {
            grid[i as usize][j as usize] = c;
        }
        grid
    }

    /// Coefficient of `z^dz t^dt`.
    pub fn coefficient(&self, a: &TruncPoly, dz: u32, dt: u32) -> Result<FieldElem, RingError> {
        if dz > a.caps.0 || dt > a.caps.1 {
            return Err(RingError::IndexOutOfCaps { dz, dt, caps: a.caps });
        }
        Ok(a.terms
            .binary_search_by(|&(i, j, _)| (i, j).cmp(&(dz, dt)))
            .map(|pos| a.terms[pos].2)
            .unwrap_or_else(|_| self.field.zero()))
    }

    pub fn checked_add(&self, a: &TruncPoly, b: &TruncPoly) -> Result<TruncPoly, RingError> {
        self.check_caps(a, b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: &TruncPoly, b: &TruncPoly) -> Result<TruncPoly, RingError> {
        self.check_caps(a, b)?;
        Ok(self.mul(a, b))
    }

    fn check_caps(&self, a: &TruncPoly, b: &TruncPoly) -> Result<(), RingError> {
        if a.caps != b.caps {
            return Err(RingError::CapMismatch(a.caps, b.caps));
        }
        if a.caps != self.caps {
            return Err(RingError::CapMismatch(a.caps, self.caps));
        }
        Ok(())
    }

    fn mul_dense(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        let (dz, dt) = self.caps;
        let width = dt as usize + 1;
        let mut grid = vec![self.field.zero(); (dz as usize + 1) * width];
        for &(i1, j1, c1) in &a.terms {
            for &(i2, j2, c2) in &b.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                if i > dz || j > dt {
                    continue;
                }
                let slot = &mut grid[i as usize * width + j as usize];
                *slot = self.field.add(slot, &self.field.mul(&c1, &c2));
            }
        }
        let terms = grid
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(idx, c)| ((idx / width) as u32, (idx % width) as u32, c))
            .collect();
        TruncPoly { caps: self.caps, terms }
    }
}

impl Ring for TruncRing {
    type Elem = TruncPoly;

    fn zero(&self) -> TruncPoly {
        TruncPoly { caps: self.caps, terms: Vec::new() }
    }

    fn one(&self) -> TruncPoly {
        self.constant(self.field.one())
    }

    fn add(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    fn add_assign(&self, acc: &mut TruncPoly, b: &TruncPoly) {
        debug_assert_eq!(acc.caps, b.caps);
        if b.terms.is_empty() {
            return;
        }
        if b.terms.len() <= 4 {
            for &(i, j, c) in &b.terms {
                match acc.terms.binary_search_by(|&(x, y, _)| (x, y).cmp(&(i, j))) {
                    Ok(pos) => {
                        let s = self.field.add(&acc.terms[pos].2, &c);
                        if self.field.is_zero(&s) {
                            acc.terms.remove(pos);
                        } else {
                            acc.terms[pos].2 = s;
                        }
                    }
                    Err(pos) => acc.terms.insert(pos, (i, j, c)),
                }
            }
            return;
        }
        let mut merged = Vec::with_capacity(acc.terms.len() + b.terms.len());
        let (mut x, mut y) = (acc.terms.iter().peekable(), b.terms.iter().peekable());
        loop {
            match (x.peek(), y.peek()) {
                (Some(&&(i1, j1, c1)), Some(&&(i2, j2, c2))) => {
                    match (i1, j1).cmp(&(i2, j2)) {
                        std::cmp::Ordering::Less => {
                            merged.push((i1, j1, c1));
                            x.next();
                        }
                        std::cmp::Ordering::Greater => {
                            merged.push((i2, j2, c2));
                            y.next();
                        }
                        std::cmp::Ordering::Equal => {
                            let s = self.field.add(&c1, &c2);
                            if !self.field.is_zero(&s) {
                                merged.push((i1, j1, s));
                            }
                            x.next();
                            y.next();
                        }
                    }
                }
                (Some(&&t), None) => {
                    merged.push(t);
                    x.next();
                }
                (None, Some(&&t)) => {
                    merged.push(t);
                    y.next();
                }
                (None, None) => break,
            }
        }
        acc.terms = merged;
    }

    fn mul(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        debug_assert_eq!(a.caps, b.caps);
        if a.terms.is_empty() || b.terms.is_empty() {
            return self.zero();
        }
        if a.terms.len() * b.terms.len() > 16 {
            return self.mul_dense(a, b);
        }
        let (dz, dt) = self.caps;
        let mut terms: Vec<(u32, u32, FieldElem)> = Vec::new();
        for &(i1, j1, c1) in &a.terms {
            for &(i2, j2, c2) in &b.terms {
                let (i, j) = (i1 + i2, j1 + j2);
                if i <= dz && j <= dt {
                    terms.push((i, j, self.field.mul(&c1, &c2)));
                }
            }
        }
        terms.sort_by_key(|&(i, j, _)| (i, j));
        let mut out: Vec<(u32, u32, FieldElem)> = Vec::with_capacity(terms.len());
        for (i, j, c) in terms {
            match out.last_mut() {
                Some(last) if (last.0, last.1) == (i, j) => last.2 = self.field.add(&last.2, &c),
                _ => out.push((i, j, c)),
            }
        }
        out.retain(|t| !self.field.is_zero(&t.2));
        TruncPoly { caps: self.caps, terms: out }
    }

    fn neg(&self, a: &TruncPoly) -> TruncPoly {
        TruncPoly {
            caps: a.caps,
            terms: a.terms.iter().map(|&(i, j, c)| (i, j, self.field.neg(&c))).collect(),
        }
    }

    fn is_zero(&self, a: &TruncPoly) -> bool {
        a.terms.is_empty()
    }

    fn is_one(&self, a: &TruncPoly) -> bool {
        a.terms.len() == 1 && a.terms[0].0 == 0 && a.terms[0].1 == 0 && self.field.is_one(&a.terms[0].2)
    }

    fn from_int(&self, n: i64) -> TruncPoly {
        self.constant(self.field.from_int(n))
    }
}
