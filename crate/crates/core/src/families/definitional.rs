use super::{clause_space, tdm_vertex, Family, FamilyError};
use crate::circuit::VarLabel;
use crate::rings::Ring;

/// Largest `n` for which [`eval_definitional`] enumerates the sum.
pub const fn definitional_budget(family: Family) -> u32 {
    match family {
        Family::Sat | Family::Vc => 12,
        Family::Cis => 6,
        Family::Clow => 7,
        Family::Tdm => 2,
    }
}

/// A factor `v^(q-1)`, remembering whether it is one so products can skip it.
struct Pw<E> {
    val: E,
    one: bool,
}

struct Powered<'r, R: Ring> {
    ring: &'r R,
    exp: u64,
}

impl<R: Ring> Powered<'_, R> {
    fn get(&self, v: R::Elem) -> Pw<R::Elem> {
        let val = self.ring.pow(&v, self.exp);
        let one = self.ring.is_one(&val);
        Pw { val, one }
    }
}

/// Multiplies `acc` by `f`; returns false once the product is zero.
fn times<R: Ring>(ring: &R, acc: &mut R::Elem, f: &Pw<R::Elem>) -> bool {
    if !f.one {
        *acc = ring.mul(acc, &f.val);
    }
    !ring.is_zero(acc)
}

/// Evaluates the index-`n` polynomial of `family` at `value` by summing its
/// defining exponential sum over the ring `R`. Every variable `v` enters as
/// `v^(q-1)`. Refuses `n` above [`definitional_budget`].
pub fn eval_definitional<R: Ring>(
    ring: &R,
    family: Family,
    n: u32,
    q: u64,
    value: impl Fn(&VarLabel) -> R::Elem,
) -> Result<R::Elem, FamilyError> {
    let max = definitional_budget(family);
    if n > max {
        return Err(FamilyError::Budget { family, n, max });
    }
    let pw = Powered { ring, exp: q - 1 };
    Ok(match family {
        Family::Sat => sat(ring, n, &pw, &value),
        Family::Vc => vc(ring, n, &pw, &value),
        Family::Cis => cis(ring, n, &pw, &value),
        Family::Clow => clow(ring, n, &pw, &value),
        Family::Tdm => tdm(ring, n, &pw, &value),
    })
}

fn sat<R: Ring>(ring: &R, n: u32, pw: &Powered<R>, value: &impl Fn(&VarLabel) -> R::Elem) -> R::Elem {
    let xs: Vec<Pw<R::Elem>> = (1..=n).map(|i| pw.get(value(&VarLabel::Xi(i)))).collect();
    // Clauses whose factor is one never change a product.
    let mut ys = Vec::new();
    for c in clause_space(n) {
        let f = pw.get(value(&VarLabel::Yc(c)));
        if f.one {
            continue;
        }
        let (mut pos, mut neg) = (0u32, 0u32);
        for &lit in c.literals() {
            let bit = 1u32 << (lit.unsigned_abs() - 1);
            if lit > 0 {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        ys.push((pos, neg, f));
    }
    let mut total = ring.zero();
    'assign: for a in 0u32..1 << n {
        let mut acc = ring.one();
        for (i, x) in xs.iter().enumerate() {
            if a >> i & 1 == 1 && !times(ring, &mut acc, x) {
                continue 'assign;
            }
        }
        for (pos, neg, f) in &ys {
            if (a & pos) | (!a & neg) != 0 && !times(ring, &mut acc, f) {
                continue 'assign;
            }
        }
        ring.add_assign(&mut total, &acc);
    }
    total
}

/// Edge factors of `K_n` as `(u, v, factor)` with `u < v`, 0-based, and the
/// vertex factors.
fn graph_factors<R: Ring>(
    n: u32,
    pw: &Powered<R>,
    value: &impl Fn(&VarLabel) -> R::Elem,
) -> (Vec<(usize, usize, Pw<R::Elem>)>, Vec<Pw<R::Elem>>) {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            edges.push(((u - 1) as usize, (v - 1) as usize, pw.get(value(&VarLabel::xe(u, v)))));
        }
    }
    let ys = (1..=n).map(|v| pw.get(value(&VarLabel::Yv(v)))).collect();
    (edges, ys)
}

fn vc<R: Ring>(ring: &R, n: u32, pw: &Powered<R>, value: &impl Fn(&VarLabel) -> R::Elem) -> R::Elem {
    let (edges, ys) = graph_factors(n, pw, value);
    let mut total = ring.zero();
    'subset: for s in 0u32..1 << n {
        let mut acc = ring.one();
        for (u, v, f) in &edges {
            if (s >> u | s >> v) & 1 == 1 && !times(ring, &mut acc, f) {
                continue 'subset;
            }
        }
        for (v, f) in ys.iter().enumerate() {
            if s >> v & 1 == 1 && !times(ring, &mut acc, f) {
                continue 'subset;
            }
        }
        ring.add_assign(&mut total, &acc);
    }
    total
}

fn cis<R: Ring>(ring: &R, n: u32, pw: &Powered<R>, value: &impl Fn(&VarLabel) -> R::Elem) -> R::Elem {
    let (edges, ys) = graph_factors(n, pw, value);
    let mut total = ring.zero();
    'subset: for t in 0u64..1 << edges.len() {
        let mut acc = ring.one();
        let mut touched = 0u32;
        for (i, (u, v, f)) in edges.iter().enumerate() {
            if t >> i & 1 == 1 {
                touched |= 1 << u | 1 << v;
                if !times(ring, &mut acc, f) {
                    continue 'subset;
                }
            }
        }
        for (v, f) in ys.iter().enumerate() {
            if touched >> v & 1 == 1 && !times(ring, &mut acc, f) {
                continue 'subset;
            }
        }
        ring.add_assign(&mut total, &acc);
    }
    total
}

fn clow<R: Ring>(ring: &R, n: u32, pw: &Powered<R>, value: &impl Fn(&VarLabel) -> R::Elem) -> R::Elem {
    let (edges, ys) = graph_factors(n, pw, value);
    let n = n as usize;
    let mut x: Vec<Vec<Option<&Pw<R::Elem>>>> = vec![vec![None; n]; n];
    for (u, v, f) in &edges {
        x[*u][*v] = Some(f);
        x[*v][*u] = Some(f);
    }
    let mut total = ring.zero();
    if n < 2 {
        return total;
    }
    let mut walk = vec![0usize; n];
    for head in 0..n - 1 {
        walk[0] = head;
        let mut digits = vec![head + 1; n - 1];
        // Odometer over the remaining n-1 positions, each in head+1..n.
        'walks: loop {
            walk[1..].copy_from_slice(&digits);
            let ok = (0..n).all(|i| walk[i] != walk[(i + 1) % n]);
            if ok {
                let mut acc = ring.one();
                let mut seen = 0u32;
                let mut live = true;
                for i in 0..n {
                    let (a, b) = (walk[i], walk[(i + 1) % n]);
                    live = times(ring, &mut acc, x[a][b].expect("distinct endpoints"));
                    if !live {
                        break;
                    }
                    if seen >> a & 1 == 0 {
                        seen |= 1 << a;
                        live = times(ring, &mut acc, &ys[a]);
                        if !live {
                            break;
                        }
                    }
                }
                if live {
                    ring.add_assign(&mut total, &acc);
                }
            }
            let mut k = n - 2;
            loop {
                digits[k] += 1;
                if digits[k] < n {
                    break;
                }
                digits[k] = head + 1;
                if k == 0 {
                    break 'walks;
                }
                k -= 1;
            }
        }
    }
    total
}

fn tdm<R: Ring>(ring: &R, n: u32, pw: &Powered<R>, value: &impl Fn(&VarLabel) -> R::Elem) -> R::Elem {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                let verts = [a - 1, n + b - 1, 2 * n + c - 1];
                edges.push((verts, pw.get(value(&VarLabel::Xh(a, b, c)))));
            }
        }
    }
    let ys: Vec<Pw<R::Elem>> = (0..3).flat_map(|part| (1..=n).map(move |i| (part, i))).map(|(p, i)| pw.get(value(&tdm_vertex(n, p, i)))).collect();
    let mut total = ring.zero();
    'subset: for s in 0u64..1 << edges.len() {
        let mut acc = ring.one();
        let mut touched = 0u32;
        for (i, (verts, f)) in edges.iter().enumerate() {
            if s >> i & 1 == 1 {
                for v in verts {
                    touched |= 1 << v;
                }
                if !times(ring, &mut acc, f) {
                    continue 'subset;
                }
            }
        }
        for (v, f) in ys.iter().enumerate() {
            if touched >> v & 1 == 1 && !times(ring, &mut acc, f) {
                continue 'subset;
            }
        }
        ring.add_assign(&mut total, &acc);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Field, Integers};

    fn ones(_: &VarLabel) -> i128 {
        1
    }

    #[test]
    fn all_ones_counts_index_sets() {
        let z = Integers;
        // Over the integers with exponent 1 every monomial is 1, so the sum
        // counts its index set.
        assert_eq!(eval_definitional(&z, Family::Sat, 3, 2, ones).unwrap(), 8);
        assert_eq!(eval_definitional(&z, Family::Vc, 4, 2, ones).unwrap(), 16);
        assert_eq!(eval_definitional(&z, Family::Cis, 4, 2, ones).unwrap(), 64);
        assert_eq!(eval_definitional(&z, Family::Tdm, 2, 2, ones).unwrap(), 256);
        // Clows of length 3 on K_3: head 1 then (2,3) or (3,2).
        assert_eq!(eval_definitional(&z, Family::Clow, 3, 2, ones).unwrap(), 2);
        // Length 4 on K_4, against an explicit listing.
        let mut listed = 0;
        for h in 1..=4 {
            for a in h + 1..=4 {
                for b in h + 1..=4 {
                    for c in h + 1..=4 {
                        if a != b && b != c {
                            listed += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(eval_definitional(&z, Family::Clow, 4, 2, ones).unwrap(), listed);
        assert_eq!(eval_definitional(&z, Family::Clow, 1, 2, ones).unwrap(), 0);
    }

    #[test]
    fn zero_weights_kill_terms() {
        let f = Field::prime(3).unwrap();
        // X_1 = 0 forces a_1 = 0; the remaining two bits are free.
        let v = eval_definitional(&f, Family::Sat, 3, 3, |l| if *l == VarLabel::Xi(1) { f.zero() } else { f.one() }).unwrap();
        assert_eq!(v, f.from_int(4));
        // A zero vertex weight removes every set containing it.
        let v = eval_definitional(&f, Family::Vc, 3, 3, |l| if *l == VarLabel::Yv(2) { f.zero() } else { f.one() }).unwrap();
        assert_eq!(v, f.from_int(4));
    }

    #[test]
    fn budget_is_enforced() {
        let f = Field::prime(2).unwrap();
        assert!(matches!(
            eval_definitional(&f, Family::Cis, 7, 2, |_| f.one()),
            Err(FamilyError::Budget { n: 7, max: 6, .. })
        ));
    }
}
