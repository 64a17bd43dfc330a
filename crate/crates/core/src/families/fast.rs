use super::{clause_space, tdm_vertex, Family};
use crate::circuit::VarLabel;
use crate::rings::{Field, FieldElem, Ring};

/// Polynomial-time evaluation of the index-`n` polynomial of `family` over
/// `field`. Since `v^(q-1)` is 1 for nonzero `v` and 0 otherwise, each sum
/// counts the index-set members whose variables are all nonzero, modulo `p`.
pub fn eval_fast(field: &Field, family: Family, n: u32, value: impl Fn(&VarLabel) -> FieldElem) -> FieldElem {
    let nz = |l: &VarLabel| !field.is_zero(&value(l));
    let two_pow = |k: u64| field.pow(&field.from_int(2), k);
    match family {
        Family::Sat => {
            // Bit i must be 0 (resp. 1) when some zero variable forbids 1
            // (resp. 0).
            let n = n as usize;
            let mut must0 = vec![false; n];
            let mut must1 = vec![false; n];
            for i in 0..n {
                must0[i] = !nz(&VarLabel::Xi(i as u32 + 1));
            }
            for c in clause_space(n as u32) {
                if nz(&VarLabel::Yc(c)) {
                    continue;
                }
                // The assignment must falsify every literal of c.
                for &lit in c.literals() {
                    let i = (lit.unsigned_abs() - 1) as usize;
                    if lit > 0 {
                        must0[i] = true;
                    } else {
                        must1[i] = true;
                    }
                }
            }
            if (0..n).any(|i| must0[i] && must1[i]) {
                return field.zero();
            }
            two_pow((0..n).filter(|&i| !must0[i] && !must1[i]).count() as u64)
        }
        Family::Vc => {
            let full = (1..=n)
                .filter(|&v| nz(&VarLabel::Yv(v)) && (1..=n).all(|w| w == v || nz(&VarLabel::xe(v, w))))
                .count();
            two_pow(full as u64)
        }
        Family::Cis => {
            let live = surviving_graph(n, &nz);
            let edges: usize = live.iter().map(|row| row.iter().filter(|&&b| b).count()).sum();
            two_pow(edges as u64 / 2)
        }
        Family::Clow => {
            let live = surviving_graph(n, &nz);
            field.from_int(clow_head_counts(&live, n as usize, field.p() as u64).iter().sum::<u64>() as i64)
        }
        Family::Tdm => {
            let mut count = 0u64;
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        let alive = nz(&VarLabel::Xh(a, b, c))
                            && nz(&tdm_vertex(n, 0, a))
                            && nz(&tdm_vertex(n, 1, b))
                            && nz(&tdm_vertex(n, 2, c));
                        count += alive as u64;
                    }
                }
            }
            two_pow(count)
        }
    }
}

/// Adjacency of `K_n` keeping edges whose weight and endpoint weights are
/// all nonzero; 0-based.
fn surviving_graph(n: u32, nz: &impl Fn(&VarLabel) -> bool) -> Vec<Vec<bool>> {
    let n = n as usize;
    let vert: Vec<bool> = (1..=n as u32).map(|v| nz(&VarLabel::Yv(v))).collect();
    let mut adj = vec![vec![false; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let alive = vert[u] && vert[v] && nz(&VarLabel::xe(u as u32 + 1, v as u32 + 1));
            adj[u][v] = alive;
            adj[v][u] = alive;
        }
    }
    adj
}

/// For each head `i`, the number (mod `modulus`) of closed walks of length
/// `len` that start at `i` and otherwise stay above `i`: the diagonal entry
/// `[A_i A_{i+1}^{len-2} A_i]_{i,i}` where `A_j` is `adj` restricted to
/// vertices `j..`. Walks of length below 2 do not exist.
pub fn clow_head_counts(adj: &[Vec<bool>], len: usize, modulus: u64) -> Vec<u64> {
    let n = adj.len();
    let mut out = vec![0u64; n];
    if len < 2 {
        return out;
    }
    for (head, slot) in out.iter_mut().enumerate() {
        // Row vector of walks from head currently ending at each vertex.
        let mut cur: Vec<u64> = (0..n).map(|j| (j > head && adj[head][j]) as u64).collect();
        for _ in 0..len - 2 {
            let mut next = vec![0u64; n];
            for (k, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for j in head + 1..n {
                    if adj[k][j] {
                        next[j] = (next[j] + c) % modulus;
                    }
                }
            }
            cur = next;
        }
        *slot = (0..n).filter(|&k| adj[k][head]).fold(0, |s, k| (s + cur[k]) % modulus);
    }
    out
}
