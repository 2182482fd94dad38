//! Independent oracles shared by the integration tests. Nothing here calls
//! into the reduction code it is used to check.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use pochette::diagram::{HandleDiagram, TwoHandle};
use pochette::intlin::IntMatrix;
use rand::Rng;

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| i128::try_from(x).expect("small entries")).collect())
        .collect()
}

/// Fraction-free Gaussian elimination on a square matrix.
pub fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Determinantal divisors `d_k = gcd` of all `k x k` minors, for `k = 1..`
/// while some minor is nonzero.
pub fn determinantal_divisors(a: &[Vec<i128>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        'outer: for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det_i128(minor));
                if g == 1 {
                    break 'outer;
                }
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

/// Cokernel of `a` as `(free rank, torsion factors >= 2)` from determinantal divisors.
pub fn cokernel_oracle(a: &[Vec<i128>], rows: usize) -> (usize, Vec<BigInt>) {
    let d = determinantal_divisors(a);
    let mut torsion = Vec::new();
    let mut prev = 1i128;
    for &dk in &d {
        let s = dk / prev;
        if s > 1 {
            torsion.push(BigInt::from(s));
        }
        prev = dk;
    }
    (rows - d.len(), torsion)
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, max_entry: i64) -> IntMatrix {
    let r = rng.gen_range(0..=max_dim);
    let c = rng.gen_range(0..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-max_entry..=max_entry) })
                .collect()
        })
        .collect();
    if r == 0 {
        IntMatrix::zeros(0, c)
    } else {
        IntMatrix::from_rows(&rows).unwrap()
    }
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_i128(a: &[Vec<i128>]) -> usize {
    determinantal_divisors(a).len()
}

/// A random closed diagram with at most `max` handles of index 1 and 2,
/// with `n3` chosen so that `b1 <= n3` and `b2 >= 0`.
pub fn random_closed_diagram(rng: &mut impl Rng, max: usize) -> HandleDiagram {
    let n1 = rng.gen_range(0..=max);
    let n2 = rng.gen_range(0..=max);
    let ones: Vec<String> = (0..n1).map(|i| format!("c{i}")).collect();
    let mut twos: Vec<TwoHandle> = (0..n2).map(|j| TwoHandle::new(format!("k{j}"), rng.gen_range(-3..=3))).collect();
    for h in &mut twos {
        for c in &ones {
            if rng.gen_bool(0.45) {
                let v = [-2, -1, -1, 1, 1, 1, 2, 3][rng.gen_range(0..8)];
                h.linking.insert(c.clone(), v);
            }
        }
    }
    for a in 0..n2 {
        for b in a + 1..n2 {
            if rng.gen_bool(0.25) {
                let v = rng.gen_range(-2..=2);
                if v != 0 {
                    let (ia, ib) = (twos[a].id.clone(), twos[b].id.clone());
                    twos[a].two_linking.insert(ib, v);
                    twos[b].two_linking.insert(ia, v);
                }
            }
        }
    }
    let l: Vec<Vec<i128>> = ones
        .iter()
        .map(|c| twos.iter().map(|h| i128::from(h.linking_with(c))).collect())
        .collect();
    let r = if n1 == 0 || n2 == 0 { 0 } else { rank_i128(&l) };
    let b1 = n1 - r;
    let n3 = b1 + rng.gen_range(0..=n2 - r);
    HandleDiagram {
        name: String::new(),
        one_handles: ones,
        two_handles: twos,
        n3: n3 as u32,
        n4: 1,
    }
}

/// `H1` of `S^4(p/q)` expected from the cokernel of multiplication by `p`:
/// `(free rank, torsion)`.
pub fn expected_h1(p: i64) -> (usize, Vec<BigInt>) {
    match p.unsigned_abs() {
        0 => (1, vec![]),
        1 => (0, vec![]),
        n => (0, vec![BigInt::from(n)]),
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
