//! Oracles shared by the integration tests. Nothing here calls into the library's
//! elimination code: ranks and invariant factors come from determinantal divisors.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mbflow::homalg::CoefficientRing;
use mbflow::twisted::{BlockFamily, TwistedComplex};
use mbflow::{GradedChainComplex, HomologySummary, Int, IntegerMatrix};
use num_integer::Integer;
use rand::Rng;

pub type Dense = Vec<Vec<i64>>;

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all `k x k` minors.
pub fn minor_gcd(m: &[Vec<i64>], cols: usize, k: usize) -> i128 {
    let mut g: i128 = 0;
    for rs in subsets(m.len(), k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

/// Rank and invariant factors `d_k / d_{k-1}` from determinantal divisors.
pub fn invariant_factors(m: &[Vec<i64>], cols: usize) -> (usize, Vec<i128>) {
    let mut factors = Vec::new();
    let mut prev = 1i128;
    for k in 1..=m.len().min(cols) {
        let g = minor_gcd(m, cols, k);
        if g == 0 {
            break;
        }
        factors.push(g / prev);
        prev = g;
    }
    (factors.len(), factors)
}

/// Rank over `F_p` by elimination on a copy.
pub fn rank_mod(m: &[Vec<i64>], cols: usize, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).unwrap();
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A cellular complex given by ranks from degree `lo` and `d[k]` out of degree `lo + k + 1`.
#[derive(Clone, Debug)]
pub struct Cells {
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub d: Vec<Dense>,
}

impl Cells {
    pub fn zero_differentials(lo: i64, ranks: &[usize]) -> Self {
        let d = ranks.windows(2).map(|w| vec![vec![0; w[1]]; w[0]]).collect();
        Self { lo, ranks: ranks.to_vec(), d }
    }

    /// Differential out of degree `n`, as a dense matrix with its column count.
    fn out_of(&self, n: i64) -> (Dense, usize) {
        let k = n - self.lo - 1;
        if k < 0 || k as usize >= self.d.len() {
            let cols = self.rank(n);
            return (vec![vec![0; cols]; self.rank(n - 1)], cols);
        }
        (self.d[k as usize].clone(), self.rank(n))
    }

    pub fn rank(&self, n: i64) -> usize {
        let k = n - self.lo;
        if k < 0 {
            return 0;
        }
        self.ranks.get(k as usize).copied().unwrap_or(0)
    }

    pub fn homology(&self, ring: CoefficientRing) -> HomologySummary {
        let mut h = HomologySummary::empty(ring);
        let hi = self.lo + self.ranks.len() as i64;
        for n in self.lo..hi {
            let (dn, cn) = self.out_of(n);
            let (dn1, cn1) = self.out_of(n + 1);
            let (r_in, r_out, tors) = match ring {
                CoefficientRing::Integers => {
                    let (r_out, _) = invariant_factors(&dn, cn);
                    let (r_in, f) = invariant_factors(&dn1, cn1);
                    (r_in, r_out, f.into_iter().filter(|&x| x > 1).map(Int::from).collect::<Vec<_>>())
                }
                CoefficientRing::PrimeField(p) => (rank_mod(&dn1, cn1, p as i64), rank_mod(&dn, cn, p as i64), vec![]),
            };
            let free = self.rank(n) - r_in - r_out;
            if free > 0 {
                h.free_rank.insert(n, free);
            }
            if !tors.is_empty() {
                h.torsion.insert(n, tors);
            }
        }
        h
    }

    /// Cohomology placed in negative degrees: `H^k` at `-k`, torsion moved up one degree.
    pub fn cohomology_negated(&self, ring: CoefficientRing) -> HomologySummary {
        let h = self.homology(ring);
        let mut out = HomologySummary::empty(ring);
        for (&n, &r) in &h.free_rank {
            out.free_rank.insert(-n, r);
        }
        for (&n, t) in &h.torsion {
            out.torsion.insert(-(n + 1), t.clone());
        }
        out
    }
}

/// Gaussian binomial `[n choose k]_t` by the q-Pascal rule, as coefficients from `t^0`.
pub fn gaussian_binomial(n: usize, k: usize) -> Vec<i64> {
    if k > n {
        return vec![];
    }
    if k == 0 || k == n {
        return vec![1];
    }
    // [n, k] = [n-1, k-1] + t^k [n-1, k]
    let a = gaussian_binomial(n - 1, k - 1);
    let b = gaussian_binomial(n - 1, k);
    let mut out = vec![0; (a.len()).max(b.len() + k)];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + k] += c;
    }
    out
}

/// A random filtered complex, as flat data and as a twisted complex.
///
/// `D = G D0 G^{-1}` where `D0` is a sum of elementary pieces `x -> c y` with
/// filtration not increasing, and `G` is unitriangular in (piece, position)
/// order within each degree. Both preserve the filtration, so `D` does.
#[derive(Clone, Debug)]
pub struct RandomFiltered {
    /// `(piece, total degree)` per generator, sorted by piece then degree.
    pub gens: Vec<(i64, i64)>,
    /// `d[a][b]` is the coefficient of generator `a` in `D(b)`.
    pub d: Vec<Vec<i64>>,
    pub twisted: TwistedComplex,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Inverse of an upper unitriangular integer matrix.
#[allow(clippy::needless_range_loop)]
fn unitriangular_inverse(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut inv = vec![vec![0i64; n]; n];
    for j in 0..n {
        inv[j][j] = 1;
        for i in (0..j).rev() {
            inv[i][j] = -(i + 1..=j).map(|k| g[i][k] * inv[k][j]).sum::<i64>();
        }
    }
    inv
}

pub fn random_filtered(rng: &mut impl Rng, ring: CoefficientRing, max_gens: usize) -> RandomFiltered {
    let pieces = rng.gen_range(1..=3i64);
    let n = rng.gen_range(1..=max_gens);
    let mut gens: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(0..pieces), rng.gen_range(0..=3i64))).collect();
    gens.sort_unstable();
    let char2 = ring == CoefficientRing::PrimeField(2);

    let mut d0 = vec![vec![0i64; n]; n];
    let mut used = vec![false; n];
    for _ in 0..n {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if used[x] || used[y] || gens[x].1 != gens[y].1 + 1 || gens[y].0 > gens[x].0 {
            continue;
        }
        used[x] = true;
        used[y] = true;
        d0[y][x] = if char2 { 1 } else { [1, 1, -1, 2, 3][rng.gen_range(0..5)] };
    }
    let mut g = vec![vec![0i64; n]; n];
    for a in 0..n {
        g[a][a] = 1;
        for b in a + 1..n {
            if gens[a].1 == gens[b].1 && rng.gen_bool(0.4) {
                g[a][b] = if char2 { 1 } else { rng.gen_range(-2..=2) };
            }
        }
    }
    let mut d = mat_mul(&mat_mul(&g, &d0), &unitriangular_inverse(&g));
    if let CoefficientRing::PrimeField(p) = ring {
        for row in d.iter_mut() {
            for x in row.iter_mut() {
                *x = x.rem_euclid(p as i64);
            }
        }
    }
    let twisted = to_twisted(ring, &gens, &d);
    RandomFiltered { gens, d, twisted }
}

/// Splits a filtration-preserving differential into pieces and structure maps.
fn to_twisted(ring: CoefficientRing, gens: &[(i64, i64)], d: &[Vec<i64>]) -> TwistedComplex {
    // local position of each generator inside (piece, internal degree)
    let mut local = Vec::with_capacity(gens.len());
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for &(i, n) in gens {
        let c = counts.entry((i, n - i)).or_default();
        local.push(*c);
        *c += 1;
    }
    let rank = |i: i64, m: i64| counts.get(&(i, m)).copied().unwrap_or(0);
    let mut internal: BTreeMap<i64, BTreeMap<i64, IntegerMatrix>> = BTreeMap::new();
    let mut structure: BTreeMap<(i64, i64), BlockFamily> = BTreeMap::new();
    for (b, &(i, nb)) in gens.iter().enumerate() {
        let m = nb - i;
        for (a, &(j, na)) in gens.iter().enumerate() {
            let v = d[a][b];
            if v == 0 {
                continue;
            }
            assert!(j <= i && na == nb - 1, "random differential leaves the filtration");
            let target_m = na - j;
            let block = if i == j {
                internal
                    .entry(i)
                    .or_default()
                    .entry(m)
                    .or_insert_with(|| IntegerMatrix::zeros(rank(j, target_m), rank(i, m)))
            } else {
                structure
                    .entry((i, j))
                    .or_default()
                    .entry(m)
                    .or_insert_with(|| IntegerMatrix::zeros(rank(j, target_m), rank(i, m)))
            };
            block.set(local[a], local[b], Int::from(v));
        }
    }
    let indices: std::collections::BTreeSet<i64> = gens.iter().map(|g| g.0).collect();
    let pieces = indices
        .into_iter()
        .map(|i| {
            let ranks: BTreeMap<i64, usize> =
                counts.iter().filter(|((p, _), _)| *p == i).map(|(&(_, m), &r)| (m, r)).collect();
            let diffs = internal.remove(&i).unwrap_or_default();
            (i, GradedChainComplex::from_degree_maps(ring, &ranks, &diffs).expect("diagonal part squares to zero"))
        })
        .collect();
    TwistedComplex::new(ring, pieces, structure).expect("indices decrease")
}

/// The flat differential as a cellular complex ordered by total degree.
pub fn flat_cells(r: &RandomFiltered) -> Cells {
    let lo = r.gens.iter().map(|g| g.1).min().unwrap_or(0);
    let hi = r.gens.iter().map(|g| g.1).max().unwrap_or(0);
    let by_degree: Vec<Vec<usize>> =
        (lo..=hi).map(|n| (0..r.gens.len()).filter(|&a| r.gens[a].1 == n).collect()).collect();
    let ranks = by_degree.iter().map(Vec::len).collect();
    let d = (1..by_degree.len())
        .map(|k| by_degree[k - 1].iter().map(|&a| by_degree[k].iter().map(|&b| r.d[a][b]).collect()).collect())
        .collect();
    Cells { lo, ranks, d }
}
