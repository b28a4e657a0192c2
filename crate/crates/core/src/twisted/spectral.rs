//! Spectral sequence of the index filtration over a prime field.
//!
//! With `F_p` spanned by generators of pieces of index `<= p`, the pages are
//! computed directly from
//!
//! ```text
//! Z^r_p = { x in F_p : Dx in F_{p-r} }
//! B^r_p = F_p ∩ D(F_{p+r})
//! E^r_p = Z^r_p / (Z^{r-1}_{p-1} + B^{r-1}_p)
//! ```
//!
//! and `d^r` is `D` read through chosen complements. Every page is audited
//! against the previous one, and the limit against the homology of the totalization.

use std::collections::BTreeMap;

use super::TwistedComplex;
use crate::error::{Error, Result};
use crate::homalg::modp::Vector;
use crate::homalg::{homology, CoefficientRing, HomologySummary, PrimeField};

/// One page. Keys are `(p, q)` with total degree `p + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub dims: BTreeMap<(i64, i64), usize>,
    /// `d^r` out of `(p, q)` into `(p - r, q + r - 1)`, as rows of the target basis. Zero maps are omitted.
    pub differentials: BTreeMap<(i64, i64), Vec<Vector>>,
}

impl Page {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.differentials.is_empty()
    }

    /// Dimensions summed over each column `p`, as `(q, dim)` lists.
    pub fn column(&self, p: i64) -> Vec<(i64, usize)> {
        self.dims.iter().filter(|((pp, _), _)| *pp == p).map(|(&(_, q), &d)| (q, d)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSequenceResult {
    pub prime: u64,
    pub pages: Vec<Page>,
    pub e_infinity: BTreeMap<(i64, i64), usize>,
    /// Total degree to `Σ_p dim E^∞_{p, n-p}`.
    pub limit: BTreeMap<i64, usize>,
    /// First page whose dimensions already equal `E^∞`, if reached within the requested pages.
    pub collapse_page: Option<usize>,
    pub audit_failure: Option<String>,
}

impl SpectralSequenceResult {
    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn is_consistent(&self) -> bool {
        self.audit_failure.is_none()
    }
}

struct Filtered {
    f: PrimeField,
    /// Piece index of each generator, per total degree.
    pieces: BTreeMap<i64, Vec<i64>>,
    /// Dense differential out of each degree.
    d: BTreeMap<i64, Vec<Vector>>,
}

impl Filtered {
    fn rank(&self, n: i64) -> usize {
        self.pieces.get(&n).map_or(0, Vec::len)
    }

    fn positions(&self, n: i64, keep: impl Fn(i64) -> bool) -> Vec<usize> {
        self.pieces.get(&n).map_or(Vec::new(), |v| (0..v.len()).filter(|&k| keep(v[k])).collect())
    }

    fn apply(&self, n: i64, x: &[u64]) -> Vector {
        match self.d.get(&n) {
            Some(rows) if self.rank(n - 1) > 0 => self.f.apply(rows, x),
            _ => vec![0; self.rank(n - 1)],
        }
    }

    /// Basis of `{x in F_p Tot_n : Dx in F_{p-r}}`.
    fn z(&self, n: i64, p: i64, r: i64) -> Vec<Vector> {
        let cols = self.positions(n, |i| i <= p);
        if cols.is_empty() {
            return Vec::new();
        }
        let rows = self.positions(n - 1, |i| i > p - r);
        let a: Vec<Vector> = match self.d.get(&n) {
            Some(d) => rows.iter().map(|&ri| cols.iter().map(|&c| d[ri][c]).collect()).collect(),
            None => Vec::new(),
        };
        self.f
            .kernel(&a, cols.len())
            .into_iter()
            .map(|k| {
                let mut v = vec![0; self.rank(n)];
                for (&c, x) in cols.iter().zip(k) {
                    v[c] = x;
                }
                v
            })
            .collect()
    }

    /// Basis of `F_p ∩ D(F_{p+r})` inside `Tot_n`.
    fn b(&self, n: i64, p: i64, r: i64) -> Vec<Vector> {
        let images: Vec<Vector> = self.z(n + 1, p + r, r).iter().map(|y| self.apply(n + 1, y)).collect();
        self.f.span(&images, self.rank(n))
    }

    /// Complement and denominator bases of `E^r_p` in degree `n`.
    fn term(&self, n: i64, p: i64, r: i64) -> (Vec<Vector>, Vec<Vector>) {
        let num = self.z(n, p, r);
        let mut den = self.z(n, p - 1, r - 1);
        den.extend(self.b(n, p, r - 1));
        let den = self.f.span(&den, self.rank(n));
        let comp = self.f.extend(&den, &num);
        (comp, den)
    }
}

/// Pages `E^1 ..` of the index filtration, up to `max_page` or collapse.
pub fn spectral_sequence(t: &TwistedComplex, max_page: usize) -> Result<SpectralSequenceResult> {
    let CoefficientRing::PrimeField(prime) = t.ring() else {
        return Err(Error::UnsupportedRing(
            "spectral sequences are computed over prime fields only; use integral_subquotients over Z".into(),
        ));
    };
    if max_page == 0 {
        return Err(Error::InvalidRange("the first page is E^1".into()));
    }
    let f = PrimeField::new(prime);
    let (tot, layout) = t.totalize_with_layout()?;
    let degrees: Vec<i64> = layout.degrees().collect();
    let filt = Filtered {
        f,
        pieces: degrees.iter().map(|&n| (n, layout.piece_of_each(n))).collect(),
        d: degrees.iter().map(|&n| (n, f.dense(&tot.differential(n)))).collect(),
    };
    let indices = t.indices();
    let (Some(&lo), Some(&hi)) = (indices.first(), indices.last()) else {
        return Ok(SpectralSequenceResult {
            prime,
            pages: vec![Page { r: 1, dims: BTreeMap::new(), differentials: BTreeMap::new() }],
            e_infinity: BTreeMap::new(),
            limit: BTreeMap::new(),
            collapse_page: Some(1),
            audit_failure: None,
        });
    };
    let infinity = hi - lo + 2;
    let cells: Vec<(i64, i64)> = degrees.iter().flat_map(|&n| (lo..=hi).map(move |p| (p, n))).collect();

    let mut e_infinity = BTreeMap::new();
    for &(p, n) in &cells {
        let (comp, _) = filt.term(n, p, infinity);
        if !comp.is_empty() {
            e_infinity.insert((p, n - p), comp.len());
        }
    }
    let mut limit: BTreeMap<i64, usize> = BTreeMap::new();
    for (&(p, q), &d) in &e_infinity {
        *limit.entry(p + q).or_default() += d;
    }

    let mut audit_failure = None;
    let h = homology(&tot)?;
    for &n in &degrees {
        if limit.get(&n).copied().unwrap_or(0) != h.rank(n) {
            audit_failure = Some(format!("E^∞ in total degree {n} does not match H_{n}"));
            break;
        }
    }

    let mut pages: Vec<Page> = Vec::new();
    let mut collapse_page = None;
    for r in 1..=max_page {
        let ri = r as i64;
        let mut terms = BTreeMap::new();
        for &(p, n) in &cells {
            terms.insert((p, n), filt.term(n, p, ri));
        }
        let dims: BTreeMap<(i64, i64), usize> =
            terms.iter().filter(|(_, (c, _))| !c.is_empty()).map(|(&(p, n), (c, _))| ((p, n - p), c.len())).collect();
        let mut differentials = BTreeMap::new();
        for (&(p, n), (comp, _)) in &terms {
            let Some((tcomp, tden)) = terms.get(&(p - ri, n - 1)) else { continue };
            if comp.is_empty() || tcomp.is_empty() {
                continue;
            }
            let mut basis = tcomp.clone();
            basis.extend(tden.iter().cloned());
            let cols: Vec<Vector> = comp
                .iter()
                .map(|x| {
                    let y = filt.apply(n, x);
                    let c = filt.f.solve(&basis, &y).expect("D maps Z^r_p into Z^r_{p-r}");
                    c[..tcomp.len()].to_vec()
                })
                .collect();
            if cols.iter().any(|c| c.iter().any(|&v| v != 0)) {
                let rows: Vec<Vector> = (0..tcomp.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                differentials.insert((p, n - p), rows);
            }
        }
        if let (Some(prev), None) = (pages.last(), &audit_failure) {
            audit_failure = audit_page(&filt.f, prev, &dims);
        }
        if collapse_page.is_none() && dims == e_infinity {
            collapse_page = Some(r);
        }
        let done = collapse_page.is_some();
        pages.push(Page { r, dims, differentials });
        if done {
            break;
        }
    }
    Ok(SpectralSequenceResult { prime, pages, e_infinity, limit, collapse_page, audit_failure })
}

/// `dim E^{r+1}_{p,q} = dim E^r_{p,q} - rank(d^r out) - rank(d^r in)` everywhere.
fn audit_page(f: &PrimeField, prev: &Page, next: &BTreeMap<(i64, i64), usize>) -> Option<String> {
    let r = prev.r as i64;
    let rank_out = |p: i64, q: i64| prev.differentials.get(&(p, q)).map_or(0, |m| f.rank_of_rows(m));
    let mut keys: Vec<(i64, i64)> = prev.dims.keys().chain(next.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    for (p, q) in keys {
        let expected = prev.dim(p, q) as i64 - rank_out(p, q) as i64 - rank_out(p + r, q - r + 1) as i64;
        if next.get(&(p, q)).copied().unwrap_or(0) as i64 != expected {
            return Some(format!("E^{} at ({p},{q}) is not the homology of E^{}", prev.r + 1, prev.r));
        }
    }
    for ((p, q), m) in &prev.differentials {
        if let Some(next_m) = prev.differentials.get(&(p - r, q + r - 1)) {
            // d^r ∘ d^r must vanish
            let cols = m.first().map_or(0, Vec::len);
            let comp: Vec<Vector> =
                (0..cols).map(|j| f.apply(next_m, &m.iter().map(|row| row[j]).collect::<Vec<_>>())).collect();
            if comp.iter().flatten().any(|&v| v != 0) {
                return Some(format!("d^{} ∘ d^{} is nonzero at ({p},{q})", prev.r, prev.r));
            }
        }
    }
    None
}

/// The integral first page: homology of each piece, moved to total degree.
pub fn integral_subquotients(t: &TwistedComplex) -> Result<BTreeMap<i64, HomologySummary>> {
    t.pieces().iter().map(|(&i, c)| Ok((i, homology(c)?.shifted(i)))).collect()
}
