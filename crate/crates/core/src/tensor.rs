//! Fully symmetric order-3 tensors on `R^n`.
//!
//! A [`SymCubic`] stores only the `C(n+2, 3)` distinct components
//! `sigma_{ijk}` with `i <= j <= k`, so invariance under the six index
//! permutations holds by construction. All indices in the Rust API are
//! 0-based; the text format in [`SymCubic::to_text`] is 1-based.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Absolute gate on slice traces for "traceless" tensors.
pub const TOL_TRACE: f64 = 1e-10;
/// Tolerance for algebraic symmetry checks.
pub const TOL_SYM: f64 = 1e-10;

/// Number of distinct components of a symmetric cubic on `R^n`.
pub const fn distinct_len(n: usize) -> usize {
    n * (n + 1) * (n + 2) / 6
}

fn sort3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let (mut a, mut b, mut c) = (i, j, k);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    (a, b, c)
}

/// Position of the sorted triple `a <= b <= c` in lexicographic order.
fn slot(n: usize, a: usize, b: usize, c: usize) -> usize {
    let before_a: usize = (0..a).map(|p| (n - p) * (n - p + 1) / 2).sum();
    let before_b: usize = (a..b).map(|q| n - q).sum();
    before_a + before_b + (c - b)
}

/// Number of distinct orderings of the index triple.
pub fn multiplicity(i: usize, j: usize, k: usize) -> usize {
    if i == j && j == k {
        1
    } else if i == j || j == k || i == k {
        3
    } else {
        6
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymCubic {
    n: usize,
    entries: Vec<f64>,
}

/// The three scalar invariants entering the Simons formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    /// `|sigma|^2 = sum_{ijk} sigma_{ijk}^2`
    pub norm_sq: f64,
    /// `sum_{i,j} <sigma_i, sigma_j>^2`
    pub gram: f64,
    /// `sum_{i,j} |[sigma_i, sigma_j]|^2`
    pub comm: f64,
}

impl SymCubic {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::dim(format!("symmetric cubic needs n >= 2, got {n}")));
        }
        Ok(Self {
            n,
            entries: vec![0.0; distinct_len(n)],
        })
    }

    /// Builds a tensor from distinct components. Index triples may be given in
    /// any order; omitted components default to zero and a repeated triple
    /// overwrites the earlier value.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), f64)>,
    {
        let mut t = Self::zeros(n)?;
        for ((i, j, k), v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::Index { n, i, j, k });
            }
            t.set(i, j, k, v);
        }
        Ok(t)
    }

    /// Builds a tensor by evaluating `f` on every sorted triple `i <= j <= k`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    t.entries[slot(n, a, b, c)] = f(a, b, c);
                }
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let (a, b, c) = sort3(i, j, k);
        debug_assert!(c < self.n);
        self.entries[slot(self.n, a, b, c)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let (a, b, c) = sort3(i, j, k);
        assert!(c < self.n, "index out of range");
        self.entries[slot(self.n, a, b, c)] = v;
    }

    /// Distinct components in lexicographic order of `(i <= j <= k)`.
    pub fn distinct(&self) -> impl Iterator<Item = ((usize, usize, usize), f64)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |a| (a..n).flat_map(move |b| (b..n).map(move |c| (a, b, c))))
            .zip(self.entries.iter().copied())
    }

    /// Dense `n^3` copy, indexed `[i * n * n + j * n + k]`.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[(i * n + j) * n + k] = self.get(i, j, k);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// `|sigma|^2` with each distinct component weighted by its multiplicity.
    pub fn norm_sq(&self) -> f64 {
        self.distinct()
            .map(|((i, j, k), v)| multiplicity(i, j, k) as f64 * v * v)
            .sum()
    }

    /// Full contraction `sum_{ijk} sigma_{ijk} tau_{ijk}`.
    pub fn dot(&self, other: &SymCubic) -> f64 {
        assert_eq!(self.n, other.n);
        self.distinct()
            .zip(other.entries.iter())
            .map(|(((i, j, k), a), b)| multiplicity(i, j, k) as f64 * a * b)
            .sum()
    }

    pub fn scaled(&self, c: f64) -> SymCubic {
        SymCubic {
            n: self.n,
            entries: self.entries.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &SymCubic) -> SymCubic {
        assert_eq!(self.n, other.n);
        SymCubic {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `max |a_{ijk} - b_{ijk}|` over distinct components.
    pub fn max_abs_diff(&self, other: &SymCubic) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// The slice matrix `sigma_i = (sigma_{ijk})_{jk}`.
    pub fn slice(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |j, k| self.get(i, j, k))
    }

    pub fn trace_slice(&self, i: usize) -> f64 {
        (0..self.n).map(|k| self.get(i, k, k)).sum()
    }

    pub fn trace_vector(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.trace_slice(i)).collect()
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.check_traceless(tol).is_ok()
    }

    /// Fails with the first slice whose trace exceeds `tol` in absolute value.
    pub fn check_traceless(&self, tol: f64) -> Result<()> {
        for i in 0..self.n {
            let trace = self.trace_slice(i);
            if !(trace.abs() <= tol) {
                return Err(Error::Trace { slice: i, trace });
            }
        }
        Ok(())
    }

    /// Orthogonal projection onto traceless symmetric cubics:
    /// `sigma - sym(delta (x) a)` with `a = trace / (n + 2)`.
    pub fn traceless_part(&self) -> SymCubic {
        let n = self.n;
        let a: Vec<f64> = self
            .trace_vector()
            .into_iter()
            .map(|t| t / (n as f64 + 2.0))
            .collect();
        let mut out = self.clone();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mut corr = 0.0;
                    if i == j {
                        corr += a[k];
                    }
                    if i == k {
                        corr += a[j];
                    }
                    if j == k {
                        corr += a[i];
                    }
                    if corr != 0.0 {
                        let v = out.get(i, j, k) - corr;
                        out.set(i, j, k, v);
                    }
                }
            }
        }
        out
    }

    /// `sigma(x, x, x)`.
    pub fn cubic(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.distinct()
            .map(|((i, j, k), v)| multiplicity(i, j, k) as f64 * v * x[i] * x[j] * x[k])
            .sum()
    }

    /// `sigma(x, x, .)` as a vector.
    pub fn contract2(&self, x: &[f64]) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.get(i, j, k) * x[i] * x[j];
                }
            }
            s
        })
    }

    /// `sigma(x, ., .)` as a symmetric matrix.
    pub fn contract1(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in j..n {
                let s: f64 = (0..n).map(|i| self.get(i, j, k) * x[i]).sum();
                m[(j, k)] = s;
                m[(k, j)] = s;
            }
        }
        m
    }

    /// Change of basis: `sigma'_{abc} = sum q_{ai} q_{bj} q_{ck} sigma_{ijk}`,
    /// i.e. the components of `sigma` in the frame given by the rows of `q`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> SymCubic {
        let n = self.n;
        assert_eq!(q.nrows(), n);
        assert_eq!(q.ncols(), n);
        let dense = self.to_dense();
        // contract one index at a time: n^4 instead of n^6
        let mut t1 = vec![0.0; n * n * n];
        for c in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += q[(c, k)] * dense[(i * n + j) * n + k];
                    }
                    t1[(i * n + j) * n + c] = s;
                }
            }
        }
        let mut t2 = vec![0.0; n * n * n];
        for b in 0..n {
            for i in 0..n {
                for c in 0..n {
                    let mut s = 0.0;
                    for j in 0..n {
                        s += q[(b, j)] * t1[(i * n + j) * n + c];
                    }
                    t2[(i * n + b) * n + c] = s;
                }
            }
        }
        SymCubic::from_fn(n, |a, b, c| {
            (0..n).map(|i| q[(a, i)] * t2[(i * n + b) * n + c]).sum()
        })
        .expect("dimension already validated")
    }

    /// I.i.d. standard normal distinct components.
    pub fn random_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SymCubic> {
        let mut t = Self::zeros(n)?;
        for v in &mut t.entries {
            *v = rng.sample(StandardNormal);
        }
        Ok(t)
    }

    /// Gaussian draw projected onto the traceless subspace.
    pub fn random_traceless<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SymCubic> {
        Ok(Self::random_gaussian(n, rng)?.traceless_part())
    }

    /// `norm_sq`, `gram` and `comm` by direct index summation.
    pub fn invariants(&self) -> Invariants {
        let n = self.n;
        let slices: Vec<DMatrix<f64>> = (0..n).map(|i| self.slice(i)).collect();
        let mut gram = 0.0;
        let mut comm = 0.0;
        for i in 0..n {
            for j in 0..n {
                let inner: f64 = slices[i].component_mul(&slices[j]).sum();
                gram += inner * inner;
                let mut c2 = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        let mut c = 0.0;
                        for m in 0..n {
                            c += slices[i][(k, m)] * slices[j][(m, l)]
                                - slices[j][(k, m)] * slices[i][(m, l)];
                        }
                        c2 += c * c;
                    }
                }
                comm += c2;
            }
        }
        Invariants {
            norm_sq: self.norm_sq(),
            gram,
            comm,
        }
    }

    /// Text form: `n` on the first line, then `i j k value` per distinct
    /// component with 1-based indices and 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for ((i, j, k), v) in self.distinct() {
            writeln!(s, "{} {} {} {:.16e}", i + 1, j + 1, k + 1, v).unwrap();
        }
        s
    }

    /// Parses the text form. Blank lines and `#` comments are skipped;
    /// components that are not listed are zero.
    pub fn from_text(text: &str) -> Result<SymCubic> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first_no, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty tensor file".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line: first_no,
            message: format!("expected dimension, found `{first}`"),
        })?;
        let mut t = SymCubic::zeros(n)?;
        for (no, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(Error::Parse {
                    line: no,
                    message: format!("expected `i j k value`, found `{line}`"),
                });
            }
            let idx = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| Error::Parse {
                    line: no,
                    message: format!("bad index `{s}`"),
                })?;
                if v == 0 || v > n {
                    return Err(Error::Parse {
                        line: no,
                        message: format!("index {v} outside 1..={n}"),
                    });
                }
                Ok(v - 1)
            };
            let (i, j, k) = (idx(parts[0])?, idx(parts[1])?, idx(parts[2])?);
            let v: f64 = parts[3].parse().map_err(|_| Error::Parse {
                line: no,
                message: format!("bad value `{}`", parts[3]),
            })?;
            t.set(i, j, k, v);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn calabi3() -> SymCubic {
        let r = 3f64.sqrt();
        SymCubic::from_entries(
            3,
            [((0, 0, 0), 2.0 / r), ((0, 1, 1), -1.0 / r), ((0, 2, 2), -1.0 / r)],
        )
        .unwrap()
    }

    #[test]
    fn slot_enumerates_every_sorted_triple_once() {
        for n in 2..9 {
            let mut seen = vec![false; distinct_len(n)];
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        let s = slot(n, a, b, c);
                        assert!(!seen[s]);
                        seen[s] = true;
                    }
                }
            }
            assert!(seen.into_iter().all(|v| v));
        }
    }

    #[test]
    fn zero_tensor_has_zero_invariants() {
        let z = SymCubic::zeros(3).unwrap();
        let inv = z.invariants();
        assert_eq!((inv.norm_sq, inv.gram, inv.comm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn accessor_is_permutation_invariant() {
        let t = SymCubic::from_entries(2, [((0, 0, 0), 1.0)]).unwrap();
        assert_eq!(t.get(0, 0, 0), 1.0);
        assert_eq!(t.get(0, 0, 1), 0.0);
        let c = calabi3();
        for (i, j, k) in [(1, 1, 0), (1, 0, 1), (0, 1, 1)] {
            assert_eq!(c.get(i, j, k), -1.0 / 3f64.sqrt());
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(SymCubic::zeros(1), Err(Error::Dimension(_))));
        assert!(matches!(
            SymCubic::from_entries(3, [((0, 3, 1), 1.0)]),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn calabi3_invariants() {
        let inv = calabi3().invariants();
        assert!((inv.norm_sq - 10.0 / 3.0).abs() < 1e-14);
        assert!((inv.gram - 44.0 / 9.0).abs() < 1e-13);
        assert!((inv.comm - 76.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn traceless_projection_is_idempotent_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..7 {
            let g = SymCubic::random_gaussian(n, &mut rng).unwrap();
            let p = g.traceless_part();
            assert!(p.is_traceless(1e-12));
            assert!(p.traceless_part().max_abs_diff(&p) < 1e-14);
            // residual g - p is orthogonal to every traceless tensor
            let resid = g.add(&p.scaled(-1.0));
            let other = SymCubic::random_traceless(n, &mut rng).unwrap();
            assert!(resid.dot(&other).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_gate_reports_offending_slice() {
        let t = SymCubic::from_entries(3, [((1, 0, 0), 0.5)]).unwrap();
        match t.check_traceless(TOL_TRACE) {
            Err(Error::Trace { slice, trace }) => {
                assert_eq!(slice, 1);
                assert_eq!(trace, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cubic_matches_dense_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = SymCubic::random_gaussian(4, &mut rng).unwrap();
        let x = [0.3, -1.2, 0.7, 2.0];
        let d = t.to_dense();
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    s += d[(i * 4 + j) * 4 + k] * x[i] * x[j] * x[k];
                }
            }
        }
        assert!((t.cubic(&x) - s).abs() < 1e-12);
        let g = t.contract2(&x);
        assert!((g.dot(&DVector::from_column_slice(&x)) - s).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = SymCubic::random_gaussian(5, &mut rng).unwrap();
        let back = SymCubic::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!(SymCubic::from_text(""), Err(Error::Parse { .. })));
        assert!(matches!(
            SymCubic::from_text("3\n1 2 4 1.0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SymCubic::from_text("3\n1 2 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        let t = SymCubic::from_text("# comment\n2\n\n1 1 1 1e0 # trailing\n").unwrap();
        assert_eq!(t.get(0, 0, 0), 1.0);
    }
}
