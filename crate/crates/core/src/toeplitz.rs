//! Structured linear algebra for the all-at-once solvers.
//!
//! * [`sine_spectrum`] diagonalizes tridiagonal Toeplitz matrices with the
//!   orthonormal sine transform `Q_ij = √(2/M) sin(ijπ/M)`.
//! * [`toeplitz_matvec`] multiplies by a (rectangular) Toeplitz matrix through
//!   circulant embedding.
//! * [`LowerToeplitzPlan`] solves lower-triangular Toeplitz systems by
//!   recursive halving; the off-diagonal blocks are applied with FFT products
//!   whose spectra are precomputed once per block shape.
//! * [`RampedBorderedToeplitz`] does the same for the one-parameter family
//!   of bordered systems used by the fast solvers.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, domain, Error, Result};

/// Sizes at or below this are solved by forward substitution.
pub const BASE_CASE: usize = 32;

/// Below this many unknowns the sine transform is a dense multiply.
pub const DIRECT_SINE_LIMIT: usize = 64;

/// Tridiagonal Toeplitz matrix of order `size` with `sub` below and `sup`
/// above the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriDiagToeplitz {
    pub diag: f64,
    pub sub: f64,
    pub sup: f64,
    pub size: usize,
}

impl TriDiagToeplitz {
    pub fn new(diag: f64, sub: f64, sup: f64, size: usize) -> Result<Self> {
        if size == 0 {
            return domain("tridiagonal Toeplitz matrix needs size >= 1");
        }
        Ok(Self { diag, sub, sup, size })
    }

    /// The compact averaging matrix `tridiag(1/12, 10/12, 1/12)` of order `M - 1`.
    pub fn averaging(cells: usize) -> Result<Self> {
        Self::new(10.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, cells.saturating_sub(1))
    }

    /// The negated second difference `tridiag(-1, 2, -1)` of order `M - 1`.
    pub fn stiffness(cells: usize) -> Result<Self> {
        Self::new(2.0, -1.0, -1.0, cells.saturating_sub(1))
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.size, x.len())?;
        let n = self.size;
        Ok((0..n)
            .map(|i| {
                let mut y = self.diag * x[i];
                if i > 0 {
                    y += self.sub * x[i - 1];
                }
                if i + 1 < n {
                    y += self.sup * x[i + 1];
                }
                y
            })
            .collect())
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.size;
        Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                self.diag
            } else if i == j + 1 {
                self.sub
            } else if j == i + 1 {
                self.sup
            } else {
                0.0
            }
        })
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        self.diag.abs() + if self.size > 1 { self.sub.abs() + self.sup.abs() } else { 0.0 }
    }
}

/// Orthonormal DST-I of length `M - 1`: `(Qv)_i = √(2/M) Σ_j sin(ijπ/M) v_j`.
///
/// `Q` is symmetric and its own inverse.
#[derive(Clone)]
pub struct SineTransform {
    cells: usize,
    dense: Option<Vec<f64>>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for SineTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SineTransform")
            .field("cells", &self.cells)
            .field("direct", &self.dense.is_some())
            .finish()
    }
}

impl SineTransform {
    /// Transform for a mesh with `cells = M >= 2`.
    pub fn new(cells: usize) -> Result<Self> {
        Self::with_threshold(cells, DIRECT_SINE_LIMIT)
    }

    /// Uses the dense path when `M - 1 < direct_limit`.
    pub fn with_threshold(cells: usize, direct_limit: usize) -> Result<Self> {
        if cells < 2 {
            return domain(format!("sine transform needs M >= 2, got {cells}"));
        }
        let n = cells - 1;
        if n < direct_limit {
            let scale = (2.0 / cells as f64).sqrt();
            let mut table = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    // reduce (i+1)(j+1) mod 2M before taking the sine
                    let k = ((i + 1) * (j + 1)) % (2 * cells);
                    table[i * n + j] = scale * (k as f64 * PI / cells as f64).sin();
                }
            }
            Ok(Self { cells, dense: Some(table), fft: None })
        } else {
            let fft = FftPlanner::new().plan_fft_forward(2 * cells);
            Ok(Self { cells, dense: None, fft: Some(fft) })
        }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Number of interior unknowns `M - 1`.
    pub fn len(&self) -> usize {
        self.cells - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = v.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, v: &mut [f64]) -> Result<()> {
        check_len(self.len(), v.len())?;
        if let Some(table) = &self.dense {
            let n = self.len();
            let input = v.to_vec();
            for (i, out) in v.iter_mut().enumerate() {
                *out = table[i * n..(i + 1) * n]
                    .iter()
                    .zip(&input)
                    .map(|(q, x)| q * x)
                    .sum();
            }
        } else if let Some(fft) = &self.fft {
            let m = self.cells;
            let mut buf = vec![Complex::new(0.0, 0.0); 2 * m];
            for (j, &x) in v.iter().enumerate() {
                buf[j + 1] = Complex::new(x, 0.0);
                buf[2 * m - 1 - j] = Complex::new(-x, 0.0);
            }
            fft.process(&mut buf);
            let scale = -0.5 * (2.0 / m as f64).sqrt();
            for (k, out) in v.iter_mut().enumerate() {
                *out = scale * buf[k + 1].im;
            }
        }
        Ok(())
    }
}

/// Applies the orthonormal sine transform of size `v.len() = M - 1`.
pub fn apply_sine_transform(v: &[f64]) -> Result<Vec<f64>> {
    SineTransform::new(v.len() + 1)?.apply(v)
}

/// Eigen-decomposition of a [`TriDiagToeplitz`] matrix.
#[derive(Debug, Clone)]
pub struct SineSpectrum {
    matrix: TriDiagToeplitz,
    eigenvalues: Vec<f64>,
    /// Geometric scaling `√(sub/sup)` of eigenvector components (1 when symmetric).
    ratio: f64,
    transform: SineTransform,
}

/// `λ_i = b + 2 sgn(a) √(ac) cos(iπ/n)` for `i = 1..n-1`, with sine eigenvectors.
pub fn sine_spectrum(t: &TriDiagToeplitz) -> Result<SineSpectrum> {
    let (a, c) = (t.sub, t.sup);
    let symmetric = a == c;
    if !symmetric && a * c <= 0.0 {
        return Err(Error::Domain(format!(
            "tridiagonal Toeplitz with sub {a} and super {c} has a complex spectrum"
        )));
    }
    let n = t.size + 1;
    let coupling = if symmetric { a } else { a.signum() * (a * c).sqrt() };
    let eigenvalues = (1..n)
        .map(|i| t.diag + 2.0 * coupling * (i as f64 * PI / n as f64).cos())
        .collect();
    let ratio = if symmetric { 1.0 } else { (a / c).sqrt() };
    Ok(SineSpectrum {
        matrix: *t,
        eigenvalues,
        ratio,
        transform: SineTransform::new(n)?,
    })
}

impl SineSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn transform(&self) -> &SineTransform {
        &self.transform
    }

    pub fn matrix(&self) -> &TriDiagToeplitz {
        &self.matrix
    }

    pub fn is_symmetric(&self) -> bool {
        self.ratio == 1.0
    }

    /// Computes `T v` as `D Q Λ Q D⁻¹ v` with `D = diag(ratio^k)`.
    pub fn apply_matrix(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.matrix.size, v.len())?;
        let mut w: Vec<f64> = v
            .iter()
            .enumerate()
            .map(|(k, x)| x / self.ratio.powi(k as i32 + 1))
            .collect();
        self.transform.apply_in_place(&mut w)?;
        for (x, l) in w.iter_mut().zip(&self.eigenvalues) {
            *x *= l;
        }
        self.transform.apply_in_place(&mut w)?;
        for (k, x) in w.iter_mut().enumerate() {
            *x *= self.ratio.powi(k as i32 + 1);
        }
        Ok(w)
    }
}

/// Smallest `2^a 3^b 5^c 7^d` that is `>= n`.
pub fn fast_transform_len(n: usize) -> usize {
    let mut best = n.next_power_of_two().max(1);
    let mut p7 = 1usize;
    while p7 < best {
        let mut p5 = p7;
        while p5 < best {
            let mut p3 = p5;
            while p3 < best {
                let mut v = p3;
                while v < n {
                    v *= 2;
                }
                best = best.min(v);
                p3 *= 3;
            }
            p5 *= 5;
        }
        p7 *= 7;
    }
    best
}

/// Circulant embedding of an `rows × cols` Toeplitz block, ready to multiply.
struct EmbeddedToeplitz {
    rows: usize,
    cols: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl EmbeddedToeplitz {
    fn new(planner: &mut FftPlanner<f64>, first_col: &[f64], first_row: &[f64]) -> Self {
        let rows = first_col.len();
        let cols = first_row.len();
        let len = fast_transform_len(rows + cols - 1);
        let mut spectrum = vec![Complex::new(0.0, 0.0); len];
        for (k, &c) in first_col.iter().enumerate() {
            spectrum[k] = Complex::new(c, 0.0);
        }
        for (j, &r) in first_row.iter().enumerate().skip(1) {
            spectrum[len - j] = Complex::new(r, 0.0);
        }
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        forward.process(&mut spectrum);
        let scale = 1.0 / len as f64;
        for s in &mut spectrum {
            *s *= scale;
        }
        Self { rows, cols, spectrum, forward, inverse }
    }

    fn len(&self) -> usize {
        self.spectrum.len()
    }

    /// `out -= (T + w R) x` for a block `R` of the same shape.
    fn subtract_combined(&self, ramp: &Self, w: f64, x: &[f64], out: &mut [f64], buf: &mut Vec<Complex<f64>>) {
        debug_assert_eq!(self.len(), ramp.len());
        buf.clear();
        buf.extend(x.iter().map(|&v| Complex::new(v, 0.0)));
        buf.resize(self.len(), Complex::new(0.0, 0.0));
        self.forward.process(buf);
        for ((b, s), r) in buf.iter_mut().zip(&self.spectrum).zip(&ramp.spectrum) {
            *b *= s + r * w;
        }
        self.inverse.process(buf);
        for (o, b) in out.iter_mut().zip(buf.iter()) {
            *o -= b.re;
        }
    }

    /// `out[k] -= (T x)[k]` when `subtract`, otherwise `out[k] = (T x)[k]`.
    fn apply(&self, x: &[f64], out: &mut [f64], buf: &mut Vec<Complex<f64>>, subtract: bool) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        buf.clear();
        buf.extend(x.iter().map(|&v| Complex::new(v, 0.0)));
        buf.resize(self.len(), Complex::new(0.0, 0.0));
        self.forward.process(buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(buf);
        if subtract {
            for (o, b) in out.iter_mut().zip(buf.iter()) {
                *o -= b.re;
            }
        } else {
            for (o, b) in out.iter_mut().zip(buf.iter()) {
                *o = b.re;
            }
        }
    }
}

/// `y = T x` for the Toeplitz matrix with the given first column and row.
///
/// The matrix is `first_col.len() × first_row.len()`.
pub fn toeplitz_matvec(first_col: &[f64], first_row: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    if first_col.is_empty() || first_row.is_empty() {
        return domain("Toeplitz generator must be nonempty");
    }
    if first_col[0] != first_row[0] {
        return domain(format!(
            "Toeplitz corner mismatch: column starts with {}, row with {}",
            first_col[0], first_row[0]
        ));
    }
    check_len(first_row.len(), x.len())?;
    let mut planner = FftPlanner::new();
    let embedded = EmbeddedToeplitz::new(&mut planner, first_col, first_row);
    let mut out = vec![0.0; first_col.len()];
    let mut buf = Vec::new();
    embedded.apply(x, &mut out, &mut buf, false);
    Ok(out)
}

/// Lower-triangular matrix handed to [`forward_substitution`].
#[derive(Debug, Clone, Copy)]
pub enum LowerTriangular<'a> {
    /// Dense matrix; entries above the diagonal are ignored.
    Dense(&'a Array2<f64>),
    /// Toeplitz generator: entry `(i, j)` is `d[i - j]`.
    Toeplitz(&'a [f64]),
}

/// Row-by-row triangular solve in `O(N²)`.
pub fn forward_substitution(l: LowerTriangular<'_>, g: &[f64]) -> Result<Vec<f64>> {
    let mut x = g.to_vec();
    match l {
        LowerTriangular::Dense(m) => {
            if m.nrows() != g.len() || m.ncols() != g.len() {
                return Err(Error::Dimension { expected: g.len(), found: m.nrows() });
            }
            for i in 0..x.len() {
                let pivot = m[[i, i]];
                if pivot == 0.0 {
                    return Err(Error::Singular(format!("zero diagonal at row {i}")));
                }
                let s: f64 = (0..i).map(|j| m[[i, j]] * x[j]).sum();
                x[i] = (x[i] - s) / pivot;
            }
        }
        LowerTriangular::Toeplitz(d) => {
            check_len(g.len(), d.len())?;
            toeplitz_forward(d, d.first().copied().unwrap_or(0.0), &mut x)?;
        }
    }
    Ok(x)
}

fn toeplitz_forward(d: &[f64], diag: f64, x: &mut [f64]) -> Result<()> {
    if diag == 0.0 {
        return Err(Error::Singular("zero diagonal in triangular Toeplitz system".into()));
    }
    for i in 0..x.len() {
        let mut s = x[i];
        for j in 0..i {
            s -= d[i - j] * x[j];
        }
        x[i] = s / diag;
    }
    Ok(())
}

/// Reusable divide-and-conquer solver for `T x = g`, `T_ij = d[i - j]`.
///
/// Each split of a size-`n` system into `⌈n/2⌉ + ⌊n/2⌋` leaves an
/// off-diagonal Toeplitz block that uses `d[1..]` only, so one plan serves
/// every diagonal value passed to [`LowerToeplitzPlan::solve_with_diagonal`].
pub struct LowerToeplitzPlan {
    generator: Vec<f64>,
    blocks: HashMap<(usize, usize), EmbeddedToeplitz>,
    max_len: usize,
}

impl std::fmt::Debug for LowerToeplitzPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LowerToeplitzPlan")
            .field("size", &self.generator.len())
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

fn split(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n / 2)
}

impl LowerToeplitzPlan {
    pub fn new(generator: &[f64]) -> Self {
        let mut planner = FftPlanner::new();
        let mut blocks = HashMap::new();
        let mut pending = vec![generator.len()];
        while let Some(n) = pending.pop() {
            if n <= BASE_CASE {
                continue;
            }
            let (n1, n2) = split(n);
            if let std::collections::hash_map::Entry::Vacant(e) = blocks.entry((n1, n2)) {
                // C_ij = d[n1 + i - j], 0 <= i < n2, 0 <= j < n1
                let col = &generator[n1..n1 + n2];
                let row: Vec<f64> = (0..n1).map(|j| generator[n1 - j]).collect();
                e.insert(EmbeddedToeplitz::new(&mut planner, col, &row));
                pending.push(n1);
                pending.push(n2);
            }
        }
        let max_len = blocks.values().map(EmbeddedToeplitz::len).max().unwrap_or(0);
        Self { generator: generator.to_vec(), blocks, max_len }
    }

    pub fn size(&self) -> usize {
        self.generator.len()
    }

    pub fn solve(&self, g: &[f64]) -> Result<Vec<f64>> {
        let mut x = g.to_vec();
        self.solve_with_diagonal(self.generator[0], &mut x)?;
        Ok(x)
    }

    /// Solves in place with `d[0]` replaced by `diag`.
    pub fn solve_with_diagonal(&self, diag: f64, x: &mut [f64]) -> Result<()> {
        check_len(self.size(), x.len())?;
        if diag == 0.0 || !diag.is_finite() {
            return Err(Error::Singular(format!("triangular Toeplitz diagonal is {diag}")));
        }
        let mut buf = Vec::with_capacity(self.max_len);
        self.recurse(diag, x, &mut buf)
    }

    fn recurse(&self, diag: f64, x: &mut [f64], buf: &mut Vec<Complex<f64>>) -> Result<()> {
        let n = x.len();
        if n <= BASE_CASE {
            return toeplitz_forward(&self.generator, diag, x);
        }
        let (n1, n2) = split(n);
        let (head, tail) = x.split_at_mut(n1);
        self.recurse(diag, head, buf)?;
        self.blocks[&(n1, n2)].apply(head, tail, buf, true);
        self.recurse(diag, tail, buf)
    }
}

/// Lower-triangular Toeplitz solver for the family of generators
/// `d_m(s) = base_m + s (m + 1)`, one plan for every `s`.
///
/// Both the base and the ramp spectra of each split block are cached, so a
/// solve for a new `s` costs the same as a plain Toeplitz solve.
pub struct RampedToeplitzPlan {
    base: Vec<f64>,
    blocks: HashMap<(usize, usize), (EmbeddedToeplitz, EmbeddedToeplitz)>,
    max_len: usize,
}

impl std::fmt::Debug for RampedToeplitzPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RampedToeplitzPlan")
            .field("size", &self.base.len())
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

fn ramp(m: usize) -> f64 {
    (m + 1) as f64
}

impl RampedToeplitzPlan {
    pub fn new(base: &[f64]) -> Self {
        let mut planner = FftPlanner::new();
        let mut blocks = HashMap::new();
        let mut pending = vec![base.len()];
        while let Some(n) = pending.pop() {
            if n <= BASE_CASE {
                continue;
            }
            let (n1, n2) = split(n);
            if let std::collections::hash_map::Entry::Vacant(e) = blocks.entry((n1, n2)) {
                let col = &base[n1..n1 + n2];
                let row: Vec<f64> = (0..n1).map(|j| base[n1 - j]).collect();
                let ramp_col: Vec<f64> = (n1..n1 + n2).map(ramp).collect();
                let ramp_row: Vec<f64> = (0..n1).map(|j| ramp(n1 - j)).collect();
                e.insert((
                    EmbeddedToeplitz::new(&mut planner, col, &row),
                    EmbeddedToeplitz::new(&mut planner, &ramp_col, &ramp_row),
                ));
                pending.push(n1);
                pending.push(n2);
            }
        }
        let max_len = blocks.values().map(|(b, _)| b.len()).max().unwrap_or(0);
        Self { base: base.to_vec(), blocks, max_len }
    }

    pub fn size(&self) -> usize {
        self.base.len()
    }

    /// Solves `T(s) x = g` in place, `T(s)_ij = d_{i-j}(s)`.
    pub fn solve(&self, s: f64, x: &mut [f64]) -> Result<()> {
        check_len(self.size(), x.len())?;
        let leaf: Vec<f64> = (0..self.size().min(BASE_CASE))
            .map(|m| self.base[m] + s * ramp(m))
            .collect();
        if leaf.is_empty() {
            return Ok(());
        }
        if leaf[0] == 0.0 || !leaf[0].is_finite() {
            return Err(Error::Singular(format!("triangular Toeplitz diagonal is {}", leaf[0])));
        }
        let mut buf = Vec::with_capacity(self.max_len);
        self.recurse(s, &leaf, x, &mut buf)
    }

    fn recurse(&self, s: f64, leaf: &[f64], x: &mut [f64], buf: &mut Vec<Complex<f64>>) -> Result<()> {
        let n = x.len();
        if n <= BASE_CASE {
            return toeplitz_forward(leaf, leaf[0], x);
        }
        let (n1, n2) = split(n);
        let (head, tail) = x.split_at_mut(n1);
        self.recurse(s, leaf, head, buf)?;
        let (base, ramp) = &self.blocks[&(n1, n2)];
        base.subtract_combined(ramp, s, head, tail, buf);
        self.recurse(s, leaf, tail, buf)
    }
}

/// Bordered system `B + s R`: `B` has first column `lead` and Toeplitz part
/// `generator` as in [`BorderedLowerToeplitz`], and `R_ij = i - j + 1` on and
/// below the diagonal.
#[derive(Debug)]
pub struct RampedBorderedToeplitz {
    lead: Vec<f64>,
    plan: Option<RampedToeplitzPlan>,
}

impl RampedBorderedToeplitz {
    /// `lead` and `generator` both have length `N`; `generator[N-1]` is unused.
    pub fn new(lead: Vec<f64>, generator: &[f64]) -> Result<Self> {
        check_len(lead.len(), generator.len())?;
        if lead.is_empty() {
            return domain("bordered Toeplitz system needs N >= 1");
        }
        let n = lead.len();
        let plan = (n > 1).then(|| RampedToeplitzPlan::new(&generator[..n - 1]));
        Ok(Self { lead, plan })
    }

    pub fn size(&self) -> usize {
        self.lead.len()
    }

    /// Solves `(B + s R) x = g` in place.
    pub fn solve(&self, s: f64, g: &mut [f64]) -> Result<()> {
        check_len(self.size(), g.len())?;
        let c0 = self.lead[0] + s;
        if c0 == 0.0 || !c0.is_finite() {
            return Err(Error::Singular(format!("bordered system leading pivot is {c0}")));
        }
        let e0 = g[0] / c0;
        g[0] = e0;
        if let Some(plan) = &self.plan {
            for (m, (gm, cm)) in g[1..].iter_mut().zip(&self.lead[1..]).enumerate() {
                *gm -= (cm + s * ramp(m + 1)) * e0;
            }
            plan.solve(s, &mut g[1..])?;
        }
        Ok(())
    }
}

/// Solves the `N × N` lower-triangular Toeplitz system with first column `d`.
pub fn solve_lower_tri_toeplitz(d: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    check_len(d.len(), g.len())?;
    if d.is_empty() {
        return Ok(Vec::new());
    }
    if d[0] == 0.0 {
        return Err(Error::Singular("triangular Toeplitz diagonal is zero".into()));
    }
    LowerToeplitzPlan::new(d).solve(g)
}

/// Lower-triangular system whose first column `lead` differs from the
/// Toeplitz part generated by `generator`:
///
/// ```text
/// [ c0                ]
/// [ c1  d0            ]
/// [ c2  d1  d0        ]
/// [ ..  ..  ..  ..    ]
/// ```
///
/// The first unknown is eliminated directly and the remaining `N - 1`
/// unknowns form a plain Toeplitz system.
#[derive(Debug)]
pub struct BorderedLowerToeplitz {
    lead: Vec<f64>,
    plan: Option<LowerToeplitzPlan>,
}

impl BorderedLowerToeplitz {
    /// `lead` and `generator` both have length `N`; `generator[N-1]` is unused.
    pub fn new(lead: Vec<f64>, generator: &[f64]) -> Result<Self> {
        check_len(lead.len(), generator.len())?;
        if lead.is_empty() {
            return domain("bordered Toeplitz system needs N >= 1");
        }
        let n = lead.len();
        let plan = (n > 1).then(|| LowerToeplitzPlan::new(&generator[..n - 1]));
        Ok(Self { lead, plan })
    }

    pub fn size(&self) -> usize {
        self.lead.len()
    }

    /// Solves `(T + shift I) x = g` in place.
    pub fn solve_shifted(&self, shift: f64, g: &mut [f64]) -> Result<()> {
        check_len(self.size(), g.len())?;
        let c0 = self.lead[0] + shift;
        if c0 == 0.0 || !c0.is_finite() {
            return Err(Error::Singular(format!("bordered system leading pivot is {c0}")));
        }
        let e0 = g[0] / c0;
        g[0] = e0;
        if let Some(plan) = &self.plan {
            for (gm, cm) in g[1..].iter_mut().zip(&self.lead[1..]) {
                *gm -= cm * e0;
            }
            plan.solve_with_diagonal(plan.generator[0] + shift, &mut g[1..])?;
        }
        Ok(())
    }
}
