//! Nonuniform B-spline spaces and curvature-driven knot placement.
//!
//! Basis indices are zero-based: a basis of order `m` over a partition with `N`
//! interior knots has functions `0..m + N`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{central_difference, Signal};

/// Knot set `c < x_1 < ... < x_N < d` of the interval `[c, d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    c: f64,
    d: f64,
    interior: Vec<f64>,
}

impl Partition {
    pub fn new(c: f64, d: f64, interior: Vec<f64>) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && c < d) {
            return Err(Error::Parameter(format!(
                "partition needs finite c < d, got [{c}, {d}]"
            )));
        }
        let mut prev = c;
        for (i, &x) in interior.iter().enumerate() {
            if !(x.is_finite() && x > prev) {
                return Err(Error::Parameter(format!(
                    "interior knot {i} ({x}) breaks strict ordering after {prev}"
                )));
            }
            prev = x;
        }
        if prev >= d {
            return Err(Error::Parameter(format!(
                "last interior knot {prev} must lie below d = {d}"
            )));
        }
        Ok(Partition { c, d, interior })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn interior(&self) -> &[f64] {
        &self.interior
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("partition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Partition = serde_json::from_str(text)
            .map_err(|e| Error::Parameter(format!("partition JSON: {e}")))?;
        Partition::new(raw.c, raw.d, raw.interior)
    }
}

/// Knot sequence `y_1..y_{2m+N}` with single interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedPartition {
    order: usize,
    knots: Vec<f64>,
    c: f64,
    d: f64,
}

impl ExtendedPartition {
    /// Builds from explicit boundary knots: `left` and `right` each hold `order` values.
    pub fn with_boundary(p: &Partition, order: usize, left: &[f64], right: &[f64]) -> Result<Self> {
        if order < 1 {
            return Err(Error::Parameter("spline order must be at least 1".into()));
        }
        if left.len() != order || right.len() != order {
            return Err(Error::Parameter(format!(
                "need {order} boundary knots on each side, got {} and {}",
                left.len(),
                right.len()
            )));
        }
        let ordered = |v: &[f64]| v.windows(2).all(|w| w[0] <= w[1]);
        if !ordered(left) || !ordered(right) || left[order - 1] > p.c || right[0] < p.d {
            return Err(Error::Parameter(
                "boundary knots must be nondecreasing with left <= c and right >= d".into(),
            ));
        }
        let mut knots = Vec::with_capacity(2 * order + p.len());
        knots.extend_from_slice(left);
        knots.extend_from_slice(&p.interior);
        knots.extend_from_slice(right);
        Ok(ExtendedPartition {
            order,
            knots,
            c: p.c,
            d: p.d,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Number of basis functions, `m + N`.
    pub fn dim(&self) -> usize {
        self.knots.len() - self.order
    }

    /// Index `j` of the knot interval holding `x`: `y_j <= x < y_{j+1}`, except
    /// that `x = d` belongs to the interval closed at `d`.
    fn interval(&self, x: f64) -> usize {
        let y = &self.knots;
        let lo = self.order - 1;
        let hi = y.len() - self.order;
        if x >= self.d {
            // last j with y_j < d <= y_{j+1}
            return (lo..hi).rev().find(|&j| y[j] < self.d).unwrap_or(lo);
        }
        // y[lo] <= c <= x < d <= y[hi]; binary search for the last y_j <= x
        let (mut a, mut b) = (lo, hi);
        while b - a > 1 {
            let mid = (a + b) / 2;
            if y[mid] <= x {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    }
}

/// Clamped extension: `order` coincident knots at each of `c` and `d`.
pub fn make_extended(p: &Partition, order: usize) -> Result<ExtendedPartition> {
    if order < 1 {
        return Err(Error::Parameter("spline order must be at least 1".into()));
    }
    ExtendedPartition::with_boundary(p, order, &vec![p.c; order], &vec![p.d; order])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BSplineBasis {
    extended: ExtendedPartition,
}

impl BSplineBasis {
    pub fn new(extended: ExtendedPartition) -> Self {
        BSplineBasis { extended }
    }

    /// Clamped basis of the given order over `p`.
    pub fn clamped(p: &Partition, order: usize) -> Result<Self> {
        Ok(BSplineBasis::new(make_extended(p, order)?))
    }

    pub fn extended(&self) -> &ExtendedPartition {
        &self.extended
    }

    pub fn order(&self) -> usize {
        self.extended.order
    }

    pub fn len(&self) -> usize {
        self.extended.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (c, d) = (self.extended.c, self.extended.d);
        if !(x >= c && x <= d) {
            return Err(Error::Domain { x, c, d });
        }
        Ok(())
    }

    /// `B_{m,j}(x)` by the Cox-de Boor recursion.
    pub fn eval(&self, j: usize, x: f64) -> Result<f64> {
        if j >= self.len() {
            return Err(Error::Index {
                index: j,
                len: self.len(),
            });
        }
        self.check_domain(x)?;
        let span = self.extended.interval(x);
        Ok(cox_de_boor(&self.extended.knots, self.order(), j, x, span))
    }

    /// Values of the `m` basis functions that can be nonzero at `x`, and the
    /// index of the first of them.
    pub fn nonzero(&self, x: f64) -> Result<(usize, Vec<f64>)> {
        self.check_domain(x)?;
        let span = self.extended.interval(x);
        Ok((
            span + 1 - self.order(),
            local_basis(&self.extended.knots, self.order(), span, x),
        ))
    }

    /// Evaluates `sum_j coef[j] B_{m,j}(x)`.
    pub fn combine(&self, coef: &[f64], x: f64) -> Result<f64> {
        if coef.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: coef.len(),
            });
        }
        let (first, values) = self.nonzero(x)?;
        Ok(values
            .iter()
            .enumerate()
            .map(|(k, v)| coef[first + k] * v)
            .sum())
    }
}

fn cox_de_boor(y: &[f64], order: usize, j: usize, x: f64, span: usize) -> f64 {
    if order == 1 {
        return if j == span { 1.0 } else { 0.0 };
    }
    let mut value = 0.0;
    let left_den = y[j + order - 1] - y[j];
    if left_den > 0.0 {
        value += (x - y[j]) / left_den * cox_de_boor(y, order - 1, j, x, span);
    }
    let right_den = y[j + order] - y[j + 1];
    if right_den > 0.0 {
        value += (y[j + order] - x) / right_den * cox_de_boor(y, order - 1, j + 1, x, span);
    }
    value
}

/// Triangular evaluation of `B_{m,span-m+1}..B_{m,span}` at `x`.
fn local_basis(y: &[f64], order: usize, span: usize, x: f64) -> Vec<f64> {
    let degree = order - 1;
    let mut n = vec![0.0; order];
    let mut left = vec![0.0; order];
    let mut right = vec![0.0; order];
    n[0] = 1.0;
    for j in 1..=degree {
        left[j] = x - y[span + 1 - j];
        right[j] = y[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

pub fn eval_bspline(basis: &BSplineBasis, j: usize, x: f64) -> Result<f64> {
    basis.eval(j, x)
}

/// Matrix with entry `(i, j) = B_{m,j}(grid[i])`.
pub fn design_matrix(basis: &BSplineBasis, grid: &[f64]) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(grid.len(), basis.len());
    for (i, &x) in grid.iter().enumerate() {
        let (first, values) = basis.nonzero(x)?;
        for (k, v) in values.into_iter().enumerate() {
            out[(i, first + k)] = v;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureMode {
    /// `f'' / (1 + f'^2)^{3/2}`
    #[default]
    Standard,
    /// `f'' / (1 - f'^2)^{3/2}`, undefined where `|f'| >= 1`.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvatureConfig {
    pub mode: CurvatureMode,
    /// Curvature-derivative magnitudes below `zero_tol * max|kappa'|` count as zero.
    pub zero_tol: f64,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        CurvatureConfig {
            mode: CurvatureMode::Standard,
            zero_tol: 1e-12,
        }
    }
}

impl CurvatureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol > 0.0 && self.zero_tol.is_finite()) {
            return Err(Error::Parameter(format!(
                "zero_tol must be positive, got {}",
                self.zero_tol
            )));
        }
        Ok(())
    }
}

/// Sampled curvature of `s`, derivatives by central differences.
pub fn curvature(s: &Signal, cfg: &CurvatureConfig) -> Result<Signal> {
    cfg.validate()?;
    if s.len() < 5 {
        return Err(Error::Size {
            needed: 5,
            found: s.len(),
        });
    }
    let d1 = central_difference(s)?;
    let d2 = central_difference(&d1)?;
    let values = d1
        .samples()
        .iter()
        .zip(d2.samples())
        .enumerate()
        .map(|(i, (&f1, &f2))| match cfg.mode {
            CurvatureMode::Standard => Ok(f2 / (1.0 + f1 * f1).powf(1.5)),
            CurvatureMode::PaperLiteral => {
                if f1.abs() >= 1.0 {
                    Err(Error::CurvatureDomain { index: i })
                } else {
                    Ok(f2 / (1.0 - f1 * f1).powf(1.5))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    s.with_samples(values)
}

/// Magnitude of `kappa'` reachable by rounding alone: the representation error
/// of the samples amplified by three divided differences.
fn roundoff_floor(s: &Signal) -> f64 {
    let amp = s.samples().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let dt = s.dt();
    64.0 * f64::EPSILON * amp / (dt * dt * dt)
}

/// Abscissae where the discrete derivative of the curvature changes sign,
/// strictly inside `(t0, t_end)`.
///
/// A sign change between adjacent samples is located by linear interpolation.
/// A run of near-zero values flanked by opposite signs yields its midpoint.
/// Values count as zero below `zero_tol * max|kappa'|` or below the rounding
/// floor of the three nested differences, whichever is larger.
pub fn critical_points(s: &Signal, cfg: &CurvatureConfig) -> Result<Vec<f64>> {
    let kappa = curvature(s, cfg)?;
    let dk = central_difference(&kappa)?;
    let v = dk.samples();
    let peak = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let thr = (cfg.zero_tol * peak).max(roundoff_floor(s));
    if peak <= thr {
        return Ok(Vec::new());
    }
    let sign = |x: f64| {
        if x.abs() <= thr {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let (c, d) = (s.t0(), s.end_time());
    let mut points = Vec::new();
    let mut prev: Option<usize> = None;
    for i in 0..v.len() {
        let si = sign(v[i]);
        if si == 0 {
            continue;
        }
        if let Some(p) = prev {
            if sign(v[p]) == -si {
                let t = if p + 1 == i {
                    s.time(p) + s.dt() * v[p] / (v[p] - v[i])
                } else {
                    0.5 * (s.time(p + 1) + s.time(i - 1))
                };
                if t > c && t < d && points.last().is_none_or(|&last| t > last) {
                    points.push(t);
                }
            }
        }
        prev = Some(i);
    }
    Ok(points)
}

/// Inserts midpoints into the longest gap (leftmost on ties) until `target`
/// interior knots exist.
pub fn subdivide(c: f64, d: f64, mut knots: Vec<f64>, target: usize) -> Result<Partition> {
    if knots.len() > target {
        return Err(Error::Capacity {
            critical_points: knots.len(),
            target,
        });
    }
    knots.reserve(target - knots.len());
    while knots.len() < target {
        let mut best = (0, f64::NEG_INFINITY);
        for g in 0..=knots.len() {
            let lo = if g == 0 { c } else { knots[g - 1] };
            let hi = if g == knots.len() { d } else { knots[g] };
            if hi - lo > best.1 {
                best = (g, hi - lo);
            }
        }
        let g = best.0;
        let lo = if g == 0 { c } else { knots[g - 1] };
        let hi = if g == knots.len() { d } else { knots[g] };
        knots.insert(g, 0.5 * (lo + hi));
    }
    Partition::new(c, d, knots)
}

/// Partition of the signal's time span seeded with the curvature critical
/// points, refined to exactly `target` interior knots.
pub fn curvature_knots(s: &Signal, target: usize, cfg: &CurvatureConfig) -> Result<Partition> {
    let points = critical_points(s, cfg)?;
    subdivide(s.t0(), s.end_time(), points, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform_basis(order: usize, knots: &[f64]) -> BSplineBasis {
        let n = knots.len();
        let p = Partition::new(
            knots[order - 1],
            knots[n - order],
            knots[order..n - order].to_vec(),
        )
        .unwrap();
        let ext = ExtendedPartition::with_boundary(
            &p,
            order,
            &knots[..order],
            &knots[knots.len() - order..],
        )
        .unwrap();
        BSplineBasis::new(ext)
    }

    #[test]
    fn extended_knots_are_clamped() {
        let p = Partition::new(0.0, 1.0, vec![]).unwrap();
        assert_eq!(make_extended(&p, 1).unwrap().knots(), &[0.0, 1.0]);

        let p = Partition::new(0.0, 3.0, vec![1.0, 2.0]).unwrap();
        let e = make_extended(&p, 4).unwrap();
        assert_eq!(
            e.knots(),
            &[0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0]
        );
        assert_eq!(e.dim(), 6);

        let p = Partition::new(0.0, 1.0, vec![0.3]).unwrap();
        assert_eq!(
            make_extended(&p, 2).unwrap().knots(),
            &[0.0, 0.0, 0.3, 1.0, 1.0]
        );
        assert!(matches!(make_extended(&p, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn partition_rejects_disorder() {
        assert!(Partition::new(0.0, 1.0, vec![0.5, 0.5]).is_err());
        assert!(Partition::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(Partition::new(1.0, 1.0, vec![]).is_err());
    }

    #[test]
    fn order_one_is_indicator() {
        let b = BSplineBasis::clamped(&Partition::new(0.0, 1.0, vec![]).unwrap(), 1).unwrap();
        assert_eq!(b.eval(0, 0.5).unwrap(), 1.0);
        assert_eq!(b.eval(0, 1.0).unwrap(), 1.0);
        assert!(matches!(b.eval(0, 1.5), Err(Error::Domain { .. })));
        assert!(matches!(b.eval(1, 0.5), Err(Error::Index { .. })));
    }

    #[test]
    fn linear_hat() {
        // knots 0,1,2,3: B_0 is the hat on [0, 2], domain [1, 2]
        let b = uniform_basis(2, &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(b.len(), 2);
        assert_abs_diff_eq!(b.eval(0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval(0, 1.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval(1, 1.5).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cubic_uniform_values() {
        // cardinal cubic B-spline takes 1/6, 2/3, 1/6 at its interior knots
        let b = uniform_basis(4, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(b.len(), 5);
        assert_abs_diff_eq!(b.eval(1, 3.0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval(0, 3.0).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval(2, 3.0).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.eval(2, 4.0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(b.eval(4, 3.5).unwrap(), 0.0);
    }

    #[test]
    fn design_matches_recursion() {
        let p = Partition::new(-1.0, 2.0, vec![-0.7, 0.1, 0.15, 1.2, 1.9]).unwrap();
        for order in 1..=5 {
            let b = BSplineBasis::clamped(&p, order).unwrap();
            let grid: Vec<f64> = (0..=300).map(|i| -1.0 + 3.0 * i as f64 / 300.0).collect();
            let dm = design_matrix(&b, &grid).unwrap();
            for (i, &x) in grid.iter().enumerate() {
                for j in 0..b.len() {
                    assert_abs_diff_eq!(dm[(i, j)], b.eval(j, x).unwrap(), epsilon = 1e-13);
                }
                assert_abs_diff_eq!(dm.row(i).sum(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn design_of_single_indicator() {
        let b = BSplineBasis::clamped(&Partition::new(0.0, 1.0, vec![]).unwrap(), 1).unwrap();
        let dm = design_matrix(&b, &[0.2, 0.7]).unwrap();
        assert_eq!(dm.ncols(), 1);
        assert_eq!(dm.column(0).as_slice(), &[1.0, 1.0]);
        assert!(design_matrix(&b, &[1.2]).is_err());
    }

    #[test]
    fn clamped_spline_interpolates_end_coefficients() {
        let p = Partition::new(0.0, 1.0, vec![0.2, 0.5, 0.6]).unwrap();
        let b = BSplineBasis::clamped(&p, 4).unwrap();
        let coef = [3.0, -1.0, 2.0, 0.5, 4.0, -2.0, 7.0];
        assert_abs_diff_eq!(b.combine(&coef, 0.0).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.combine(&coef, 1.0).unwrap(), 7.0, epsilon = 1e-14);
    }

    #[test]
    fn local_support_count() {
        let interior: Vec<f64> = (1..=10).map(|i| i as f64 / 11.0).collect();
        let b = BSplineBasis::clamped(&Partition::new(0.0, 1.0, interior).unwrap(), 4).unwrap();
        let grid: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let dm = design_matrix(&b, &grid).unwrap();
        for i in 0..grid.len() {
            let nnz = dm.row(i).iter().filter(|v| **v != 0.0).count();
            assert!(nnz <= 4, "row {i} has {nnz} nonzeros");
        }
    }

    fn line(n: usize, dt: f64, t0: f64, f: impl Fn(f64) -> f64) -> Signal {
        Signal::new((0..n).map(|i| f(t0 + i as f64 * dt)).collect(), dt, t0).unwrap()
    }

    #[test]
    fn curvature_of_line_and_constant() {
        let s = line(50, 0.1, 0.0, |t| 3.0 * t - 2.0);
        for v in curvature(&s, &CurvatureConfig::default())
            .unwrap()
            .samples()
        {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-10);
        }
        let flat = line(10, 1.0, 0.0, |_| 4.0);
        for mode in [CurvatureMode::Standard, CurvatureMode::PaperLiteral] {
            let cfg = CurvatureConfig {
                mode,
                ..Default::default()
            };
            assert!(curvature(&flat, &cfg)
                .unwrap()
                .samples()
                .iter()
                .all(|&v| v == 0.0));
        }
    }

    #[test]
    fn curvature_of_parabola() {
        let s = line(201, 0.01, -1.0, |t| 0.5 * t * t);
        let k = curvature(&s, &CurvatureConfig::default()).unwrap();
        // the two-step central difference is exact on quadratics, except near the ends
        let worst = (2..199)
            .map(|i| {
                let t = s.time(i);
                (k.samples()[i] - (1.0 + t * t).powf(-1.5)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "worst {worst}");
    }

    #[test]
    fn literal_curvature_domain_error() {
        let s = line(20, 0.1, 0.0, |t| t * t);
        let cfg = CurvatureConfig {
            mode: CurvatureMode::PaperLiteral,
            ..Default::default()
        };
        // f' = 2t crosses 1 at t = 0.5, sample 5; the forward difference there is 1.1
        match curvature(&s, &cfg) {
            Err(Error::CurvatureDomain { index }) => assert_eq!(index, 5),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(curvature(&line(4, 1.0, 0.0, |t| t), &cfg).is_err());
    }

    #[test]
    fn parabola_has_one_knot_at_vertex() {
        let s = line(201, 0.01, -1.0, |t| 0.5 * t * t);
        let p = curvature_knots(&s, 1, &CurvatureConfig::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.interior()[0].abs() < 0.01, "{:?}", p.interior());
    }

    #[test]
    fn straight_line_bisects_uniformly() {
        let s = line(41, 0.025, 0.0, |t| 2.0 * t + 1.0);
        assert!(critical_points(&s, &CurvatureConfig::default())
            .unwrap()
            .is_empty());
        let p = curvature_knots(&s, 3, &CurvatureConfig::default()).unwrap();
        assert_eq!(p.interior(), &[0.25, 0.5, 0.75]);
    }

    #[test]
    fn target_equal_to_count_keeps_critical_points() {
        let s = line(400, 0.05, 0.0, |t| (1.3 * t).sin() + 0.3 * (0.4 * t).cos());
        let cfg = CurvatureConfig::default();
        let pts = critical_points(&s, &cfg).unwrap();
        assert!(pts.len() > 3);
        let p = curvature_knots(&s, pts.len(), &cfg).unwrap();
        assert_eq!(p.interior(), pts.as_slice());
        match curvature_knots(&s, pts.len() - 1, &cfg) {
            Err(Error::Capacity {
                critical_points,
                target,
            }) => {
                assert_eq!(critical_points, pts.len());
                assert_eq!(target, pts.len() - 1);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn partition_json_round_trip() {
        let p = Partition::new(0.0, 2.0, vec![0.5, 1.25]).unwrap();
        assert_eq!(Partition::from_json(&p.to_json()).unwrap(), p);
        assert!(Partition::from_json(r#"{"c":0,"d":1,"interior":[0.7,0.2]}"#).is_err());
    }
}
