use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::linear::{eigenvalues_4x4, linearize, Complex};
use super::{saiga_rhs, DynamicsParams, DynamicsState};
use crate::error::Result;
use crate::games::{is_symmetric, CoordinationLabels, NormalFormGame, SymmetricLabels};

/// Real parts within this distance of zero count as marginal.
const MARGINAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumKind {
    BoundaryType1,
    BoundaryType2,
    InteriorLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
    Degenerate,
}

/// A sub-interval of [0, 1] with optionally open ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const UNIT: Interval = Interval {
        lo: 0.0,
        hi: 1.0,
        lo_open: false,
        hi_open: false,
    };

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n` evenly spaced points, nudged inside open ends.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let shrink = 1e-9 * (self.hi - self.lo).max(1e-12);
        let lo = if self.lo_open { self.lo + shrink } else { self.lo };
        let hi = if self.hi_open { self.hi - shrink } else { self.hi };
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    }

    /// `{w in [0, 1] : slope * w + offset < 0}`, or `None` when empty.
    fn negative_part(slope: f64, offset: f64) -> Option<Interval> {
        if slope == 0.0 {
            return (offset < 0.0).then_some(Interval::UNIT);
        }
        let root = -offset / slope;
        if slope > 0.0 {
            // w < root
            if root <= 0.0 {
                return None;
            }
            Some(Interval {
                lo: 0.0,
                hi: root.min(1.0),
                lo_open: false,
                hi_open: root <= 1.0,
            })
        } else {
            if root >= 1.0 {
                return None;
            }
            Some(Interval {
                lo: root.max(0.0),
                hi: 1.0,
                lo_open: root >= 0.0,
                hi_open: false,
            })
        }
    }

    /// `{w in [0, 1] : slope * w + offset in [0, 1]}`, or `None` when empty.
    fn preimage_of_unit(slope: f64, offset: f64) -> Option<Interval> {
        if slope == 0.0 {
            return (0.0..=1.0).contains(&offset).then_some(Interval::UNIT);
        }
        let a = (0.0 - offset) / slope;
        let b = (1.0 - offset) / slope;
        let lo = a.min(b).max(0.0);
        let hi = a.max(b).min(1.0);
        (lo <= hi).then_some(Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        })
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// A continuum of equilibria described by its parameter ranges.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum EquilibriumFamily {
    /// Fixed policies `p`, attitudes ranging independently over `w1` and `w2`.
    Boundary { p: [f64; 2], w1: Interval, w2: Interval },
    /// `p1 = p2 = slope * w + intercept` with `w1 = w2 = w` ranging over `w`.
    Line { slope: f64, intercept: f64, w: Interval },
}

/// One equilibrium (or a family of them) of the dynamics.
///
/// `stable` is the verdict used downstream: the sign conditions for boundary
/// points and the eigenvalues for interior ones. `analytic_verdict` is what the
/// closed-form analysis predicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub point: DynamicsState,
    pub kind: EquilibriumKind,
    pub stable: Stability,
    pub analytic_verdict: Stability,
    #[serde(serialize_with = "complex_list")]
    pub eigenvalues: Vec<Complex>,
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<EquilibriumFamily>,
}

fn complex_list<S: Serializer>(values: &[Complex], ser: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(values.len()))?;
    for z in values {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Stability implied by a set of eigenvalues.
pub fn eigen_stability(eigenvalues: &[Complex]) -> Stability {
    if eigenvalues.iter().any(|z| z.re > MARGINAL_TOL) {
        Stability::Unstable
    } else if eigenvalues.iter().any(|z| z.re.abs() <= MARGINAL_TOL) {
        Stability::Marginal
    } else {
        Stability::Stable
    }
}

fn eigen_at(params: &DynamicsParams, point: &DynamicsState) -> Result<Vec<Complex>> {
    eigenvalues_4x4(&linearize(params, point))
}

fn boundary_family(
    params: &DynamicsParams,
    p: [f64; 2],
    w1: Interval,
    w2: Interval,
    condition: String,
) -> Result<EquilibriumReport> {
    let point = DynamicsState::new(p[0], p[1], w1.midpoint(), w2.midpoint());
    Ok(EquilibriumReport {
        eigenvalues: eigen_at(params, &point)?,
        point,
        kind: EquilibriumKind::BoundaryType1,
        stable: Stability::Stable,
        analytic_verdict: Stability::Stable,
        condition,
        family: Some(EquilibriumFamily::Boundary { p, w1, w2 }),
    })
}

fn corner(
    params: &DynamicsParams,
    x: [f64; 4],
    kind: EquilibriumKind,
    condition: String,
) -> Result<EquilibriumReport> {
    let point = DynamicsState::from_array(x);
    Ok(EquilibriumReport {
        eigenvalues: eigen_at(params, &point)?,
        point,
        kind,
        stable: Stability::Stable,
        analytic_verdict: Stability::Stable,
        condition,
        family: None,
    })
}

/// Equilibria of the dynamics in a symmetric game.
///
/// Boundary families at `p = (0, 0)` and `p = (1, 1)` are reported over the
/// attitude ranges where they attract, anti-coordination corners when their
/// conditions hold, and the interior line with its eigenvalues.
pub fn symmetric_equilibria(game: &NormalFormGame, epsilon: f64) -> Result<Vec<EquilibriumReport>> {
    let SymmetricLabels { a, b, c, d } = SymmetricLabels::from_game(game)?;
    let params = DynamicsParams::from_game(game, epsilon)?;
    let u = a + d - b - c;
    let half = 0.5 * (c - b);
    let mut out = Vec::new();

    // p = (0, 0): p' = (c-b)/2 w + b - d must be negative
    if let Some(w) = Interval::negative_part(half, b - d) {
        out.push(boundary_family(
            &params,
            [0.0, 0.0],
            w,
            w,
            format!("(c-b)/2*w + b - d < 0, i.e. {half}*w + {} < 0 for w in {w}", b - d),
        )?);
    }
    // p = (1, 1): p' = (c-b)/2 w + a - c must be positive
    if let Some(w) = Interval::negative_part(-half, c - a) {
        out.push(boundary_family(
            &params,
            [1.0, 1.0],
            w,
            w,
            format!("(c-b)/2*w + a - c > 0, i.e. {half}*w + {} > 0 for w in {w}", a - c),
        )?);
    }

    let type2 = EquilibriumKind::BoundaryType2;
    if c > b && b > d && b + c > 2.0 * a {
        let cond = || format!("c > b > d and b + c > 2a ({c} > {b} > {d}, {} > {})", b + c, 2.0 * a);
        out.push(corner(&params, [1.0, 0.0, 0.0, 1.0], type2, cond())?);
        out.push(corner(&params, [0.0, 1.0, 1.0, 0.0], type2, cond())?);
    }
    if b > c && c > a && b + c > 2.0 * d {
        let cond = || format!("b > c > a and b + c > 2d ({b} > {c} > {a}, {} > {})", b + c, 2.0 * d);
        out.push(corner(&params, [1.0, 0.0, 1.0, 0.0], type2, cond())?);
        out.push(corner(&params, [0.0, 1.0, 0.0, 1.0], type2, cond())?);
    }

    if u == 0.0 {
        out.push(EquilibriumReport {
            point: DynamicsState::new(0.5, 0.5, 0.5, 0.5),
            kind: EquilibriumKind::InteriorLine,
            stable: Stability::Degenerate,
            analytic_verdict: Stability::Degenerate,
            eigenvalues: Vec::new(),
            condition: "u = a + d - b - c = 0: the interior line is undefined".into(),
            family: None,
        });
    } else {
        let slope = (b - c) / (2.0 * u);
        let intercept = (d - b) / u;
        if let Some(w) = Interval::preimage_of_unit(slope, intercept) {
            let wm = w.midpoint();
            let pm = slope * wm + intercept;
            let point = DynamicsState::new(pm, pm, wm, wm);
            let eigenvalues = eigen_at(&params, &point)?;
            out.push(EquilibriumReport {
                stable: eigen_stability(&eigenvalues),
                eigenvalues,
                point,
                kind: EquilibriumKind::InteriorLine,
                analytic_verdict: Stability::Unstable,
                condition: format!("p = (b-c)/(2u)*w + (d-b)/u = {slope}*w + {intercept} for w in {w}"),
                family: Some(EquilibriumFamily::Line { slope, intercept, w }),
            });
        }
    }
    Ok(out)
}

/// Equilibria of the dynamics in a general coordination game.
///
/// Symmetric games are handed to [`symmetric_equilibria`]. Otherwise the
/// attitude flow at the two coordinated corners decides which boundary point
/// (or family, on ties) attracts, and interior equilibria come from
/// [`find_interior_equilibria`], thinned to a 0.05 spacing.
#[allow(non_snake_case)]
pub fn coordination_equilibria(game: &NormalFormGame, epsilon: f64) -> Result<Vec<EquilibriumReport>> {
    let CoordinationLabels { R, S, T, P, r, s, t, p } = CoordinationLabels::from_game(game)?;
    if is_symmetric(game) {
        return symmetric_equilibria(game, epsilon);
    }
    let params = DynamicsParams::from_game(game, epsilon)?;
    let type1 = EquilibriumKind::BoundaryType1;
    let mut out = Vec::new();

    // at p = (0, 0): w1' = eps (P - p), p1' = (t-p-S+P)/2 w1 + S - P, p2' = (T-P-s+p)/2 w2 + s - p
    let k1 = 0.5 * (t - p - S + P);
    let k2 = 0.5 * (T - P - s + p);
    if P > p {
        if k1 + S - P < 0.0 {
            out.push(corner(&params, [0.0, 0.0, 1.0, 0.0], type1, format!("P > p > t ({P} > {p} > {t})"))?);
        }
    } else if P < p {
        if k2 + s - p < 0.0 {
            out.push(corner(
                &params,
                [0.0, 0.0, 0.0, 1.0],
                type1,
                format!("P < p and (T-P+s-p)/2 < 0 ({P} < {p}, {} < 0)", k2 + s - p),
            )?);
        }
    } else if let (Some(w1), Some(w2)) = (
        Interval::negative_part(k1, S - P),
        Interval::negative_part(k2, s - p),
    ) {
        out.push(boundary_family(
            &params,
            [0.0, 0.0],
            w1,
            w2,
            format!("P = p, (t-S)/2*w1 < P - S for w1 in {w1}, (T-s)/2*w2 < p - s for w2 in {w2}"),
        )?);
    }

    // at p = (1, 1): w1' = eps (R - r), p1' = R - T + (r-s-R+T)/2 w1, p2' = r - t + (R-S-r+t)/2 w2
    let m1 = 0.5 * (r - s - R + T);
    let m2 = 0.5 * (R - S - r + t);
    if R > r {
        if R - T + m1 > 0.0 {
            out.push(corner(&params, [1.0, 1.0, 1.0, 0.0], type1, format!("R > r > s ({R} > {r} > {s})"))?);
        }
    } else if R < r {
        if r - t + m2 > 0.0 {
            out.push(corner(&params, [1.0, 1.0, 0.0, 1.0], type1, format!("T < R < r ({T} < {R} < {r})"))?);
        }
    } else if let (Some(w1), Some(w2)) = (
        Interval::negative_part(-m1, T - R),
        Interval::negative_part(-m2, t - r),
    ) {
        out.push(boundary_family(
            &params,
            [1.0, 1.0],
            w1,
            w2,
            format!("R = r, R - T + (T-s)/2*w1 > 0 for w1 in {w1}, r - t + (t-S)/2*w2 > 0 for w2 in {w2}"),
        )?);
    }

    let mut kept: Vec<DynamicsState> = Vec::new();
    for root in find_interior_equilibria(&params) {
        if kept.iter().all(|k| distance(k, &root) >= 0.05) {
            kept.push(root);
        }
    }
    for point in kept {
        let eigenvalues = eigen_at(&params, &point)?;
        out.push(EquilibriumReport {
            stable: eigen_stability(&eigenvalues),
            eigenvalues,
            point,
            kind: EquilibriumKind::InteriorLine,
            analytic_verdict: Stability::Unstable,
            condition: "interior root of the dynamics".into(),
            family: None,
        });
    }
    Ok(out)
}

/// Settings for [`find_interior_equilibria_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSearch {
    /// Solve only for the policies with the attitudes held at these values.
    pub fixed_w: Option<[f64; 2]>,
    /// Starting points per coordinate, spread evenly over (0, 1).
    pub grid: usize,
    pub max_iter: usize,
    /// Residual bound `|rhs|` for accepting a root.
    pub tol: f64,
    /// Roots closer than this are merged.
    pub dedup: f64,
}

impl Default for InteriorSearch {
    fn default() -> Self {
        Self {
            fixed_w: None,
            grid: 5,
            max_iter: 200,
            tol: 1e-10,
            dedup: 1e-6,
        }
    }
}

/// Interior zeros of the dynamics found by multi-start damped Newton.
pub fn find_interior_equilibria(params: &DynamicsParams) -> Vec<DynamicsState> {
    find_interior_equilibria_with(params, &InteriorSearch::default())
}

pub fn find_interior_equilibria_with(params: &DynamicsParams, search: &InteriorSearch) -> Vec<DynamicsState> {
    let n = if search.fixed_w.is_some() { 2 } else { 4 };
    let g = search.grid.max(1);
    let levels: Vec<f64> = (0..g).map(|k| (k as f64 + 0.5) / g as f64).collect();
    let embed = |x: &DVector<f64>| -> [f64; 4] {
        match search.fixed_w {
            Some(w) => [x[0], x[1], w[0], w[1]],
            None => [x[0], x[1], x[2], x[3]],
        }
    };
    let residual = |x: &DVector<f64>| -> DVector<f64> {
        let f = saiga_rhs(&DynamicsState::unconstrained_from(embed(x)), params);
        DVector::from_iterator(n, f.into_iter().take(n))
    };
    let jacobian = |x: &DVector<f64>| -> DMatrix<f64> {
        let j = linearize(params, &DynamicsState::unconstrained_from(embed(x)));
        DMatrix::from_fn(n, n, |r, c| j[r][c])
    };

    let mut roots: Vec<DynamicsState> = Vec::new();
    for start in 0..g.pow(n as u32) {
        let mut x = DVector::from_fn(n, |k, _| levels[(start / g.pow(k as u32)) % g]);
        let Some(x) = levenberg_marquardt(&mut x, &residual, &jacobian, search.max_iter, search.tol) else {
            continue;
        };
        let full = embed(&x);
        // the policy-only solve must also zero the attitude flow
        let rhs = saiga_rhs(&DynamicsState::from_array(full), params);
        if norm(&rhs) > search.tol || !full.iter().all(|v| *v > 0.0 && *v < 1.0) {
            continue;
        }
        let state = DynamicsState::from_array(full);
        if roots.iter().all(|r| distance(r, &state) >= search.dedup) {
            roots.push(state);
        }
    }
    roots
}

fn levenberg_marquardt(
    x: &mut DVector<f64>,
    residual: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    jacobian: &dyn Fn(&DVector<f64>) -> DMatrix<f64>,
    max_iter: usize,
    tol: f64,
) -> Option<DVector<f64>> {
    let n = x.len();
    let mut lambda = 1e-3;
    let mut f = residual(x);
    let mut cost = f.norm_squared();
    for _ in 0..max_iter {
        if f.norm() <= tol {
            return Some(x.clone());
        }
        let j = jacobian(x);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let grad = &jt * &f;
        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for k in 0..n {
                lhs[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = lhs.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &*x + &step;
            let ft = residual(&trial);
            let ct = ft.norm_squared();
            if ct.is_finite() && ct < cost {
                *x = trial;
                f = ft;
                cost = ct;
                lambda = (lambda * 0.1).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (f.norm() <= tol).then(|| x.clone())
}

fn norm(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn distance(a: &DynamicsState, b: &DynamicsState) -> f64 {
    let (x, y) = (a.to_array(), b.to_array());
    (0..4).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>().sqrt()
}

impl DynamicsState {
    fn unconstrained_from(x: [f64; 4]) -> Self {
        Self::unconstrained(x[0], x[1], x[2], x[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use crate::games::{coordination_game, prisoners_dilemma, ReducedCoefficients};

    fn pd_reports() -> Vec<EquilibriumReport> {
        symmetric_equilibria(&prisoners_dilemma(), 1.0).unwrap()
    }

    #[test]
    fn pd_families_and_thresholds() {
        let reports = pd_reports();
        assert_eq!(reports.len(), 3, "{reports:#?}");
        let Some(EquilibriumFamily::Boundary { p, w1, .. }) = &reports[0].family else { panic!() };
        assert_eq!(*p, [0.0, 0.0]);
        assert!((w1.lo, w1.hi, w1.hi_open) == (0.0, 0.4, true));
        let Some(EquilibriumFamily::Boundary { p, w1, .. }) = &reports[1].family else { panic!() };
        assert_eq!(*p, [1.0, 1.0]);
        assert!((w1.lo - 0.8).abs() < 1e-15 && w1.lo_open && w1.hi == 1.0);
        let line = &reports[2];
        let Some(EquilibriumFamily::Line { slope, intercept, w }) = &line.family else { panic!() };
        assert!((slope - 2.5).abs() < 1e-15 && (intercept + 1.0).abs() < 1e-15);
        assert!((w.lo - 0.4).abs() < 1e-15 && (w.hi - 0.8).abs() < 1e-15);
        assert_eq!(line.stable, Stability::Unstable);
        assert_eq!(line.analytic_verdict, Stability::Unstable);
        assert!(reports.iter().all(|r| r.kind != EquilibriumKind::BoundaryType2));
    }

    #[test]
    fn boundary_families_are_attracting() {
        // the oracle is the projected flow itself
        let game = prisoners_dilemma();
        let params = DynamicsParams::from_game(&game, 1.0).unwrap();
        for report in pd_reports().iter().filter(|r| r.kind == EquilibriumKind::BoundaryType1) {
            let Some(EquilibriumFamily::Boundary { p, w1, .. }) = &report.family else { panic!() };
            for w in w1.sample(21).into_iter().skip(1).take(19) {
                let shift = if p[0] == 0.0 { 1e-3 } else { -1e-3 };
                let x0 = DynamicsState::new(p[0] + shift, p[1] + shift, w, w);
                let end = *integrate(&params, x0, 1e-2, 2000, true).unwrap().last();
                assert!((end.p1 - p[0]).abs() < 1e-3 && (end.p2 - p[1]).abs() < 1e-3, "{w}: {end:?}");
            }
        }
    }

    #[test]
    fn anti_coordination_corners() {
        // chicken-like: c > b > d, b + c > 2a
        let chicken = SymmetricLabels { a: 1.0, b: 2.0, c: 3.0, d: 0.0 }.to_game();
        let reports = symmetric_equilibria(&chicken, 1.0).unwrap();
        let corners: Vec<[f64; 4]> = reports
            .iter()
            .filter(|r| r.kind == EquilibriumKind::BoundaryType2)
            .map(|r| r.point.to_array())
            .collect();
        assert_eq!(corners, vec![[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0]]);
        // the corner is a rest point of the projected flow
        let params = DynamicsParams::from_game(&chicken, 1.0).unwrap();
        let rhs = saiga_rhs(&DynamicsState::new(1.0, 0.0, 0.0, 1.0), &params);
        assert!(rhs[0] > 0.0 && rhs[1] < 0.0 && rhs[2] < 0.0 && rhs[3] > 0.0);

        let other = SymmetricLabels { a: 0.0, b: 3.0, c: 2.0, d: 1.0 }.to_game();
        let reports = symmetric_equilibria(&other, 1.0).unwrap();
        assert!(reports.iter().any(|r| r.point.to_array() == [1.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn zero_u_is_degenerate_and_equal_bc_gives_flat_line() {
        let g = SymmetricLabels { a: 1.0, b: 2.0, c: 3.0, d: 4.0 }.to_game();
        let reports = symmetric_equilibria(&g, 1.0).unwrap();
        assert!(reports.iter().any(|r| r.stable == Stability::Degenerate));

        let flat = SymmetricLabels { a: 3.0, b: 1.0, c: 1.0, d: 2.0 }.to_game();
        let reports = symmetric_equilibria(&flat, 1.0).unwrap();
        let line = reports.iter().find(|r| r.kind == EquilibriumKind::InteriorLine).unwrap();
        let Some(EquilibriumFamily::Line { slope, intercept, w }) = &line.family else { panic!() };
        assert_eq!(*slope, 0.0);
        assert!((intercept - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(*w, Interval::UNIT);
    }

    #[test]
    fn symmetric_coordination_delegates() {
        // R > T, P > S with (T-S)/2 w > T - R for (1,1) and (T-S)/2 w < P - S for (0,0)
        let game = SymmetricLabels { a: 4.0, b: 0.0, c: 3.0, d: 2.0 }.to_game();
        let reports = symmetric_equilibria(&game, 1.0).unwrap();
        let Some(EquilibriumFamily::Boundary { w1: low, .. }) = &reports[0].family else { panic!() };
        let Some(EquilibriumFamily::Boundary { w1: high, .. }) = &reports[1].family else { panic!() };
        for w in Interval::UNIT.sample(101) {
            assert_eq!(low.contains(w), 1.5 * w < 2.0);
            assert_eq!(high.contains(w), 1.5 * w > -1.0);
        }
        assert_eq!(coordination_equilibria(&game, 1.0).unwrap(), reports);
    }

    #[test]
    fn cg_boundary_points() {
        let reports = coordination_equilibria(&coordination_game(), 1.0).unwrap();
        let points: Vec<[f64; 4]> = reports
            .iter()
            .filter(|r| r.kind == EquilibriumKind::BoundaryType1)
            .map(|r| r.point.to_array())
            .collect();
        assert_eq!(points, vec![[0.0, 0.0, 1.0, 0.0], [1.0, 1.0, 0.0, 1.0]]);
        // each is a rest point of the projected flow: the RHS pushes out of the box
        let params = DynamicsParams::from_game(&coordination_game(), 1.0).unwrap();
        let f = saiga_rhs(&DynamicsState::new(0.0, 0.0, 1.0, 0.0), &params);
        assert!(f[0] < 0.0 && f[1] < 0.0 && f[2] > 0.0 && f[3] < 0.0);
        let f = saiga_rhs(&DynamicsState::new(1.0, 1.0, 0.0, 1.0), &params);
        assert!(f[0] > 0.0 && f[1] > 0.0 && f[2] < 0.0 && f[3] > 0.0);
        for r in reports.iter().filter(|r| r.kind == EquilibriumKind::InteriorLine) {
            assert!(norm(&saiga_rhs(&r.point, &params)) <= 1e-10);
        }
    }

    #[test]
    fn cg_tie_cases_give_families() {
        let base = CoordinationLabels {
            R: 3.0, S: 0.0, T: 1.0, P: 4.0, r: 3.0, s: 0.5, t: 0.0, p: 4.0,
        };
        let reports = coordination_equilibria(&base.to_game(), 1.0).unwrap();
        let families = reports.iter().filter(|r| r.family.is_some()).count();
        assert_eq!(families, 2, "{reports:#?}");
    }

    #[test]
    fn pd_slice_root_lies_on_the_line() {
        let params = DynamicsParams::from_game(&prisoners_dilemma(), 1.0).unwrap();
        let search = InteriorSearch { fixed_w: Some([0.6, 0.6]), ..InteriorSearch::default() };
        let roots = find_interior_equilibria_with(&params, &search);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].p1 - 0.5).abs() < 1e-10 && (roots[0].p2 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn pd_interior_roots_satisfy_the_line() {
        let params = DynamicsParams::from_game(&prisoners_dilemma(), 1.0).unwrap();
        let roots = find_interior_equilibria(&params);
        assert!(!roots.is_empty());
        for r in roots {
            assert!((r.p1 - r.p2).abs() < 1e-8 && (r.w1 - r.w2).abs() < 1e-8);
            assert!((r.p1 - (2.5 * r.w1 - 1.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_rhs_has_no_roots() {
        let k = ReducedCoefficients { u: 0.0, c: 1.0, d: 0.0, e: 0.5 };
        let params = DynamicsParams::new([k, k], 1.0).unwrap();
        assert!(find_interior_equilibria(&params).is_empty());
    }

    #[test]
    fn report_json_shape() {
        let json = serde_json::to_value(&pd_reports()[2]).unwrap();
        for key in ["point", "kind", "stable", "eigenvalues", "condition"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["eigenvalues"].as_array().unwrap().len(), 4);
    }
}
