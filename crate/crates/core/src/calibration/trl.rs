use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CalError;
use crate::netcore::{
    cascade, cascade_inverse, s_to_t_point, t_to_s_point, FrequencyGrid, Mat2, OnePortNetwork, TwoPortNetwork,
};
use crate::par;
use crate::tline::PropagationConstant;
use crate::units::C0;

/// Eigenvalue gap `|λ1 − λ2|` below which a point is degenerate. For a
/// lossless line the gap is `2|sin θ|`, so this marks θ within 1° of a
/// multiple of 180°.
pub const DEGENERATE_GAP: f64 = 0.034_904_812_874_567_02; // 2·sin(1°)

/// `|ln|λa/λb||` above which the passive root is chosen by magnitude alone;
/// below it the line is treated as lossless and roots are tracked by
/// continuity.
pub const PASSIVITY_CONTRAST: f64 = 1e-6;

/// Recommended electrical-length window of the line standard, degrees.
const BAND_DEG: (f64, f64) = (20.0, 160.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectKind {
    Short,
    Open,
}

/// Raw measurements of the three TRL standards.
#[derive(Debug, Clone, PartialEq)]
pub struct TrlStandards {
    pub thru: TwoPortNetwork,
    pub line: TwoPortNetwork,
    pub reflect_port1: OnePortNetwork,
    pub reflect_port2: OnePortNetwork,
    /// Line length minus thru length, m.
    pub delta_length: f64,
    pub reflect_kind: ReflectKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TrlOptions {
    /// Replace degenerate and singular points by interpolation between
    /// their nearest good neighbours.
    pub interpolate_degenerate: bool,
    /// Approximate effective permittivity of the line. Only used to pick the
    /// eigenvalue branch at the first point of a lossless line; without it
    /// the line is assumed shorter than 180° there.
    pub eps_eff_estimate: Option<f64>,
    /// Characteristic impedance of the line standard, if known. It becomes
    /// the reference label of the calibrated data.
    pub line_z0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrlPointStatus {
    Ok,
    /// Line phase outside 20°–160° (mod 180°); solved, but accuracy suffers.
    OutsideBand,
    /// Line phase within about 1° of a multiple of 180°.
    Degenerate,
    /// No finite solution at this point.
    Singular,
    /// Degenerate or singular point replaced by interpolation.
    Interpolated,
}

impl TrlPointStatus {
    pub fn is_usable(self) -> bool {
        matches!(self, TrlPointStatus::Ok | TrlPointStatus::OutsideBand)
    }
}

/// Reference impedance of calibrated data. TRL references S-parameters to
/// the line standard's characteristic impedance, which the calibration
/// itself cannot determine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrlReference {
    pub line_z0: Option<f64>,
}

impl TrlReference {
    pub fn caveat(&self) -> String {
        match self.line_z0 {
            Some(z) => format!("reference impedance: TRL line characteristic impedance, user-declared {z} ohm"),
            None => "reference impedance: TRL line characteristic impedance (unknown); the R value on the option line is a placeholder".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoxes {
    /// Port-1 box: port 1 at the VNA, port 2 at the DUT.
    pub port1: TwoPortNetwork,
    /// Port-2 box: port 1 at the DUT, port 2 at the VNA.
    pub port2: TwoPortNetwork,
    pub gamma_est: PropagationConstant,
    pub status: Vec<TrlPointStatus>,
    /// Reflection coefficient of the reflect standard as solved.
    pub reflect_estimate: Vec<Complex64>,
    pub reference: TrlReference,
}

impl ErrorBoxes {
    pub fn flagged_points(&self) -> Vec<usize> {
        self.status.iter().enumerate().filter(|(_, s)| !s.is_usable()).map(|(i, _)| i).collect()
    }
}

fn eigenvalues(m: &Mat2) -> (Complex64, Complex64) {
    let half_tr = m.trace() * 0.5;
    let disc = (half_tr * half_tr - m.det()).sqrt();
    (half_tr + disc, half_tr - disc)
}

fn unit(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Right eigenvector of `m` for eigenvalue `l`.
fn right_vec(m: &Mat2, l: Complex64) -> [Complex64; 2] {
    let a = [m.at(1, 2), l - m.at(1, 1)];
    let b = [l - m.at(2, 2), m.at(2, 1)];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    unit(if na >= nb { a } else { b })
}

/// Left (row) eigenvector of `m` for eigenvalue `l`.
fn left_vec(m: &Mat2, l: Complex64) -> [Complex64; 2] {
    let a = [m.at(2, 1), l - m.at(1, 1)];
    let b = [l - m.at(2, 2), m.at(1, 2)];
    let na = a[0].norm_sqr() + a[1].norm_sqr();
    let nb = b[0].norm_sqr() + b[1].norm_sqr();
    unit(if na >= nb { a } else { b })
}

fn check_standards(std: &TrlStandards) -> Result<(), CalError> {
    if !(std.delta_length > 0.0) || !std.delta_length.is_finite() {
        return Err(CalError::InvalidStandard(format!("delta_length must be positive, got {}", std.delta_length)));
    }
    let g = std.thru.grid();
    let named = [
        ("line", std.line.grid()),
        ("reflect_port1", std.reflect_port1.grid()),
        ("reflect_port2", std.reflect_port2.grid()),
    ];
    for (name, other) in named {
        if !g.matches(other) {
            return Err(CalError::InvalidStandard(format!("{name} grid differs from the thru grid")));
        }
    }
    if std.thru.z_ref() != std.line.z_ref()
        || std.reflect_port1.z_ref() != std.thru.z_ref()[0]
        || std.reflect_port2.z_ref() != std.thru.z_ref()[1]
    {
        return Err(CalError::InvalidStandard("standards were measured in different reference impedances".into()));
    }
    Ok(())
}

/// Per-point quantities that do not depend on root tracking.
struct Raw {
    mt: Mat2,
    ml: Mat2,
    roots: (Complex64, Complex64),
}

/// Picks `e^{−γΔl}` among the two eigenvalues at every point.
fn track_roots(raw: &[Option<Raw>], grid: &FrequencyGrid, dl: f64, opts: &TrlOptions) -> Vec<Option<Complex64>> {
    let mut out: Vec<Option<Complex64>> = Vec::with_capacity(raw.len());
    let mut history: Vec<Complex64> = Vec::new();
    for (i, r) in raw.iter().enumerate() {
        let Some(r) = r else {
            out.push(None);
            continue;
        };
        let (a, b) = r.roots;
        let contrast = (a.norm().ln() - b.norm().ln()).abs();
        let closest = |target: Complex64| if (a - target).norm() <= (b - target).norm() { a } else { b };
        let pick = if contrast > PASSIVITY_CONTRAST {
            if a.norm() <= b.norm() {
                a
            } else {
                b
            }
        } else {
            match history.len() {
                0 => match opts.eps_eff_estimate {
                    Some(eps) => closest(Complex64::from_polar(1.0, -2.0 * PI * grid.get(i) * eps.sqrt() * dl / C0)),
                    // Line shorter than 180°: e^{−jθ} has negative imaginary part.
                    None => {
                        if a.im <= b.im {
                            a
                        } else {
                            b
                        }
                    }
                },
                1 => closest(history[0]),
                n => {
                    let (p1, p2) = (history[n - 1], history[n - 2]);
                    closest(p1 * p1 / p2)
                }
            }
        };
        history.push(pick);
        out.push(Some(pick));
    }
    out
}

struct Solved {
    x: Mat2,
    left_and_thru: (Complex64, Complex64, [Complex64; 2], [Complex64; 2]),
    gamma_sq: Complex64,
    s: Complex64,
}

/// Eigenvectors, thru normalisation and reflect products at one point.
fn solve_point(r: &Raw, l1: Complex64, l2: Complex64, gm1: Complex64, gm2: Complex64) -> Option<Solved> {
    let p = r.ml * r.mt.inverse()?;
    let q = r.mt.inverse()? * r.ml;
    let (v1, v2) = (right_vec(&p, l1), right_vec(&p, l2));
    let (u1, u2) = (left_vec(&q, l1), left_vec(&q, l2));
    let v = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    let u = Mat2::new(u1[0], u1[1], u2[0], u2[1]);
    let d = v.inverse()? * r.mt * u.inverse()?;
    let (d1, d2) = (d.at(1, 1), d.at(2, 2));
    let s = (v2[0] - gm1 * v2[1]) / (gm1 * v1[1] - v1[0]);
    let g = (u2[0] + gm2 * u2[1]) / (u1[0] + gm2 * u1[1]);
    let h = d1 / d2;
    let gamma_sq = s * g / h;
    let x = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    let ok = [s, g, h, gamma_sq, d1, d2].iter().all(|z| z.is_finite()) && gamma_sq.norm() > 0.0;
    ok.then_some(Solved { x, left_and_thru: (d1, d2, u1, u2), gamma_sq, s })
}

/// Builds both boxes for a chosen reflect coefficient (β = 1 scaling).
fn boxes(sol: &Solved, gamma: Complex64) -> Option<(Mat2, Mat2)> {
    let alpha = sol.s / gamma;
    let (d1, d2, u1, u2) = sol.left_and_thru;
    let x = Mat2::new(alpha * sol.x.at(1, 1), sol.x.at(1, 2), alpha * sol.x.at(2, 1), sol.x.at(2, 2));
    let (p, q) = (d1 / alpha, d2);
    let y = Mat2::new(p * u1[0], p * u1[1], q * u2[0], q * u2[1]);
    let (sx, sy) = (t_to_s_point(&x)?, t_to_s_point(&y)?);
    (sx.is_finite() && sy.is_finite()).then_some((sx, sy))
}

fn line_status(l1: Complex64, l2: Complex64) -> TrlPointStatus {
    if (l1 - l2).norm() < DEGENERATE_GAP {
        return TrlPointStatus::Degenerate;
    }
    let deg = (-l1.arg()).to_degrees().rem_euclid(180.0);
    if deg < BAND_DEG.0 || deg > BAND_DEG.1 {
        TrlPointStatus::OutsideBand
    } else {
        TrlPointStatus::Ok
    }
}

fn lerp_fill<T: Copy>(grid: &FrequencyGrid, vals: &mut [T], good: &[bool], mix: impl Fn(T, T, f64) -> T) {
    let idx: Vec<usize> = (0..vals.len()).filter(|&i| good[i]).collect();
    for i in 0..vals.len() {
        if good[i] {
            continue;
        }
        let hi = idx.partition_point(|&k| k < i);
        vals[i] = match (hi.checked_sub(1).map(|h| idx[h]), idx.get(hi).copied()) {
            (Some(a), Some(b)) => {
                let t = (grid.get(i) - grid.get(a)) / (grid.get(b) - grid.get(a));
                mix(vals[a], vals[b], t)
            }
            (Some(a), None) => vals[a],
            (None, Some(b)) => vals[b],
            (None, None) => unreachable!("caller guarantees a good point"),
        };
    }
}

/// Solves the TRL error model.
///
/// Per-point eigen-solutions run in parallel; the eigenvalue branch and the
/// reflect sign are then fixed by sequential passes over the grid. Points
/// with no finite solution make the call fail unless
/// [`TrlOptions::interpolate_degenerate`] is set; degenerate but finite
/// points are returned and flagged.
pub fn trl_calibrate(std: &TrlStandards, opts: &TrlOptions) -> Result<ErrorBoxes, CalError> {
    check_standards(std)?;
    if let Some(z) = opts.line_z0 {
        if !(z > 0.0) || !z.is_finite() {
            return Err(CalError::InvalidParameter(format!("line_z0 must be positive, got {z}")));
        }
    }
    let grid = std.thru.grid().clone();
    let n = grid.len();
    let dl = std.delta_length;

    let raw: Vec<Option<Raw>> = par::map_indices(n, |i| {
        let mt = s_to_t_point(&std.thru.s()[i])?;
        let ml = s_to_t_point(&std.line.s()[i])?;
        let p = ml * mt.inverse()?;
        let roots = eigenvalues(&p);
        (roots.0.is_finite() && roots.1.is_finite()).then_some(Raw { mt, ml, roots })
    });
    let lambda1 = track_roots(&raw, &grid, dl, opts);

    let solved: Vec<Option<(Solved, TrlPointStatus, Complex64)>> = par::map_indices(n, |i| {
        let r = raw[i].as_ref()?;
        let l1 = lambda1[i]?;
        let l2 = if l1 == r.roots.0 { r.roots.1 } else { r.roots.0 };
        let sol = solve_point(r, l1, l2, std.reflect_port1.s11()[i], std.reflect_port2.s11()[i])?;
        Some((sol, line_status(l1, l2), l1))
    });

    // Reflect sign: declared polarity at the first solvable point, then
    // nearest to the previous estimate.
    let mut reflect: Vec<Complex64> = vec![Complex64::new(f64::NAN, f64::NAN); n];
    let mut prev: Option<Complex64> = None;
    for i in 0..n {
        if let Some((sol, _, _)) = &solved[i] {
            let root = sol.gamma_sq.sqrt();
            let g = match prev {
                None => {
                    let want_negative = std.reflect_kind == ReflectKind::Short;
                    if (root.re < 0.0) == want_negative {
                        root
                    } else {
                        -root
                    }
                }
                Some(p) => {
                    if (root - p).norm() <= (-root - p).norm() {
                        root
                    } else {
                        -root
                    }
                }
            };
            reflect[i] = g;
            prev = Some(g);
        }
    }

    let built: Vec<Option<(Mat2, Mat2)>> =
        par::map_indices(n, |i| solved[i].as_ref().and_then(|(sol, _, _)| boxes(sol, reflect[i])));

    let mut status: Vec<TrlPointStatus> = (0..n)
        .map(|i| match (&solved[i], &built[i]) {
            (Some((_, st, _)), Some(_)) => *st,
            _ => TrlPointStatus::Singular,
        })
        .collect();

    let singular: Vec<usize> = (0..n).filter(|&i| status[i] == TrlPointStatus::Singular).collect();
    let zero = Mat2::zero();
    let mut box1: Vec<Mat2> = built.iter().map(|b| b.map_or(zero, |b| b.0)).collect();
    let mut box2: Vec<Mat2> = built.iter().map(|b| b.map_or(zero, |b| b.1)).collect();
    let mut l1: Vec<Complex64> = (0..n).map(|i| solved[i].as_ref().map_or(Complex64::new(1.0, 0.0), |s| s.2)).collect();

    if opts.interpolate_degenerate {
        let good: Vec<bool> = status.iter().map(|s| s.is_usable()).collect();
        if !good.iter().any(|&g| g) {
            return Err(CalError::NoUsablePoint);
        }
        let mix_m = |a: Mat2, b: Mat2, t: f64| a.scale(Complex64::new(1.0 - t, 0.0)) + b.scale(Complex64::new(t, 0.0));
        let mix_c = |a: Complex64, b: Complex64, t: f64| a * (1.0 - t) + b * t;
        lerp_fill(&grid, &mut box1, &good, mix_m);
        lerp_fill(&grid, &mut box2, &good, mix_m);
        lerp_fill(&grid, &mut reflect, &good, mix_c);
        // Interpolate the propagation factor in (ln|λ|, phase) rather than
        // linearly in λ, so its magnitude stays meaningful.
        let mut log_l: Vec<Complex64> = l1.iter().map(|l| l.ln()).collect();
        let mut last: Option<f64> = None;
        for (z, _) in log_l.iter_mut().zip(&good).filter(|(_, g)| **g) {
            if let Some(prev) = last {
                z.im = prev + (z.im - prev + PI).rem_euclid(2.0 * PI) - PI;
            }
            last = Some(z.im);
        }
        lerp_fill(&grid, &mut log_l, &good, mix_c);
        l1 = log_l.iter().map(|z| z.exp()).collect();
        for s in status.iter_mut().filter(|s| !s.is_usable()) {
            *s = TrlPointStatus::Interpolated;
        }
    } else if !singular.is_empty() {
        return Err(CalError::IllConditioned { points: singular });
    }

    let gamma_est = gamma_from_lambda(&grid, &l1, dl, opts.eps_eff_estimate)?;
    let [z_vna1, z_vna2] = std.thru.z_ref();
    let label = opts.line_z0.unwrap_or(z_vna1);
    Ok(ErrorBoxes {
        port1: TwoPortNetwork::new(grid.clone(), box1, [z_vna1, label])?,
        port2: TwoPortNetwork::new(grid, box2, [label, z_vna2])?,
        gamma_est,
        status,
        reflect_estimate: reflect,
        reference: TrlReference { line_z0: opts.line_z0 },
    })
}

/// γ from `λ = e^{−γΔl}`. The phase is unwrapped by continuity, with the
/// first point on the branch `[0, 2π)` or, given a permittivity estimate,
/// the branch nearest the estimated electrical length.
fn gamma_from_lambda(
    grid: &FrequencyGrid,
    lambda: &[Complex64],
    dl: f64,
    eps_eff: Option<f64>,
) -> Result<PropagationConstant, CalError> {
    let alpha = lambda.iter().map(|l| -l.norm().ln() / dl).collect();
    let mut theta: Vec<f64> = Vec::with_capacity(lambda.len());
    for (i, l) in lambda.iter().enumerate() {
        let w = -l.arg();
        let t = match theta.last() {
            Some(&prev) => prev + (w - prev + PI).rem_euclid(2.0 * PI) - PI,
            None => match eps_eff {
                Some(eps) => {
                    let expect = 2.0 * PI * grid.get(i) * eps.sqrt() * dl / C0;
                    w + ((expect - w) / (2.0 * PI)).round() * 2.0 * PI
                }
                None => w.rem_euclid(2.0 * PI),
            },
        };
        theta.push(t);
    }
    let beta = theta.into_iter().map(|t| t / dl).collect();
    Ok(PropagationConstant::new(grid.clone(), alpha, beta)?)
}

/// Removes both error boxes from a raw two-port measurement. The result is
/// referenced to the TRL line impedance (see [`TrlReference`]).
pub fn apply_cal(e: &ErrorBoxes, raw: &TwoPortNetwork) -> Result<TwoPortNetwork, CalError> {
    let left = cascade_inverse(&e.port1)?;
    let right = cascade_inverse(&e.port2)?;
    Ok(cascade(&cascade(&left, raw)?, &right)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigen_helpers() {
        let m = Mat2::new(c(2.0, 1.0), c(0.5, -0.3), c(-0.2, 0.7), c(-1.0, 0.4));
        let (a, b) = eigenvalues(&m);
        for l in [a, b] {
            let v = right_vec(&m, l);
            let mv = [m.at(1, 1) * v[0] + m.at(1, 2) * v[1], m.at(2, 1) * v[0] + m.at(2, 2) * v[1]];
            assert!((mv[0] - l * v[0]).norm() < 1e-12 && (mv[1] - l * v[1]).norm() < 1e-12);
            let u = left_vec(&m, l);
            let um = [u[0] * m.at(1, 1) + u[1] * m.at(2, 1), u[0] * m.at(1, 2) + u[1] * m.at(2, 2)];
            assert!((um[0] - l * u[0]).norm() < 1e-12 && (um[1] - l * u[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn line_status_bands() {
        let e = |deg: f64| Complex64::from_polar(1.0, -deg.to_radians());
        assert_eq!(line_status(e(90.0), e(-90.0)), TrlPointStatus::Ok);
        assert_eq!(line_status(e(10.0), e(-10.0)), TrlPointStatus::OutsideBand);
        assert_eq!(line_status(e(179.5), e(-179.5)), TrlPointStatus::Degenerate);
        assert_eq!(line_status(e(250.0), e(-250.0)), TrlPointStatus::Ok);
    }

    #[test]
    fn degenerate_gap_constant() {
        assert!((DEGENERATE_GAP - 2.0 * 1f64.to_radians().sin()).abs() < 1e-16);
    }
}
