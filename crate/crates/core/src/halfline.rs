//! The half-line barrier along the negative x-axis (`y = 0`, `x <= 0`):
//! the exact time propagator built from the diffraction function `F`, its
//! closed-form gradient and guidance velocity, far-field asymptotics with
//! the three-region classification, and the stationary plane-wave scattering
//! states for both boundary conditions.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::constants::PhysicalConstants;
use crate::dynamics::{QuantumField, VelocityField};
use crate::error::{Error, Result};
use crate::geometry::{PolarPoint, Vec2};
use crate::specfun::f_diffraction;
use crate::BoundaryCondition;

/// Node threshold on the O(1) interference bracket `F(u1) +/- F(u2)`.
const NODE_EPS: f64 = 1e-12;

/// Points closer to the origin than this are rejected by gradient and
/// velocity evaluations: the gradient genuinely diverges like 1/sqrt(r) at
/// the barrier tip.
pub const TIP_EPS: f64 = 1e-10;

/// The two diffraction-function arguments of the propagator at a given
/// (point, source, time) configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffractionArguments {
    pub u1: f64,
    pub u2: f64,
}

impl DiffractionArguments {
    pub fn new(x: PolarPoint, x0: PolarPoint, t: f64, consts: &PhysicalConstants) -> Self {
        let scale = (2.0 * consts.mass * x.r * x0.r / (consts.hbar * t)).sqrt();
        Self {
            u1: scale * (0.5 * (x.theta - x0.theta)).cos(),
            u2: -scale * (0.5 * (x.theta + x0.theta)).cos(),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "propagator is singular as t -> 0+ (got t = {t})"
        )));
    }
    Ok(())
}

/// Exact propagator for the half-line barrier:
/// `K = (m / 2 pi i hbar t) e^{i m (r + r0)^2 / 2 hbar t} [F(u1) +/- F(u2)]`,
/// plus sign for Neumann, minus for Dirichlet.
pub fn halfline_propagator(
    x: Vec2,
    x0: Vec2,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    check_time(t)?;
    let xp = PolarPoint::from_cartesian(x);
    let x0p = PolarPoint::from_cartesian(x0);
    let args = DiffractionArguments::new(xp, x0p, t, consts);
    let bracket = f_diffraction(args.u1) + bc.epsilon() * f_diffraction(args.u2);
    let pref = consts.mass / (2.0 * PI * consts.hbar * t);
    let phase = consts.mass * (xp.r + x0p.r) * (xp.r + x0p.r) / (2.0 * consts.hbar * t);
    let (s, c) = phase.sin_cos();
    Ok(Complex64::new(0.0, -pref) * Complex64::new(c, s) * bracket)
}

/// The interference bracket and the pieces shared by the gradient and the
/// velocity.
struct PropagatorParts {
    xp: PolarPoint,
    x0p: PolarPoint,
    f1: Complex64,
    f2: Complex64,
    bracket: Complex64,
    /// `cos((theta+theta0)/2) - eps cos((theta-theta0)/2)`, likewise for sin.
    trig: Vec2,
    /// `sqrt(r0 hbar t / (2 pi m r))`
    corr_scale: f64,
}

fn propagator_parts(
    x: Vec2,
    x0: Vec2,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<PropagatorParts> {
    check_time(t)?;
    let xp = PolarPoint::from_cartesian(x);
    let x0p = PolarPoint::from_cartesian(x0);
    if xp.r < TIP_EPS {
        return Err(Error::SingularPoint(format!(
            "gradient diverges like 1/sqrt(r) at the barrier tip (r = {:.3e})",
            xp.r
        )));
    }
    let eps = bc.epsilon();
    let args = DiffractionArguments::new(xp, x0p, t, consts);
    let f1 = f_diffraction(args.u1);
    let f2 = f_diffraction(args.u2);
    let half_sum = 0.5 * (xp.theta + x0p.theta);
    let half_diff = 0.5 * (xp.theta - x0p.theta);
    Ok(PropagatorParts {
        xp,
        x0p,
        f1,
        f2,
        bracket: f1 + eps * f2,
        trig: Vec2::new(
            half_sum.cos() - eps * half_diff.cos(),
            half_sum.sin() - eps * half_diff.sin(),
        ),
        corr_scale: (x0p.r * consts.hbar * t / (2.0 * PI * consts.mass * xp.r)).sqrt(),
    })
}

/// Closed-form gradient `(dK/dx, dK/dy)` of [`halfline_propagator`].
pub fn halfline_propagator_gradient(
    x: Vec2,
    x0: Vec2,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<(Complex64, Complex64)> {
    let p = propagator_parts(x, x0, t, bc, consts)?;
    let eps = bc.epsilon();
    let i = Complex64::new(0.0, 1.0);
    let mirror = Vec2::new(x0.x, -x0.y);
    let dx = x - x0;
    let dxm = x - mirror;
    let rot = Complex64::from_polar(p.corr_scale, -FRAC_PI_4);
    let gx = i * (dx.x * p.f1 + eps * dxm.x * p.f2) + rot * p.trig.x;
    let gy = i * (dx.y * p.f1 + eps * dxm.y * p.f2) + rot * p.trig.y;
    let m = consts.mass;
    let hbar = consts.hbar;
    let pref = m * m / (2.0 * PI * hbar * hbar * t * t);
    let phase = m * (p.xp.r + p.x0p.r) * (p.xp.r + p.x0p.r) / (2.0 * hbar * t);
    let (s, c) = phase.sin_cos();
    // 1/i = -i
    let front = Complex64::new(0.0, -pref) * Complex64::new(c, s);
    Ok((front * gx, front * gy))
}

/// Guidance velocity of the propagator used as the state; algebraically
/// `(hbar/m) Im(grad K / K)` with the common prefactors cancelled.
pub fn halfline_propagator_velocity(
    x: Vec2,
    x0: Vec2,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    let p = propagator_parts(x, x0, t, bc, consts)?;
    if p.bracket.norm() < NODE_EPS {
        return Err(Error::NodeSingularity {
            psi_abs: p.bracket.norm() * consts.mass / (2.0 * PI * consts.hbar * t),
        });
    }
    let q = (p.f1.norm_sqr() - p.f2.norm_sqr()) / p.bracket.norm_sqr();
    let drift = Vec2::new(x.x - x0.x, x.y - x0.y * q);
    let corr = (Complex64::from_polar(1.0, -FRAC_PI_4) / p.bracket).im * p.corr_scale;
    Ok((drift + p.trig * corr) / t)
}

/// Far-field classification of a direction relative to the two optical
/// boundaries `theta = pi + theta0` and `theta = -pi - theta0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarFieldRegion {
    /// Shadow side: scattered wave only.
    I,
    /// Illuminated: incident plus scattered wave.
    II,
    /// Reflection side: incident plus reflected wave.
    III,
    /// Exactly on an optical boundary, where the asymptotics change form.
    OpticalBoundary,
}

/// Classify a direction `theta in [-pi, pi)` for a source direction
/// `theta0 in (-pi, 0]` (mirror-reduce sources with `theta0 > 0` first).
pub fn classify_region(theta: f64, theta0: f64) -> Result<FarFieldRegion> {
    if !(theta0 > -PI && theta0 <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "classify_region needs theta0 in (-pi, 0] (got {theta0}); \
             mirror-reduce the configuration first"
        )));
    }
    if !(-PI..PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!(
            "classify_region needs theta in [-pi, pi) (got {theta})"
        )));
    }
    let b_upper = PI + theta0;
    let b_lower = -PI - theta0;
    if theta == b_upper || theta == b_lower {
        Ok(FarFieldRegion::OpticalBoundary)
    } else if theta > b_upper {
        Ok(FarFieldRegion::I)
    } else if theta > b_lower {
        Ok(FarFieldRegion::II)
    } else {
        Ok(FarFieldRegion::III)
    }
}

/// Closed asymptotic velocity in the far field (`m r r0 / hbar t >= 100`,
/// both `|u|` at least 5, away from the optical boundaries):
/// region I is radial `((r + r0)/t) x/r`, region II free `(x - x0)/t`,
/// region III forgets the source height, `(x - x0_x e_x)/t`.
// the leading asymptotic forms are the same for both boundary conditions;
// the parameter keeps the call shape of the exact evaluator
#[allow(clippy::only_used_in_recursion)]
pub fn farfield_velocity(
    x: Vec2,
    x0: Vec2,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    check_time(t)?;
    // sources above the axis map to the mirrored problem
    if x0.y > 0.0 {
        let v = farfield_velocity(Vec2::new(x.x, -x.y), Vec2::new(x0.x, -x0.y), t, bc, consts)?;
        return Ok(Vec2::new(v.x, -v.y));
    }
    let xp = PolarPoint::from_cartesian(x);
    let x0p = PolarPoint::from_cartesian(x0);
    let size = consts.mass * xp.r * x0p.r / (consts.hbar * t);
    if size < 100.0 {
        return Err(Error::OutOfAsymptoticRange(format!(
            "m r r0 / (hbar t) = {size:.1} < 100"
        )));
    }
    let args = DiffractionArguments::new(xp, x0p, t, consts);
    if args.u1.abs() < 5.0 || args.u2.abs() < 5.0 {
        return Err(Error::OutOfAsymptoticRange(format!(
            "too close to an optical boundary (u1 = {:.2}, u2 = {:.2})",
            args.u1, args.u2
        )));
    }
    match classify_region(xp.theta, x0p.theta)? {
        FarFieldRegion::I => Ok(x * ((xp.r + x0p.r) / (t * xp.r))),
        FarFieldRegion::II => Ok((x - x0) / t),
        FarFieldRegion::III => Ok(Vec2::new(x.x - x0.x, x.y) / t),
        FarFieldRegion::OpticalBoundary => Err(Error::OutOfAsymptoticRange(
            "exactly on an optical boundary".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Stationary plane-wave scattering states
// ---------------------------------------------------------------------------

/// Incident plane wave with wavenumber `k0 > 0` arriving from the direction
/// `theta0` (wave vector `(k_x, k_y) = -(k0 cos theta0, k0 sin theta0)`),
/// together with the diffraction arguments at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveArguments {
    pub k0: f64,
    pub theta0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl PlaneWaveArguments {
    pub fn at(k0: f64, theta0: f64, x: Vec2) -> Result<Self> {
        if !(k0 > 0.0) || !k0.is_finite() || !theta0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "plane wave needs finite k0 > 0 and theta0 (got k0 = {k0}, theta0 = {theta0})"
            )));
        }
        let p = PolarPoint::from_cartesian(x);
        let scale = (2.0 * k0 * p.r).sqrt();
        Ok(Self {
            k0,
            theta0,
            a1: scale * (0.5 * (p.theta - theta0)).cos(),
            a2: -scale * (0.5 * (p.theta + theta0)).cos(),
        })
    }

    /// Cartesian wave vector of the incident wave.
    pub fn wave_vector(&self) -> Vec2 {
        Vec2::new(-self.k0 * self.theta0.cos(), -self.k0 * self.theta0.sin())
    }
}

/// Stationary scattering state `psi = e^{i k0 r} [F(a1) +/- F(a2)]`.
pub fn planewave_psi(x: Vec2, k0: f64, theta0: f64, bc: BoundaryCondition) -> Result<Complex64> {
    let args = PlaneWaveArguments::at(k0, theta0, x)?;
    let r = x.norm();
    let bracket = f_diffraction(args.a1) + bc.epsilon() * f_diffraction(args.a2);
    Ok(Complex64::from_polar(1.0, k0 * r) * bracket)
}

/// Closed-form gradient of the scattering state.
pub fn planewave_gradient(
    x: Vec2,
    k0: f64,
    theta0: f64,
    bc: BoundaryCondition,
) -> Result<(Complex64, Complex64)> {
    let args = PlaneWaveArguments::at(k0, theta0, x)?;
    let p = PolarPoint::from_cartesian(x);
    if p.r < TIP_EPS {
        return Err(Error::SingularPoint(format!(
            "gradient diverges like 1/sqrt(r) at the barrier tip (r = {:.3e})",
            p.r
        )));
    }
    let f1 = f_diffraction(args.a1);
    let f2 = f_diffraction(args.a2);
    let k = args.wave_vector();
    let k_mirror = Vec2::new(k.x, -k.y);
    let i = Complex64::new(0.0, 1.0);
    let eps = bc.epsilon();
    let (px, py) = match bc {
        // sin(theta0/2) [-sin(theta/2), cos(theta/2)]
        BoundaryCondition::Neumann => {
            let s0 = (0.5 * theta0).sin();
            (-s0 * (0.5 * p.theta).sin(), s0 * (0.5 * p.theta).cos())
        }
        // cos(theta0/2) [cos(theta/2), sin(theta/2)]
        BoundaryCondition::Dirichlet => {
            let c0 = (0.5 * theta0).cos();
            (c0 * (0.5 * p.theta).cos(), c0 * (0.5 * p.theta).sin())
        }
    };
    let corr = Complex64::from_polar((2.0 * k0 / (PI * p.r)).sqrt(), -FRAC_PI_4);
    let front = Complex64::from_polar(1.0, k0 * p.r);
    let gx = front * (i * (f1 * k.x + eps * f2 * k_mirror.x) + corr * px);
    let gy = front * (i * (f1 * k.y + eps * f2 * k_mirror.y) + corr * py);
    Ok((gx, gy))
}

/// Guidance velocity of the scattering state; the state is stationary, so
/// the field carries no time argument.
pub fn planewave_velocity(
    x: Vec2,
    k0: f64,
    theta0: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    let args = PlaneWaveArguments::at(k0, theta0, x)?;
    let p = PolarPoint::from_cartesian(x);
    if p.r < TIP_EPS {
        return Err(Error::SingularPoint(format!(
            "velocity undefined at the barrier tip (r = {:.3e})",
            p.r
        )));
    }
    let f1 = f_diffraction(args.a1);
    let f2 = f_diffraction(args.a2);
    let eps = bc.epsilon();
    let bracket = f1 + eps * f2;
    if bracket.norm() < NODE_EPS {
        return Err(Error::NodeSingularity {
            psi_abs: bracket.norm(),
        });
    }
    let k = args.wave_vector();
    let q = (f1.norm_sqr() - f2.norm_sqr()) / bracket.norm_sqr();
    let (px, py) = match bc {
        BoundaryCondition::Neumann => {
            let s0 = (0.5 * theta0).sin();
            (-s0 * (0.5 * p.theta).sin(), s0 * (0.5 * p.theta).cos())
        }
        BoundaryCondition::Dirichlet => {
            let c0 = (0.5 * theta0).cos();
            (c0 * (0.5 * p.theta).cos(), c0 * (0.5 * p.theta).sin())
        }
    };
    let corr =
        (Complex64::from_polar(1.0, -FRAC_PI_4) / bracket).im * (2.0 * k0 / (PI * p.r)).sqrt();
    let scale = consts.hbar / consts.mass;
    Ok(Vec2::new(
        scale * (k.x + corr * px),
        scale * (k.y * q + corr * py),
    ))
}

/// Half-line propagator (delta source) as an integrable velocity field.
#[derive(Debug, Clone)]
pub struct HalflinePropagatorField {
    pub source: Vec2,
    pub bc: BoundaryCondition,
    pub consts: PhysicalConstants,
}

impl VelocityField for HalflinePropagatorField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        halfline_propagator_velocity(x, self.source, t, self.bc, &self.consts)
    }
}

impl QuantumField for HalflinePropagatorField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        halfline_propagator(x, self.source, t, self.bc, &self.consts)
    }
}

/// Stationary plane-wave scattering state as an integrable velocity field;
/// the time argument is ignored.
#[derive(Debug, Clone)]
pub struct PlaneWaveField {
    pub k0: f64,
    pub theta0: f64,
    pub bc: BoundaryCondition,
    pub consts: PhysicalConstants,
}

impl VelocityField for PlaneWaveField {
    fn velocity(&self, x: Vec2, _t: f64) -> Result<Vec2> {
        planewave_velocity(x, self.k0, self.theta0, self.bc, &self.consts)
    }
}

impl QuantumField for PlaneWaveField {
    fn psi(&self, x: Vec2, _t: f64) -> Result<Complex64> {
        planewave_psi(x, self.k0, self.theta0, self.bc)
    }
}
