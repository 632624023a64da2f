//! Numerical synthesis of the evolved 2D Gaussian packet in the half-line
//! geometry, where no closed form exists: tensor-product Gauss-Legendre
//! integration of the barrier propagator (and its gradient) against the
//! initial packet over its truncated 3-sigma support.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::{Arc, RwLock};

use crate::constants::PhysicalConstants;
use crate::dynamics::{QuantumField, VelocityField};
use crate::error::{Error, Result};
use crate::freespace::GaussianPacket2D;
use crate::geometry::{Rect, Vec2};
use crate::specfun::f_diffraction;
use crate::BoundaryCondition;

/// Times below this cannot be resolved by the rule even at the cap order.
pub const MIN_TIME: f64 = 1e-3;

/// An affine-mapped Gauss-Legendre rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

/// Build the Gauss-Legendre rule of the given order on `[a, b]`; exact for
/// polynomials up to degree `2 order - 1`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if order < 2 {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Legendre order must be at least 2 (got {order})"
        )));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Legendre interval must be finite with a < b (got [{a}, {b}])"
        )));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // Newton iteration on P_n from the Chebyshev-like initial guess; the
    // roots are symmetric, so only half need solving.
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    Ok(QuadratureRule {
        order,
        nodes,
        weights,
        interval: (a, b),
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Default truncation box of the initial packet: centre +/- 3 sigma per axis.
pub fn truncated_support(packet: &GaussianPacket2D) -> Rect {
    let s = 3.0 * packet.width;
    Rect::new(
        packet.center.x - s,
        packet.center.x + s,
        packet.center.y - s,
        packet.center.y + s,
    )
}

/// Diagnostic raised when the truncation box straddles the barrier: the box
/// is deliberately not clipped (the initial state ignores the obstacle), but
/// the fraction of |psi0|^2 mass on the far side of the barrier from the
/// packet centre is recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierOverlap {
    pub overlap_mass: f64,
}

pub fn barrier_overlap(packet: &GaussianPacket2D) -> Option<BarrierOverlap> {
    let b = truncated_support(packet);
    let straddles = b.x_lo < 0.0 && b.y_lo < 0.0 && b.y_hi > 0.0;
    if !straddles {
        return None;
    }
    let s = packet.width * std::f64::consts::SQRT_2;
    let gauss_below = |c: f64| 0.5 * (1.0 + libm::erf(-c / s)); // P(coordinate < 0)
    let p_x_neg = gauss_below(packet.center.x);
    let p_y_far = if packet.center.y >= 0.0 {
        gauss_below(packet.center.y)
    } else {
        1.0 - gauss_below(packet.center.y)
    };
    Some(BarrierOverlap {
        overlap_mass: p_x_neg * p_y_far,
    })
}

/// How the tensor rule order is chosen per evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderPolicy {
    /// Start at `start` nodes per axis, double until the value changes by
    /// less than 1e-6 relative, fail at `cap`.
    Adaptive { start: usize, cap: usize },
    /// Always use exactly this order (callers take responsibility for
    /// resolution; used by long ensemble runs after spot-checking).
    Fixed(usize),
}

impl Default for OrderPolicy {
    fn default() -> Self {
        OrderPolicy::Adaptive {
            start: 64,
            cap: 256,
        }
    }
}

const CONVERGENCE_RTOL: f64 = 1e-6;

/// Pre-evaluated tensor grid: source positions in polar form, half-angle
/// trigonometry, weights and initial-state values.
struct Grid {
    r0: Vec<f64>,
    sqrt_r0: Vec<f64>,
    cos_half: Vec<f64>,
    sin_half: Vec<f64>,
    pos: Vec<Vec2>,
    wpsi0: Vec<Complex64>,
}

impl Grid {
    fn build(packet: &GaussianPacket2D, order: usize, consts: &PhysicalConstants) -> Result<Self> {
        let b = truncated_support(packet);
        let rx = gauss_legendre(order, b.x_lo, b.x_hi)?;
        let ry = gauss_legendre(order, b.y_lo, b.y_hi)?;
        let n = order * order;
        let mut g = Grid {
            r0: Vec::with_capacity(n),
            sqrt_r0: Vec::with_capacity(n),
            cos_half: Vec::with_capacity(n),
            sin_half: Vec::with_capacity(n),
            pos: Vec::with_capacity(n),
            wpsi0: Vec::with_capacity(n),
        };
        let amp = 1.0 / (2.0 * PI * packet.width * packet.width);
        let inv4s2 = 1.0 / (4.0 * packet.width * packet.width);
        for (iy, &y) in ry.nodes.iter().enumerate() {
            for (ix, &x) in rx.nodes.iter().enumerate() {
                let p = Vec2::new(x, y);
                let d = p - packet.center;
                let envelope = amp * (-d.norm_sq() * inv4s2).exp();
                let phase = packet.momentum.dot(p) / consts.hbar;
                let (s, c) = phase.sin_cos();
                let psi0 = envelope * Complex64::new(c, s);
                let w = rx.weights[ix] * ry.weights[iy];
                let r0 = p.norm();
                let th0 = p.angle();
                g.r0.push(r0);
                g.sqrt_r0.push(r0.sqrt());
                g.cos_half.push((0.5 * th0).cos());
                g.sin_half.push((0.5 * th0).sin());
                g.pos.push(p);
                g.wpsi0.push(w * psi0);
            }
        }
        Ok(g)
    }

    /// One pass over the grid accumulating `psi`, `dpsi/dx`, `dpsi/dy`.
    fn synthesize(
        &self,
        x: Vec2,
        t: f64,
        eps: f64,
        consts: &PhysicalConstants,
    ) -> (Complex64, Complex64, Complex64) {
        let m = consts.mass;
        let hbar = consts.hbar;
        let r = x.norm();
        let theta = x.angle();
        let (sh, ch) = (0.5 * theta).sin_cos();
        let u_scale = (2.0 * m * r / (hbar * t)).sqrt();
        let phase_scale = m / (2.0 * hbar * t);
        let pref = m / (2.0 * PI * hbar * t);
        let grad_extra = m / (hbar * t);
        // sqrt(hbar t / (2 pi m r)), completed per node by sqrt(r0)
        let corr_base = if r > 0.0 {
            (hbar * t / (2.0 * PI * m * r)).sqrt()
        } else {
            0.0
        };
        let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
        let mut psi = Complex64::default();
        let mut gx = Complex64::default();
        let mut gy = Complex64::default();
        for idx in 0..self.pos.len() {
            let r0 = self.r0[idx];
            let c0 = self.cos_half[idx];
            let s0 = self.sin_half[idx];
            let scale = u_scale * r0.sqrt();
            // cos((theta -/+ theta0)/2) via half-angle products
            let u1 = scale * (ch * c0 + sh * s0);
            let u2 = -scale * (ch * c0 - sh * s0);
            let f1 = f_diffraction(u1);
            let f2 = f_diffraction(u2);
            let bracket = f1 + eps * f2;
            let rsum = r + r0;
            let (sph, cph) = (phase_scale * rsum * rsum).sin_cos();
            // K = -i pref e^{i phase} bracket
            let front = Complex64::new(sph, -cph) * pref; // -i e^{i phase}
            let k = front * bracket;
            let p0 = self.pos[idx];
            let dxv = x - p0;
            let dxm = Vec2::new(x.x - p0.x, x.y + p0.y);
            let trig_x = (ch * c0 - sh * s0) - eps * (ch * c0 + sh * s0);
            let trig_y = (sh * c0 + ch * s0) - eps * (sh * c0 - ch * s0);
            let corr = rot * (corr_base * self.sqrt_r0[idx]);
            let i = Complex64::new(0.0, 1.0);
            let kx = front * grad_extra * (i * (dxv.x * f1 + eps * dxm.x * f2) + corr * trig_x);
            let ky = front * grad_extra * (i * (dxv.y * f1 + eps * dxm.y * f2) + corr * trig_y);
            let w = self.wpsi0[idx];
            psi += w * k;
            gx += w * kx;
            gy += w * ky;
        }
        (psi, gx, gy)
    }
}

/// The evolved 2D packet in the half-line geometry as a velocity field.
///
/// Rule grids are cached per order behind a lock; evaluations at distinct
/// points are independent and safe to run concurrently.
pub struct HalflinePacketField {
    pub packet: GaussianPacket2D,
    pub bc: BoundaryCondition,
    pub consts: PhysicalConstants,
    pub policy: OrderPolicy,
    overlap: Option<BarrierOverlap>,
    grids: RwLock<BTreeMap<usize, Arc<Grid>>>,
}

impl HalflinePacketField {
    pub fn new(
        packet: GaussianPacket2D,
        bc: BoundaryCondition,
        consts: PhysicalConstants,
        policy: OrderPolicy,
    ) -> Result<Self> {
        match policy {
            OrderPolicy::Adaptive { start, cap } => {
                if start < 2 || cap < 2 * start {
                    return Err(Error::InvalidArgument(format!(
                        "adaptive policy needs start >= 2 and cap >= 2 start \
                         (got start = {start}, cap = {cap})"
                    )));
                }
            }
            OrderPolicy::Fixed(n) => {
                if n < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "fixed rule order must be at least 2 (got {n})"
                    )));
                }
            }
        }
        Ok(Self {
            packet,
            bc,
            consts,
            policy,
            overlap: barrier_overlap(&packet),
            grids: RwLock::new(BTreeMap::new()),
        })
    }

    /// Barrier-overlap diagnostic of the truncation box, when present.
    pub fn overlap(&self) -> Option<BarrierOverlap> {
        self.overlap
    }

    fn grid(&self, order: usize) -> Result<Arc<Grid>> {
        if let Some(g) = self.grids.read().unwrap().get(&order) {
            return Ok(Arc::clone(g));
        }
        let built = Arc::new(Grid::build(&self.packet, order, &self.consts)?);
        let mut w = self.grids.write().unwrap();
        Ok(Arc::clone(w.entry(order).or_insert(built)))
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "packet synthesis needs t > 0 (got {t})"
            )));
        }
        if t < MIN_TIME {
            return Err(Error::Domain(format!(
                "t = {t} is below the resolvable minimum {MIN_TIME}: the integrand \
                 oscillates faster than the capped rule resolves"
            )));
        }
        Ok(())
    }

    /// Scale used for convergence floors and the node threshold: an upper
    /// bound for |psi| of the free evolution of the same packet.
    fn amplitude_scale(&self, t: f64) -> f64 {
        self.consts.mass / (PI * self.consts.hbar * t)
    }

    /// `(psi, dpsi/dx, dpsi/dy)` at the order demanded by the policy.
    pub fn psi_and_grad(&self, x: Vec2, t: f64) -> Result<(Complex64, Complex64, Complex64)> {
        self.check_time(t)?;
        let eps = self.bc.epsilon();
        match self.policy {
            OrderPolicy::Fixed(order) => Ok(self.grid(order)?.synthesize(x, t, eps, &self.consts)),
            OrderPolicy::Adaptive { start, cap } => {
                let floor = 1e-9 * self.amplitude_scale(t);
                let mut order = start;
                let mut prev = self.grid(order)?.synthesize(x, t, eps, &self.consts);
                loop {
                    let next_order = (order * 2).min(cap);
                    let next = self.grid(next_order)?.synthesize(x, t, eps, &self.consts);
                    let rel = (next.0 - prev.0).norm() / next.0.norm().max(floor);
                    if rel <= CONVERGENCE_RTOL {
                        return Ok(next);
                    }
                    if next_order >= cap {
                        return Err(Error::NotConverged {
                            order: next_order,
                            prev: (prev.0.re, prev.0.im),
                            last: (next.0.re, next.0.im),
                            rel_change: rel,
                        });
                    }
                    order = next_order;
                    prev = next;
                }
            }
        }
    }

    pub fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        Ok(self.psi_and_grad(x, t)?.0)
    }

    pub fn grad_psi(&self, x: Vec2, t: f64) -> Result<(Complex64, Complex64)> {
        if x.norm() < crate::halfline::TIP_EPS {
            return Err(Error::SingularPoint(
                "gradient undefined at the barrier tip".into(),
            ));
        }
        let (_, gx, gy) = self.psi_and_grad(x, t)?;
        Ok((gx, gy))
    }
}

impl VelocityField for HalflinePacketField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        if x.norm() < crate::halfline::TIP_EPS {
            return Err(Error::SingularPoint(
                "velocity undefined at the barrier tip".into(),
            ));
        }
        let (psi, gx, gy) = self.psi_and_grad(x, t)?;
        let node_floor = 1e-12 * self.amplitude_scale(t);
        if psi.norm() < node_floor {
            return Err(Error::NodeSingularity {
                psi_abs: psi.norm(),
            });
        }
        let scale = self.consts.hbar / self.consts.mass;
        Ok(Vec2::new(scale * (gx / psi).im, scale * (gy / psi).im))
    }
}

impl QuantumField for HalflinePacketField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        HalflinePacketField::psi(self, x, t)
    }
}

/// One-shot evaluation of the synthesized packet (builds a transient field).
pub fn packet_psi(
    x: Vec2,
    t: f64,
    packet: &GaussianPacket2D,
    bc: BoundaryCondition,
    policy: OrderPolicy,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    HalflinePacketField::new(*packet, bc, *consts, policy)?.psi(x, t)
}

/// One-shot evaluation of the synthesized packet gradient.
pub fn packet_grad_psi(
    x: Vec2,
    t: f64,
    packet: &GaussianPacket2D,
    bc: BoundaryCondition,
    policy: OrderPolicy,
    consts: &PhysicalConstants,
) -> Result<(Complex64, Complex64)> {
    HalflinePacketField::new(*packet, bc, *consts, policy)?.grad_psi(x, t)
}

/// One-shot evaluation of the packet guidance velocity.
pub fn packet_velocity(
    x: Vec2,
    t: f64,
    packet: &GaussianPacket2D,
    bc: BoundaryCondition,
    policy: OrderPolicy,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    HalflinePacketField::new(*packet, bc, *consts, policy)?.velocity(x, t)
}
