//! Brute-force reference implementations used by the integration and
//! acceptance suites: panel-quadrature evaluations of the defining integrals,
//! finite-difference gradients, and the closed-form free-packet trajectory.
//! Everything here deliberately avoids the code paths it is used to check.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use pilotwave::quadrature::gauss_legendre;
use pilotwave::{PhysicalConstants, Vec2};

/// e^{i phi}
pub fn cis(phi: f64) -> Complex64 {
    let (s, c) = phi.sin_cos();
    Complex64::new(c, s)
}

/// Integrate a complex-valued function over [a, b] (either orientation) with
/// fixed panels of bounded phase change, Gauss-Legendre order 24 per panel.
pub fn panel_integrate<F: Fn(f64) -> Complex64>(a: f64, b: f64, panels: usize, f: F) -> Complex64 {
    if a == b {
        return Complex64::default();
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = panels.max(1);
    let mut total = Complex64::default();
    for k in 0..panels {
        let p_lo = lo + (hi - lo) * k as f64 / panels as f64;
        let p_hi = lo + (hi - lo) * (k + 1) as f64 / panels as f64;
        let rule = gauss_legendre(24, p_lo, p_hi).unwrap();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            total += w * f(x);
        }
    }
    sign * total
}

/// Oracle for the diffraction function: direct quadrature of
/// `F(u) = (1/sqrt pi) e^{-iu^2 - i pi/4} Int_{-inf}^u e^{iv^2} dv`,
/// splitting off the exact half-line tail `Int_{-inf}^0 = sqrt(pi)/2 e^{i pi/4}`.
pub fn fresnel_f_oracle(u: f64) -> Complex64 {
    // panels sized so each spans at most ~2 pi of phase v^2
    let panels = ((u * u / (2.0 * PI)).ceil() as usize).max(4);
    let finite = panel_integrate(0.0, u, panels, |v| cis(v * v));
    let half_line = 0.5 * PI.sqrt() * cis(FRAC_PI_4);
    (1.0 / PI.sqrt()) * cis(-u * u - FRAC_PI_4) * (half_line + finite)
}

/// Oracle for the Fresnel integrals in the t^2-argument convention.
pub fn fresnel_cs_oracle(x: f64) -> (f64, f64) {
    let panels = ((x * x / (2.0 * PI)).ceil() as usize).max(4);
    let v = panel_integrate(0.0, x, panels, |t| cis(t * t));
    let norm = (2.0 / PI).sqrt();
    (norm * v.re, norm * v.im)
}

/// Oracle for the error function along the straight path 0 -> z.
/// Keep |Im z|^2 - |Re z|^2 modest so the integrand stays representable.
pub fn erf_oracle(z: Complex64) -> Complex64 {
    let phase_span = (z.re * z.re - z.im * z.im).abs() + 2.0 * (z.re * z.im).abs();
    let panels = ((phase_span / 3.0).ceil() as usize).max(8);
    let v = panel_integrate(0.0, 1.0, panels, |s| (-(z * s) * (z * s)).exp());
    2.0 / PI.sqrt() * z * v
}

/// Free 1D propagator (independent re-implementation for convolution oracles).
pub fn free_kernel_1d(x: f64, x0: f64, t: f64, consts: &PhysicalConstants) -> Complex64 {
    let pref = (consts.mass / (2.0 * PI * consts.hbar * t)).sqrt();
    pref * cis(-FRAC_PI_4) * cis(consts.mass * (x - x0) * (x - x0) / (2.0 * consts.hbar * t))
}

/// Convolution oracle for the evolved wall packet: quadrature of the
/// image-method kernel against the initial packet over [0, y_bar + 10 sigma].
pub fn wall_packet_oracle(
    y: f64,
    t: f64,
    packet: &pilotwave::wall::WallPacket1D,
    bc: pilotwave::BoundaryCondition,
    consts: &PhysicalConstants,
) -> Complex64 {
    let hi = packet.center + 10.0 * packet.width;
    // enough panels for both the kernel oscillation and the Gaussian width
    let phase = consts.mass * (y + hi) * (y + hi) / (2.0 * consts.hbar * t);
    let panels = ((phase / PI).ceil() as usize)
        .max((4.0 * hi / packet.width).ceil() as usize)
        .max(8);
    panel_integrate(0.0, hi, panels, |z| {
        let kernel =
            free_kernel_1d(y, z, t, consts) + bc.epsilon() * free_kernel_1d(y, -z, t, consts);
        kernel * pilotwave::wall::wall_initial_psi(z, packet, bc, consts).unwrap()
    })
}

/// Central finite-difference gradient of a complex field.
pub fn fd_gradient<F: Fn(Vec2) -> Complex64>(f: F, p: Vec2, h: f64) -> (Complex64, Complex64) {
    let gx = (f(Vec2::new(p.x + h, p.y)) - f(Vec2::new(p.x - h, p.y))) / (2.0 * h);
    let gy = (f(Vec2::new(p.x, p.y + h)) - f(Vec2::new(p.x, p.y - h))) / (2.0 * h);
    (gx, gy)
}

/// Closed-form trajectory of the free Gaussian packet field: the flow
/// preserves the quantile, so
/// `x(t) = center(t) + (x(t0) - center(t0)) sigma(t)/sigma(t0)`.
pub fn free_packet_trajectory(
    seed: Vec2,
    t0: f64,
    t: f64,
    packet: &pilotwave::freespace::GaussianPacket2D,
    consts: &PhysicalConstants,
) -> Vec2 {
    let spread = |tt: f64| {
        let tau = consts.hbar * tt / (2.0 * consts.mass * packet.width * packet.width);
        (1.0 + tau * tau).sqrt()
    };
    let center = |tt: f64| packet.center + packet.momentum * (tt / consts.mass);
    center(t) + (seed - center(t0)) * (spread(t) / spread(t0))
}

/// Deterministic uniform stream for test-point generation.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_f64(&mut self) -> f64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        (x.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
