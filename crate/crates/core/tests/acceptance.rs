//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured figure of merit. Run with `--nocapture` to see every
//! line; any failure also fails the test.

mod common;

use num_complex::Complex64;
use std::time::Instant;

use pilotwave::dynamics::{
    circle_seeds, equivariance_test, integrate, integrate_ensemble, DensitySpec, InitialCircle,
    StepGuard, TrajectoryStatus, VelocityField,
};
use pilotwave::freespace::{
    free_gaussian_psi_1d, FreePacketField, GaussianPacket1D, GaussianPacket2D,
};
use pilotwave::halfline::{
    farfield_velocity, halfline_propagator, halfline_propagator_gradient,
    halfline_propagator_velocity, planewave_psi, planewave_velocity, DiffractionArguments,
    HalflinePropagatorField, PlaneWaveField,
};
use pilotwave::quadrature::{HalflinePacketField, OrderPolicy};
use pilotwave::runner::sample_density;
use pilotwave::scenario::DensityGridSpec;
use pilotwave::wall::{
    wall_packet_psi, wall_velocity_1d, WallPacket1D, WallPacket2D, WallPacketField,
};
use pilotwave::{BoundaryCondition, PhysicalConstants, PolarPoint, Rect, Vec2};

use common::{fd_gradient, free_packet_trajectory, fresnel_f_oracle, TestRng};

fn consts() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn report(n: u32, name: &str, pass: bool, started: Instant, detail: &str) {
    println!(
        "ACCEPTANCE {n:2} ({name}): {} [{:.1}s] — {detail}",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

/// Distance to the barrier set {y = 0, x <= 0}.
fn barrier_distance(p: Vec2) -> f64 {
    if p.x <= 0.0 {
        p.y.abs()
    } else {
        p.norm()
    }
}

#[test]
fn criterion_01_special_function_oracle() {
    let started = Instant::now();
    let mut rng = TestRng::new(101);
    let mut worst_oracle = 0.0f64;
    let mut worst_identity = 0.0f64;
    for _ in 0..1000 {
        let u = rng.range(-50.0, 50.0);
        let f = pilotwave::specfun::fresnel_f(u).unwrap();
        worst_oracle = worst_oracle.max((f - fresnel_f_oracle(u)).norm());
        let sum = f + pilotwave::specfun::fresnel_f(-u).unwrap();
        let (s, c) = (u * u).sin_cos();
        worst_identity = worst_identity.max((sum - Complex64::new(c, -s)).norm());
    }
    let pass = worst_oracle <= 1e-10 && worst_identity <= 1e-10;
    report(
        1,
        "special-function oracle",
        pass,
        started,
        &format!(
            "max |F - oracle| = {worst_oracle:.2e}, max identity residual = {worst_identity:.2e}"
        ),
    );
}

#[test]
fn criterion_02_gradient_consistency() {
    let started = Instant::now();
    let c = consts();
    let x0 = Vec2::new(4.0, -4.0);
    let mut rng = TestRng::new(202);
    let mut worst_prop = 0.0f64;
    for i in 0..100 {
        let bc = if i % 2 == 0 {
            BoundaryCondition::Neumann
        } else {
            BoundaryCondition::Dirichlet
        };
        let r = rng.range(0.5, 6.0);
        let theta = rng.range(-0.85, 0.85) * std::f64::consts::PI;
        let t = rng.range(0.1, 1.5);
        let p = Vec2::new(r * theta.cos(), r * theta.sin());
        let (gx, gy) = halfline_propagator_gradient(p, x0, t, bc, &c).unwrap();
        let (fx, fy) = fd_gradient(|q| halfline_propagator(q, x0, t, bc, &c).unwrap(), p, 1e-5);
        let num = ((gx - fx).norm_sqr() + (gy - fy).norm_sqr()).sqrt();
        let den = (gx.norm_sqr() + gy.norm_sqr()).sqrt();
        worst_prop = worst_prop.max(num / den);
    }

    let packet = GaussianPacket2D::new(x0, Vec2::ZERO, 0.25).unwrap();
    let field = HalflinePacketField::new(
        packet,
        BoundaryCondition::Neumann,
        c,
        OrderPolicy::Fixed(48),
    )
    .unwrap();
    let mut worst_packet = 0.0f64;
    for _ in 0..100 {
        let t = rng.range(0.1, 0.8);
        let p = Vec2::new(4.0 + rng.range(-1.5, 1.5), -4.0 + rng.range(-1.5, 1.5));
        let (_, gx, gy) = field.psi_and_grad(p, t).unwrap();
        let (fx, fy) = fd_gradient(|q| field.psi(q, t).unwrap(), p, 1e-5);
        let num = ((gx - fx).norm_sqr() + (gy - fy).norm_sqr()).sqrt();
        let den = (gx.norm_sqr() + gy.norm_sqr()).sqrt();
        worst_packet = worst_packet.max(num / den);
    }
    let pass = worst_prop <= 1e-6 && worst_packet <= 1e-5;
    report(
        2,
        "gradient consistency",
        pass,
        started,
        &format!("propagator FD rel = {worst_prop:.2e} (<= 1e-6), packet FD rel = {worst_packet:.2e} (<= 1e-5)"),
    );
}

#[test]
fn criterion_03_boundary_condition_invariants() {
    let started = Instant::now();
    let c = consts();
    let mut detail = String::new();
    let mut pass = true;

    // wall: Neumann normal velocity and Dirichlet amplitude on the wall
    {
        let packet = WallPacket1D::new(4.0, -2.0, 1.0, &c).unwrap();
        let mut worst_v = 0.0f64;
        let mut worst_psi = 0.0f64;
        for &t in &[0.05, 0.3, 1.0, 2.0] {
            let v0 = wall_velocity_1d(0.0, t, &packet, BoundaryCondition::Neumann, &c).unwrap();
            let speed = wall_velocity_1d(1.0, t, &packet, BoundaryCondition::Neumann, &c).unwrap();
            worst_v = worst_v.max(v0.abs() / speed.abs().max(1e-3));
            let psi0 = wall_packet_psi(0.0, t, &packet, BoundaryCondition::Dirichlet, &c)
                .unwrap()
                .norm();
            let scale =
                wall_packet_psi(packet.center, t, &packet, BoundaryCondition::Dirichlet, &c)
                    .unwrap()
                    .norm();
            worst_psi = worst_psi.max(psi0 / scale);
        }
        pass &= worst_v <= 1e-6 && worst_psi <= 1e-6;
        detail.push_str(&format!(
            "wall v_n/|v| = {worst_v:.1e}, |psi_D|/scale = {worst_psi:.1e}; "
        ));
    }

    // half-line propagator on both barrier faces
    {
        let x0 = Vec2::new(4.0, -4.0);
        let mut worst_kd = 0.0f64;
        let mut worst_vn = 0.0f64;
        for &x in &[-1.0, -3.0, -5.0] {
            for &y in &[1e-9, -1e-9] {
                for &t in &[0.3, 1.0] {
                    let p = Vec2::new(x, y);
                    let kd = halfline_propagator(p, x0, t, BoundaryCondition::Dirichlet, &c)
                        .unwrap()
                        .norm();
                    let free = pilotwave::freespace::free_propagator(p, x0, t, &c)
                        .unwrap()
                        .norm();
                    worst_kd = worst_kd.max(kd / free);
                    let v = halfline_propagator_velocity(p, x0, t, BoundaryCondition::Neumann, &c)
                        .unwrap();
                    worst_vn = worst_vn.max(v.y.abs() / v.norm());
                }
            }
        }
        pass &= worst_kd <= 1e-6 && worst_vn <= 1e-6;
        detail.push_str(&format!(
            "half-line |K_D|/|K_free| = {worst_kd:.1e}, v_n/|v| = {worst_vn:.1e}; "
        ));
    }

    // plane waves on the barrier
    {
        let k0 = 5.0;
        let mut worst_psi = 0.0f64;
        let mut worst_vn = 0.0f64;
        for &theta0 in &[std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_3] {
            for &x in &[-0.7, -2.0, -4.5] {
                for &y in &[1e-9, -1e-9] {
                    let p = Vec2::new(x, y);
                    worst_psi = worst_psi.max(
                        planewave_psi(p, k0, theta0, BoundaryCondition::Dirichlet)
                            .unwrap()
                            .norm(),
                    );
                    let v =
                        planewave_velocity(p, k0, theta0, BoundaryCondition::Neumann, &c).unwrap();
                    worst_vn = worst_vn.max(v.y.abs() / v.norm());
                }
            }
        }
        // the scattering state has unit incident amplitude
        pass &= worst_psi <= 1e-6 && worst_vn <= 1e-6;
        detail.push_str(&format!(
            "plane wave |psi_D| = {worst_psi:.1e}, v_n/|v| = {worst_vn:.1e}"
        ));
    }

    report(3, "boundary-condition invariants", pass, started, &detail);
}

#[test]
fn criterion_04_far_field_asymptotics() {
    let started = Instant::now();
    let c = consts();
    let x0 = Vec2::new(4.0, -4.0); // r0 = 4 sqrt2, theta0 = -pi/4
    let t = 1.0;
    let r = 200.0;
    // the |u| >= 5 precondition excludes a strip of roughly 0.1 pi around
    // each optical boundary (+/- 3 pi/4 here); samples stay clear of it
    let directions = [
        0.87, 0.92, 0.97, // region I
        -0.60, -0.35, 0.0, 0.35, 0.60, // region II
        -0.97, -0.93, -0.88, // region III
    ];
    let mut worst = 0.0f64;
    for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
        for &frac in &directions {
            let theta = frac * std::f64::consts::PI;
            let p = Vec2::new(r * theta.cos(), r * theta.sin());
            let asym = farfield_velocity(p, x0, t, bc, &c).unwrap();
            let exact = halfline_propagator_velocity(p, x0, t, bc, &c).unwrap();
            worst = worst.max((asym - exact).norm() / exact.norm());
        }
    }
    let pass = worst <= 0.05;
    report(
        4,
        "far-field asymptotics",
        pass,
        started,
        &format!("max relative deviation over regions I/II/III = {worst:.2e} (<= 0.05)"),
    );
}

#[test]
fn criterion_05_equivariance() {
    let started = Instant::now();
    let c = consts();
    let m = 10_000;
    let mut detail = String::new();
    let mut pass = true;

    // free Gaussian packet
    {
        let packet = GaussianPacket2D::new(Vec2::ZERO, Vec2::new(1.0, 0.5), 1.0).unwrap();
        let field = FreePacketField { packet, consts: c };
        let psi2 = |p: Vec2, t: f64| {
            (free_gaussian_psi_1d(p.x, t, &packet.axis_x(), &c).unwrap()
                * free_gaussian_psi_1d(p.y, t, &packet.axis_y(), &c).unwrap())
            .norm_sqr()
        };
        let center = |t: f64| packet.center + packet.momentum * (t / c.mass);
        let spread = |t: f64| {
            let tau = c.hbar * t / (2.0 * c.mass);
            packet.width * (1.0 + tau * tau).sqrt()
        };
        let box_at = |t: f64| {
            let ctr = center(t);
            let s = 4.5 * spread(t);
            Rect::new(ctr.x - s, ctr.x + s, ctr.y - s, ctr.y + s)
        };
        let d0 = |p: Vec2| psi2(p, 0.05);
        let d1 = |p: Vec2| psi2(p, 0.5);
        let spec0 = DensitySpec {
            pdf: &d0,
            bounds: box_at(0.05),
        };
        let spec1 = DensitySpec {
            pdf: &d1,
            bounds: box_at(0.5),
        };
        let rep = equivariance_test(&field, &spec0, 0.05, &spec1, 0.5, m, 5e-3, 1001).unwrap();
        pass &= rep.ks_x <= 0.03 && rep.ks_y <= 0.03;
        detail.push_str(&format!("free KS = ({:.4}, {:.4}); ", rep.ks_x, rep.ks_y));
    }

    // wall packet, Neumann
    {
        let packet = WallPacket2D {
            along: GaussianPacket1D::new(-4.0, 2.0f64.sqrt(), 1.0).unwrap(),
            normal: WallPacket1D::new(4.0, -2.0, 1.0, &c).unwrap(),
        };
        let field = WallPacketField {
            packet,
            bc: BoundaryCondition::Neumann,
            consts: c,
        };
        let rho = |p: Vec2, t: f64| {
            if p.y < 0.0 {
                return 0.0;
            }
            (free_gaussian_psi_1d(p.x, t, &packet.along, &c).unwrap()
                * wall_packet_psi(p.y, t, &packet.normal, BoundaryCondition::Neumann, &c).unwrap())
            .norm_sqr()
        };
        let d0 = |p: Vec2| rho(p, 0.05);
        let d1 = |p: Vec2| rho(p, 0.5);
        let spec0 = DensitySpec {
            pdf: &d0,
            bounds: Rect::new(-9.0, 1.0, 0.0, 9.0),
        };
        let spec1 = DensitySpec {
            pdf: &d1,
            bounds: Rect::new(-9.5, 2.5, 0.0, 9.5),
        };
        let rep = equivariance_test(&field, &spec0, 0.05, &spec1, 0.5, m, 5e-3, 2002).unwrap();
        pass &= rep.ks_x <= 0.03 && rep.ks_y <= 0.03;
        detail.push_str(&format!("wall KS = ({:.4}, {:.4}); ", rep.ks_x, rep.ks_y));
    }

    // half-line packet (quadrature field), Neumann
    {
        let packet = GaussianPacket2D::new(Vec2::new(4.0, -4.0), Vec2::ZERO, 0.1).unwrap();
        let field = HalflinePacketField::new(
            packet,
            BoundaryCondition::Neumann,
            c,
            OrderPolicy::Fixed(24),
        )
        .unwrap();
        // resolution spot-check of the fixed order against a much finer rule
        let check = HalflinePacketField::new(
            packet,
            BoundaryCondition::Neumann,
            c,
            OrderPolicy::Fixed(96),
        )
        .unwrap();
        let mut worst_rule = 0.0f64;
        for &(dx, dy, t) in &[
            (0.2, 0.1, 0.05),
            (-0.4, 0.5, 0.1),
            (1.0, -0.6, 0.2),
            (2.5, 1.5, 0.35),
            (-3.0, 2.0, 0.5),
            (5.0, -2.0, 0.5),
        ] {
            let p = Vec2::new(4.0 + dx, -4.0 + dy);
            let a = field.psi(p, t).unwrap();
            let b = check.psi(p, t).unwrap();
            worst_rule = worst_rule.max((a - b).norm() / b.norm());
        }
        pass &= worst_rule <= 2e-2;
        let d0 = |p: Vec2| field.psi(p, 0.05).map(|v| v.norm_sqr()).unwrap_or(0.0);
        let d1 = |p: Vec2| field.psi(p, 0.5).map(|v| v.norm_sqr()).unwrap_or(0.0);
        let spec0 = DensitySpec {
            pdf: &d0,
            bounds: Rect::new(1.9, 6.1, -6.1, -1.9),
        };
        let spec1 = DensitySpec {
            pdf: &d1,
            bounds: Rect::new(-11.0, 19.0, -19.0, 11.0),
        };
        let rep = equivariance_test(&field, &spec0, 0.05, &spec1, 0.5, m, 0.015, 3003).unwrap();
        pass &= rep.ks_x <= 0.05 && rep.ks_y <= 0.05;
        detail.push_str(&format!(
            "half-line KS = ({:.4}, {:.4}) [rule check {worst_rule:.1e}, dropped {}]",
            rep.ks_x, rep.ks_y, rep.dropped
        ));
    }

    report(5, "equivariance", pass, started, &detail);
}

#[test]
fn criterion_06_narrow_packet_benchmark() {
    let started = Instant::now();
    let c = consts();
    let source = Vec2::new(4.0, -4.0);
    let packet = GaussianPacket2D::new(source, Vec2::ZERO, 0.01).unwrap();
    let packet_field = HalflinePacketField::new(
        packet,
        BoundaryCondition::Neumann,
        c,
        OrderPolicy::Fixed(16),
    )
    .unwrap();
    {
        let check = HalflinePacketField::new(
            packet,
            BoundaryCondition::Neumann,
            c,
            OrderPolicy::Fixed(48),
        )
        .unwrap();
        let p = Vec2::new(3.5, -3.0);
        let a = packet_field.psi(p, 0.3).unwrap();
        let b = check.psi(p, 0.3).unwrap();
        assert!(
            (a - b).norm() / b.norm() < 1e-4,
            "order-16 rule under-resolves"
        );
    }
    let prop_field = HalflinePropagatorField {
        source,
        bc: BoundaryCondition::Neumann,
        consts: c,
    };
    let circle = InitialCircle::new(source, 0.02, 8, 0.01).unwrap();
    // Near the release time the diffraction fringes of both fields oscillate
    // in time with phase ~ 2 m r r0 / (hbar t), far faster than any step a
    // full-range run could afford; an unresolved oscillatory velocity turns
    // into a spurious random walk. Resolve the early window with a fine step,
    // then continue coarsely (identical grids for both fields, so the
    // comparison stays pointwise at shared times).
    let two_phase = |field: &dyn VelocityField, seed: Vec2| -> Vec<(f64, Vec2)> {
        let fine = integrate(seed, 0.01, 0.2, 1e-5, &field, StepGuard::default()).unwrap();
        assert_eq!(fine.status, TrajectoryStatus::Completed);
        let coarse = integrate(
            fine.last_position().unwrap(),
            0.2,
            1.0,
            1e-3,
            &field,
            StepGuard::default(),
        )
        .unwrap();
        assert_eq!(coarse.status, TrajectoryStatus::Completed);
        let mut samples = fine.samples;
        samples.extend_from_slice(&coarse.samples[1..]);
        samples
    };
    let mut worst = 0.0f64;
    for seed in circle_seeds(&circle) {
        let a = two_phase(&packet_field, seed);
        let b = two_phase(&prop_field, seed);
        let path: f64 = b.windows(2).map(|w| (w[1].1 - w[0].1).norm()).sum();
        let max_dev = a
            .iter()
            .zip(&b)
            .map(|(&(_, pa), &(_, pb))| (pa - pb).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(max_dev / path);
    }
    let pass = worst <= 0.02;
    report(
        6,
        "narrow-packet benchmark",
        pass,
        started,
        &format!(
            "max pointwise deviation = {:.2}% of path length (<= 2%)",
            100.0 * worst
        ),
    );
}

#[test]
fn criterion_07_dirichlet_repulsion() {
    let started = Instant::now();
    let c = consts();
    let center = Vec2::new(4.0, -4.0);
    let packet = GaussianPacket2D::new(center, Vec2::ZERO, 0.1).unwrap();
    let circle = InitialCircle::new(center, 0.02, 16, 0.01).unwrap();
    let seeds = circle_seeds(&circle);
    let mut medians = Vec::new();
    let mut closest = Vec::new();
    for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
        // The early window needs a high rule order (fast mirror-image
        // oscillation at small t); past t = 0.1 a light rule resolves the
        // integrand, which is what makes running to t = 3.5 (where the
        // ensemble genuinely engages the barrier) affordable.
        let field_fine = HalflinePacketField::new(packet, bc, c, OrderPolicy::Fixed(96)).unwrap();
        let field_coarse = HalflinePacketField::new(packet, bc, c, OrderPolicy::Fixed(24)).unwrap();
        {
            let check = HalflinePacketField::new(packet, bc, c, OrderPolicy::Fixed(192)).unwrap();
            let a = field_fine.psi(Vec2::new(3.8, -3.7), 0.05).unwrap();
            let b = check.psi(Vec2::new(3.8, -3.7), 0.05).unwrap();
            assert!(
                (a - b).norm() / b.norm() < 1e-3,
                "order-96 rule under-resolves"
            );
            for &(p, t) in &[
                (Vec2::new(3.5, -3.2), 0.1),
                (Vec2::new(2.0, -1.0), 0.8),
                (Vec2::new(-2.0, -3.0), 2.0),
            ] {
                let a = field_coarse.psi(p, t).unwrap();
                let b = check.psi(p, t).unwrap();
                assert!(
                    (a - b).norm() / b.norm() < 2e-2,
                    "order-24 rule under-resolves the late window at {p:?}, t = {t}"
                );
            }
        }
        let early =
            integrate_ensemble(&seeds, 0.01, 0.1, 2.5e-3, &field_fine, StepGuard::default())
                .unwrap();
        let late_seeds: Vec<Vec2> = early.iter().map(|t| t.last_position().unwrap()).collect();
        let late = integrate_ensemble(
            &late_seeds,
            0.1,
            3.5,
            5e-3,
            &field_coarse,
            StepGuard::default(),
        )
        .unwrap();
        // ensemble minimum distance to the barrier at each shared time
        // (members that terminated early contribute while they are alive),
        // then the median of that curve over the run
        let mut min_curve = Vec::new();
        let max_len = |ts: &[pilotwave::dynamics::Trajectory]| {
            ts.iter().map(|t| t.samples.len()).max().unwrap()
        };
        for phase in [&early, &late] {
            for k in 0..max_len(phase) {
                let m = phase
                    .iter()
                    .filter_map(|t| t.samples.get(k).map(|&(_, p)| barrier_distance(p)))
                    .fold(f64::MAX, f64::min);
                min_curve.push(m);
            }
        }
        let mut sorted = min_curve.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(sorted[sorted.len() / 2]);
        closest.push(sorted[0]);
    }
    let pass = medians[1] > medians[0] && closest[1] > closest[0];
    report(
        7,
        "Dirichlet repulsion",
        pass,
        started,
        &format!(
            "median ensemble-min barrier distance: Neumann {:.4}, Dirichlet {:.4}; closest approach {:.4} vs {:.4}",
            medians[0], medians[1], closest[0], closest[1]
        ),
    );
}

#[test]
fn criterion_08_plane_wave_node_circulation() {
    let started = Instant::now();
    let c = consts();
    // theta0 = -pi/2 sends the k0 = 5 wave toward +y; in this convention the
    // standing-wave nodes sit below the barrier, with a deep node next to
    // (-1.5, -4.7). (theta0 = +pi/2 gives the exact mirror pattern.)
    let field = PlaneWaveField {
        k0: 5.0,
        theta0: -std::f64::consts::FRAC_PI_2,
        bc: BoundaryCondition::Neumann,
        consts: c,
    };
    let spec = DensityGridSpec {
        bounds: Rect::new(-2.0, -1.0, -5.2, -4.2),
        nx: 141,
        ny: 141,
        time: 1.0,
    };
    let grid = sample_density(&field, &spec, None).unwrap();
    let mut best = (f64::MAX, 0usize, 0usize);
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            let v = grid[iy * spec.nx + ix];
            if v < best.0 {
                best = (v, ix, iy);
            }
        }
    }
    let node = Vec2::new(
        spec.bounds.x_lo + (spec.bounds.x_hi - spec.bounds.x_lo) * best.1 as f64 / 140.0,
        spec.bounds.y_lo + (spec.bounds.y_hi - spec.bounds.y_lo) * best.2 as f64 / 140.0,
    );
    let interior = best.1 > 0 && best.1 < 140 && best.2 > 0 && best.2 < 140;
    let near_expected = (node - Vec2::new(-1.5, -4.7)).norm() <= 0.3;

    // a particle seeded next to the node should wind around it and
    // re-approach its start
    let seed = node + Vec2::new(0.1, 0.0);
    let mut pos = seed;
    let mut t = 0.1;
    let h = 1e-4;
    let mut winding = 0.0f64;
    let mut prev_angle = (pos - node).angle();
    let mut closed = false;
    let mut min_return = f64::MAX;
    while t < 6.0 {
        pos = match pilotwave::dynamics::rk4_step(pos, t, h, &field) {
            Ok(p) => p,
            Err(e) => panic!("node orbit integration failed: {e:?}"),
        };
        t += h;
        let angle = (pos - node).angle();
        let mut d = angle - prev_angle;
        if d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        } else if d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        winding += d;
        prev_angle = angle;
        if winding.abs() >= 2.0 * std::f64::consts::PI {
            min_return = min_return.min((pos - seed).norm());
            if min_return <= 0.05 {
                closed = true;
                break;
            }
            if winding.abs() >= 4.0 * std::f64::consts::PI {
                break;
            }
        }
    }
    let pass = interior && near_expected && closed;
    report(
        8,
        "plane-wave node circulation",
        pass,
        started,
        &format!(
            "|psi| minimum {:.3e} at ({:.3}, {:.3}) [interior: {interior}], orbit closed: {closed} (winding {:.2} turns, return distance {:.3})",
            best.0,
            node.x,
            node.y,
            winding / (2.0 * std::f64::consts::PI),
            min_return
        ),
    );
}

#[test]
fn criterion_09_no_wall_crossing() {
    let started = Instant::now();
    let c = consts();
    let mut all_positive = true;
    let mut total = 0usize;
    let mut completed = 0usize;
    for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
        let packet = WallPacket2D {
            along: GaussianPacket1D::new(-4.0, 2.0f64.sqrt(), 1.0).unwrap(),
            normal: WallPacket1D::new(4.0, -2.0, 1.0, &c).unwrap(),
        };
        let field = WallPacketField {
            packet,
            bc,
            consts: c,
        };
        let rho = |p: Vec2| {
            if p.y <= 0.0 {
                return 0.0;
            }
            (free_gaussian_psi_1d(p.x, 0.01, &packet.along, &c).unwrap()
                * wall_packet_psi(p.y, 0.01, &packet.normal, bc, &c).unwrap())
            .norm_sqr()
        };
        let spec = DensitySpec {
            pdf: &rho,
            bounds: Rect::new(-9.0, 1.0, 0.0, 9.0),
        };
        let stream = match bc {
            BoundaryCondition::Neumann => 904,
            BoundaryCondition::Dirichlet => 905,
        };
        let (seeds, _) = pilotwave::dynamics::rejection_sample(&spec, 500, stream).unwrap();
        let trajs =
            integrate_ensemble(&seeds, 0.01, 2.0, 2e-3, &field, StepGuard::default()).unwrap();
        for traj in &trajs {
            total += 1;
            if traj.status == TrajectoryStatus::Completed {
                completed += 1;
            }
            for &(_, p) in &traj.samples {
                if p.y <= 0.0 {
                    all_positive = false;
                }
            }
        }
    }
    let pass = all_positive && total == 1000;
    report(
        9,
        "no wall crossing",
        pass,
        started,
        &format!("{total} trajectories ({completed} completed), all samples y > 0: {all_positive}"),
    );
}

#[test]
fn criterion_10_rk4_order() {
    let started = Instant::now();
    let c = consts();
    let packet = GaussianPacket2D::new(Vec2::new(1.0, -0.5), Vec2::new(1.0, -0.5), 0.2).unwrap();
    let field = FreePacketField { packet, consts: c };
    let seed = Vec2::new(1.35, -0.15);
    let (t0, t1) = (0.05, 0.45);
    let exact = free_packet_trajectory(seed, t0, t1, &packet, &c);
    let mut errors = Vec::new();
    for &h in &[4e-3, 2e-3, 1e-3] {
        let traj = integrate(seed, t0, t1, h, &field, StepGuard::default()).unwrap();
        let (t_last, p_last) = *traj.samples.last().unwrap();
        assert!((t_last - t1).abs() < 1e-12);
        errors.push((p_last - exact).norm());
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    let pass = (8.0..=32.0).contains(&r1) && (8.0..=32.0).contains(&r2) && errors[2] > 1e-15;
    report(
        10,
        "RK4 order",
        pass,
        started,
        &format!(
            "global errors {:.2e} / {:.2e} / {:.2e}, ratios {r1:.1} and {r2:.1} (expect 16 within x2)",
            errors[0], errors[1], errors[2]
        ),
    );
}

// keep the far-field helper honest: the radial law of region I (an invariant
// stated separately from criterion 4)
#[test]
fn region_i_radial_law_at_r200() {
    let c = consts();
    let x0 = Vec2::new(4.0, -4.0);
    let mut rng = TestRng::new(77);
    for _ in 0..20 {
        let theta = rng.range(0.78, 0.99) * std::f64::consts::PI;
        let p = Vec2::new(200.0 * theta.cos(), 200.0 * theta.sin());
        let args = DiffractionArguments::new(
            PolarPoint::from_cartesian(p),
            PolarPoint::from_cartesian(x0),
            1.0,
            &c,
        );
        if args.u1.abs() < 5.0 || args.u2.abs() < 5.0 {
            continue;
        }
        let v = halfline_propagator_velocity(p, x0, 1.0, BoundaryCondition::Neumann, &c).unwrap();
        let radial = p * ((p.norm() + x0.norm()) / p.norm());
        assert!(
            (v - radial).norm() / v.norm() <= 0.05,
            "theta = {theta:.3}: off the radial law"
        );
    }
}
