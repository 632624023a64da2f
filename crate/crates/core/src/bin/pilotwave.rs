use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pilotwave::dynamics::{integrate, StepGuard, VelocityField};
use pilotwave::runner::{canned_scenarios, load_scenario, run_scenario, RunOptions};
use pilotwave::{BoundaryCondition, Error, PhysicalConstants, Vec2};

/// Guidance-field trajectories for a free planar particle with a half-line
/// barrier, a half-plane wall, or no obstacle.
#[derive(Parser)]
#[command(name = "pilotwave", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario's seed ensemble and write its output files.
    Run {
        /// Path to a scenario file, or the name of a canned scenario.
        scenario: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List the canned scenarios shipped with the binary.
    List,
    /// Evaluate only the |psi| grid of a scenario's density section.
    Density {
        /// Path to a scenario file, or the name of a canned scenario.
        scenario: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a condensed invariant suite and exit nonzero on any failure.
    Selftest,
}

#[derive(clap::Args)]
struct CommonOpts {
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads for ensembles and density rows (default: all cores;
    /// results are identical for any thread count).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the scenario's integration step.
    #[arg(long)]
    h: Option<f64>,
    /// Override the quadrature order (halfline_packet scenarios only).
    #[arg(long)]
    order: Option<usize>,
}

impl CommonOpts {
    fn to_run_options(&self) -> RunOptions {
        RunOptions {
            out_dir: self.out_dir.clone(),
            threads: self.threads,
            h_override: self.h,
            order_override: self.order,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { scenario, opts } => {
            let s = load_scenario(&scenario)?;
            let report = run_scenario(&s, &opts.to_run_options())?;
            println!("{}", report.summary());
            Ok(())
        }
        Command::List => {
            for (name, text) in canned_scenarios() {
                let first_comment = text
                    .lines()
                    .find_map(|l| l.strip_prefix("# "))
                    .unwrap_or("");
                println!("{name:22} {first_comment}");
            }
            Ok(())
        }
        Command::Density { scenario, opts } => {
            let s = load_scenario(&scenario)?;
            let spec = s.density.ok_or_else(|| {
                Error::Config(format!("scenario `{}` has no density.* section", s.name))
            })?;
            let field = pilotwave::runner::build_field(&s)?;
            let path = pilotwave::runner::write_density(
                &s,
                field.as_ref(),
                &spec,
                &opts.to_run_options(),
            )?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Selftest => selftest(),
    }
}

fn selftest() -> Result<(), Error> {
    let mut failures = 0usize;
    let mut check = |name: &str, pass: bool, detail: String| {
        if pass {
            println!("selftest {name}: PASS ({detail})");
        } else {
            failures += 1;
            println!("selftest {name}: FAIL ({detail})");
        }
    };
    let consts = PhysicalConstants::default();

    // diffraction-function reflection identity across all evaluation branches
    {
        let mut worst = 0.0f64;
        for i in 0..400 {
            let u = -20.0 + 40.0 * i as f64 / 399.0;
            let lhs = pilotwave::specfun::fresnel_f(u)? + pilotwave::specfun::fresnel_f(-u)?;
            let (s, c) = (u * u).sin_cos();
            let expect = num_complex::Complex64::new(c, -s);
            worst = worst.max((lhs - expect).norm());
        }
        check(
            "fresnel-reflection",
            worst <= 1e-10,
            format!("max residual {worst:.2e}"),
        );
    }

    // Fresnel composition F(u) = e^{-iu^2}[1/2 + e^{-i pi/4}(C+iS)/sqrt2]
    {
        let mut worst = 0.0f64;
        for &u in &[-6.3, -2.7, -0.4, 1.1, 2.9, 4.4, 7.8] {
            let (cc, ss) = pilotwave::specfun::fresnel_cs(u)?;
            let inner = num_complex::Complex64::new(0.5 + 0.5 * (cc + ss), 0.5 * (ss - cc));
            let (s, c) = (u * u).sin_cos();
            let expect = num_complex::Complex64::new(c, -s) * inner;
            worst = worst.max((pilotwave::specfun::fresnel_f(u)? - expect).norm());
        }
        check(
            "fresnel-composition",
            worst <= 1e-9,
            format!("max residual {worst:.2e}"),
        );
    }

    // Gauss-Legendre degree exactness
    {
        let rule = pilotwave::quadrature::gauss_legendre(16, 0.0, 1.0)?;
        let integral = rule.integrate(|x| x.powi(31));
        let err = (integral - 1.0 / 32.0).abs();
        check(
            "gauss-legendre",
            err < 1e-14,
            format!("degree-31 error {err:.2e}"),
        );
    }

    // wall boundary behaviour
    {
        let packet = pilotwave::wall::WallPacket1D::new(4.0, -2.0, 1.0, &consts)?;
        let vz = pilotwave::wall::wall_velocity_1d(
            0.0,
            0.4,
            &packet,
            BoundaryCondition::Neumann,
            &consts,
        )?;
        let psi0 = pilotwave::wall::wall_packet_psi(
            0.0,
            0.7,
            &packet,
            BoundaryCondition::Dirichlet,
            &consts,
        )?;
        check(
            "wall-boundary",
            vz == 0.0 && psi0.norm() < 1e-14,
            format!("v_n(0) = {vz:.2e}, |psi_D(0)| = {:.2e}", psi0.norm()),
        );
    }

    // half-line propagator: Dirichlet seam suppression and Neumann axis
    // reduction to the free kernel
    {
        let x0 = Vec2::new(4.0, -4.0);
        let kd = pilotwave::halfline::halfline_propagator(
            Vec2::new(-3.0, 1e-9),
            x0,
            1.0,
            BoundaryCondition::Dirichlet,
            &consts,
        )?;
        let free = pilotwave::freespace::free_propagator(Vec2::new(-3.0, 1e-9), x0, 1.0, &consts)?;
        let kn = pilotwave::halfline::halfline_propagator(
            Vec2::new(5.0, 0.0),
            x0,
            0.8,
            BoundaryCondition::Neumann,
            &consts,
        )?;
        let free_axis =
            pilotwave::freespace::free_propagator(Vec2::new(5.0, 0.0), x0, 0.8, &consts)?;
        let seam_ok = kd.norm() <= 1e-6 * free.norm();
        let axis_ok = (kn - free_axis).norm() <= 1e-12 * free_axis.norm();
        check(
            "halfline-propagator",
            seam_ok && axis_ok,
            format!(
                "seam |K_D|/|K_free| = {:.2e}, axis residual {:.2e}",
                kd.norm() / free.norm(),
                (kn - free_axis).norm() / free_axis.norm()
            ),
        );
    }

    // plane-wave scattering state solves the Helmholtz equation
    {
        let k0 = 5.0;
        let theta0 = std::f64::consts::FRAC_PI_2;
        let p = Vec2::new(1.3, -2.1);
        let h = 1e-3;
        let psi = |v: Vec2| {
            pilotwave::halfline::planewave_psi(v, k0, theta0, BoundaryCondition::Neumann).unwrap()
        };
        let lap = (psi(Vec2::new(p.x + h, p.y))
            + psi(Vec2::new(p.x - h, p.y))
            + psi(Vec2::new(p.x, p.y + h))
            + psi(Vec2::new(p.x, p.y - h))
            - 4.0 * psi(p))
            / (h * h);
        let residual = (lap + k0 * k0 * psi(p)).norm() / (k0 * k0 * psi(p).norm());
        check(
            "helmholtz",
            residual <= 1e-4,
            format!("relative residual {residual:.2e}"),
        );
    }

    // RK4 on the ray field reproduces straight lines
    {
        struct Ray;
        impl VelocityField for Ray {
            fn velocity(&self, p: Vec2, t: f64) -> Result<Vec2, Error> {
                Ok(p / t)
            }
        }
        let traj = integrate(
            Vec2::new(0.3, 0.1),
            0.1,
            1.0,
            1e-2,
            &Ray,
            StepGuard::default(),
        )?;
        let end = traj.last_position().unwrap();
        let expect = Vec2::new(3.0, 1.0);
        let err = (end - expect).norm();
        check("rk4-ray", err < 1e-10, format!("endpoint error {err:.2e}"));
    }

    // far-field region classification
    {
        use pilotwave::halfline::{classify_region, FarFieldRegion};
        let t0 = -std::f64::consts::FRAC_PI_4;
        let ok = classify_region(0.9 * std::f64::consts::PI, t0)? == FarFieldRegion::I
            && classify_region(0.0, t0)? == FarFieldRegion::II
            && classify_region(-0.9 * std::f64::consts::PI, t0)? == FarFieldRegion::III;
        check("region-classification", ok, "I/II/III samples".to_string());
    }

    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "selftest: {failures} check(s) failed"
        )))
    }
}
