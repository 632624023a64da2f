//! C ABI over the pilotwave library.
//!
//! Fields and trajectories are opaque handles created and destroyed through
//! this interface; every fallible call returns a [`PwStatus`] code and writes
//! results through out-pointers. All functions are panic-safe: a caught
//! panic reports `PW_STATUS_INTERNAL_PANIC` instead of unwinding across the
//! boundary.

// negated comparisons like `!(k0 > 0.0)` deliberately reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use pilotwave::dynamics::{integrate, QuantumField, StepGuard, Trajectory, TrajectoryStatus};
use pilotwave::freespace::{
    FreePacketField, FreePropagatorField, GaussianPacket1D, GaussianPacket2D,
};
use pilotwave::halfline::{HalflinePropagatorField, PlaneWaveField};
use pilotwave::quadrature::{HalflinePacketField, OrderPolicy};
use pilotwave::runner::{run_scenario, RunOptions};
use pilotwave::scenario::Scenario;
use pilotwave::wall::{WallPacket1D, WallPacket2D, WallPacketField, WallPropagatorField};
use pilotwave::{BoundaryCondition, Error, PhysicalConstants, Vec2};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    DomainError = 4,
    NodeSingularity = 5,
    SingularPoint = 6,
    OutOfAsymptoticRange = 7,
    NotConverged = 8,
    ConfigError = 9,
    IoError = 10,
    InvalidUtf8 = 11,
    IndexOutOfBounds = 12,
    InternalPanic = 13,
}

impl From<&Error> for PwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => PwStatus::InvalidArgument,
            Error::OutOfRange(_) => PwStatus::OutOfRange,
            Error::Domain(_) => PwStatus::DomainError,
            Error::NodeSingularity { .. } => PwStatus::NodeSingularity,
            Error::SingularPoint(_) => PwStatus::SingularPoint,
            Error::OutOfAsymptoticRange(_) => PwStatus::OutOfAsymptoticRange,
            Error::NotConverged { .. } => PwStatus::NotConverged,
            Error::Config(_) => PwStatus::ConfigError,
            Error::Io(_) => PwStatus::IoError,
        }
    }
}

/// Boundary condition on the obstacle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwBoundaryCondition {
    Neumann = 0,
    Dirichlet = 1,
}

impl From<PwBoundaryCondition> for BoundaryCondition {
    fn from(bc: PwBoundaryCondition) -> Self {
        match bc {
            PwBoundaryCondition::Neumann => BoundaryCondition::Neumann,
            PwBoundaryCondition::Dirichlet => BoundaryCondition::Dirichlet,
        }
    }
}

/// Why a trajectory ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwTrajectoryStatus {
    Completed = 0,
    NodeEncounter = 1,
    LeftDomain = 2,
    StepFailure = 3,
}

impl From<TrajectoryStatus> for PwTrajectoryStatus {
    fn from(s: TrajectoryStatus) -> Self {
        match s {
            TrajectoryStatus::Completed => PwTrajectoryStatus::Completed,
            TrajectoryStatus::NodeEncounter => PwTrajectoryStatus::NodeEncounter,
            TrajectoryStatus::LeftDomain => PwTrajectoryStatus::LeftDomain,
            TrajectoryStatus::StepFailure => PwTrajectoryStatus::StepFailure,
        }
    }
}

/// Opaque guidance-field handle.
pub struct PwField {
    inner: Box<dyn QuantumField + Send + Sync>,
}

/// Opaque trajectory handle.
pub struct PwTrajectory {
    inner: Trajectory,
}

fn constants(hbar: f64, mass: f64) -> Result<PhysicalConstants, Error> {
    PhysicalConstants::new(hbar, mass)
}

fn emit_field(
    out: *mut *mut PwField,
    build: impl FnOnce() -> Result<Box<dyn QuantumField + Send + Sync>, Error> + std::panic::UnwindSafe,
) -> PwStatus {
    if out.is_null() {
        return PwStatus::NullPointer;
    }
    match catch_unwind(build) {
        Ok(Ok(inner)) => {
            unsafe { *out = Box::into_raw(Box::new(PwField { inner })) };
            PwStatus::Ok
        }
        Ok(Err(e)) => PwStatus::from(&e),
        Err(_) => PwStatus::InternalPanic,
    }
}

/// Free Gaussian packet field.
#[no_mangle]
pub extern "C" fn pw_field_new_free_packet(
    center_x: f64,
    center_y: f64,
    momentum_x: f64,
    momentum_y: f64,
    sigma: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        let packet = GaussianPacket2D::new(
            Vec2::new(center_x, center_y),
            Vec2::new(momentum_x, momentum_y),
            sigma,
        )?;
        Ok(Box::new(FreePacketField {
            packet,
            consts: constants(hbar, mass)?,
        }))
    })
}

/// Free propagator (delta source) field; valid for t > 0.
#[no_mangle]
pub extern "C" fn pw_field_new_free_propagator(
    source_x: f64,
    source_y: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        Ok(Box::new(FreePropagatorField {
            source: Vec2::new(source_x, source_y),
            consts: constants(hbar, mass)?,
        }))
    })
}

/// Packet against the hard wall y = 0 (`center_y > 0`).
#[no_mangle]
pub extern "C" fn pw_field_new_wall_packet(
    center_x: f64,
    center_y: f64,
    momentum_x: f64,
    momentum_y: f64,
    sigma: f64,
    bc: PwBoundaryCondition,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        let consts = constants(hbar, mass)?;
        Ok(Box::new(WallPacketField {
            packet: WallPacket2D {
                along: GaussianPacket1D::new(center_x, momentum_x, sigma)?,
                normal: WallPacket1D::new(center_y, momentum_y, sigma, &consts)?,
            },
            bc: bc.into(),
            consts,
        }))
    })
}

/// Wall propagator field (`source_y > 0`); velocity ((x-x0)/t, y/t).
#[no_mangle]
pub extern "C" fn pw_field_new_wall_propagator(
    source_x: f64,
    source_y: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        if !(source_y > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "wall propagator source must sit in y > 0 (got {source_y})"
            )));
        }
        Ok(Box::new(WallPropagatorField {
            source: Vec2::new(source_x, source_y),
            consts: constants(hbar, mass)?,
        }))
    })
}

/// Half-line barrier propagator field (delta source).
#[no_mangle]
pub extern "C" fn pw_field_new_halfline_propagator(
    source_x: f64,
    source_y: f64,
    bc: PwBoundaryCondition,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        Ok(Box::new(HalflinePropagatorField {
            source: Vec2::new(source_x, source_y),
            bc: bc.into(),
            consts: constants(hbar, mass)?,
        }))
    })
}

/// Gaussian packet in the half-line geometry, synthesized by quadrature.
/// `order = 0` keeps the adaptive default (start 64, cap 256); a nonzero
/// order pins the tensor rule.
#[no_mangle]
pub extern "C" fn pw_field_new_halfline_packet(
    center_x: f64,
    center_y: f64,
    momentum_x: f64,
    momentum_y: f64,
    sigma: f64,
    bc: PwBoundaryCondition,
    order: usize,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        let packet = GaussianPacket2D::new(
            Vec2::new(center_x, center_y),
            Vec2::new(momentum_x, momentum_y),
            sigma,
        )?;
        let policy = if order == 0 {
            OrderPolicy::default()
        } else {
            OrderPolicy::Fixed(order)
        };
        Ok(Box::new(HalflinePacketField::new(
            packet,
            bc.into(),
            constants(hbar, mass)?,
            policy,
        )?))
    })
}

/// Stationary plane-wave scattering state with wave vector
/// `-k0 (cos theta0, sin theta0)`.
#[no_mangle]
pub extern "C" fn pw_field_new_plane_wave(
    k0: f64,
    theta0: f64,
    bc: PwBoundaryCondition,
    hbar: f64,
    mass: f64,
    out: *mut *mut PwField,
) -> PwStatus {
    emit_field(out, move || {
        if !(k0 > 0.0) || !k0.is_finite() || !theta0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "plane wave needs finite k0 > 0 (got k0 = {k0}, theta0 = {theta0})"
            )));
        }
        Ok(Box::new(PlaneWaveField {
            k0,
            theta0,
            bc: bc.into(),
            consts: constants(hbar, mass)?,
        }))
    })
}

/// Release a field handle. Passing NULL is a no-op.
///
/// # Safety
/// `field` must be a pointer previously returned by one of the
/// `pw_field_new_*` constructors and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_field_free(field: *mut PwField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Guidance velocity at (x, y) and time t.
///
/// # Safety
/// `field` must be a live handle; `vx` and `vy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_field_velocity(
    field: *const PwField,
    x: f64,
    y: f64,
    t: f64,
    vx: *mut f64,
    vy: *mut f64,
) -> PwStatus {
    if field.is_null() || vx.is_null() || vy.is_null() {
        return PwStatus::NullPointer;
    }
    let field = unsafe { &*field };
    match catch_unwind(AssertUnwindSafe(|| {
        field.inner.velocity(Vec2::new(x, y), t)
    })) {
        Ok(Ok(v)) => {
            unsafe {
                *vx = v.x;
                *vy = v.y;
            }
            PwStatus::Ok
        }
        Ok(Err(e)) => PwStatus::from(&e),
        Err(_) => PwStatus::InternalPanic,
    }
}

/// Complex amplitude of the field's wave function at (x, y) and time t.
///
/// # Safety
/// `field` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_field_psi(
    field: *const PwField,
    x: f64,
    y: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> PwStatus {
    if field.is_null() || re.is_null() || im.is_null() {
        return PwStatus::NullPointer;
    }
    let field = unsafe { &*field };
    match catch_unwind(AssertUnwindSafe(|| field.inner.psi(Vec2::new(x, y), t))) {
        Ok(Ok(v)) => {
            unsafe {
                *re = v.re;
                *im = v.im;
            }
            PwStatus::Ok
        }
        Ok(Err(e)) => PwStatus::from(&e),
        Err(_) => PwStatus::InternalPanic,
    }
}

/// Integrate one trajectory with fixed-step RK4 (step-halving guard near
/// singular points). On success the caller owns the returned trajectory.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_field_integrate(
    field: *const PwField,
    seed_x: f64,
    seed_y: f64,
    t_init: f64,
    t_end: f64,
    h: f64,
    out: *mut *mut PwTrajectory,
) -> PwStatus {
    if field.is_null() || out.is_null() {
        return PwStatus::NullPointer;
    }
    let field = unsafe { &*field };
    let job = || {
        integrate(
            Vec2::new(seed_x, seed_y),
            t_init,
            t_end,
            h,
            &field.inner,
            StepGuard::default(),
        )
    };
    match catch_unwind(AssertUnwindSafe(job)) {
        Ok(Ok(inner)) => {
            unsafe { *out = Box::into_raw(Box::new(PwTrajectory { inner })) };
            PwStatus::Ok
        }
        Ok(Err(e)) => PwStatus::from(&e),
        Err(_) => PwStatus::InternalPanic,
    }
}

/// Number of (t, x, y) samples in the trajectory.
///
/// # Safety
/// `trajectory` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pw_trajectory_len(trajectory: *const PwTrajectory) -> usize {
    if trajectory.is_null() {
        return 0;
    }
    unsafe { &*trajectory }.inner.samples.len()
}

/// Termination status of the trajectory.
///
/// # Safety
/// `trajectory` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pw_trajectory_status(
    trajectory: *const PwTrajectory,
) -> PwTrajectoryStatus {
    if trajectory.is_null() {
        return PwTrajectoryStatus::StepFailure;
    }
    unsafe { &*trajectory }.inner.status.into()
}

/// Fetch sample `index`.
///
/// # Safety
/// `trajectory` must be a live handle; `t`, `x`, `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_trajectory_sample(
    trajectory: *const PwTrajectory,
    index: usize,
    t: *mut f64,
    x: *mut f64,
    y: *mut f64,
) -> PwStatus {
    if trajectory.is_null() || t.is_null() || x.is_null() || y.is_null() {
        return PwStatus::NullPointer;
    }
    let traj = unsafe { &*trajectory };
    match traj.inner.samples.get(index) {
        Some(&(tt, p)) => {
            unsafe {
                *t = tt;
                *x = p.x;
                *y = p.y;
            }
            PwStatus::Ok
        }
        None => PwStatus::IndexOutOfBounds,
    }
}

/// Release a trajectory handle. Passing NULL is a no-op.
///
/// # Safety
/// `trajectory` must be a pointer previously returned by
/// [`pw_field_integrate`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pw_trajectory_free(trajectory: *mut PwTrajectory) {
    if !trajectory.is_null() {
        drop(unsafe { Box::from_raw(trajectory) });
    }
}

/// Run a scenario file end to end (trajectory file plus optional density
/// grid) with outputs under `out_dir`. `threads = 0` keeps the default pool.
///
/// # Safety
/// `scenario_path` and `out_dir` must be valid nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn pw_run_scenario_file(
    scenario_path: *const c_char,
    out_dir: *const c_char,
    threads: usize,
) -> PwStatus {
    if scenario_path.is_null() || out_dir.is_null() {
        return PwStatus::NullPointer;
    }
    let path = match unsafe { CStr::from_ptr(scenario_path) }.to_str() {
        Ok(s) => s.to_string(),
        Err(_) => return PwStatus::InvalidUtf8,
    };
    let out = match unsafe { CStr::from_ptr(out_dir) }.to_str() {
        Ok(s) => PathBuf::from(s),
        Err(_) => return PwStatus::InvalidUtf8,
    };
    let job = move || -> Result<(), Error> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let scenario = Scenario::parse(&text)?;
        let opts = RunOptions {
            out_dir: out,
            threads: if threads == 0 { None } else { Some(threads) },
            h_override: None,
            order_override: None,
        };
        run_scenario(&scenario, &opts)?;
        Ok(())
    };
    match catch_unwind(AssertUnwindSafe(job)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(e)) => PwStatus::from(&e),
        Err(_) => PwStatus::InternalPanic,
    }
}

/// Static name of a status code (never NULL).
#[no_mangle]
pub extern "C" fn pw_status_name(status: PwStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        PwStatus::Ok => b"ok\0",
        PwStatus::NullPointer => b"null pointer\0",
        PwStatus::InvalidArgument => b"invalid argument\0",
        PwStatus::OutOfRange => b"out of range\0",
        PwStatus::DomainError => b"domain error\0",
        PwStatus::NodeSingularity => b"node singularity\0",
        PwStatus::SingularPoint => b"singular point\0",
        PwStatus::OutOfAsymptoticRange => b"outside asymptotic regime\0",
        PwStatus::NotConverged => b"quadrature not converged\0",
        PwStatus::ConfigError => b"configuration error\0",
        PwStatus::IoError => b"i/o error\0",
        PwStatus::InvalidUtf8 => b"invalid utf-8\0",
        PwStatus::IndexOutOfBounds => b"index out of bounds\0",
        PwStatus::InternalPanic => b"internal panic\0",
    };
    name.as_ptr() as *const c_char
}
