//! C ABI over the qlm toolkit.
//!
//! Objects are opaque handles created by `*_new` and released by the
//! matching `*_free`. Every fallible call returns a `QlmStatus`; on failure
//! `qlm_last_error_message` describes it (thread-local, valid until the next
//! failing call on the same thread).

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qlm::error::QlmError;
use qlm::mass::{mean_curvature_mass, MassSurface, CONVERGENCE_BANDS};
use qlm::spacetime::SpacetimeModel;
use qlm::sphere::SphereGrid;
use qlm::spinor::GammaRep;
use qlm::surface::SurfaceFamily;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    Parameter = 3,
    Unknown = 4,
    Domain = 5,
    Geometry = 6,
    Frame = 7,
    NonConvex = 8,
    NotAxisymmetric = 9,
    NonEmbeddable = 10,
    Convexity = 11,
    Resolution = 12,
    Flag = 13,
    Config = 14,
    Io = 15,
    BufferTooSmall = 16,
    Panic = 17,
}

impl From<&QlmError> for QlmStatus {
    fn from(e: &QlmError) -> Self {
        match e {
            QlmError::Parameter { .. } => QlmStatus::Parameter,
            QlmError::Unknown { .. } => QlmStatus::Unknown,
            QlmError::Domain { .. } => QlmStatus::Domain,
            QlmError::Geometry(_) => QlmStatus::Geometry,
            QlmError::Frame { .. } => QlmStatus::Frame,
            QlmError::NonConvex { .. } => QlmStatus::NonConvex,
            QlmError::NotAxisymmetric { .. } => QlmStatus::NotAxisymmetric,
            QlmError::NonEmbeddable { .. } => QlmStatus::NonEmbeddable,
            QlmError::Convexity { .. } => QlmStatus::Convexity,
            QlmError::Resolution(_) => QlmStatus::Resolution,
            QlmError::Flag { .. } => QlmStatus::Flag,
            QlmError::Config(_) => QlmStatus::Config,
            QlmError::Io(_) => QlmStatus::Io,
        }
    }
}

/// Energy summary of one surface.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QlmEnergy {
    pub e: f64,
    pub area: f64,
    pub m_irr: f64,
    pub int_norm_h: f64,
    pub int_h_flat: f64,
}

/// Residuals of the integral identities.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QlmResiduals {
    pub theorem1: f64,
    pub theorem1_relative: f64,
    pub pairing_pointwise: f64,
    pub pairing_difference: f64,
}

pub struct QlmSpacetime(SpacetimeModel);
pub struct QlmSurface(SurfaceFamily);
pub struct QlmMassSurface(MassSurface);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: QlmStatus, msg: &str) -> QlmStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), QlmStatus>) -> QlmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QlmStatus::Panic, "internal panic"),
    }
}

fn lift(e: QlmError) -> QlmStatus {
    fail(QlmStatus::from(&e), &e.to_string())
}

unsafe fn string<'a>(s: *const c_char, what: &str) -> Result<&'a str, QlmStatus> {
    if s.is_null() {
        return Err(fail(QlmStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(QlmStatus::InvalidString, &format!("{what} is not UTF-8")))
}

unsafe fn params(keys: *const *const c_char, values: *const f64, n: usize) -> Result<BTreeMap<String, f64>, QlmStatus> {
    let mut out = BTreeMap::new();
    if n == 0 {
        return Ok(out);
    }
    if keys.is_null() || values.is_null() {
        return Err(fail(QlmStatus::NullPointer, "parameter arrays are null"));
    }
    for i in 0..n {
        out.insert(string(*keys.add(i), "parameter key")?.to_string(), *values.add(i));
    }
    Ok(out)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, QlmStatus> {
    p.as_ref().ok_or_else(|| fail(QlmStatus::NullPointer, &format!("{what} handle is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, QlmStatus> {
    p.as_mut().ok_or_else(|| fail(QlmStatus::NullPointer, &format!("{what} output pointer is null")))
}

/// Message of the last failure on this thread; empty if none.
#[no_mangle]
pub extern "C" fn qlm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qlm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Look up a spacetime by name with `n` key/value parameters.
///
/// # Safety
/// `name` and the `n` keys must be NUL-terminated strings, `values` must hold
/// `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlm_spacetime_new(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut *mut QlmSpacetime,
) -> QlmStatus {
    guard(|| {
        let slot = out_ptr(out, "spacetime")?;
        *slot = ptr::null_mut();
        let m = SpacetimeModel::lookup(string(name, "spacetime name")?, &params(keys, values, n)?).map_err(lift)?;
        *slot = Box::into_raw(Box::new(QlmSpacetime(m)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `qlm_spacetime_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlm_spacetime_free(p: *mut QlmSpacetime) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Look up a catalog surface by name with `n` key/value parameters.
///
/// # Safety
/// As for `qlm_spacetime_new`.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_new(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut *mut QlmSurface,
) -> QlmStatus {
    guard(|| {
        let slot = out_ptr(out, "surface")?;
        *slot = ptr::null_mut();
        let f = SurfaceFamily::lookup(string(name, "surface name")?, &params(keys, values, n)?).map_err(lift)?;
        *slot = Box::into_raw(Box::new(QlmSurface(f)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `qlm_surface_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_free(p: *mut QlmSurface) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Build the geometry, embedding and flat comparison data of a surface at
/// band limit `band_limit`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_new(
    spacetime: *const QlmSpacetime,
    surface: *const QlmSurface,
    band_limit: usize,
    out: *mut *mut QlmMassSurface,
) -> QlmStatus {
    guard(|| {
        let slot = out_ptr(out, "mass surface")?;
        *slot = ptr::null_mut();
        let (m, f) = (handle(spacetime, "spacetime")?, handle(surface, "surface")?);
        let grid = SphereGrid::new(band_limit).map_err(lift)?;
        let s = MassSurface::new(&m.0, &f.0, grid).map_err(lift)?;
        *slot = Box::into_raw(Box::new(QlmMassSurface(s)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `qlm_mass_surface_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_free(p: *mut QlmMassSurface) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `s` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_energy(s: *const QlmMassSurface, out: *mut QlmEnergy) -> QlmStatus {
    guard(|| {
        let e = handle(s, "mass surface")?.0.energy();
        *out_ptr(out, "energy")? =
            QlmEnergy { e: e.e, area: e.area, m_irr: e.m_irr, int_norm_h: e.int_norm_h, int_h_flat: e.int_h_flat };
        Ok(())
    })
}

/// # Safety
/// `s` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_residuals(s: *const QlmMassSurface, out: *mut QlmResiduals) -> QlmStatus {
    guard(|| {
        let s = &handle(s, "mass surface")?.0;
        let slot = out_ptr(out, "residuals")?;
        let t = s.theorem1(&GammaRep::standard()).map_err(lift)?;
        let h = s.hamiltonian();
        *slot = QlmResiduals {
            theorem1: t.residual,
            theorem1_relative: t.relative_residual,
            pairing_pointwise: h.pointwise_residual,
            pairing_difference: h.difference - t.eight_pi_e,
        };
        Ok(())
    })
}

/// Number of quadrature nodes of the surface grid.
///
/// # Safety
/// `s` must be live or null (null gives 0).
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_node_count(s: *const QlmMassSurface) -> usize {
    s.as_ref().map_or(0, |s| s.0.patch.grid.len())
}

/// Copy θ, φ, |H| and |H|_flat per node into caller buffers of length `len`.
/// Any output pointer may be null to skip it.
///
/// # Safety
/// Non-null buffers must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_surface_fields(
    s: *const QlmMassSurface,
    theta: *mut f64,
    phi: *mut f64,
    norm_h: *mut f64,
    h_flat: *mut f64,
    len: usize,
) -> QlmStatus {
    guard(|| {
        let s = &handle(s, "mass surface")?.0;
        let n = s.patch.grid.len();
        if len < n {
            return Err(fail(QlmStatus::BufferTooSmall, &format!("buffers hold {len} values, need {n}")));
        }
        for k in 0..n {
            let (t, p) = s.patch.grid.node(k);
            for (buf, v) in [(theta, t), (phi, p), (norm_h, s.norm_h[k]), (h_flat, s.h_flat[k])] {
                if !buf.is_null() {
                    *buf.add(k) = v;
                }
            }
        }
        Ok(())
    })
}

/// Full mass report as JSON. The string must be released with
/// `qlm_string_free`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlm_mass_report_json(
    spacetime: *const QlmSpacetime,
    surface: *const QlmSurface,
    band_limit: usize,
    out: *mut *mut c_char,
) -> QlmStatus {
    guard(|| {
        let slot = out_ptr(out, "report")?;
        *slot = ptr::null_mut();
        let (m, f) = (handle(spacetime, "spacetime")?, handle(surface, "surface")?);
        let grid = SphereGrid::new(band_limit).map_err(lift)?;
        let rep = mean_curvature_mass(&m.0, &f.0, grid, &CONVERGENCE_BANDS).map_err(lift)?;
        let text = serde_json::to_string(&rep).map_err(|e| fail(QlmStatus::Io, &e.to_string()))?;
        *slot = CString::new(text).map_err(|e| fail(QlmStatus::Io, &e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qlm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
