//! C ABI over `polyvol`.
//!
//! Shapes and samples are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`PvStatus`]; on failure the
//! message is available from [`pv_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polyvol::estim2d;
use polyvol::estim3d::mom3d_asymp_var;
use polyvol::{DistanceSample, Error, EstimatorOptions, Method, ModelTag, Params3D, Shape};

pub const PV_FLAG_POLE_PROXIMITY: u32 = 1;
pub const PV_FLAG_BOUNDARY_HIT: u32 = 2;
pub const PV_FLAG_CLAMP_APPLIED: u32 = 4;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvMethod {
    Mom = 0,
    Mle = 1,
    Tmom = 2,
    Tmle = 3,
    Em = 4,
    Mom3d = 5,
    Mle3d = 6,
    Tmom3d = 7,
}

impl From<PvMethod> for Method {
    fn from(m: PvMethod) -> Method {
        match m {
            PvMethod::Mom => Method::Mom,
            PvMethod::Mle => Method::Mle,
            PvMethod::Tmom => Method::Tmom,
            PvMethod::Tmle => Method::Tmle,
            PvMethod::Em => Method::Em,
            PvMethod::Mom3d => Method::Mom3d,
            PvMethod::Mle3d => Method::Mle3d,
            PvMethod::Tmom3d => Method::Tmom3d,
        }
    }
}

/// Result of [`pv_estimate`]. Fields that do not apply are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PvEstimate {
    pub l0: f64,
    pub m: f64,
    pub asymp_var_l0: f64,
    pub asymp_var_m: f64,
    pub n: u64,
    pub method: PvMethod,
    /// Bitwise OR of the `PV_FLAG_*` constants.
    pub flags: u32,
}

/// `V(r) = mu + l0 r + m r^2 + phi0 omega_d r^d` on `[0, r_max]`; `m` is 0 in 2D.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PvVolume {
    pub dimension: u32,
    pub mu: f64,
    pub l0: f64,
    pub m: f64,
    pub phi0: f64,
    pub r_max: f64,
}

/// Opaque shape handle.
pub struct PvShape(Shape);

/// Opaque distance sample handle.
pub struct PvSample(DistanceSample);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PvStatus {
    let status = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return PvStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            PvStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_last_error(msg);
            PvStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            if e.is_validation() {
                PvStatus::InvalidArgument
            } else {
                PvStatus::Numerical
            }
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PvStatus::Panic
        }
    };
    status
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a shape from NUL-terminated JSON.
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pv_shape_from_json(json: *const c_char, out: *mut *mut PvShape) -> PvStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure::Invalid(format!("json is not UTF-8: {e}")))?;
        let shape = Shape::from_json(text)?;
        write(out, Box::into_raw(Box::new(PvShape(shape))), "out")
    })
}

/// # Safety
/// `shape` must come from [`pv_shape_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pv_shape_free(shape: *mut PvShape) {
    if !shape.is_null() {
        drop(Box::from_raw(shape));
    }
}

/// Closed-form volume polynomial of the shape.
///
/// # Safety
/// `shape` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pv_shape_volume(shape: *const PvShape, out: *mut PvVolume) -> PvStatus {
    guard(|| {
        let v = deref(shape, "shape")?.0.analytic_volume()?;
        let vol = PvVolume {
            dimension: v.dimension.get() as u32,
            mu: v.mu,
            l0: v.l0,
            m: v.m,
            phi0: v.phi0,
            r_max: v.r_max,
        };
        write(out, vol, "out")
    })
}

/// Distance from a point with `dim` coordinates to the shape.
///
/// # Safety
/// `point` must hold `dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn pv_shape_distance(
    shape: *const PvShape,
    point: *const f64,
    dim: usize,
    out: *mut f64,
) -> PvStatus {
    guard(|| {
        let shape = deref(shape, "shape")?;
        if point.is_null() {
            return Err(Failure::Null("point"));
        }
        let p = std::slice::from_raw_parts(point, dim);
        write(out, shape.0.distance(p)?, "out")
    })
}

/// Distances of `n` uniform points in the band of radius `band` around the shape.
///
/// # Safety
/// `shape` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pv_sample_band(
    shape: *const PvShape,
    band: f64,
    n: usize,
    seed: u64,
    out: *mut *mut PvSample,
) -> PvStatus {
    guard(|| {
        let shape = deref(shape, "shape")?;
        let sample = polyvol::sample_distances(&shape.0, band, n, seed)?;
        write(out, Box::into_raw(Box::new(PvSample(sample))), "out")
    })
}

/// Wraps observed distances. `solid` selects the model with `0 < d <= R`,
/// otherwise `0 <= d <= R`.
///
/// # Safety
/// `values` must hold `len` doubles (it may be NULL when `len` is 0) and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn pv_sample_from_values(
    values: *const f64,
    len: usize,
    band: f64,
    solid: bool,
    out: *mut *mut PvSample,
) -> PvStatus {
    guard(|| {
        let v = if len == 0 {
            Vec::new()
        } else if values.is_null() {
            return Err(Failure::Null("values"));
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        let model = if solid { ModelTag::Solid } else { ModelTag::Manifold };
        let sample = DistanceSample::new(v, band, model, 0)?;
        write(out, Box::into_raw(Box::new(PvSample(sample))), "out")
    })
}

/// Number of distances; 0 for NULL.
///
/// # Safety
/// `sample` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pv_sample_len(sample: *const PvSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the distances into `buf`, which must have room for `pv_sample_len` values.
///
/// # Safety
/// `buf` must be writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pv_sample_copy_values(sample: *const PvSample, buf: *mut f64, cap: usize) -> PvStatus {
    guard(|| {
        let s = deref(sample, "sample")?;
        if s.0.len() > cap {
            return Err(Failure::Invalid(format!("buffer holds {cap} values, sample has {}", s.0.len())));
        }
        if s.0.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        ptr::copy_nonoverlapping(s.0.values.as_ptr(), buf, s.0.len());
        Ok(())
    })
}

/// # Safety
/// `sample` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pv_sample_free(sample: *mut PvSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Applies `method` with known `phi0` and truncation order `k`.
///
/// # Safety
/// `sample` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pv_estimate(
    sample: *const PvSample,
    method: PvMethod,
    phi0: f64,
    k: u32,
    out: *mut PvEstimate,
) -> PvStatus {
    guard(|| {
        let s = deref(sample, "sample")?;
        let opts = EstimatorOptions { phi0, k: k as usize, ..EstimatorOptions::default() };
        let est = polyvol::estimate(&s.0, method.into(), &opts)?;
        let f = est.flags();
        let flags = [
            (f.pole_proximity, PV_FLAG_POLE_PROXIMITY),
            (f.boundary_hit, PV_FLAG_BOUNDARY_HIT),
            (f.clamp_applied, PV_FLAG_CLAMP_APPLIED),
        ]
        .into_iter()
        .filter_map(|(set, bit)| set.then_some(bit))
        .fold(0, |acc, bit| acc | bit);
        let (var_l0, var_m, n) = match est {
            polyvol::AnyEstimate::Planar(e) => (e.asymp_variance, None, e.n),
            polyvol::AnyEstimate::Spatial(e) => (e.asymp_var_l0, e.asymp_var_m, e.n),
        };
        let result = PvEstimate {
            l0: est.l0(),
            m: est.m().unwrap_or(f64::NAN),
            asymp_var_l0: var_l0.unwrap_or(f64::NAN),
            asymp_var_m: var_m.unwrap_or(f64::NAN),
            n: n as u64,
            method,
            flags,
        };
        write(out, result, "out")
    })
}

/// Asymptotic variance of the planar moment estimator of `L0`.
#[no_mangle]
pub extern "C" fn pv_mom_asymp_var(l0: f64, band: f64, phi0: f64) -> f64 {
    estim2d::mom_asymp_var(l0, band, phi0)
}

/// Inverse Fisher information of one observation about `L0`.
#[no_mangle]
pub extern "C" fn pv_mle_asymp_var(l0: f64, band: f64, phi0: f64) -> f64 {
    estim2d::mle_asymp_var(l0, band, phi0)
}

/// Asymptotic variances of the spatial moment estimators of `L0` and `M`.
///
/// # Safety
/// `out_l0` and `out_m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pv_mom3d_asymp_var(
    l0: f64,
    m: f64,
    band: f64,
    phi0: f64,
    out_l0: *mut f64,
    out_m: *mut f64,
) -> PvStatus {
    guard(|| {
        if out_l0.is_null() || out_m.is_null() {
            return Err(Failure::Null("out"));
        }
        let (vl, vm) = mom3d_asymp_var(&Params3D::with_phi0(l0, m, band, phi0)?);
        write(out_l0, vl, "out_l0")?;
        write(out_m, vm, "out_m")
    })
}
