//! C ABI over patchguard: feature extraction from source text and scoring
//! with a trained model.
//!
//! Every fallible function returns a [`PgStatus`]; on failure the message is
//! kept per thread and read with [`pg_last_error`]. Handles are opaque and
//! owned by the caller, who releases them with the matching `_free`
//! function. Panics never cross the boundary; they surface as
//! [`PgStatus::Panic`].
//!
//! Pointer arguments must be null or valid for the access the function
//! documents; strings are NUL-terminated UTF-8. Handles must come from this
//! library and must not be used after they are freed.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use patchguard::ast::registry::default_registry;
use patchguard::diff::diff;
use patchguard::features::{encode, extract, FeatureSchema, FeatureVector};
use patchguard::learner::{predict_proba, LearnerError, Model};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    UnsupportedFile = 4,
    Parse = 5,
    Diff = 6,
    SchemaMismatch = 7,
    ModelFormat = 8,
    BufferTooSmall = 9,
    Panic = 10,
    EmptyPatch = 11,
}

/// A loaded model.
pub struct PgModel(Model);

/// An encoded feature vector of one patch.
pub struct PgFeatures(FeatureVector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

type Outcome = Result<(), (PgStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PgStatus::Panic
        }
    }
}

fn null(name: &str) -> (PgStatus, String) {
    (PgStatus::NullArgument, format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (PgStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (PgStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn learner_error(e: LearnerError) -> (PgStatus, String) {
    let status = match e {
        LearnerError::SchemaMismatch(_) => PgStatus::SchemaMismatch,
        LearnerError::Io { .. } => PgStatus::Io,
        _ => PgStatus::ModelFormat,
    };
    (status, e.to_string())
}

/// Copies the calling thread's last error message, NUL-terminated, into
/// `buf` and returns the message length in bytes, without the NUL. With
/// a null `buf` or a too small `len` nothing is written, so a caller can
/// size the buffer first.
#[no_mangle]
pub unsafe extern "C" fn pg_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes_with_nul();
        if !buf.is_null() && len >= bytes.len() {
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
        }
        bytes.len() - 1
    })
}

/// The feature schema version this library encodes, as a static string.
#[no_mangle]
pub extern "C" fn pg_schema_version() -> *const c_char {
    SCHEMA_VERSION_C.as_ptr()
}

const SCHEMA_VERSION_C: &CStr = c"1.0.0";

/// Loads a model file. On success `*out` holds a handle to free with
/// [`pg_model_free`].
#[no_mangle]
pub unsafe extern "C" fn pg_model_load(path: *const c_char, out: *mut *mut PgModel) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(path, "path")?;
        let model = Model::load(Path::new(path)).map_err(learner_error)?;
        *out = Box::into_raw(Box::new(PgModel(model)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pg_model_free(model: *mut PgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of input columns the model expects; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pg_model_columns(model: *const PgModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.columns.len())
}

/// Diffs and encodes one patch made of `count` changed files. Each file is
/// given by its buggy and patched source text and a path whose extension
/// selects the grammar. On success `*out` holds a handle to free with
/// [`pg_features_free`].
#[no_mangle]
pub unsafe extern "C" fn pg_extract(
    buggy: *const *const c_char,
    patched: *const *const c_char,
    paths: *const *const c_char,
    count: usize,
    out: *mut *mut PgFeatures,
) -> PgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if buggy.is_null() || patched.is_null() || paths.is_null() {
            return Err(null("source array"));
        }
        if count == 0 {
            return Err((PgStatus::EmptyPatch, "a patch needs at least one changed file".into()));
        }
        let registry = default_registry();
        let mut per_file = Vec::with_capacity(count);
        for i in 0..count {
            let path = str_arg(*paths.add(i), "path")?;
            let grammar = registry
                .grammar_for_path(Path::new(path))
                .ok_or_else(|| (PgStatus::UnsupportedFile, format!("{path}: no grammar handles this file")))?;
            let parse = |src: *const c_char, side: &str| {
                let src = str_arg(src, side)?;
                registry.parse(src, grammar, Path::new(path)).map_err(|e| (PgStatus::Parse, format!("{path} ({side}): {e}")))
            };
            let b = parse(*buggy.add(i), "buggy")?;
            let p = parse(*patched.add(i), "patched")?;
            let script = diff(&b, &p).map_err(|e| (PgStatus::Diff, format!("{path}: {e}")))?;
            per_file.push(extract(&b, &p, &script));
        }
        let vector = encode(&per_file, &FeatureSchema::v1()).map_err(|e| (PgStatus::SchemaMismatch, e.to_string()))?;
        *out = Box::into_raw(Box::new(PgFeatures(vector)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pg_features_free(features: *mut PgFeatures) {
    if !features.is_null() {
        drop(Box::from_raw(features));
    }
}

/// Number of encoded values; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pg_features_len(features: *const PgFeatures) -> usize {
    features.as_ref().map_or(0, |f| f.0.values.len())
}

/// Copies the encoded values into `buf`, which must hold
/// [`pg_features_len`] entries.
#[no_mangle]
pub unsafe extern "C" fn pg_features_values(features: *const PgFeatures, buf: *mut u32, len: usize) -> PgStatus {
    guard(|| {
        let f = features.as_ref().ok_or_else(|| null("features"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < f.0.values.len() {
            return Err((PgStatus::BufferTooSmall, format!("{} values do not fit in {len}", f.0.values.len())));
        }
        std::ptr::copy_nonoverlapping(f.0.values.as_ptr(), buf, f.0.values.len());
        Ok(())
    })
}

/// Overfitting probability of an extracted patch. Models trained on a
/// subset of the columns pick their columns by name.
#[no_mangle]
pub unsafe extern "C" fn pg_predict(model: *const PgModel, features: *const PgFeatures, out_proba: *mut f64) -> PgStatus {
    guard(|| {
        let m = &model.as_ref().ok_or_else(|| null("model"))?.0;
        let f = &features.as_ref().ok_or_else(|| null("features"))?.0;
        if out_proba.is_null() {
            return Err(null("out_proba"));
        }
        if m.schema_version != f.schema_version {
            return Err((
                PgStatus::SchemaMismatch,
                format!("model schema {} against features schema {}", m.schema_version, f.schema_version),
            ));
        }
        let all = FeatureSchema::v1().expanded_columns();
        let x = m
            .columns
            .iter()
            .map(|name| {
                let c = all.iter().position(|a| a == name);
                c.map(|c| f64::from(f.values[c]))
                    .ok_or_else(|| (PgStatus::SchemaMismatch, format!("model column {name} is not a feature")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        *out_proba = predict_proba(m, &x).map_err(learner_error)?;
        Ok(())
    })
}

/// Overfitting probability of a raw row of `len` values in model column
/// order.
#[no_mangle]
pub unsafe extern "C" fn pg_predict_values(
    model: *const PgModel,
    values: *const f64,
    len: usize,
    out_proba: *mut f64,
) -> PgStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if values.is_null() || out_proba.is_null() {
            return Err(null("values or out_proba"));
        }
        let x = std::slice::from_raw_parts(values, len);
        *out_proba = predict_proba(&m.0, x).map_err(learner_error)?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use patchguard::features::SCHEMA_VERSION;

    #[test]
    fn version_string_tracks_schema() {
        assert_eq!(SCHEMA_VERSION_C.to_str(), Ok(SCHEMA_VERSION));
    }
}
