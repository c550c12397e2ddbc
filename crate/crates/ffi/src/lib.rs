//! C interface to the `occur` analyses.
//!
//! Every analysis returns an [`OccurStatus`] and, on success or refutation,
//! writes a JSON report to `*out_json`. The report has the same layout as
//! the command-line tool's `--json` output. Strings returned through
//! `out_json` must be released with [`occur_string_free`]. When a call
//! fails, [`occur_last_error_message`] describes why.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use occur::app::{
    self, DeriveRequest, ModeCheck, ModesRequest, NstoRequest, PropertyChoice, Report, RuleChoice,
    UnifyRequest, VerifyChoice,
};
use occur::parser::parse_program;
use occur::sld::{Bounds, Engine};
use occur::unify::{Algorithm, Strategy};

/// Result of every call. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccurStatus {
    Ok = 0,
    /// The analysis ran and a check failed.
    Refuted = 1,
    /// A term, equation, moding, query or program did not parse.
    ParseError = 2,
    /// A search budget or tree bound prevented a verdict.
    BudgetExceeded = 3,
    /// A null pointer, invalid UTF-8, or an unknown option name.
    InvalidArgument = 4,
    /// A bug in the library. The message says where.
    Internal = 5,
}

/// A parsed program. Create with [`occur_program_parse`], release with
/// [`occur_program_free`].
pub struct OccurProgram {
    text: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("nul bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(OccurStatus, String);

fn invalid(message: impl Into<String>) -> Fail {
    Fail(OccurStatus::InvalidArgument, message.into())
}

unsafe fn required<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn optional<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        required(p, what).map(Some)
    }
}

fn choose<T: Copy>(given: Option<&str>, default: T, options: &[(&str, T)], what: &str) -> Result<T, Fail> {
    let Some(name) = given else { return Ok(default) };
    options
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            invalid(format!("unknown {what} '{name}' (expected one of {})", names.join(", ")))
        })
}

fn status_of(report: &Report) -> OccurStatus {
    match report.exit_status {
        app::EXIT_PASS => OccurStatus::Ok,
        app::EXIT_REFUTED => OccurStatus::Refuted,
        app::EXIT_USAGE => OccurStatus::ParseError,
        app::EXIT_BUDGET => OccurStatus::BudgetExceeded,
        _ => OccurStatus::Internal,
    }
}

/// Runs `body`, converts panics and errors to a status, and hands the
/// report to the caller through `out_json`.
unsafe fn deliver(out_json: *mut *mut c_char, body: impl FnOnce() -> Result<Report, Fail>) -> OccurStatus {
    clear_error();
    if out_json.is_null() {
        set_error("out_json is null");
        return OccurStatus::InvalidArgument;
    }
    *out_json = ptr::null_mut();
    let report = match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(r)) => r,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            return status;
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {what}"));
            return OccurStatus::Internal;
        }
    };
    if let Some(e) = &report.error {
        set_error(e.clone());
    }
    let json = CString::new(report.to_json()).expect("JSON has no nul bytes");
    *out_json = json.into_raw();
    status_of(&report)
}

/// Parses `text` as a program and stores a new handle in `*out`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn occur_program_parse(text: *const c_char, out: *mut *mut OccurProgram) -> OccurStatus {
    clear_error();
    if out.is_null() {
        set_error("out is null");
        return OccurStatus::InvalidArgument;
    }
    *out = ptr::null_mut();
    let text = match required(text, "text") {
        Ok(t) => t,
        Err(Fail(status, message)) => {
            set_error(message);
            return status;
        }
    };
    match parse_program(text) {
        Ok(_) => {
            *out = Box::into_raw(Box::new(OccurProgram { text: text.to_string() }));
            OccurStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            OccurStatus::ParseError
        }
    }
}

/// Releases a program handle. Null is ignored.
///
/// # Safety
/// `program` must come from [`occur_program_parse`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn occur_program_free(program: *mut OccurProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn occur_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The string
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn occur_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn occur_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Unifies two terms. `algorithm` is "mma" (with the occur-check, the
/// default when null) or "mma-minus" (without it).
///
/// # Safety
/// String arguments must be nul-terminated or (where allowed) null.
#[no_mangle]
pub unsafe extern "C" fn occur_unify(
    lhs: *const c_char,
    rhs: *const c_char,
    algorithm: *const c_char,
    out_json: *mut *mut c_char,
) -> OccurStatus {
    deliver(out_json, || {
        let req = UnifyRequest {
            lhs: required(lhs, "lhs")?.to_string(),
            rhs: required(rhs, "rhs")?.to_string(),
            algorithm: choose(
                optional(algorithm, "algorithm")?,
                Algorithm::Mma,
                &[("mma", Algorithm::Mma), ("mma-minus", Algorithm::MmaMinus)],
                "algorithm",
            )?,
            strategy: Strategy::FirstApplicable,
            trace: false,
        };
        Ok(app::cmd_unify(&req))
    })
}

/// Decides NSTO and/or WNSTO for equations like "f(X) = f(a), Y = X".
/// `property` is "nsto", "wnsto" or "both" (default). `moding` may be
/// null. A `budget` of 0 selects the default.
///
/// # Safety
/// String arguments must be nul-terminated or (where allowed) null.
#[no_mangle]
pub unsafe extern "C" fn occur_nsto(
    equations: *const c_char,
    property: *const c_char,
    moding: *const c_char,
    budget: usize,
    out_json: *mut *mut c_char,
) -> OccurStatus {
    deliver(out_json, || {
        let req = NstoRequest {
            equations: required(equations, "equations")?.to_string(),
            property: choose(
                optional(property, "property")?,
                PropertyChoice::Both,
                &[
                    ("nsto", PropertyChoice::Nsto),
                    ("wnsto", PropertyChoice::Wnsto),
                    ("both", PropertyChoice::Both),
                ],
                "property",
            )?,
            budget: if budget == 0 { occur::nsto::DEFAULT_BUDGET } else { budget },
            moding: optional(moding, "moding")?.map(str::to_string),
        };
        Ok(app::cmd_nsto(&req))
    })
}

/// Checks a program against a mode discipline: "tidy", "nicely", "well",
/// "well3", "weakly-tidy" or "weakly-linear-heads". `moding` overrides the
/// declared moding and may be null. A nonzero `search` tries every
/// 2-valued moding instead.
///
/// # Safety
/// `program` must be a live handle; strings as for the other calls.
#[no_mangle]
pub unsafe extern "C" fn occur_check_modes(
    program: *const OccurProgram,
    check: *const c_char,
    moding: *const c_char,
    search: i32,
    out_json: *mut *mut c_char,
) -> OccurStatus {
    deliver(out_json, || {
        let program = program.as_ref().ok_or_else(|| invalid("program is null"))?;
        let check = choose(
            Some(required(check, "check")?),
            ModeCheck::Tidy,
            &[
                ("tidy", ModeCheck::Tidy),
                ("nicely", ModeCheck::Nicely),
                ("well", ModeCheck::Well),
                ("well3", ModeCheck::Well3),
                ("weakly-tidy", ModeCheck::WeaklyTidy),
                ("weakly-linear-heads", ModeCheck::WeaklyLinearHeads),
            ],
            "check",
        )?;
        let req = ModesRequest {
            program_name: "program".into(),
            program_text: program.text.clone(),
            check,
            moding: optional(moding, "moding")?.map(str::to_string),
            moding2: None,
            search: search != 0,
            query: None,
            limit: 1000,
        };
        Ok(app::cmd_modes(&req))
    })
}

/// Builds the SLD tree of `query`. `rule` is "leftmost" (default),
/// "mode-compatible" or "all"; `verify` is "none" (default), "nsto" or
/// "wnsto"; `engine` is "sound" (default) or "unsound". Zero bounds
/// select the defaults.
///
/// # Safety
/// `program` must be a live handle; strings as for the other calls.
#[no_mangle]
pub unsafe extern "C" fn occur_derive(
    program: *const OccurProgram,
    query: *const c_char,
    rule: *const c_char,
    verify: *const c_char,
    engine: *const c_char,
    max_depth: usize,
    max_nodes: usize,
    out_json: *mut *mut c_char,
) -> OccurStatus {
    deliver(out_json, || {
        let program = program.as_ref().ok_or_else(|| invalid("program is null"))?;
        let defaults = Bounds::default();
        let req = DeriveRequest {
            program_name: "program".into(),
            program_text: program.text.clone(),
            query: required(query, "query")?.to_string(),
            rule: choose(
                optional(rule, "rule")?,
                RuleChoice::Leftmost,
                &[
                    ("leftmost", RuleChoice::Leftmost),
                    ("mode-compatible", RuleChoice::ModeCompatible),
                    ("all", RuleChoice::All),
                ],
                "rule",
            )?,
            verify: choose(
                optional(verify, "verify")?,
                VerifyChoice::None,
                &[
                    ("none", VerifyChoice::None),
                    ("nsto", VerifyChoice::Nsto),
                    ("wnsto", VerifyChoice::Wnsto),
                ],
                "verify",
            )?,
            engine: choose(
                optional(engine, "engine")?,
                Engine::Sound,
                &[("sound", Engine::Sound), ("unsound", Engine::Unsound)],
                "engine",
            )?,
            bounds: Bounds {
                max_depth: if max_depth == 0 { defaults.max_depth } else { max_depth },
                max_nodes: if max_nodes == 0 { defaults.max_nodes } else { max_nodes },
            },
            budget: occur::nsto::DEFAULT_BUDGET,
            moding: None,
            tree: false,
        };
        Ok(app::cmd_derive(&req))
    })
}
