//! Compiles a small C program against the generated header and links it
//! with the static library built alongside these tests.

use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// The directory holding the library artifacts: the test binary lives in
/// `<target>/<profile>/deps`.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(crate_dir().join("include/occur.h")).unwrap();
    for name in [
        "occur_program_parse",
        "occur_program_free",
        "occur_string_free",
        "occur_last_error_message",
        "occur_version",
        "occur_unify",
        "occur_nsto",
        "occur_check_modes",
        "occur_derive",
        "OCCUR_STATUS_BUDGET_EXCEEDED = 3",
        "typedef struct OccurProgram OccurProgram;",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("liboccur_ffi.a");
    assert!(lib.is_file(), "static library missing at {}", lib.display());
    let out_dir = std::env::temp_dir().join(format!("occur-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("a C compiler is available as cc");
    assert!(status.success(), "C compilation failed");
    let run = Command::new(Path::new(&exe)).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
    std::fs::remove_dir_all(out_dir).unwrap();
}
