//! Calls through the C entry points, from Rust and from a small C program.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use hamjac_ffi::*;

fn fixture(name: &str) -> CString {
    let path = format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hjc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { hjc_string_free(s) };
    out
}

fn analyze(name: &str) -> *mut HjcAnalysis {
    let mut a = ptr::null_mut();
    let status = unsafe { hjc_analyze(fixture(name).as_ptr(), &mut a) };
    assert_eq!(status, HjcStatus::Ok, "{}", last_error());
    assert!(!a.is_null());
    a
}

#[test]
fn analysis_report_and_counts() {
    let a = analyze("spinning.hjc");
    let (mut primary, mut secondary) = (0usize, 0usize);
    assert_eq!(
        unsafe { hjc_analysis_constraint_counts(a, &mut primary, &mut secondary) },
        HjcStatus::Ok
    );
    assert_eq!((primary, secondary), (7, 2));
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { hjc_analysis_report(a, HjcFormat::Json, &mut s) },
        HjcStatus::Ok
    );
    let json = take(s);
    assert!(json.contains("\"H6\": \"p0*psi0 + p1*psi1 + p2*psi2 + p3*psi3 - m*psi5\""));
    assert_eq!(
        unsafe { hjc_analysis_report(a, HjcFormat::Text, &mut s) },
        HjcStatus::Ok
    );
    assert!(take(s).starts_with("model spinning_particle"));
    unsafe { hjc_analysis_free(a) };
    assert!(last_error().is_empty());
}

#[test]
fn errors_are_reported() {
    let mut a = ptr::null_mut();
    let bad = CString::new("model broken parameter t variable x : even lagrangian: d(x)^").unwrap();
    assert_eq!(
        unsafe { hjc_analyze(bad.as_ptr(), &mut a) },
        HjcStatus::Parse
    );
    assert!(a.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { hjc_analyze(ptr::null(), &mut a) },
        HjcStatus::NullArgument
    );
    assert_eq!(
        unsafe { hjc_analyze(fixture("spinless.hjc").as_ptr(), ptr::null_mut()) },
        HjcStatus::NullArgument
    );
    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { hjc_analyze(invalid.as_ptr().cast(), &mut a) },
        HjcStatus::InvalidUtf8
    );
    let inconsistent =
        CString::new("model bad parameter t variable q : even lagrangian: q").unwrap();
    assert_eq!(
        unsafe { hjc_analyze(inconsistent.as_ptr(), &mut a) },
        HjcStatus::Analysis
    );
    unsafe {
        hjc_analysis_free(ptr::null_mut());
        hjc_string_free(ptr::null_mut());
    }
}

#[test]
fn integration_and_options() {
    let a = analyze("spinning.hjc");
    let mut o = hjc_integrate_options_default();
    o.steps = 10;
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { hjc_integrate_csv(a, &o, &mut s) },
        HjcStatus::Ok,
        "{}",
        last_error()
    );
    let csv = take(s);
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.lines().next().unwrap().ends_with("drift_H6"));
    o.steps = 0;
    assert_eq!(
        unsafe { hjc_integrate_csv(a, &o, &mut s) },
        HjcStatus::Domain
    );
    o.steps = 10;
    o.odd_units = 2;
    assert_eq!(
        unsafe { hjc_integrate_csv(a, &o, &mut s) },
        HjcStatus::Domain
    );
    o.odd_units = 6;
    o.mass = f64::NAN;
    assert_eq!(
        unsafe { hjc_integrate_csv(a, &o, &mut s) },
        HjcStatus::Domain
    );
    unsafe { hjc_analysis_free(a) };
}

#[test]
fn physical_states_and_variation() {
    let mut dim = 99usize;
    let p = [1.0, 0.0, 0.0, 0.0];
    assert_eq!(
        unsafe { hjc_physical_state_dimension(p.as_ptr(), 1.0, &mut dim) },
        HjcStatus::Ok
    );
    assert_eq!(dim, 2);
    let p = [2.0, 0.0, 0.0, 0.0];
    assert_eq!(
        unsafe { hjc_physical_state_dimension(p.as_ptr(), 1.0, &mut dim) },
        HjcStatus::Ok
    );
    assert_eq!(dim, 0);
    assert_eq!(
        unsafe { hjc_physical_state_dimension(p.as_ptr(), -1.0, &mut dim) },
        HjcStatus::Domain
    );

    let mut total: c_int = -1;
    let model = fixture("spinning.hjc");
    let status = unsafe { hjc_vary(model.as_ptr(), fixture("reparam.hjt").as_ptr(), &mut total) };
    assert_eq!(status, HjcStatus::Ok, "{}", last_error());
    assert_eq!(total, 1);
    let status = unsafe {
        hjc_vary(
            model.as_ptr(),
            fixture("einbein_shift.hjt").as_ptr(),
            &mut total,
        )
    };
    assert_eq!(status, HjcStatus::Ok);
    assert_eq!(total, 0);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(hjc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compile and run a C client against the generated header and the static
/// library, when a C compiler is available.
#[test]
fn c_client() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("hamjac.h").exists());
    // target/<profile>/deps/<test binary> → target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libhamjac_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists()
        || std::process::Command::new(&cc)
            .arg("--version")
            .output()
            .is_err()
    {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = std::env::temp_dir().join(format!("hamjac-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "hamjac.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    static char text[1 << 16];
    size_t n = fread(text, 1, sizeof text - 1, f);
    fclose(f);
    text[n] = 0;

    HjcAnalysis *a = NULL;
    if (hjc_analyze(text, &a) != HJC_STATUS_OK) { fprintf(stderr, "%s\n", hjc_last_error()); return 1; }
    size_t primary = 0, secondary = 0;
    hjc_analysis_constraint_counts(a, &primary, &secondary);
    char *json = NULL;
    hjc_analysis_report(a, HJC_FORMAT_JSON, &json);
    int has_h5 = strstr(json, "\"H5\"") != NULL;
    hjc_string_free(json);
    hjc_analysis_free(a);

    double p[4] = {1.0, 0.0, 0.0, 0.0};
    size_t dim = 0;
    hjc_physical_state_dimension(p, 1.0, &dim);
    if (hjc_analyze("model", &a) != HJC_STATUS_PARSE) return 2;
    printf("%zu %zu %d %zu\n", primary, secondary, has_h5, dim);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("client");
    let status = std::process::Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = std::process::Command::new(&bin)
        .arg(manifest.join("../core/fixtures/spinning.hjc"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "7 2 1 2");
    std::fs::remove_dir_all(dir).unwrap();
}
