use std::path::PathBuf;
use std::process::Command;

fn static_lib() -> PathBuf {
    // test binaries live in target/<profile>/deps next to the library
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libsumrep_ffi.a"))
        .find(|p| p.exists())
        .expect("libsumrep_ffi.a not built")
}

#[test]
fn c_program_links_against_static_lib() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = static_lib();
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("sumrep_smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "{stdout}{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.starts_with("ok "), "{stdout}");
}
