use std::path::Path;
use std::process::Command;

/// The generated header compiles as strict C11 and as C++.
#[test]
fn header_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    for (compiler, std) in [("cc", "-std=c11"), ("c++", "-std=c++17")] {
        let mut cmd = Command::new(compiler);
        if std.contains("c++") {
            cmd.args(["-x", "c++"]);
        }
        let status = cmd
            .args([std, "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
            .arg(dir.join("include"))
            .arg(dir.join("tests/c/smoke.c"))
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(e) => eprintln!("skipping {compiler}: {e}"),
        }
    }
}
