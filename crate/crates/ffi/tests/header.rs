use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ident.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for f in [
        "ident_model_parse",
        "ident_model_free",
        "ident_analyze",
        "ident_report_json",
        "ident_report_bound",
        "ident_report_free",
        "ident_check",
        "ident_last_error_message",
        "ident_string_free",
        "IDENT_STATUS_SELF_CHECK = 4",
        "typedef struct IdentModel IdentModel;",
    ] {
        assert!(text.contains(f), "missing {f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"ident.h\"\n\
         int main(void) {\n\
           IdentModel *m = 0;\n\
           IdentStatus s = ident_model_parse(\"\", &m);\n\
           ident_model_free(m);\n\
           return s == IDENT_STATUS_OK;\n\
         }\n",
    )
    .unwrap();
    let out = Command::new(cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
