use cbindgen::{Config, Language, RenameRule};

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    let mut config = Config::default();
    config.language = Language::C;
    config.include_guard = Some("SURFACE_DECODE_H".into());
    config.cpp_compat = true;
    config.usize_is_size_t = true;
    config.enumeration.rename_variants = RenameRule::QualifiedScreamingSnakeCase;
    cbindgen::Builder::new()
        .with_crate(".")
        .with_config(config)
        .generate()
        .expect("cbindgen could not generate the C header")
        .write_to_file("include/surface_decode.h");
}
