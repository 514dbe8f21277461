use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR"));
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("read cbindgen.toml");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate_with_config(&crate_dir, config) {
        Ok(bindings) => {
            let dir = crate_dir.join("include");
            std::fs::create_dir_all(&dir).expect("create include dir");
            bindings.write_to_file(dir.join("fdnoma.h"));
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
