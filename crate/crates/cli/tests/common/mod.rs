use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn girthkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_girthkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("GIRTHKIT_BUDGET")
        .output()
        .expect("binary runs")
}
