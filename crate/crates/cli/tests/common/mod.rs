//! The fixed CLI corpus shared by the golden test and the acceptance suite.

use std::path::PathBuf;
use std::process::Command;

/// `(golden file, expected exit code, arguments)`.
pub const CORPUS: &[(&str, i32, &[&str])] = &[
    ("snf-file.json", 0, &["snf", "tests/data/snf.json"]),
    ("snf-seed.txt", 0, &["snf", "--seed", "11", "--format", "text"]),
    ("snf-mod.json", 0, &["snf", "tests/data/snf.json", "--ring", "Zmod:8"]),
    ("module-map.json", 0, &["module", "tests/data/map.json"]),
    ("module-pair.txt", 0, &["module", "tests/data/pair_z2_z2.json", "--format", "text"]),
    ("homology-seed.txt", 0, &["homology", "--seed", "3", "--format", "text"]),
    ("postnikov-seed.json", 0, &["postnikov", "--seed", "3", "--degree", "1"]),
    ("postnikov-simplicial.txt", 0, &["postnikov", "tests/data/simplicial_good.json", "--degree", "0", "--format", "text"]),
    ("kinv-periodic.txt", 0, &["kinv", "tests/data/z4_periodic.json", "--format", "text"]),
    ("kinv-seed.json", 0, &["kinv", "--seed", "5", "--degree", "1"]),
    ("dold-kan.json", 0, &["dold-kan", "tests/data/z_moore.json"]),
    ("moore.txt", 0, &["moore", "tests/data/simplicial_good.json", "--format", "text"]),
    ("matching.json", 0, &["matching", "tests/data/simplicial_good.json", "--degree", "2"]),
    ("latching.json", 0, &["latching", "tests/data/simplicial_good.json", "--degree", "2"]),
    ("bockstein.txt", 0, &["bockstein", "tests/data/z_moore.json", "--ring", "Zmod:2", "--degree", "1", "--format", "text"]),
    ("bockstein-seed.json", 0, &["bockstein", "--seed", "8", "--ring", "Zmod:3"]),
    ("compare-les.txt", 0, &["compare-les", "tests/data/z_moore.json", "--ring", "Zmod:2", "--format", "text"]),
    ("compare-les-seed.json", 0, &["compare-les", "--seed", "6", "--ring", "Zmod:3", "--range", "0..2"]),
    ("spiral-seed.txt", 0, &["spiral", "--seed", "5", "--format", "text"]),
    ("spiral-seed.json", 0, &["spiral", "--seed", "1"]),
    ("ext-classify.txt", 0, &["ext-classify", "tests/data/pair_z2_z2.json", "--format", "text"]),
    ("ext-classify-seed.json", 0, &["ext-classify", "--seed", "2", "--degree", "3"]),
    ("lift-periodic.json", 2, &["lift", "tests/data/lift_periodic.json"]),
    ("lift-moore.txt", 0, &["lift", "tests/data/z4_periodic.json", "--format", "text"]),
    ("lift-seed.json", 0, &["lift", "--seed", "7"]),
    ("oracle-periodic.json", 2, &["oracle", "tests/data/lift_periodic.json"]),
    ("oracle-snake.txt", 0, &["oracle", "tests/data/z_moore.json", "--ring", "Zmod:3", "--format", "text"]),
];

pub fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_moore-tower"))
        .current_dir(manifest())
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.stderr.is_empty(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    (out.status.code().expect("exit code"), out.stdout)
}

/// Runs the corpus twice and compares both runs with each other and with
/// the committed goldens (or rewrites them when `update`). Returns the
/// number of entries checked.
pub fn check_corpus(update: bool) -> Result<usize, String> {
    let dir = manifest().join("tests/golden");
    let mut mismatches = Vec::new();
    for &(name, exit, args) in CORPUS {
        let (c1, first) = run(args);
        let (c2, second) = run(args);
        if c1 != exit || c2 != exit {
            return Err(format!("{}: exit codes {} and {}, expected {}", name, c1, c2, exit));
        }
        if first != second {
            return Err(format!("{}: two runs differ", name));
        }
        let path = dir.join(name);
        if update {
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read(&path).map_err(|e| format!("{}: {}", path.display(), e))?;
        if want != first {
            mismatches.push(name);
        }
    }
    if mismatches.is_empty() {
        Ok(CORPUS.len())
    } else {
        Err(format!("goldens differ: {:?}", mismatches))
    }
}
