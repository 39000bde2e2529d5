use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use ncat_galois::library::{parallel_two_cells, walking_two_cell};
use ncat_galois::limits::terminal;
use ncat_galois::NCat;
use ncat_galois_cli::format::{ncat_to_string, parse_ncat, read_ncat, read_nfunctor, NCatFile};
use ncat_galois_cli::gen::{random_ncat, GenConfig, Rng8};
use rand::SeedableRng;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncat-galois")).args(args).output().expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_cat(dir: &Path, name: &str, c: &NCat) -> String {
    let path = dir.join(name);
    std::fs::write(&path, ncat_to_string(c)).unwrap();
    path.to_str().unwrap().to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_cat(dir.path(), "w.ncat", &walking_two_cell());
    let o = cli(&["validate", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n");

    let mut doc = NCatFile::from_ncat(&walking_two_cell());
    doc.src[1].insert("θ".into(), "g".into());
    let broken = path(dir.path(), "broken.ncat");
    std::fs::write(&broken, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = cli(&["validate", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).is_empty());

    let garbled = path(dir.path(), "garbled.ncat");
    std::fs::write(&garbled, "{\n  \"n\": 1,\n  \"cells\": [[\"a\"]\n").unwrap();
    let o = cli(&["validate", &garbled]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(cli(&["validate", &path(dir.path(), "missing.ncat")]).status.code(), Some(2));
}

#[test]
fn reflect_then_classify_the_unit() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_cat(dir.path(), "p.ncat", &parallel_two_cells());
    let out = path(dir.path(), "r");
    assert!(cli(&["reflect", &p, "-o", &out]).status.success());
    let image = read_ncat(Path::new(&out).join("image.ncat").as_path()).unwrap();
    assert_eq!(image.len(2), parallel_two_cells().len(2) - 1);
    let unit = path(Path::new(&out), "unit.nfun");
    let o = cli(&["classify", &unit]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("vertical=true stably_vertical=true trivial_covering=false covering=false"));
    assert!(text.contains("θ1") && text.contains("θ2"));
}

#[test]
fn factor_writes_both_factors_and_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_cat(dir.path(), "p.ncat", &parallel_two_cells());
    let r = path(dir.path(), "r");
    assert!(cli(&["reflect", &p, "-o", &r]).status.success());
    for system in ["reflective", "ml"] {
        let out = path(dir.path(), system);
        let o = cli(&["factor", "--system", system, &path(Path::new(&r), "unit.nfun"), "-o", &out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = Path::new(&out);
        let (e, m) = (read_nfunctor(&out.join("e.nfun")).unwrap(), read_nfunctor(&out.join("m.nfun")).unwrap());
        assert_eq!(e.cod(), m.dom());
        let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap();
        assert_eq!(cert["recomposes"], true);
        assert_eq!(cert["system"], system);
        let (left, right) = if system == "ml" { ("stably_vertical", "covering") } else { ("vertical", "trivial_covering") };
        assert_eq!(cert["e"][left], true);
        assert_eq!(cert["m"][right], true);
    }
}

#[test]
fn limits_write_valid_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_cat(dir.path(), "w.ncat", &walking_two_cell());
    let p = write_cat(dir.path(), "p.ncat", &parallel_two_cells());
    let prod = path(dir.path(), "prod");
    assert!(cli(&["product", &w, &p, "-o", &prod]).status.success());
    let apex = read_ncat(&Path::new(&prod).join("apex.ncat")).unwrap();
    assert_eq!(apex.len(2), walking_two_cell().len(2) * parallel_two_cells().len(2));
    let p1 = path(Path::new(&prod), "p1.nfun");
    let pb = path(dir.path(), "pb");
    assert!(cli(&["pullback", &p1, &p1, "-o", &pb]).status.success());
    assert!(read_nfunctor(&Path::new(&pb).join("p2.nfun")).is_ok());
    let co = path(dir.path(), "co");
    assert!(cli(&["coproduct", &w, &p, "-o", &co]).status.success());
    let apex = read_ncat(&Path::new(&co).join("apex.ncat")).unwrap();
    assert_eq!(apex.len(0), 4);
    assert!(read_nfunctor(&Path::new(&co).join("in1.nfun")).is_ok());
    let t1 = write_cat(dir.path(), "t1.ncat", &terminal(1));
    assert_eq!(cli(&["product", &w, &t1, "-o", &prod]).status.code(), Some(2));
}

#[test]
fn edm_of_the_terminal_2_category_is_sufficient() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_cat(dir.path(), "t.ncat", &terminal(2));
    let out = path(dir.path(), "edm");
    let o = cli(&["edm", &t, "-o", &out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sufficient=true"));
    let p = read_nfunctor(&Path::new(&out).join("p.nfun")).unwrap();
    assert!(ncat_galois::reflect::is_npreorder(p.dom()));
    assert_eq!(cli(&["edm", &write_cat(dir.path(), "t0.ncat", &terminal(0)), "-o", &out]).status.code(), Some(2));
}

#[test]
fn check_runs_are_deterministic() {
    for suite in ["axioms", "stable-units", "orthogonality", "crosscheck"] {
        let args = ["check", "--suite", suite, "--n", "2", "--size", "3", "--seed", "11", "--trials", "12"];
        let (a, b) = (cli(&args), cli(&args));
        assert_eq!(a.status.code(), Some(0), "{suite}: {}", stdout(&a));
        assert_eq!(a.stdout, b.stdout);
        assert!(stdout(&a).ends_with("12 of 12 trials passed\n"));
    }
}

#[test]
fn a_trial_replays_alone() {
    let all = stdout(&cli(&["check", "--suite", "crosscheck", "--seed", "40", "--trials", "5"]));
    let one = stdout(&cli(&["check", "--suite", "crosscheck", "--seed", "43", "--trials", "1"]));
    let third = all.lines().nth(3).unwrap().replacen("trial 3", "trial 0", 1);
    assert_eq!(one.lines().next().unwrap(), third);
}

#[test]
fn generated_instances_round_trip_through_files() {
    let mut rng = Rng8::seed_from_u64(99);
    for k in 0..60 {
        let c = random_ncat(&mut rng, k % 4, GenConfig::new(3));
        let text = ncat_to_string(&c);
        let back = Arc::new(parse_ncat(&text, "memory").unwrap());
        assert_eq!(back, c);
        assert_eq!(ncat_to_string(&back), text);
    }
}
