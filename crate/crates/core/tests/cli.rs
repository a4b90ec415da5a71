use std::path::PathBuf;
use std::process::Command;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name).display().to_string()
}

fn abmod(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_abmod")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn bernstein_of_worked_presentation() {
    let (code, out, _) = abmod(&["bernstein", "--pi", "(a - 3/2 b)*(a - 1/2 b)", "--prec", "16"]);
    assert_eq!(code, 0);
    assert!(out.contains("precision N = 16"));
    assert!(out.contains("B(x) = (x + 1/2)^2"), "{out}");
    assert!(out.contains("Bernstein element P = (a - 3/2 b) * (a - 1/2 b)"));
    assert!(out.contains("geometric: yes"));
}

#[test]
fn bernstein_falls_back_to_module_path() {
    let (code, out, _) = abmod(&["bernstein", "--pi", "a - b^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("not a factored presentation"));
    assert!(out.contains("B(x) = x"));
    assert!(out.contains("geometric: no"));
}

#[test]
fn theme_of_log_expansion() {
    let (code, out, _) = abmod(&["theme-of", &corpus("expansion_log.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("rank: 2"));
    assert!(out.contains("fundamental data: (3/2; [0])"), "{out}");
}

#[test]
fn saturate_jh_and_hom() {
    let f2 = corpus("f2.txt");
    let (code, out, _) = abmod(&["saturate", &f2]);
    assert_eq!(code, 0);
    assert!(out.contains("steps: 1") && out.contains("gap δ: 1"), "{out}");
    let (_, out, _) = abmod(&["jh", &f2]);
    assert!(out.contains("principal λ-sequence: (3/2, 1/2)"), "{out}");
    let (_, out, _) = abmod(&["hom-dim", &corpus("e_half.txt"), &corpus("e_half.txt")]);
    assert!(out.contains("dim Hom = 1") && out.contains("stabilized (N-1 vs N): yes"));
}

#[test]
fn canonical_form_and_change_var() {
    let (code, out, _) = abmod(&["canonical-form", &corpus("canonical_p2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("(3/2; [2])"), "{out}");
    let (code, out, _) = abmod(&["change-var", "--theta", "z + z^2", &corpus("f2.txt")]);
    assert_eq!(code, 0);
    assert!(out.contains("Bernstein polynomial before: (x + 1/2)^2") && out.contains("after: (x + 1/2)^2"));
}

#[test]
fn filtrations_of_mixed_expansion() {
    let (code, out, _) = abmod(&["filtrations", "--lambda-set", "1/2", &corpus("expansion_mixed.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("primitive part for {1/2}: rank 1"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(abmod(&["bernstein", "--pi", "(a - "]).0, 2);
    assert_eq!(abmod(&["bernstein", "--prec", "3", "--pi", "a - b"]).0, 2);
    assert_eq!(abmod(&["saturate", &corpus("missing.txt")]).0, 2);
    let (code, _, err) = abmod(&["saturate", &corpus("errors/irregular.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("NotStabilized"));
}

#[test]
fn check_on_corpus_passes() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| p.display().to_string())
        .collect();
    files.sort();
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let (code, out, err) = abmod(&args);
    assert_eq!(code, 0, "{out}{err}");
    assert!(!out.contains("FAIL"));
    let order: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("== ")).collect();
    assert_eq!(order, files.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn json_lines_round_trip() {
    let files = [corpus("f2.txt"), corpus("f2_module.json"), corpus("split.txt")];
    let (code, out, _) = abmod(&["--json", "saturate", &files[0], &files[1], &files[2]]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 3);
    for (line, file) in lines.iter().zip(&files) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["input"], file.as_str());
        let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
        let module = serde_json::to_string(&v["result"]["module"]).unwrap();
        match abmod::io::read_input(&module, 16).unwrap() {
            abmod::io::InputFile::Module(m) => assert_eq!(m.rank(), 2),
            _ => panic!("expected a module"),
        }
    }
}
