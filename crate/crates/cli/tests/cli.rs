use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn iwv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TREEBANK: &str = "\
the\tDT\nfilm\tNN\nis\tVBZ\ngreat\tJJ\n.\t.\n\n\
a\tDT\nplot\tNN\nseems\tVBZ\ndull\tJJ\n\n\
this\tDT\nactor\tNN\nis\tVBZ\nreally\tRB\nbad\tJJ\n.\t.\n";

/// Tiny CR-shaped dataset, embeddings, lexicon, tagger and config.
fn workspace(extra: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::create_dir(root.join("cr")).unwrap();
    let pos: Vec<String> = (0..6)
        .map(|i| format!("the camera is great and sharp number{i} ."))
        .collect();
    let neg: Vec<String> = (0..6)
        .map(|i| format!("the battery is awful and weak number{i} ."))
        .collect();
    fs::write(root.join("cr/custrev.pos"), pos.join("\n")).unwrap();
    fs::write(root.join("cr/custrev.neg"), neg.join("\n")).unwrap();
    fs::write(root.join("treebank.tsv"), TREEBANK).unwrap();
    fs::write(
        root.join("lex.txt"),
        "great\t3.0\nsharp\t1.0\nawful\t-4.0\nweak\t-1.5\n",
    )
    .unwrap();
    fs::write(root.join("glove.txt"), "the 0.1 0.2 0.3 0.4\ncamera 0.5 0.5 0.5 0.5\n").unwrap();
    let table = iwv_core::embeddings::EmbeddingTable::from_entries(
        4,
        iwv_core::embeddings::Source::Word2Vec,
        [("battery", vec![0.25f32, -0.5, 0.75, -1.0])],
    )
    .unwrap();
    let mut bytes = Vec::new();
    iwv_core::embeddings::write_word2vec_binary(&table, &mut bytes).unwrap();
    fs::write(root.join("w2v.bin"), bytes).unwrap();

    let out = iwv(&[
        "tag-train",
        "--treebank",
        path(&root.join("treebank.tsv")),
        "--out",
        path(&root.join("tagger.json")),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let config = format!(
        "dataset = cr\ndata_dir = cr\nw2v = w2v.bin\nglove = glove.txt\ntagger = tagger.json\npos_dim = 3\n\
         lexicon.toy = lex.txt\nruns = 1\nfolds = 3\nfeature_maps = 3\ndense_units = 4\nepochs = 3\nbatch_size = 4\n\
         filter_widths = 2,3\nseed = 5\nreport_csv = out/report.csv\n{extra}"
    );
    fs::create_dir(root.join("out")).unwrap();
    let cfg = root.join("experiment.cfg");
    fs::write(&cfg, config).unwrap();
    (dir, cfg)
}

#[test]
fn compare_prints_table_and_writes_identical_csv_twice() {
    let (dir, cfg) = workspace("");
    let first = iwv(&["compare", "--config", path(&cfg)]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let stdout = String::from_utf8(first.stdout).unwrap();
    assert!(stdout.starts_with("Method"), "{stdout}");
    assert!(stdout.contains("Word2Vec") && stdout.contains("GloVe") && stdout.contains("IWV"));
    let csv_path = dir.path().join("out/report.csv");
    let csv = fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("Method,Dim,CR\n"), "{csv}");
    assert!(csv.contains("IWV,8,"), "{csv}");
    let folds = fs::read_to_string(dir.path().join("out/report.folds.csv")).unwrap();
    assert_eq!(folds.matches("method,dataset").count(), 1);
    assert_eq!(folds.lines().count(), 1 + 3 * 3);

    let second = iwv(&["compare", "--config", path(&cfg)]);
    assert!(second.status.success());
    assert_eq!(fs::read_to_string(&csv_path).unwrap(), csv);
}

#[test]
fn build_train_evaluate_pipeline() {
    let (dir, cfg) = workspace("");
    let root = dir.path();
    let cache = root.join("out/cr.iwv");
    let codebook = root.join("out/pos.tsv");
    let out = iwv(&[
        "build-vectors",
        "--config",
        path(&cfg),
        "--out",
        path(&cache),
        "--codebook",
        path(&codebook),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&codebook).unwrap().lines().count(), 45);

    let ckpt = root.join("out/model.ckpt");
    let out = iwv(&[
        "train",
        "--config",
        path(&cfg),
        "--features",
        path(&cache),
        "--out",
        path(&ckpt),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("training accuracy"));

    let out = iwv(&["evaluate", "--checkpoint", path(&ckpt), "--features", path(&cache)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let acc: f64 = text.trim().strip_prefix("accuracy ").unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&acc));
}

#[test]
fn predefined_split_is_required_for_train_split() {
    let (_dir, cfg) = workspace("");
    let out = iwv(&[
        "build-vectors",
        "--config",
        path(&cfg),
        "--split",
        "train",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_2() {
    let (_dir, cfg) = workspace("bogus_key = 1\n");
    assert_eq!(iwv(&["compare", "--config", path(&cfg)]).status.code(), Some(2));
    let (_dir, cfg) = workspace("methods = fasttext\n");
    assert_eq!(iwv(&["compare", "--config", path(&cfg)]).status.code(), Some(2));
    assert_eq!(iwv(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn data_errors_exit_with_3() {
    let (dir, cfg) = workspace("");
    fs::remove_file(dir.path().join("cr/custrev.neg")).unwrap();
    assert_eq!(iwv(&["compare", "--config", path(&cfg)]).status.code(), Some(3));
    let missing = dir.path().join("absent.cfg");
    assert_eq!(iwv(&["compare", "--config", path(&missing)]).status.code(), Some(3));
    fs::write(dir.path().join("w2v.bin"), b"2 4\nbattery \x00\x00").unwrap();
    fs::write(dir.path().join("cr/custrev.neg"), "awful\n").unwrap();
    let out = iwv(&["compare", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn diverging_training_exits_with_4() {
    let (_dir, cfg) = workspace("learning_rate = 1e300\n");
    let out = iwv(&["compare", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}
