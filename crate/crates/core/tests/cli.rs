use std::path::Path;
use std::process::{Command, Output};

use pimalign::io::pairs::read_pairs;
use pimalign::oracle::edit_distance_full;

fn pimalign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pimalign")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(text: &str) -> Vec<serde_json::Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_pairs_score_twice_their_length() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("p.tsv");
    std::fs::write(&pairs, "id\treference\tquery\nx\tACGTAC\tACGTAC\ny\tTTTTTTTTTT\tTTTTTTTTTT\n").unwrap();
    let recs = json_lines(&stdout(&pimalign(&["align", path(&pairs)])));
    assert_eq!(recs.len(), 2);
    assert_eq!((recs[0]["id"].as_str(), recs[0]["score"].as_i64()), (Some("x"), Some(12)));
    assert_eq!((recs[1]["id"].as_str(), recs[1]["score"].as_i64()), (Some("y"), Some(20)));
}

#[test]
fn bad_input_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("p.tsv");
    std::fs::write(&pairs, "a\tACGT\tACGT\na\tACGT\tACGT\n").unwrap();
    let o = pimalign(&["align", path(&pairs)]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("p.tsv:2"), "{err}");

    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[band]\nbase_bandwith = 10\n").unwrap();
    std::fs::write(&pairs, "a\tACGT\tACGT\n").unwrap();
    let o = pimalign(&["align", "--config", path(&cfg), path(&pairs)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("base_bandwith"));
}

#[test]
fn simreads_writes_pairs_and_truth() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reads.tsv");
    stdout(&pimalign(&[
        "simreads", "--profile", "pacbio", "--count", "25", "--length", "50-150", "--seed", "4", "--out", path(&out),
    ]));
    let pairs = read_pairs(&out).unwrap();
    assert_eq!(pairs.len(), 25);
    let truth = json_lines(&std::fs::read_to_string(dir.path().join("reads.tsv.truth.jsonl")).unwrap());
    assert_eq!(truth.len(), 25);
    for (p, t) in pairs.iter().zip(&truth) {
        assert_eq!(t["id"].as_str(), Some(p.id.as_str()));
        assert_eq!(t["length"].as_u64(), Some(p.reference.len() as u64));
    }
}

#[test]
fn masked_bases_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("g.fa");
    std::fs::write(&fasta, ">g\r\nACGTNNNNAC\r\nGT\r\n").unwrap();
    let out = dir.path().join("r.tsv");
    let args = ["simreads", "--genome", path(&fasta), "--profile", "illumina", "--count", "5", "--length", "10"];
    assert!(!pimalign(&args).status.success());
    let mut masked = args.to_vec();
    masked.extend(["--mask-n", "--out", path(&out)]);
    stdout(&pimalign(&masked));
    let truth = json_lines(&std::fs::read_to_string(dir.path().join("r.tsv.truth.jsonl")).unwrap());
    // every 10-bp window of a 12-bp record covers all four masked positions
    assert!(truth.iter().all(|t| t["masked_bases"] == 4 && t["record"] == "g"));
    for p in read_pairs(&out).unwrap() {
        assert!(p.reference.to_string().contains("AAAA"));
    }
}

#[test]
fn edit_distance_matches_full_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reads.tsv");
    stdout(&pimalign(&[
        "simreads", "--profile", "ont_2d", "--count", "60", "--length", "20-200", "--seed", "8", "--out", path(&out),
    ]));
    let pairs = read_pairs(&out).unwrap();
    for extra in [None, Some("--no-traceback")] {
        let mut args = vec!["editdist", "--oracle", "--w", "50", path(&out)];
        args.extend(extra);
        let recs = json_lines(&stdout(&pimalign(&args)));
        for (p, rec) in pairs.iter().zip(&recs) {
            let (d, _) = edit_distance_full(&p.reference, &p.query);
            assert_eq!(rec["distance"].as_u64(), Some(d), "{}", p.id);
            assert_eq!(rec["match"], true);
            assert_eq!(rec["traceback_cells"] == 0, extra.is_some());
            assert_eq!(rec["cigar"].is_null(), extra.is_some());
        }
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("p.tsv");
    std::fs::write(&pairs, "a\tACGTACGTACGTACGTACGTACGTACGTAC\tACGTACGTACGTACGTACGTACGTACGTAC\n").unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[band]\nbase_bandwidth = 4\nslope = \"0\"\ncap = 4\nround_to_multiple = false\n").unwrap();
    let band = |args: &[&str]| json_lines(&stdout(&pimalign(args)))[0]["band_used"].as_u64().unwrap();
    assert_eq!(band(&["align", path(&pairs)]), 20);
    assert_eq!(band(&["align", "--config", path(&cfg), path(&pairs)]), 4);
    assert_eq!(band(&["align", "--config", path(&cfg), "--w", "6", path(&pairs)]), 6);
}
