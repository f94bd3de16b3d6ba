//! Shared test helpers: a deterministic DBLP-style corpus generator and
//! process helpers for driving the binary.
#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

/// xorshift64*; deterministic and dependency-free.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Write a DBLP-flavored corpus of roughly `target_lines` physical lines:
/// a mix of paper records and homepage (`www`) records over 2011..=2019,
/// with a skewed author-popularity distribution.
pub fn write_corpus(path: &Path, target_lines: usize, seed: u64) {
    let mut rng = Rng::new(seed);
    let n_authors = 1 + target_lines / 14;
    let mut out = String::with_capacity(target_lines * 40);
    out.push_str("<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n<dblp>\n");
    let mut lines = 2usize;
    let mut key = 0u64;
    while lines < target_lines {
        let kind = match (rng.next_f64() * 100.0) as u32 {
            0..=51 => "www",
            52..=79 => "article",
            80..=94 => "inproceedings",
            95..=96 => "incollection",
            _ => "phdthesis",
        };
        let year = match rng.range(12) {
            0 => 2011,
            1..=6 => 2012 + rng.range(5),
            7..=10 => 2017 + rng.range(2),
            _ => 2019,
        };
        let size = match rng.range(11) {
            0..=1 => 1,
            2..=6 => 2,
            7..=9 => 3,
            _ => 4,
        };
        let mut authors: Vec<usize> = Vec::with_capacity(size);
        while authors.len() < size {
            let t = rng.next_f64();
            let a = ((t * t) * n_authors as f64) as usize % n_authors;
            if !authors.contains(&a) {
                authors.push(a);
            }
        }
        out.push_str(&format!("<{kind} key=\"k/{key}\" mdate=\"2020-01-01\">\n"));
        lines += 1;
        for a in authors {
            out.push_str(&format!("<author>Author {a} Zet&auml;</author>\n"));
            lines += 1;
        }
        out.push_str(&format!(
            "<title>Title {key}.</title>\n<year>{year}</year>\n</{kind}>\n"
        ));
        lines += 3;
        key += 1;
    }
    out.push_str("</dblp>\n");
    fs::write(path, out.as_bytes()).expect("corpus written");
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linkpred"))
}

pub fn run_ok(args: &[&str]) -> Output {
    let output = bin().args(args).output().expect("binary runs");
    assert!(
        output.status.success(),
        "command {:?} failed\nstdout:\n{}\nstderr:\n{}",
        args,
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

/// All regular files under a directory, sorted by relative path.
pub fn dir_files(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).expect("readable dir") {
            let entry = entry.unwrap();
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}
