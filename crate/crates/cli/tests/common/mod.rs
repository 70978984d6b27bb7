#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FAKE_OPENERS: &[&str] = &[
    "Amazing food!",
    "Best restaurant ever!",
    "Absolutely wonderful experience!",
    "Incredible place!",
    "Fantastic dinner!",
];
const FAKE_BODIES: &[&str] = &[
    "The staff was friendly, attentive and extremely welcoming.",
    "Every dish was fresh, delicious and beautifully presented.",
    "The atmosphere was cozy, elegant and perfect.",
    "The desserts were rich, sweet and absolutely heavenly.",
    "Our waiter was charming and the wine was excellent.",
];
const REAL_BODIES: &[&str] = &[
    "We ordered the burger and fries, and the wait was about twenty minutes.",
    "My wife had the salmon, which came with rice and a side of beans.",
    "They were out of the soup, so I got the chicken sandwich instead.",
    "The parking lot was full, so we parked on the street and walked over.",
    "We sat near the kitchen because the patio was closed for a party.",
    "I asked for the check twice before the server brought it to our table.",
];
const REAL_CLOSERS: &[&str] = &[
    "Prices are reasonable for the portions.",
    "I would probably come back for lunch.",
    "It was fine but nothing stood out.",
    "The tea could have been colder.",
];

/// Canonical corpus CSV with `n` reviews per class and clear stylistic differences.
pub fn synthetic_corpus(n: usize) -> String {
    let mut out = String::from("id,text,label,sentiment,source\n");
    for i in 0..n {
        let a = FAKE_OPENERS[i % FAKE_OPENERS.len()];
        let b = FAKE_BODIES[(i * 3 + 1) % FAKE_BODIES.len()];
        let c = FAKE_BODIES[(i * 7 + 2) % FAKE_BODIES.len()];
        let extra = if i % 3 == 0 { " Highly recommended!!" } else { "" };
        out.push_str(&format!("f{i:03},\"{a} {b} {c}{extra}\",fake,positive,s{}\n", i % 4));
        let d = REAL_BODIES[i % REAL_BODIES.len()];
        let e = REAL_BODIES[(i * 5 + 3) % REAL_BODIES.len()];
        let f = REAL_CLOSERS[(i * 3) % REAL_CLOSERS.len()];
        let sentiment = if i % 2 == 0 { "positive" } else { "negative" };
        out.push_str(&format!("r{i:03},\"{d} {e} {f}\",real,{sentiment},s{}\n", i % 4));
    }
    out
}

pub fn write_corpus(dir: &Path, n: usize) -> PathBuf {
    let p = dir.join("corpus.csv");
    std::fs::write(&p, synthetic_corpus(n)).unwrap();
    p
}

pub fn cuelens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuelens"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Every file under `root`, relative path and contents, in sorted order.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}
