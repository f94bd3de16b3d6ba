//! Streaming bound: parsing a ~100 MB document must not grow resident
//! memory with input size. The input is generated lazily by a `Read`
//! adapter so the document never exists in memory, and the peak-RSS
//! high-water mark is compared before and after the parse. Kept alone in
//! this test target so no other test inflates the process peak.

use std::io::Read;

use linkpred::ingest::{parse_stream, IngestConfig};

const TARGET_BYTES: u64 = 100 * 1024 * 1024;

/// Lazily emits a well-formed document of `target` bytes or slightly more,
/// one record at a time.
struct SyntheticDblp {
    emitted: u64,
    target: u64,
    record: u64,
    pending: Vec<u8>,
    offset: usize,
    state: State,
}

#[derive(PartialEq)]
enum State {
    Prolog,
    Records,
    Closed,
}

impl SyntheticDblp {
    fn new(target: u64) -> Self {
        SyntheticDblp {
            emitted: 0,
            target,
            record: 0,
            pending: Vec::new(),
            offset: 0,
            state: State::Prolog,
        }
    }

    fn refill(&mut self) {
        self.pending.clear();
        self.offset = 0;
        match self.state {
            State::Prolog => {
                self.pending.extend_from_slice(
                    b"<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n<dblp>\n",
                );
                self.state = State::Records;
            }
            State::Records => {
                if self.emitted >= self.target {
                    self.pending.extend_from_slice(b"</dblp>\n");
                    self.state = State::Closed;
                } else {
                    let i = self.record;
                    self.record += 1;
                    let record = format!(
                        "<article key=\"key/{i}\">\n<author>Author {a} Surname{i}</author>\n\
                         <author>Coauthor {b}</author>\n\
                         <title>A fairly ordinary title about topic {i} &amp; related matters</title>\n\
                         <year>{year}</year>\n<pages>1-{p}</pages>\n</article>\n",
                        a = i % 977,
                        b = i % 1031,
                        year = 1990 + (i % 30),
                        p = 1 + i % 40,
                    );
                    self.pending.extend_from_slice(record.as_bytes());
                }
            }
            State::Closed => {}
        }
    }
}

impl Read for SyntheticDblp {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        if self.offset >= self.pending.len() {
            if self.state == State::Closed {
                return Ok(0);
            }
            self.refill();
            if self.pending.is_empty() {
                return Ok(0);
            }
        }
        let n = buf.len().min(self.pending.len() - self.offset);
        buf[..n].copy_from_slice(&self.pending[self.offset..self.offset + n]);
        self.offset += n;
        self.emitted += n as u64;
        Ok(n)
    }
}

/// Current resident set size. VmHWM is unavailable in restricted
/// containers, so the test samples VmRSS as it goes; any memory use
/// proportional to input would show up across the samples.
#[cfg(target_os = "linux")]
fn rss_kb() -> u64 {
    let status = std::fs::read_to_string("/proc/self/status").expect("proc status readable");
    for line in status.lines() {
        if let Some(rest) = line.strip_prefix("VmRSS:") {
            return rest
                .trim()
                .trim_end_matches("kB")
                .trim()
                .parse()
                .expect("VmRSS parses");
        }
    }
    panic!("VmRSS not found in /proc/self/status");
}

#[cfg(target_os = "linux")]
#[test]
fn hundred_megabyte_parse_stays_within_flat_memory_ceiling() {
    let before_kb = rss_kb();

    let source = SyntheticDblp::new(TARGET_BYTES);
    let mut stream = parse_stream(source, IngestConfig::default()).unwrap();
    let mut records = 0u64;
    let mut author_chars = 0usize;
    let mut sampled_peak_kb = before_kb;
    for record in &mut stream {
        let record = record.unwrap();
        records += 1;
        author_chars += record.authors.iter().map(String::len).sum::<usize>();
        if records % 10_000 == 0 {
            sampled_peak_kb = sampled_peak_kb.max(rss_kb());
        }
    }
    let stats = stream.stats();
    sampled_peak_kb = sampled_peak_kb.max(rss_kb());

    let grown_kb = sampled_peak_kb.saturating_sub(before_kb);
    assert!(
        grown_kb < 64 * 1024,
        "resident memory grew by {grown_kb} kB while parsing ~100 MB"
    );

    assert_eq!(stats.records_read, records);
    assert_eq!(stats.records_skipped, 0);
    assert!(records > 300_000, "only {records} records in ~100 MB");
    assert!(author_chars > 0);
    println!("parsed {records} records (~100 MB) with sampled RSS growth {grown_kb} kB");
}

#[test]
fn two_parses_of_identical_input_agree_exactly() {
    // Determinism at stream scale: same byte stream, same sequence.
    let collect = || {
        let source = SyntheticDblp::new(256 * 1024);
        let mut stream = parse_stream(source, IngestConfig::default()).unwrap();
        let pubs: Vec<_> = (&mut stream).collect::<Result<Vec<_>, _>>().unwrap();
        (pubs, stream.stats())
    };
    let (a, sa) = collect();
    let (b, sb) = collect();
    assert_eq!(a, b);
    assert_eq!(sa, sb);
    assert!(!a.is_empty());
}
