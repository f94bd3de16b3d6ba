//! Streaming ingest of DBLP-format XML into publication records.
//!
//! The parser pulls records one at a time off a byte stream; memory use is
//! bounded by the size of a single record regardless of file size. An
//! optional physical-line budget truncates the raw input before parsing
//! (a record cut off by the budget is discarded and counted, never
//! yielded). Character data is decoded per the XML declaration's charset
//! (ISO-8859-1 when absent, as DBLP ships) and entity references are
//! resolved against the DTD's ISO-8859-1 named set; unknown entities stay
//! literal and are tallied.

mod entities;
mod scanner;
mod xml;

use std::collections::HashSet;
use std::io::Read;

use crate::error::{Error, Result};
use xml::{Markup, Tokenizer};

/// DBLP record element kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PublicationKind {
    Article,
    Inproceedings,
    Proceedings,
    Book,
    Incollection,
    Phdthesis,
    Mastersthesis,
    Www,
}

impl PublicationKind {
    pub const ALL: [PublicationKind; 8] = [
        PublicationKind::Article,
        PublicationKind::Inproceedings,
        PublicationKind::Proceedings,
        PublicationKind::Book,
        PublicationKind::Incollection,
        PublicationKind::Phdthesis,
        PublicationKind::Mastersthesis,
        PublicationKind::Www,
    ];

    /// The kinds treated as papers when building co-authorship graphs.
    pub fn default_paper_kinds() -> [PublicationKind; 4] {
        [
            PublicationKind::Article,
            PublicationKind::Inproceedings,
            PublicationKind::Incollection,
            PublicationKind::Book,
        ]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PublicationKind::Article => "article",
            PublicationKind::Inproceedings => "inproceedings",
            PublicationKind::Proceedings => "proceedings",
            PublicationKind::Book => "book",
            PublicationKind::Incollection => "incollection",
            PublicationKind::Phdthesis => "phdthesis",
            PublicationKind::Mastersthesis => "mastersthesis",
            PublicationKind::Www => "www",
        }
    }

    pub fn from_tag(tag: &str) -> Option<PublicationKind> {
        Self::ALL.iter().copied().find(|k| k.as_str() == tag)
    }
}

impl std::fmt::Display for PublicationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub key: String,
    pub kind: PublicationKind,
    pub title: String,
    /// Missing or unparseable years are `None` and tallied in the stats,
    /// not dropped. Valid years fall in 1900..=2100.
    pub year: Option<i32>,
    /// Ordered author names, duplicates within a record removed.
    pub authors: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MalformedPolicy {
    #[default]
    SkipRecord,
    Abort,
}

/// Ingest options. `max_lines` counts physical newline-terminated lines of
/// the raw file before parsing.
#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    pub max_lines: Option<u64>,
    pub year_lo: Option<i32>,
    pub year_hi: Option<i32>,
    /// Restrict to these record kinds; `None` keeps all.
    pub kinds: Option<Vec<PublicationKind>>,
    pub on_malformed: MalformedPolicy,
}

impl IngestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_lines == Some(0) {
            return Err(Error::InvalidConfig("max_lines must be positive".into()));
        }
        if let (Some(lo), Some(hi)) = (self.year_lo, self.year_hi) {
            if lo > hi {
                return Err(Error::InvalidYearRange { lo, hi });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    /// Records parsed and yielded.
    pub records_read: u64,
    /// Records discarded as malformed or truncated by the line budget.
    pub records_skipped: u64,
    /// Records parsed but dropped by the kind/year filters.
    pub records_filtered: u64,
    /// Physical lines consumed, counting a trailing partial line.
    pub lines_consumed: u64,
    /// Yielded or filtered records with a missing/unparseable year.
    pub missing_year: u64,
    /// Entity references that could not be resolved and stayed literal.
    pub unknown_entities: u64,
}

/// Streaming record iterator over DBLP-format XML.
pub struct RecordStream<R: Read> {
    tok: Tokenizer<R>,
    cfg: IngestConfig,
    stats: IngestStats,
    kind_filter: Option<HashSet<PublicationKind>>,
    finished: bool,
}

/// Open a DBLP-format XML stream. Reads the prolog eagerly: fails fast on
/// empty input, a missing `<dblp>` root, or an unsupported encoding.
pub fn parse_stream<R: Read>(input: R, cfg: IngestConfig) -> Result<RecordStream<R>> {
    cfg.validate()?;
    let mut tok = Tokenizer::new(input, cfg.max_lines);
    let mut saw_anything = false;
    loop {
        match tok.next_markup()? {
            Markup::Decl { encoding } => {
                saw_anything = true;
                if let Some(name) = encoding {
                    match xml::parse_encoding_name(&name) {
                        Some(enc) => tok.encoding = enc,
                        None => {
                            return Err(Error::Xml {
                                line: tok.line(),
                                msg: format!("unsupported encoding {name:?}"),
                            })
                        }
                    }
                }
            }
            Markup::Comment | Markup::Doctype => saw_anything = true,
            Markup::Text(raw) => {
                if !raw.iter().all(|b| b.is_ascii_whitespace()) {
                    return Err(Error::MissingRoot);
                }
            }
            Markup::StartTag { name, .. } if name == "dblp" => break,
            Markup::StartTag { .. } | Markup::EndTag { .. } | Markup::Cdata(_) => {
                return Err(Error::MissingRoot)
            }
            Markup::Eof => {
                return Err(if saw_anything {
                    Error::MissingRoot
                } else {
                    Error::EmptyInput
                });
            }
        }
    }
    let kind_filter = cfg
        .kinds
        .as_ref()
        .map(|ks| ks.iter().copied().collect::<HashSet<_>>());
    Ok(RecordStream {
        tok,
        cfg,
        stats: IngestStats::default(),
        kind_filter,
        finished: false,
    })
}

/// Parse the whole stream into memory. Prefer [`parse_stream`] when the
/// record sequence can be consumed incrementally.
pub fn parse_all<R: Read>(input: R, cfg: IngestConfig) -> Result<(Vec<Publication>, IngestStats)> {
    let mut stream = parse_stream(input, cfg)?;
    let mut pubs = Vec::new();
    for record in &mut stream {
        pubs.push(record?);
    }
    Ok((pubs, stream.stats()))
}

impl<R: Read> RecordStream<R> {
    /// Live counters; final once the iterator is exhausted.
    pub fn stats(&self) -> IngestStats {
        let mut s = self.stats;
        s.lines_consumed = self.tok.lines_consumed();
        s.unknown_entities = self.tok.unknown_entities;
        s
    }

    fn passes_filters(&mut self, record: &Publication) -> bool {
        if let Some(kinds) = &self.kind_filter {
            if !kinds.contains(&record.kind) {
                return false;
            }
        }
        if self.cfg.year_lo.is_some() || self.cfg.year_hi.is_some() {
            // Year-based filtering excludes yearless records.
            let year = match record.year {
                Some(y) => y,
                None => return false,
            };
            if let Some(lo) = self.cfg.year_lo {
                if year < lo {
                    return false;
                }
            }
            if let Some(hi) = self.cfg.year_hi {
                if year > hi {
                    return false;
                }
            }
        }
        true
    }

    /// Parse one record element; the opening tag has been consumed.
    fn parse_record(
        &mut self,
        kind: PublicationKind,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    ) -> Result<Publication> {
        let key = attrs
            .into_iter()
            .find(|(k, _)| k == "key")
            .map(|(_, v)| v)
            .unwrap_or_default();
        let mut record = Publication {
            key,
            kind,
            title: String::new(),
            year: None,
            authors: Vec::new(),
        };
        if self_closing {
            return Ok(record);
        }
        let mut year_present = false;
        loop {
            match self.tok.next_markup()? {
                Markup::StartTag {
                    name, self_closing, ..
                } => {
                    let text = if self_closing {
                        String::new()
                    } else {
                        self.read_element_text()?
                    };
                    match name.as_str() {
                        "author" | "editor" => {
                            let author = text.trim().to_string();
                            if !author.is_empty() && !record.authors.contains(&author) {
                                record.authors.push(author);
                            }
                        }
                        "title" => record.title = text.trim().to_string(),
                        "year" => {
                            year_present = true;
                            record.year = match text.trim().parse::<i32>() {
                                Ok(y) if (1900..=2100).contains(&y) => Some(y),
                                _ => None,
                            };
                        }
                        // pages, crossref, url, ee, ... parsed past, not retained
                        _ => {}
                    }
                }
                Markup::Text(_) | Markup::Cdata(_) | Markup::Comment => {}
                Markup::EndTag { name } if name == kind.as_str() => break,
                Markup::EndTag { name } => {
                    return Err(Error::Xml {
                        line: self.tok.line(),
                        msg: format!("mismatched end tag </{name}> inside <{kind}>"),
                    });
                }
                Markup::Decl { .. } | Markup::Doctype => {
                    return Err(Error::Xml {
                        line: self.tok.line(),
                        msg: format!("unexpected markup inside <{kind}>"),
                    });
                }
                Markup::Eof => {
                    return Err(Error::Xml {
                        line: self.tok.line(),
                        msg: format!("record <{kind}> truncated"),
                    });
                }
            }
        }
        if !year_present || record.year.is_none() {
            self.stats.missing_year += 1;
        }
        Ok(record)
    }

    /// Text content of the element whose start tag was just consumed,
    /// flattening nested inline markup (`<i>`, `<sub>`, ...).
    fn read_element_text(&mut self) -> Result<String> {
        let mut depth = 1u32;
        let mut text = String::new();
        loop {
            match self.tok.next_markup()? {
                Markup::StartTag { self_closing, .. } => {
                    if !self_closing {
                        depth += 1;
                    }
                }
                Markup::EndTag { .. } => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(text);
                    }
                }
                Markup::Text(raw) => text.push_str(&self.tok.decode_text(&raw)?),
                Markup::Cdata(raw) => text.push_str(&self.tok.decode_charset(&raw)?),
                Markup::Comment => {}
                Markup::Decl { .. } | Markup::Doctype => {
                    return Err(Error::Xml {
                        line: self.tok.line(),
                        msg: "unexpected markup inside element".into(),
                    });
                }
                Markup::Eof => {
                    return Err(Error::Xml {
                        line: self.tok.line(),
                        msg: "element truncated".into(),
                    });
                }
            }
        }
    }

    /// Best-effort recovery after a malformed record in skip mode: consume
    /// markup (or raw bytes when tokenization keeps failing) until the
    /// element's end tag or end of input.
    fn resync(&mut self, element: &str) -> Result<()> {
        loop {
            match self.tok.next_markup() {
                Ok(Markup::Eof) => {
                    self.finished = true;
                    return Ok(());
                }
                Ok(Markup::EndTag { name }) if name == element => return Ok(()),
                Ok(_) => {}
                Err(Error::Io(e)) => return Err(Error::Io(e)),
                Err(_) => {
                    if !self.tok.skip_past_gt()? {
                        self.finished = true;
                        return Ok(());
                    }
                }
            }
        }
    }

    /// Handle a parse failure per policy. Returns `Some(err)` to surface.
    fn on_malformed(&mut self, err: Error, recovery: Recovery<'_>) -> Option<Error> {
        if matches!(err, Error::Io(_)) {
            return Some(err);
        }
        if self.tok.budget_hit() {
            // Truncation by the configured line budget is expected: the
            // partial record is discarded and counted, never surfaced.
            self.stats.records_skipped += 1;
            self.finished = true;
            return None;
        }
        match self.cfg.on_malformed {
            MalformedPolicy::Abort => Some(err),
            MalformedPolicy::SkipRecord => {
                self.stats.records_skipped += 1;
                let resync = match recovery {
                    Recovery::ToElementEnd(name) => self.resync(name),
                    Recovery::PastMarkup => {
                        if !self.tok.skip_past_gt().unwrap_or(false) {
                            self.finished = true;
                        }
                        Ok(())
                    }
                    // The offending markup was fully consumed already.
                    Recovery::Consumed => Ok(()),
                };
                resync.err()
            }
        }
    }
}

/// How to resynchronize the stream after a malformed construct.
enum Recovery<'a> {
    /// Consume until the named element's end tag.
    ToElementEnd(&'a str),
    /// Tokenization failed mid-markup: consume raw bytes past the next `>`.
    PastMarkup,
    /// Nothing left to consume.
    Consumed,
}

impl<R: Read> Iterator for RecordStream<R> {
    type Item = Result<Publication>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.finished {
                return None;
            }
            let markup = match self.tok.next_markup() {
                Ok(m) => m,
                Err(e) => match self.on_malformed(e, Recovery::PastMarkup) {
                    Some(err) => {
                        self.finished = true;
                        return Some(Err(err));
                    }
                    None => continue,
                },
            };
            match markup {
                Markup::StartTag {
                    name,
                    attrs,
                    self_closing,
                } => match PublicationKind::from_tag(&name) {
                    Some(kind) => match self.parse_record(kind, attrs, self_closing) {
                        Ok(record) => {
                            if self.passes_filters(&record) {
                                self.stats.records_read += 1;
                                return Some(Ok(record));
                            }
                            self.stats.records_filtered += 1;
                        }
                        Err(e) => {
                            let recovery = Recovery::ToElementEnd(kind.as_str());
                            if let Some(err) = self.on_malformed(e, recovery) {
                                self.finished = true;
                                return Some(Err(err));
                            }
                        }
                    },
                    None => {
                        let err = Error::Xml {
                            line: self.tok.line(),
                            msg: format!("unknown record element <{name}>"),
                        };
                        let recovery = if self_closing {
                            Recovery::Consumed
                        } else {
                            Recovery::ToElementEnd(&name)
                        };
                        if let Some(err) = self.on_malformed(err, recovery) {
                            self.finished = true;
                            return Some(Err(err));
                        }
                    }
                },
                Markup::EndTag { name } if name == "dblp" => {
                    self.finished = true;
                    return None;
                }
                Markup::EndTag { name } => {
                    let err = Error::Xml {
                        line: self.tok.line(),
                        msg: format!("unexpected end tag </{name}>"),
                    };
                    if let Some(err) = self.on_malformed(err, Recovery::Consumed) {
                        self.finished = true;
                        return Some(Err(err));
                    }
                }
                Markup::Eof => {
                    self.finished = true;
                    return None;
                }
                Markup::Text(_) | Markup::Cdata(_) | Markup::Comment => {}
                Markup::Decl { .. } | Markup::Doctype => {}
            }
        }
    }
}

/// Keep publications with a year in `[year_lo, year_hi]` and at least one
/// author; input order is preserved.
pub fn filter_publications(
    pubs: &[Publication],
    year_lo: i32,
    year_hi: i32,
) -> Result<Vec<Publication>> {
    if year_lo > year_hi {
        return Err(Error::InvalidYearRange {
            lo: year_lo,
            hi: year_hi,
        });
    }
    Ok(pubs
        .iter()
        .filter(|p| {
            !p.authors.is_empty() && matches!(p.year, Some(y) if y >= year_lo && y <= year_hi)
        })
        .cloned()
        .collect())
}

/// Serialize one record back to canonical XML (UTF-8, one line).
pub fn to_canonical_xml(p: &Publication) -> String {
    let mut out = String::new();
    out.push('<');
    out.push_str(p.kind.as_str());
    out.push_str(" key=\"");
    out.push_str(&entities::escape_attr(&p.key));
    out.push_str("\">");
    for author in &p.authors {
        out.push_str("<author>");
        out.push_str(&entities::escape_text(author));
        out.push_str("</author>");
    }
    out.push_str("<title>");
    out.push_str(&entities::escape_text(&p.title));
    out.push_str("</title>");
    if let Some(y) = p.year {
        out.push_str(&format!("<year>{y}</year>"));
    }
    out.push_str("</");
    out.push_str(p.kind.as_str());
    out.push('>');
    out
}

/// Serialize records as a complete canonical UTF-8 document.
pub fn publications_to_xml(pubs: &[Publication]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dblp>\n");
    for p in pubs {
        out.push_str(&to_canonical_xml(p));
        out.push('\n');
    }
    out.push_str("</dblp>\n");
    out
}
