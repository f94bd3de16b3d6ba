//! Minimal pull tokenizer for DBLP-flavored XML.
//!
//! Emits one markup event at a time over the byte scanner; text runs are
//! kept as raw bytes and decoded (charset + entities) on demand so that
//! memory stays proportional to a single token.

use std::io::Read;

use crate::error::{Error, Result};
use crate::ingest::entities;
use crate::ingest::scanner::Scanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Encoding {
    Latin1,
    Utf8,
}

#[derive(Debug)]
pub(crate) enum Markup {
    /// `<?xml ...?>` processing instruction (any target).
    Decl {
        encoding: Option<String>,
    },
    Comment,
    Doctype,
    StartTag {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    EndTag {
        name: String,
    },
    /// Raw text run between markup, undecoded.
    Text(Vec<u8>),
    Cdata(Vec<u8>),
    Eof,
}

pub(crate) struct Tokenizer<R: Read> {
    scan: Scanner<R>,
    pub encoding: Encoding,
    pub unknown_entities: u64,
}

impl<R: Read> Tokenizer<R> {
    pub fn new(input: R, max_lines: Option<u64>) -> Self {
        Tokenizer {
            scan: Scanner::new(input, max_lines),
            // DBLP ships ISO-8859-1; the declaration may override.
            encoding: Encoding::Latin1,
            unknown_entities: 0,
        }
    }

    pub fn line(&self) -> u64 {
        self.scan.line()
    }

    pub fn lines_consumed(&self) -> u64 {
        self.scan.lines_consumed()
    }

    pub fn budget_hit(&self) -> bool {
        self.scan.budget_hit()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Xml {
            line: self.scan.line(),
            msg: msg.into(),
        }
    }

    fn next_or_eof(&mut self) -> Result<u8> {
        self.scan
            .next_byte()?
            .ok_or_else(|| self.err("unexpected end of input inside markup"))
    }

    /// Decode a raw byte run per the active charset only. CDATA content
    /// goes through this; entity references stay literal there.
    pub fn decode_charset(&self, raw: &[u8]) -> Result<String> {
        match self.encoding {
            Encoding::Latin1 => Ok(raw.iter().map(|&b| b as char).collect()),
            Encoding::Utf8 => std::str::from_utf8(raw)
                .map(|s| s.to_string())
                .map_err(|e| self.err(format!("invalid UTF-8 text: {e}"))),
        }
    }

    /// Decode a raw byte run to a string per the active charset, then
    /// resolve entity references.
    pub fn decode_text(&mut self, raw: &[u8]) -> Result<String> {
        let s = self.decode_charset(raw)?;
        Ok(entities::decode_entities(&s, &mut self.unknown_entities))
    }

    /// Byte-level recovery: consume input until just past the next `>`.
    /// Returns false if end of input arrived first.
    pub fn skip_past_gt(&mut self) -> Result<bool> {
        while let Some(b) = self.scan.next_byte()? {
            if b == b'>' {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Read the next markup event. Text runs are returned raw.
    pub fn next_markup(&mut self) -> Result<Markup> {
        let first = match self.scan.peek_byte()? {
            None => return Ok(Markup::Eof),
            Some(b) => b,
        };
        if first != b'<' {
            let mut raw = Vec::new();
            while let Some(b) = self.scan.peek_byte()? {
                if b == b'<' {
                    break;
                }
                raw.push(b);
                self.scan.next_byte()?;
            }
            return Ok(Markup::Text(raw));
        }
        self.scan.next_byte()?; // '<'
        match self.scan.peek_byte()? {
            None => Err(self.err("unexpected end of input after '<'")),
            Some(b'?') => self.read_decl(),
            Some(b'!') => self.read_bang(),
            Some(b'/') => {
                self.scan.next_byte()?;
                let name = self.read_name()?;
                self.skip_ws()?;
                match self.next_or_eof()? {
                    b'>' => Ok(Markup::EndTag { name }),
                    c => Err(self.err(format!("expected '>' in end tag, found {:?}", c as char))),
                }
            }
            Some(_) => self.read_start_tag(),
        }
    }

    fn read_decl(&mut self) -> Result<Markup> {
        self.scan.next_byte()?; // '?'
        let mut content = Vec::new();
        loop {
            let b = self.next_or_eof()?;
            if b == b'?' {
                match self.next_or_eof()? {
                    b'>' => break,
                    other => {
                        content.push(b'?');
                        content.push(other);
                    }
                }
            } else {
                content.push(b);
            }
        }
        let text: String = content.iter().map(|&b| b as char).collect();
        let encoding = extract_encoding(&text);
        Ok(Markup::Decl { encoding })
    }

    fn read_bang(&mut self) -> Result<Markup> {
        self.scan.next_byte()?; // '!'
        match self.scan.peek_byte()? {
            Some(b'-') => {
                // <!-- ... -->
                self.scan.next_byte()?;
                match self.next_or_eof()? {
                    b'-' => {}
                    _ => return Err(self.err("malformed comment open")),
                }
                let mut dashes = 0;
                loop {
                    let b = self.next_or_eof()?;
                    if b == b'-' {
                        dashes += 1;
                    } else if b == b'>' && dashes >= 2 {
                        return Ok(Markup::Comment);
                    } else {
                        dashes = 0;
                    }
                }
            }
            Some(b'[') => {
                // <![CDATA[ ... ]]>
                for expected in *b"[CDATA[" {
                    let b = self.next_or_eof()?;
                    if b != expected {
                        return Err(self.err("malformed CDATA section open"));
                    }
                }
                let mut raw = Vec::new();
                loop {
                    let b = self.next_or_eof()?;
                    raw.push(b);
                    if raw.ends_with(b"]]>") {
                        raw.truncate(raw.len() - 3);
                        return Ok(Markup::Cdata(raw));
                    }
                }
            }
            _ => {
                // <!DOCTYPE ...> possibly with an internal subset [ ... ].
                let mut depth = 0i32;
                loop {
                    let b = self.next_or_eof()?;
                    match b {
                        b'[' => depth += 1,
                        b']' => depth -= 1,
                        b'>' if depth <= 0 => return Ok(Markup::Doctype),
                        _ => {}
                    }
                }
            }
        }
    }

    fn read_start_tag(&mut self) -> Result<Markup> {
        let name = self.read_name()?;
        let mut attrs = Vec::new();
        loop {
            self.skip_ws()?;
            match self.scan.peek_byte()? {
                None => return Err(self.err("unexpected end of input inside tag")),
                Some(b'>') => {
                    self.scan.next_byte()?;
                    return Ok(Markup::StartTag {
                        name,
                        attrs,
                        self_closing: false,
                    });
                }
                Some(b'/') => {
                    self.scan.next_byte()?;
                    match self.next_or_eof()? {
                        b'>' => {
                            return Ok(Markup::StartTag {
                                name,
                                attrs,
                                self_closing: true,
                            })
                        }
                        c => return Err(self.err(format!("expected '/>', found '/{}'", c as char))),
                    }
                }
                Some(_) => {
                    let key = self.read_name()?;
                    self.skip_ws()?;
                    match self.next_or_eof()? {
                        b'=' => {}
                        c => {
                            return Err(self.err(format!(
                                "expected '=' after attribute name, found {:?}",
                                c as char
                            )))
                        }
                    }
                    self.skip_ws()?;
                    let quote = self.next_or_eof()?;
                    if quote != b'"' && quote != b'\'' {
                        return Err(self.err("attribute value must be quoted"));
                    }
                    let mut raw = Vec::new();
                    loop {
                        let b = self.next_or_eof()?;
                        if b == quote {
                            break;
                        }
                        raw.push(b);
                    }
                    let value = self.decode_text(&raw)?;
                    attrs.push((key, value));
                }
            }
        }
    }

    fn read_name(&mut self) -> Result<String> {
        let mut name = String::new();
        loop {
            match self.scan.peek_byte()? {
                Some(b)
                    if b.is_ascii_alphanumeric()
                        || b == b'_'
                        || b == b'-'
                        || b == b'.'
                        || b == b':' =>
                {
                    name.push(b as char);
                    self.scan.next_byte()?;
                }
                _ => break,
            }
        }
        if name.is_empty() {
            Err(self.err("expected a name"))
        } else {
            Ok(name)
        }
    }

    fn skip_ws(&mut self) -> Result<()> {
        while let Some(b) = self.scan.peek_byte()? {
            if b == b' ' || b == b'\t' || b == b'\r' || b == b'\n' {
                self.scan.next_byte()?;
            } else {
                break;
            }
        }
        Ok(())
    }
}

fn extract_encoding(decl: &str) -> Option<String> {
    // ASCII lowering keeps byte offsets, so search lowered, slice original.
    let lower = decl.to_ascii_lowercase();
    let at = lower.find("encoding")?;
    let rest = &decl[at + "encoding".len()..];
    let eq = rest.find('=')?;
    let rest = rest[eq + 1..].trim_start();
    let quote = rest.chars().next()?;
    if quote != '"' && quote != '\'' {
        return None;
    }
    let rest = &rest[1..];
    let end = rest.find(quote)?;
    Some(rest[..end].to_string())
}

pub(crate) fn parse_encoding_name(name: &str) -> Option<Encoding> {
    match name.to_ascii_lowercase().as_str() {
        "iso-8859-1" | "latin-1" | "latin1" | "iso8859-1" => Some(Encoding::Latin1),
        "utf-8" | "utf8" => Some(Encoding::Utf8),
        _ => None,
    }
}
