//! Chunked byte source with line accounting and an optional physical-line
//! budget. The budget counts newline-terminated lines of the raw input
//! before any parsing: once `max_lines` newlines have been consumed the
//! source reports end-of-input, even mid-record.

use std::io::Read;

use crate::error::Result;

const CHUNK: usize = 64 * 1024;

pub(crate) struct Scanner<R: Read> {
    inner: R,
    buf: Vec<u8>,
    pos: usize,
    len: usize,
    eof: bool,
    /// 1-based line of the next byte to be consumed.
    line: u64,
    newlines: u64,
    /// Bytes consumed since the last newline.
    partial: bool,
    max_lines: Option<u64>,
    budget_hit: bool,
}

impl<R: Read> Scanner<R> {
    pub fn new(inner: R, max_lines: Option<u64>) -> Self {
        Scanner {
            inner,
            buf: vec![0; CHUNK],
            pos: 0,
            len: 0,
            eof: false,
            line: 1,
            newlines: 0,
            partial: false,
            max_lines,
            budget_hit: max_lines == Some(0),
        }
    }

    fn fill(&mut self) -> Result<()> {
        if self.eof {
            return Ok(());
        }
        self.pos = 0;
        self.len = self.inner.read(&mut self.buf)?;
        if self.len == 0 {
            self.eof = true;
        }
        Ok(())
    }

    /// Next raw byte, or `None` at end of input / exhausted line budget.
    pub fn next_byte(&mut self) -> Result<Option<u8>> {
        if self.budget_hit {
            return Ok(None);
        }
        if self.pos >= self.len {
            self.fill()?;
            if self.pos >= self.len {
                return Ok(None);
            }
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.newlines += 1;
            self.line += 1;
            self.partial = false;
            if Some(self.newlines) == self.max_lines {
                self.budget_hit = true;
            }
        } else {
            self.partial = true;
        }
        Ok(Some(b))
    }

    pub fn peek_byte(&mut self) -> Result<Option<u8>> {
        if self.budget_hit {
            return Ok(None);
        }
        if self.pos >= self.len {
            self.fill()?;
            if self.pos >= self.len {
                return Ok(None);
            }
        }
        Ok(Some(self.buf[self.pos]))
    }

    /// Line number of the byte about to be consumed (1-based).
    pub fn line(&self) -> u64 {
        self.line
    }

    /// Physical lines consumed so far: completed lines, plus one for a
    /// trailing partial line.
    pub fn lines_consumed(&self) -> u64 {
        self.newlines + u64::from(self.partial)
    }

    /// True once the line budget cut the stream off.
    pub fn budget_hit(&self) -> bool {
        self.budget_hit
    }
}
