//! Character entity resolution.
//!
//! DBLP's DTD declares the ISO-8859-1 named entities (European diacritics)
//! on top of the five XML predefined ones. The table below covers exactly
//! that set plus numeric character references. Unknown entities are kept as
//! literal text and counted, never dropped.

/// Named entities, sorted by name for binary search.
/// XML predefined five plus the ISO-8859-1 set (U+00A0..U+00FF).
const NAMED: &[(&str, char)] = &[
    ("AElig", '\u{C6}'),
    ("Aacute", '\u{C1}'),
    ("Acirc", '\u{C2}'),
    ("Agrave", '\u{C0}'),
    ("Aring", '\u{C5}'),
    ("Atilde", '\u{C3}'),
    ("Auml", '\u{C4}'),
    ("Ccedil", '\u{C7}'),
    ("ETH", '\u{D0}'),
    ("Eacute", '\u{C9}'),
    ("Ecirc", '\u{CA}'),
    ("Egrave", '\u{C8}'),
    ("Euml", '\u{CB}'),
    ("Iacute", '\u{CD}'),
    ("Icirc", '\u{CE}'),
    ("Igrave", '\u{CC}'),
    ("Iuml", '\u{CF}'),
    ("Ntilde", '\u{D1}'),
    ("Oacute", '\u{D3}'),
    ("Ocirc", '\u{D4}'),
    ("Ograve", '\u{D2}'),
    ("Oslash", '\u{D8}'),
    ("Otilde", '\u{D5}'),
    ("Ouml", '\u{D6}'),
    ("THORN", '\u{DE}'),
    ("Uacute", '\u{DA}'),
    ("Ucirc", '\u{DB}'),
    ("Ugrave", '\u{D9}'),
    ("Uuml", '\u{DC}'),
    ("Yacute", '\u{DD}'),
    ("aacute", '\u{E1}'),
    ("acirc", '\u{E2}'),
    ("acute", '\u{B4}'),
    ("aelig", '\u{E6}'),
    ("agrave", '\u{E0}'),
    ("amp", '&'),
    ("apos", '\''),
    ("aring", '\u{E5}'),
    ("atilde", '\u{E3}'),
    ("auml", '\u{E4}'),
    ("brvbar", '\u{A6}'),
    ("ccedil", '\u{E7}'),
    ("cedil", '\u{B8}'),
    ("cent", '\u{A2}'),
    ("copy", '\u{A9}'),
    ("curren", '\u{A4}'),
    ("deg", '\u{B0}'),
    ("divide", '\u{F7}'),
    ("eacute", '\u{E9}'),
    ("ecirc", '\u{EA}'),
    ("egrave", '\u{E8}'),
    ("eth", '\u{F0}'),
    ("euml", '\u{EB}'),
    ("frac12", '\u{BD}'),
    ("frac14", '\u{BC}'),
    ("frac34", '\u{BE}'),
    ("gt", '>'),
    ("iacute", '\u{ED}'),
    ("icirc", '\u{EE}'),
    ("iexcl", '\u{A1}'),
    ("igrave", '\u{EC}'),
    ("iquest", '\u{BF}'),
    ("iuml", '\u{EF}'),
    ("laquo", '\u{AB}'),
    ("lt", '<'),
    ("macr", '\u{AF}'),
    ("micro", '\u{B5}'),
    ("middot", '\u{B7}'),
    ("nbsp", '\u{A0}'),
    ("not", '\u{AC}'),
    ("ntilde", '\u{F1}'),
    ("oacute", '\u{F3}'),
    ("ocirc", '\u{F4}'),
    ("ograve", '\u{F2}'),
    ("ordf", '\u{AA}'),
    ("ordm", '\u{BA}'),
    ("oslash", '\u{F8}'),
    ("otilde", '\u{F5}'),
    ("ouml", '\u{F6}'),
    ("para", '\u{B6}'),
    ("plusmn", '\u{B1}'),
    ("pound", '\u{A3}'),
    ("quot", '"'),
    ("raquo", '\u{BB}'),
    ("reg", '\u{AE}'),
    ("sect", '\u{A7}'),
    ("shy", '\u{AD}'),
    ("sup1", '\u{B9}'),
    ("sup2", '\u{B2}'),
    ("sup3", '\u{B3}'),
    ("szlig", '\u{DF}'),
    ("thorn", '\u{FE}'),
    ("times", '\u{D7}'),
    ("uacute", '\u{FA}'),
    ("ucirc", '\u{FB}'),
    ("ugrave", '\u{F9}'),
    ("uml", '\u{A8}'),
    ("uuml", '\u{FC}'),
    ("yacute", '\u{FD}'),
    ("yen", '\u{A5}'),
    ("yuml", '\u{FF}'),
];

pub(crate) fn lookup_named(name: &str) -> Option<char> {
    NAMED
        .binary_search_by_key(&name, |&(n, _)| n)
        .ok()
        .map(|i| NAMED[i].1)
}

/// `#?[A-Za-z0-9]+`; anything else after `&` is plain text, not a
/// reference attempt.
fn is_reference_shaped(body: &str) -> bool {
    let name = body.strip_prefix('#').unwrap_or(body);
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric())
}

fn resolve_numeric(body: &str) -> Option<char> {
    let code = if let Some(hex) = body.strip_prefix('x').or_else(|| body.strip_prefix('X')) {
        u32::from_str_radix(hex, 16).ok()?
    } else {
        body.parse::<u32>().ok()?
    };
    char::from_u32(code)
}

/// Resolve `&name;`, `&#NNN;` and `&#xHH;` references in `raw`.
/// Unresolvable references are emitted literally and tallied in
/// `unknown`. A bare `&` with no terminating `;` nearby is literal text.
pub(crate) fn decode_entities(raw: &str, unknown: &mut u64) -> String {
    if !raw.contains('&') {
        return raw.to_string();
    }
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp + 1..];
        // Entity names are short; don't scan past a plausible length.
        let semi = tail
            .char_indices()
            .take(12)
            .find(|&(_, c)| c == ';')
            .map(|(i, _)| i);
        let body = semi.map(|end| &tail[..end]);
        match body {
            Some(body) if is_reference_shaped(body) => {
                let resolved = if let Some(num) = body.strip_prefix('#') {
                    resolve_numeric(num)
                } else {
                    lookup_named(body)
                };
                match resolved {
                    Some(c) => out.push(c),
                    None => {
                        *unknown += 1;
                        out.push('&');
                        out.push_str(body);
                        out.push(';');
                    }
                }
                rest = &tail[body.len() + 1..];
            }
            _ => {
                out.push('&');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

/// Escape text for canonical XML output.
pub(crate) fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escape an attribute value (double-quoted context).
pub(crate) fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_sorted_for_binary_search() {
        for w in NAMED.windows(2) {
            assert!(w[0].0 < w[1].0, "{} >= {}", w[0].0, w[1].0);
        }
    }

    #[test]
    fn resolves_predefined_and_latin1() {
        let mut unknown = 0;
        assert_eq!(decode_entities("a &amp; b", &mut unknown), "a & b");
        assert_eq!(decode_entities("J&ouml;rg", &mut unknown), "Jörg");
        assert_eq!(decode_entities("&Eacute;cole", &mut unknown), "École");
        assert_eq!(unknown, 0);
    }

    #[test]
    fn resolves_numeric_references() {
        let mut unknown = 0;
        assert_eq!(decode_entities("&#228;", &mut unknown), "ä");
        assert_eq!(decode_entities("&#xE9;", &mut unknown), "é");
        assert_eq!(decode_entities("&#x442;", &mut unknown), "т");
        assert_eq!(unknown, 0);
    }

    #[test]
    fn unknown_entity_stays_literal_and_is_counted() {
        let mut unknown = 0;
        assert_eq!(
            decode_entities("&frobnicate;", &mut unknown),
            "&frobnicate;"
        );
        assert_eq!(unknown, 1);
        assert_eq!(
            decode_entities("&#xFFFFFFFF;", &mut unknown),
            "&#xFFFFFFFF;"
        );
        assert_eq!(unknown, 2);
    }

    #[test]
    fn bare_ampersand_is_literal() {
        let mut unknown = 0;
        assert_eq!(decode_entities("AT&T Labs", &mut unknown), "AT&T Labs");
        assert_eq!(decode_entities("a & b", &mut unknown), "a & b");
        assert_eq!(decode_entities("&T La; x", &mut unknown), "&T La; x");
        assert_eq!(unknown, 0);
    }
}
