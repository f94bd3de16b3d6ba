//! Attribute-relation file format (ARFF) reader and writer.
//!
//! The writer emits `@RELATION`, one `@ATTRIBUTE <name> NUMERIC` per
//! feature, a final nominal `@ATTRIBUTE class {0,1}`, `@DATA`, and
//! comma-separated rows with floats in shortest round-trip decimal form,
//! each line ending in a single newline. The reader accepts that grammar
//! plus `%` comments, blank lines, case-insensitive keywords, and quoted
//! names. Attribute types other than NUMERIC and nominal are rejected, as
//! is the missing-value token `?`.

use std::io::{self, BufRead, BufReader, Read, Write};

use crate::dataset::{Dataset, DatasetMeta, Instance};
use crate::error::{Error, Result};

/// Attribute type: numeric, or nominal over a fixed value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttrType {
    Numeric,
    Nominal(Vec<String>),
}

/// A parsed ARFF document, before conversion into a [`Dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArffDocument {
    pub relation: String,
    pub attributes: Vec<(String, AttrType)>,
    /// Rows of raw values, arity equal to the attribute count.
    pub rows: Vec<Vec<String>>,
}

fn needs_quoting(name: &str) -> bool {
    name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || c == ',' || c == '%' || c == '{' || c == '}' || c == '\'')
}

fn quote_name(name: &str) -> String {
    if needs_quoting(name) {
        format!("'{}'", name.replace('\'', "\\'"))
    } else {
        name.to_string()
    }
}

/// Serialize a dataset. Feature attributes are NUMERIC in schema order;
/// the class attribute is last, nominal {0,1}.
pub fn write_arff<W: Write>(d: &Dataset, relation: &str, w: &mut W) -> io::Result<()> {
    writeln!(w, "@RELATION {}", quote_name(relation))?;
    for name in &d.feature_names {
        writeln!(w, "@ATTRIBUTE {} NUMERIC", quote_name(name))?;
    }
    writeln!(w, "@ATTRIBUTE class {{0,1}}")?;
    writeln!(w, "@DATA")?;
    for inst in &d.instances {
        for x in &inst.features {
            write!(w, "{x},")?;
        }
        writeln!(w, "{}", inst.label)?;
    }
    Ok(())
}

/// [`write_arff`] into a string.
pub fn write_arff_string(d: &Dataset, relation: &str) -> String {
    let mut buf = Vec::new();
    write_arff(d, relation, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ARFF output is UTF-8")
}

fn arff_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Arff {
        line,
        msg: msg.into(),
    }
}

/// Case-insensitive keyword at the start of the line, followed by
/// whitespace or end of line. Returns the remainder.
fn strip_keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    if line.len() >= keyword.len() && line[..keyword.len()].eq_ignore_ascii_case(keyword) {
        let rest = &line[keyword.len()..];
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return Some(rest);
        }
    }
    None
}

/// Take one token off `s`: quoted ('...' or "...") or bare (up to
/// whitespace). Returns (token, rest).
fn take_token(s: &str, line: usize) -> Result<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err(arff_err(line, "expected a name")),
        Some((_, q)) if q == '\'' || q == '"' => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err(arff_err(line, "unterminated quoted name"))
        }
        Some(_) => {
            let end = s
                .char_indices()
                .find(|&(_, c)| c.is_whitespace())
                .map(|(i, _)| i)
                .unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

fn parse_nominal_set(spec: &str, line: usize) -> Result<Vec<String>> {
    let spec = spec.trim();
    let inner = spec
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| arff_err(line, "malformed nominal value set"))?;
    let values: Vec<String> = inner
        .split(',')
        .map(|v| v.trim().trim_matches('\'').trim_matches('"').to_string())
        .collect();
    if values.is_empty() || values.iter().any(|v| v.is_empty()) {
        return Err(arff_err(line, "nominal value set has empty values"));
    }
    Ok(values)
}

/// Parse an ARFF document.
pub fn parse_document<R: Read>(input: R) -> Result<ArffDocument> {
    let reader = BufReader::new(input);
    let mut relation: Option<String> = None;
    let mut attributes: Vec<(String, AttrType)> = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut in_data = false;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if !in_data {
            if let Some(rest) = strip_keyword(trimmed, "@relation") {
                if relation.is_some() {
                    return Err(arff_err(lineno, "duplicate @RELATION"));
                }
                let (name, _) = take_token(rest, lineno)?;
                relation = Some(name);
            } else if let Some(rest) = strip_keyword(trimmed, "@attribute") {
                if relation.is_none() {
                    return Err(arff_err(lineno, "@ATTRIBUTE before @RELATION"));
                }
                let (name, rest) = take_token(rest, lineno)?;
                let type_spec = rest.trim();
                if type_spec.is_empty() {
                    return Err(arff_err(lineno, "attribute has no type"));
                }
                let attr_type = if type_spec.starts_with('{') {
                    AttrType::Nominal(parse_nominal_set(type_spec, lineno)?)
                } else if type_spec.eq_ignore_ascii_case("numeric") {
                    AttrType::Numeric
                } else {
                    return Err(arff_err(
                        lineno,
                        format!("unsupported attribute type {type_spec:?} (only NUMERIC and nominal sets)"),
                    ));
                };
                attributes.push((name, attr_type));
            } else if strip_keyword(trimmed, "@data").is_some_and(|r| r.trim().is_empty()) {
                if relation.is_none() {
                    return Err(arff_err(lineno, "@DATA before @RELATION"));
                }
                if attributes.is_empty() {
                    return Err(arff_err(lineno, "@DATA with no attributes"));
                }
                in_data = true;
            } else {
                return Err(arff_err(lineno, format!("unexpected content {trimmed:?}")));
            }
        } else {
            if trimmed.starts_with('@') {
                return Err(arff_err(lineno, "keyword inside data section"));
            }
            if trimmed.starts_with('{') {
                return Err(arff_err(lineno, "sparse data rows are not supported"));
            }
            let values: Vec<String> = trimmed.split(',').map(|v| v.trim().to_string()).collect();
            if values.len() != attributes.len() {
                return Err(arff_err(
                    lineno,
                    format!(
                        "row has {} values, expected {}",
                        values.len(),
                        attributes.len()
                    ),
                ));
            }
            for (value, (name, attr_type)) in values.iter().zip(&attributes) {
                if value == "?" {
                    return Err(arff_err(
                        lineno,
                        format!("missing value '?' for attribute {name}"),
                    ));
                }
                match attr_type {
                    AttrType::Numeric => {
                        let parsed: f64 = value.parse().map_err(|_| {
                            arff_err(lineno, format!("invalid numeric value {value:?}"))
                        })?;
                        if !parsed.is_finite() {
                            return Err(arff_err(
                                lineno,
                                format!("non-finite numeric value {value:?}"),
                            ));
                        }
                    }
                    AttrType::Nominal(set) => {
                        if !set.iter().any(|v| v == value) {
                            return Err(arff_err(
                                lineno,
                                format!("value {value:?} outside nominal set for {name}"),
                            ));
                        }
                    }
                }
            }
            rows.push(values);
        }
    }

    let relation = relation.ok_or_else(|| arff_err(0, "no @RELATION found"))?;
    if !in_data {
        return Err(arff_err(0, "no @DATA section found"));
    }
    Ok(ArffDocument {
        relation,
        attributes,
        rows,
    })
}

/// Read a dataset: all feature attributes NUMERIC, the class attribute
/// last and nominal over {0,1}.
pub fn read_arff<R: Read>(input: R) -> Result<Dataset> {
    let doc = parse_document(input)?;
    let (class_name, class_type) = doc
        .attributes
        .last()
        .ok_or_else(|| arff_err(0, "document has no attributes"))?;
    match class_type {
        AttrType::Nominal(values) => {
            let mut sorted = values.clone();
            sorted.sort();
            if sorted != ["0", "1"] {
                return Err(arff_err(
                    0,
                    format!("class attribute {class_name} must be nominal {{0,1}}"),
                ));
            }
        }
        AttrType::Numeric => {
            return Err(arff_err(
                0,
                format!("class attribute {class_name} must be nominal {{0,1}}"),
            ));
        }
    }
    let mut feature_names = Vec::new();
    for (name, attr_type) in &doc.attributes[..doc.attributes.len() - 1] {
        if *attr_type != AttrType::Numeric {
            return Err(arff_err(
                0,
                format!("feature attribute {name} must be NUMERIC"),
            ));
        }
        feature_names.push(name.clone());
    }

    let mut instances = Vec::with_capacity(doc.rows.len());
    for row in &doc.rows {
        let (class_value, feature_values) = row.split_last().expect("arity checked");
        let features: Vec<f64> = feature_values
            .iter()
            .map(|v| v.parse::<f64>().expect("validated during parse"))
            .collect();
        let label = if class_value == "1" { 1 } else { 0 };
        instances.push(Instance {
            pair: None,
            features,
            label,
        });
    }

    Ok(Dataset {
        feature_names,
        instances,
        meta: DatasetMeta {
            name: doc.relation,
            ..DatasetMeta::default()
        },
    })
}
