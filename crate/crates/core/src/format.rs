//! Text formats for generator matrices, templates and received words.
//!
//! ```text
//! field gf(3)
//! params m=2 l=2 r=1,1 k=3
//! 1 0 1 0 1 1
//! 0 1 2 0 1 1
//! 0 0 0 1 1 2
//! ```
//!
//! Entries are canonical integers (polynomial-basis bit packing for
//! `gf(2^h)`). Templates may use `*` for free entries and received words
//! `?` for erasures. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::classify::Template;
use crate::decode::ReceivedWord;
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::pmds::PmdsParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("body is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Value(u32),
    Star,
    Erased,
}

struct Parsed {
    field: Option<FieldSpec>,
    params: Option<PmdsParams>,
    body: Vec<Vec<Token>>,
}

fn parse_params(line: usize, rest: &str) -> Result<PmdsParams, FormatError> {
    let (mut m, mut l, mut r, mut k) = (None, None, None, None);
    for kv in rest.split_whitespace() {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected key=value, got `{kv}`")))?;
        let int = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| syntax(line, format!("`{v}` is not a non-negative integer")))
        };
        match key {
            "m" => m = Some(int(value)?),
            "l" => l = Some(int(value)?),
            "k" => k = Some(int(value)?),
            "r" => r = Some(value.split(',').map(int).collect::<Result<Vec<_>, _>>()?),
            _ => return Err(syntax(line, format!("unknown parameter `{key}`"))),
        }
    }
    let missing = |name: &str| syntax(line, format!("params line lacks `{name}=`"));
    PmdsParams::new(
        m.ok_or_else(|| missing("m"))?,
        l.ok_or_else(|| missing("l"))?,
        r.ok_or_else(|| missing("r"))?,
        k.ok_or_else(|| missing("k"))?,
    )
    .map_err(|e| syntax(line, e.to_string()))
}

fn parse(text: &str) -> Result<Parsed, FormatError> {
    let mut out = Parsed {
        field: None,
        params: None,
        body: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("field ") {
            if out.field.is_some() || !out.body.is_empty() {
                return Err(syntax(line, "`field` must appear once, before the body"));
            }
            out.field = Some(rest.trim().parse().map_err(|e| syntax(line, format!("{e}")))?);
        } else if let Some(rest) = t.strip_prefix("params ") {
            if out.params.is_some() || !out.body.is_empty() {
                return Err(syntax(line, "`params` must appear once, before the body"));
            }
            out.params = Some(parse_params(line, rest)?);
        } else {
            let row = t
                .split_whitespace()
                .map(|tok| match tok {
                    "*" => Ok(Token::Star),
                    "?" => Ok(Token::Erased),
                    _ => tok
                        .parse::<u32>()
                        .map(Token::Value)
                        .map_err(|_| syntax(line, format!("bad entry `{tok}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(f) = &out.field {
                let bad = row.iter().find_map(|t| match t {
                    Token::Value(v) if !f.contains(*v) => Some(*v),
                    _ => None,
                });
                if let Some(v) = bad {
                    return Err(syntax(line, format!("{v} is not an element of {f}")));
                }
            }
            out.body.push(row);
        }
    }
    Ok(out)
}

fn check_shape(body: &[Vec<Token>], rows: usize, cols: usize) -> Result<(), FormatError> {
    if body.len() != rows || body.iter().any(|r| r.len() != cols) {
        return Err(FormatError::Shape {
            rows: body.len(),
            cols: body.iter().map(Vec::len).max().unwrap_or(0),
            expected_rows: rows,
            expected_cols: cols,
        });
    }
    Ok(())
}

fn header(field: &FieldSpec, params: &PmdsParams) -> String {
    let r: Vec<String> = params.r.iter().map(usize::to_string).collect();
    format!(
        "field {field}\nparams m={} l={} r={} k={}\n",
        params.m,
        params.ell,
        r.join(","),
        params.k
    )
}

fn join<T: ToString>(row: impl IntoIterator<Item = T>) -> String {
    row.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// A generator matrix with its field and parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFile {
    pub params: PmdsParams,
    pub matrix: Matrix,
}

impl CodeFile {
    pub fn new(params: PmdsParams, matrix: Matrix) -> Result<Self, FormatError> {
        if matrix.rows() != params.k || matrix.cols() != params.n() {
            return Err(FormatError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: params.k,
                expected_cols: params.n(),
            });
        }
        Ok(Self { params, matrix })
    }

    pub fn field(&self) -> &FieldSpec {
        self.matrix.field()
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let p = parse(text)?;
        let field = p.field.ok_or(FormatError::MissingHeader("field"))?;
        let params = p.params.ok_or(FormatError::MissingHeader("params"))?;
        check_shape(&p.body, params.k, params.n())?;
        let mut data = Vec::with_capacity(params.k * params.n());
        for (r, row) in p.body.iter().enumerate() {
            for tok in row {
                match tok {
                    Token::Value(v) => data.push(*v),
                    _ => return Err(syntax(0, format!("wildcard or erasure in matrix row {r}"))),
                }
            }
        }
        let matrix = Matrix::new(field, params.k, params.n(), data).expect("shape and entries checked");
        Ok(Self { params, matrix })
    }

    /// Canonical text: the two header lines then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = header(self.field(), &self.params);
        for r in 0..self.matrix.rows() {
            let _ = writeln!(s, "{}", join(self.matrix.row(r)));
        }
        s
    }
}

/// A partially specified generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateFile {
    pub params: PmdsParams,
    pub template: Template,
}

impl TemplateFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let p = parse(text)?;
        let field = p.field.ok_or(FormatError::MissingHeader("field"))?;
        let params = p.params.ok_or(FormatError::MissingHeader("params"))?;
        check_shape(&p.body, params.k, params.n())?;
        let mut entries = Vec::with_capacity(params.k * params.n());
        for tok in p.body.iter().flatten() {
            match tok {
                Token::Value(v) => entries.push(Some(*v)),
                Token::Star => entries.push(None),
                Token::Erased => return Err(syntax(0, "`?` is not allowed in a template")),
            }
        }
        let template = Template::new(field, params.k, params.n(), entries).expect("shape and entries checked");
        Ok(Self { params, template })
    }

    pub fn to_text(&self) -> String {
        let t = &self.template;
        let mut s = header(t.field(), &self.params);
        for r in 0..t.rows() {
            let row = (0..t.cols()).map(|c| t.get(r, c).map_or("*".to_string(), |v| v.to_string()));
            let _ = writeln!(s, "{}", join(row));
        }
        s
    }
}

/// Parses a received word for a code of length `n` over `field`. Header
/// lines are optional; a `field` header must match.
pub fn parse_word(text: &str, field: &FieldSpec, n: usize) -> Result<ReceivedWord, FormatError> {
    let p = parse(text)?;
    if let Some(f) = &p.field {
        if f != field {
            return Err(syntax(0, format!("word is over {f}, code is over {field}")));
        }
    }
    check_shape(&p.body, 1, n)?;
    let mut values = Vec::with_capacity(n);
    for tok in &p.body[0] {
        match tok {
            Token::Value(v) if field.contains(*v) => values.push(Some(*v)),
            Token::Value(v) => return Err(syntax(0, format!("{v} is not an element of {field}"))),
            Token::Erased => values.push(None),
            Token::Star => return Err(syntax(0, "`*` is not allowed in a word")),
        }
    }
    Ok(ReceivedWord::new(values))
}

/// Parses a plain vector of `len` field elements, such as a message.
pub fn parse_vector(text: &str, field: &FieldSpec, len: usize) -> Result<Vec<u32>, FormatError> {
    let w = parse_word(text, field, len)?;
    w.values()
        .iter()
        .map(|v| v.ok_or_else(|| syntax(0, "`?` is not allowed here")))
        .collect()
}

pub fn format_word(values: &[u32]) -> String {
    format!("{}\n", join(values))
}

pub fn format_received(word: &ReceivedWord) -> String {
    let row = word.values().iter().map(|v| v.map_or("?".to_string(), |v| v.to_string()));
    format!("{}\n", join(row))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GF3: &str = "field gf(3)\nparams m=2 l=2 r=1,1 k=3\n1 0 1 0 1 1\n0 1 2 0 1 1\n0 0 0 1 1 2\n";

    #[test]
    fn code_file_round_trip() {
        let c = CodeFile::parse(GF3).unwrap();
        assert_eq!(c.params, PmdsParams::new(2, 2, vec![1, 1], 3).unwrap());
        assert_eq!(c.matrix.row(2), &[0, 0, 0, 1, 1, 2]);
        assert_eq!(c.to_text(), GF3);
    }

    #[test]
    fn comments_and_key_order_are_accepted() {
        let text = "# example\nfield gf(3)\n\nparams k=3 r=1,1 l=2 m=2\n1 0 1 0 1 1\n0 1 2 0 1 1\n# last row\n0 0 0 1 1 2\n";
        assert_eq!(CodeFile::parse(text).unwrap(), CodeFile::parse(GF3).unwrap());
    }

    #[test]
    fn binary_field_literals_round_trip() {
        let text = "field gf(2^3;0b1101)\nparams m=1 l=1 r=1 k=1\n7 5\n";
        let c = CodeFile::parse(text).unwrap();
        assert_eq!(c.to_text(), text);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert_eq!(
            CodeFile::parse("params m=2 l=2 r=1,1 k=3\n"),
            Err(FormatError::MissingHeader("field"))
        );
        assert!(matches!(
            CodeFile::parse("field gf(3)\nparams m=2 l=2 r=1,1 k=3\n1 0 1 0 1 1\n"),
            Err(FormatError::Shape { rows: 1, .. })
        ));
        assert!(matches!(
            CodeFile::parse(&GF3.replace("1 1 2", "1 1 3")),
            Err(FormatError::Syntax { line: 5, .. })
        ));
        assert!(CodeFile::parse(&GF3.replace("1 1 2", "1 1 x")).is_err());
        assert!(CodeFile::parse(&GF3.replace("1 1 2", "1 1 *")).is_err());
        assert!(CodeFile::parse(&GF3.replace("k=3", "k=5")).is_err());
        assert!(CodeFile::parse(&GF3.replace("k=3", "q=3")).is_err());
        assert!(CodeFile::parse(&GF3.replace("gf(3)", "gf(6)")).is_err());
    }

    #[test]
    fn template_round_trip() {
        let text = "field gf(7)\nparams m=2 l=3 r=1,1 k=4\n\
            1 0 0 * 0 1 1 *\n0 1 0 * 0 1 2 *\n0 0 1 * 0 1 3 *\n0 0 0 0 1 1 4 *\n";
        let t = TemplateFile::parse(text).unwrap();
        assert_eq!(t.template.wildcards().len(), 7);
        assert_eq!(t.to_text(), text);
        assert!(TemplateFile::parse(&text.replace("4 *", "4 ?")).is_err());
    }

    #[test]
    fn words() {
        let f = FieldSpec::with_order(3).unwrap();
        let w = parse_word("1 1 ? ? 0 ?\n", &f, 6).unwrap();
        assert_eq!(w.values(), &[Some(1), Some(1), None, None, Some(0), None]);
        assert_eq!(format_received(&w), "1 1 ? ? 0 ?\n");
        assert!(parse_word("1 1 ? ? 0\n", &f, 6).is_err());
        assert!(parse_word("1 1 ? ? 0 3\n", &f, 6).is_err());
        assert!(parse_word("field gf(5)\n1 1 ? ? 0 0\n", &f, 6).is_err());
        assert!(parse_word("field gf(3)\n1 1 ? ? 0 0\n", &f, 6).is_ok());
        assert_eq!(parse_vector("1 1 1", &f, 3).unwrap(), vec![1, 1, 1]);
        assert!(parse_vector("1 ? 1", &f, 3).is_err());
        assert_eq!(format_word(&[1, 1, 0]), "1 1 0\n");
    }
}
