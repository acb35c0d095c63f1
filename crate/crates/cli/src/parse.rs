//! Line-oriented text formats: `scheme v1`, `fusion v1`, `group v1`,
//! `dims v1` and `morphism v1`.
//!
//! Every format uses `#` comments and whitespace-separated tokens. Errors
//! carry the 1-based line and column of the offending token.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use gft_core::exactlin::Scalar;
use gft_core::fusion::FusionData;
use gft_core::scheme::{ClassMatrix, GroupTable};
use gft_core::transform::{DimObject, MatObject};
use gft_core::IntersectionTensor;
use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(tok: &Token<'_>, message: impl Into<String>) -> Self {
        ParseError {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        }
    }

    fn line(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column: 1,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    fn expect_args(&self, n: usize) -> Result<&[Token<'a>], ParseError> {
        let args = self.args();
        if args.len() != n {
            let tok = args.get(n).unwrap_or(&self.tokens[0]);
            return Err(ParseError::at(
                tok,
                format!(
                    "`{}` takes {n} argument(s), found {}",
                    self.keyword(),
                    args.len()
                ),
            ));
        }
        Ok(args)
    }
}

/// Non-empty lines with comments stripped.
fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut rest = body;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
                tokens.push(Token {
                    text: &tail[..len],
                    line: i + 1,
                    column: body[..offset + start].chars().count() + 1,
                });
                offset += start + len;
                rest = &tail[len..];
            }
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

fn number<T: FromStr>(tok: &Token<'_>, what: &str) -> Result<T, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::at(tok, format!("expected {what}, found `{}`", tok.text)))
}

fn header<'a>(lines: &'a [Line<'a>], kind: &str) -> Result<&'a [Line<'a>], ParseError> {
    let Some(first) = lines.first() else {
        return Err(ParseError::line(
            1,
            format!("empty input, expected `{kind} v1`"),
        ));
    };
    let ok = first.tokens.len() == 2 && first.keyword() == kind && first.tokens[1].text == "v1";
    if !ok {
        return Err(ParseError::at(
            &first.tokens[0],
            format!("expected header `{kind} v1`"),
        ));
    }
    Ok(&lines[1..])
}

/// First keyword of the input, used to tell formats apart.
pub fn detect_format(text: &str) -> Option<String> {
    lines(text).first().map(|l| l.keyword().to_string())
}

/// Rows of whitespace-separated naturals forming a square.
fn square_rows(rows: &[Line<'_>], side: usize, after: usize) -> Result<Vec<usize>, ParseError> {
    if rows.is_empty() {
        return Err(ParseError::line(after, "no rows"));
    }
    let mut cells = Vec::with_capacity(side * side);
    for row in rows {
        if row.tokens.len() != side {
            return Err(ParseError::at(
                &row.tokens[0],
                format!("row has {} entries, expected {side}", row.tokens.len()),
            ));
        }
        for tok in &row.tokens {
            cells.push(number::<usize>(tok, "a natural number")?);
        }
    }
    if rows.len() != side {
        let line = rows.last().map_or(after, |r| r.number);
        return Err(ParseError::line(
            line,
            format!("found {} rows, expected {side}", rows.len()),
        ));
    }
    Ok(cells)
}

/// `scheme v1`, `points <n>`, `matrix`, then `n` rows of class labels.
pub fn parse_scheme(text: &str) -> Result<ClassMatrix, ParseError> {
    let all = lines(text);
    let body = header(&all, "scheme")?;
    let mut points: Option<usize> = None;
    let mut i = 0;
    while i < body.len() {
        let line = &body[i];
        match line.keyword() {
            "points" => {
                let args = line.expect_args(1)?;
                let n = number::<usize>(&args[0], "a point count")?;
                if n == 0 {
                    return Err(ParseError::at(
                        &args[0],
                        "a scheme needs at least one point",
                    ));
                }
                points = Some(n);
            }
            "matrix" => {
                line.expect_args(0)?;
                let Some(n) = points else {
                    return Err(ParseError::at(&line.tokens[0], "`matrix` before `points`"));
                };
                let rows = &body[i + 1..];
                let cells = square_rows(rows, n, line.number)?;
                let limit = cells.iter().copied().max().map_or(0, |m| m + 1);
                let distinct = {
                    let mut seen = cells.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len()
                };
                if limit != distinct {
                    let (r, c) = cells
                        .iter()
                        .position(|&v| v >= distinct)
                        .map(|p| (p / n, p % n))
                        .expect("some label exceeds the class count");
                    return Err(ParseError::at(
                        &rows[r].tokens[c],
                        format!(
                            "class index {} out of range: {distinct} classes must be labelled 0..{}",
                            cells[r * n + c],
                            distinct - 1
                        ),
                    ));
                }
                return ClassMatrix::new(n, cells)
                    .map_err(|e| ParseError::line(line.number, e.to_string()));
            }
            other => {
                return Err(ParseError::at(
                    &line.tokens[0],
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
        i += 1;
    }
    let line = all.last().map_or(1, |l| l.number);
    Err(ParseError::line(line, "missing `matrix` section"))
}

pub fn write_scheme(cm: &ClassMatrix) -> String {
    let n = cm.points();
    let mut out = format!("scheme v1\npoints {n}\nmatrix\n");
    for row in cm.cells().chunks(n) {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// `fusion v1`, `objects ...`, `unit <x>`, optional `dual <x> <y>` lines,
/// `N <x> <y> <z> <mult>` lines and optional `autofill_unit true`.
pub fn parse_fusion(text: &str) -> Result<FusionData, ParseError> {
    let all = lines(text);
    let body = header(&all, "fusion")?;
    let mut names: Option<Vec<String>> = None;
    let mut unit: Option<usize> = None;
    let mut duals: Vec<(usize, usize)> = Vec::new();
    let mut entries: BTreeMap<(usize, usize, usize), (BigUint, usize)> = BTreeMap::new();
    let mut autofill = false;

    let lookup = |names: &Option<Vec<String>>, tok: &Token<'_>| -> Result<usize, ParseError> {
        let Some(names) = names else {
            return Err(ParseError::at(tok, "object used before `objects` line"));
        };
        names
            .iter()
            .position(|n| n == tok.text)
            .ok_or_else(|| ParseError::at(tok, format!("unknown object `{}`", tok.text)))
    };

    for line in body {
        match line.keyword() {
            "objects" => {
                if names.is_some() {
                    return Err(ParseError::at(&line.tokens[0], "duplicate `objects` line"));
                }
                let args = line.args();
                if args.is_empty() {
                    return Err(ParseError::at(
                        &line.tokens[0],
                        "`objects` needs at least one name",
                    ));
                }
                let mut list: Vec<String> = Vec::with_capacity(args.len());
                for tok in args {
                    if list.iter().any(|n| n == tok.text) {
                        return Err(ParseError::at(
                            tok,
                            format!("duplicate object `{}`", tok.text),
                        ));
                    }
                    list.push(tok.text.to_string());
                }
                names = Some(list);
            }
            "unit" => {
                let args = line.expect_args(1)?;
                unit = Some(lookup(&names, &args[0])?);
            }
            "dual" => {
                let args = line.expect_args(2)?;
                duals.push((lookup(&names, &args[0])?, lookup(&names, &args[1])?));
            }
            "N" => {
                let args = line.expect_args(4)?;
                let key = (
                    lookup(&names, &args[0])?,
                    lookup(&names, &args[1])?,
                    lookup(&names, &args[2])?,
                );
                let v: BigUint = number(&args[3], "a multiplicity")?;
                if let Some((old, at)) = entries.get(&key) {
                    if *old != v {
                        return Err(ParseError::at(
                            &args[3],
                            format!(
                                "conflicting value for N {} {} {}: {v} here, {old} on line {at}",
                                args[0].text, args[1].text, args[2].text
                            ),
                        ));
                    }
                }
                entries.insert(key, (v, line.number));
            }
            "autofill_unit" => {
                let args = line.expect_args(1)?;
                autofill = match args[0].text {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(ParseError::at(
                            &args[0],
                            format!("expected true or false, found `{other}`"),
                        ))
                    }
                };
            }
            other => {
                return Err(ParseError::at(
                    &line.tokens[0],
                    format!("unknown keyword `{other}`"),
                ))
            }
        }
    }

    let last = all.last().map_or(1, |l| l.number);
    let names = names.ok_or_else(|| ParseError::line(last, "missing `objects` line"))?;
    let unit = unit.ok_or_else(|| ParseError::line(last, "missing `unit` declaration"))?;
    let m = names.len();
    let mut dual: Vec<usize> = (0..m).collect();
    for (x, y) in duals {
        dual[x] = y;
        dual[y] = x;
    }
    let mut tensor = IntersectionTensor::zeros(m);
    for (&(x, y, z), (v, _)) in &entries {
        if !v.is_zero() {
            tensor.set(x, y, z, v.clone());
        }
    }
    if autofill {
        for x in 0..m {
            for key in [(unit, x, x), (x, unit, x)] {
                if !entries.contains_key(&key) {
                    tensor.set(key.0, key.1, key.2, BigUint::from(1u8));
                }
            }
        }
    }
    Ok(FusionData {
        names,
        unit,
        dual,
        tensor,
    })
}

pub fn write_fusion(data: &FusionData) -> String {
    let mut out = format!(
        "fusion v1\nobjects {}\nunit {}\n",
        data.names.join(" "),
        data.names[data.unit]
    );
    for (x, &y) in data.dual.iter().enumerate() {
        if x < y {
            out.push_str(&format!("dual {} {}\n", data.names[x], data.names[y]));
        }
    }
    for (x, y, z, v) in data.tensor.nonzero() {
        out.push_str(&format!(
            "N {} {} {} {v}\n",
            data.names[x], data.names[y], data.names[z]
        ));
    }
    out
}

/// `group v1`, `order <n>`, then the Cayley table as `n` rows.
pub fn parse_group(text: &str) -> Result<GroupTable, ParseError> {
    let all = lines(text);
    let body = header(&all, "group")?;
    let Some(first) = body.first() else {
        return Err(ParseError::line(all[0].number, "missing `order` line"));
    };
    if first.keyword() != "order" {
        return Err(ParseError::at(&first.tokens[0], "expected `order <n>`"));
    }
    let n: usize = number(&first.expect_args(1)?[0], "a group order")?;
    let table = square_rows(&body[1..], n, first.number)?;
    GroupTable::new(n, table).map_err(|e| ParseError::line(first.number, e.to_string()))
}

/// `dims v1` followed by a square of naturals.
pub fn parse_dims_matrix(text: &str) -> Result<MatObject, ParseError> {
    let all = lines(text);
    let body = header(&all, "dims")?;
    let side = body.first().map_or(0, |l| l.tokens.len());
    let cells = square_rows(body, side, all[0].number)?;
    Ok(MatObject::new(side, cells).expect("square checked"))
}

/// `1,2,0` into a dimension vector.
pub fn parse_vector(text: &str) -> Result<DimObject, ParseError> {
    let mut dims = Vec::new();
    let mut column = 1;
    for part in text.split(',') {
        let tok = Token {
            text: part.trim(),
            line: 1,
            column,
        };
        dims.push(number::<usize>(&tok, "a natural number")?);
        column += part.chars().count() + 1;
    }
    Ok(DimObject::new(dims))
}

/// Parsed `morphism v1` file: dims of `f` and `g` and one raw rational
/// block per listed cell. Shapes are checked against a kernel later.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismSpec {
    pub source: DimObject,
    pub target: DimObject,
    pub cells: Vec<CellBlock>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellBlock {
    pub x: usize,
    pub y: usize,
    pub line: usize,
    pub rows: Vec<Vec<Scalar>>,
}

impl fmt::Display for CellBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M {} {} ({} rows)", self.x, self.y, self.rows.len())
    }
}

fn scalar(tok: &Token<'_>) -> Result<Scalar, ParseError> {
    tok.text
        .parse::<Scalar>()
        .map_err(|_| ParseError::at(tok, format!("expected a rational, found `{}`", tok.text)))
}

/// ```text
/// morphism v1
/// source 1,1,1
/// target 1,1,1
/// M 0 1
/// 2
/// ```
/// Cells that are not listed are zero.
pub fn parse_morphism(text: &str) -> Result<MorphismSpec, ParseError> {
    let all = lines(text);
    let body = header(&all, "morphism")?;
    let mut source = None;
    let mut target = None;
    let mut cells: Vec<CellBlock> = Vec::new();
    for line in body {
        match line.keyword() {
            "source" | "target" => {
                let args = line.expect_args(1)?;
                let v = parse_vector(args[0].text).map_err(|e| ParseError {
                    line: line.number,
                    column: args[0].column + e.column - 1,
                    message: e.message,
                })?;
                if line.keyword() == "source" {
                    source = Some(v);
                } else {
                    target = Some(v);
                }
            }
            "M" => {
                let args = line.expect_args(2)?;
                let x = number(&args[0], "a point index")?;
                let y = number(&args[1], "a point index")?;
                if cells.iter().any(|c| c.x == x && c.y == y) {
                    return Err(ParseError::at(
                        &line.tokens[0],
                        format!("cell ({x},{y}) listed twice"),
                    ));
                }
                cells.push(CellBlock {
                    x,
                    y,
                    line: line.number,
                    rows: Vec::new(),
                });
            }
            _ => {
                let Some(block) = cells.last_mut() else {
                    return Err(ParseError::at(
                        &line.tokens[0],
                        "matrix row outside an `M x y` block",
                    ));
                };
                let row = line
                    .tokens
                    .iter()
                    .map(scalar)
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(first) = block.rows.first() {
                    if first.len() != row.len() {
                        return Err(ParseError::at(
                            &line.tokens[0],
                            format!(
                                "row has {} entries, block rows have {}",
                                row.len(),
                                first.len()
                            ),
                        ));
                    }
                }
                block.rows.push(row);
            }
        }
    }
    let last = all.last().map_or(1, |l| l.number);
    Ok(MorphismSpec {
        source: source.ok_or_else(|| ParseError::line(last, "missing `source` line"))?,
        target: target.ok_or_else(|| ParseError::line(last, "missing `target` line"))?,
        cells,
    })
}
