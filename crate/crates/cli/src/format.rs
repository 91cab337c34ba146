//! Instance file format: a DIMACS-flavored line format with a `p hg <n> <m>`
//! or `p sc <sets> <elements>` header, `c` comment lines, and one record per
//! line. Weights are decimal integers or decimals with at most nine
//! fractional digits, parsed to exact rationals. Emission is canonical:
//! ASCII, LF endings, single spaces, header first, weights ascending by id,
//! then edge or set records in id order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use parcover::model::Hypergraph;
use parcover::setcover::SetCoverInstance;
use thiserror::Error;

pub const MAX_FRACTION_DIGITS: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

impl FormatError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        FormatError::Syntax {
            line,
            message: message.into(),
        }
    }

    fn semantic(line: usize, message: impl Into<String>) -> Self {
        FormatError::Semantic {
            line,
            message: message.into(),
        }
    }

    pub fn line(&self) -> usize {
        match self {
            FormatError::Syntax { line, .. } | FormatError::Semantic { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone)]
pub enum ParsedInstance {
    Graph(Hypergraph<BigRational>),
    SetCover(SetCoverInstance<BigRational>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Graph,
    SetCover,
}

/// Parses a weight token: a decimal integer or a decimal with at most
/// [`MAX_FRACTION_DIGITS`] fractional digits, as an exact rational.
pub fn parse_weight(token: &str) -> Option<BigRational> {
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, token),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if body.contains('.')
        && (frac_part.is_empty()
            || frac_part.len() > MAX_FRACTION_DIGITS
            || !frac_part.bytes().all(|b| b.is_ascii_digit()))
    {
        return None;
    }
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    let int_digits: BigInt = int_part.parse().ok()?;
    let frac_digits: BigInt = if frac_part.is_empty() {
        BigInt::zero()
    } else {
        frac_part.parse().ok()?
    };
    Some(BigRational::new(
        (int_digits * &scale + frac_digits) * sign,
        scale,
    ))
}

/// Renders a rational whose denominator divides a power of ten back to its
/// shortest decimal form; `None` for anything the file format cannot hold.
pub fn weight_to_string(w: &BigRational) -> Option<String> {
    if w.denom().is_one() {
        return Some(w.numer().to_string());
    }
    for digits in 1..=MAX_FRACTION_DIGITS as u32 {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = w * &scale;
        if scaled.denom().is_one() {
            let negative = scaled.numer().is_negative();
            let abs = scaled.numer().abs().to_string();
            let width = digits as usize;
            let padded = format!("{abs:0>w$}", w = width + 1);
            let (int_part, frac_part) = padded.split_at(padded.len() - width);
            let frac_part = frac_part.trim_end_matches('0');
            let sign = if negative { "-" } else { "" };
            return Some(if frac_part.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac_part}")
            });
        }
    }
    None
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, FormatError> {
    token
        .parse::<usize>()
        .map_err(|_| FormatError::syntax(line, format!("{what} must be a non-negative integer, got `{token}`")))
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, FormatError> {
    let mut header: Option<(Kind, usize, usize, usize)> = None;
    let mut weights: Vec<Option<BigRational>> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut sets: Vec<Option<(BigRational, Vec<usize>)>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        let mut tokens = trimmed.split_whitespace();
        let tag = match tokens.next() {
            None => continue,
            Some("c") => continue,
            Some(t) => t,
        };
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(FormatError::syntax(line, "duplicate header line"));
                }
                if rest.len() != 3 {
                    return Err(FormatError::syntax(
                        line,
                        "header must be `p hg <n> <m>` or `p sc <sets> <elements>`",
                    ));
                }
                let kind = match rest[0] {
                    "hg" => Kind::Graph,
                    "sc" => Kind::SetCover,
                    other => {
                        return Err(FormatError::syntax(
                            line,
                            format!("unknown instance kind `{other}`; expected `hg` or `sc`"),
                        ))
                    }
                };
                let a = parse_count(line, rest[1], "count")?;
                let b = parse_count(line, rest[2], "count")?;
                weights = vec![None; if kind == Kind::Graph { a } else { 0 }];
                sets = vec![None; if kind == Kind::SetCover { a } else { 0 }];
                header = Some((kind, a, b, line));
            }
            "v" => {
                let (kind, n, _, _) =
                    header.ok_or_else(|| FormatError::syntax(line, "record before header"))?;
                if kind != Kind::Graph {
                    return Err(FormatError::syntax(
                        line,
                        "`v` records belong to `hg` instances",
                    ));
                }
                if rest.len() != 2 {
                    return Err(FormatError::syntax(line, "expected `v <id> <weight>`"));
                }
                let id = parse_count(line, rest[0], "vertex id")?;
                if id >= n {
                    return Err(FormatError::semantic(
                        line,
                        format!("vertex id {id} outside 0..{n}"),
                    ));
                }
                if weights[id].is_some() {
                    return Err(FormatError::semantic(
                        line,
                        format!("vertex {id} given a weight twice"),
                    ));
                }
                let w = parse_weight(rest[1]).ok_or_else(|| {
                    FormatError::syntax(
                        line,
                        format!(
                            "weight `{}` is not a decimal with at most {MAX_FRACTION_DIGITS} fractional digits",
                            rest[1]
                        ),
                    )
                })?;
                if !w.is_positive() {
                    return Err(FormatError::semantic(
                        line,
                        format!("vertex {id} must have positive weight"),
                    ));
                }
                weights[id] = Some(w);
            }
            "e" => {
                let (kind, n, m, _) =
                    header.ok_or_else(|| FormatError::syntax(line, "record before header"))?;
                if kind != Kind::Graph {
                    return Err(FormatError::syntax(
                        line,
                        "`e` records belong to `hg` instances",
                    ));
                }
                if edges.len() == m {
                    return Err(FormatError::semantic(
                        line,
                        format!("more than the declared {m} edges"),
                    ));
                }
                if rest.is_empty() {
                    return Err(FormatError::semantic(line, "edge with no vertices"));
                }
                let mut edge = Vec::with_capacity(rest.len());
                for t in &rest {
                    let id = parse_count(line, t, "vertex id")?;
                    if id >= n {
                        return Err(FormatError::semantic(
                            line,
                            format!("vertex id {id} outside 0..{n}"),
                        ));
                    }
                    if edge.contains(&id) {
                        return Err(FormatError::semantic(
                            line,
                            format!("vertex {id} repeated within an edge"),
                        ));
                    }
                    edge.push(id);
                }
                edges.push(edge);
            }
            "s" => {
                let (kind, k, m, _) =
                    header.ok_or_else(|| FormatError::syntax(line, "record before header"))?;
                if kind != Kind::SetCover {
                    return Err(FormatError::syntax(
                        line,
                        "`s` records belong to `sc` instances",
                    ));
                }
                if rest.len() < 2 {
                    return Err(FormatError::syntax(
                        line,
                        "expected `s <id> <weight> <element>...`",
                    ));
                }
                let id = parse_count(line, rest[0], "set id")?;
                if id >= k {
                    return Err(FormatError::semantic(
                        line,
                        format!("set id {id} outside 0..{k}"),
                    ));
                }
                if sets[id].is_some() {
                    return Err(FormatError::semantic(
                        line,
                        format!("set {id} declared twice"),
                    ));
                }
                let w = parse_weight(rest[1]).ok_or_else(|| {
                    FormatError::syntax(
                        line,
                        format!(
                            "weight `{}` is not a decimal with at most {MAX_FRACTION_DIGITS} fractional digits",
                            rest[1]
                        ),
                    )
                })?;
                if !w.is_positive() {
                    return Err(FormatError::semantic(
                        line,
                        format!("set {id} must have positive weight"),
                    ));
                }
                let mut elems = Vec::with_capacity(rest.len() - 2);
                for t in &rest[2..] {
                    let x = parse_count(line, t, "element id")?;
                    if x >= m {
                        return Err(FormatError::semantic(
                            line,
                            format!("element id {x} outside 0..{m}"),
                        ));
                    }
                    if elems.contains(&x) {
                        return Err(FormatError::semantic(
                            line,
                            format!("element {x} repeated within a set"),
                        ));
                    }
                    elems.push(x);
                }
                sets[id] = Some((w, elems));
            }
            other => {
                return Err(FormatError::syntax(
                    line,
                    format!("unknown record tag `{other}`"),
                ));
            }
        }
    }

    let (kind, a, b, header_line) =
        header.ok_or_else(|| FormatError::syntax(1, "missing `p` header line"))?;
    match kind {
        Kind::Graph => {
            let mut resolved = Vec::with_capacity(a);
            for (id, w) in weights.into_iter().enumerate() {
                resolved.push(w.ok_or_else(|| {
                    FormatError::semantic(header_line, format!("vertex {id} has no weight line"))
                })?);
            }
            if edges.len() != b {
                return Err(FormatError::semantic(
                    header_line,
                    format!("declared {b} edges but found {}", edges.len()),
                ));
            }
            let h = Hypergraph::new(resolved, edges)
                .expect("line-level validation covers every model error");
            Ok(ParsedInstance::Graph(h))
        }
        Kind::SetCover => {
            let mut resolved_w = Vec::with_capacity(a);
            let mut resolved_sets = Vec::with_capacity(a);
            for (id, s) in sets.into_iter().enumerate() {
                let (w, elems) = s.ok_or_else(|| {
                    FormatError::semantic(header_line, format!("set {id} has no record"))
                })?;
                resolved_w.push(w);
                resolved_sets.push(elems);
            }
            let sc = SetCoverInstance::new(resolved_w, resolved_sets, b)
                .expect("line-level validation covers every model error");
            // Coverage of every element is a property of the whole file, so
            // the error points at the header.
            if let Err(e) = sc.reduce() {
                return Err(FormatError::semantic(header_line, e.to_string()));
            }
            Ok(ParsedInstance::SetCover(sc))
        }
    }
}

/// Canonical text for a hypergraph instance. Fails if any weight does not
/// fit the decimal grammar.
pub fn emit_hypergraph(h: &Hypergraph<BigRational>) -> Option<String> {
    let mut out = String::new();
    out.push_str(&format!("p hg {} {}\n", h.n(), h.m()));
    for v in 0..h.n() {
        out.push_str(&format!("v {} {}\n", v, weight_to_string(h.weight(v))?));
    }
    for e in 0..h.m() {
        out.push('e');
        for &v in h.edge(e) {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    Some(out)
}

/// Canonical text for a set-cover instance.
pub fn emit_set_cover(sc: &SetCoverInstance<BigRational>) -> Option<String> {
    let mut out = String::new();
    out.push_str(&format!("p sc {} {}\n", sc.num_sets(), sc.num_elements()));
    for s in 0..sc.num_sets() {
        out.push_str(&format!("s {} {}", s, weight_to_string(sc.weight(s))?));
        for &x in sc.set(s) {
            out.push_str(&format!(" {x}"));
        }
        out.push('\n');
    }
    Some(out)
}
