//! The `.game` file grammar.
//!
//! Whitespace-separated entries, one row per line, `#` comments, optional
//! `rows m cols n` header. An entry is `rational ('*' rational?)?`: a bare
//! value is non-absorbing, a trailing `*` stops with probability 1, and
//! `v*p` stops with probability `p`.

use super::{AbsorbingGame, GameError};
use crate::numeric::{parse_rational, Matrix, Rational};
use num_traits::{One, Zero};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

pub fn parse_game(text: &str) -> Result<AbsorbingGame, ParseError> {
    let mut payoff_rows: Vec<Vec<Rational>> = Vec::new();
    let mut stop_rows: Vec<Vec<Rational>> = Vec::new();
    let mut header: Option<(usize, usize)> = None;

    for (lineno, raw_line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let line = match raw_line.split_once('#') {
            Some((before, _)) => before,
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }

        let tokens: Vec<(usize, &str)> = tokenize(line);
        if tokens.len() == 4 && tokens[0].1 == "rows" && tokens[2].1 == "cols" {
            if header.is_some() || !payoff_rows.is_empty() {
                return Err(perr(line_num, tokens[0].0, "duplicate or late header"));
            }
            let m = tokens[1]
                .1
                .parse::<usize>()
                .map_err(|_| perr(line_num, tokens[1].0, "bad row count"))?;
            let n = tokens[3]
                .1
                .parse::<usize>()
                .map_err(|_| perr(line_num, tokens[3].0, "bad column count"))?;
            header = Some((m, n));
            continue;
        }

        let mut prow = Vec::with_capacity(tokens.len());
        let mut srow = Vec::with_capacity(tokens.len());
        for (col, token) in tokens {
            let (p, s) = parse_entry(token).map_err(|msg| perr(line_num, col, msg))?;
            prow.push(p);
            srow.push(s);
        }
        payoff_rows.push(prow);
        stop_rows.push(srow);
    }

    if payoff_rows.is_empty() {
        return Err(perr(1, 1, "no entries"));
    }
    let cols = payoff_rows[0].len();
    for (i, row) in payoff_rows.iter().enumerate() {
        if row.len() != cols {
            return Err(perr(
                0,
                0,
                format!("ragged rows: row {} has {} entries, expected {cols}", i + 1, row.len()),
            ));
        }
    }
    if let Some((m, n)) = header {
        if m != payoff_rows.len() || n != cols {
            return Err(perr(
                0,
                0,
                format!(
                    "header says {m}x{n} but found {}x{cols}",
                    payoff_rows.len()
                ),
            ));
        }
    }

    AbsorbingGame::new(Matrix::from_rows(payoff_rows), Matrix::from_rows(stop_rows)).map_err(
        |e| match e {
            GameError::StopProbabilityRange { row, col } => perr(
                row + 1,
                col + 1,
                "stop probability outside [0,1]".to_owned(),
            ),
            other => perr(0, 0, other.to_string()),
        },
    )
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_entry(token: &str) -> Result<(Rational, Rational), String> {
    match token.split_once('*') {
        None => {
            let p = parse_rational(token).map_err(|e| e.to_string())?;
            Ok((p, Rational::zero()))
        }
        Some((value, "")) => {
            let p = parse_rational(value).map_err(|e| e.to_string())?;
            Ok((p, Rational::one()))
        }
        Some((value, prob)) => {
            let p = parse_rational(value).map_err(|e| e.to_string())?;
            let w = parse_rational(prob).map_err(|e| e.to_string())?;
            Ok((p, w))
        }
    }
}

/// Canonical rendering; `parse_game(render_game(g))` reproduces `g`
/// bit-exactly.
pub fn render_game(g: &AbsorbingGame) -> String {
    let mut out = String::new();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            if j > 0 {
                out.push(' ');
            }
            let w = g.stop_prob(i, j);
            let _ = write!(out, "{}", g.payoff(i, j));
            if w.is_one() {
                out.push('*');
            } else if !w.is_zero() {
                let _ = write!(out, "*{w}");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};

    #[test]
    fn parses_big_match() {
        let g = parse_game("1 0 \n 0* 1*").unwrap();
        assert_eq!(g, AbsorbingGame::big_match());
    }

    #[test]
    fn parses_zero_value_big_match() {
        let g = parse_game("1 -1 \n -1* 1*").unwrap();
        assert_eq!(g, AbsorbingGame::zero_value_big_match());
    }

    #[test]
    fn parses_partial_stop_probability() {
        let g = parse_game("5/3*1/2").unwrap();
        assert_eq!(g.payoff(0, 0), &ratio(5, 3));
        assert_eq!(g.stop_prob(0, 0), &ratio(1, 2));
    }

    #[test]
    fn honors_header_and_comments() {
        let text = "# the Big Match\nrows 2 cols 2\n1 0\n0* 1*  # absorbing row\n";
        assert_eq!(parse_game(text).unwrap(), AbsorbingGame::big_match());
    }

    #[test]
    fn rejects_ragged_rows() {
        let e = parse_game("1 0\n0*").unwrap_err();
        assert!(e.msg.contains("ragged"));
    }

    #[test]
    fn rejects_stop_probability_above_one() {
        let e = parse_game("1*3/2").unwrap_err();
        assert!(e.msg.contains("stop probability"));
    }

    #[test]
    fn rejects_malformed_token_with_position() {
        let e = parse_game("1 x\n0* 1*").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn render_round_trip() {
        for g in [
            AbsorbingGame::big_match(),
            AbsorbingGame::zero_value_big_match(),
            parse_game("5/3*1/2 -7\n0 2*").unwrap(),
        ] {
            assert_eq!(parse_game(&render_game(&g)).unwrap(), g);
        }
    }

    #[test]
    fn render_is_canonical() {
        let g = parse_game("1 0\n0* 1*").unwrap();
        assert_eq!(render_game(&g), "1 0\n0* 1*\n");
        let _ = rat(0);
    }
}
