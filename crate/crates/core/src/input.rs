//! Plain-text state files: one probability, or one complex amplitude
//! written as `re im`, per line. Everything after `#` is ignored.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn number(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|e| Error::Domain(format!("line {line}: bad number '{token}': {e}")))
}

pub fn parse_probs(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(line, body)| {
            let mut tokens = body.split_whitespace();
            let v = number(tokens.next().unwrap_or_default(), line)?;
            if tokens.next().is_some() {
                return Err(Error::Domain(format!(
                    "line {line}: expected one probability"
                )));
            }
            Ok(v)
        })
        .collect()
}

/// A lone real number is read as an amplitude with zero imaginary part.
pub fn parse_coeffs(text: &str) -> Result<Vec<Complex64>> {
    content_lines(text)
        .map(|(line, body)| {
            let tokens: Vec<&str> = body.split_whitespace().collect();
            match tokens.as_slice() {
                [re] => Ok(Complex64::new(number(re, line)?, 0.0)),
                [re, im] => Ok(Complex64::new(number(re, line)?, number(im, line)?)),
                _ => Err(Error::Domain(format!("line {line}: expected 're im'"))),
            }
        })
        .collect()
}
