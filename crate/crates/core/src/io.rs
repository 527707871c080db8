//! Plain-text matrix files.
//!
//! ```text
//! 2 2
//! 1 0
//! 0 -1.5+2e-3i
//! ```
//!
//! Tokens are `a`, `bi`, `a+bi` or `a-bi`; a bare `i` means unit imaginary.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

fn parse_real(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number `{s}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value `{s}`"),
        });
    }
    Ok(v)
}

fn parse_imag(s: &str, line: usize) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, line),
    }
}

pub fn parse_complex(token: &str, line: usize) -> Result<C64> {
    let Some(body) = token.strip_suffix('i') else {
        return Ok(C64::new(parse_real(token, line)?, 0.0));
    };
    let bytes = body.as_bytes();
    // last sign that is not the leading one and not part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(parse_real(&body[..k], line)?, parse_imag(&body[k..], line)?)),
        None => Ok(C64::new(0.0, parse_imag(body, line)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { "" } else { "+" };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || Error::Parse {
        line: hl,
        message: format!("header must be `m n`, got `{header}`"),
    };
    if dims.len() != 2 {
        return Err(bad_header());
    }
    let m: usize = dims[0].parse().map_err(|_| bad_header())?;
    let n: usize = dims[1].parse().map_err(|_| bad_header())?;
    if m == 0 || n == 0 {
        return Err(bad_header());
    }
    let mut data = Vec::with_capacity(m * n);
    let mut rows = 0;
    for (ln, l) in lines {
        if rows == m {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {m} rows"),
            });
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {n} entries, found {}", toks.len()),
            });
        }
        for t in toks {
            data.push(parse_complex(t, ln)?);
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::Parse {
            line: hl + rows,
            message: format!("expected {m} rows, found {rows}"),
        });
    }
    ComplexMatrix::new(m, n, data)
}

pub fn write_matrix(a: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn write_matrix_file(path: &Path, a: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, write_matrix(a)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_forms() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("-2.5", C64::new(-2.5, 0.0)),
            ("3i", C64::new(0.0, 3.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("i", C64::new(0.0, 1.0)),
            ("1+2i", C64::new(1.0, 2.0)),
            ("1-2i", C64::new(1.0, -2.0)),
            ("1e-3-2.5E+2i", C64::new(1e-3, -250.0)),
            ("-1.5e2+i", C64::new(-150.0, 1.0)),
            ("+4", C64::new(4.0, 0.0)),
        ];
        for (t, z) in cases {
            assert_eq!(parse_complex(t, 1).unwrap(), z, "{t}");
        }
        for bad in ["", "1+", "abc", "1+2j", "nan", "inf", "1++2i"] {
            assert!(parse_complex(bad, 3).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_parse() {
        let a = parse_matrix("2 2\n1 0\n0 -1+0.5i\n").unwrap();
        assert_eq!(a[(1, 1)], C64::new(-1.0, 0.5));
        assert_eq!(a.shape(), (2, 2));
        let e = parse_matrix("2 2\n1 0\n0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2\n1\n").is_err());
        assert!(parse_matrix("1 1\n1\n2\n").is_err());
        assert!(parse_matrix("2 1\n1\n").is_err());
    }

    #[test]
    fn roundtrip_edge_values() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(-0.0, -0.0), C64::new(f64::MIN_POSITIVE, -f64::MAX)],
            vec![C64::new(0.1, 1.0 / 3.0), C64::new(-5e-324, 1e308)],
        ]);
        let b = parse_matrix(&write_matrix(&a)).unwrap();
        for (u, v) in a.data().iter().zip(b.data()) {
            assert_eq!(u.re.to_bits(), v.re.to_bits());
            assert_eq!(u.im.to_bits(), v.im.to_bits());
        }
    }
}
