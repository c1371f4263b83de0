//! Polynomial arguments: coefficient lists (constant term first) in the
//! single separated variable, or expressions in `b1..b_g`.

use crate::matrix::sov_symmetric;
use crate::poly::MPoly;

/// Parse `text` as a symmetric polynomial in `nvars` separated variables.
/// A plain list `c0,c1,…` is a polynomial in `γ` and needs `nvars = 1`.
pub fn parse_symmetric(text: &str, nvars: usize) -> Result<MPoly<f64>, String> {
    if nvars == 0 {
        return Err("no separated variables".into());
    }
    if text.contains('b') {
        let mut p = Parser { s: text.as_bytes(), i: 0, nvars };
        let v = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(format!("unexpected '{}' at offset {}", p.s[p.i] as char, p.i));
        }
        return Ok(v);
    }
    let coeffs = parse_list(text)?;
    if nvars != 1 {
        return Err("coefficient lists need a single separated variable; use b1..b_g".into());
    }
    let mut m = MPoly::zero(1);
    for (i, c) in coeffs.iter().enumerate() {
        m.add_term(vec![i as u32], *c);
    }
    Ok(m)
}

/// Comma-separated floats.
pub fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: '{}'", t.trim())))
        .collect()
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<MPoly<f64>, String> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                self.term()?.scale(&-1.0)
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly<f64>, String> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.i += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly<f64>, String> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.i += 1;
        self.ws();
        let e = self.integer()?;
        let mut out = MPoly::constant(self.nvars, 1.0);
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<usize, String> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| format!("expected an integer at offset {start}"))
    }

    fn atom(&mut self) -> Result<MPoly<f64>, String> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(format!("missing ')' at offset {}", self.i));
                }
                self.i += 1;
                Ok(v)
            }
            Some(b'b') => {
                self.i += 1;
                let j = self.integer()?;
                if j == 0 || j > self.nvars {
                    return Err(format!("b{j} outside b1..b{}", self.nvars));
                }
                Ok(sov_symmetric(self.nvars, j))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.i;
                while self.i < self.s.len() {
                    let c = self.s[self.i];
                    let exp_sign = (c == b'-' || c == b'+') && matches!(self.s[self.i - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.i += 1;
                    } else {
                        break;
                    }
                }
                let t = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                let v: f64 = t.parse().map_err(|_| format!("not a number: '{t}'"))?;
                Ok(MPoly::constant(self.nvars, v))
            }
            Some(c) => Err(format!("unexpected '{}' at offset {}", c as char, self.i)),
            None => Err("unexpected end of expression".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_list_in_gamma() {
        let m = parse_symmetric("1, 0, -2", 1).unwrap();
        assert_eq!(m.eval(&[3.0]), 1.0 - 18.0);
        assert!(parse_symmetric("1,2", 2).is_err());
        assert!(parse_symmetric("1,x", 1).is_err());
    }

    #[test]
    fn b_names_are_signed_elementary() {
        // b1 = −(γ1 + γ2), b2 = γ1 γ2
        let g = [0.5, -2.0];
        let m = parse_symmetric("b1", 2).unwrap();
        assert_eq!(m.eval(&g), 1.5);
        let m = parse_symmetric("2*b2 - b1^2 + 0.5", 2).unwrap();
        assert!((m.eval(&g) - (-2.0 - 2.25 + 0.5)).abs() < 1e-15);
        let m = parse_symmetric("-(b1 + 1)*b1", 2).unwrap();
        assert!((m.eval(&g) - -(2.5 * 1.5)).abs() < 1e-15);
        let m = parse_symmetric("1e-1*b1", 1).unwrap();
        assert!((m.eval(&[2.0]) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn bad_expressions() {
        assert!(parse_symmetric("b3", 2).is_err());
        assert!(parse_symmetric("b1 +", 2).is_err());
        assert!(parse_symmetric("(b1", 2).is_err());
        assert!(parse_symmetric("b1 b2", 2).is_err());
    }
}
