//! Text formats: polynomials, ideal files and graded matrix files.
//!
//! Polynomials use `+ - * ^`, parentheses, integer constants (reduced mod
//! `p`) and the variables `x0 .. x{n-1}`. An ideal file holds one polynomial
//! per line; a matrix file starts with `rows <twists> cols <twists>` and
//! then lists the rows, entries separated by commas. Blank lines and text
//! after `#` are ignored everywhere.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Coef;
use crate::module::{FreeModule, GradedMatrix};
use crate::monomial::{Monomial, MAX_EXPONENT, MAX_VARS};
use crate::poly::{Polynomial, Ring};

type Sparse = HashMap<[u32; MAX_VARS], Coef>;

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col0 + self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::parse(self.line, self.col0 + start + 1, "expected a number"))
    }

    fn combine(&self, a: &Sparse, b: &Sparse, sign: Coef) -> Sparse {
        let k = &self.ring.field;
        let mut out = a.clone();
        for (m, &c) in b {
            let e = out.entry(*m).or_insert(0);
            *e = k.add(*e, k.mul(c, sign));
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn product(&self, a: &Sparse, b: &Sparse) -> Result<Sparse> {
        let k = &self.ring.field;
        let mut out: Sparse = HashMap::new();
        for (ma, &ca) in a {
            for (mb, &cb) in b {
                let mut m = [0u32; MAX_VARS];
                for i in 0..MAX_VARS {
                    m[i] = ma[i] + mb[i];
                }
                if m.iter().sum::<u32>() > MAX_EXPONENT {
                    return Err(self.err("degree too large"));
                }
                let e = out.entry(m).or_insert(0);
                *e = k.add(*e, k.mul(ca, cb));
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc: Sparse = HashMap::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.ring.characteristic() - 1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = self.combine(&acc, &t, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = self.product(&acc, &f)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            if e > MAX_EXPONENT as u64 {
                return Err(self.err("exponent too large"));
            }
            let mut acc: Sparse = HashMap::from([([0; MAX_VARS], 1)]);
            for _ in 0..e {
                acc = self.product(&acc, &base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.err("expected a variable index after 'x'"));
                }
                let start = self.pos;
                let i = self.number()? as usize;
                if i >= self.ring.nvars {
                    return Err(Error::parse(
                        self.line,
                        self.col0 + start + 1,
                        format!("variable x{i} out of range (ring has {} variables)", self.ring.nvars),
                    ));
                }
                let mut m = [0u32; MAX_VARS];
                m[i] = 1;
                Ok(HashMap::from([(m, 1)]))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                let c = (v % self.ring.characteristic() as u64) as Coef;
                let mut out = HashMap::new();
                if c != 0 {
                    out.insert([0; MAX_VARS], c);
                }
                Ok(out)
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_at(ring: &Ring, text: &str, line: usize, col0: usize) -> Result<Polynomial> {
    let mut p = Parser { ring, src: text.as_bytes(), pos: 0, line, col0 };
    let sparse = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    let terms = sparse
        .into_iter()
        .map(|(e, c)| (Monomial::from_exponents(&e[..ring.nvars]), c))
        .collect();
    ring.from_terms(terms).map_err(|_| Error::parse(line, col0 + 1, "polynomial is not homogeneous"))
}

/// Parses a single homogeneous polynomial.
pub fn parse_polynomial(ring: &Ring, text: &str) -> Result<Polynomial> {
    parse_at(ring, text, 1, 0)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses an ideal file: one generator per nonblank line.
pub fn parse_ideal(ring: &Ring, text: &str) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_at(ring, body, no + 1, 0)?);
    }
    Ok(out)
}

/// Parses a `.poly` file holding one polynomial.
pub fn parse_poly_file(ring: &Ring, text: &str) -> Result<Polynomial> {
    let mut gens = parse_ideal(ring, text)?;
    match gens.len() {
        1 => Ok(gens.pop().unwrap()),
        n => Err(Error::parse(1, 1, format!("expected one polynomial, found {n}"))),
    }
}

pub fn format_ideal(ring: &Ring, gens: &[Polynomial]) -> String {
    let mut s = String::new();
    for g in gens {
        s.push_str(&ring.format(g));
        s.push('\n');
    }
    s
}

fn parse_twists(words: &[&str], line: usize) -> Result<Vec<i32>> {
    words
        .iter()
        .map(|w| w.parse::<i32>().map_err(|_| Error::parse(line, 1, format!("bad twist '{w}'"))))
        .collect()
}

/// Parses a matrix file. The header gives the target (`rows`) and source
/// (`cols`) twists: entry `(i, j)` must have degree `cols[j] - rows[i]`.
pub fn parse_matrix(ring: &Ring, text: &str) -> Result<GradedMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty matrix file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let cpos = words.iter().position(|&w| w == "cols");
    if words.first() != Some(&"rows") || cpos.is_none() {
        return Err(Error::parse(hline, 1, "expected header 'rows <twists> cols <twists>'"));
    }
    let cpos = cpos.unwrap();
    let target = FreeModule::new(parse_twists(&words[1..cpos], hline)?);
    let source = FreeModule::new(parse_twists(&words[cpos + 1..], hline)?);
    let mut rows = Vec::new();
    for (no, line) in lines {
        let mut row = Vec::new();
        let mut offset = 0;
        for piece in line.split(',') {
            row.push(parse_at(ring, piece, no, offset)?);
            offset += piece.len() + 1;
        }
        if row.len() != source.rank() {
            return Err(Error::parse(
                no,
                1,
                format!("row has {} entries, header declares {}", row.len(), source.rank()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != target.rank() {
        return Err(Error::parse(
            hline,
            1,
            format!("found {} rows, header declares {}", rows.len(), target.rank()),
        ));
    }
    GradedMatrix::from_rows_with_source(target, source, &rows)
}

pub fn format_matrix(ring: &Ring, m: &GradedMatrix) -> String {
    let join = |t: &[i32]| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("rows {} cols {}\n", join(&m.target.twists), join(&m.source.twists));
    for row in m.rows() {
        let entries: Vec<String> = row.iter().map(|f| ring.format(f)).collect();
        s.push_str(&entries.join(", "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::p4(31991).unwrap()
    }

    #[test]
    fn parses_and_formats() {
        let r = ring();
        let f = parse_polynomial(&r, "3*x0^2*x4 - x1*x2*x3").unwrap();
        // grevlex puts x1*x2*x3 first: it avoids the last variable
        assert_eq!(r.format(&f), "-x1*x2*x3 + 3*x0^2*x4");
        let g = parse_polynomial(&r, "(x0 + x1)*(x0 - x1)").unwrap();
        assert_eq!(r.format(&g), "x0^2 - x1^2");
        let h = parse_polynomial(&r, "-31992*x2").unwrap();
        assert_eq!(r.format(&h), "-x2");
        assert!(parse_polynomial(&r, "0").unwrap().is_zero());
    }

    #[test]
    fn reports_positions() {
        let r = ring();
        match parse_polynomial(&r, "x0 + x7") {
            Err(Error::Parse { line: 1, col: 7, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_ideal(&r, "x0\n\nx1 + x2^2\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial(&r, "x0 +").is_err());
        assert!(parse_polynomial(&r, "x0 x1").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let r = ring();
        let text = "rows 0 1\ncols 1 2\n";
        assert!(parse_matrix(&r, text).is_err());
        let text = "# koszul\nrows 1 1 cols 2\nx1\n-x0\n";
        let m = parse_matrix(&r, text).unwrap();
        assert_eq!(m.source.twists, vec![2]);
        let again = parse_matrix(&r, &format_matrix(&r, &m)).unwrap();
        assert_eq!(again, m);
        let bad = "rows 0 cols 2\nx0\n";
        assert!(matches!(parse_matrix(&r, bad), Err(Error::Degree(_))));
    }
}
