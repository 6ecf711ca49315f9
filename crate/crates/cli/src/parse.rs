//! Parser for the manifold description language:
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := 'S3' | lens | seifert | pretzel
//! lens    := 'lens' '(' int ',' int ')'
//! seifert := 'seifert' '(' base ';' int [';' pair (',' pair)*] ')'
//! base    := 'S2' | 'O' '(' int ')' | 'N' '(' int ')'
//! pretzel := 'pretzel' '(' int (',' int)* ')'
//! pair    := '(' int ',' int ')'
//! ```
//!
//! Whitespace is ignored. Only lens spaces and `S3` may be summed.

use s4embed::plumbing::{Base, LensSum, Manifold, PlumbingError, PretzelCover, SeifertManifold};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based column in the input.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

enum Term {
    S3,
    Lens(i64, i64),
    Other(Manifold),
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: at + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.err(self.pos, format!("expected '{c}', found '{d}'")),
            None => self.err(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
        self.pos += len;
        (start, &rest[..len])
    }

    fn int(&mut self) -> Result<(usize, i64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let sign = usize::from(rest.starts_with(['-', '+']));
        let digits = rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        if digits == 0 {
            return self.err(start, "expected an integer");
        }
        let text = &rest[..sign + digits];
        self.pos += text.len();
        match text.parse::<i64>() {
            Ok(v) => Ok((start, v)),
            Err(_) => self.err(start, format!("integer '{text}' out of range")),
        }
    }

    fn int_list(&mut self) -> Result<Vec<(usize, i64)>, ParseError> {
        let mut out = vec![self.int()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn pair(&mut self) -> Result<(usize, i64, i64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        self.expect('(')?;
        let (_, a) = self.int()?;
        self.expect(',')?;
        let (_, b) = self.int()?;
        self.expect(')')?;
        Ok((start, a, b))
    }

    fn base(&mut self) -> Result<Base, ParseError> {
        let (at, name) = self.ident();
        match name {
            "S2" => Ok(Base::Orientable(0)),
            "O" | "N" => {
                self.expect('(')?;
                let (k_at, k) = self.int()?;
                self.expect(')')?;
                let k = u32::try_from(k).or_else(|_| self.err(k_at, "surface parameter must be non-negative"))?;
                if name == "O" {
                    Ok(Base::Orientable(k))
                } else if k == 0 {
                    self.err(k_at, "N(k) needs k >= 1")
                } else {
                    Ok(Base::NonOrientable(k))
                }
            }
            "" => self.err(at, "expected a base surface S2, O(g) or N(k)"),
            other => self.err(at, format!("unknown base surface '{other}'")),
        }
    }

    fn term(&mut self) -> Result<(usize, Term), ParseError> {
        let (at, name) = self.ident();
        let term = match name {
            "S3" => Term::S3,
            "lens" => {
                self.expect('(')?;
                let (_, p) = self.int()?;
                self.expect(',')?;
                let (_, q) = self.int()?;
                self.expect(')')?;
                if let Err(e) = LensSum::new(vec![(p, q)]) {
                    return self.err(at, e.to_string());
                }
                Term::Lens(p, q)
            }
            "seifert" => {
                self.expect('(')?;
                let base = self.base()?;
                self.expect(';')?;
                let (_, r) = self.int()?;
                let mut invariants = Vec::new();
                if self.peek() == Some(';') {
                    self.pos += 1;
                    loop {
                        let (pair_at, a, b) = self.pair()?;
                        if let Err(e) = SeifertManifold::new(base, 0, vec![(a, b)]) {
                            return self.err(pair_at, e.to_string());
                        }
                        invariants.push((a, b));
                        if self.peek() != Some(',') {
                            break;
                        }
                        self.pos += 1;
                    }
                }
                self.expect(')')?;
                Term::Other(Manifold::Seifert(SeifertManifold { base, r, invariants }))
            }
            "pretzel" => {
                self.expect('(')?;
                let strands = self.int_list()?;
                self.expect(')')?;
                if let Some(&(zero_at, _)) = strands.iter().find(|(_, a)| *a == 0) {
                    return self.err(zero_at, PlumbingError::ZeroStrand.to_string());
                }
                match PretzelCover::new(strands.iter().map(|&(_, a)| a).collect()) {
                    Ok(p) => Term::Other(Manifold::Pretzel(p)),
                    Err(e) => return self.err(at, e.to_string()),
                }
            }
            "" => return self.err(at, "expected S3, lens, seifert or pretzel"),
            other => return self.err(at, format!("unknown term '{other}'")),
        };
        Ok((at, term))
    }
}

pub fn parse_manifold(text: &str) -> Result<Manifold, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut terms = vec![p.term()?];
    while p.peek() == Some('+') {
        p.pos += 1;
        terms.push(p.term()?);
    }
    if let Some(c) = p.peek() {
        return p.err(p.pos, format!("unexpected '{c}'"));
    }
    let mut summands = Vec::new();
    let mut other = None;
    for (at, t) in terms {
        match t {
            Term::S3 => {}
            Term::Lens(a, b) => summands.push((a, b)),
            Term::Other(m) => {
                if other.is_some() {
                    return p.err(at, "only lens spaces and S3 can be summed");
                }
                other = Some((at, m));
            }
        }
    }
    match other {
        Some((at, _)) if !summands.is_empty() => p.err(at, "only lens spaces and S3 can be summed"),
        Some((_, m)) => Ok(m),
        None if summands.is_empty() => Ok(Manifold::S3),
        None => Ok(Manifold::Lens(LensSum { summands })),
    }
}
