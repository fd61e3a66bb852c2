use super::{GroupPresentation, Letter, PresentationError, Word};

/// Parse `<gens | relators>`.
///
/// Generators are comma-separated identifiers and relators are separated by
/// `;`. A relator is a word such as `x*y^-1*(x*y)^3`, the identity `1`, or an
/// equation `lhs = rhs`, which is stored as `lhs * rhs^-1`.
pub fn parse_presentation(text: &str) -> Result<GroupPresentation, PresentationError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, gens: Vec::new() };
    p.skip_ws();
    p.expect(b'<')?;
    p.skip_ws();
    if p.peek() == Some(b'|') {
        return Err(PresentationError::EmptyGenerators);
    }
    loop {
        p.skip_ws();
        let start = p.pos;
        let name = p.ident()?;
        if p.gens.contains(&name) {
            return Err(PresentationError::Syntax { position: start, message: format!("duplicate generator `{name}`") });
        }
        p.gens.push(name);
        p.skip_ws();
        match p.peek() {
            Some(b',') => p.pos += 1,
            Some(b'|') => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.err("expected `,` or `|`")),
        }
    }
    let mut relators = Vec::new();
    loop {
        p.skip_ws();
        match p.peek() {
            Some(b'>') => {
                p.pos += 1;
                break;
            }
            Some(b';') => {
                p.pos += 1;
                continue;
            }
            None => return Err(p.err("unterminated presentation, expected `>`")),
            _ => {}
        }
        let lhs = p.word()?;
        p.skip_ws();
        let rel = if p.peek() == Some(b'=') {
            p.pos += 1;
            let rhs = p.word()?;
            lhs.concat(&rhs.invert())
        } else {
            lhs
        };
        relators.push(rel);
        p.skip_ws();
        match p.peek() {
            Some(b';') => p.pos += 1,
            Some(b'>') => {}
            _ => return Err(p.err("expected `;` or `>`")),
        }
    }
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input after `>`"));
    }
    GroupPresentation::new(p.gens, relators)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    gens: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> PresentationError {
        let found = match self.peek() {
            Some(c) => format!(", found `{}`", c as char),
            None => ", found end of input".to_string(),
        };
        PresentationError::Syntax { position: self.pos, message: format!("{message}{found}") }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), PresentationError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, PresentationError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.pos += 1,
            _ => return Err(self.err("expected identifier")),
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn word(&mut self) -> Result<Word, PresentationError> {
        self.skip_ws();
        let mut w = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                let f = self.factor()?;
                w = w.concat(&f);
            } else {
                return Ok(w);
            }
        }
    }

    fn factor(&mut self) -> Result<Word, PresentationError> {
        self.skip_ws();
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_ws();
                self.expect(b')')?;
                w
            }
            Some(b'1') => {
                self.pos += 1;
                Word::empty()
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident()?;
                let g = self
                    .gens
                    .iter()
                    .position(|x| *x == name)
                    .ok_or(PresentationError::UnknownGenerator { name, position: start })?;
                Word::new(vec![Letter::new(g, 1)])
            }
            _ => return Err(self.err("expected generator, `1` or `(`")),
        };
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.int()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn int(&mut self) -> Result<i32, PresentationError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = digits;
            return Err(self.err("expected integer exponent"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<i32>().ok())
            .filter(|k| k.unsigned_abs() <= 10_000)
            .ok_or(PresentationError::Syntax { position: start, message: "exponent out of range".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil() {
        let p = parse_presentation("<x,y | x*y*x = y*x*y>").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relators()[0], Word::from_pairs(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]));
    }

    #[test]
    fn trivial_group() {
        let p = parse_presentation("<a | a>").unwrap();
        assert_eq!(p.relators(), &[Word::generator(0)]);
    }

    #[test]
    fn unknown_generator_position() {
        let e = parse_presentation("<x | x*z>").unwrap_err();
        assert_eq!(e, PresentationError::UnknownGenerator { name: "z".into(), position: 7 });
    }

    #[test]
    fn empty_generators() {
        assert_eq!(parse_presentation("< | >").unwrap_err(), PresentationError::EmptyGenerators);
    }

    #[test]
    fn syntax_error_position() {
        match parse_presentation("<x | x**x>").unwrap_err() {
            PresentationError::Syntax { position, .. } => assert_eq!(position, 7),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn free_group() {
        let p = parse_presentation("<x, y | >").unwrap();
        assert_eq!(p.num_relators(), 0);
    }
}
