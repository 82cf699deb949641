//! Text format for portraits.
//!
//! ```text
//! portrait := perm                          (depth 1)
//!           | "((" portrait "," portrait "," portrait ")," perm ")"
//! perm     := "e" | "1" | "(12)" | "(13)" | "(23)" | "(123)" | "(132)"
//! ```
//!
//! The three inner portraits must share a depth `n-1`; the result has depth
//! `n`. Whitespace is ignored. `1` is accepted for the identity on input and
//! printed as `e`. Example: `((e,e,e),(123))` is the depth-2 element rotating
//! the three level-1 subtrees.

use std::fmt;
use std::str::FromStr;

use super::perm3::Perm3;
use super::portrait::Portrait;
use crate::error::{Error, Result};

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth() == 1 {
            return write!(f, "{}", self.root_label());
        }
        let (a, b) = self.wreath_split().map_err(|_| fmt::Error)?;
        write!(f, "(({},{},{}),{})", a[0], a[1], a[2], b)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Usage(format!("portrait parse error at byte {}: {what}", self.pos)))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {:?}", c as char))
        }
    }

    fn perm(&mut self) -> Result<Perm3> {
        let start = self.pos;
        match self.peek() {
            Some(b'e') | Some(b'1') => {
                self.pos += 1;
            }
            Some(b'(') => {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b')' {
                        break;
                    }
                }
            }
            _ => return self.err("expected a permutation"),
        }
        let tok = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match Perm3::from_name(tok) {
            Some(p) => Ok(p),
            None => self.err(&format!("unknown permutation {tok:?}")),
        }
    }

    fn portrait(&mut self) -> Result<Portrait> {
        // "((" opens a wreath element; "(" followed by a digit is a cycle.
        if self.peek() == Some(b'(') && self.src.get(self.pos + 1) == Some(&b'(') {
            self.expect(b'(')?;
            self.expect(b'(')?;
            let a1 = self.portrait()?;
            self.expect(b',')?;
            let a2 = self.portrait()?;
            self.expect(b',')?;
            let a3 = self.portrait()?;
            self.expect(b')')?;
            self.expect(b',')?;
            let b = self.perm()?;
            self.expect(b')')?;
            Portrait::wreath_build([&a1, &a2, &a3], b)
        } else {
            Ok(Portrait::single(self.perm()?))
        }
    }
}

impl FromStr for Portrait {
    type Err = Error;

    fn from_str(s: &str) -> Result<Portrait> {
        let compact: Vec<u8> = s.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
        let mut parser = Parser { src: &compact, pos: 0 };
        let out = parser.portrait()?;
        if parser.pos != compact.len() {
            return parser.err("trailing input");
        }
        Ok(out)
    }
}
