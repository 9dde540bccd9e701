//! Text form of series.
//!
//! ```text
//! expr := term (("+"|"-") term)* ["+" "O(" "t^(" rat ")" ")"]
//! term := rat ["*" tpow] | tpow
//! tpow := "t" ["^" (int | "(" rat ")")]
//! rat  := int ["/" posint]
//! ```
//!
//! Whitespace between tokens is ignored. A leading sign on the first term is
//! accepted so that printed negative leading terms such as `-t` read back.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lambda::Rat;
use super::series::PuiseuxElem;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { offset: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat(b'-');
        let v = self.digits()?;
        Ok(if neg { -v } else { v })
    }

    fn rat(&mut self) -> Result<Rat> {
        let num = self.int()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::Syntax { offset: at, msg: "zero denominator".into() });
            }
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from_integer(num))
        }
    }

    fn tpow(&mut self) -> Result<Rat> {
        self.expect(b't')?;
        if self.eat(b'^') {
            if self.eat(b'(') {
                let r = self.rat()?;
                self.expect(b')')?;
                Ok(r)
            } else {
                Ok(Rat::from_integer(self.int()?))
            }
        } else {
            Ok(Rat::one())
        }
    }

    fn term(&mut self) -> Result<(Rat, Rat)> {
        if self.peek() == Some(b't') {
            let e = self.tpow()?;
            return Ok((e, Rat::one()));
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'-' => {}
            _ => return Err(self.err("expected a term")),
        }
        let c = self.rat()?;
        if self.eat(b'*') {
            let e = self.tpow()?;
            Ok((e, c))
        } else {
            Ok((Rat::zero(), c))
        }
    }

    /// `O(t^(rat))` or `O(t^int)`, entered after the `+`.
    fn big_o(&mut self) -> Result<Rat> {
        self.expect(b'O')?;
        self.expect(b'(')?;
        let e = self.tpow()?;
        self.expect(b')')?;
        Ok(e)
    }
}

/// Parses the text form of a series.
pub fn parse(text: &str) -> Result<PuiseuxElem> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut terms: Vec<(Rat, Rat)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut floor = None;
    let mut push = |(e, c): (Rat, Rat)| -> Result<()> {
        if !seen.insert(e.clone()) {
            return Err(Error::DuplicateExponent(e.to_string()));
        }
        terms.push((e, c));
        Ok(())
    };
    let sign_then_t = |p: &Parser| {
        p.src.get(p.pos + 1).is_some_and(|b| *b == b't' || b.is_ascii_whitespace())
    };
    let leading_neg = if p.peek() == Some(b'-') && sign_then_t(&p) {
        p.pos += 1;
        true
    } else {
        p.eat(b'+');
        false
    };
    let (e, c) = p.term()?;
    push((e, if leading_neg { -c } else { c }))?;
    loop {
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                if p.peek() == Some(b'O') {
                    floor = Some(p.big_o()?);
                    if p.peek().is_some() {
                        return Err(p.err("trailing input after O(...)"));
                    }
                    break;
                }
                let t = p.term()?;
                push(t)?;
            }
            Some(b'-') => {
                p.pos += 1;
                let (e, c) = p.term()?;
                push((e, -c))?;
            }
            Some(_) => return Err(p.err("expected '+', '-' or end of input")),
        }
    }
    Ok(PuiseuxElem::from_terms(terms, floor))
}

fn print_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn print_tpow(e: &Rat) -> String {
    if e.is_one() {
        "t".to_string()
    } else if e.is_integer() && !e.is_negative() {
        format!("t^{}", e.numer())
    } else {
        format!("t^({})", print_rat(e))
    }
}

/// Canonical text: descending exponents, explicit signs, `t` for exponent
/// one, `t^0` omitted, fractional or negative exponents in parentheses.
pub fn print(x: &PuiseuxElem) -> String {
    let mut out = String::new();
    for (k, (e, c)) in x.terms().iter().enumerate() {
        let mag = c.abs();
        let body = if e.is_zero() {
            print_rat(&mag)
        } else if mag.is_one() {
            print_tpow(e)
        } else {
            format!("{}*{}", print_rat(&mag), print_tpow(e))
        };
        if k == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    if let Some(f) = x.floor() {
        out.push_str(&format!(" + O(t^({}))", print_rat(f)));
    }
    out
}
