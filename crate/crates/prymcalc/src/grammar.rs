//! Text form of divisor classes.
//!
//! ```text
//! class := "0" | [sign] term (sign term)*
//! term  := [coeff "*"] gen
//! coeff := int ["/" int]
//! gen   := "lambda" | "kappa1" | "psi" | "psi[" int "]" | "d0" | "d0p" | "d0pp"
//!        | "d0ram" | "d{" int "," set "}" | "d{" int "," set ":" int "}"
//!        | "dO{" int "}" | "dEta{" int "}"
//! set   := "{" [int ("," int)*] "}" | "∅"
//! ```
//!
//! Bounded coefficients use extra term forms. `- [>=m]*gen` says the
//! coefficient is at most `−m` (`AtLeast(m)`), `- [<=m]*gen` says it is at
//! least `−m` (`AtMost(m)`), `+ [>=m]*gen` and `+ [<=m]*gen` bound it by `m`
//! directly, and `?*gen` marks it unknown. Whitespace is ignored.

use crate::bound::CoeffBound;
use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{GeneratorId, Label, MarkSet, SpaceId, MAX_MARKS};

pub fn format_class<T: Scalar>(cls: &DivisorClass<T>) -> String {
    if cls.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (gen, b)) in cls.iter().enumerate() {
        let (negative, body) = match b {
            CoeffBound::Exact(v) => {
                let a = v.abs();
                let body = if a.is_one() { gen.to_string() } else { format!("{a}*{gen}") };
                (v.is_negative(), body)
            }
            CoeffBound::AtLeast(m) if m.is_negative() => (false, format!("[<={}]*{gen}", m.abs())),
            CoeffBound::AtMost(m) if m.is_negative() => (false, format!("[>={}]*{gen}", m.abs())),
            CoeffBound::AtLeast(m) => (true, format!("[>={m}]*{gen}")),
            CoeffBound::AtMost(m) => (true, format!("[<={m}]*{gen}")),
            CoeffBound::Unknown => (false, format!("?*{gen}")),
        };
        match (k, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

pub fn parse_class<T: Scalar>(text: &str, space: SpaceId) -> Result<DivisorClass<T>> {
    Parser { src: text, pos: 0, space }.class()
}

/// Parses a single generator name against `space` and canonicalizes it.
pub fn parse_generator(text: &str, space: SpaceId) -> Result<GeneratorId> {
    let mut p = Parser { src: text, pos: 0, space };
    let gen = match p.generator()? {
        Gen::Basis(g) => g,
        Gen::Kappa1 => return p.fail("kappa1 is not a basis generator"),
    };
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.fail("trailing input");
    }
    space.canonicalize(&gen)
}

enum Gen {
    Basis(GeneratorId),
    Kappa1,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    space: SpaceId,
}

impl<'a> Parser<'a> {
    fn fail<X>(&self, msg: impl Into<String>) -> Result<X> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.fail(format!("expected '{lit}'"))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.fail("expected a number");
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn index(&mut self) -> Result<u32> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| Error::Parse { pos: start, msg: format!("index {d} too large") })
    }

    fn rational<T: Scalar>(&mut self, allow_sign: bool) -> Result<T> {
        self.skip_ws();
        let start = self.pos;
        let neg = allow_sign && self.eat("-");
        let num = self.digits()?;
        let mut text = format!("{}{num}", if neg { "-" } else { "" });
        if self.eat("/") {
            let den = self.digits()?;
            if den.bytes().all(|b| b == b'0') {
                return Err(Error::Parse { pos: start, msg: "zero denominator".into() });
            }
            text.push('/');
            text.push_str(den);
        }
        text.parse::<T>().map_err(|_| Error::Parse { pos: start, msg: format!("invalid number {text}") })
    }

    fn class<T: Scalar>(&mut self) -> Result<DivisorClass<T>> {
        let mut out = DivisorClass::zero(self.space);
        self.skip_ws();
        if self.rest().is_empty() {
            return self.fail("empty class expression");
        }
        let save = self.pos;
        if self.eat("0") {
            self.skip_ws();
            if self.rest().is_empty() {
                return Ok(out);
            }
            self.pos = save;
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            let negative = if self.eat("+") {
                false
            } else if self.eat("-") {
                true
            } else if first {
                false
            } else {
                return self.fail("expected '+' or '-'");
            };
            first = false;
            self.term(negative, &mut out)?;
        }
        Ok(out)
    }

    fn term<T: Scalar>(&mut self, negative: bool, out: &mut DivisorClass<T>) -> Result<()> {
        let start = self.pos;
        let coeff: CoeffBound<T> = match self.peek() {
            Some('[') => {
                self.expect("[")?;
                let at_least = if self.eat(">=") {
                    true
                } else if self.eat("<=") {
                    false
                } else {
                    return self.fail("expected '>=' or '<='");
                };
                let m = self.rational(true)?;
                self.expect("]")?;
                self.expect("*")?;
                match (negative, at_least) {
                    (true, true) => CoeffBound::AtLeast(m),
                    (true, false) => CoeffBound::AtMost(m),
                    (false, true) => CoeffBound::AtMost(-m),
                    (false, false) => CoeffBound::AtLeast(-m),
                }
            }
            Some('?') => {
                self.expect("?")?;
                self.expect("*")?;
                CoeffBound::Unknown
            }
            Some(c) if c.is_ascii_digit() => {
                let v: T = self.rational(false)?;
                self.expect("*")?;
                CoeffBound::Exact(if negative { -v } else { v })
            }
            _ => CoeffBound::Exact(if negative { -T::one() } else { T::one() }),
        };
        let gen_pos = self.pos;
        match self.generator()? {
            Gen::Basis(gen) => out.add_bound(&gen, coeff).map_err(|e| Error::Parse { pos: gen_pos, msg: e.to_string() }),
            Gen::Kappa1 => {
                let Some(k) = coeff.exact() else {
                    return Err(Error::Parse { pos: start, msg: "kappa1 needs an exact coefficient".into() });
                };
                let kappa = crate::morphisms::kappa1::<T>(self.space)
                    .map_err(|e| Error::Parse { pos: gen_pos, msg: e.to_string() })?;
                *out = out.add_scaled(k, &kappa)?;
                Ok(())
            }
        }
    }

    fn generator(&mut self) -> Result<Gen> {
        self.skip_ws();
        let word_len = self.rest().bytes().take_while(u8::is_ascii_alphanumeric).count();
        let word = &self.rest()[..word_len];
        let start = self.pos;
        self.pos += word_len;
        let gen = match word {
            "lambda" => GeneratorId::Lambda,
            "kappa1" => return Ok(Gen::Kappa1),
            "psi" => {
                if self.rest().starts_with('[') {
                    self.expect("[")?;
                    let j = self.index()?;
                    self.expect("]")?;
                    GeneratorId::Psi(j)
                } else {
                    GeneratorId::PsiTotal
                }
            }
            "d0" => GeneratorId::Delta0,
            "d0p" => GeneratorId::Delta0Prime,
            "d0pp" => GeneratorId::Delta0DoublePrime,
            "d0ram" => GeneratorId::Delta0Ram,
            "dO" | "dEta" => {
                let label = if word == "dO" { Label::O } else { Label::Eta };
                self.expect("{")?;
                let i = self.index()?;
                self.expect("}")?;
                GeneratorId::Marked { i, label }
            }
            "d" => {
                self.expect("{")?;
                let i = self.index()?;
                self.expect(",")?;
                let s = self.set()?;
                let gen = if self.eat(":") {
                    let rest = self.index()?;
                    GeneratorId::Split { i, s, rest }
                } else {
                    GeneratorId::Delta { i, s }
                };
                self.expect("}")?;
                gen
            }
            _ => {
                self.pos = start;
                return self.fail(if word.is_empty() { "expected a generator".to_string() } else { format!("unknown generator name '{word}'") });
            }
        };
        Ok(Gen::Basis(gen))
    }

    fn set(&mut self) -> Result<MarkSet> {
        if self.eat("∅") {
            return Ok(MarkSet::empty());
        }
        self.expect("{")?;
        let mut marks = Vec::new();
        if !self.eat("}") {
            loop {
                let at = self.pos;
                let j = self.index()?;
                if j == 0 || j > MAX_MARKS {
                    return Err(Error::Parse { pos: at, msg: format!("marking {j} out of range") });
                }
                if marks.contains(&j) {
                    return Err(Error::Parse { pos: at, msg: format!("marking {j} repeated") });
                }
                marks.push(j);
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(MarkSet::from_marks(&marks))
    }
}
