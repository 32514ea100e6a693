//! State-spec mini-language.
//!
//! ```text
//! spec   := term ("+" term)?
//! term   := ("w=" number)? ("g=" number)? target
//! target := CLASS ":" int "," int | "#" int
//! CLASS  := A | B | C | D | E1 | E
//! ```
//!
//! `w` is the magnitude |c| and `g` the phase γ of the coefficient
//! c = |c| e^{−iγ}. Examples: `C:0,3 + C:0,4`, `#0`, `w=0.8 D:4,0 + g=1.5 D:4,1`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::dynamics::SuperpositionSpec;
use crate::dynrep::Label;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Class { label: Label, q1: u32, q2: u32 },
    Index(usize),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Class { label, q1, q2 } => write!(f, "{label}:{q1},{q2}"),
            Target::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub target: Target,
    pub weight: Option<f64>,
    pub phase: Option<f64>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = self.weight {
            write!(f, "w={w} ")?;
        }
        if let Some(g) = self.phase {
            write!(f, "g={g} ")?;
        }
        write!(f, "{}", self.target)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub terms: Vec<Term>,
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_state_spec(s)
    }
}

impl StateSpec {
    /// Magnitudes after applying the defaults: 1 for a single term, 1/√2
    /// each for two, and √(1 − w²) for a partner of an explicit `w`.
    pub fn magnitudes(&self) -> Result<Vec<f64>> {
        let check = |w: f64| {
            if (0.0..=1.0).contains(&w) {
                Ok(w)
            } else {
                Err(Error::arg(format!("magnitude {w} outside [0, 1]")))
            }
        };
        let mags = match self.terms.as_slice() {
            [t] => vec![check(t.weight.unwrap_or(1.0))?],
            [a, b] => match (a.weight, b.weight) {
                (None, None) => vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                (Some(w), None) => vec![check(w)?, (1.0 - w * w).sqrt()],
                (None, Some(w)) => vec![(1.0 - w * w).sqrt(), check(w)?],
                (Some(x), Some(y)) => vec![check(x)?, check(y)?],
            },
            _ => return Err(Error::arg("a state spec has one or two terms")),
        };
        let norm: f64 = mags.iter().map(|m| m * m).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!("magnitudes are not normalised (sum of squares {norm})")));
        }
        Ok(mags)
    }

    /// Builds the superposition, mapping class targets to eigenstate indices
    /// through `resolve`.
    pub fn to_superposition(&self, mut resolve: impl FnMut(&Target) -> Result<usize>) -> Result<SuperpositionSpec> {
        let mags = self.magnitudes()?;
        let mut idx = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            idx.push(match t.target {
                Target::Index(i) => i,
                ref other => resolve(other)?,
            });
        }
        let phase = |t: &Term| t.phase.unwrap_or(0.0);
        Ok(match self.terms.as_slice() {
            [a] => SuperpositionSpec { a: idx[0], b: idx[0], mag_a: mags[0], mag_b: 0.0, gamma_a: phase(a), gamma_b: 0.0 },
            [a, b] => SuperpositionSpec {
                a: idx[0],
                b: idx[1],
                mag_a: mags[0],
                mag_b: mags[1],
                gamma_a: phase(a),
                gamma_b: phase(b),
            },
            _ => unreachable!("magnitudes() checked the term count"),
        })
    }
}

pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut terms = vec![p.term()?];
    p.skip_ws();
    while p.eat(b'+') {
        terms.push(p.term()?);
        p.skip_ws();
    }
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    if terms.len() > 2 {
        return Err(p.error("at most two terms are allowed"));
    }
    Ok(StateSpec { terms })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { line: 1, message: format!("{msg} at column {} of state spec", self.pos + 1) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts_with(&self, prefix: &str) -> bool {
        self.s[self.pos..].starts_with(prefix.as_bytes())
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let mut weight = None;
        let mut phase = None;
        loop {
            if self.starts_with("w=") && weight.is_none() {
                self.pos += 2;
                weight = Some(self.number()?);
            } else if self.starts_with("g=") && phase.is_none() {
                self.pos += 2;
                phase = Some(self.number()?);
            } else {
                break;
            }
            self.skip_ws();
        }
        let target = self.target()?;
        Ok(Term { target, weight, phase })
    }

    fn target(&mut self) -> Result<Target> {
        if self.eat(b'#') {
            return Ok(Target::Index(self.integer()? as usize));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        let label = match name {
            "A" => Label::A,
            "B" => Label::B,
            "C" => Label::C,
            "D" => Label::D,
            "E1" | "E" => Label::E1,
            "" => return Err(self.error("expected a class label or '#'")),
            other => {
                self.pos = start;
                return Err(self.error(&format!("unknown class '{other}'")));
            }
        };
        self.skip_ws();
        if !self.eat(b':') {
            return Err(self.error("expected ':'"));
        }
        let q1 = self.integer()?;
        self.skip_ws();
        if !self.eat(b',') {
            return Err(self.error("expected ','"));
        }
        let q2 = self.integer()?;
        Ok(Target::Class { label, q1, q2 })
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| {
                self.error("expected a non-negative integer")
            })
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let exp_sign = (c == b'+' || c == b'-')
                && self.pos > start
                && matches!(self.s[self.pos - 1], b'e' | b'E');
            let lead_sign = c == b'-' && self.pos == start;
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign || lead_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => {
                self.pos = start;
                Err(self.error("expected a finite number"))
            }
        }
    }
}
