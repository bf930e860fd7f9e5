//! Text descriptors for functors and modules: `G(2,1)`, `S(3;m=2)`, `L(2)`,
//! `T(3)` and `F(n)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::strictpoly::FunctorSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Functor(FunctorSpec),
    /// Free unstable module `F(n)`; has no polynomial-functor counterpart here.
    Free(usize),
}

impl Descriptor {
    pub fn functor(&self) -> Result<&FunctorSpec> {
        match self {
            Descriptor::Functor(f) => Ok(f),
            Descriptor::Free(n) => Err(Error::Parse(format!("F({n}) is not a strict polynomial functor"))),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Functor(s) => write!(f, "{s}"),
            Descriptor::Free(n) => write!(f, "F({n})"),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v: usize = t.parse().map_err(|_| Error::Parse(format!("bad integer '{t}'")))?;
            if v == 0 {
                return Err(Error::Parse("entries must be positive".into()));
            }
            Ok(v)
        })
        .collect()
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let open = t.find('(').ok_or_else(|| Error::Parse(format!("expected NAME(...) in '{text}'")))?;
        if !t.ends_with(')') {
            return Err(Error::Parse(format!("missing ')' in '{text}'")));
        }
        let head = &t[..open];
        let body = &t[open + 1..t.len() - 1];
        match head {
            "G" => Ok(Descriptor::Functor(FunctorSpec::Gamma(parse_list(body)?))),
            // A list of several degrees means the tensor product of the corresponding powers.
            "T" => Ok(Descriptor::Functor(FunctorSpec::TensorPower(parse_list(body)?.iter().sum()))),
            "L" => {
                let v = parse_list(body)?;
                if v.len() != 1 {
                    return Err(Error::Parse("L takes a single degree".into()));
                }
                Ok(Descriptor::Functor(FunctorSpec::Exterior(v[0])))
            }
            "F" => {
                let v = parse_list(body)?;
                if v.len() != 1 {
                    return Err(Error::Parse("F takes a single degree".into()));
                }
                Ok(Descriptor::Free(v[0]))
            }
            "S" => {
                let (d, m) = match body.split_once(';') {
                    Some((d, rest)) => {
                        let m = rest
                            .strip_prefix("m=")
                            .ok_or_else(|| Error::Parse(format!("expected 'm=' in '{text}'")))?;
                        (d, parse_list(m)?)
                    }
                    None => (body, vec![1]),
                };
                let d = parse_list(d)?;
                if d.len() != 1 || m.len() != 1 {
                    return Err(Error::Parse(format!("bad symmetric power '{text}'")));
                }
                Ok(Descriptor::Functor(FunctorSpec::SymParam { d: d[0], m: m[0] }))
            }
            _ => Err(Error::Parse(format!("unknown descriptor '{head}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["G(2,1)", "S(3;m=2)", "L(2)", "T(3)", "F(2)", "S(3;m=1)"] {
            let d: Descriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("S(3)".parse::<Descriptor>().unwrap().to_string(), "S(3;m=1)");
        assert_eq!("T(1,2)".parse::<Descriptor>().unwrap().to_string(), "T(3)");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["G()", "X(1)", "G(0)", "S(3;k=2)", "G(2", "L(1,1)", "Gamma"] {
            assert!(matches!(s.parse::<Descriptor>(), Err(Error::Parse(_))), "{s}");
        }
    }
}
