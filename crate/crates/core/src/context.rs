//! Built-in quivers and the recipe for realizing them over a given field.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::ValuedQuiver;
use crate::error::{Error, Result};
use crate::modrep::Species;

pub const KRONECKER: &str = "vertex 1\nvertex 2\narrow a 1 2\narrow b 1 2\n";
pub const A2TILDE: &str = "vertex 1\nvertex 2\nvertex 3\narrow a 1 3\narrow b 2 3\narrow c 1 2\n";
pub const A1: &str = "vertex 1\n";
pub const A2: &str = "vertex 1\nvertex 2\narrow a 1 2\n";
pub const C2_FOLDED: &str = "vertex 1 d=2\nvertex 2\narrow a 1 2 m=2\n";
pub const C2TILDE_FOLDED: &str = "vertex 1\nvertex 2 d=2\nvertex 3\narrow a 1 2 m=2\narrow b 3 2 m=2\n";

/// Names accepted by [`Context::from_str`].
pub const BUILTIN: [&str; 8] = ["a1", "a2", "kronecker", "a2tilde", "c2-folded", "c2tilde-folded", "cyclic:2", "cyclic:3"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Context {
    Quiver { name: String, quiver: ValuedQuiver },
    Cyclic(usize),
}

impl Context {
    pub fn quiver(name: &str, text: &str) -> Result<Self> {
        Ok(Self::Quiver { name: name.to_string(), quiver: ValuedQuiver::parse(text)? })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::quiver(&path.display().to_string(), &text)
    }

    pub fn name(&self) -> String {
        match self {
            Self::Quiver { name, .. } => name.clone(),
            Self::Cyclic(r) => format!("cyclic:{r}"),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Quiver { quiver, .. } => quiver.n(),
            Self::Cyclic(r) => *r,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Self::Cyclic(_))
    }

    pub fn d(&self, i: usize) -> usize {
        match self {
            Self::Quiver { quiver, .. } => quiver.d[i] as usize,
            Self::Cyclic(_) => 1,
        }
    }

    pub fn species(&self, q: u32) -> Result<Species> {
        match self {
            Self::Quiver { quiver, .. } => Species::new(quiver, q),
            Self::Cyclic(r) => Species::cyclic(*r, q),
        }
    }

    pub fn all_builtin() -> Vec<Self> {
        BUILTIN.iter().map(|s| s.parse().expect("builtin context")).collect()
    }
}

impl FromStr for Context {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = match s {
            "a1" => A1,
            "a2" => A2,
            "kronecker" => KRONECKER,
            "a2tilde" => A2TILDE,
            "c2-folded" => C2_FOLDED,
            "c2tilde-folded" => C2TILDE_FOLDED,
            _ => {
                if let Some(r) = s.strip_prefix("cyclic:") {
                    let r: usize = r.parse().map_err(|_| Error::Parse(format!("bad cyclic rank in {s:?}")))?;
                    if r == 0 {
                        return Err(Error::Domain("cyclic quiver needs r ≥ 1".into()));
                    }
                    return Ok(Self::Cyclic(r));
                }
                return Err(Error::Context(format!("unknown context {s:?}")));
            }
        };
        Self::quiver(s, text)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::cartan_of;

    #[test]
    fn builtins_parse() {
        for c in Context::all_builtin() {
            assert!(c.species(2).is_ok(), "{c}");
        }
        assert!("nope".parse::<Context>().is_err());
        assert_eq!("cyclic:4".parse::<Context>().unwrap(), Context::Cyclic(4));
    }

    #[test]
    fn affine_builtins() {
        for name in ["kronecker", "a2tilde", "c2tilde-folded"] {
            let Context::Quiver { quiver, .. } = name.parse().unwrap() else { unreachable!() };
            assert!(cartan_of(&quiver).is_affine(), "{name}");
        }
        let Context::Quiver { quiver, .. } = "c2-folded".parse().unwrap() else { unreachable!() };
        assert!(!cartan_of(&quiver).is_affine());
    }
}
