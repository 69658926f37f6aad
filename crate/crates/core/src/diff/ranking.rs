use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::algebra::Var;
use crate::error::{Error, Result};

/// A differential ranking given by blocks of base names.
///
/// Blocks are compared by elimination (an earlier block outranks every
/// derivative of a later one). Inside a block the ranking is orderly: higher
/// derivative order wins, then the earlier name. Names that appear in no
/// block are not differential indeterminates; they behave as constants.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    blocks: Vec<Vec<Arc<str>>>,
}

impl Ranking {
    pub fn new<S: AsRef<str>>(blocks: Vec<Vec<S>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for b in blocks {
            let mut blk = Vec::new();
            for n in b {
                let n = n.as_ref();
                if !seen.insert(n.to_string()) {
                    return Err(Error::Invalid(format!("name `{n}` repeated in ranking")));
                }
                blk.push(Arc::from(n));
            }
            if !blk.is_empty() {
                out.push(blk);
            }
        }
        Ok(Ranking { blocks: out })
    }

    /// Pure elimination ranking: each name its own block, highest first.
    pub fn elimination<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names.iter().map(|n| vec![n.as_ref()]).collect())
    }

    /// One orderly block.
    pub fn orderly<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(vec![names.iter().map(|n| n.as_ref()).collect()])
    }

    pub fn blocks(&self) -> &[Vec<Arc<str>>] {
        &self.blocks
    }

    /// All names, highest block first.
    pub fn names(&self) -> impl Iterator<Item = &Arc<str>> {
        self.blocks.iter().flatten()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names().any(|n| &**n == name)
    }

    pub fn is_ranked(&self, v: &Var) -> bool {
        self.contains(v.name())
    }

    fn key(&self, v: &Var) -> Option<(usize, u32, usize)> {
        for (bi, b) in self.blocks.iter().enumerate() {
            if let Some(pos) = b.iter().position(|n| **n == *v.name()) {
                return Some((self.blocks.len() - bi, v.order(), b.len() - pos));
            }
        }
        None
    }

    /// Compares two ranked variables; unranked ones sort below everything.
    pub fn cmp(&self, a: &Var, b: &Var) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Returns a new ranking with `outer` prepended as higher blocks.
    pub fn with_higher_block<S: AsRef<str>>(&self, outer: &[S]) -> Result<Self> {
        let mut blocks: Vec<Vec<String>> = vec![outer.iter().map(|s| s.as_ref().to_string()).collect()];
        blocks.extend(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|s| s.to_string()).collect()),
        );
        Self::new(blocks)
    }

    /// Descriptor listing blocks high to low, names within a block joined by `|`.
    pub fn descriptor(&self) -> Vec<String> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("|"))
            .collect()
    }

    /// Parses a comma list whose entries are elimination blocks; an entry may
    /// group names of one orderly block with `|`.
    pub fn parse(spec: &str) -> Result<Self> {
        let blocks: Vec<Vec<&str>> = spec
            .split(',')
            .map(|e| e.split('|').map(str::trim).filter(|s| !s.is_empty()).collect())
            .collect();
        if blocks.iter().any(|b: &Vec<&str>| b.is_empty()) {
            return Err(Error::Invalid(format!("malformed ranking `{spec}`")));
        }
        Self::new(blocks)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor().join(" > "))
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_and_orderly() {
        let r = Ranking::parse("y2,y1|y3").unwrap();
        assert_eq!(r.cmp(&Var::new("y2"), &Var::jet("y1", 5)), Ordering::Greater);
        assert_eq!(r.cmp(&Var::jet("y3", 1), &Var::new("y1")), Ordering::Greater);
        assert_eq!(r.cmp(&Var::new("y1"), &Var::new("y3")), Ordering::Greater);
        assert_eq!(r.cmp(&Var::new("a"), &Var::new("y3")), Ordering::Less);
        assert_eq!(r.descriptor(), vec!["y2".to_string(), "y1|y3".to_string()]);
    }
}
