//! The sequences `ω ∈ {0,1,2}^ℕ` and the groups `G_ω` they define.
//!
//! Each symbol selects, level by level, which of the generators `b, c, d` act
//! by a branch transposition: the letter identified with symbol `s`
//! (`d ↔ 0`, `c ↔ 1`, `b ↔ 2`) is the one that stays idle at level `n`
//! exactly when `ω_n = s`.

mod generator;
mod growth;
mod relators;
mod tree;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub(crate) use generator::apply_letter;
pub use generator::{abelianization_class, AbelianClass, Generator, GeneratorWord};
pub(crate) use growth::stable_depth;
pub use growth::{ball_sizes, ElementBall, GrowthReport};
pub use relators::{relators_u, standard_relations, verify_trivial, TrivialityCheck};
pub use tree::{generator_action, word_action, TreeAutomorphism, MAX_TREE_DEPTH};

/// An eventually periodic word over `{0,1,2}`: `preperiod` followed by
/// `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaWord {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl OmegaWord {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidOmega("period must be nonempty".into()));
        }
        if let Some(s) = preperiod.iter().chain(&period).find(|&&s| s > 2) {
            return Err(Error::InvalidOmega(format!(
                "symbol {s} is not in {{0,1,2}}"
            )));
        }
        Ok(OmegaWord { preperiod, period })
    }

    /// The purely periodic word `period^∞`.
    pub fn periodic(period: &[u8]) -> Result<Self> {
        Self::new(Vec::new(), period.to_vec())
    }

    /// Parses `PRE:PERIOD`, e.g. `:012` or `0001:2`. A string without a colon
    /// is read as a period.
    pub fn parse(text: &str) -> Result<Self> {
        let (pre, per) = match text.split_once(':') {
            Some((pre, per)) => (pre, per),
            None => ("", text),
        };
        let digits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    '2' => Ok(2),
                    other => Err(Error::InvalidOmega(format!(
                        "unexpected character {other:?}"
                    ))),
                })
                .collect()
        };
        Self::new(digits(pre.trim())?, digits(per.trim())?)
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// `ω_n` for `n ≥ 1`.
    pub fn symbol(&self, n: usize) -> u8 {
        assert!(n >= 1, "omega symbols are indexed from 1");
        let i = n - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `len` symbols.
    pub fn prefix(&self, len: usize) -> Vec<u8> {
        (1..=len).map(|n| self.symbol(n)).collect()
    }

    /// `ω'`: the word with its first symbol removed.
    pub fn shift(&self) -> OmegaWord {
        if self.preperiod.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            OmegaWord {
                preperiod: Vec::new(),
                period,
            }
        } else {
            OmegaWord {
                preperiod: self.preperiod[1..].to_vec(),
                period: self.period.clone(),
            }
        }
    }

    fn period_symbols(&self) -> usize {
        let mut seen = [false; 3];
        for &s in &self.period {
            seen[s as usize] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// At least two symbols occur infinitely often.
    pub fn in_omega2(&self) -> bool {
        self.period_symbols() >= 2
    }

    /// Exactly one symbol occurs infinitely often.
    pub fn is_almost_constant(&self) -> bool {
        self.period_symbols() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_almost_constant() && self.preperiod.iter().all(|&s| s == self.period[0])
    }

    /// Length after which no new pattern can appear for the first time.
    fn horizon(&self) -> usize {
        self.preperiod.len() + 2 * self.period.len() + 3
    }

    pub fn classify(&self) -> Classification {
        classify_omega(self)
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s}")?;
        }
        f.write_str(":")?;
        for s in &self.period {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for OmegaWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OmegaWord::parse(s)
    }
}

/// The three prefix shapes `xx…xy`, `xy…yx` and `xy…yz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaType {
    One,
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaForm {
    pub kind: OmegaType,
    pub x: u8,
    pub y: u8,
    pub z: u8,
    /// Length of the distinguishing prefix, always `> 2`.
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub in_omega2: bool,
    pub constant: bool,
    pub almost_constant: bool,
    /// `None` when the word never leaves its initial pattern (constant, or
    /// `x y y y …`).
    pub form: Option<OmegaForm>,
}

pub fn classify_omega(w: &OmegaWord) -> Classification {
    let horizon = w.horizon();
    let x = w.symbol(1);
    let second = w.symbol(2);
    let form = if second == x {
        (3..=horizon).find(|&i| w.symbol(i) != x).map(|i| {
            let y = w.symbol(i);
            OmegaForm {
                kind: OmegaType::One,
                x,
                y,
                z: 3 - x - y,
                n: i,
            }
        })
    } else {
        let y = second;
        let z = 3 - x - y;
        (3..=horizon)
            .find(|&i| w.symbol(i) != y)
            .map(|i| OmegaForm {
                kind: if w.symbol(i) == x {
                    OmegaType::Two
                } else {
                    OmegaType::Three
                },
                x,
                y,
                z,
                n: i,
            })
    };
    Classification {
        in_omega2: w.in_omega2(),
        constant: w.is_constant(),
        almost_constant: w.is_almost_constant(),
        form,
    }
}

/// A prefix of one of the index sequences `u_ω`, `v_ω`, `δ_ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSequence {
    pub indices: Vec<usize>,
    /// The sequence has fewer than the requested number of terms (it is
    /// finite because the corresponding row is eventually always `I`).
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSequences {
    pub u: IndexSequence,
    pub v: IndexSequence,
    pub delta: IndexSequence,
}

/// First `count` indices at which `b`, `c` and `d` respectively act.
pub fn sigma_sequences(w: &OmegaWord, count: usize) -> SigmaSequences {
    let seq = |g: Generator| {
        let mut indices = Vec::with_capacity(count);
        // Once the preperiod and a full period have been scanned without a
        // hit in the period, the sequence never continues.
        let periodic_hit = w.period.iter().any(|&s| g.acts_on_symbol(s));
        let mut n = 1;
        while indices.len() < count {
            if !periodic_hit && n > w.preperiod.len() {
                break;
            }
            if g.acts_on_symbol(w.symbol(n)) {
                indices.push(n);
            }
            n += 1;
        }
        let exhausted = indices.len() < count;
        IndexSequence { indices, exhausted }
    };
    SigmaSequences {
        u: seq(Generator::B),
        v: seq(Generator::C),
        delta: seq(Generator::D),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(s: &str) -> OmegaWord {
        OmegaWord::parse(s).unwrap()
    }

    #[test]
    fn symbols_index_preperiod_then_period() {
        let w = om("0001:2");
        assert_eq!(w.prefix(7), vec![0, 0, 0, 1, 2, 2, 2]);
        assert_eq!(om(":012").prefix(7), vec![0, 1, 2, 0, 1, 2, 0]);
        assert_eq!(om("0:12").shift(), om(":12"));
        assert_eq!(om(":012").shift(), om(":120"));
    }

    #[test]
    fn rejects_bad_words() {
        assert!(OmegaWord::parse("01:").is_err());
        assert!(OmegaWord::parse(":013").is_err());
        assert!(OmegaWord::new(vec![], vec![3]).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [":012", "0001:2", "0:12"] {
            assert_eq!(om(s).to_string(), s);
        }
    }

    #[test]
    fn omega2_membership() {
        assert!(om(":012").in_omega2());
        let c = om(":0").classify();
        assert!(!c.in_omega2 && c.constant && c.form.is_none());
        assert!(!om("0001:2").in_omega2());
        assert!(om("2:01").in_omega2());
    }

    #[test]
    fn classification_examples() {
        let c = om("0001:2").classify();
        assert!(c.almost_constant && !c.constant);
        assert_eq!(
            c.form,
            Some(OmegaForm {
                kind: OmegaType::One,
                x: 0,
                y: 1,
                z: 2,
                n: 4
            })
        );
        let f = om(":012").classify().form.unwrap();
        assert_eq!((f.kind, f.x, f.y, f.z, f.n), (OmegaType::Three, 0, 1, 2, 3));
        let f = om(":01").classify().form.unwrap();
        assert_eq!((f.kind, f.x, f.y, f.z, f.n), (OmegaType::Two, 0, 1, 2, 3));
        let f = om("0:12").classify().form.unwrap();
        assert_eq!((f.kind, f.x, f.y, f.n), (OmegaType::Three, 0, 1, 3));
        let f = om("0111:20").classify().form.unwrap();
        assert_eq!((f.kind, f.z, f.n), (OmegaType::Three, 2, 5));
        // x followed by y forever never resolves
        assert_eq!(om("0:1").classify().form, None);
    }

    #[test]
    fn sigma_sequence_examples() {
        let s = sigma_sequences(&om(":012"), 2);
        assert_eq!(s.u.indices, vec![1, 2]);
        assert_eq!(s.v.indices, vec![1, 3]);
        assert_eq!(s.delta.indices, vec![2, 3]);

        let s = sigma_sequences(&om(":0"), 3);
        assert_eq!(s.u.indices, vec![1, 2, 3]);
        assert_eq!(s.v.indices, vec![1, 2, 3]);
        assert!(s.delta.indices.is_empty() && s.delta.exhausted);

        let s = sigma_sequences(&om(":2"), 2);
        assert!(s.u.exhausted && s.u.indices.is_empty());
        assert_eq!(s.v.indices, vec![1, 2]);
        assert_eq!(s.delta.indices, vec![1, 2]);

        let s = sigma_sequences(&om("10:0"), 4);
        assert_eq!(s.delta.indices, vec![1]);
        assert!(s.delta.exhausted);
    }
}
