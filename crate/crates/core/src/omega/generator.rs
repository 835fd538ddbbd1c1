use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::OmegaWord;
use crate::{Error, Result};

/// One of the four generators `a, b_ω, c_ω, d_ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
    C,
    D,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A, Generator::B, Generator::C, Generator::D];

    pub fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
            Generator::C => 'c',
            Generator::D => 'd',
        }
    }

    pub fn from_letter(c: char) -> Option<Generator> {
        match c {
            'a' => Some(Generator::A),
            'b' => Some(Generator::B),
            'c' => Some(Generator::C),
            'd' => Some(Generator::D),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The ω-symbol identified with this letter (`d ↔ 0`, `c ↔ 1`, `b ↔ 2`).
    pub fn symbol(self) -> Option<u8> {
        match self {
            Generator::A => None,
            Generator::B => Some(2),
            Generator::C => Some(1),
            Generator::D => Some(0),
        }
    }

    pub fn from_symbol(s: u8) -> Generator {
        match s {
            0 => Generator::D,
            1 => Generator::C,
            2 => Generator::B,
            _ => panic!("symbol {s} is not in {{0,1,2}}"),
        }
    }

    /// Whether the column of symbol `s` has `Π` in this generator's row.
    pub(crate) fn acts_on_symbol(self, s: u8) -> bool {
        match self.symbol() {
            Some(own) => own != s,
            None => false,
        }
    }

    /// Bit `n - 1` is set when `σ_n` is a factor, for `1 ≤ n < depth`.
    /// Always zero for `a`.
    pub(crate) fn level_mask(self, omega: &OmegaWord, depth: u32) -> u32 {
        let mut mask = 0u32;
        for n in 1..depth as usize {
            if self.acts_on_symbol(omega.symbol(n)) {
                mask |= 1 << (n - 1);
            }
        }
        mask
    }
}

/// Image of the level-`depth` vertex `x` (letter 1 in the top bit) under a
/// generator with `mask` from [`Generator::level_mask`].
#[inline]
pub(crate) fn apply_letter(g: Generator, mask: u32, depth: u32, x: u32) -> u32 {
    let top = 1u32 << (depth - 1);
    if g == Generator::A {
        return x ^ top;
    }
    // w_n = 1^{n-1}0 is the prefix of x with n - 1 leading ones.
    let leading_ones = (!(x << (32 - depth))).leading_zeros();
    let n = leading_ones + 1;
    if n < depth && mask & (1 << (n - 1)) != 0 {
        x ^ (top >> n)
    } else {
        x
    }
}

/// A finite word over `{a, b, c, d}`; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GeneratorWord {
    pub letters: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Generator>) -> Self {
        GeneratorWord { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.trim()
            .chars()
            .map(|c| {
                Generator::from_letter(c).ok_or_else(|| {
                    Error::InvalidWord(format!("letter {c:?} is not one of a, b, c, d"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GeneratorWord { letters }
    }

    pub fn pow(&self, exponent: usize) -> GeneratorWord {
        GeneratorWord {
            letters: self.letters.repeat(exponent),
        }
    }

    /// Replaces every letter by a word.
    pub fn substitute(&self, image: impl Fn(Generator) -> GeneratorWord) -> GeneratorWord {
        GeneratorWord {
            letters: self
                .letters
                .iter()
                .flat_map(|&g| image(g).letters)
                .collect(),
        }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.letters {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GeneratorWord::parse(s)
    }
}

/// Image of a word in the abelianization `Z/2 × (Z/2)²` of
/// `Λ = ⟨a,b,c,d | a², b², c², d², bcd⟩`.
///
/// `klein` encodes the `b, c, d` part with `b = 0b01`, `c = 0b10`,
/// `d = 0b11`, so that `bcd` maps to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianClass {
    pub a: u8,
    pub klein: u8,
}

impl AbelianClass {
    /// The word lies in the commutator subgroup `Λ'`.
    pub fn is_trivial(self) -> bool {
        self.a == 0 && self.klein == 0
    }
}

impl Add for AbelianClass {
    type Output = AbelianClass;
    fn add(self, rhs: AbelianClass) -> AbelianClass {
        AbelianClass {
            a: self.a ^ rhs.a,
            klein: self.klein ^ rhs.klein,
        }
    }
}

impl fmt::Display for AbelianClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.klein)
    }
}

pub fn abelianization_class(word: &GeneratorWord) -> AbelianClass {
    word.letters
        .iter()
        .map(|g| match g {
            Generator::A => AbelianClass { a: 1, klein: 0 },
            Generator::B => AbelianClass { a: 0, klein: 0b01 },
            Generator::C => AbelianClass { a: 0, klein: 0b10 },
            Generator::D => AbelianClass { a: 0, klein: 0b11 },
        })
        .fold(AbelianClass::default(), Add::add)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> GeneratorWord {
        GeneratorWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("abcd").to_string(), "abcd");
        assert!(w("").is_empty());
        assert!(GeneratorWord::parse("abx").is_err());
        assert_eq!(w("ab").pow(3).to_string(), "ababab");
    }

    #[test]
    fn letter_symbol_identification() {
        assert_eq!(Generator::from_symbol(0), Generator::D);
        assert_eq!(Generator::from_symbol(1), Generator::C);
        assert_eq!(Generator::from_symbol(2), Generator::B);
        // b acts where the first row is Π, i.e. for symbols 0 and 1.
        assert!(Generator::B.acts_on_symbol(0) && Generator::B.acts_on_symbol(1));
        assert!(!Generator::B.acts_on_symbol(2));
    }

    #[test]
    fn abelian_examples() {
        assert!(abelianization_class(&w("abab")).is_trivial());
        assert!(!abelianization_class(&w("ab")).is_trivial());
        assert!(abelianization_class(&w("bcd")).is_trivial());
        assert!(abelianization_class(&w("aa")).is_trivial());
        assert!(!abelianization_class(&w("bc")).is_trivial());
        assert_eq!(
            abelianization_class(&w("bc")),
            abelianization_class(&w("d"))
        );
    }

    fn word_strategy() -> impl Strategy<Value = GeneratorWord> {
        proptest::collection::vec(0usize..4, 0..40)
            .prop_map(|v| GeneratorWord::new(v.into_iter().map(|i| Generator::ALL[i]).collect()))
    }

    proptest! {
        #[test]
        fn abelianization_is_a_homomorphism(u in word_strategy(), v in word_strategy()) {
            prop_assert_eq!(
                abelianization_class(&u.concat(&v)),
                abelianization_class(&u) + abelianization_class(&v)
            );
        }
    }
}
