use serde::{Deserialize, Serialize};

use super::generator::apply_letter;
use super::{Generator, GeneratorWord, OmegaForm, OmegaType, OmegaWord};
use crate::{Error, Result};

/// `a², b², c², d², bcd`.
pub fn standard_relations() -> Vec<GeneratorWord> {
    ["aa", "bb", "cc", "dd", "bcd"]
        .iter()
        .map(|s| GeneratorWord::parse(s).expect("static word"))
        .collect()
}

fn letter(symbol: u8) -> GeneratorWord {
    GeneratorWord::new(vec![Generator::from_symbol(symbol)])
}

fn first_level(form: &OmegaForm) -> Vec<GeneratorWord> {
    let a = GeneratorWord::new(vec![Generator::A]);
    let (x, y, z) = (letter(form.x), letter(form.y), letter(form.z));
    let ya = y.concat(&a);
    let xa = x.concat(&a);
    match form.kind {
        OmegaType::One => {
            let mut words = vec![xa.concat(&ya).pow(4)];
            for k in 1..=1usize << (form.n - 1) {
                words.push(xa.concat(&ya.pow(2 * k)).pow(4));
            }
            words
        }
        OmegaType::Two => vec![
            xa.concat(&ya).concat(&ya).pow(4),
            xa.concat(&ya).pow(1 << form.n),
        ],
        OmegaType::Three => vec![
            xa.concat(&ya).concat(&ya).pow(4),
            z.concat(&a).concat(&ya).pow(1 << form.n),
        ],
    }
}

/// The relator family `U_k^ω` (`k = 0` gives the standard relations).
///
/// For `k > 1`, `U_k^ω` is the image of `U_{k-1}^{ω'}` under the substitution
/// that keeps `b, c, d` and sends `a ↦ a y_ω a`.
pub fn relators_u(omega: &OmegaWord, k: usize) -> Result<Vec<GeneratorWord>> {
    if omega.is_almost_constant() {
        return Err(Error::AlmostConstant);
    }
    if k == 0 {
        return Ok(standard_relations());
    }
    let form = omega.classify().form.ok_or(Error::AlmostConstant)?;
    if k == 1 {
        return Ok(first_level(&form));
    }
    let inner = relators_u(&omega.shift(), k - 1)?;
    let a_image = GeneratorWord::new(vec![
        Generator::A,
        Generator::from_symbol(form.y),
        Generator::A,
    ]);
    Ok(inner
        .iter()
        .map(|w| {
            w.substitute(|g| match g {
                Generator::A => a_image.clone(),
                other => GeneratorWord::new(vec![other]),
            })
        })
        .collect())
}

/// Outcome of a depth-truncated triviality test. `holds()` means "acts
/// trivially on levels `1..=depth`", which is evidence, not proof; a
/// witness proves the word is nontrivial in `G_ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityCheck {
    pub depth: u32,
    /// A level-`depth` vertex moved by the word.
    pub witness: Option<u32>,
}

impl TrivialityCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    pub fn label(&self) -> String {
        match self.witness {
            None => format!("verified to depth {}", self.depth),
            Some(v) => format!(
                "nontrivial: moves vertex {:0width$b}",
                v,
                width = self.depth as usize
            ),
        }
    }
}

pub fn verify_trivial(
    word: &GeneratorWord,
    omega: &OmegaWord,
    depth: u32,
) -> Result<TrivialityCheck> {
    if depth == 0 || depth > super::MAX_TREE_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} out of range"
        )));
    }
    let masks: Vec<u32> = Generator::ALL
        .iter()
        .map(|g| g.level_mask(omega, depth))
        .collect();
    let witness = (0..1u32 << depth).find(|&x| {
        let y = word
            .letters
            .iter()
            .rev()
            .fold(x, |v, &g| apply_letter(g, masks[g.index()], depth, v));
        y != x
    });
    Ok(TrivialityCheck { depth, witness })
}
