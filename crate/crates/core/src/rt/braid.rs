//! Random braid words and the diagram rewrites used to test the skein engine.

use rand::Rng;

use crate::error::Result;
use crate::modular::Color;

use super::link::{braid_closure, FramedLink};

/// A braid word on `strands` strands; generator `i > 0` is σ_i, `−i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    pub strands: usize,
    pub word: Vec<i32>,
}

impl Braid {
    pub fn random<R: Rng>(strands: usize, len: usize, rng: &mut R) -> Braid {
        let word = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        Braid { strands, word }
    }

    pub fn closure(&self) -> Result<(FramedLink, Vec<usize>)> {
        braid_closure(self.strands, &self.word)
    }

    /// Inserts σ_i^ε σ_i^{−ε} before position `at`.
    pub fn reidemeister_two(&self, at: usize, gen: i32) -> Braid {
        let mut word = self.word.clone();
        word.splice(at..at, [gen, -gen]);
        Braid { strands: self.strands, word }
    }

    /// Both sides of a third Reidemeister move on strands i, i+1, i+2 spliced
    /// in at `at`: σ_i σ_{i+1} σ_i = σ_{i+1} σ_i σ_{i+1}, its mirror, or the
    /// mixed form σ_i σ_{i+1} σ_i⁻¹ = σ_{i+1}⁻¹ σ_i σ_{i+1}.
    pub fn reidemeister_three(&self, at: usize, i: i32, kind: u8) -> (Braid, Braid) {
        let j = i + 1;
        let (lhs, rhs) = match kind % 3 {
            0 => ([i, j, i], [j, i, j]),
            1 => ([-i, -j, -i], [-j, -i, -j]),
            _ => ([i, j, -i], [-j, i, j]),
        };
        let with = |side: [i32; 3]| {
            let mut word = self.word.clone();
            word.splice(at..at, side);
            Braid { strands: self.strands, word }
        };
        (with(lhs), with(rhs))
    }

    /// Markov stabilization: a new last strand joined by σ_n^{±1}, which adds
    /// a kink to the component through the last position.
    pub fn stabilize(&self, positive: bool) -> Braid {
        let n = self.strands as i32;
        let mut word = self.word.clone();
        word.push(if positive { n } else { -n });
        Braid { strands: self.strands + 1, word }
    }
}

/// Transfers per-component data between two closures through the bottom
/// positions they share.
pub fn transfer<T: Copy + Default>(values: &[T], from: &[usize], to: &[usize], count: usize) -> Vec<T> {
    let mut out = vec![T::default(); count];
    for (p, &c) in to.iter().enumerate() {
        let src = from.get(p).copied().unwrap_or(*from.last().expect("nonempty braid"));
        out[c] = values[src];
    }
    out
}

/// A random coloring of a closure's components.
pub fn random_coloring<R: Rng>(components: usize, max_color: Color, rng: &mut R) -> Vec<Color> {
    (0..components).map(|_| rng.gen_range(0..=max_color)).collect()
}
