use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::backtrack::{adapted_base_order, centralizer_in_adapted, conjugating_element_in_adapted};
use crate::chain::StabilizerChain;
use crate::error::{GroupError, Result};
use crate::perm::{GeneratorFile, Permutation};

/// A permutation group given by generators, with its stabilizer chain.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    name: String,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
    seed: u64,
}

/// Random stream for [`GroupHandle::random_element`]. Single owner.
#[derive(Clone, Debug)]
pub struct RandomState {
    rng: ChaCha8Rng,
}

impl RandomState {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl GroupHandle {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Permutation>,
        degree: usize,
        seed: u64,
    ) -> Result<Self> {
        let chain = StabilizerChain::build(&generators, degree, None, seed, None)?;
        Ok(Self {
            name: name.into(),
            generators,
            chain,
            seed,
        })
    }

    /// Wraps an existing chain; its strong generators become the generators.
    pub fn from_chain(name: impl Into<String>, chain: StabilizerChain, seed: u64) -> Self {
        Self {
            name: name.into(),
            generators: chain.strong_generators().to_vec(),
            chain,
            seed,
        }
    }

    pub fn from_generator_file(name: impl Into<String>, file: &GeneratorFile, seed: u64) -> Result<Self> {
        Self::new(name, file.generators.clone(), file.degree, seed)
    }

    /// Loads a generator file; the group is named after the file stem.
    pub fn load(path: &Path, seed: u64) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| crate::Error::Io(format!("{}: {e}", path.display())))?;
        let file: GeneratorFile = text.parse()?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_generator_file(name, &file, seed)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn degree(&self) -> usize {
        self.chain.degree()
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        Ok(self.chain.contains(g)?)
    }

    fn require(&self, g: &Permutation) -> Result<()> {
        if self.contains(g)? {
            Ok(())
        } else {
            Err(GroupError::NotInGroup(g.to_cycle_string()).into())
        }
    }

    /// A uniformly distributed element (products of random transversal
    /// elements of the verified chain).
    pub fn random_element(&self, state: &mut RandomState) -> Permutation {
        self.chain.random_element(state.rng())
    }

    /// The chain rebased to walk the cycles of `s`, as the backtrack needs.
    pub fn adapted_chain(&self, s: &Permutation) -> StabilizerChain {
        self.chain.with_base_order(adapted_base_order(s), self.seed)
    }

    /// The centralizer of `s`, checked against the orbit-stabilizer relation.
    pub fn centralizer(&self, s: &Permutation) -> Result<StabilizerChain> {
        self.require(s)?;
        Ok(self.centralizer_in(&self.adapted_chain(s), s))
    }

    /// Centralizer using an already adapted chain for `s`.
    pub fn centralizer_in(&self, adapted: &StabilizerChain, s: &Permutation) -> StabilizerChain {
        let c = centralizer_in_adapted(adapted, s);
        assert!(
            self.order() % c.order() == 0,
            "centralizer order {} does not divide {}",
            c.order(),
            self.order()
        );
        c
    }

    /// Some `g` with `g a g⁻¹ = b`, if `a` and `b` are conjugate.
    pub fn conjugacy_witness(&self, a: &Permutation, b: &Permutation) -> Result<Option<Permutation>> {
        self.require(a)?;
        self.require(b)?;
        if a.cycle_type() != b.cycle_type() {
            return Ok(None);
        }
        let witness = conjugating_element_in_adapted(&self.adapted_chain(a), a, b);
        if let Some(g) = &witness {
            assert_eq!(&a.conjugate_by(g), b, "conjugacy witness failed verification");
        }
        Ok(witness)
    }
}
