//! Truncated Hilbert space organised by the two excitation-number constants
//! of motion.
//!
//! The operators `M1 = n1 + n2 + A33` and `M2 = n2 + A11 + A33` commute with
//! the Hamiltonian, so every eigenspace `(m1, m2)` is invariant. Inside such a
//! block the three basis kets are
//!
//! ```text
//! |chi_1> = |m1 - m2 + 1, m2 - 1; 1_A>
//! |chi_2> = |m1 - m2,     m2;     2_A>
//! |chi_3> = |m1 - m2,     m2 - 1; 3_A>
//! ```
//!
//! and only those with non-negative photon numbers exist. Blocks with
//! `m2 = 0` keep only `|chi_2>` and blocks with `m2 = m1 + 1` keep only
//! `|chi_1>`; these one-dimensional blocks are the photon-free dark states.

use serde::Serialize;

use crate::error::{Error, Result};

/// Atomic level `|k_A>`, `k = 1, 2, 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Two, Level::Three];

    /// Zero-based position (`k - 1`).
    pub fn index(self) -> usize {
        match self {
            Level::One => 0,
            Level::Two => 1,
            Level::Three => 2,
        }
    }

    /// One-based label `k`.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(k: usize) -> Option<Level> {
        match k {
            1 => Some(Level::One),
            2 => Some(Level::Two),
            3 => Some(Level::Three),
            _ => None,
        }
    }

    pub fn from_index(i: usize) -> Level {
        Level::ALL[i]
    }
}

/// Eigenvalues `(m1, m2)` of the two excitation-number operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockIndex {
    pub m1: usize,
    pub m2: usize,
}

/// Which `chi_k` kets survive in a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockKind {
    /// All three kets: `1 <= m2 <= m1`.
    Full,
    /// Only `|chi_1> = |0, m1; 1_A>` (`m2 = m1 + 1`).
    DarkOne,
    /// Only `|chi_2> = |m1, 0; 2_A>` (`m2 = 0`).
    DarkTwo,
}

impl BlockKind {
    pub fn dim(self) -> usize {
        match self {
            BlockKind::Full => 3,
            BlockKind::DarkOne | BlockKind::DarkTwo => 1,
        }
    }

    /// Levels present in the block, in canonical order.
    pub fn levels(self) -> &'static [Level] {
        match self {
            BlockKind::Full => &Level::ALL,
            BlockKind::DarkOne => &[Level::One],
            BlockKind::DarkTwo => &[Level::Two],
        }
    }

    /// Position of `level` inside the block's amplitude vector.
    pub fn position(self, level: Level) -> Option<usize> {
        match (self, level) {
            (BlockKind::Full, l) => Some(l.index()),
            (BlockKind::DarkOne, Level::One) | (BlockKind::DarkTwo, Level::Two) => Some(0),
            _ => None,
        }
    }
}

impl BlockIndex {
    pub fn new(m1: usize, m2: usize) -> Self {
        Self { m1, m2 }
    }

    /// `None` when `m2 > m1 + 1`, i.e. outside every lattice.
    pub fn kind(self) -> Option<BlockKind> {
        if self.m2 == 0 {
            Some(BlockKind::DarkTwo)
        } else if self.m2 <= self.m1 {
            Some(BlockKind::Full)
        } else if self.m2 == self.m1 + 1 {
            Some(BlockKind::DarkOne)
        } else {
            None
        }
    }

    pub fn contains(self, level: Level) -> bool {
        self.kind().and_then(|k| k.position(level)).is_some()
    }
}

/// Fock-times-atom label `|n1, n2; k_A>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockLabel {
    pub n1: usize,
    pub n2: usize,
    pub level: Level,
}

impl FockLabel {
    pub fn new(n1: usize, n2: usize, level: Level) -> Self {
        Self { n1, n2, level }
    }
}

/// Photon numbers carried by `|chi_k>` of block `b`.
pub fn chi_to_fock(b: BlockIndex, level: Level) -> Result<FockLabel> {
    if !b.contains(level) {
        return Err(Error::InvalidSlot {
            m1: b.m1,
            m2: b.m2,
            k: level.number(),
        });
    }
    // `contains` guarantees every subtraction below stays non-negative.
    let (n1, n2) = match level {
        Level::One => (b.m1 + 1 - b.m2, b.m2 - 1),
        Level::Two => (b.m1 - b.m2, b.m2),
        Level::Three => (b.m1 - b.m2, b.m2 - 1),
    };
    Ok(FockLabel::new(n1, n2, level))
}

/// Sign relating `|chi_k>` to the bare Fock ket `|n1, n2; k_A>`.
///
/// The Hamiltonian couples the atom to the field with a negative sign,
/// `-mu (a^dag A_13 + a A_31)`. Taking `|chi_3> = -|n1, n2; 3_A>` turns the
/// block matrix into the positive-coupling form used by the dressed states
/// and the closed-form propagator. Amplitudes stored on the lattice are
/// `chi`-basis amplitudes; multiply by this sign to obtain Fock amplitudes.
pub fn chi_sign(level: Level) -> f64 {
    match level {
        Level::Three => -1.0,
        _ => 1.0,
    }
}

/// Block containing `|n1, n2; k_A>`: the eigenvalues of `M1` and `M2`.
pub fn fock_to_block(label: FockLabel) -> BlockIndex {
    let FockLabel { n1, n2, level } = label;
    match level {
        Level::One => BlockIndex::new(n1 + n2, n2 + 1),
        Level::Two => BlockIndex::new(n1 + n2, n2),
        Level::Three => BlockIndex::new(n1 + n2 + 1, n2 + 1),
    }
}

/// `(M0 + 1)(3 M0 + 4) / 2`.
pub fn lattice_dimension(m0: usize) -> usize {
    (m0 + 1) * (3 * m0 + 4) / 2
}

/// A block of the lattice together with where its amplitudes live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub index: BlockIndex,
    pub kind: BlockKind,
    /// Offset of the first slot of this block in the flat amplitude vector.
    pub offset: usize,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim()
    }
}

/// All blocks with `0 <= m1 <= M0`, `0 <= m2 <= m1 + 1`, ordered by
/// ascending `(m1, m2)` and, inside a block, by ascending level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    m0: usize,
    blocks: Vec<Block>,
    total_dim: usize,
}

impl Lattice {
    pub fn new(m0: usize) -> Self {
        let mut blocks = Vec::with_capacity((m0 + 1) * (m0 + 4) / 2);
        let mut offset = 0;
        for m1 in 0..=m0 {
            for m2 in 0..=m1 + 1 {
                let index = BlockIndex::new(m1, m2);
                let kind = index.kind().expect("m2 <= m1 + 1");
                blocks.push(Block { index, kind, offset });
                offset += kind.dim();
            }
        }
        Self {
            m0,
            blocks,
            total_dim: offset,
        }
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Position of block `b` in [`Lattice::blocks`].
    pub fn block_position(&self, b: BlockIndex) -> Option<usize> {
        if b.m1 > self.m0 || b.m2 > b.m1 + 1 {
            return None;
        }
        Some(b.m1 * (b.m1 + 3) / 2 + b.m2)
    }

    pub fn block(&self, b: BlockIndex) -> Option<&Block> {
        self.block_position(b).map(|i| &self.blocks[i])
    }

    /// Flat index of the slot `(b, level)`, if it exists in this lattice.
    pub fn slot(&self, b: BlockIndex, level: Level) -> Option<usize> {
        let block = self.block(b)?;
        block.kind.position(level).map(|p| block.offset + p)
    }

    /// Flat index of the Fock label, if it lies inside the truncation.
    pub fn fock_slot(&self, label: FockLabel) -> Option<usize> {
        self.slot(fock_to_block(label), label.level)
    }

    /// Iterate over every `(block, level, flat index)` in canonical order.
    pub fn slots(&self) -> impl Iterator<Item = (BlockIndex, Level, usize)> + '_ {
        self.blocks.iter().flat_map(|b| {
            b.kind
                .levels()
                .iter()
                .enumerate()
                .map(move |(p, &l)| (b.index, l, b.offset + p))
        })
    }

    /// Largest photon number any slot carries in either mode.
    pub fn max_photons(&self) -> usize {
        self.m0
    }
}
