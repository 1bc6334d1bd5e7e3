use std::fmt;

use thiserror::Error;

/// Variable families. `X` names affine coordinates; `Y` the homogenized
/// pair slots; `Z` the frozen twins of the `Y` slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    X,
    Y,
    Z,
}

impl VarKind {
    pub fn letter(self) -> char {
        match self {
            VarKind::X => 'x',
            VarKind::Y => 'y',
            VarKind::Z => 'z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'x' => Some(VarKind::X),
            'y' => Some(VarKind::Y),
            'z' => Some(VarKind::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("slot count mismatch: {0} vs {1}")]
    SlotMismatch(usize, usize),
}

/// Maps variable names to exponent-vector slots.
///
/// Slots are listed from most to least significant in lex order. Each
/// block holds one family with indices counting down, so the affine layout
/// is `x_n, ..., x_1` and the multi-projective layout is
/// `y_{2n}, ..., y_1, z_{2n}, ..., z_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableLayout {
    n: usize,
    blocks: Vec<(VarKind, usize)>,
}

impl VariableLayout {
    /// `n` affine coordinates `x_n ≻ ... ≻ x_1`.
    pub fn affine(n: usize) -> Self {
        VariableLayout { n, blocks: vec![(VarKind::X, n)] }
    }

    /// The `4n` slots of the homogenized problem: every `y` above every `z`.
    pub fn multiproj(n: usize) -> Self {
        VariableLayout { n, blocks: vec![(VarKind::Y, 2 * n), (VarKind::Z, 2 * n)] }
    }

    /// Only the `2n` unfrozen slots `y_{2n}, ..., y_1`.
    pub fn homogeneous(n: usize) -> Self {
        VariableLayout { n, blocks: vec![(VarKind::Y, 2 * n)] }
    }

    /// Number of projective (or affine) coordinates.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn has_kind(&self, kind: VarKind) -> bool {
        self.blocks.iter().any(|b| b.0 == kind)
    }

    /// Largest valid index for `kind`, or 0 if the family is absent.
    pub fn max_index(&self, kind: VarKind) -> usize {
        self.blocks.iter().find(|b| b.0 == kind).map_or(0, |b| b.1)
    }

    pub fn slot(&self, kind: VarKind, index: usize) -> Option<usize> {
        let mut offset = 0;
        for &(k, len) in &self.blocks {
            if k == kind {
                return (1..=len).contains(&index).then(|| offset + len - index);
            }
            offset += len;
        }
        None
    }

    pub fn y(&self, index: usize) -> usize {
        self.slot(VarKind::Y, index).expect("y index in range")
    }

    pub fn z(&self, index: usize) -> usize {
        self.slot(VarKind::Z, index).expect("z index in range")
    }

    pub fn x(&self, index: usize) -> usize {
        self.slot(VarKind::X, index).expect("x index in range")
    }

    pub fn var(&self, slot: usize) -> (VarKind, usize) {
        let mut offset = 0;
        for &(k, len) in &self.blocks {
            if slot < offset + len {
                return (k, len - (slot - offset));
            }
            offset += len;
        }
        panic!("slot {slot} out of range for layout with {} slots", self.nvars())
    }

    pub fn name(&self, slot: usize) -> String {
        let (k, i) = self.var(slot);
        format!("{}_{}", k.letter(), i)
    }

    /// Slot order used when printing a monomial: the lowest block first
    /// (coefficient-ring variables before main variables), and within a
    /// block the highest index first.
    pub fn print_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nvars());
        let mut starts = Vec::new();
        let mut offset = 0;
        for &(_, len) in &self.blocks {
            starts.push((offset, len));
            offset += len;
        }
        for &(start, len) in starts.iter().rev() {
            out.extend(start..start + len);
        }
        out
    }
}

impl fmt::Display for VariableLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|s| self.name(s)).collect();
        write!(f, "[{}]", names.join(" > "))
    }
}
