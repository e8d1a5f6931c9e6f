//! The binary Golay code in 4 x 6 array coordinates.
//!
//! Codewords are stored as 24-bit masks over a 4 x 6 cell array, with
//! bit `4*col + row` (columns 0..5 left to right, rows 0..3 top to
//! bottom).  This array layout is shared with the high-dimensional
//! lattice constructions, which read the same cells as coordinates.
//!
//! The code is generated from the hexacode, a [6, 3, 4] code over the
//! field with four elements: a binary array belongs to the Golay code
//! exactly when all six column parities agree with each other and with
//! the parity of the top row, and the column scores (the sum of the
//! field labels `0, 1, w, w+1` of the filled rows) spell a hexacode
//! word.  Counting choices (64 hexacode words, 2 parities, 32 free
//! top-row bits) gives the full 2^12 = 4096 codewords.

use std::sync::OnceLock;

/// An element of the field with four elements: 0, 1, `w`, `w + 1`,
/// encoded as 0..3 with `w² = w + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf4(pub u8);

impl Gf4 {
    /// Field addition (characteristic two).
    pub fn add(self, other: Gf4) -> Gf4 {
        Gf4(self.0 ^ other.0)
    }

    /// Field multiplication.
    pub fn mul(self, other: Gf4) -> Gf4 {
        const TABLE: [[u8; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
        ];
        Gf4(TABLE[self.0 as usize][other.0 as usize])
    }
}

/// The 64 hexacode words: `(a, b, c, f(1), f(w), f(w+1))` for all
/// quadratic polynomials `f(t) = a t² + b t + c` over the field.
pub fn hexacode() -> &'static [[Gf4; 6]] {
    static WORDS: OnceLock<Vec<[Gf4; 6]>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut words = Vec::with_capacity(64);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    let (a, b, c) = (Gf4(a), Gf4(b), Gf4(c));
                    let eval = |t: Gf4| a.mul(t).mul(t).add(b.mul(t)).add(c);
                    words.push([a, b, c, eval(Gf4(1)), eval(Gf4(2)), eval(Gf4(3))]);
                }
            }
        }
        words
    })
}

/// Row labels for column scores: row `r` carries the field element `r`.
fn row_label(row: usize) -> Gf4 {
    Gf4(row as u8)
}

/// The 4-bit column patterns with the given parity and score, each list
/// ordered by its row-0 bit (entry 0 has the top cell clear).
fn column_patterns() -> &'static [[[u8; 2]; 4]; 2] {
    static PATTERNS: OnceLock<[[[u8; 2]; 4]; 2]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let mut table = [[[0u8; 2]; 4]; 2];
        let mut seen = [[0usize; 4]; 2];
        for bits in 0..16u8 {
            let parity = (bits.count_ones() & 1) as usize;
            let mut score = Gf4(0);
            for row in 0..4 {
                if bits >> row & 1 == 1 {
                    score = score.add(row_label(row));
                }
            }
            let top = (bits & 1) as usize;
            table[parity][score.0 as usize][top] = bits;
            seen[parity][score.0 as usize] += 1;
        }
        assert!(seen.iter().flatten().all(|&count| count == 2));
        table
    })
}

/// All 4096 Golay codewords as 24-bit masks.
pub fn golay_code() -> &'static [u32] {
    static CODE: OnceLock<Vec<u32>> = OnceLock::new();
    CODE.get_or_init(|| {
        let patterns = column_patterns();
        let mut code = Vec::with_capacity(4096);
        for word in hexacode() {
            for parity in 0..2usize {
                for free in 0..32u8 {
                    // Top-row bits of columns 0..4 are free; column 5 is
                    // forced so the top row has parity `parity`.
                    let mut mask = 0u32;
                    let mut top_parity = 0u8;
                    for (col, digit) in word.iter().enumerate().take(5) {
                        let top = free >> col & 1;
                        top_parity ^= top;
                        let bits = patterns[parity][digit.0 as usize][top as usize];
                        mask |= u32::from(bits) << (4 * col);
                    }
                    let last_top = top_parity ^ parity as u8;
                    let bits = patterns[parity][word[5].0 as usize][last_top as usize];
                    mask |= u32::from(bits) << 20;
                    code.push(mask);
                }
            }
        }
        code.sort_unstable();
        code
    })
}

/// Membership test against the column-score description.
pub fn is_golay_word(mask: u32) -> bool {
    if mask >> 24 != 0 {
        return false;
    }
    let columns: Vec<u8> = (0..6).map(|col| (mask >> (4 * col) & 0xf) as u8).collect();
    let parity = columns[0].count_ones() & 1;
    if columns.iter().any(|c| c.count_ones() & 1 != parity) {
        return false;
    }
    let top_parity = columns.iter().map(|c| u32::from(c & 1)).sum::<u32>() & 1;
    if top_parity != parity {
        return false;
    }
    let mut scores = [Gf4(0); 6];
    for (col, bits) in columns.iter().enumerate() {
        for row in 0..4 {
            if bits >> row & 1 == 1 {
                scores[col] = scores[col].add(row_label(row));
            }
        }
    }
    hexacode().contains(&scores)
}

/// A basis of the code: twelve independent words spanning all 4096.
pub fn golay_basis() -> &'static [u32; 12] {
    static BASIS: OnceLock<[u32; 12]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut basis: Vec<u32> = Vec::new();
        for &word in golay_code() {
            let mut reduced = word;
            for &b in &basis {
                let pivot = 1 << (31 - b.leading_zeros());
                if reduced & pivot != 0 {
                    reduced ^= b;
                }
            }
            if reduced != 0 {
                basis.push(reduced);
                // Keep the basis in echelon form: eliminate the new
                // pivot from earlier rows.
                let pivot = 1 << (31 - reduced.leading_zeros());
                let snapshot = basis.clone();
                for (slot, &b) in snapshot.iter().enumerate().take(basis.len() - 1) {
                    if b & pivot != 0 {
                        basis[slot] ^= reduced;
                    }
                }
                if basis.len() == 12 {
                    break;
                }
            }
        }
        basis.sort_unstable();
        basis.try_into().expect("the code has dimension 12")
    })
}
