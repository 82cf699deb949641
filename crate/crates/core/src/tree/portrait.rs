use rand::Rng;

use super::cycle::CycleType;
use super::perm3::{Perm3, Sign};
use crate::error::{usage, Result};

/// Largest supported tree depth. Portraits at this depth hold `(3^12 - 1)/2`
/// labels and act on `3^12` leaves.
pub const MAX_DEPTH: usize = 12;

#[inline]
pub(crate) fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

/// Index of the first vertex of `level` in level order.
#[inline]
pub(crate) fn level_offset(level: usize) -> usize {
    (pow3(level) - 1) / 2
}

/// Number of internal vertices of `T_depth`.
#[inline]
pub fn label_count(depth: usize) -> usize {
    level_offset(depth)
}

/// A leaf of `T_n`, stored as the base-3 integer whose most significant digit
/// is the level-1 letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeafIndex {
    depth: usize,
    value: usize,
}

impl LeafIndex {
    pub fn new(depth: usize, value: usize) -> Result<LeafIndex> {
        if depth == 0 || depth > MAX_DEPTH {
            return usage(format!("leaf depth {depth} outside 1..={MAX_DEPTH}"));
        }
        if value >= pow3(depth) {
            return usage(format!("leaf {value} out of range for depth {depth}"));
        }
        Ok(LeafIndex { depth, value })
    }

    /// Parses a label word `(ℓ_1, …, ℓ_n)` with letters in `{1,2,3}`.
    pub fn from_word(word: &[u8]) -> Result<LeafIndex> {
        if word.is_empty() || word.len() > MAX_DEPTH {
            return usage("leaf word length outside supported range");
        }
        let mut value = 0;
        for &l in word {
            if !(1..=3).contains(&l) {
                return usage(format!("leaf letter {l} not in {{1,2,3}}"));
            }
            value = value * 3 + (l - 1) as usize;
        }
        Ok(LeafIndex { depth: word.len(), value })
    }

    pub fn word(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.depth];
        let mut v = self.value;
        for slot in out.iter_mut().rev() {
            *slot = (v % 3) as u8 + 1;
            v /= 3;
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self) -> usize {
        self.value
    }
}

/// An automorphism of the ternary rooted tree `T_n`, stored as one [`Perm3`]
/// label per internal vertex.
///
/// Vertices are in level order: the root first, then level 1 in letter order,
/// and so on. The label of a vertex is the permutation it applies to its three
/// children, and it is indexed by the *source* vertex. The leaf action is
///
/// ```text
/// ((a1,a2,a3), b).(x, i) = (a_i.x, b.i)
/// ```
///
/// so restriction to `T_m` is a prefix of the label array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Portrait {
    depth: usize,
    labels: Vec<Perm3>,
}

impl std::fmt::Debug for Portrait {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Portrait[{}]({})", self.depth, self)
    }
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return usage(format!("depth {depth} outside 1..={MAX_DEPTH}"));
    }
    Ok(())
}

impl Portrait {
    pub fn identity(depth: usize) -> Result<Portrait> {
        check_depth(depth)?;
        Ok(Portrait { depth, labels: vec![Perm3::E; label_count(depth)] })
    }

    pub fn from_labels(depth: usize, labels: Vec<Perm3>) -> Result<Portrait> {
        check_depth(depth)?;
        if labels.len() != label_count(depth) {
            return usage(format!(
                "depth {depth} needs {} labels, got {}",
                label_count(depth),
                labels.len()
            ));
        }
        Ok(Portrait { depth, labels })
    }

    /// A depth-1 portrait, i.e. an element of `Aut(T_1) ≅ S_3`.
    pub fn single(p: Perm3) -> Portrait {
        Portrait { depth: 1, labels: vec![p] }
    }

    /// A portrait with independent uniform labels (uniform on `Aut(T_n)`).
    pub fn random<R: Rng + ?Sized>(depth: usize, rng: &mut R) -> Result<Portrait> {
        check_depth(depth)?;
        let labels = (0..label_count(depth))
            .map(|_| Perm3::ALL[rng.gen_range(0..6)])
            .collect();
        Ok(Portrait { depth, labels })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn labels(&self) -> &[Perm3] {
        &self.labels
    }

    /// Label of the vertex at `level` with in-level position `pos`.
    pub fn label(&self, level: usize, pos: usize) -> Perm3 {
        self.labels[level_offset(level) + pos]
    }

    pub fn root_label(&self) -> Perm3 {
        self.labels[0]
    }

    pub fn leaf_count(&self) -> usize {
        pow3(self.depth)
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|p| p.is_identity())
    }

    fn same_depth(&self, other: &Portrait) -> Result<()> {
        if self.depth != other.depth {
            return usage(format!("depth mismatch: {} vs {}", self.depth, other.depth));
        }
        Ok(())
    }

    /// Image of a leaf given as a raw base-3 index. Caller guarantees range.
    #[inline]
    pub(crate) fn act_raw(&self, leaf: usize) -> usize {
        let mut pos = 0;
        let mut out = 0;
        let mut place = pow3(self.depth);
        for level in 0..self.depth {
            place /= 3;
            let digit = ((leaf / place) % 3) as u8;
            let label = self.labels[level_offset(level) + pos];
            out = out * 3 + label.apply(digit) as usize;
            pos = pos * 3 + digit as usize;
        }
        out
    }

    pub fn act(&self, leaf: LeafIndex) -> Result<LeafIndex> {
        if leaf.depth != self.depth {
            return usage(format!(
                "leaf of depth {} given to portrait of depth {}",
                leaf.depth, self.depth
            ));
        }
        Ok(LeafIndex { depth: self.depth, value: self.act_raw(leaf.value) })
    }

    /// Images of every vertex, level by level, down to the leaves
    /// (`images[k][j]` is the image of position `j` at level `k`).
    fn vertex_images(&self) -> Vec<Vec<u32>> {
        let mut images = Vec::with_capacity(self.depth + 1);
        images.push(vec![0u32]);
        for level in 0..self.depth {
            let off = level_offset(level);
            let cur = &images[level];
            let mut next = vec![0u32; cur.len() * 3];
            for (j, &w) in cur.iter().enumerate() {
                let label = self.labels[off + j];
                for c in 0..3u8 {
                    next[3 * j + c as usize] = 3 * w + label.apply(c) as u32;
                }
            }
            images.push(next);
        }
        images
    }

    /// The permutation of the `3^n` leaves induced by this portrait.
    pub fn leaf_permutation(&self) -> Vec<u32> {
        let mut cur = vec![0u32];
        for level in 0..self.depth {
            let off = level_offset(level);
            let mut next = vec![0u32; cur.len() * 3];
            for (j, &w) in cur.iter().enumerate() {
                let label = self.labels[off + j];
                for c in 0..3u8 {
                    next[3 * j + c as usize] = 3 * w + label.apply(c) as u32;
                }
            }
            cur = next;
        }
        cur
    }

    /// `self ∘ other` (apply `other` first). In wreath coordinates
    /// `(a, b)(a', b') = ((a_{b'(i)} a'_i)_i, b b')`.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        self.same_depth(other)?;
        let mut labels = vec![Perm3::E; self.labels.len()];
        let mut img = vec![0u32];
        for level in 0..self.depth {
            let off = level_offset(level);
            let mut next = Vec::with_capacity(img.len() * 3);
            for (j, &w) in img.iter().enumerate() {
                let h = other.labels[off + j];
                labels[off + j] = self.labels[off + w as usize] * h;
                for c in 0..3u8 {
                    next.push(3 * w + h.apply(c) as u32);
                }
            }
            img = next;
        }
        Ok(Portrait { depth: self.depth, labels })
    }

    pub fn inverse(&self) -> Portrait {
        let mut labels = vec![Perm3::E; self.labels.len()];
        let images = self.vertex_images();
        for (level, row) in images.iter().enumerate().take(self.depth) {
            let off = level_offset(level);
            for (j, &w) in row.iter().enumerate() {
                labels[off + w as usize] = self.labels[off + j].inverse();
            }
        }
        Portrait { depth: self.depth, labels }
    }

    /// `g s g^{-1}`.
    pub fn conjugate(&self, s: &Portrait) -> Result<Portrait> {
        self.compose(s)?.compose(&self.inverse())
    }

    /// The restriction homomorphism `π_m : Aut(T_n) → Aut(T_m)`.
    pub fn restrict(&self, m: usize) -> Result<Portrait> {
        if m == 0 || m > self.depth {
            return usage(format!("restriction level {m} outside 1..={}", self.depth));
        }
        Ok(Portrait { depth: m, labels: self.labels[..label_count(m)].to_vec() })
    }

    /// Parity of the leaf permutation, from its cycle decomposition.
    pub fn sign_leaves(&self) -> Sign {
        let perm = self.leaf_permutation();
        let cycles = count_cycles(&perm);
        Sign::from_parity((perm.len() - cycles) % 2 == 1)
    }

    /// Sign via `sgn((a1,a2,a3),b) = sgn(b) ∏ sgn(a_i)`, evaluated bottom-up
    /// over the subtrees.
    pub fn sign_recursive(&self) -> Sign {
        let bottom = self.depth - 1;
        let mut signs: Vec<Sign> = (0..pow3(bottom))
            .map(|j| self.labels[level_offset(bottom) + j].sign())
            .collect();
        for level in (0..bottom).rev() {
            let off = level_offset(level);
            signs = (0..pow3(level))
                .map(|j| {
                    let children = signs[3 * j] * signs[3 * j + 1] * signs[3 * j + 2];
                    self.labels[off + j].sign() * children
                })
                .collect();
        }
        signs[0]
    }

    /// `sgn_m = sgn ∘ π_m`.
    pub fn sgn_m(&self, m: usize) -> Result<Sign> {
        Ok(self.restrict(m)?.sign_leaves())
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::of_permutation(&self.leaf_permutation())
    }

    /// True when some leaf is fixed.
    pub fn fixes_a_leaf(&self) -> bool {
        // A fixed leaf lies on a path of fixed vertices, so prune at each level.
        let mut frontier = vec![0usize];
        for level in 0..self.depth {
            let off = level_offset(level);
            let mut next = Vec::new();
            for &j in &frontier {
                let label = self.labels[off + j];
                for c in 0..3u8 {
                    if label.apply(c) == c {
                        next.push(3 * j + c as usize);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            frontier = next;
        }
        true
    }

    /// `((a1,a2,a3), b)` from the wreath decomposition
    /// `Aut(T_n) ≅ Aut(T_{n-1}) ≀ Aut(T_1)`.
    pub fn wreath_build(a: [&Portrait; 3], b: Perm3) -> Result<Portrait> {
        let sub = a[0].depth;
        if a[1].depth != sub || a[2].depth != sub {
            return usage("wreath components must share a depth");
        }
        let depth = sub + 1;
        check_depth(depth)?;
        let mut labels = Vec::with_capacity(label_count(depth));
        labels.push(b);
        for level in 0..sub {
            let start = level_offset(level);
            let width = pow3(level);
            for comp in &a {
                labels.extend_from_slice(&comp.labels[start..start + width]);
            }
        }
        Ok(Portrait { depth, labels })
    }

    /// Inverse of [`Portrait::wreath_build`]; needs depth at least 2.
    pub fn wreath_split(&self) -> Result<([Portrait; 3], Perm3)> {
        if self.depth < 2 {
            return usage("wreath_split needs depth >= 2");
        }
        let sub = self.depth - 1;
        let mut parts: [Vec<Perm3>; 3] = Default::default();
        for level in 0..sub {
            let width = pow3(level);
            let start = level_offset(level + 1);
            for (i, part) in parts.iter_mut().enumerate() {
                let s = start + i * width;
                part.extend_from_slice(&self.labels[s..s + width]);
            }
        }
        let [p0, p1, p2] = parts;
        let mk = |labels| Portrait { depth: sub, labels };
        Ok(([mk(p0), mk(p1), mk(p2)], self.labels[0]))
    }
}

pub(crate) fn count_cycles(perm: &[u32]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
        }
    }
    cycles
}
