use std::fmt;
use std::ops::Mul;

/// Sign of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

// Image triples, 0-based. Index in this table is the Perm3 code.
const IMAGES: [[u8; 3]; 6] = [
    [0, 1, 2], // e
    [1, 0, 2], // (12)
    [2, 1, 0], // (13)
    [0, 2, 1], // (23)
    [1, 2, 0], // (123)
    [2, 0, 1], // (132)
];

const NAMES: [&str; 6] = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];

const fn code_of(images: [u8; 3]) -> u8 {
    let mut i = 0;
    while i < 6 {
        let c = IMAGES[i];
        if c[0] == images[0] && c[1] == images[1] && c[2] == images[2] {
            return i as u8;
        }
        i += 1;
    }
    panic!("not a permutation of 0, 1, 2");
}

const fn build_compose() -> [[u8; 6]; 6] {
    let mut table = [[0u8; 6]; 6];
    let mut p = 0;
    while p < 6 {
        let mut q = 0;
        while q < 6 {
            let pi = IMAGES[p];
            let qi = IMAGES[q];
            table[p][q] = code_of([pi[qi[0] as usize], pi[qi[1] as usize], pi[qi[2] as usize]]);
            q += 1;
        }
        p += 1;
    }
    table
}

const fn build_inverse() -> [u8; 6] {
    let mut table = [0u8; 6];
    let mut p = 0;
    while p < 6 {
        let im = IMAGES[p];
        let mut inv = [0u8; 3];
        inv[im[0] as usize] = 0;
        inv[im[1] as usize] = 1;
        inv[im[2] as usize] = 2;
        table[p] = code_of(inv);
        p += 1;
    }
    table
}

const COMPOSE: [[u8; 6]; 6] = build_compose();
const INVERSE: [u8; 6] = build_inverse();

/// An element of the symmetric group on three letters, i.e. `Aut(T_1)`.
///
/// Letters are 0-based internally (`0,1,2` stand for the labels `1,2,3`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3(u8);

impl Perm3 {
    pub const E: Perm3 = Perm3(0);
    pub const T12: Perm3 = Perm3(1);
    pub const T13: Perm3 = Perm3(2);
    pub const T23: Perm3 = Perm3(3);
    pub const C123: Perm3 = Perm3(4);
    pub const C132: Perm3 = Perm3(5);

    pub const ALL: [Perm3; 6] = [
        Perm3::E,
        Perm3::T12,
        Perm3::T13,
        Perm3::T23,
        Perm3::C123,
        Perm3::C132,
    ];

    /// The cyclic subgroup `C_3 = {e, (123), (132)}`.
    pub const CYCLIC: [Perm3; 3] = [Perm3::E, Perm3::C123, Perm3::C132];
    pub const EVEN: [Perm3; 3] = Perm3::CYCLIC;
    pub const ODD: [Perm3; 3] = [Perm3::T12, Perm3::T13, Perm3::T23];

    pub fn from_code(code: u8) -> Option<Perm3> {
        (code < 6).then_some(Perm3(code))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// Builds the permutation with the given 0-based images.
    pub fn from_images(images: [u8; 3]) -> Option<Perm3> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm3(code_of(images)))
    }

    pub fn images(self) -> [u8; 3] {
        IMAGES[self.0 as usize]
    }

    /// Image of a 0-based letter.
    #[inline]
    pub fn apply(self, letter: u8) -> u8 {
        IMAGES[self.0 as usize][letter as usize]
    }

    /// `self ∘ other`: apply `other` first.
    #[inline]
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3(COMPOSE[self.0 as usize][other.0 as usize])
    }

    #[inline]
    pub fn inverse(self) -> Perm3 {
        Perm3(INVERSE[self.0 as usize])
    }

    #[inline]
    pub fn sign(self) -> Sign {
        Sign::from_parity(matches!(self.0, 1..=3))
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn in_cyclic(self) -> bool {
        self.sign() == Sign::Plus
    }

    /// Order of the element: 1, 2 or 3.
    pub fn order(self) -> u32 {
        match self.0 {
            0 => 1,
            1..=3 => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        NAMES[self.0 as usize]
    }

    pub fn from_name(s: &str) -> Option<Perm3> {
        match s {
            "e" | "1" | "()" => Some(Perm3::E),
            _ => NAMES.iter().position(|n| *n == s).map(|i| Perm3(i as u8)),
        }
    }
}

impl Mul for Perm3 {
    type Output = Perm3;
    fn mul(self, rhs: Perm3) -> Perm3 {
        self.compose(rhs)
    }
}

impl fmt::Debug for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_axioms() {
        for &a in &Perm3::ALL {
            assert_eq!(a * a.inverse(), Perm3::E);
            assert_eq!(a.inverse() * a, Perm3::E);
            for &b in &Perm3::ALL {
                assert_eq!((a * b).sign(), a.sign() * b.sign());
                for &c in &Perm3::ALL {
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // (12)∘(123): 1 -> 2 -> 1, 2 -> 3 -> 3, 3 -> 1 -> 2, i.e. (23)
        let p = Perm3::T12 * Perm3::C123;
        assert_eq!(p, Perm3::T23);
        for l in 0..3 {
            assert_eq!(p.apply(l), Perm3::T12.apply(Perm3::C123.apply(l)));
        }
    }

    #[test]
    fn names_round_trip() {
        for &p in &Perm3::ALL {
            assert_eq!(Perm3::from_name(p.name()), Some(p));
        }
        assert_eq!(Perm3::from_name("1"), Some(Perm3::E));
        assert_eq!(Perm3::from_name("(21)"), None);
    }

    #[test]
    fn cyclic_subgroup_is_the_even_half() {
        let even: Vec<_> = Perm3::ALL.iter().filter(|p| p.in_cyclic()).collect();
        assert_eq!(even.len(), 3);
        assert_eq!(Perm3::C123 * Perm3::C123, Perm3::C132);
    }
}
