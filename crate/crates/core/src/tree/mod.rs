//! Automorphisms of the regular ternary rooted tree.

mod cycle;
mod perm3;
mod portrait;
mod text;

pub use cycle::CycleType;
pub use perm3::{Perm3, Sign};
pub use portrait::{label_count, LeafIndex, Portrait, MAX_DEPTH};

pub(crate) use portrait::{level_offset, pow3};

/// All `6^((3^n-1)/2)` portraits of depth `n`, in lexicographic label order.
/// Only sensible for tiny depths; callers enforce their own caps.
pub(crate) fn all_portraits(depth: usize) -> impl Iterator<Item = Portrait> {
    let count = label_count(depth);
    let total = 6usize.pow(count as u32);
    (0..total).map(move |mut code| {
        let mut labels = vec![Perm3::E; count];
        for slot in labels.iter_mut().rev() {
            *slot = Perm3::ALL[code % 6];
            code /= 6;
        }
        Portrait::from_labels(depth, labels).expect("valid depth")
    })
}
