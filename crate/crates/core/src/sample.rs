//! Seeded random field elements, messages and alternating forms.

use alloc::vec::Vec;

use rand::Rng;

use crate::field::{FieldCtx, FieldElement};
use crate::forms::AlternatingForm;
use crate::matrix::Matrix;

pub fn random_element<R: Rng + ?Sized>(f: &FieldCtx, rng: &mut R) -> FieldElement {
    f.element(rng.random_range(0..f.q() as u64))
        .expect("value below q")
}

/// Uniform vector of length `len`; may be zero.
pub fn random_vector<R: Rng + ?Sized>(f: &FieldCtx, len: usize, rng: &mut R) -> Vec<FieldElement> {
    (0..len).map(|_| random_element(f, rng)).collect()
}

/// Uniform non-zero vector, by rejection.
pub fn random_nonzero_vector<R: Rng + ?Sized>(
    f: &FieldCtx,
    len: usize,
    rng: &mut R,
) -> Vec<FieldElement> {
    loop {
        let v = random_vector(f, len, rng);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Antisymmetric matrix with a uniform strict upper triangle (row by row).
pub fn random_antisymmetric<R: Rng + ?Sized>(f: &FieldCtx, dim: usize, rng: &mut R) -> Matrix {
    let mut s = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let a = random_element(f, rng);
            s.set(i, j, a);
            s.set(j, i, f.neg(a));
        }
    }
    s
}

/// Uniform non-zero alternating form on `F_q^dim`, rejecting the zero matrix.
pub fn random_alternating_form<R: Rng + ?Sized>(
    f: &FieldCtx,
    dim: usize,
    rng: &mut R,
) -> AlternatingForm {
    loop {
        let s = random_antisymmetric(f, dim, rng);
        if let Ok(af) = AlternatingForm::new(f, s) {
            return af;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_forms_repeat() {
        let f3 = FieldCtx::with_order(3).unwrap();
        let a = random_alternating_form(&f3, 7, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_alternating_form(&f3, 7, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        assert!(a.matrix().is_antisymmetric(&f3));
        assert_eq!(a.r() % 2, 1);
    }

    #[test]
    fn elements_cover_the_field() {
        let f9 = FieldCtx::with_order(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = [false; 9];
        for _ in 0..500 {
            seen[random_element(&f9, &mut rng).value() as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
