//! Quadratic and alternating forms on `V(2n+1, q)`.
//!
//! The quadratic form is `eta(v) = v^T M v` for a symmetric invertible `M`;
//! since `q` is odd the polarity `perp_Q` is read off `M` directly. Canonical
//! pairs `(M, S)` are assembled in the basis `H | H0 | D0 | D`, where `R = D0 + D`
//! is the radical of the alternating form and `D` is the radical of `eta`
//! restricted to `R`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::matrix::{Matrix, Subspace};

/// The four shapes a radical can take relative to the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::One, Case::Two, Case::Three, Case::Four];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            3 => Ok(Case::Three),
            4 => Ok(Case::Four),
            _ => Err(Error::InadmissibleParams(format!(
                "case must be 1..=4, got {k}"
            ))),
        }
    }

    /// `d` is odd in cases 1 and 2, even in cases 3 and 4.
    pub fn d_is_odd(self) -> bool {
        matches!(self, Case::One | Case::Two)
    }
}

/// `(n, r, d, case)` for a canonical pair; construction validates parity
/// and block sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalParams {
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub case: Case,
}

impl CanonicalParams {
    pub fn new(n: usize, r: usize, d: usize, case: Case) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::InadmissibleParams(format!(
                "case {} with n={n}, r={r}, d={d}: {why}",
                case.number()
            )))
        };
        if n == 0 {
            return bad("n must be at least 1");
        }
        if r.is_multiple_of(2) || r < 1 || r > 2 * n - 1 {
            return bad("r must be odd with 1 <= r <= 2n-1");
        }
        if case.d_is_odd() != (d % 2 == 1) {
            return bad(if case.d_is_odd() {
                "d must be odd"
            } else {
                "d must be even"
            });
        }
        let dim = 2 * n + 1;
        match case {
            Case::One if d > r || r + d > 2 * n => bad("need d <= r and r + d <= 2n"),
            Case::Two if d + 2 > r || r + d > 2 * n => bad("need d + 2 <= r and r + d <= 2n"),
            Case::Three if d + 1 > r || r + d > dim => bad("need d < r and r + d <= 2n + 1"),
            Case::Four if d + 1 > r || r + d + 2 > dim => bad("need d < r and r + d <= 2n - 1"),
            _ => Ok(Self { n, r, d, case }),
        }
    }

    /// Every admissible parameter set of the given case.
    pub fn admissible(n: usize, case: Case) -> Vec<Self> {
        let mut out = Vec::new();
        for r in (1..2 * n).step_by(2) {
            for d in 0..=r {
                if let Ok(p) = Self::new(n, r, d, case) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn h0_dim(&self) -> usize {
        self.dim() - self.r - self.d
    }

    pub fn d0_dim(&self) -> usize {
        self.r - self.d
    }

    /// Index of the basis vector `x` with `x^T M x = 1` used to decide
    /// which square class the external points carry.
    pub fn unit_vector_index(&self) -> usize {
        match self.case {
            Case::One | Case::Two => 2 * self.n - self.r,
            Case::Three | Case::Four => 2 * self.n - self.d,
        }
    }
}

fn hyperbolic_block(f: &FieldCtx, m: usize, sign: FieldElement) -> Matrix {
    let mut b = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        b.set(i, m + i, FieldElement::ONE);
        b.set(m + i, i, sign);
    }
    let _ = f;
    b
}

/// `[[0, I_m], [I_m, 0]]` followed by `diag(tail)`.
fn quadric_block(f: &FieldCtx, m: usize, tail: &[FieldElement]) -> Matrix {
    let mut b = Matrix::zeros(2 * m + tail.len(), 2 * m + tail.len());
    b.set_block(0, 0, &hyperbolic_block(f, m, FieldElement::ONE));
    for (i, &t) in tail.iter().enumerate() {
        b.set(2 * m + i, 2 * m + i, t);
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    Square,
    NonSquare,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Internal,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct OrbitCounts {
    pub on_quadric: u64,
    pub internal: u64,
    pub external: u64,
}

impl OrbitCounts {
    /// Orbit sizes of `PG(2n, q)` under the orthogonal group of `Q(2n, q)`.
    pub fn expected(q: u64, n: u32) -> Self {
        let qt = q.pow(n);
        Self {
            on_quadric: (qt * qt - 1) / (q - 1),
            internal: qt * (qt - 1) / 2,
            external: qt * (qt + 1) / 2,
        }
    }
}

/// Witt index of a non-degenerate symmetric bilinear form given by `gram`.
pub fn witt_index(f: &FieldCtx, gram: &Matrix) -> Result<usize> {
    let k = gram.rows();
    if k == 0 {
        return Ok(0);
    }
    let det = gram.determinant(f)?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if k % 2 == 1 {
        return Ok(k / 2);
    }
    let disc = if (k / 2) % 2 == 1 { f.neg(det) } else { det };
    Ok(if f.is_square(disc) { k / 2 } else { k / 2 - 1 })
}

/// `V(2n+1, q)` with a non-degenerate quadratic form.
#[derive(Clone, Debug)]
pub struct QuadraticSpace {
    field: FieldCtx,
    n: usize,
    gram: Matrix,
    gram_inv: Matrix,
    params: Option<CanonicalParams>,
    external_is_square: bool,
}

impl QuadraticSpace {
    pub fn new(field: &FieldCtx, n: usize, gram: Matrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::InadmissibleParams("n must be at least 1".into()));
        }
        if gram.rows() != 2 * n + 1 || gram.cols() != 2 * n + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n + 1,
                found: gram.rows(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let gram_inv = gram.inverse(field)?;
        // x is external iff (-1)^n det(M) eta(x) is a square: the polar
        // hyperplane has discriminant det(M)/eta(x) and is hyperbolic exactly
        // when (-1)^n times that discriminant is a square.
        let det = gram.determinant(field)?;
        let signed = if n % 2 == 1 { field.neg(det) } else { det };
        let external_is_square = field.is_square(signed);
        Ok(Self {
            field: field.clone(),
            n,
            gram,
            gram_inv,
            params: None,
            external_is_square,
        })
    }

    /// Canonical Gram matrix for the given case: hyperbolic pairs between
    /// `H` and `D`, then `Q0` on `H0` and `R0` on `D0`.
    pub fn canonical(field: &FieldCtx, params: CanonicalParams) -> Result<Self> {
        let CanonicalParams { n, r, d, case } = params;
        let dim = 2 * n + 1;
        let k = params.h0_dim();
        let xi_neg = field.neg(field.nonsquare());
        let one = FieldElement::ONE;
        let (q0, r0) = match case {
            Case::One => (
                quadric_block(field, (k - 1) / 2, &[one]),
                quadric_block(field, (r - d) / 2, &[]),
            ),
            Case::Two => (
                quadric_block(field, (k - 1) / 2, &[one]),
                quadric_block(field, (r - d) / 2 - 1, &[one, xi_neg]),
            ),
            Case::Three => (
                quadric_block(field, k / 2, &[]),
                quadric_block(field, (r - d - 1) / 2, &[one]),
            ),
            Case::Four => (
                quadric_block(field, (k - 2) / 2, &[one, xi_neg]),
                quadric_block(field, (r - d - 1) / 2, &[one]),
            ),
        };
        let mut m = Matrix::zeros(dim, dim);
        for i in 0..d {
            m.set(i, dim - d + i, one);
            m.set(dim - d + i, i, one);
        }
        m.set_block(d, d, &q0);
        m.set_block(d + k, d + k, &r0);
        let mut qs = Self::new(field, n, m)?;
        qs.params = Some(params);
        Ok(qs)
    }

    /// The quadric used for the code: case 1 with `r = 2n-1`, `d = 1`.
    pub fn standard(field: &FieldCtx, n: usize) -> Result<Self> {
        let r = (2 * n).saturating_sub(1);
        Self::canonical(field, CanonicalParams::new(n, r, 1, Case::One)?)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn params(&self) -> Option<CanonicalParams> {
        self.params
    }

    /// Whether external points carry square values of `eta`.
    pub fn external_is_square(&self) -> bool {
        self.external_is_square
    }

    /// `v^T M v`.
    pub fn eval(&self, v: &[FieldElement]) -> Result<FieldElement> {
        self.gram.bilinear(&self.field, v, v)
    }

    /// `u^T M v`.
    pub fn polar(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement> {
        self.gram.bilinear(&self.field, u, v)
    }

    pub fn point_square_class(&self, p: &[FieldElement]) -> Result<SquareClass> {
        if p.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let v = self.eval(p)?;
        Ok(if v.is_zero() {
            SquareClass::Singular
        } else if self.field.is_square(v) {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        })
    }

    /// Decides the type of the section `p^perp ∩ Q` from the discriminant of
    /// the form restricted to the polar hyperplane.
    pub fn classify_internal_external(&self, p: &[FieldElement]) -> Result<PointKind> {
        if self.point_square_class(p)? == SquareClass::Singular {
            return Err(Error::SingularPoint);
        }
        let hyperplane =
            Subspace::span(&self.field, self.dim(), &[p.to_vec()]).perp(&self.field, &self.gram);
        let restricted = hyperplane.restrict(&self.field, &self.gram);
        Ok(if witt_index(&self.field, &restricted)? == self.n {
            PointKind::External
        } else {
            PointKind::Internal
        })
    }

    /// Exhaustive classification of all points of `PG(2n, q)`.
    pub fn orbit_counts(&self) -> Result<OrbitCounts> {
        let mut out = OrbitCounts::default();
        for p in crate::geometry::projective_points(&self.field, self.dim()) {
            match self.point_square_class(&p)? {
                SquareClass::Singular => out.on_quadric += 1,
                _ => match self.classify_internal_external(&p)? {
                    PointKind::Internal => out.internal += 1,
                    PointKind::External => out.external += 1,
                },
            }
        }
        Ok(out)
    }
}

/// Options for the canonical alternating form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormOptions {
    /// Antisymmetric `d x d` block on `H`. When absent, the `H` coordinates
    /// not coupled to `H0` through `U` are paired symplectically.
    pub s11: Option<Matrix>,
    /// Case 4 only: entry of the last symplectic pair of `S22`.
    pub alpha: FieldElement,
    /// Case 4 only: place the `2 x 2` identity minor in the last two columns of `U`.
    pub u_minor: bool,
}

impl Default for FormOptions {
    fn default() -> Self {
        Self {
            s11: None,
            alpha: FieldElement::ONE,
            u_minor: false,
        }
    }
}

/// Alternating form `phi(u, v) = u^T S v` with its radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingForm {
    s: Matrix,
    radical: Subspace,
}

impl AlternatingForm {
    pub fn new(f: &FieldCtx, s: Matrix) -> Result<Self> {
        if !s.is_square() {
            return Err(Error::NotSquare {
                rows: s.rows(),
                cols: s.cols(),
            });
        }
        if !s.is_antisymmetric(f) {
            return Err(Error::NotAntisymmetric);
        }
        let radical = s.kernel(f);
        if radical.dim() == s.rows() {
            return Err(Error::ZeroForm);
        }
        Ok(Self { s, radical })
    }

    /// Canonical `S` for the given case, validated by recomputing its radical.
    pub fn canonical(f: &FieldCtx, params: CanonicalParams, opts: &FormOptions) -> Result<Self> {
        let CanonicalParams { n, r, d, case } = params;
        let dim = 2 * n + 1;
        let k = params.h0_dim();
        let one = FieldElement::ONE;
        let minus = f.neg(one);

        let mut s22 = Matrix::zeros(k, k);
        let mut u = Matrix::zeros(d, k);
        let mut coupled = 0usize;
        match case {
            Case::One | Case::Two => {
                s22.set_block(0, 0, &hyperbolic_block(f, (k - 1) / 2, minus));
                if d > 0 {
                    u.set(0, k - 1, one);
                    coupled = 1;
                }
            }
            Case::Three => s22.set_block(0, 0, &hyperbolic_block(f, k / 2, minus)),
            Case::Four => {
                s22.set_block(0, 0, &hyperbolic_block(f, (k - 2) / 2, minus));
                s22.set(k - 2, k - 1, opts.alpha);
                s22.set(k - 1, k - 2, f.neg(opts.alpha));
                if opts.u_minor {
                    if d < 2 {
                        return Err(Error::InadmissibleParams("the U minor needs d >= 2".into()));
                    }
                    u.set(0, k - 2, one);
                    u.set(1, k - 1, one);
                    coupled = 2;
                }
            }
        }
        if case != Case::Four && opts.u_minor {
            return Err(Error::InadmissibleParams(
                "the U minor only exists in case 4".into(),
            ));
        }

        let s11 = match &opts.s11 {
            Some(m) => {
                if m.rows() != d || m.cols() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: m.rows(),
                    });
                }
                if !m.is_antisymmetric(f) {
                    return Err(Error::NotAntisymmetric);
                }
                m.clone()
            }
            None => {
                let mut m = Matrix::zeros(d, d);
                let free: Vec<usize> = (coupled..d).collect();
                for pair in free.chunks_exact(2) {
                    m.set(pair[0], pair[1], one);
                    m.set(pair[1], pair[0], minus);
                }
                m
            }
        };

        let mut s = Matrix::zeros(dim, dim);
        s.set_block(0, 0, &s11);
        s.set_block(0, d, &u);
        s.set_block(d, 0, &u.transpose().neg(f));
        s.set_block(d, d, &s22);

        let form = Self::new(f, s)?;
        let expected: Vec<Vec<FieldElement>> = (dim - r..dim)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; dim];
                v[i] = one;
                v
            })
            .collect();
        if form.radical.dim() != r || form.radical != Subspace::span(f, dim, &expected) {
            return Err(Error::RadicalMismatch {
                expected: r,
                found: form.radical.dim(),
            });
        }
        Ok(form)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.s
    }

    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    /// `dim Rad(phi)`.
    pub fn r(&self) -> usize {
        self.radical.dim()
    }

    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    /// `u^T S v`.
    pub fn eval(
        &self,
        f: &FieldCtx,
        u: &[FieldElement],
        v: &[FieldElement],
    ) -> Result<FieldElement> {
        self.s.bilinear(f, u, v)
    }
}

/// `V = H + H0 + D0 + D` for a pair `(eta, phi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalDecomposition {
    /// Radical of `eta` restricted to `R`.
    pub d_space: Subspace,
    pub d: usize,
    pub d0: Subspace,
    pub h: Subspace,
    pub h0: Subspace,
    /// Witt index of the quadric induced on `H0`.
    pub m: usize,
}

impl RadicalDecomposition {
    pub fn compute(qs: &QuadraticSpace, af: &AlternatingForm) -> Result<Self> {
        let f = qs.field();
        let dim = qs.dim();
        if af.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: af.dim(),
            });
        }
        let rad = af.radical();
        let rad_perp = rad.perp(f, qs.gram());
        let d_space = rad.intersection(f, &rad_perp);
        let d0 = Subspace::span(f, dim, &d_space.complement_in(f, rad));
        let d_perp = d_space.perp(f, qs.gram());
        let h = Subspace::span(f, dim, &d_perp.complement_in(f, &Subspace::full(dim)));
        // D is the radical of eta on R^perp, so any complement of D there is
        // isometric to the form induced on H0.
        let h0 = Subspace::span(f, dim, &d_space.complement_in(f, &rad_perp));
        let m = witt_index(f, &h0.restrict(f, qs.gram()))?;
        Ok(Self {
            d: d_space.dim(),
            d_space,
            d0,
            h,
            h0,
            m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::projective_points;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    fn unit(dim: usize, i: usize) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; dim];
        v[i] = FieldElement::ONE;
        v
    }

    fn values(m: &Matrix) -> Vec<u16> {
        m.data().iter().map(|x| x.value()).collect()
    }

    #[test]
    fn canonical_m_case1_small() {
        let f3 = f(3);
        let qs = QuadraticSpace::canonical(&f3, CanonicalParams::new(2, 3, 1, Case::One).unwrap())
            .unwrap();
        #[rustfmt::skip]
        let expected = [
            0, 0, 0, 0, 1,
            0, 1, 0, 0, 0,
            0, 0, 0, 1, 0,
            0, 0, 1, 0, 0,
            1, 0, 0, 0, 0,
        ];
        assert_eq!(values(qs.gram()), expected);
        assert!(qs.gram().determinant(&f3).unwrap() != FieldElement::ZERO);

        let qs7 = QuadraticSpace::canonical(&f3, CanonicalParams::new(3, 5, 1, Case::One).unwrap())
            .unwrap();
        assert_eq!(qs7.gram().rows(), 7);
        assert_eq!(qs7.gram().get(1, 1), FieldElement::ONE);
        assert_eq!(qs7.gram().get(2, 4), FieldElement::ONE);
        assert_eq!(qs7.gram().get(3, 5), FieldElement::ONE);
    }

    #[test]
    fn inadmissible_params() {
        assert!(matches!(
            CanonicalParams::new(2, 3, 2, Case::One),
            Err(Error::InadmissibleParams(_))
        ));
        assert!(CanonicalParams::new(2, 4, 1, Case::One).is_err());
        assert!(CanonicalParams::new(2, 1, 1, Case::Two).is_err());
        assert!(CanonicalParams::new(2, 3, 1, Case::Three).is_err());
        assert!(CanonicalParams::new(3, 5, 2, Case::Four).is_err());
        assert!(CanonicalParams::new(3, 5, 0, Case::Four).is_ok());
        assert!(CanonicalParams::new(3, 3, 0, Case::Four).is_ok());
    }

    #[test]
    fn canonical_s_shapes() {
        let f3 = f(3);
        let p = CanonicalParams::new(2, 3, 1, Case::One).unwrap();
        let s = AlternatingForm::canonical(&f3, p, &FormOptions::default()).unwrap();
        let mut expected = Matrix::zeros(5, 5);
        expected.set(0, 1, FieldElement::ONE);
        expected.set(1, 0, f3.scalar(-1));
        assert_eq!(s.matrix(), &expected);
        assert_eq!(s.r(), 3);

        let p = CanonicalParams::new(3, 5, 1, Case::One).unwrap();
        assert_eq!(
            AlternatingForm::canonical(&f3, p, &FormOptions::default())
                .unwrap()
                .r(),
            5
        );
        let p = CanonicalParams::new(3, 3, 1, Case::One).unwrap();
        let s = AlternatingForm::canonical(&f3, p, &FormOptions::default()).unwrap();
        assert_eq!(s.r(), 3);
        // one symplectic pair in S22 plus the U entry
        assert_eq!(s.matrix().get(1, 2), FieldElement::ONE);
        assert_eq!(s.matrix().get(0, 3), FieldElement::ONE);
    }

    #[test]
    fn zero_s11_fails_for_larger_d() {
        let f3 = f(3);
        let p = CanonicalParams::new(3, 3, 3, Case::One).unwrap();
        let opts = FormOptions {
            s11: Some(Matrix::zeros(3, 3)),
            ..Default::default()
        };
        assert!(matches!(
            AlternatingForm::canonical(&f3, p, &opts),
            Err(Error::RadicalMismatch { .. })
        ));
        assert_eq!(
            AlternatingForm::canonical(&f3, p, &FormOptions::default())
                .unwrap()
                .r(),
            3
        );
    }

    #[test]
    fn case4_alpha_and_minor() {
        let f3 = f(3);
        let p = CanonicalParams::new(3, 3, 2, Case::Four).unwrap();
        let zero_alpha = FormOptions {
            alpha: FieldElement::ZERO,
            ..Default::default()
        };
        assert!(matches!(
            AlternatingForm::canonical(&f3, p, &zero_alpha),
            Err(Error::RadicalMismatch { .. })
        ));
        let with_minor = FormOptions {
            alpha: FieldElement::ZERO,
            u_minor: true,
            ..Default::default()
        };
        assert_eq!(
            AlternatingForm::canonical(&f3, p, &with_minor).unwrap().r(),
            3
        );
        let p0 = CanonicalParams::new(3, 1, 0, Case::Four).unwrap();
        assert!(AlternatingForm::canonical(&f3, p0, &with_minor).is_err());
    }

    #[test]
    fn every_admissible_canonical_pair_builds() {
        for q in [3, 5, 9] {
            let fq = f(q);
            for n in 1..=4 {
                for case in Case::ALL {
                    for p in CanonicalParams::admissible(n, case) {
                        let qs = QuadraticSpace::canonical(&fq, p).unwrap();
                        assert!(qs.gram().is_symmetric());
                        let af = AlternatingForm::canonical(&fq, p, &FormOptions::default())
                            .unwrap_or_else(|e| panic!("{p:?}: {e}"));
                        assert_eq!(af.r() % 2, 1);
                        let dec = RadicalDecomposition::compute(&qs, &af).unwrap();
                        assert_eq!(dec.d, p.d, "{p:?}");
                        assert_eq!(dec.h0.dim(), p.h0_dim());
                        assert_eq!(dec.d0.dim(), p.d0_dim());
                        assert_eq!(dec.h.dim(), p.d);
                        assert!(dec.d + dec.m <= n);
                        let expected_m = match case {
                            Case::One | Case::Two => n - (p.r + p.d) / 2,
                            Case::Three => n - (p.r + p.d - 1) / 2,
                            Case::Four => n - (p.r + p.d).div_ceil(2),
                        };
                        assert_eq!(dec.m, expected_m, "{p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_vector_and_external_class() {
        for q in [3, 5, 7, 9] {
            let fq = f(q);
            for n in 2..=3 {
                for case in Case::ALL {
                    for p in CanonicalParams::admissible(n, case) {
                        let qs = QuadraticSpace::canonical(&fq, p).unwrap();
                        let x = unit(qs.dim(), p.unit_vector_index());
                        assert_eq!(qs.eval(&x).unwrap(), FieldElement::ONE);
                        let kind = qs.classify_internal_external(&x).unwrap();
                        let hyperbolic_section = matches!(case, Case::One | Case::Three);
                        assert_eq!(
                            kind == PointKind::External,
                            hyperbolic_section,
                            "{p:?} q={q}"
                        );
                        assert_eq!(qs.external_is_square(), hyperbolic_section, "{p:?} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f3 = f(3);
        let qs = QuadraticSpace::canonical(&f3, CanonicalParams::new(2, 3, 1, Case::One).unwrap())
            .unwrap();
        assert_eq!(
            qs.eval(&[FieldElement::ZERO; 5]).unwrap(),
            FieldElement::ZERO
        );
        assert_eq!(qs.eval(&unit(5, 1)).unwrap(), FieldElement::ONE);
        assert_eq!(qs.eval(&unit(5, 0)).unwrap(), FieldElement::ZERO);
        assert_eq!(
            qs.point_square_class(&unit(5, 1)).unwrap(),
            SquareClass::Square
        );
        assert_eq!(
            qs.point_square_class(&unit(5, 0)).unwrap(),
            SquareClass::Singular
        );
        let mut two_b2 = unit(5, 1);
        two_b2[1] = f3.scalar(2);
        assert_eq!(qs.point_square_class(&two_b2).unwrap(), SquareClass::Square);
        assert_eq!(
            qs.point_square_class(&[FieldElement::ZERO; 5]),
            Err(Error::ZeroVector)
        );
        assert_eq!(
            qs.classify_internal_external(&unit(5, 0)),
            Err(Error::SingularPoint)
        );
    }

    #[test]
    fn square_class_is_scale_invariant() {
        let f5 = f(5);
        let qs = QuadraticSpace::standard(&f5, 2).unwrap();
        for p in projective_points(&f5, 5) {
            let c = qs.point_square_class(&p).unwrap();
            for l in f5.nonzero() {
                let mut v = p.clone();
                f5.scale(l, &mut v);
                assert_eq!(qs.point_square_class(&v).unwrap(), c);
            }
        }
    }

    /// Tangent count oracle on a conic: a non-singular point is external
    /// iff it lies on two tangent lines.
    #[test]
    fn conic_internal_external_by_tangents() {
        for q in [3, 5, 7] {
            let fq = f(q);
            let qs = QuadraticSpace::new(&fq, 1, Matrix::identity(3)).unwrap();
            let conic: Vec<Vec<FieldElement>> = projective_points(&fq, 3)
                .filter(|p| qs.eval(p).unwrap().is_zero())
                .collect();
            assert_eq!(conic.len(), q as usize + 1);
            for p in projective_points(&fq, 3) {
                if qs.eval(&p).unwrap().is_zero() {
                    continue;
                }
                // tangent at c is c^perp; p lies on it iff c^T M p = 0
                let tangents = conic
                    .iter()
                    .filter(|c| qs.polar(c, &p).unwrap().is_zero())
                    .count();
                let kind = qs.classify_internal_external(&p).unwrap();
                assert_eq!(tangents == 2, kind == PointKind::External);
                assert!(tangents == 0 || tangents == 2);
            }
        }
    }

    /// Cross-check of the discriminant rule against point counts:
    /// `Q+(2t-1,q)` has `(q^{t-1}+1)(q^t-1)/(q-1)` points, `Q-` has
    /// `(q^{t-1}-1)(q^t+1)/(q-1)`.
    #[test]
    fn hyperplane_sections_by_counting() {
        let fq = f(3);
        let qs = QuadraticSpace::standard(&fq, 2).unwrap();
        let (q, t) = (3u64, 2u32);
        let hyp = (q.pow(t - 1) + 1) * (q.pow(t) - 1) / (q - 1);
        let ell = (q.pow(t - 1) - 1) * (q.pow(t) + 1) / (q - 1);
        for p in projective_points(&fq, 5) {
            if qs.eval(&p).unwrap().is_zero() {
                continue;
            }
            let on_section = projective_points(&fq, 5)
                .filter(|x| qs.eval(x).unwrap().is_zero() && qs.polar(x, &p).unwrap().is_zero())
                .count() as u64;
            match qs.classify_internal_external(&p).unwrap() {
                PointKind::External => assert_eq!(on_section, hyp),
                PointKind::Internal => assert_eq!(on_section, ell),
            }
        }
    }

    fn kappa(q: u64, t: u32) -> (u64, u64, u64) {
        let c = OrbitCounts::expected(q, t);
        (c.on_quadric, c.internal, c.external)
    }

    #[test]
    fn orbit_count_examples() {
        for (n, q, expected) in [
            (2, 3, (40, 36, 45)),
            (3, 3, (364, 351, 378)),
            (2, 5, (156, 300, 325)),
        ] {
            let qs = QuadraticSpace::standard(&f(q), n).unwrap();
            let c = qs.orbit_counts().unwrap();
            assert_eq!((c.on_quadric, c.internal, c.external), expected);
            assert_eq!(kappa(q as u64, n as u32), expected);
        }
    }

    #[test]
    fn canonical_orbit_counts_match_kappa() {
        for q in [3u32, 5] {
            let fq = f(q);
            for n in 2..=3usize {
                if q == 5 && n == 3 {
                    continue;
                }
                for case in Case::ALL {
                    for p in CanonicalParams::admissible(n, case) {
                        let c = QuadraticSpace::canonical(&fq, p)
                            .unwrap()
                            .orbit_counts()
                            .unwrap();
                        assert_eq!(
                            (c.on_quadric, c.internal, c.external),
                            kappa(q as u64, n as u32),
                            "{p:?}"
                        );
                    }
                }
            }
        }
    }

    /// kappa_+ and kappa_- of the square-class orbits in hyperbolic and
    /// elliptic ambients `Q+-(2t-1, q)`.
    #[test]
    fn square_class_orbits_in_even_dimension() {
        let fq = f(3);
        let q = 3u64;
        for t in 1..=2u32 {
            let dim = 2 * t as usize;
            let hyp = quadric_block(&fq, t as usize, &[]);
            let ell = quadric_block(
                &fq,
                t as usize - 1,
                &[FieldElement::ONE, fq.neg(fq.nonsquare())],
            );
            for (gram, expected) in [
                (hyp, q.pow(t - 1) * (q.pow(t) - 1) / 2),
                (ell, q.pow(t - 1) * (q.pow(t) + 1) / 2),
            ] {
                let (mut sq, mut ns) = (0u64, 0u64);
                for p in projective_points(&fq, dim) {
                    let v = gram.bilinear(&fq, &p, &p).unwrap();
                    if v.is_zero() {
                        continue;
                    }
                    if fq.is_square(v) {
                        sq += 1
                    } else {
                        ns += 1
                    }
                }
                assert_eq!(sq, expected);
                assert_eq!(ns, expected);
            }
        }
    }
}
