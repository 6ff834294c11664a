//! Closed form point counts for the residue classes, the number `f` of lines
//! that are totally singular and totally isotropic, and the discrete
//! maximisation that singles out the minimum weight configuration.
//!
//! Every quantity here has a brute-force counterpart built on `geometry`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::forms::{AlternatingForm, CanonicalParams, Case, QuadraticSpace, RadicalDecomposition};
use crate::geometry::{FormPair, LineTag, PolarGeometry, ResidueClass};
use crate::matrix::nonzero_eigenvalues;

fn pw(q: i128, e: i64) -> Result<i128> {
    if e < 0 {
        return Err(Error::NonIntegerResult("negative exponent"));
    }
    Ok(q.pow(e as u32))
}

fn div_exact(a: i128, b: i128, what: &'static str) -> Result<i128> {
    if b == 0 || a % b != 0 {
        return Err(Error::NonIntegerResult(what));
    }
    Ok(a / b)
}

/// `(q^e - 1)/(q - 1)`.
fn gauss(q: i128, e: i64) -> Result<i128> {
    div_exact(pw(q, e)? - 1, q - 1, "(q^e-1)/(q-1)")
}

/// Residue sizes: `tau(p)` for `p` in the classes `P`, `P+`, `P0`, `P-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueConstants {
    pub a0: i128,
    pub b_plus: i128,
    pub b0: i128,
    pub b_minus: i128,
}

impl ResidueConstants {
    pub fn tau(&self, class: ResidueClass) -> i128 {
        match class {
            ResidueClass::PA | ResidueClass::PB => self.a0,
            ResidueClass::Plus => self.b_plus,
            ResidueClass::Zero => self.b0,
            ResidueClass::Minus => self.b_minus,
        }
    }
}

pub fn residue_constants(n: usize, q: u64) -> Result<ResidueConstants> {
    if n < 2 {
        return Err(Error::InadmissibleParams(format!(
            "residue constants need n >= 2, got {n}"
        )));
    }
    let (n, q) = (n as i64, q as i128);
    Ok(ResidueConstants {
        a0: gauss(q, 2 * n - 2)?,
        b_plus: div_exact((pw(q, n - 1)? - 1) * (pw(q, n - 2)? + 1), q - 1, "B+")?,
        b0: gauss(q, 2 * n - 3)?,
        b_minus: div_exact((pw(q, n - 1)? + 1) * (pw(q, n - 2)? - 1), q - 1, "B-")?,
    })
}

/// Class sizes of the singular points and the line count `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ClassCensus {
    pub a_r: i128,
    pub a_v: i128,
    pub a: i128,
    pub n0: i128,
    pub n_plus: i128,
    pub n_minus: i128,
    pub f: i128,
}

impl ClassCensus {
    pub fn total(&self) -> i128 {
        self.a + self.n0 + self.n_plus + self.n_minus
    }

    /// `(A, N0, N+, N-)`.
    pub fn classes(&self) -> (i128, i128, i128, i128) {
        (self.a, self.n0, self.n_plus, self.n_minus)
    }

    /// `A A0 + N0 B0 + N+ B+ + N- B-`, which equals `(q+1) f`.
    pub fn weighted_sum(&self, rc: &ResidueConstants) -> i128 {
        self.a * rc.a0 + self.n0 * rc.b0 + self.n_plus * rc.b_plus + self.n_minus * rc.b_minus
    }
}

/// Closed form census for cases 1 to 3, evaluated without checking that the
/// parameters are realised by a pair of forms (the maximisation grids are
/// slightly larger than the realisable set). `f` is derived from the class
/// sizes.
pub fn closed_form_terms(case: Case, n: usize, q: u64, r: usize, d: usize) -> Result<ClassCensus> {
    let rc = residue_constants(n, q)?;
    let (ni, qi, ri, s) = (n as i64, q as i128, r as i64, (r + d) as i64);
    if r.is_multiple_of(2) || case.d_is_odd() != (d % 2 == 1) {
        return Err(Error::InadmissibleParams(format!(
            "parities of r={r}, d={d} do not fit case {}",
            case.number()
        )));
    }
    let qq = pw(qi, 2 * ni - 1)?;
    let cone = gauss(qi, ri - 1)?;
    let (a_v, a_r, n0_base, n_plus, n_minus) = match case {
        Case::One | Case::Two => {
            let sign = if case == Case::One { 1 } else { -1 };
            let a_v = 2 * gauss(qi, ni - s / 2)?;
            let a_r = cone + sign * pw(qi, (s - 2) / 2)?;
            let x = pw(qi, 2 * ni - s / 2 - 1)?;
            let y = pw(qi, ni + s / 2 - 1)?;
            let z = pw(qi, ni - 1)?;
            let (np, nm) = if case == Case::One {
                (
                    div_exact(qq + x + y - z, 2, "N+")?,
                    div_exact(qq - x - y + z, 2, "N-")?,
                )
            } else {
                (
                    div_exact(qq + x - y - z, 2, "N+")?,
                    div_exact(qq - x + y + z, 2, "N-")?,
                )
            };
            (a_v, a_r, gauss(qi, 2 * ni - 1)?, np, nm)
        }
        Case::Three => {
            let a_v = 2 * gauss(qi, ni - (s - 1) / 2)?;
            let t = pw(qi, ni + (s - 1) / 2)?;
            let n0_base = div_exact(qq + t - t / qi - 1, qi - 1, "N0")?;
            let base = qq - pw(qi, ni + (s - 3) / 2)?;
            let split = pw(qi, 2 * ni - (s + 1) / 2)? - pw(qi, ni - 1)?;
            (
                a_v,
                cone,
                n0_base,
                div_exact(base + split, 2, "N+")?,
                div_exact(base - split, 2, "N-")?,
            )
        }
        Case::Four => return Err(Error::Case4NoClosedForm),
    };
    let a = a_r + a_v;
    let mut c = ClassCensus {
        a_r,
        a_v,
        a,
        n0: n0_base - a,
        n_plus,
        n_minus,
        f: 0,
    };
    c.f = div_exact(c.weighted_sum(&rc), qi + 1, "f")?;
    Ok(c)
}

/// Closed form census of an admissible canonical configuration.
pub fn closed_form_census(case: Case, n: usize, q: u64, r: usize, d: usize) -> Result<ClassCensus> {
    CanonicalParams::new(n, r, d, case)?;
    let c = closed_form_terms(case, n, q, r, d)?;
    if [c.a_r, c.a_v, c.n0, c.n_plus, c.n_minus, c.f]
        .iter()
        .any(|&x| x < 0)
    {
        return Err(Error::NonIntegerResult("negative class size"));
    }
    Ok(c)
}

/// `A` in case 4: `2(q^{n-(r+d+1)/2} - 1)/(q-1) + (q^{r-1} - 1)/(q-1)`.
pub fn case4_a(n: usize, q: u64, r: usize, d: usize) -> Result<i128> {
    CanonicalParams::new(n, r, d, Case::Four)?;
    let (ni, qi) = (n as i64, q as i128);
    Ok(2 * gauss(qi, ni - (r + d + 1) as i64 / 2)? + gauss(qi, r as i64 - 1)?)
}

/// `A A0 + (|Q| - A) B+`, an upper bound for `(q+1) f` in case 4.
pub fn case4_weighted_bound(n: usize, q: u64, r: usize, d: usize) -> Result<i128> {
    let a = case4_a(n, q, r, d)?;
    let rc = residue_constants(n, q)?;
    let total = gauss(q as i128, 2 * n as i64)?;
    Ok(a * rc.a0 + (total - a) * rc.b_plus)
}

/// Census by classifying every singular point; `f` is the direct count of
/// totally isotropic lines.
pub fn empirical_census(geom: &PolarGeometry, af: &AlternatingForm) -> Result<ClassCensus> {
    let pair = FormPair::new(geom.quadratic_space(), af)?;
    let mut c = ClassCensus::default();
    for class in geom.classes(&pair) {
        match class {
            ResidueClass::PA => c.a_r += 1,
            ResidueClass::PB => c.a_v += 1,
            ResidueClass::Zero => c.n0 += 1,
            ResidueClass::Plus => c.n_plus += 1,
            ResidueClass::Minus => c.n_minus += 1,
        }
    }
    c.a = c.a_r + c.a_v;
    c.f = geom.isotropic_lines(af).iter().filter(|&&z| z).count() as i128;
    Ok(c)
}

/// `sum over singular p of tau(p)`, counted line by line.
pub fn tau_sum(geom: &PolarGeometry, af: &AlternatingForm) -> Result<i128> {
    let mut total = 0i128;
    for p in geom.points() {
        total += geom.tau(af, p)? as i128;
    }
    Ok(total)
}

/// Number of lines of each type, in `LineTag::ALL` order.
pub fn line_type_census(geom: &PolarGeometry, af: &AlternatingForm) -> Result<[u64; 5]> {
    let pair = FormPair::new(geom.quadratic_space(), af)?;
    let classes = geom.classes(&pair);
    let mut out = [0u64; 5];
    for l in 0..geom.lines().len() {
        out[geom.line_type(&classes, l)?.tag as usize] += 1;
    }
    Ok(out)
}

/// Both sides of `(N+ - N-)(q^{2n-2} - 1)/(q - 1) = q (#D+ - #D-)`.
pub fn flag_identity(
    census: &ClassCensus,
    types: &[u64; 5],
    n: usize,
    q: u64,
) -> Result<(i128, i128)> {
    let rc = residue_constants(n, q)?;
    let lhs = (census.n_plus - census.n_minus) * rc.a0;
    let rhs = q as i128
        * (types[LineTag::TPlus as usize] as i128 - types[LineTag::TMinus as usize] as i128);
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct L11Counts {
    pub claim1_formula: u64,
    pub claim1: u64,
    pub claim2: u64,
}

/// Solution counts of the two auxiliary equations in the case 1 census, by
/// brute force: `y^2 + x^T R0 x = beta^2` over `F_q^{1 + r - d}` with `R0`
/// hyperbolic, and `-z^2 + 2 z2.z1 in -squares` with `z != 0` and
/// `z1, z2` of length `n - (r+d)/2`.
pub fn lemma_l11_counts(
    f: &FieldCtx,
    n: usize,
    r: usize,
    d: usize,
    beta: FieldElement,
) -> Result<L11Counts> {
    CanonicalParams::new(n, r, d, Case::One)?;
    if beta.is_zero() {
        return Err(Error::InadmissibleParams("beta must be non-zero".into()));
    }
    let q = f.q() as u64;
    let half = (r - d) / 2;
    let two = f.scalar(2);
    let target = f.mul(beta, beta);
    let mut claim1 = 0u64;
    for_each_vector(f, 1 + 2 * half, |v| {
        let mut val = f.mul(v[0], v[0]);
        for i in 0..half {
            val = f.add(val, f.mul(two, f.mul(v[1 + i], v[1 + half + i])));
        }
        if val == target {
            claim1 += 1;
        }
    });
    let nu = n - (r + d) / 2;
    let mut claim2 = 0u64;
    for_each_vector(f, 1 + 2 * nu, |v| {
        if v[0].is_zero() {
            return;
        }
        let mut val = f.neg(f.mul(v[0], v[0]));
        for i in 0..nu {
            val = f.add(val, f.mul(two, f.mul(v[1 + i], v[1 + nu + i])));
        }
        if !val.is_zero() && f.is_square(f.neg(val)) {
            claim2 += 1;
        }
    });
    let h = q.pow(half as u32);
    Ok(L11Counts {
        claim1_formula: h * (h + 1),
        claim1,
        claim2,
    })
}

fn for_each_vector(f: &FieldCtx, len: usize, mut visit: impl FnMut(&[FieldElement])) {
    let q = f.q() as u64;
    let mut v = alloc::vec![FieldElement::ZERO; len];
    for idx in 0..q.pow(len as u32) {
        let mut t = idx;
        for x in v.iter_mut() {
            *x = f.element(t % q).expect("digit below q");
            t /= q;
        }
        visit(&v);
    }
}

/// `(q^{n-1}-1)(q^{3n-2}+q^{3n-3}-q^{3n-4}+q^{2n}-q^{n-1}-1) / ((q-1)^2 (q+1))`.
pub fn f1_max(n: usize, q: u64) -> Result<i128> {
    if n < 2 {
        return Err(Error::InadmissibleParams(format!(
            "n >= 2 required, got {n}"
        )));
    }
    let (n, q) = (n as i64, q as i128);
    let num = (pw(q, n - 1)? - 1)
        * (pw(q, 3 * n - 2)? + pw(q, 3 * n - 3)? - pw(q, 3 * n - 4)? + pw(q, 2 * n)?
            - pw(q, n - 1)?
            - 1);
    div_exact(num, (q - 1) * (q - 1) * (q + 1), "f1_max")
}

/// `f^1(r,d) (q+1)(q-1)^2` in expanded form.
pub fn f1_scaled(n: usize, q: u64, r: usize, d: usize) -> Result<i128> {
    let (n, q, r, s) = (n as i64, q as i128, r as i64, (r + d) as i64);
    if s % 2 != 0 {
        return Err(Error::InadmissibleParams(
            "r + d must be even in case 1".into(),
        ));
    }
    let inner = pw(q, r - 1)? + pw(q, s / 2 + 1)? - pw(q, s / 2 - 1)?
        + pw(q, n - s / 2 + 1)?
        + pw(q, n - s / 2)?;
    Ok(pw(q, 2 * n - 3)? * (q - 1) * inner + pw(q, 4 * n - 3)?
        - pw(q, 2 * n - 1)?
        - pw(q, 2 * n - 2)?
        + pw(q, 2 * n - 3)?
        - pw(q, 2 * n)?
        + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GAndH {
    pub g: i128,
    /// `max_s g(r, s)` over the admissible `s`.
    pub h: i128,
    pub h_at: usize,
}

fn g_value(n: i64, q: i128, r: i64, s: i64) -> Result<i128> {
    Ok(
        pw(q, n - s / 2 + 1)? + pw(q, n - s / 2)? + pw(q, s / 2 + 1)? - pw(q, s / 2 - 1)?
            + pw(q, r - 1)?,
    )
}

fn g_domain(n: usize, r: usize) -> impl Iterator<Item = usize> {
    (r + 1..=(2 * r).min(2 * n)).filter(|s| s % 2 == 0)
}

/// `g(r,s) = q^{n-s/2+1} + q^{n-s/2} + q^{s/2+1} - q^{s/2-1} + q^{r-1}`,
/// with `s = r + d` even and `r + 1 <= s <= min(2r, 2n)`.
pub fn g_and_h(n: usize, q: u64, r: usize, s: usize) -> Result<GAndH> {
    if r.is_multiple_of(2)
        || r == 0
        || r > 2 * n - 1
        || !s.is_multiple_of(2)
        || s < r + 1
        || s > (2 * r).min(2 * n)
    {
        return Err(Error::InadmissibleParams(format!(
            "(r, s) = ({r}, {s}) outside the grid for n = {n}"
        )));
    }
    let (ni, qi) = (n as i64, q as i128);
    let g = g_value(ni, qi, r as i64, s as i64)?;
    let mut h = (i128::MIN, 0usize);
    for t in g_domain(n, r) {
        let v = g_value(ni, qi, r as i64, t as i64)?;
        if v > h.0 {
            h = (v, t);
        }
    }
    Ok(GAndH {
        g,
        h: h.0,
        h_at: h.1,
    })
}

/// Grid argmax of `g`, first in `(r, s)` order on ties.
pub fn g_argmax(n: usize, q: u64) -> Result<(usize, usize, i128)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for r in (1..2 * n).step_by(2) {
        for s in g_domain(n, r) {
            let g = g_and_h(n, q, r, s)?.g;
            if best.is_none_or(|b| g > b.2) {
                best = Some((r, s, g));
            }
        }
    }
    best.ok_or_else(|| Error::InadmissibleParams("empty grid".into()))
}

/// `q^2 tau(r, s)`, scaled so that every exponent is non-negative, where
///
/// ```text
/// tau = q^n (q^{n-1}-1)(q-1)(q^{r-3} + 2q^{n-(s+5)/2}) + q^{4n-3} + q^{3n-1}
///     - q^{3n-2} - 3q^{2n-2} + 2q^{2n-3} - q^{2n} + 2q^{n-1} - 2q^{n-2} + 1
/// ```
pub fn case4_bound(n: usize, q: u64, r: usize, s: usize) -> Result<i128> {
    if r.is_multiple_of(2) || s.is_multiple_of(2) || s < r || s + 1 > 2 * n || n < 2 {
        return Err(Error::InadmissibleParams(format!(
            "(r, s) = ({r}, {s}) outside the case 4 range for n = {n}"
        )));
    }
    let (n, q, r, s) = (n as i64, q as i128, r as i64, s as i64);
    let lead = pw(q, n)?
        * (pw(q, n - 1)? - 1)
        * (q - 1)
        * (pw(q, r - 1)? + 2 * pw(q, n - (s + 5) / 2 + 2)?);
    let tail = pw(q, 4 * n - 3)? + pw(q, 3 * n - 1)? - pw(q, 3 * n - 2)? - 3 * pw(q, 2 * n - 2)?
        + 2 * pw(q, 2 * n - 3)?
        - pw(q, 2 * n)?
        + 2 * pw(q, n - 1)?
        - 2 * pw(q, n - 2)?
        + 1;
    Ok(lead + q * q * tail)
}

/// The two end values of `h(r) = tau(r, r)` as displayed closed forms.
pub fn case4_h_endpoints(n: usize, q: u64) -> Result<(i128, i128)> {
    let (n, q) = (n as i64, q as i128);
    let h1 = pw(q, 4 * n - 3)? + pw(q, 3 * n - 1)? - pw(q, 3 * n - 2)? + 2 * pw(q, 3 * n - 3)?
        - 2 * pw(q, 3 * n - 4)?
        - 4 * pw(q, 2 * n - 2)?
        + 3 * pw(q, 2 * n - 3)?
        - pw(q, 2 * n)?
        + pw(q, n - 1)?
        - pw(q, n - 2)?
        + 1;
    let h2 = pw(q, 4 * n - 3)? + pw(q, 4 * n - 4)? - pw(q, 4 * n - 5)? + pw(q, 3 * n - 1)?
        - pw(q, 3 * n - 2)?
        - pw(q, 3 * n - 3)?
        + pw(q, 3 * n - 4)?
        - pw(q, 2 * n - 2)?
        - pw(q, 2 * n)?
        + 1;
    Ok((h1, h2))
}

/// Parameter grid over which the closed forms of a case are maximised.
pub fn formula_grid(n: usize, case: Case) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in (1..2 * n).step_by(2) {
        match case {
            Case::One | Case::Two => {
                for d in (1..=r.min(2 * n - r)).step_by(2) {
                    out.push((r, d));
                }
            }
            Case::Three | Case::Four => {
                for p in CanonicalParams::admissible(n, case) {
                    if p.r == r {
                        out.push((p.r, p.d));
                    }
                }
            }
        }
    }
    out
}

/// Position of the maxima of `f^1, f^2, f^3` expected for a given `n`.
pub fn expected_maxima(n: usize) -> Result<[(Case, usize, usize); 3]> {
    match n {
        3 => Ok([(Case::One, 5, 1), (Case::Two, 1, 1), (Case::Three, 1, 0)]),
        n if n > 3 => Ok([
            (Case::One, 2 * n - 1, 1),
            (Case::Two, 2 * n - 1, 1),
            (Case::Three, 2 * n - 1, 0),
        ]),
        _ => Err(Error::InadmissibleParams(format!(
            "the table of maxima starts at n = 3, got {n}"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseMaximum {
    pub case: Case,
    pub r: usize,
    pub d: usize,
    pub f: i128,
}

/// Strict argmax of the closed form `f` over the grid of one case.
pub fn closed_form_argmax(n: usize, q: u64, case: Case) -> Result<CaseMaximum> {
    let mut best: Option<CaseMaximum> = None;
    for (r, d) in formula_grid(n, case) {
        let f = closed_form_terms(case, n, q, r, d)?.f;
        if best.is_none_or(|b| f > b.f) {
            best = Some(CaseMaximum { case, r, d, f });
        }
    }
    best.ok_or_else(|| Error::InadmissibleParams("empty grid".into()))
}

/// Checks the argmax of `f^1, f^2, f^3` against the expected positions.
pub fn verify_table_maxima(n: usize, q: u64) -> Result<[CaseMaximum; 3]> {
    let expected = expected_maxima(n)?;
    let mut out = [CaseMaximum {
        case: Case::One,
        r: 0,
        d: 0,
        f: 0,
    }; 3];
    for (i, &(case, r, d)) in expected.iter().enumerate() {
        let m = closed_form_argmax(n, q, case)?;
        if (m.r, m.d) != (r, d) {
            return Err(Error::TableMismatch {
                case: case.number(),
                r: m.r,
                d: m.d,
            });
        }
        out[i] = m;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxEigCheck {
    /// Non-zero vectors lying in some eigenspace of a non-zero eigenvalue.
    pub count: u64,
    pub m: usize,
    pub bound: u64,
    pub holds: bool,
}

/// Eigenvector count of `M^{-1} S` against `2(q^m - 1)`, where `m` is the
/// Witt index of the form on `H0`.
pub fn maxeig_bound_check(qs: &QuadraticSpace, af: &AlternatingForm) -> Result<MaxEigCheck> {
    let f = qs.field();
    let q = f.q() as u64;
    let dec = RadicalDecomposition::compute(qs, af)?;
    let a = qs.gram_inv().mul(f, af.matrix())?;
    let count = nonzero_eigenvalues(f, &a)?
        .values()
        .map(|v| q.pow(v.dim() as u32) - 1)
        .sum();
    let bound = 2 * (q.pow(dec.m as u32) - 1);
    Ok(MaxEigCheck {
        count,
        m: dec.m,
        bound,
        holds: count <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormOptions;
    use crate::sample::random_alternating_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u32) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    #[test]
    fn residue_constant_values() {
        let c = residue_constants(3, 3).unwrap();
        assert_eq!((c.a0, c.b_plus, c.b0, c.b_minus), (40, 16, 13, 10));
        let c = residue_constants(2, 3).unwrap();
        assert_eq!((c.a0, c.b_plus, c.b0, c.b_minus), (4, 2, 1, 0));
        let c = residue_constants(3, 5).unwrap();
        assert_eq!((c.a0, c.b_plus, c.b0, c.b_minus), (156, 36, 31, 26));
        for n in 2..6 {
            for q in [3u64, 5, 7, 9] {
                let c = residue_constants(n, q).unwrap();
                assert_eq!(c.b_plus + c.b_minus, 2 * c.b0);
                assert_eq!(c.b_plus - c.b0, (q as i128).pow(n as u32 - 2));
                assert_eq!(c.a0 - c.b0, (q as i128).pow(2 * n as u32 - 3));
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let c = closed_form_census(Case::One, 3, 3, 5, 1).unwrap();
        assert_eq!(
            (c.a, c.n0, c.n_plus, c.n_minus, c.f),
            (49, 72, 243, 0, 1696)
        );
        let c = closed_form_census(Case::One, 2, 3, 3, 1).unwrap();
        assert_eq!((c.a, c.n0, c.n_plus, c.n_minus, c.f), (7, 6, 27, 0, 22));
        let c = closed_form_census(Case::Three, 3, 3, 5, 0).unwrap();
        assert_eq!(c.a, 42);
        assert_eq!(c.total(), 364);
        assert_eq!(
            closed_form_census(Case::Four, 3, 3, 1, 0),
            Err(Error::Case4NoClosedForm)
        );
        assert!(matches!(
            closed_form_census(Case::One, 3, 3, 5, 2),
            Err(Error::InadmissibleParams(_))
        ));
    }

    #[test]
    fn closed_forms_sum_to_quadric() {
        for n in 2..=5usize {
            for q in [3u64, 5, 7] {
                let total = ((q as i128).pow(2 * n as u32) - 1) / (q as i128 - 1);
                for case in [Case::One, Case::Two, Case::Three] {
                    for p in CanonicalParams::admissible(n, case) {
                        let c = closed_form_census(case, n, q, p.r, p.d).unwrap();
                        assert_eq!(c.total(), total, "{p:?} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn f1_values() {
        assert_eq!(f1_max(3, 3).unwrap(), 1696);
        assert_eq!(f1_max(2, 3).unwrap(), 22);
        for n in 2..=5usize {
            for q in [3u64, 5, 7, 9] {
                let fm = f1_max(n, q).unwrap();
                let lines = crate::geometry::singular_line_count(q, n as u32) as i128;
                assert_eq!(
                    lines - fm,
                    crate::code::claimed_min_distance(q, n as u32) as i128
                );
                assert_eq!(
                    closed_form_census(Case::One, n, q, 2 * n - 1, 1).unwrap().f,
                    fm
                );
                let (_, h2) = case4_h_endpoints(n, q).unwrap();
                let qi = q as i128;
                assert_eq!(h2, fm * (qi - 1) * (qi - 1) * (qi + 1));
            }
        }
    }

    #[test]
    fn f1_expanded_matches_census() {
        for n in 2..=5usize {
            for q in [3u64, 5] {
                let qi = q as i128;
                for (r, d) in formula_grid(n, Case::One) {
                    let c = closed_form_terms(Case::One, n, q, r, d).unwrap();
                    assert_eq!(
                        c.f * (qi + 1) * (qi - 1) * (qi - 1),
                        f1_scaled(n, q, r, d).unwrap(),
                        "({r},{d})"
                    );
                }
            }
        }
    }

    #[test]
    fn g_grid() {
        let (r, s, g) = g_argmax(3, 3).unwrap();
        assert_eq!((r, s, g), (5, 6, 157));
        assert!(g_and_h(3, 3, 3, 6).unwrap().g < 157);
        assert_eq!(g_argmax(4, 3).unwrap().0, 7);
        assert_eq!(g_argmax(4, 3).unwrap().1, 8);
        assert!(g_and_h(3, 3, 3, 3).is_err());
        let h = g_and_h(3, 3, 5, 6).unwrap();
        assert_eq!((h.h, h.h_at), (157, 6));
    }

    #[test]
    fn case4_endpoints() {
        for n in 2..=5usize {
            for q in [3u64, 5, 7] {
                let (h1, h2) = case4_h_endpoints(n, q).unwrap();
                let q2 = (q * q) as i128;
                assert_eq!(case4_bound(n, q, 1, 1).unwrap(), q2 * h1);
                assert_eq!(case4_bound(n, q, 2 * n - 1, 2 * n - 1).unwrap(), q2 * h2);
                assert!(h1 < h2);
            }
        }
    }

    #[test]
    fn table_maxima() {
        for (n, q) in [(3, 3), (3, 5), (4, 3), (4, 5), (5, 3)] {
            verify_table_maxima(n, q).unwrap();
        }
        assert!(verify_table_maxima(2, 3).is_err());
    }

    #[test]
    fn l11_small() {
        let f3 = f(3);
        let c = lemma_l11_counts(&f3, 2, 3, 1, FieldElement::ONE).unwrap();
        assert_eq!((c.claim1, c.claim1_formula), (12, 12));
        let f5 = f(5);
        let c = lemma_l11_counts(&f5, 3, 3, 1, f5.scalar(2)).unwrap();
        assert_eq!((c.claim1, c.claim1_formula), (30, 30));
        for (n, r, d) in [(3, 3, 1), (3, 1, 1), (4, 5, 1)] {
            let c = lemma_l11_counts(&f3, n, r, d, f3.scalar(2)).unwrap();
            assert_eq!(c.claim1, c.claim1_formula);
        }
        assert!(lemma_l11_counts(&f3, 2, 3, 2, FieldElement::ONE).is_err());
    }

    #[test]
    fn maxeig_examples() {
        let f3 = f(3);
        for (n, r, d, count) in [(3usize, 5usize, 1usize, 0u64), (3, 1, 1, 16), (2, 3, 1, 0)] {
            let p = CanonicalParams::new(n, r, d, Case::One).unwrap();
            let qs = QuadraticSpace::canonical(&f3, p).unwrap();
            let af = AlternatingForm::canonical(&f3, p, &FormOptions::default()).unwrap();
            let c = maxeig_bound_check(&qs, &af).unwrap();
            assert_eq!(c.count, count);
            assert!(c.holds);
            if count > 0 {
                assert_eq!(c.count, c.bound);
            }
        }
        let qs = QuadraticSpace::standard(&f3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let af = random_alternating_form(&f3, 5, &mut rng);
            assert!(maxeig_bound_check(&qs, &af).unwrap().holds);
        }
    }

    #[test]
    fn empirical_matches_closed_forms_small() {
        let f3 = f(3);
        for case in [Case::One, Case::Two, Case::Three] {
            for p in CanonicalParams::admissible(2, case) {
                let qs = QuadraticSpace::canonical(&f3, p).unwrap();
                let af = AlternatingForm::canonical(&f3, p, &FormOptions::default()).unwrap();
                let geom = PolarGeometry::new(&qs);
                let emp = empirical_census(&geom, &af).unwrap();
                let closed = closed_form_census(case, 2, 3, p.r, p.d).unwrap();
                assert_eq!(emp, closed, "{p:?}");
            }
        }
    }

    #[test]
    fn key_equation_on_random_forms() {
        let f3 = f(3);
        let qs = QuadraticSpace::standard(&f3, 2).unwrap();
        let geom = PolarGeometry::new(&qs);
        let rc = residue_constants(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let af = random_alternating_form(&f3, 5, &mut rng);
            let c = empirical_census(&geom, &af).unwrap();
            assert_eq!(c.total(), 40);
            assert_eq!(c.weighted_sum(&rc), 4 * c.f);
            assert_eq!(tau_sum(&geom, &af).unwrap(), 4 * c.f);
            let types = line_type_census(&geom, &af).unwrap();
            let (l, r) = flag_identity(&c, &types, 2, 3).unwrap();
            assert_eq!(l, r);
            assert!(c.f <= f1_max(2, 3).unwrap());
        }
    }
}
