//! Points of the quadric, totally singular lines and their Plücker images,
//! and the residue classes a pair `(eta, phi)` induces on them.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::forms::{AlternatingForm, QuadraticSpace};
use crate::matrix::Matrix;

/// Projective point, scaled so the first non-zero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Vec<FieldElement>);

impl ProjPoint {
    pub fn new(f: &FieldCtx, mut v: Vec<FieldElement>) -> Result<Self> {
        canonicalize(f, &mut v)?;
        Ok(Self(v))
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.0
    }
}

/// Scales `v` so its first non-zero entry is 1.
pub fn canonicalize(f: &FieldCtx, v: &mut [FieldElement]) -> Result<()> {
    let lead = v
        .iter()
        .position(|x| !x.is_zero())
        .ok_or(Error::ZeroVector)?;
    if v[lead] != FieldElement::ONE {
        let s = f.inv(v[lead])?;
        f.scale(s, v);
    }
    Ok(())
}

/// Index of the first non-zero coordinate.
pub fn lead(v: &[FieldElement]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Canonical representatives of `PG(dim-1, q)` in lexicographic order.
pub fn projective_points(f: &FieldCtx, dim: usize) -> ProjectivePoints {
    ProjectivePoints {
        q: f.q() as u16,
        dim,
        current: None,
        done: dim == 0,
    }
}

pub struct ProjectivePoints {
    q: u16,
    dim: usize,
    current: Option<Vec<FieldElement>>,
    done: bool,
}

impl Iterator for ProjectivePoints {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Vec<FieldElement>> {
        if self.done {
            return None;
        }
        let dim = self.dim;
        let v = match self.current.as_mut() {
            None => {
                let mut v = vec![FieldElement::ZERO; dim];
                v[dim - 1] = FieldElement::ONE;
                self.current = Some(v);
                return self.current.clone();
            }
            Some(v) => v,
        };
        let lead = lead(v).expect("points are non-zero");
        // odometer on the coordinates after the leading 1
        let mut i = dim;
        while i > lead + 1 {
            i -= 1;
            if v[i].value() + 1 < self.q {
                v[i] = FieldElement::from_value(v[i].value() + 1);
                return Some(v.clone());
            }
            v[i] = FieldElement::ZERO;
        }
        if lead == 0 {
            self.done = true;
            return None;
        }
        v[lead] = FieldElement::ZERO;
        v[lead - 1] = FieldElement::ONE;
        Some(v.clone())
    }
}

/// Lexicographic rank of a vector read as a base-`q` number.
pub fn point_code(f: &FieldCtx, v: &[FieldElement]) -> u128 {
    let q = f.q() as u128;
    v.iter().fold(0u128, |acc, x| acc * q + x.value() as u128)
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order; the Plücker coordinate order.
pub fn plucker_pairs(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim * dim.saturating_sub(1) / 2);
    for i in 0..dim {
        for j in i + 1..dim {
            out.push((i, j));
        }
    }
    out
}

/// `u_i v_j - u_j v_i` for `i < j`, unscaled.
pub fn plucker(f: &FieldCtx, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
    let dim = u.len();
    let mut out = Vec::with_capacity(dim * (dim - 1) / 2);
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i])));
        }
    }
    out
}

/// All singular points, lexicographically ordered.
pub fn quadric_points(qs: &QuadraticSpace) -> Vec<Vec<FieldElement>> {
    let f = qs.field();
    let g = qs.gram();
    projective_points(f, qs.dim())
        .filter(|p| g.bilinear(f, p, p).expect("dimensions match").is_zero())
        .collect()
}

/// A totally singular line given by its reduced echelon basis `(p1, p2)`,
/// `lead(p1) < lead(p2)` and `p1[lead(p2)] = 0`. The Plücker vector of such a
/// basis is already canonically scaled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLine {
    pub id: usize,
    pub p1: Vec<FieldElement>,
    pub p2: Vec<FieldElement>,
    pub plucker: Vec<FieldElement>,
}

impl SingularLine {
    /// `p2` followed by `p1 + t p2` in field order; all canonical.
    pub fn points(&self, f: &FieldCtx) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::with_capacity(f.q() as usize + 1);
        out.push(self.p2.clone());
        for t in f.enumerate() {
            let mut v = self.p1.clone();
            f.axpy(&mut v, t, &self.p2);
            out.push(v);
        }
        out
    }
}

/// Streams totally singular lines without storing them. Lines are grouped by
/// the index of their first echelon vector in the sorted singular point list,
/// so callers can split the work by that index.
#[derive(Clone, Debug)]
pub struct LineEnumerator {
    field: FieldCtx,
    points: Vec<Vec<FieldElement>>,
    images: Vec<Vec<FieldElement>>,
    leads: Vec<usize>,
}

impl LineEnumerator {
    pub fn new(qs: &QuadraticSpace) -> Self {
        let f = qs.field();
        let points = quadric_points(qs);
        let images = points
            .iter()
            .map(|p| qs.gram().mul_vec(f, p).expect("dimensions match"))
            .collect();
        let leads = points.iter().map(|p| lead(p).expect("non-zero")).collect();
        Self {
            field: f.clone(),
            points,
            images,
            leads,
        }
    }

    pub fn points(&self) -> &[Vec<FieldElement>] {
        &self.points
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Calls `visit(j)` for every singular point `points[j]` that together
    /// with `points[i]` forms the echelon basis of a totally singular line.
    pub fn for_each_partner(&self, i: usize, mut visit: impl FnMut(usize)) {
        let a = self.leads[i];
        let u = &self.points[i];
        let mu = &self.images[i];
        // points are sorted, so later leads come first in the list
        for j in 0..self.points.len() {
            let b = self.leads[j];
            if b <= a {
                break;
            }
            if !u[b].is_zero() {
                continue;
            }
            if self.field.dot(mu, &self.points[j]).is_zero() {
                visit(j);
            }
        }
    }

    /// Every line, as `(p1, p2)` index pairs in enumeration order.
    pub fn for_each_line(&self, mut visit: impl FnMut(usize, usize)) {
        for i in 0..self.points.len() {
            self.for_each_partner(i, |j| visit(i, j));
        }
    }

    pub fn count_lines(&self) -> u64 {
        let mut n = 0u64;
        self.for_each_line(|_, _| n += 1);
        n
    }
}

/// Expected number of singular points, `(q^{2n} - 1)/(q - 1)`.
pub fn quadric_point_count(q: u64, n: u32) -> u64 {
    (q.pow(2 * n) - 1) / (q - 1)
}

/// Expected number of lines through a singular point, `(q^{2n-2} - 1)/(q - 1)`.
pub fn lines_per_point(q: u64, n: u32) -> u64 {
    (q.pow(2 * n - 2) - 1) / (q - 1)
}

/// `N = (q^{2n-2} - 1)(q^{2n} - 1) / ((q^2 - 1)(q - 1))`.
pub fn singular_line_count(q: u64, n: u32) -> u64 {
    let num = (q.pow(2 * n - 2) as u128 - 1) * (q.pow(2 * n) as u128 - 1);
    (num / ((q as u128 * q as u128 - 1) * (q as u128 - 1))) as u64
}

/// Points and lines of the polar space with incidences.
#[derive(Clone, Debug)]
pub struct PolarGeometry {
    qs: QuadraticSpace,
    points: Vec<Vec<FieldElement>>,
    codes: Vec<u128>,
    lines: Vec<SingularLine>,
    /// `q + 1` point indices per line, in `SingularLine::points` order.
    line_points: Vec<u32>,
    point_offsets: Vec<u32>,
    point_lines: Vec<u32>,
}

impl PolarGeometry {
    pub fn new(qs: &QuadraticSpace) -> Self {
        let f = qs.field();
        let lines_enum = LineEnumerator::new(qs);
        let mut pairs = Vec::new();
        lines_enum.for_each_line(|i, j| pairs.push((i, j)));
        let points = lines_enum.points;
        let mut lines: Vec<SingularLine> = pairs
            .into_iter()
            .map(|(i, j)| SingularLine {
                id: 0,
                plucker: plucker(f, &points[i], &points[j]),
                p1: points[i].clone(),
                p2: points[j].clone(),
            })
            .collect();
        lines.sort_by(|a, b| a.plucker.cmp(&b.plucker));
        for (id, l) in lines.iter_mut().enumerate() {
            l.id = id;
        }

        let codes: Vec<u128> = points.iter().map(|p| point_code(f, p)).collect();
        let stride = f.q() as usize + 1;
        let mut line_points = Vec::with_capacity(lines.len() * stride);
        let mut degree = vec![0u32; points.len()];
        for l in &lines {
            for p in l.points(f) {
                let idx = codes
                    .binary_search(&point_code(f, &p))
                    .expect("line points lie on the quadric");
                degree[idx] += 1;
                line_points.push(idx as u32);
            }
        }
        let mut point_offsets = Vec::with_capacity(points.len() + 1);
        point_offsets.push(0u32);
        for d in &degree {
            point_offsets.push(point_offsets.last().unwrap() + d);
        }
        let mut fill = point_offsets.clone();
        let mut point_lines = vec![0u32; line_points.len()];
        for (li, chunk) in line_points.chunks(stride).enumerate() {
            for &p in chunk {
                point_lines[fill[p as usize] as usize] = li as u32;
                fill[p as usize] += 1;
            }
        }
        Self {
            qs: qs.clone(),
            points,
            codes,
            lines,
            line_points,
            point_offsets,
            point_lines,
        }
    }

    pub fn quadratic_space(&self) -> &QuadraticSpace {
        &self.qs
    }

    pub fn field(&self) -> &FieldCtx {
        self.qs.field()
    }

    pub fn points(&self) -> &[Vec<FieldElement>] {
        &self.points
    }

    pub fn lines(&self) -> &[SingularLine] {
        &self.lines
    }

    /// Index of a point of the quadric; `v` need not be canonical.
    pub fn point_index(&self, v: &[FieldElement]) -> Result<usize> {
        let mut w = v.to_vec();
        canonicalize(self.field(), &mut w)?;
        self.codes
            .binary_search(&point_code(self.field(), &w))
            .map_err(|_| Error::NotOnQuadric)
    }

    pub fn line_point_indices(&self, line: usize) -> &[u32] {
        let stride = self.field().q() as usize + 1;
        &self.line_points[line * stride..(line + 1) * stride]
    }

    pub fn line_indices_through(&self, point: usize) -> &[u32] {
        &self.point_lines
            [self.point_offsets[point] as usize..self.point_offsets[point + 1] as usize]
    }

    pub fn lines_through(&self, p: &[FieldElement]) -> Result<Vec<&SingularLine>> {
        let idx = self.point_index(p)?;
        Ok(self
            .line_indices_through(idx)
            .iter()
            .map(|&l| &self.lines[l as usize])
            .collect())
    }

    /// Whether each line is totally isotropic for `af`.
    pub fn isotropic_lines(&self, af: &AlternatingForm) -> Vec<bool> {
        let f = self.field();
        let s = af.matrix();
        self.lines
            .iter()
            .map(|l| {
                s.bilinear(f, &l.p1, &l.p2)
                    .expect("dimensions match")
                    .is_zero()
            })
            .collect()
    }

    /// `tau(p)`: totally singular lines through `p` that are totally isotropic.
    pub fn tau(&self, af: &AlternatingForm, p: &[FieldElement]) -> Result<u64> {
        let f = self.field();
        let idx = self.point_index(p)?;
        let p = &self.points[idx];
        let sp = af.matrix().mul_vec(f, p)?;
        Ok(self
            .line_indices_through(idx)
            .iter()
            .filter(|&&l| {
                let l = &self.lines[l as usize];
                f.dot(&sp, &l.p1).is_zero() && f.dot(&sp, &l.p2).is_zero()
            })
            .count() as u64)
    }

    /// Residue class of every point, in point order.
    pub fn classes(&self, pair: &FormPair) -> Vec<ResidueClass> {
        self.points
            .iter()
            .map(|p| pair.residue_class_unchecked(p))
            .collect()
    }

    /// Class triple of a line from precomputed point classes.
    pub fn line_type(&self, classes: &[ResidueClass], line: usize) -> Result<LineType> {
        let (mut plus, mut w, mut minus) = (0usize, 0usize, 0usize);
        for &p in self.line_point_indices(line) {
            match classes[p as usize] {
                ResidueClass::Plus => plus += 1,
                ResidueClass::Minus => minus += 1,
                _ => w += 1,
            }
        }
        LineType::from_counts(self.field().q(), plus, w, minus)
    }
}

/// Residue classes of singular points with respect to `(eta, phi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResidueClass {
    /// `Sp = 0`.
    PA,
    /// `Sp = lambda Mp` with `lambda != 0`.
    PB,
    Plus,
    Zero,
    Minus,
}

impl ResidueClass {
    /// `p^T W p = 0`.
    pub fn on_w(self) -> bool {
        matches!(
            self,
            ResidueClass::PA | ResidueClass::PB | ResidueClass::Zero
        )
    }
}

/// A quadratic space together with an alternating form and the cached
/// matrices the residue classification needs.
#[derive(Clone, Debug)]
pub struct FormPair<'a> {
    qs: &'a QuadraticSpace,
    af: &'a AlternatingForm,
    /// `M^{-1} S`.
    m_inv_s: Matrix,
    /// `W = S M^{-1} S`.
    w: Matrix,
}

impl<'a> FormPair<'a> {
    pub fn new(qs: &'a QuadraticSpace, af: &'a AlternatingForm) -> Result<Self> {
        if af.dim() != qs.dim() {
            return Err(Error::DimensionMismatch {
                expected: qs.dim(),
                found: af.dim(),
            });
        }
        let f = qs.field();
        let m_inv_s = qs.gram_inv().mul(f, af.matrix())?;
        let w = af.matrix().mul(f, &m_inv_s)?;
        Ok(Self { qs, af, m_inv_s, w })
    }

    pub fn quadratic_space(&self) -> &QuadraticSpace {
        self.qs
    }

    pub fn form(&self) -> &AlternatingForm {
        self.af
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn m_inv_s(&self) -> &Matrix {
        &self.m_inv_s
    }

    pub fn residue_class(&self, p: &[FieldElement]) -> Result<ResidueClass> {
        if p.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        if !self.qs.eval(p)?.is_zero() {
            return Err(Error::NotOnQuadric);
        }
        Ok(self.residue_class_unchecked(p))
    }

    fn residue_class_unchecked(&self, p: &[FieldElement]) -> ResidueClass {
        let f = self.qs.field();
        let t = self.m_inv_s.mul_vec(f, p).expect("dimensions match");
        if t.iter().all(|x| x.is_zero()) {
            return ResidueClass::PA;
        }
        let i = lead(p).expect("non-zero point");
        let lambda = f.div(t[i], p[i]).expect("p[i] is non-zero");
        if !lambda.is_zero() && t.iter().zip(p).all(|(&ti, &pi)| ti == f.mul(lambda, pi)) {
            return ResidueClass::PB;
        }
        // (Sp)^T M^{-1} S p = -p^T S M^{-1} S p
        let w = f.neg(f.dot(
            &self.af.matrix().mul_vec(f, p).expect("dimensions match"),
            &t,
        ));
        if w.is_zero() {
            return ResidueClass::Zero;
        }
        let plus = f.is_square(f.neg(w));
        if plus == self.qs.external_is_square() {
            ResidueClass::Plus
        } else {
            ResidueClass::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineTag {
    T0,
    TPlus,
    TAlpha,
    TBeta,
    TMinus,
}

impl LineTag {
    pub const ALL: [LineTag; 5] = [
        LineTag::T0,
        LineTag::TPlus,
        LineTag::TAlpha,
        LineTag::TBeta,
        LineTag::TMinus,
    ];

    /// `(#P+, #W, #P-)` for this type.
    pub fn counts(self, q: u32) -> (usize, usize, usize) {
        let q = q as usize;
        match self {
            LineTag::T0 => (0, q + 1, 0),
            LineTag::TPlus => (q, 1, 0),
            LineTag::TAlpha => (q.div_ceil(2), 0, q.div_ceil(2)),
            LineTag::TBeta => ((q - 1) / 2, 2, (q - 1) / 2),
            LineTag::TMinus => (0, 1, q),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineType {
    pub tag: LineTag,
    pub n_plus: usize,
    pub n_w: usize,
    pub n_minus: usize,
}

impl LineType {
    pub fn from_counts(q: u32, plus: usize, w: usize, minus: usize) -> Result<Self> {
        LineTag::ALL
            .into_iter()
            .find(|t| t.counts(q) == (plus, w, minus))
            .map(|tag| Self {
                tag,
                n_plus: plus,
                n_w: w,
                n_minus: minus,
            })
            .ok_or(Error::TypeNotInTable { plus, w, minus })
    }
}
