//! The line polar Grassmann code `P(n,2)`.
//!
//! Columns of the generator are the Plücker vectors of the totally singular
//! lines. A message `m` of length `C(2n+1, 2)` is the same thing as an
//! alternating form with `S_ij = m_(i,j)` for `i < j`; the codeword entry at a
//! line `<p1, p2>` is then `p1^T S p2`, and the zeros of the codeword are the
//! lines that are totally isotropic for the form.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::forms::{AlternatingForm, CanonicalParams, Case, FormOptions, QuadraticSpace};
use crate::geometry::{LineEnumerator, PolarGeometry};
use crate::matrix::Matrix;
use crate::sample::random_alternating_form;

/// Default number of message evaluations `min_distance_exact` accepts.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Samples drawn from one RNG stream in `min_distance_certified`.
pub const SAMPLE_BLOCK: u64 = 256;

/// `q^{4n-5} - q^{3n-4}`, `n >= 2`.
pub fn claimed_min_distance(q: u64, n: u32) -> u64 {
    q.pow(4 * n - 5) - q.pow(3 * n - 4)
}

/// The general lower bound `q^{2n-3} + q^{2n-4} - q` for line codes.
pub fn general_lower_bound(q: u64, n: u32) -> u64 {
    q.pow(2 * n - 3) + q.pow(2 * n - 4) - q
}

/// `C(2n+1, 2)`.
pub fn ambient_dimension(n: usize) -> usize {
    (2 * n + 1) * (2 * n) / 2
}

/// Number of messages up to scalars, `(q^k - 1)/(q - 1)`.
pub fn message_count(q: u32, k: usize) -> u128 {
    let q = q as u128;
    (q.pow(k as u32) - 1) / (q - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub q: u32,
    pub length: usize,
    pub dimension: usize,
    pub d_claimed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub values: Vec<FieldElement>,
    pub weight: usize,
}

impl Codeword {
    fn new(values: Vec<FieldElement>) -> Self {
        let weight = values.iter().filter(|x| !x.is_zero()).count();
        Self { values, weight }
    }
}

/// Upper triangle of `S` in Plücker order.
pub fn message_from_form(s: &Matrix) -> Vec<FieldElement> {
    let dim = s.rows();
    let mut m = Vec::with_capacity(dim * (dim - 1) / 2);
    for i in 0..dim {
        for j in i + 1..dim {
            m.push(s.get(i, j));
        }
    }
    m
}

/// Inverse of `message_from_form`.
pub fn form_from_message(f: &FieldCtx, dim: usize, m: &[FieldElement]) -> Result<Matrix> {
    if m.len() != dim * (dim - 1) / 2 {
        return Err(Error::DimensionMismatch {
            expected: dim * (dim - 1) / 2,
            found: m.len(),
        });
    }
    let mut s = Matrix::zeros(dim, dim);
    let mut k = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            s.set(i, j, m[k]);
            s.set(j, i, f.neg(m[k]));
            k += 1;
        }
    }
    Ok(s)
}

/// The alternating form of a minimum weight codeword: the canonical pair
/// with a radical of dimension `2n - 1` meeting the quadric in a cone with a
/// point vertex.
pub fn minimum_weight_form(f: &FieldCtx, n: usize) -> Result<(QuadraticSpace, AlternatingForm)> {
    let p = CanonicalParams::new(n, 2 * n - 1, 1, Case::One)?;
    Ok((
        QuadraticSpace::canonical(f, p)?,
        AlternatingForm::canonical(f, p, &FormOptions::default())?,
    ))
}

#[derive(Clone, Debug)]
pub struct PolarCode {
    geometry: PolarGeometry,
    generator: Matrix,
    params: CodeParams,
}

impl PolarCode {
    pub fn build(qs: &QuadraticSpace) -> Result<Self> {
        let n = qs.n();
        if n < 2 {
            return Err(Error::InadmissibleParams(alloc::format!(
                "the code needs n >= 2, got {n}"
            )));
        }
        let f = qs.field();
        let geometry = PolarGeometry::new(qs);
        let k_amb = ambient_dimension(n);
        let len = geometry.lines().len();
        let mut generator = Matrix::zeros(k_amb, len);
        for (c, l) in geometry.lines().iter().enumerate() {
            for (r, &x) in l.plucker.iter().enumerate() {
                generator.set(r, c, x);
            }
        }
        let rank = generator.rank(f);
        if rank != k_amb {
            return Err(Error::RankDeficient {
                rank,
                expected: k_amb,
            });
        }
        let params = CodeParams {
            n,
            q: f.q(),
            length: len,
            dimension: rank,
            d_claimed: claimed_min_distance(f.q() as u64, n as u32),
        };
        Ok(Self {
            geometry,
            generator,
            params,
        })
    }

    /// Code of the canonical quadric `Q(2n, q)`.
    pub fn standard(f: &FieldCtx, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InadmissibleParams(alloc::format!(
                "the code needs n >= 2, got {n}"
            )));
        }
        Self::build(&QuadraticSpace::standard(f, n)?)
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn field(&self) -> &FieldCtx {
        self.geometry.field()
    }

    pub fn geometry(&self) -> &PolarGeometry {
        &self.geometry
    }

    pub fn quadratic_space(&self) -> &QuadraticSpace {
        self.geometry.quadratic_space()
    }

    /// `C(2n+1, 2) x N`, unreduced; row `(i, j)` holds the Plücker coordinate.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Non-zero rows of the reduced echelon form of the generator.
    pub fn systematic_generator(&self) -> Matrix {
        let (r, pivots) = self.generator.rref(self.field());
        r.submatrix(
            &(0..pivots.len()).collect::<Vec<_>>(),
            &(0..r.cols()).collect::<Vec<_>>(),
        )
    }

    fn check_message(&self, m: &[FieldElement]) -> Result<()> {
        if m.len() != self.generator.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.generator.rows(),
                found: m.len(),
            });
        }
        if m.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroMessage);
        }
        Ok(())
    }

    pub fn codeword_of_message(&self, m: &[FieldElement]) -> Result<Codeword> {
        self.check_message(m)?;
        let f = self.field();
        Ok(Codeword::new(
            self.geometry
                .lines()
                .iter()
                .map(|l| f.dot(m, &l.plucker))
                .collect(),
        ))
    }

    pub fn weight_of_message(&self, m: &[FieldElement]) -> Result<usize> {
        self.check_message(m)?;
        let f = self.field();
        Ok(self
            .geometry
            .lines()
            .iter()
            .filter(|l| !f.dot(m, &l.plucker).is_zero())
            .count())
    }

    /// Entry `p1^T S p2` at every line.
    pub fn codeword_from_form(&self, af: &AlternatingForm) -> Result<Codeword> {
        let dim = self.quadratic_space().dim();
        if af.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: af.dim(),
            });
        }
        let f = self.field();
        let s = af.matrix();
        let values = self
            .geometry
            .lines()
            .iter()
            .map(|l| s.bilinear(f, &l.p1, &l.p2))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codeword::new(values))
    }

    /// Header `N K q n`, the generator rows, then `# d_claimed <d>`.
    pub fn export_text(&self) -> String {
        let p = self.params;
        let mut out = format!("{} {} {} {}\n", p.length, p.dimension, p.q, p.n);
        for i in 0..self.generator.rows() {
            let row: Vec<String> = self
                .generator
                .row(i)
                .iter()
                .map(|x| x.value().to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str(&format!("# d_claimed {}\n", p.d_claimed));
        out
    }

    pub fn message_space(&self) -> MessageSpace {
        MessageSpace {
            q: self.params.q,
            k: self.generator.rows(),
        }
    }

    /// Calls `visit(index, codeword)` for every canonical message with index
    /// in `start..end` (see `MessageSpace`), updating the codeword one
    /// generator row at a time.
    pub fn scan_messages(
        &self,
        start: u128,
        end: u128,
        mut visit: impl FnMut(u128, &[FieldElement]),
    ) {
        let f = self.field();
        let space = self.message_space();
        let end = end.min(space.total());
        let q = self.params.q as u16;
        let k = space.k;
        let rows: Vec<&[FieldElement]> = (0..k).map(|i| self.generator.row(i)).collect();
        let mut index = start;
        while index < end {
            let (lead, local) = space.locate(index);
            let block_end = (index - local + space.block_size(lead)).min(end);
            let mut digits = space.digits(lead, local);
            let mut c = vec![FieldElement::ZERO; self.params.length];
            f.axpy(&mut c, FieldElement::ONE, rows[lead]);
            for (j, &d) in digits.iter().enumerate() {
                f.axpy(&mut c, FieldElement::from_value(d), rows[lead + 1 + j]);
            }
            loop {
                visit(index, &c);
                index += 1;
                if index >= block_end {
                    break;
                }
                // odometer step, least significant digit last
                let mut j = digits.len();
                while j > 0 {
                    j -= 1;
                    let old = FieldElement::from_value(digits[j]);
                    let new_value = if digits[j] + 1 == q { 0 } else { digits[j] + 1 };
                    digits[j] = new_value;
                    let delta = f.sub(FieldElement::from_value(new_value), old);
                    f.axpy(&mut c, delta, rows[lead + 1 + j]);
                    if new_value != 0 {
                        break;
                    }
                }
            }
        }
    }

    /// Smallest weight in `start..end`, with the first index attaining it.
    pub fn min_weight_in_range(&self, start: u128, end: u128) -> Option<(usize, u128)> {
        let mut best: Option<(usize, u128)> = None;
        self.scan_messages(start, end, |idx, c| {
            let w = c.iter().filter(|x| !x.is_zero()).count();
            if best.is_none_or(|(bw, _)| w < bw) {
                best = Some((w, idx));
            }
        });
        best
    }

    /// Exhaustive minimum over all messages up to scalars.
    pub fn min_distance_exact(&self, budget: u128) -> Result<ExactMinimum> {
        let total = self.message_space().total();
        if total > budget {
            return Err(Error::BudgetExceeded {
                required: total,
                budget,
            });
        }
        let (d_min, index) = self
            .min_weight_in_range(0, total)
            .expect("at least one message");
        Ok(ExactMinimum {
            d_min: d_min as u64,
            witness: self.message_space().message(index),
            messages: total,
        })
    }

    /// Weight of the canonical minimum weight form, when the code was built
    /// on the canonical quadric.
    pub fn canonical_upper_bound(&self) -> Result<u64> {
        let f = self.field();
        let (qs, af) = minimum_weight_form(f, self.params.n)?;
        if qs.gram() != self.quadratic_space().gram() {
            return Err(Error::InadmissibleParams(
                "the code is not built on the canonical quadric".into(),
            ));
        }
        Ok(self.codeword_from_form(&af)?.weight as u64)
    }

    /// Draws `count` forms from stream `block` of `seed`. Returns the smallest
    /// weight seen; a weight below the claimed minimum is an error carrying
    /// the form.
    pub fn sample_block(&self, seed: u64, block: u64, count: u64) -> Result<u64> {
        let f = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let dim = self.quadratic_space().dim();
        let mut best = u64::MAX;
        for _ in 0..count {
            let af = random_alternating_form(f, dim, &mut rng);
            let w = self.weight_of_message(&message_from_form(af.matrix()))? as u64;
            if w < self.params.d_claimed {
                return Err(Error::CounterexampleFound {
                    weight: w as usize,
                    claimed: self.params.d_claimed,
                    form: af.matrix().clone(),
                });
            }
            best = best.min(w);
        }
        Ok(best)
    }

    /// Sampling certificate: the canonical upper bound plus `samples` random
    /// forms, none of which may fall below the claimed minimum.
    pub fn min_distance_certified(&self, samples: u64, seed: u64) -> Result<CertifiedMinimum> {
        let upper_bound = self.canonical_upper_bound()?;
        let mut min_sampled = None::<u64>;
        let blocks = samples.div_ceil(SAMPLE_BLOCK);
        for b in 0..blocks {
            let count = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
            let w = self.sample_block(seed, b, count)?;
            min_sampled = Some(min_sampled.map_or(w, |m| m.min(w)));
        }
        Ok(CertifiedMinimum {
            upper_bound,
            claimed: self.params.d_claimed,
            samples_checked: samples,
            min_sampled,
        })
    }
}

/// A generator read back from `export_text`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportedCode {
    pub params: CodeParams,
    pub generator: Matrix,
}

impl ExportedCode {
    pub fn parse_text(text: &str) -> Result<(FieldCtx, Self)> {
        let malformed = |m: String| Error::Malformed(m);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header: Vec<u64> = numbers(
            lines
                .next()
                .ok_or_else(|| malformed("empty code file".into()))?,
        )?;
        let [length, dimension, q, n] = header[..] else {
            return Err(malformed("header is not `N K q n`".into()));
        };
        let f = FieldCtx::with_order(
            u32::try_from(q).map_err(|_| malformed(format!("q = {q} too large")))?,
        )?;
        let (length, n) = (length as usize, n as usize);
        let rows = ambient_dimension(n);
        let mut data = Vec::with_capacity(rows * length);
        let mut d_claimed = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("d_claimed") {
                    let v = it.next().and_then(|t| t.parse().ok());
                    d_claimed = Some(v.ok_or_else(|| malformed("bad d_claimed line".into()))?);
                }
                continue;
            }
            let row = numbers(line)?;
            if row.len() != length {
                return Err(malformed(format!(
                    "row of {} entries, expected {length}",
                    row.len()
                )));
            }
            for v in row {
                data.push(f.element(v)?);
            }
        }
        if data.len() != rows * length {
            return Err(malformed(format!(
                "{} rows, expected {rows}",
                data.len() / length.max(1)
            )));
        }
        let generator = Matrix::from_data(rows, length, data)?;
        let params = CodeParams {
            n,
            q: f.q(),
            length,
            dimension: dimension as usize,
            d_claimed: d_claimed.ok_or_else(|| malformed("missing d_claimed".into()))?,
        };
        Ok((f, Self { params, generator }))
    }
}

fn numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Malformed(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMinimum {
    pub d_min: u64,
    pub witness: Vec<FieldElement>,
    pub messages: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifiedMinimum {
    pub upper_bound: u64,
    pub claimed: u64,
    pub samples_checked: u64,
    pub min_sampled: Option<u64>,
}

/// Canonical messages (first non-zero entry 1) of length `k`, indexed in
/// lexicographic order: the block with leading position `k-1` comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MessageSpace {
    pub q: u32,
    pub k: usize,
}

impl MessageSpace {
    pub fn total(&self) -> u128 {
        message_count(self.q, self.k)
    }

    pub fn block_size(&self, lead: usize) -> u128 {
        (self.q as u128).pow((self.k - 1 - lead) as u32)
    }

    /// `(lead, index within block)`.
    pub fn locate(&self, index: u128) -> (usize, u128) {
        let mut offset = 0u128;
        for lead in (0..self.k).rev() {
            let size = self.block_size(lead);
            if index < offset + size {
                return (lead, index - offset);
            }
            offset += size;
        }
        panic!("message index {index} out of range");
    }

    /// Digits of the free positions `lead+1..k`, most significant first.
    fn digits(&self, lead: usize, mut local: u128) -> Vec<u16> {
        let len = self.k - 1 - lead;
        let mut d = vec![0u16; len];
        for j in (0..len).rev() {
            d[j] = (local % self.q as u128) as u16;
            local /= self.q as u128;
        }
        d
    }

    pub fn message(&self, index: u128) -> Vec<FieldElement> {
        let (lead, local) = self.locate(index);
        let mut m = vec![FieldElement::ZERO; self.k];
        m[lead] = FieldElement::ONE;
        for (j, d) in self.digits(lead, local).into_iter().enumerate() {
            m[lead + 1 + j] = FieldElement::from_value(d);
        }
        m
    }
}

/// Weight of the codeword of `af` without storing the lines. Lines are
/// visited by their first echelon point, so `for_each_partner` ranges can be
/// split across workers by the caller.
pub fn streaming_weight(
    lines: &LineEnumerator,
    af: &AlternatingForm,
    first: core::ops::Range<usize>,
) -> Result<u64> {
    let pts = lines.points();
    let f = af_field_check(lines, af)?;
    let mut weight = 0u64;
    for i in first {
        let sp = af.matrix().mul_vec(&f, &pts[i])?;
        lines.for_each_partner(i, |j| {
            if !f.dot(&sp, &pts[j]).is_zero() {
                weight += 1;
            }
        });
    }
    Ok(weight)
}

fn af_field_check(lines: &LineEnumerator, af: &AlternatingForm) -> Result<FieldCtx> {
    let dim = lines.points().first().map_or(0, Vec::len);
    if af.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: af.dim(),
        });
    }
    Ok(lines.field().clone())
}
