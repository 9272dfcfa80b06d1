//! Matrix-unit families, `(a, m)`-independence, decomposition of an element
//! into full matrix blocks, blow-up and merging of matricial subalgebras, the
//! doubling tower `M_{2^k}(K)` and determinant-one approximation.

use num_rational::Rational64;
use rand::Rng;

use crate::conjugacy::conjugate_idempotents;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{is_independent, Idempotent, RightIdeal};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::rng::RandomSource;

/// Matrix units `s_ij` (`0 ≤ i, j < d`) with `s_ij s_kl = δ_jk s_il` and
/// `Σ s_ii` equal to a unit idempotent (the identity for a unital family, a
/// corner unit otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixUnitFamily {
    identity: Idempotent,
    d: usize,
    units: Vec<Matrix>,
}

impl MatrixUnitFamily {
    /// Builds a family from row-major units, checking the axioms against the
    /// given unit idempotent.
    pub fn new(identity: Idempotent, d: usize, units: Vec<Matrix>) -> Result<Self> {
        if d == 0 || units.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrix units, got {}",
                d * d,
                units.len()
            )));
        }
        for u in &units {
            identity.matrix().check_compatible(u)?;
        }
        let fam = MatrixUnitFamily { identity, d, units };
        fam.check_axioms()?;
        Ok(fam)
    }

    /// Family from trusted units (checked in debug builds).
    fn from_parts(identity: Idempotent, d: usize, units: Vec<Matrix>) -> Self {
        let fam = MatrixUnitFamily { identity, d, units };
        debug_assert!(fam.check_axioms().is_ok());
        fam
    }

    /// Verifies the matrix-unit relations and the unit sum.
    pub fn check_axioms(&self) -> Result<()> {
        let d = self.d;
        let zero = Matrix::zeros(self.field(), self.n(), self.n());
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let prod = self.unit(i, j).mul(self.unit(k, l));
                        let expected = if j == k { self.unit(i, l) } else { &zero };
                        if prod != *expected {
                            return Err(Error::Precondition(format!(
                                "matrix-unit relation fails at s{}{} s{}{}",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            )));
                        }
                    }
                }
            }
        }
        let sum = (0..d).fold(zero.clone(), |acc, i| acc.add(self.unit(i, i)));
        if sum != *self.identity.matrix() {
            return Err(Error::Precondition(
                "diagonal matrix units do not sum to the unit".into(),
            ));
        }
        Ok(())
    }

    /// The unit `s_ij` (zero-based).
    pub fn unit(&self, i: usize, j: usize) -> &Matrix {
        &self.units[i * self.d + j]
    }

    /// All units in row-major order.
    pub fn units(&self) -> &[Matrix] {
        &self.units
    }

    /// Inner size `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient side.
    pub fn n(&self) -> usize {
        self.identity.n()
    }

    /// Coefficient field.
    pub fn field(&self) -> Field {
        self.identity.field()
    }

    /// `Σ s_ii`.
    pub fn identity(&self) -> &Idempotent {
        &self.identity
    }

    /// `(a_ij) ↦ Σ a_ij s_ij`.
    pub fn embed(&self, a: &Matrix) -> Result<Matrix> {
        if a.rows() != self.d || a.cols() != self.d || a.field() != self.field() {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix over {1}",
                self.d,
                self.field()
            )));
        }
        let f = self.field();
        let mut out = Matrix::zeros(f, self.n(), self.n());
        for i in 0..self.d {
            for j in 0..self.d {
                let c = a.get(i, j);
                if !c.is_zero() {
                    out = out.add(&self.unit(i, j).scale(c));
                }
            }
        }
        Ok(out)
    }

    /// Coordinates `(a_ij)` with `x = Σ a_ij s_ij`, if `x` lies in the span of
    /// the family.
    pub fn coordinates(&self, x: &Matrix) -> Option<Matrix> {
        let f = self.field();
        let s11 = self.unit(0, 0);
        let (r, c) = (0..self.n())
            .flat_map(|r| (0..self.n()).map(move |c| (r, c)))
            .find(|&(r, c)| !s11.get(r, c).is_zero())?;
        let pivot = s11.get(r, c).clone();
        let mut coords = Matrix::zeros(f, self.d, self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                let y = self.unit(0, i).mul(x).mul(self.unit(j, 0));
                coords.set(i, j, f.div(y.get(r, c), &pivot).expect("nonzero pivot"));
            }
        }
        (self.embed(&coords).ok()? == *x).then_some(coords)
    }

    /// Whether every unit of `other` lies in the span of this family.
    pub fn contains_span_of(&self, other: &MatrixUnitFamily) -> bool {
        other.units.iter().all(|u| self.coordinates(u).is_some())
    }
}

fn rows_at_pivots(e: &Idempotent) -> (Matrix, Matrix) {
    let image = e.image();
    (
        image.basis().clone(),
        e.matrix().select_rows(&image.pivots()),
    )
}

/// Matrix units inside the corner `unit R unit` with `s_ii = e_i`, for
/// pairwise orthogonal equal-rank idempotents summing to `unit`.
///
/// With `B_i` the canonical basis of `e_i R` and `C_i` the rows of `e_i` at
/// the pivots of `B_i` (so `e_i = B_i C_i` and `C_i B_j = δ_ij`), the family is
/// `s_ij = B_i C_j`.
pub fn complete_matrix_units_in(unit: &Idempotent, es: &[Idempotent]) -> Result<MatrixUnitFamily> {
    let Some(first) = es.first() else {
        return Err(Error::Precondition("empty idempotent family".into()));
    };
    for e in es {
        unit.matrix().check_compatible(e.matrix())?;
        if e.rank() != first.rank() {
            return Err(Error::RankMismatch(first.rank(), e.rank()));
        }
    }
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            if !e.orthogonal(f) {
                return Err(Error::Precondition(
                    "idempotents are not pairwise orthogonal".into(),
                ));
            }
        }
    }
    let sum = es
        .iter()
        .skip(1)
        .fold(first.matrix().clone(), |acc, e| acc.add(e.matrix()));
    if sum != *unit.matrix() {
        return Err(Error::Precondition(
            "idempotents do not sum to the unit".into(),
        ));
    }
    let parts: Vec<(Matrix, Matrix)> = es.iter().map(rows_at_pivots).collect();
    let d = es.len();
    let units = (0..d * d)
        .map(|k| parts[k / d].0.mul(&parts[k % d].1))
        .collect();
    Ok(MatrixUnitFamily::from_parts(unit.clone(), d, units))
}

/// Matrix units with `s_ii = e_i` for a complete orthogonal family of
/// equal-rank idempotents.
pub fn complete_matrix_units(es: &[Idempotent]) -> Result<MatrixUnitFamily> {
    let Some(first) = es.first() else {
        return Err(Error::Precondition("empty idempotent family".into()));
    };
    complete_matrix_units_in(&Idempotent::one(first.field(), first.n()), es)
}

/// `Σ a_ij s_ij`.
pub fn embed_matrix_algebra(fam: &MatrixUnitFamily, a: &Matrix) -> Result<Matrix> {
    fam.embed(a)
}

/// Whether `(I, aI, ..., a^{m-1} I, J)` is independent.
pub fn am_independent(i: &RightIdeal, j: &RightIdeal, a: &Matrix, m: usize) -> bool {
    let mut family = Vec::with_capacity(m + 1);
    let mut current = i.clone();
    for _ in 0..m {
        let next = current.image_under(a);
        family.push(current);
        current = next;
    }
    family.push(j.clone());
    is_independent(&family)
}

/// Result of [`max_am_independent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentExtension {
    /// The maximal `I`.
    pub ideal: RightIdeal,
    /// Whether `J_1 = I ⊕ aI ⊕ ... ⊕ a^{m-1} I ⊕ J`.
    pub spans: bool,
}

fn krylov(a: &Matrix, v: &Matrix, m: usize) -> Matrix {
    let mut cols = v.clone();
    let mut cur = v.clone();
    for _ in 1..m {
        cur = a.mul(&cur);
        cols = cols.hcat(&cur);
    }
    cols
}

/// A maximal `I ⊆ J_1` with `(I, J)` `(a, m)`-independent, found by greedy
/// single-vector extension.
///
/// Requires `J ⊆ J_1`, `aJ ⊆ J` and `aJ_1 ⊆ J_1`. Candidates are the canonical
/// basis of `J_1` followed by seeded random combinations. A first pass keeps
/// `v` only if `v, av, ..., a^{m-1}v` are independent modulo the current sum;
/// a second pass keeps any `v` that preserves independence.
pub fn max_am_independent(
    a: &Matrix,
    m: usize,
    j: &RightIdeal,
    j1: &RightIdeal,
) -> Result<IndependentExtension> {
    let (field, n) = (a.field(), a.n());
    if j.n() != n || j1.n() != n || j.field() != field || j1.field() != field {
        return Err(Error::DimensionMismatch(
            "ideals and element differ in size".into(),
        ));
    }
    if !j1.contains(j) {
        return Err(Error::Precondition("J is not contained in J1".into()));
    }
    if !j.contains(&j.image_under(a)) || !j1.contains(&j1.image_under(a)) {
        return Err(Error::Precondition("J and J1 must be a-invariant".into()));
    }
    if m == 0 {
        return Ok(IndependentExtension {
            ideal: j1.clone(),
            spans: j1 == j,
        });
    }
    let mut candidates: Vec<Matrix> = (0..j1.dim())
        .map(|c| j1.basis().select_columns(&[c]))
        .collect();
    let mut rng = RandomSource::new(0);
    for _ in 0..4 * j1.dim() {
        let coeffs = Matrix::random(field, j1.dim(), 1, &mut rng);
        candidates.push(j1.basis().mul(&coeffs));
    }
    let mut ideal = RightIdeal::zero(field, n);
    let mut span = j.clone();
    for v in &candidates {
        let next = RightIdeal::from_columns(&span.basis().hcat(&krylov(a, v, m)));
        if next.dim() == span.dim() + m {
            ideal = RightIdeal::from_columns(&ideal.basis().hcat(v));
            span = next;
        }
    }
    for v in &candidates {
        if ideal.contains_vector(&v.column(0)) {
            continue;
        }
        let trial = RightIdeal::from_columns(&ideal.basis().hcat(v));
        if am_independent(&trial, j, a, m) {
            ideal = trial;
        }
    }
    let mut total = j.clone();
    let mut cur = ideal.clone();
    for _ in 0..m {
        total = total.sum(&cur)?;
        cur = cur.image_under(a);
    }
    let spans = total == *j1 && am_independent(&ideal, j, a, m);
    Ok(IndependentExtension { ideal, spans })
}

/// One block of a [`MatricialDecomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatricialBlock {
    /// Monic irreducible `p` with the block annihilated by `p(a)^k`.
    pub irreducible: Polynomial,
    /// Exponent `k`; the block is `C(p^k)^{⊕ mult}` up to similarity.
    pub exponent: usize,
    /// Block idempotent `f`, commuting with the element.
    pub idempotent: Idempotent,
    /// Matrix units inside `fRf` of inner size `k·deg p`.
    pub family: MatrixUnitFamily,
    /// Coordinates of `af` in the family.
    pub coordinates: Matrix,
}

impl MatricialBlock {
    /// Number of cyclic summands of the block.
    pub fn multiplicity(&self) -> usize {
        self.idempotent.rank() / self.family.d()
    }
}

/// An element written as a sum of full matrix blocks over pairwise orthogonal
/// idempotents summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatricialDecomposition {
    /// The decomposed element.
    pub element: Matrix,
    /// The blocks.
    pub blocks: Vec<MatricialBlock>,
}

impl MatricialDecomposition {
    /// `Σ_blocks Σ c_ij s_ij`.
    pub fn reassemble(&self) -> Result<Matrix> {
        let (f, n) = (self.element.field(), self.element.n());
        let mut out = Matrix::zeros(f, n, n);
        for b in &self.blocks {
            out = out.add(&b.family.embed(&b.coordinates)?);
        }
        Ok(out)
    }

    /// Checks the family axioms, orthogonality and completeness of the block
    /// idempotents, and exact reassembly.
    pub fn verify(&self) -> Result<()> {
        let (f, n) = (self.element.field(), self.element.n());
        let mut total = Matrix::zeros(f, n, n);
        for (i, b) in self.blocks.iter().enumerate() {
            b.family.check_axioms()?;
            if b.family.identity() != &b.idempotent {
                return Err(Error::Precondition(format!(
                    "block {i} family unit differs from its idempotent"
                )));
            }
            for c in &self.blocks[i + 1..] {
                if !b.idempotent.orthogonal(&c.idempotent) {
                    return Err(Error::Precondition(
                        "block idempotents are not orthogonal".into(),
                    ));
                }
            }
            total = total.add(b.idempotent.matrix());
        }
        if !total.is_identity() {
            return Err(Error::Precondition(
                "block idempotents do not sum to one".into(),
            ));
        }
        if self.reassemble()? != self.element {
            return Err(Error::Precondition(
                "reassembly differs from the element".into(),
            ));
        }
        Ok(())
    }
}

/// A cyclic summand: chain columns (in coordinates of the primary space) for
/// a generator of order `p^k`.
struct CyclicPiece {
    exponent: usize,
    chain: Matrix,
}

/// Splits the space (coordinates `0..r`) of an operator `t` with minimal
/// polynomial a power of `p` into cyclic summands.
///
/// Each step takes a generator `w` of maximal order `p^k` and cuts out the
/// invariant complement `{v : φ(t^i v) = 0, i < k·deg p}`, where `φ` is dual to
/// `t^{D-1} w` in the power basis of `w`.
fn cyclic_pieces(t: &Matrix, p: &Polynomial) -> Vec<CyclicPiece> {
    let field = t.field();
    let r = t.n();
    let m = p.degree().expect("irreducible has a degree");
    let pt = p.eval_matrix(t);
    let mut space = Matrix::identity(field, r);
    let mut pieces = Vec::new();
    while space.cols() > 0 {
        let mut images = vec![space.clone()];
        while !images.last().expect("nonempty").is_zero() {
            let next = pt.mul(images.last().expect("nonempty"));
            images.push(next);
        }
        let k = images.len() - 1;
        let top = &images[k - 1];
        let col = (0..top.cols())
            .find(|&c| !top.select_columns(&[c]).is_zero())
            .expect("nonzero column");
        let w = space.select_columns(&[col]);
        let dim = k * m;
        let power = krylov(t, &w, dim);
        let extension = crate::lattice::relative_complement(
            &RightIdeal::zero(field, r),
            &RightIdeal::from_columns(&power),
            &RightIdeal::full(field, r),
        )
        .expect("power basis is independent");
        let basis = power.hcat(extension.basis());
        let phi = basis.inverse().expect("basis").select_rows(&[dim - 1]);
        let mut functionals = phi.clone();
        let mut cur = phi;
        for _ in 1..dim {
            cur = cur.mul(t);
            functionals = functionals.vcat(&cur);
        }
        let rest = space.mul(&functionals.mul(&space).kernel_basis());
        let mut chain = Matrix::zeros(field, r, 0);
        let mut p_power = w.clone();
        for _ in 0..k {
            let mut x = p_power.clone();
            for _ in 0..m {
                chain = chain.hcat(&x);
                x = t.mul(&x);
            }
            p_power = pt.mul(&p_power);
        }
        pieces.push(CyclicPiece { exponent: k, chain });
        space = rest;
    }
    pieces
}

/// Decomposes `a` over a prime field into full matrix blocks.
///
/// The space splits along the factors `p_i^{n_i}` of the minimal polynomial;
/// each primary part splits into cyclic summands, and summands of equal
/// exponent form one block. Within a block the chain basis is indexed as
/// `x_{m(j-1)+i} = a^{i-1} p(a)^{j-1} w` (`m = deg p`) for every generator
/// `w`, giving `s_ij = a^{i-j} e_j` when `p` is irreducible of exponent one
/// and `s_ij = a^{i-1} b^{j-1} e_j` for nilpotent blocks; the coordinates of
/// `a` are the hypercompanion matrix of `p^k`.
pub fn matricialize(a: &Matrix) -> Result<MatricialDecomposition> {
    let field = a.field();
    if field == Field::Rationals {
        return Err(Error::Unsupported(
            "matricialization needs a prime field".into(),
        ));
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch(
            "matricialization needs a square matrix".into(),
        ));
    }
    let n = a.n();
    let factorization = a.minimal_polynomial().factor()?;
    let mut groups: Vec<(Polynomial, usize, Vec<Matrix>)> = Vec::new();
    for (p, e) in &factorization.factors {
        let primary = p.pow(*e).eval_matrix(a).kernel_basis();
        let restricted = primary
            .solve_right(&a.mul(&primary))
            .expect("invariant subspace");
        let mut pieces = cyclic_pieces(&restricted, p);
        pieces.sort_by_key(|x| std::cmp::Reverse(x.exponent));
        for piece in pieces {
            let ambient = primary.mul(&piece.chain);
            match groups.last_mut() {
                Some((q, k, chains)) if q == p && *k == piece.exponent => chains.push(ambient),
                _ => groups.push((p.clone(), piece.exponent, vec![ambient])),
            }
        }
    }
    let mut full_basis = Matrix::zeros(field, n, 0);
    for (_, _, chains) in &groups {
        for c in chains {
            full_basis = full_basis.hcat(c);
        }
    }
    let coords_all = full_basis.inverse()?;
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (p, k, chains) in groups {
        let dim = chains[0].cols();
        let mult = chains.len();
        let column_of = |idx: usize| -> Matrix {
            let cols: Vec<Vec<_>> = chains.iter().map(|c| c.column(idx)).collect();
            Matrix::from_columns(field, n, &cols)
        };
        let row_of = |idx: usize| -> Matrix {
            let rows: Vec<usize> = (0..mult).map(|l| offset + l * dim + idx).collect();
            coords_all.select_rows(&rows)
        };
        let xs: Vec<Matrix> = (0..dim).map(column_of).collect();
        let cs: Vec<Matrix> = (0..dim).map(row_of).collect();
        let units: Vec<Matrix> = (0..dim * dim)
            .map(|q| xs[q / dim].mul(&cs[q % dim]))
            .collect();
        let idem = (0..dim).fold(Matrix::zeros(field, n, n), |acc, i| {
            acc.add(&units[i * dim + i])
        });
        let idem = Idempotent::new(idem)?;
        let family = MatrixUnitFamily::from_parts(idem.clone(), dim, units);
        let first_chain = &chains[0];
        let coordinates = first_chain
            .solve_right(&a.mul(first_chain))
            .expect("chain spans an invariant subspace");
        blocks.push(MatricialBlock {
            irreducible: p,
            exponent: k,
            idempotent: idem,
            family,
            coordinates,
        });
        offset += dim * mult;
    }
    let dec = MatricialDecomposition {
        element: a.clone(),
        blocks,
    };
    dec.verify()?;
    Ok(dec)
}

/// Refines a family of inner size `d` to one of inner size `m·d`, with units
/// `r_{m i + k, m j + l} = s_{i1} t_{kl} s_{1j}` for matrix units `t` of
/// inner size `m` in `s_11 R s_11`.
pub fn blow_up(fam: &MatrixUnitFamily, m: usize) -> Result<MatrixUnitFamily> {
    let d = fam.d();
    let s11 = Idempotent::new(fam.unit(0, 0).clone())?;
    let rank = s11.rank();
    if m == 0 || rank % m != 0 {
        return Err(Error::RankNotRepresentable(format!(
            "inner size {} does not divide the unit rank {} times {d}",
            m.max(1) * d,
            rank
        )));
    }
    if m == 1 {
        return Ok(fam.clone());
    }
    let image = s11.image().basis().clone();
    let kernel = s11.kernel().basis().clone();
    let part = rank / m;
    let mut pieces = Vec::with_capacity(m);
    for k in 0..m {
        let inside: Vec<usize> = (k * part..(k + 1) * part).collect();
        let outside: Vec<usize> = (0..rank).filter(|c| !inside.contains(c)).collect();
        let im = image.select_columns(&inside);
        let ker = image.select_columns(&outside).hcat(&kernel);
        pieces.push(Idempotent::from_decomposition(&im, &ker)?);
    }
    let t = complete_matrix_units_in(&s11, &pieces)?;
    let big = m * d;
    let mut units = Vec::with_capacity(big * big);
    for row in 0..big {
        for col in 0..big {
            let (i, k) = (row / m, row % m);
            let (j, l) = (col / m, col % m);
            units.push(fam.unit(i, 0).mul(t.unit(k, l)).mul(fam.unit(0, j)));
        }
    }
    let out = MatrixUnitFamily::new(fam.identity().clone(), big, units)?;
    debug_assert!(out.contains_span_of(fam));
    Ok(out)
}

/// Glues families over pairwise orthogonal corners `e_i` summing to one into
/// one family containing each of them, using conjugators `g_i` between the
/// first diagonal units: `r_{(i,a),(j,b)} = s^i_{a1} c_i c'_j s^j_{1b}` with
/// `c_i = g_i s^1_{11}` and `c'_j = s^1_{11} g_j^{-1}`.
pub fn merge_matricial(blocks: &[(Idempotent, MatrixUnitFamily)]) -> Result<MatrixUnitFamily> {
    let Some((e0, fam0)) = blocks.first() else {
        return Err(Error::Precondition("no blocks to merge".into()));
    };
    let (field, n) = (e0.field(), e0.n());
    let mut total = Matrix::zeros(field, n, n);
    for (i, (e, fam)) in blocks.iter().enumerate() {
        if fam.identity() != e {
            return Err(Error::Precondition(format!(
                "block {i} family does not sum to its idempotent"
            )));
        }
        for (f, _) in &blocks[i + 1..] {
            if !e.orthogonal(f) {
                return Err(Error::Precondition(
                    "block idempotents are not orthogonal".into(),
                ));
            }
        }
        total = total.add(e.matrix());
    }
    if !total.is_identity() {
        return Err(Error::Precondition(
            "block idempotents do not sum to one".into(),
        ));
    }
    let unit_rank = e0.rank() / fam0.d();
    for (_, fam) in blocks {
        let r = fam.identity().rank() / fam.d();
        if r != unit_rank {
            return Err(Error::RankMismatch(unit_rank, r));
        }
    }
    let s1 = Idempotent::new(fam0.unit(0, 0).clone())?;
    let mut links = Vec::with_capacity(blocks.len());
    for (_, fam) in blocks {
        let si = Idempotent::new(fam.unit(0, 0).clone())?;
        let g = conjugate_idempotents(&s1, &si)?;
        let c = g.mul(s1.matrix());
        let c_back = s1.matrix().mul(&g.inverse()?);
        links.push((c, c_back));
    }
    let index: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, (_, fam))| (0..fam.d()).map(move |a| (i, a)))
        .collect();
    let t = index.len();
    let mut units = Vec::with_capacity(t * t);
    for &(i, a) in &index {
        for &(j, b) in &index {
            let left = blocks[i].1.unit(a, 0).mul(&links[i].0);
            let right = links[j].1.mul(blocks[j].1.unit(0, b));
            units.push(left.mul(&right));
        }
    }
    let out = MatrixUnitFamily::new(Idempotent::one(field, n), t, units)?;
    debug_assert!(blocks.iter().all(|(_, fam)| out.contains_span_of(fam)));
    Ok(out)
}

/// An element of `M_{2^k}(K)` inside the doubling tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement {
    level: u32,
    matrix: Matrix,
}

impl TowerElement {
    /// Wraps a matrix whose side is a power of two.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.n();
        if !matrix.is_square() || !n.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "side {n} is not a power of two"
            )));
        }
        Ok(TowerElement {
            level: n.trailing_zeros(),
            matrix,
        })
    }

    /// Level `k` (side `2^k`).
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// `x ↦ diag(x, x)` applied `levels` times.
pub fn tower_lift(x: &TowerElement, levels: u32) -> TowerElement {
    let mut m = x.matrix.clone();
    for _ in 0..levels {
        m = m.direct_sum(&m);
    }
    TowerElement {
        level: x.level + levels,
        matrix: m,
    }
}

/// Result of [`approx_special`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    /// Determinant-one approximant at the chosen level.
    pub approximant: TowerElement,
    /// Exact rank distance between the lifted input and the approximant.
    pub distance: Rational64,
}

/// Lifts `x` to `level` and scales the first row by the inverse determinant.
pub fn approx_special_at_level(x: &TowerElement, level: u32) -> Result<Approximation> {
    if level < x.level {
        return Err(Error::Precondition(
            "target level is below the input level".into(),
        ));
    }
    let lifted = tower_lift(x, level - x.level);
    let field = lifted.matrix.field();
    let det = lifted.matrix.det();
    let fix = field.inv(&det).ok_or(Error::NotInvertible)?;
    let mut b = lifted.matrix.clone();
    for c in 0..b.cols() {
        let v = field.mul(&fix, b.get(0, c));
        b.set(0, c, v);
    }
    let distance = lifted.matrix.rank_distance(&b)?;
    debug_assert!(b.det().is_one());
    Ok(Approximation {
        approximant: TowerElement { level, matrix: b },
        distance,
    })
}

/// A determinant-one `B` in the tower with `d(x, B) < ε`.
///
/// A determinant-one input is lifted to the first level with `1/side ≤ ε`
/// and returned at distance zero. Otherwise the level is the first with
/// `1/side ≤ ε/3`, and one row is scaled by the inverse determinant.
pub fn approx_special(x: &TowerElement, eps: Rational64) -> Result<Approximation> {
    if eps <= Rational64::from_integer(0) {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let det = x.matrix.det();
    if det.is_zero() {
        return Err(Error::NotInvertible);
    }
    let budget = if det.is_one() {
        eps
    } else {
        eps / Rational64::from_integer(3)
    };
    let mut level = x.level;
    while Rational64::new(1, 1i64 << level) > budget {
        level += 1;
        if level > 40 {
            return Err(Error::RankNotRepresentable(format!(
                "ε = {eps} is too small"
            )));
        }
    }
    let out = approx_special_at_level(x, level)?;
    debug_assert!(out.distance < eps);
    Ok(out)
}

/// Random invertible tower element at level `k`.
pub fn random_tower_unit<R: Rng + ?Sized>(field: Field, level: u32, rng: &mut R) -> TowerElement {
    TowerElement {
        level,
        matrix: Matrix::random_invertible(field, 1 << level, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);
    const F5: Field = Field::Prime(5);

    #[test]
    fn standard_units() {
        let es: Vec<Idempotent> = (0..3)
            .map(|i| Idempotent::coordinate(F3, 3, &[i]))
            .collect();
        let fam = complete_matrix_units(&es).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fam.unit(i, j), &Matrix::unit(F3, 3, i, j));
            }
        }
        let a = Matrix::from_i64(F3, &[[1, 2, 0], [0, 1, 1], [2, 2, 2]]);
        assert_eq!(fam.embed(&a).unwrap(), a);
        assert!(fam.embed(&Matrix::identity(F3, 3)).unwrap().is_identity());
    }

    #[test]
    fn block_units() {
        let e1 = Idempotent::coordinate(F2, 4, &[0, 1]);
        let e2 = Idempotent::coordinate(F2, 4, &[2, 3]);
        let fam = complete_matrix_units(&[e1.clone(), e2]).unwrap();
        assert_eq!(
            fam.unit(0, 1).select_rows(&[0, 1]).select_columns(&[2, 3]),
            Matrix::identity(F2, 2)
        );
        let img = fam.embed(&Matrix::from_i64(F2, &[[0, 1], [0, 0]])).unwrap();
        assert_eq!(img.rank(), 2);
        let e3 = Idempotent::coordinate(F2, 4, &[2]);
        assert!(
            complete_matrix_units_in(&Idempotent::coordinate(F2, 4, &[0, 1, 2]), &[e1, e3])
                .is_err()
        );
    }

    #[test]
    fn independence_examples() {
        let a = Matrix::from_i64(F2, &[[0, 1], [0, 0]]);
        let zero = RightIdeal::zero(F2, 2);
        let full = RightIdeal::full(F2, 2);
        assert!(am_independent(&zero, &full, &a, 3));
        let e2 = RightIdeal::coordinate(F2, 2, &[1]);
        assert!(am_independent(&e2, &zero, &a, 2));
        assert!(!am_independent(&e2, &full, &a, 1));
        let ext = max_am_independent(&a, 2, &zero, &full).unwrap();
        assert_eq!(ext.ideal, e2);
        assert!(ext.spans);
        assert!(max_am_independent(&a, 2, &full, &full)
            .unwrap()
            .ideal
            .is_zero());
        let one = Matrix::identity(F2, 2);
        assert!(max_am_independent(&one, 2, &zero, &full)
            .unwrap()
            .ideal
            .is_zero());
    }

    #[test]
    fn matricialize_examples() {
        let scalar = Matrix::scalar(F5, 3, F5.from_i64(2));
        let dec = matricialize(&scalar).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].family.d(), 1);
        let e12 = Matrix::from_i64(F2, &[[0, 1], [0, 0]]);
        let dec = matricialize(&e12).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].family.d(), 2);
        assert_eq!(
            dec.blocks[0].coordinates,
            Matrix::from_i64(F2, &[[0, 0], [1, 0]])
        );
        let d = Matrix::from_i64(F3, &[[1, 0], [0, 2]]);
        let dec = matricialize(&d).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert!(dec.blocks.iter().all(|b| b.family.d() == 1));
        assert!(matricialize(&Matrix::identity(Field::Rationals, 2)).is_err());
    }

    #[test]
    fn irreducible_units_are_powers() {
        let a = Matrix::from_i64(
            F3,
            &[[0, 2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]],
        );
        let dec = matricialize(&a).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        let b = &dec.blocks[0];
        assert_eq!((b.family.d(), b.multiplicity()), (2, 2));
        let inv = a.inverse().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let power = if i >= j {
                    a.pow((i - j) as u64)
                } else {
                    inv.pow((j - i) as u64)
                };
                assert_eq!(*b.family.unit(i, j), power.mul(b.family.unit(j, j)));
            }
        }
    }

    #[test]
    fn nilpotent_units_use_backward_shift() {
        let a = Matrix::from_i64(F2, &[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        let dec = matricialize(&a).unwrap();
        let fam = &dec.blocks[0].family;
        let d = fam.d();
        assert_eq!(d, 3);
        let b = (1..d).fold(Matrix::zeros(F2, 3, 3), |acc, j| {
            acc.add(fam.unit(j - 1, j))
        });
        let partial = (0..d - 1).fold(Matrix::zeros(F2, 3, 3), |acc, j| acc.add(fam.unit(j, j)));
        assert_eq!(b.mul(&a), partial);
        for i in 0..d {
            for j in 0..d {
                let s = a.pow(i as u64).mul(&b.pow(j as u64)).mul(fam.unit(j, j));
                assert_eq!(*fam.unit(i, j), s);
            }
        }
    }

    #[test]
    fn blow_up_examples() {
        let e1 = Idempotent::coordinate(F3, 4, &[0, 1]);
        let e2 = Idempotent::coordinate(F3, 4, &[2, 3]);
        let fam = complete_matrix_units(&[e1, e2]).unwrap();
        assert_eq!(blow_up(&fam, 1).unwrap(), fam);
        let big = blow_up(&fam, 2).unwrap();
        assert_eq!(big.d(), 4);
        assert!(big.contains_span_of(&fam));
        assert!(blow_up(&fam, 3).is_err());
    }

    #[test]
    fn merge_examples() {
        let one = Idempotent::one(F3, 2);
        let fam = complete_matrix_units(&[
            Idempotent::coordinate(F3, 2, &[0]),
            Idempotent::coordinate(F3, 2, &[1]),
        ])
        .unwrap();
        assert_eq!(
            merge_matricial(&[(one.clone(), fam.clone())]).unwrap().d(),
            2
        );
        let e1 = Idempotent::coordinate(F3, 2, &[0]);
        let e2 = Idempotent::coordinate(F3, 2, &[1]);
        let f1 = complete_matrix_units_in(&e1, std::slice::from_ref(&e1)).unwrap();
        let f2 = complete_matrix_units_in(&e2, std::slice::from_ref(&e2)).unwrap();
        let merged = merge_matricial(&[(e1, f1), (e2, f2)]).unwrap();
        assert!(merged.check_axioms().is_ok());
        assert_eq!(merged.unit(0, 0), &Matrix::unit(F3, 2, 0, 0));
        let big = Idempotent::coordinate(F3, 3, &[0, 1]);
        let small = Idempotent::coordinate(F3, 3, &[2]);
        let fb = complete_matrix_units_in(&big, std::slice::from_ref(&big)).unwrap();
        let fs = complete_matrix_units_in(&small, std::slice::from_ref(&small)).unwrap();
        assert!(matches!(
            merge_matricial(&[(big, fb), (small, fs)]),
            Err(Error::RankMismatch(2, 1))
        ));
    }

    #[test]
    fn approximation_examples() {
        let x = TowerElement::new(Matrix::from_i64(F5, &[[2, 0], [0, 1]])).unwrap();
        let at_4 = approx_special_at_level(&x, 2).unwrap();
        assert_eq!(
            at_4.approximant.matrix(),
            &Matrix::diagonal(F5, &[3, 1, 2, 1].map(|v| F5.from_i64(v)))
        );
        assert_eq!(at_4.distance, Rational64::new(1, 4));
        let eps = Rational64::new(1, 4);
        let out = approx_special(&x, eps).unwrap();
        assert!(out.approximant.matrix().det().is_one());
        assert!(out.distance < eps);
        let sl = TowerElement::new(Matrix::from_i64(F5, &[[1, 1], [0, 1]])).unwrap();
        let same = approx_special(&sl, Rational64::new(1, 2)).unwrap();
        assert_eq!(same.approximant, sl);
        assert_eq!(same.distance, Rational64::from_integer(0));
        assert!(approx_special(&x, Rational64::from_integer(0)).is_err());
        let lifted = tower_lift(&x, 2);
        assert_eq!(
            lifted.matrix().normalized_rank(),
            x.matrix().normalized_rank()
        );
    }
}
