//! Dehn twists as integer transvections on `H_1` of the surface.
//!
//! This is the fast necessary-condition engine: a twist along a curve with
//! class `c` acts on homology by `x -> x + <x,c> c`. Boundary twists act
//! trivially (boundary classes lie in the radical of the form), so a passed
//! check here is reported as a necessary condition only; the exact engine in
//! [`crate::words`] settles equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::{GroupoidMorphism, SpineGraph, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection form is not antisymmetric with zero diagonal")]
    NotAntisymmetric,
    #[error("class is not an integer combination of the declared basis")]
    NotInBasisLattice,
    #[error("word error: {0}")]
    Word(#[from] WordError),
}

/// An integer vector of length `2g + b - 1` in the surface's ordered basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass(pub Vec<BigInt>);

impl HomologyClass {
    pub fn from_i64(v: &[i64]) -> Self {
        HomologyClass(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> Self {
        HomologyClass(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The algebraic intersection pairing, an antisymmetric integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm(pub Matrix);

impl IntersectionForm {
    pub fn new(m: Matrix) -> Result<Self, HomologyError> {
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                if m.at(i, j) != &-m.at(j, i).clone() {
                    return Err(HomologyError::NotAntisymmetric);
                }
            }
        }
        Ok(IntersectionForm(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `<x, y>` under the form.
    pub fn pair(&self, x: &HomologyClass, y: &HomologyClass) -> Result<BigInt, HomologyError> {
        let n = self.dim();
        if x.dim() != n || y.dim() != n {
            return Err(HomologyError::DimensionMismatch {
                expected: n,
                got: x.dim().max(y.dim()),
            });
        }
        let mut acc = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &x.0[i] * self.0.at(i, j) * &y.0[j];
            }
        }
        Ok(acc)
    }

    /// True iff `c` pairs to zero with every basis vector.
    pub fn in_radical(&self, c: &HomologyClass) -> Result<bool, HomologyError> {
        let n = self.dim();
        for i in 0..n {
            let mut acc = BigInt::zero();
            for j in 0..n {
                acc += self.0.at(i, j) * &c.0[j];
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.0.rank()
    }
}

/// Square integer matrix used for twist actions on `H_1`.
///
/// Entries are arbitrary-precision: powers on the chain surfaces stay small
/// but `F_{k,k}` products for larger `k` must not be able to overflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    entries: Vec<BigInt>, // row-major
}

/// Homology shadow of a twist word: a product of transvections.
pub type TwistMatrix = Matrix;

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Matrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.n * self.n {
            out.entries[i] -= &other.entries[i];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn pow(&self, k: u64) -> Matrix {
        let mut result = Matrix::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    pub fn apply(&self, x: &HomologyClass) -> HomologyClass {
        let mut out = vec![BigInt::zero(); self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                out[i] += self.at(i, j) * &x.0[j];
            }
        }
        HomologyClass(out)
    }

    /// Exact determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(self.at(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let pivot = (row..n).find(|&i| !a[i][col].is_zero());
            let Some(p) = pivot else { continue };
            a.swap(row, p);
            let inv = a[row][col].clone();
            for j in 0..n {
                a[row][j] = &a[row][j] / &inv;
            }
            for i in 0..n {
                if i != row && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        let sub = &f * &a[row][j];
                        a[i][j] = &a[i][j] - &sub;
                    }
                }
            }
            row += 1;
            rank += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    /// Basis of the rational kernel, scaled to primitive integer vectors.
    pub fn kernel_basis(&self) -> Vec<HomologyClass> {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(self.at(i, j).clone()))
                    .collect()
            })
            .collect();
        // row-reduce, tracking pivot columns
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let p = (row..n).find(|&i| !a[i][col].is_zero());
            let Some(p) = p else { continue };
            a.swap(row, p);
            let inv = a[row][col].clone();
            for j in 0..n {
                a[row][j] = &a[row][j] / &inv;
            }
            for i in 0..n {
                if i != row && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..n {
                        let sub = &f * &a[row][j];
                        a[i][j] = &a[i][j] - &sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            // clear denominators, divide by gcd
            let mut denom = BigInt::one();
            for x in &v {
                denom = num_integer::lcm(denom, x.denom().clone());
            }
            let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
            let mut g = BigInt::zero();
            for x in &ints {
                g = num_integer::gcd(g, x.abs());
            }
            if g.is_zero() {
                g = BigInt::one();
            }
            basis.push(HomologyClass(ints.into_iter().map(|x| x / &g).collect()));
        }
        basis
    }
}

/// The transvection `M(x) = x + <x, c> c` along class `c`.
pub fn transvection(
    c: &HomologyClass,
    form: &IntersectionForm,
) -> Result<TwistMatrix, HomologyError> {
    let n = form.dim();
    if c.dim() != n {
        return Err(HomologyError::DimensionMismatch {
            expected: n,
            got: c.dim(),
        });
    }
    // <e_j, c> as a row of pairings
    let mut m = Matrix::identity(n);
    for j in 0..n {
        let mut pairing = BigInt::zero();
        for t in 0..n {
            pairing += form.0.at(j, t) * &c.0[t];
        }
        if pairing.is_zero() {
            continue;
        }
        for i in 0..n {
            *m.at_mut(i, j) += &pairing * &c.0[i];
        }
    }
    Ok(m)
}

/// Matrix of a morphism's action on the declared homology basis: each basis
/// loop's image is abelianized (letters counted with sign) and re-expressed
/// in basis coordinates.
pub fn abelianization_matrix(
    graph: &SpineGraph,
    morphism: &GroupoidMorphism,
    basis: &[Word],
) -> Result<TwistMatrix, HomologyError> {
    let r = basis.len();
    let mut m = Matrix::zero(r);
    for (j, w) in basis.iter().enumerate() {
        let image = morphism.apply(graph, w)?;
        let coords = basis_coordinates(graph, &image, basis)?;
        for i in 0..r {
            *m.at_mut(i, j) = coords.0[i].clone();
        }
    }
    Ok(m)
}

/// Signed edge counts of a word, as a vector over all edges.
pub fn abelianize(graph: &SpineGraph, w: &Word) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); graph.edges().len()];
    for l in w.letters() {
        if l.inverse {
            v[l.edge] -= 1;
        } else {
            v[l.edge] += 1;
        }
    }
    v
}

/// Coordinates of a loop's class in the declared basis. Errors if the class
/// is not an integer combination of the basis, which signals a model bug.
pub fn basis_coordinates(
    graph: &SpineGraph,
    w: &Word,
    basis: &[Word],
) -> Result<HomologyClass, HomologyError> {
    let cols: Vec<Vec<BigInt>> = basis.iter().map(|b| abelianize(graph, b)).collect();
    let target = abelianize(graph, w);
    solve_integer(&cols, &target).ok_or(HomologyError::NotInBasisLattice)
}

/// Solve `sum_i x_i cols[i] = target` exactly over the rationals and check
/// the solution is integral.
fn solve_integer(cols: &[Vec<BigInt>], target: &[BigInt]) -> Option<HomologyClass> {
    let rows = target.len();
    let n = cols.len();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(cols[j][i].clone()))
                .collect()
        })
        .collect();
    let mut b: Vec<BigRational> = target
        .iter()
        .map(|x| BigRational::from(x.clone()))
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..n {
        let p = (row..rows).find(|&i| !a[i][col].is_zero());
        let Some(p) = p else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].clone();
        for j in 0..n {
            a[row][j] = &a[row][j] / &inv;
        }
        b[row] = &b[row] / &inv;
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let sub = &f * &a[row][j];
                    a[i][j] = &a[i][j] - &sub;
                }
                let sub = &f * &b[row];
                b[i] = &b[i] - &sub;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for i in row..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for &(r, c) in &pivots {
        x[c] = b[r].clone();
    }
    let mut out = Vec::with_capacity(n);
    for v in x {
        if !v.denom().is_one() {
            return None;
        }
        out.push(v.numer().clone());
    }
    Some(HomologyClass(out))
}

/// True iff the two products of twist matrices agree. Factors are
/// `(class, exponent)` pairs; composition applies the rightmost factor first,
/// so the product matrix multiplies left to right.
pub fn verify_homology(
    lhs: &[(HomologyClass, i64)],
    rhs: &[(HomologyClass, i64)],
    form: &IntersectionForm,
) -> Result<bool, HomologyError> {
    Ok(twist_product(lhs, form)? == twist_product(rhs, form)?)
}

/// Product of transvection powers, left-to-right in the apply-rightmost-first
/// convention (matrix product in the written order).
pub fn twist_product(
    factors: &[(HomologyClass, i64)],
    form: &IntersectionForm,
) -> Result<TwistMatrix, HomologyError> {
    let n = form.dim();
    let mut out = Matrix::identity(n);
    for (c, e) in factors {
        let t = transvection(c, form)?;
        let m = if *e >= 0 {
            t.pow(*e as u64)
        } else {
            invert_transvection(c, form)?.pow((-*e) as u64)
        };
        out = out.mul(&m);
    }
    Ok(out)
}

/// Inverse of a transvection: `x -> x - <x, c> c`.
fn invert_transvection(
    c: &HomologyClass,
    form: &IntersectionForm,
) -> Result<TwistMatrix, HomologyError> {
    let n = form.dim();
    let mut m = Matrix::identity(n);
    for j in 0..n {
        let mut pairing = BigInt::zero();
        for t in 0..n {
            pairing += form.0.at(j, t) * &c.0[t];
        }
        if pairing.is_zero() {
            continue;
        }
        for i in 0..n {
            *m.at_mut(i, j) -= &pairing * &c.0[i];
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s11_form() -> IntersectionForm {
        // basis (a, b) with Q(a,b) = -1: right-handed twists are
        // x -> x + <x,c>c under this orientation
        IntersectionForm::new(Matrix::from_rows_i64(&[vec![0, -1], vec![1, 0]])).unwrap()
    }

    #[test]
    fn zero_class_gives_identity() {
        let q = s11_form();
        let c = HomologyClass::from_i64(&[0, 0]);
        assert_eq!(transvection(&c, &q).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn torus_transvection_action() {
        let q = s11_form();
        let a = HomologyClass::from_i64(&[1, 0]);
        let b = HomologyClass::from_i64(&[0, 1]);
        let ta = transvection(&a, &q).unwrap();
        // Ta fixes a and sends b to b + a
        assert_eq!(ta.apply(&a), a);
        assert_eq!(ta.apply(&b), HomologyClass::from_i64(&[1, 1]));
        let tb = transvection(&b, &q).unwrap();
        assert_eq!(tb.apply(&a), HomologyClass::from_i64(&[1, -1]));
    }

    #[test]
    fn radical_class_gives_identity() {
        // rank-3 form with a radical direction
        let q = IntersectionForm::new(Matrix::from_rows_i64(&[
            vec![0, -1, 0],
            vec![1, 0, 0],
            vec![0, 0, 0],
        ]))
        .unwrap();
        let c = HomologyClass::from_i64(&[0, 0, 5]);
        assert!(q.in_radical(&c).unwrap());
        assert_eq!(transvection(&c, &q).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn transvection_properties() {
        let q = s11_form();
        for c in [
            HomologyClass::from_i64(&[1, 0]),
            HomologyClass::from_i64(&[2, -3]),
            HomologyClass::from_i64(&[0, 1]),
        ] {
            let m = transvection(&c, &q).unwrap();
            assert_eq!(m.det(), BigInt::one());
            let d = m.sub(&Matrix::identity(2));
            assert!(d.mul(&d).is_zero());
        }
    }

    #[test]
    fn commuting_transvections() {
        // disjoint classes (pairing zero) commute as matrices
        let q = IntersectionForm::new(Matrix::from_rows_i64(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, -1],
            vec![0, 0, 1, 0],
        ]))
        .unwrap();
        let c1 = HomologyClass::from_i64(&[1, 0, 0, 0]);
        let c2 = HomologyClass::from_i64(&[0, 0, 1, 0]);
        assert!(q.pair(&c1, &c2).unwrap().is_zero());
        let t1 = transvection(&c1, &q).unwrap();
        let t2 = transvection(&c2, &q).unwrap();
        assert_eq!(t1.mul(&t2), t2.mul(&t1));
    }

    #[test]
    fn chain_relation_on_homology() {
        // (Ta Tb)^6 = boundary twist = identity matrix on S_{1,1}
        let q = s11_form();
        let a = HomologyClass::from_i64(&[1, 0]);
        let b = HomologyClass::from_i64(&[0, 1]);
        let lhs = twist_product(&[(a.clone(), 1), (b.clone(), 1)], &q)
            .unwrap()
            .pow(6);
        assert_eq!(lhs, Matrix::identity(2));
        // the degree-5 power is not the identity
        let bad = twist_product(&[(a, 1), (b, 1)], &q).unwrap().pow(5);
        assert_ne!(bad, Matrix::identity(2));
    }

    #[test]
    fn negative_exponent_inverts() {
        let q = s11_form();
        let a = HomologyClass::from_i64(&[1, 0]);
        let prod = twist_product(&[(a.clone(), 3), (a, -3)], &q).unwrap();
        assert_eq!(prod, Matrix::identity(2));
    }

    #[test]
    fn kernel_of_degenerate_form() {
        let m = Matrix::from_rows_i64(&[vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], HomologyClass::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn determinant_bareiss() {
        let m = Matrix::from_rows_i64(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(m.det(), BigInt::from(5));
        assert_eq!(Matrix::identity(4).det(), BigInt::one());
    }
}
