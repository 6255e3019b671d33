//! Singularity combinatorics: polynomial parsing, weighted homogeneity,
//! Milnor numbers, twist counts and fiber topology.
//!
//! For a weighted homogeneous polynomial with weights `w_1..w_n` and degree
//! `d` (so `d = sum w_i a_i` for every monomial), the Milnor number is
//! `mu = prod (d - w_i) / w_i`. The monodromy of the degree-k homogeneous
//! link factors into `k (k-1)^n` right-handed twists, `(k-1)^n` per fiber,
//! and for two variables the fiber `F_{k,k}` is a surface of genus
//! `(k-1)(k-2)/2` with `k` boundary components; these are the numbers the
//! surface models are checked against.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilnorError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unknown variable `{0}` (variables are z0, z1, ...)")]
    UnknownVariable(String),
    #[error("variable count mismatch: polynomial has {poly}, weights have {weights}")]
    DimensionMismatch { poly: usize, weights: usize },
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("Milnor factor ({0}) is negative; not isolated weighted homogeneous data")]
    NegativeFactor(String),
    #[error("Milnor product {0} is not an integer; not isolated weighted homogeneous data")]
    NonIntegerProduct(String),
    #[error("internal cross-check failed: {0}")]
    InternalCheck(String),
}

/// A polynomial in canonical collected form: sorted exponent vectors with
/// nonzero integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    /// (exponent vector, coefficient), no duplicates, no zeros
    pub monomials: Vec<(Vec<u32>, BigInt)>,
    pub variables: usize,
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.monomials.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if coeff.is_negative() { "-" } else { "+" })?;
            } else if coeff.is_negative() {
                write!(f, "-")?;
            }
            let mag = coeff.abs();
            let mut head = true;
            if !mag.is_one() || exps.iter().all(|&e| e == 0) {
                write!(f, "{mag}")?;
                head = false;
            }
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !head {
                    write!(f, "*")?;
                }
                head = false;
                write!(f, "z{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Weights and degree of a weighted homogeneous structure. Rational
/// internally; display normalizes to coprime integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    pub weights: Vec<BigRational>,
    pub degree: BigRational,
}

impl WeightData {
    pub fn from_integers(weights: &[i64], degree: i64) -> Result<Self, MilnorError> {
        if weights.iter().any(|&w| w <= 0) || degree <= 0 {
            return Err(MilnorError::NonPositiveWeight);
        }
        Ok(WeightData {
            weights: weights
                .iter()
                .map(|&w| BigRational::from(BigInt::from(w)))
                .collect(),
            degree: BigRational::from(BigInt::from(degree)),
        })
    }

    /// Scale so the weights are coprime positive integers.
    pub fn normalized(&self) -> WeightData {
        let mut lcm = BigInt::one();
        for w in self.weights.iter().chain(std::iter::once(&self.degree)) {
            lcm = lcm.lcm(w.denom());
        }
        let ints: Vec<BigInt> = self
            .weights
            .iter()
            .map(|w| w.numer() * (&lcm / w.denom()))
            .collect();
        let mut g = self.degree.numer() * (&lcm / self.degree.denom());
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        WeightData {
            weights: ints.iter().map(|x| BigRational::from(x / &g)).collect(),
            degree: BigRational::from((self.degree.numer() * (&lcm / self.degree.denom())) / &g),
        }
    }
}

impl fmt::Display for WeightData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        let ws: Vec<String> = n.weights.iter().map(|w| w.numer().to_string()).collect();
        write!(f, "w = ({}), d = {}", ws.join(", "), n.degree.numer())
    }
}

// ---------------------------------------------------------------------------
// polynomial parser
// ---------------------------------------------------------------------------

/// Parse e.g. `"z0^3 + z1^3 + z2^3"` or `"2*z0^2*z1 - z1^5"`.
pub fn parse_poly(text: &str) -> Result<Poly, MilnorError> {
    let src: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let err = |pos: usize, msg: &str| MilnorError::Syntax {
        col: pos + 1,
        msg: msg.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < src.len() && src[*pos].is_whitespace() {
            *pos += 1;
        }
    };

    let mut raw_terms: Vec<(BTreeMap<usize, u32>, BigInt)> = Vec::new();
    let mut max_var = 0usize;
    let mut sign = BigInt::one();
    skip_ws(&mut pos);
    if pos < src.len() && (src[pos] == '+' || src[pos] == '-') {
        if src[pos] == '-' {
            sign = -sign;
        }
        pos += 1;
    }
    loop {
        skip_ws(&mut pos);
        if pos >= src.len() {
            return Err(err(pos, "expected a term"));
        }
        // one term: [int] ('*'? var-power)*
        let mut coeff = sign.clone();
        let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
        loop {
            skip_ws(&mut pos);
            if pos < src.len() && src[pos].is_ascii_digit() {
                let start = pos;
                while pos < src.len() && src[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: BigInt = src[start..pos].iter().collect::<String>().parse().unwrap();
                coeff *= n;
            } else if pos < src.len() && src[pos].is_alphabetic() {
                let start = pos;
                while pos < src.len() && (src[pos].is_alphanumeric() || src[pos] == '_') {
                    pos += 1;
                }
                let name: String = src[start..pos].iter().collect();
                let var = name
                    .strip_prefix('z')
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or(MilnorError::UnknownVariable(name.clone()))?;
                max_var = max_var.max(var);
                let mut exp = 1u32;
                skip_ws(&mut pos);
                if pos < src.len() && src[pos] == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let start = pos;
                    while pos < src.len() && src[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if start == pos {
                        return Err(err(pos, "expected exponent"));
                    }
                    exp = src[start..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err(start, "exponent out of range"))?;
                }
                *exps.entry(var).or_insert(0) += exp;
            } else {
                return Err(err(pos, "expected coefficient or variable"));
            }
            skip_ws(&mut pos);
            if pos < src.len() && src[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        raw_terms.push((exps, coeff));

        skip_ws(&mut pos);
        if pos >= src.len() {
            break;
        }
        match src[pos] {
            '+' => {
                sign = BigInt::one();
                pos += 1;
            }
            '-' => {
                sign = -BigInt::one();
                pos += 1;
            }
            c => return Err(err(pos, &format!("unexpected character `{c}`"))),
        }
    }
    // canonical collected form: fixed-length exponent keys, merged terms
    let variables = max_var + 1;
    let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (exps, coeff) in raw_terms {
        let mut key = vec![0u32; variables];
        for (v, e) in exps {
            key[v] = e;
        }
        *terms.entry(key).or_insert_with(BigInt::zero) += coeff;
    }
    let mut monomials: Vec<(Vec<u32>, BigInt)> =
        terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    monomials.sort_by(|a, b| b.0.cmp(&a.0).then(Ordering::Equal));
    Ok(Poly {
        monomials,
        variables,
    })
}

/// True iff every monomial satisfies `d = sum w_i a_i`.
pub fn check_weighted_homogeneous(p: &Poly, w: &WeightData) -> Result<bool, MilnorError> {
    if p.variables != w.weights.len() {
        return Err(MilnorError::DimensionMismatch {
            poly: p.variables,
            weights: w.weights.len(),
        });
    }
    for (exps, _) in &p.monomials {
        let mut acc = BigRational::zero();
        for (i, &a) in exps.iter().enumerate() {
            acc += &w.weights[i] * BigRational::from(BigInt::from(a));
        }
        if acc != w.degree {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solve the degree equations for the weights; `None` if the system is
/// inconsistent, underdetermined, or forces a nonpositive weight. The
/// returned data is normalized to coprime integer weights.
pub fn infer_weights(p: &Poly) -> Option<WeightData> {
    let n = p.variables;
    if p.monomials.is_empty() {
        return None;
    }
    // normalize d = 1 and solve sum_i w_i a_i = 1 per monomial
    let rows: Vec<Vec<BigRational>> = p
        .monomials
        .iter()
        .map(|(exps, _)| {
            exps.iter()
                .map(|&a| BigRational::from(BigInt::from(a)))
                .collect()
        })
        .collect();
    let mut a = rows;
    let mut b = vec![BigRational::one(); a.len()];
    let rows_n = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let p = (row..rows_n).find(|&r| !a[r][col].is_zero());
        let Some(pr) = p else { continue };
        a.swap(row, pr);
        b.swap(row, pr);
        let inv = a[row][col].clone();
        for x in a[row].iter_mut() {
            *x = &*x / &inv;
        }
        b[row] = &b[row] / &inv;
        for r in 0..rows_n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let sub = &f * &a[row][j];
                    a[r][j] = &a[r][j] - &sub;
                }
                let sub = &f * &b[row];
                b[r] = &b[r] - &sub;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows_n {
            break;
        }
    }
    // inconsistent?
    for r in row..rows_n {
        if !b[r].is_zero() {
            return None;
        }
    }
    // underdetermined?
    if pivots.len() != n {
        return None;
    }
    let mut w = vec![BigRational::zero(); n];
    for &(r, c) in &pivots {
        w[c] = b[r].clone();
    }
    if w.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let data = WeightData {
        weights: w,
        degree: BigRational::one(),
    };
    Some(data.normalized())
}

/// `mu = prod (d - w_i) / w_i`, as an exact integer.
pub fn milnor_number(w: &WeightData) -> Result<BigInt, MilnorError> {
    if w.weights.iter().any(|x| !x.is_positive()) || !w.degree.is_positive() {
        return Err(MilnorError::NonPositiveWeight);
    }
    let mut acc = BigRational::one();
    for wi in &w.weights {
        let factor = (&w.degree - wi) / wi;
        if factor.is_negative() {
            return Err(MilnorError::NegativeFactor(factor.to_string()));
        }
        acc *= factor;
    }
    if !acc.denom().is_one() {
        return Err(MilnorError::NonIntegerProduct(acc.to_string()));
    }
    Ok(acc.numer().clone())
}

/// `k (k-1)^n`: how many right-handed twists the boundary twist factors into.
pub fn twist_count(n: u32, k: u32) -> BigInt {
    BigInt::from(k) * BigInt::from(k as i64 - 1).pow(n)
}

/// `(k-1)^n`: twists per fiber; `k * per_fiber_count = twist_count`.
pub fn per_fiber_count(n: u32, k: u32) -> BigInt {
    BigInt::from(k as i64 - 1).pow(n)
}

/// Topology of the two-variable fiber surface.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FiberTopology {
    pub genus: u64,
    pub boundary: u64,
    pub euler: i64,
    pub h1_rank: u64,
}

/// Genus, boundary count, Euler characteristic and `H_1` rank of `F_{k,k}`;
/// checks `euler = 1 - mu` against the Milnor number internally.
pub fn fiber_topology(k: u32) -> Result<FiberTopology, MilnorError> {
    assert!(k >= 1);
    let k64 = k as u64;
    let genus = (k64 - 1) * (k64.saturating_sub(2)) / 2;
    let boundary = k64;
    let euler = 2 - 2 * genus as i64 - boundary as i64;
    let h1_rank = 2 * genus + boundary - 1;
    let mu = milnor_number(&WeightData::from_integers(&[1, 1], k as i64)?)?;
    if BigInt::from(1 - euler) != mu {
        return Err(MilnorError::InternalCheck(format!(
            "euler {euler} != 1 - mu with mu = {mu}"
        )));
    }
    Ok(FiberTopology {
        genus,
        boundary,
        euler,
        h1_rank,
    })
}

/// Positive divisors of k with the fractional twist angle 1/l.
pub fn fractional_powers(k: u64) -> Vec<(u64, BigRational)> {
    assert!(k >= 1);
    let mut out = Vec::new();
    for l in 1..=k {
        if k % l == 0 {
            out.push((l, BigRational::new(BigInt::one(), BigInt::from(l))));
        }
    }
    out
}
