use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Angular tolerance (radians) for comparing boundary directions.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

/// A 2×2 matrix with exact rational entries and determinant one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarMatrix {
    m: [[BigRational; 2]; 2],
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl PlanarMatrix {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::DeterminantNotOne(det.to_string()));
        }
        Ok(Self { m: [[a, b], [c, d]] })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Self { m: [[q(1), q(0)], [q(0), q(1)]] }
    }

    pub fn minus_identity() -> Self {
        Self { m: [[q(-1), q(0)], [q(0), q(-1)]] }
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.m[row][col]
    }

    pub fn trace(&self) -> BigRational {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self { m: [[d.clone(), -b.clone()], [-c.clone(), a.clone()]] }
    }

    pub fn neg(&self) -> Self {
        let [[a, b], [c, d]] = &self.m;
        Self { m: [[-a.clone(), -b.clone()], [-c.clone(), -d.clone()]] }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Self { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..exp.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// True for ±identity.
    pub fn is_central(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero() && self.m[0][0] == self.m[1][1] && self.m[0][0].abs().is_one()
    }

    /// Integer entries, when every entry is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<[[i64; 2]; 2]> {
        let mut out = [[0i64; 2]; 2];
        for (i, row) in self.m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                out[i][j] = x.to_integer().to_i64()?;
            }
        }
        Some(out)
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        [[f(&self.m[0][0]), f(&self.m[0][1])], [f(&self.m[1][0]), f(&self.m[1][1])]]
    }

    /// Entries as decimal strings, row-major (`"p/q"` for non-integers).
    pub fn to_strings(&self) -> [[String; 2]; 2] {
        let s = |x: &BigRational| x.to_string();
        [[s(&self.m[0][0]), s(&self.m[0][1])], [s(&self.m[1][0]), s(&self.m[1][1])]]
    }

    /// Scales to an integer matrix: returns `(D, D·M)` with `D` the least
    /// common denominator of the entries.
    fn integer_multiple(&self) -> (BigInt, [[BigInt; 2]; 2]) {
        let mut den = BigInt::one();
        for row in &self.m {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
        let k = [[scale(&self.m[0][0]), scale(&self.m[0][1])], [scale(&self.m[1][0]), scale(&self.m[1][1])]];
        (den, k)
    }

    /// Applies the matrix to a planar vector.
    pub fn apply_f64(&self, v: [f64; 2]) -> [f64; 2] {
        let m = self.to_f64();
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl Mul for &PlanarMatrix {
    type Output = PlanarMatrix;
    fn mul(self, rhs: &PlanarMatrix) -> PlanarMatrix {
        self.multiply(rhs)
    }
}

impl fmt::Display for PlanarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementTag {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementClass {
    pub tag: ElementTag,
    pub trace: BigRational,
    /// Set for ±identity, which carry the elliptic tag.
    pub is_central: bool,
}

impl ElementClass {
    /// Parabolic or hyperbolic: the element has infinite order.
    pub fn is_infinite_order(&self) -> bool {
        !self.is_central && self.tag != ElementTag::Elliptic
    }
}

pub fn classify(m: &PlanarMatrix) -> ElementClass {
    let trace = m.trace();
    let two = q(2);
    let abs = trace.abs();
    let is_central = m.is_central();
    let tag = if is_central || abs < two {
        ElementTag::Elliptic
    } else if abs == two {
        ElementTag::Parabolic
    } else {
        ElementTag::Hyperbolic
    };
    ElementClass { tag, trace, is_central }
}

/// `a·b·a⁻¹·b⁻¹`.
pub fn commutator(a: &PlanarMatrix, b: &PlanarMatrix) -> PlanarMatrix {
    a.multiply(b).multiply(&a.inverse()).multiply(&b.inverse())
}

fn big_to_two(x: &BigInt) -> TwoFloat {
    let hi = x.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return TwoFloat::from(hi);
    }
    let rest = x - BigInt::from_f64(hi).unwrap_or_default();
    TwoFloat::new_add(hi, rest.to_f64().unwrap_or(0.0))
}

fn angle_of(vx: TwoFloat, vy: TwoFloat) -> f64 {
    let pi = twofloat::consts::PI;
    let mut theta = vy.atan2(vx);
    if theta < TwoFloat::from(0.0) {
        theta += pi;
    }
    if theta >= pi {
        theta -= pi;
    }
    theta.hi()
}

fn normalized(vx: TwoFloat, vy: TwoFloat) -> [TwoFloat; 2] {
    let norm = (vx * vx + vy * vy).sqrt();
    let (mut x, mut y) = (crate::dd::div(vx, norm), crate::dd::div(vy, norm));
    // representative in the upper half plane, matching angles in [0, π)
    if y < TwoFloat::from(0.0) || (y == TwoFloat::from(0.0) && x < TwoFloat::from(0.0)) {
        x = -x;
        y = -y;
    }
    [x, y]
}

/// Eigenvector for the eigenvalue `(t + sign·s)/2` of the integer matrix `k`
/// with `s = sqrt(t² − 4·det)`, choosing the cancellation-free formula.
fn eigenvector(k: &[[BigInt; 2]; 2], s: TwoFloat, sign: i32) -> [TwoFloat; 2] {
    let [[a, b], [c, d]] = k;
    let ss = if sign >= 0 { s } else { -s };
    let dma = d - a;
    let same_sign = dma.is_zero() || (dma.is_positive() == (sign >= 0));
    if same_sign {
        let e1 = big_to_two(&dma) + ss;
        normalized(big_to_two(&(b * 2)), e1)
    } else {
        let e2 = big_to_two(&(-dma)) + ss;
        normalized(e2, big_to_two(&(c * 2)))
    }
}

fn hyperbolic_vectors(m: &PlanarMatrix) -> Result<([TwoFloat; 2], [TwoFloat; 2])> {
    let class = classify(m);
    if class.tag != ElementTag::Hyperbolic {
        return Err(Error::NotHyperbolic(class.trace.to_string()));
    }
    let (den, k) = m.integer_multiple();
    let t = &k[0][0] + &k[1][1];
    let disc = &t * &t - BigInt::from(4) * &den * &den;
    let s = big_to_two(&disc).sqrt();
    let sign = if t.is_positive() { 1 } else { -1 };
    Ok((eigenvector(&k, s, sign), eigenvector(&k, s, -sign)))
}

/// The two boundary directions fixed by a hyperbolic matrix, as angles in
/// `[0, π)`, expanding direction first.
pub fn fixed_directions(m: &PlanarMatrix) -> Result<(f64, f64)> {
    let (e, c) = hyperbolic_vectors(m)?;
    Ok((angle_of(e[0], e[1]), angle_of(c[0], c[1])))
}

/// Unit vector along the expanding eigendirection, in double-double precision.
pub fn expanding_vector(m: &PlanarMatrix) -> Result<[TwoFloat; 2]> {
    Ok(hyperbolic_vectors(m)?.0)
}

/// The single fixed boundary direction of a parabolic matrix.
pub fn parabolic_direction(m: &PlanarMatrix) -> Option<f64> {
    let class = classify(m);
    if class.tag != ElementTag::Parabolic || class.is_central {
        return None;
    }
    let eps = if class.trace.is_positive() { q(1) } else { q(-1) };
    // M − εI is nilpotent of rank one; its image is its kernel.
    let n = [[m.entry(0, 0) - &eps, m.entry(0, 1).clone()], [m.entry(1, 0).clone(), m.entry(1, 1) - &eps]];
    let col = if !n[0][0].is_zero() || !n[1][0].is_zero() { 0 } else { 1 };
    let f = |x: &BigRational| TwoFloat::from(x.to_f64().unwrap_or(0.0));
    let v = normalized(f(&n[0][col]), f(&n[1][col]));
    Some(angle_of(v[0], v[1]))
}

/// Circular distance between two directions on the projective circle `[0, π)`.
pub fn direction_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % std::f64::consts::PI;
    d.min(std::f64::consts::PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> PlanarMatrix {
        PlanarMatrix::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn rejects_non_unit_determinant() {
        assert!(matches!(PlanarMatrix::from_ints(2, 0, 0, 1), Err(Error::DeterminantNotOne(_))));
    }

    #[test]
    fn multiply_examples() {
        let x = m(3, 5, 1, 2);
        assert_eq!(PlanarMatrix::identity().multiply(&x), x);
        assert_eq!(m(1, 1, 0, 1).multiply(&m(1, 0, 1, 1)), m(2, 1, 1, 1));
    }

    #[test]
    fn classification() {
        let id = classify(&PlanarMatrix::identity());
        assert_eq!(id.tag, ElementTag::Elliptic);
        assert!(id.is_central);
        assert_eq!(id.trace, q(2));
        assert!(classify(&PlanarMatrix::minus_identity()).is_central);
        assert_eq!(classify(&m(2, 1, 1, 1)).tag, ElementTag::Hyperbolic);
        let p = classify(&m(1, 5, 0, 1));
        assert_eq!(p.tag, ElementTag::Parabolic);
        assert!(!p.is_central);
        assert_eq!(classify(&m(0, -1, 1, 0)).tag, ElementTag::Elliptic);
        assert_eq!(classify(&m(-1, 3, 0, -1)).tag, ElementTag::Parabolic);
    }

    #[test]
    fn commutator_examples() {
        let x = m(2, 1, 1, 1);
        assert!(commutator(&x, &x).is_identity());
        assert!(commutator(&PlanarMatrix::identity(), &x).is_identity());
        // hand expansion: [[1,2],[0,1]]·[[1,0],[2,1]] = [[5,2],[2,1]];
        // ·[[1,-2],[0,1]] = [[5,-8],[2,-3]]; ·[[1,0],[-2,1]] = [[21,-8],[8,-3]]
        let c = commutator(&m(1, 2, 0, 1), &m(1, 0, 2, 1));
        assert_eq!(c, m(21, -8, 8, -3));
    }

    #[test]
    fn diagonal_fixed_directions() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let d = PlanarMatrix::new(q(2), q(0), q(0), half).unwrap();
        let (e, c) = fixed_directions(&d).unwrap();
        assert!(direction_distance(e, 0.0) < ANGLE_TOLERANCE);
        assert!(direction_distance(c, std::f64::consts::FRAC_PI_2) < ANGLE_TOLERANCE);
    }

    #[test]
    fn golden_fixed_direction() {
        // λ² − 3λ + 1 = 0, λ = (3+√5)/2, eigenvector (1, λ−2) = (1, (√5−1)/2)
        let (e, c) = fixed_directions(&m(2, 1, 1, 1)).unwrap();
        let expected = ((5f64.sqrt() - 1.0) / 2.0).atan();
        assert!((e - 0.55357435889704).abs() < 1e-12);
        assert!(direction_distance(e, expected) < ANGLE_TOLERANCE);
        let g = m(2, 1, 1, 1);
        for theta in [e, c] {
            let img = g.apply_f64([theta.cos(), theta.sin()]);
            assert!(direction_distance(img[1].atan2(img[0]).rem_euclid(std::f64::consts::PI), theta) < 1e-12);
        }
    }

    #[test]
    fn inverse_swaps_roles() {
        let g = m(5, 2, 2, 1);
        let (e, c) = fixed_directions(&g).unwrap();
        let (ei, ci) = fixed_directions(&g.inverse()).unwrap();
        assert!(direction_distance(e, ci) < ANGLE_TOLERANCE);
        assert!(direction_distance(c, ei) < ANGLE_TOLERANCE);
    }

    #[test]
    fn not_hyperbolic_error() {
        assert!(matches!(fixed_directions(&m(1, 1, 0, 1)), Err(Error::NotHyperbolic(_))));
    }

    #[test]
    fn parabolic_directions() {
        assert!(direction_distance(parabolic_direction(&m(1, 2, 0, 1)).unwrap(), 0.0) < 1e-15);
        let v = parabolic_direction(&m(1, 0, 2, 1)).unwrap();
        assert!(direction_distance(v, std::f64::consts::FRAC_PI_2) < 1e-15);
        // −(parabolic) fixing (1,1)
        let w = parabolic_direction(&m(-3, 2, -2, 1)).unwrap();
        assert!(direction_distance(w, std::f64::consts::FRAC_PI_4) < 1e-15);
        assert!(parabolic_direction(&PlanarMatrix::identity()).is_none());
    }
}
