//! Exact arithmetic in the Clifford algebra Cl(3) of Euclidean 3-space.
//!
//! Multivectors are dense arrays of eight coefficients over the basis
//!
//! ```text
//! 1, ex, ey, ez, exy, eyz, ezx, I = exyz
//! ```
//!
//! The bivectors follow the cyclic convention, so multiplication by the
//! pseudoscalar sends `ex -> eyz`, `ey -> ezx`, `ez -> exy` with no signs.
//! All products go through a precomputed 8x8 table of integer signs and
//! target indices; an expression whose inputs have coefficients in
//! `{-1, 0, 1}` is therefore evaluated exactly.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numfmt::{fmt_sig, round_sig};

/// Per-coefficient tolerance for approximate multivector equality.
pub const EQ_TOL: f64 = 1e-12;

/// Tolerance on the norm of a [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

/// The eight basis blades, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Blade {
    Scalar,
    Ex,
    Ey,
    Ez,
    Exy,
    Eyz,
    Ezx,
    Pseudoscalar,
}

impl Blade {
    pub const ALL: [Blade; 8] = [
        Blade::Scalar,
        Blade::Ex,
        Blade::Ey,
        Blade::Ez,
        Blade::Exy,
        Blade::Eyz,
        Blade::Ezx,
        Blade::Pseudoscalar,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn grade(self) -> usize {
        GRADES[self as usize]
    }

    /// Short name used in the textual rendering.
    pub const fn name(self) -> &'static str {
        BLADE_NAMES[self as usize]
    }
}

const BLADE_NAMES: [&str; 8] = ["s", "ex", "ey", "ez", "exy", "eyz", "ezx", "I"];

const GRADES: [usize; 8] = [0, 1, 1, 1, 2, 2, 2, 3];

// Bit i set <=> generator i (x=0, y=1, z=2) present.
const BLADE_MASKS: [u8; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b110, 0b101, 0b111];

// Sign of each stored blade relative to the ascending product of its
// generators; only ezx = -exz differs.
const BLADE_SIGNS: [i8; 8] = [1, 1, 1, 1, 1, 1, -1, 1];

const MASK_TO_INDEX: [usize; 8] = [0, 1, 2, 4, 3, 6, 5, 7];

/// Sign from reordering the generators of `a` followed by `b` into
/// ascending order. The metric is Euclidean, so repeated generators
/// contribute +1.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut shifted = a >> 1;
    let mut swaps = 0;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

const fn build_product_table() -> [[(i8, u8); 8]; 8] {
    let mut table = [[(0i8, 0u8); 8]; 8];
    let mut i = 0;
    while i < 8 {
        let mut j = 0;
        while j < 8 {
            let mask = BLADE_MASKS[i] ^ BLADE_MASKS[j];
            let k = MASK_TO_INDEX[mask as usize];
            let sign = BLADE_SIGNS[i]
                * BLADE_SIGNS[j]
                * reorder_sign(BLADE_MASKS[i], BLADE_MASKS[j])
                * BLADE_SIGNS[k];
            table[i][j] = (sign, k as u8);
            j += 1;
        }
        i += 1;
    }
    table
}

/// `PRODUCT_TABLE[i][j] = (sign, k)` means `blade_i * blade_j = sign * blade_k`.
pub const PRODUCT_TABLE: [[(i8, u8); 8]; 8] = build_product_table();

/// An element of Cl(3).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    coeffs: [f64; 8],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { coeffs: [0.0; 8] };

    pub const fn new(coeffs: [f64; 8]) -> Self {
        Self { coeffs }
    }

    pub const fn scalar(s: f64) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[0] = s;
        Self { coeffs }
    }

    pub const fn vector(v: [f64; 3]) -> Self {
        Self {
            coeffs: [0.0, v[0], v[1], v[2], 0.0, 0.0, 0.0, 0.0],
        }
    }

    /// Bivector with components on (exy, eyz, ezx).
    pub const fn bivector(b: [f64; 3]) -> Self {
        Self {
            coeffs: [0.0, 0.0, 0.0, 0.0, b[0], b[1], b[2], 0.0],
        }
    }

    pub const fn blade(blade: Blade) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[blade as usize] = 1.0;
        Self { coeffs }
    }

    /// The right-handed unit pseudoscalar `I = ex ey ez`.
    pub const fn pseudoscalar() -> Self {
        Self::blade(Blade::Pseudoscalar)
    }

    pub const fn coeffs(&self) -> &[f64; 8] {
        &self.coeffs
    }

    pub const fn coeff(&self, blade: Blade) -> f64 {
        self.coeffs[blade as usize]
    }

    pub const fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Components on (exy, eyz, ezx).
    pub const fn bivector_part(&self) -> [f64; 3] {
        [self.coeffs[4], self.coeffs[5], self.coeffs[6]]
    }

    pub const fn vector_part(&self) -> [f64; 3] {
        [self.coeffs[1], self.coeffs[2], self.coeffs[3]]
    }

    /// Keeps only the grade-`k` coefficients. Grades above 3 yield zero.
    pub fn grade_project(&self, k: usize) -> Self {
        let mut out = Self::ZERO;
        for blade in Blade::ALL {
            if blade.grade() == k {
                out.coeffs[blade.index()] = self.coeffs[blade.index()];
            }
        }
        out
    }

    /// Full geometric product.
    pub fn geometric_product(&self, other: &Self) -> Self {
        self.filtered_product(other, |_, _, _| true)
    }

    /// Inner product projecting each pair of pure grades `r`, `s` onto grade
    /// `|r - s|`.
    ///
    /// For `r <= s` this is the left contraction; for a trivector acting on
    /// a vector it keeps the bivector `I n`, which is the dot appearing in the
    /// observable `mu . n`.
    pub fn dot(&self, other: &Self) -> Self {
        self.filtered_product(other, |r, s, k| k == r.abs_diff(s))
    }

    /// Outer product: grade `r + s` part of each pure-grade pair.
    pub fn wedge(&self, other: &Self) -> Self {
        self.filtered_product(other, |r, s, k| k == r + s)
    }

    /// Hodge dual, `x I^-1` with `I^-1 = -I`.
    pub fn dual(&self) -> Self {
        self.geometric_product(&-Self::pseudoscalar())
    }

    /// Reversion: grades 2 and 3 change sign.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for blade in Blade::ALL {
            if matches!(blade.grade(), 2 | 3) {
                out.coeffs[blade.index()] = -out.coeffs[blade.index()];
            }
        }
        out
    }

    /// `x y - y x`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.geometric_product(other) - other.geometric_product(self)
    }

    fn filtered_product(&self, other: &Self, keep: impl Fn(usize, usize, usize) -> bool) -> Self {
        let mut out = [0.0; 8];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (sign, k) = PRODUCT_TABLE[i][j];
                let k = k as usize;
                if keep(GRADES[i], GRADES[j], GRADES[k]) {
                    out[k] += f64::from(sign) * a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Equality within [`EQ_TOL`] per coefficient.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.max_abs_diff(other) <= EQ_TOL
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Copy with every coefficient rounded to report precision.
    pub fn quantized(&self) -> Self {
        Self {
            coeffs: self.coeffs.map(round_sig),
        }
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs) {
            *c += r;
        }
        Self { coeffs }
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            coeffs: self.coeffs.map(|c| c * rhs),
        }
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.geometric_product(&rhs)
    }
}

/// Renders nonzero terms in basis order, e.g. `-1·s + 0.5·exy`; the zero
/// multivector renders as `0`.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for blade in Blade::ALL {
            let c = round_sig(self.coeffs[blade.index()]);
            if c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{}·{}", fmt_sig(c), blade.name())?;
                first = false;
            } else if c < 0.0 {
                write!(f, " - {}·{}", fmt_sig(-c), blade.name())?;
            } else {
                write!(f, " + {}·{}", fmt_sig(c), blade.name())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for Multivector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseMultivector(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(Self::ZERO);
        }
        let mut out = Self::ZERO;
        let mut sign = 1.0;
        for (pos, token) in s.split_whitespace().enumerate() {
            if pos % 2 == 1 {
                sign = match token {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => return Err(bad()),
                };
                continue;
            }
            let (coeff, name) = token.split_once('·').ok_or_else(bad)?;
            let coeff: f64 = coeff.parse().map_err(|_| bad())?;
            let blade = Blade::ALL
                .into_iter()
                .find(|b| b.name() == name)
                .ok_or_else(bad)?;
            out.coeffs[blade.index()] += sign * coeff;
        }
        if s.split_whitespace().count().is_multiple_of(2) {
            return Err(bad());
        }
        Ok(out)
    }
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A direction in Euclidean 3-space, normalized to within [`UNIT_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > UNIT_TOL || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self([x, y, z]))
    }

    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    pub const fn ex() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub const fn ey() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub const fn ez() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    /// Direction in the x-z plane at angle `theta` from `ez` towards `ex`.
    pub fn in_xz_plane(theta: f64) -> Self {
        Self([theta.sin(), 0.0, theta.cos()])
    }

    pub const fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot3(&self.0, &other.0)
    }

    /// Angle in `[0, pi]`.
    pub fn angle_to(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub const fn to_multivector(&self) -> Multivector {
        Multivector::vector(self.0)
    }
}

impl Neg for UnitVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Right-handed cross product, computed as the dual of `a ∧ b`.
pub fn cross_product(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    Multivector::vector(a)
        .wedge(&Multivector::vector(b))
        .dual()
        .vector_part()
}

/// Images of the quaternion units `i, j, k` in the even subalgebra:
/// `-I ex = -eyz`, `-I ey = -ezx`, `-I ez = -exy`, matching `-i` times the
/// Pauli matrices.
pub const QUATERNION_IMAGES: [Multivector; 3] = [
    Multivector::bivector([0.0, -1.0, 0.0]),
    Multivector::bivector([0.0, 0.0, -1.0]),
    Multivector::bivector([-1.0, 0.0, 0.0]),
];

fn embed_quaternion(q: &Quaternion<f64>, images: &[Multivector; 3]) -> Multivector {
    Multivector::scalar(q.w) + images[0] * q.i + images[1] * q.j + images[2] * q.k
}

/// Checks that `1 -> 1`, `(i, j, k) -> images` is an algebra isomorphism from
/// the quaternions onto the even subalgebra, and that `I` is central.
///
/// The nine unit products and the centrality of `I` on the basis blades are
/// compared exactly; `samples` random quaternion pairs with coefficients in
/// `[-1, 1]` are compared within [`EQ_TOL`].
pub fn quaternion_map_is_isomorphism(
    images: &[Multivector; 3],
    samples: usize,
    seed: u64,
) -> Result<bool> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let pseudo = Multivector::pseudoscalar();
    let centre_ok = Blade::ALL.iter().all(|&b| {
        let x = Multivector::blade(b);
        pseudo.commutator(&x) == Multivector::ZERO
    });
    if !centre_ok {
        return Ok(false);
    }

    let units = [
        Quaternion::new(0.0, 1.0, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 1.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.0, 1.0),
    ];
    for p in &units {
        for q in &units {
            let lhs = embed_quaternion(&(p * q), images);
            let rhs = embed_quaternion(p, images) * embed_quaternion(q, images);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_q = |rng: &mut ChaCha8Rng| {
        Quaternion::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        )
    };
    for _ in 0..samples {
        let p = random_q(&mut rng);
        let q = random_q(&mut rng);
        let lhs = embed_quaternion(&(p * q), images);
        let rhs = embed_quaternion(&p, images) * embed_quaternion(&q, images);
        if lhs.max_abs_diff(&rhs) > EQ_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies the quaternion structure of the even subalgebra with the
/// standard images [`QUATERNION_IMAGES`].
pub fn even_subalgebra_iso_check(samples: usize, seed: u64) -> Result<bool> {
    quaternion_map_is_isomorphism(&QUATERNION_IMAGES, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(blade: Blade) -> Multivector {
        Multivector::blade(blade)
    }

    #[test]
    fn generator_products() {
        assert_eq!(b(Blade::Ex) * b(Blade::Ey), b(Blade::Exy));
        assert_eq!(b(Blade::Ey) * b(Blade::Ex), -b(Blade::Exy));
        assert_eq!(b(Blade::Ex) * b(Blade::Ex), Multivector::scalar(1.0));
        assert_eq!(b(Blade::Ez) * b(Blade::Ex), b(Blade::Ezx));
        assert_eq!(b(Blade::Ey) * b(Blade::Ez), b(Blade::Eyz));
        let pseudo = Multivector::pseudoscalar();
        assert_eq!(pseudo * pseudo, Multivector::scalar(-1.0));
    }

    #[test]
    fn pseudoscalar_maps_vectors_to_cyclic_bivectors() {
        let pseudo = Multivector::pseudoscalar();
        assert_eq!(pseudo * b(Blade::Ex), b(Blade::Eyz));
        assert_eq!(pseudo * b(Blade::Ey), b(Blade::Ezx));
        assert_eq!(pseudo * b(Blade::Ez), b(Blade::Exy));
    }

    #[test]
    fn dot_examples() {
        let pseudo = Multivector::pseudoscalar();
        assert_eq!(pseudo.dot(&b(Blade::Ez)), b(Blade::Exy));
        assert_eq!(pseudo.dot(&b(Blade::Ex)), b(Blade::Eyz));
        assert_eq!(b(Blade::Ex).dot(&b(Blade::Ex)), Multivector::scalar(1.0));
        assert_eq!(b(Blade::Ex).dot(&b(Blade::Ey)), Multivector::ZERO);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(b(Blade::Ex).wedge(&b(Blade::Ey)), b(Blade::Exy));
        assert_eq!(b(Blade::Ex).wedge(&b(Blade::Ex)), Multivector::ZERO);
        let theta = std::f64::consts::FRAC_PI_3;
        let a = Multivector::vector([1.0, 0.0, 0.0]);
        let v = Multivector::vector([theta.cos(), theta.sin(), 0.0]);
        let expected = b(Blade::Exy) * theta.sin();
        assert!(a.wedge(&v).approx_eq(&expected));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Multivector::pseudoscalar().dual(), Multivector::scalar(1.0));
        assert_eq!(b(Blade::Ez).dual(), -b(Blade::Exy));
        assert_eq!(b(Blade::Ex).dual().dual(), -b(Blade::Ex));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(b(Blade::Exy).reverse(), -b(Blade::Exy));
        assert_eq!(
            Multivector::pseudoscalar().reverse(),
            -Multivector::pseudoscalar()
        );
        let x = Multivector::scalar(1.0) + b(Blade::Ex);
        assert_eq!(x.reverse(), x);
    }

    #[test]
    fn cross_product_examples() {
        assert_eq!(
            cross_product([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            [0.0, 0.0, 1.0]
        );
        assert_eq!(
            cross_product([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
            [0.0, 0.0, 0.0]
        );
        assert_eq!(
            cross_product([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
            [0.0, -1.0, 0.0]
        );
    }

    #[test]
    fn grade_projections_sum_to_whole() {
        let x = Multivector::new([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let sum = (0..4).fold(Multivector::ZERO, |acc, k| acc + x.grade_project(k));
        assert_eq!(sum, x);
        assert_eq!(x.grade_project(4), Multivector::ZERO);
        assert_eq!(x.grade_project(3), Multivector::pseudoscalar() * 8.0);
    }

    #[test]
    fn quaternion_relation_ij_is_k() {
        let [i, j, k] = QUATERNION_IMAGES;
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, Multivector::scalar(-1.0));
        assert_eq!(i * j * k, Multivector::scalar(-1.0));
    }

    #[test]
    fn even_subalgebra_is_quaternionic() {
        assert_eq!(even_subalgebra_iso_check(200, 1), Ok(true));
        assert_eq!(even_subalgebra_iso_check(0, 1), Err(Error::NoSamples));
    }

    #[test]
    fn swapped_images_break_the_table() {
        let [i, j, k] = QUATERNION_IMAGES;
        assert_eq!(quaternion_map_is_isomorphism(&[j, i, k], 10, 1), Ok(false));
    }

    #[test]
    fn unsigned_bivector_map_is_only_an_anti_isomorphism() {
        let unsigned = [b(Blade::Eyz), b(Blade::Ezx), b(Blade::Exy)];
        assert_eq!(unsigned[0] * unsigned[1], -unsigned[2]);
        assert_eq!(quaternion_map_is_isomorphism(&unsigned, 10, 1), Ok(false));
    }

    #[test]
    fn display_and_parse() {
        let x = Multivector::scalar(-1.0) + b(Blade::Exy) * 0.5;
        assert_eq!(x.to_string(), "-1·s + 0.5·exy");
        assert_eq!(Multivector::ZERO.to_string(), "0");
        let y = b(Blade::Ex) * 2.0 - Multivector::pseudoscalar() * (1.0 / 3.0);
        assert_eq!(y.to_string(), "2·ex - 0.333333333333·I");
        assert_eq!(y.to_string().parse::<Multivector>().unwrap(), y.quantized());
        assert_eq!("-1·s + 0.5·exy".parse::<Multivector>().unwrap(), x);
        assert!("1·q".parse::<Multivector>().is_err());
        assert!("1·s +".parse::<Multivector>().is_err());
        assert!("1·s * 2·ex".parse::<Multivector>().is_err());
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(1.0, 0.0, 0.0).is_ok());
        assert!(matches!(
            UnitVector::new(1.0, 1.0, 0.0),
            Err(Error::NotUnit { .. })
        ));
        assert_eq!(UnitVector::normalize([0.0; 3]), Err(Error::ZeroVector));
        let v = UnitVector::normalize([1.0, 1.0, 1.0]).unwrap();
        assert!((v.dot(&v) - 1.0).abs() < 1e-15);
    }
}
