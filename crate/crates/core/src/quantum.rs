//! Quantum-mechanical reference predictions for one to three spin-1/2
//! particles.
//!
//! Spin observables carry eigenvalues ±1 (no ħ/2 factor), states are dense
//! complex vectors, and measurement is projective with explicit collapse.
//! Only probabilities and expectation values leave this module, so global
//! phases never matter.

use nalgebra::{Complex, DMatrix, DVector};

use crate::clifford::UnitVector;
use crate::error::{Error, Result};
use crate::sign::Sign;

pub type C64 = Complex<f64>;

const MAX_DIM: usize = 8;
const NORM_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Dense operator on the state space of 1 to 3 spin-1/2 particles.
#[derive(Debug, Clone, PartialEq)]
pub struct QmOperator(DMatrix<C64>);

impl QmOperator {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn pauli_x() -> Self {
        Self(DMatrix::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        ))
    }

    pub fn pauli_y() -> Self {
        Self(DMatrix::from_row_slice(
            2,
            2,
            &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        ))
    }

    pub fn pauli_z() -> Self {
        Self(DMatrix::from_row_slice(
            2,
            2,
            &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
        ))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    /// Kronecker product; `self` is the slower-varying index.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(self.0.kronecker(&other.0)))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, state: &DVector<C64>) -> DVector<C64> {
        &self.0 * state
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.0 - self.0.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .0
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Normalized pure state of 1 to 3 spin-1/2 particles.
#[derive(Debug, Clone, PartialEq)]
pub struct QmState(DVector<C64>);

impl QmState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !matches!(dim, 2 | 4 | 8) {
            return Err(Error::Dimension(dim, 1));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// Computational basis vector `index` of a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            matches!(dim, 2 | 4 | 8) && index < dim,
            "basis({dim}, {index}) out of range"
        );
        let mut v = DVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self(v)
    }

    /// Eigenstate of `spin_op(n)` with eigenvalue `outcome`.
    pub fn spin_eigenstate(n: &UnitVector, outcome: Sign) -> Self {
        let [x, y, z] = match outcome {
            Sign::Plus => n.components(),
            Sign::Minus => (-*n).components(),
        };
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        let (s, co) = (theta / 2.0).sin_cos();
        Self(DVector::from_vec(vec![
            c(co, 0.0),
            Complex::from_polar(s, phi),
        ]))
    }

    /// `|+>` or `|->` along z.
    pub fn z_basis(outcome: Sign) -> Self {
        match outcome {
            Sign::Plus => Self::basis(2, 0),
            Sign::Minus => Self::basis(2, 1),
        }
    }

    /// Singlet `(|+-> - |-+>) / sqrt 2`.
    pub fn singlet() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self(DVector::from_vec(vec![
            c(0., 0.),
            c(r, 0.),
            c(-r, 0.),
            c(0., 0.),
        ]))
    }

    /// Product of z-eigenstates, e.g. `|+-+>`.
    pub fn z_product(pattern: &[Sign]) -> Result<Self> {
        let mut iter = pattern.iter();
        let first = iter.next().ok_or(Error::Dimension(0, 0))?;
        iter.try_fold(Self::z_basis(*first), |acc, s| {
            acc.tensor(&Self::z_basis(*s))
        })
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(self.0.kronecker(&other.0)))
    }

    /// `<psi| op |psi>`; real for Hermitian `op`.
    pub fn expectation(&self, op: &QmOperator) -> f64 {
        self.0.dotc(&op.apply(&self.0)).re
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a * b > MAX_DIM {
        Err(Error::Dimension(a, b))
    } else {
        Ok(())
    }
}

/// `n . sigma`.
pub fn spin_op(n: &UnitVector) -> QmOperator {
    let [x, y, z] = n.components();
    QmOperator::pauli_x()
        .scale(c(x, 0.0))
        .add(&QmOperator::pauli_y().scale(c(y, 0.0)))
        .add(&QmOperator::pauli_z().scale(c(z, 0.0)))
}

/// Projector onto the `outcome` eigenspace of `spin_op(n)`: `(1 ± n.sigma) / 2`.
pub fn spin_projector(n: &UnitVector, outcome: Sign) -> QmOperator {
    QmOperator::identity(2)
        .add(&spin_op(n).scale(c(outcome.value(), 0.0)))
        .scale(c(0.5, 0.0))
}

/// `<singlet| spin_op(a) ⊗ spin_op(b) |singlet>`.
pub fn singlet_correlation(a: &UnitVector, b: &UnitVector) -> f64 {
    let op = spin_op(a)
        .tensor(&spin_op(b))
        .expect("two spin operators fit in dimension 4");
    QmState::singlet().expectation(&op)
}

/// Probability of observing `outcomes` when a single spin prepared in
/// `state` is measured along `directions` in order, collapsing after each
/// measurement.
pub fn sequential_probabilities(
    state: &QmState,
    directions: &[UnitVector],
    outcomes: &[Sign],
) -> Result<f64> {
    if state.dim() != 2 {
        return Err(Error::NotSingleParticle(state.dim()));
    }
    if directions.len() != outcomes.len() || directions.is_empty() {
        return Err(Error::LengthMismatch {
            directions: directions.len(),
            outcomes: outcomes.len(),
        });
    }
    // Applying the projector chain without renormalizing leaves the joint
    // probability as the squared norm.
    let psi = directions
        .iter()
        .zip(outcomes)
        .fold(state.0.clone(), |psi, (n, s)| {
            spin_projector(n, *s).apply(&psi)
        });
    Ok(psi.norm_squared())
}

/// Every outcome sequence for `directions` with its probability, in
/// lexicographic order (`+` before `-`).
pub fn sequential_outcome_tree(
    state: &QmState,
    directions: &[UnitVector],
) -> Result<Vec<(Vec<Sign>, f64)>> {
    let k = directions.len();
    (0..1usize << k)
        .map(|bits| {
            let outcomes: Vec<Sign> = (0..k)
                .map(|i| {
                    if bits >> (k - 1 - i) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let p = sequential_probabilities(state, directions, &outcomes)?;
            Ok((outcomes, p))
        })
        .collect()
}

/// Expectation of `spin_op(direction)` on particles `pair.0` and `pair.1`
/// (identity on the third) in the z-product state given by `pattern`.
pub fn product_state_correlation(
    pattern: [Sign; 3],
    pair: (usize, usize),
    direction: &UnitVector,
) -> Result<f64> {
    product_pair_correlation(&pattern, pair, direction)
}

/// [`product_state_correlation`] for a z-product state of 1 to 3 particles.
pub fn product_pair_correlation(
    pattern: &[Sign],
    pair: (usize, usize),
    direction: &UnitVector,
) -> Result<f64> {
    let (i, j) = pair;
    let n = pattern.len();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidPair(i, j));
    }
    let spin = spin_op(direction);
    let id = QmOperator::identity(2);
    let factor = |p: usize| if p == i || p == j { &spin } else { &id };
    let op = (1..n).try_fold(factor(0).clone(), |acc, p| acc.tensor(factor(p)))?;
    Ok(QmState::z_product(pattern)?.expectation(&op))
}

/// `|E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|` on the singlet.
pub fn chsh_value(a: &UnitVector, a2: &UnitVector, b: &UnitVector, b2: &UnitVector) -> f64 {
    chsh_combination(singlet_correlation, a, a2, b, b2)
}

/// CHSH combination of an arbitrary correlation function.
pub fn chsh_combination(
    corr: impl Fn(&UnitVector, &UnitVector) -> f64,
    a: &UnitVector,
    a2: &UnitVector,
    b: &UnitVector,
    b2: &UnitVector,
) -> f64 {
    (corr(a, b) - corr(a, b2)).abs() + (corr(a2, b) + corr(a2, b2)).abs()
}

/// Settings `a = 0°, a' = 90°, b = 45°, b' = 135°` in the x-z plane,
/// measured from `ez`.
pub fn canonical_chsh_directions() -> [UnitVector; 4] {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    [
        UnitVector::in_xz_plane(0.0),
        UnitVector::in_xz_plane(FRAC_PI_2),
        UnitVector::in_xz_plane(FRAC_PI_4),
        UnitVector::in_xz_plane(3.0 * FRAC_PI_4),
    ]
}
