//! Hidden-variable spin models.
//!
//! The Clifford-valued model takes the hidden variable to be `mu = ±I` and
//! the meter observable `A_n(mu) = mu . n`, a unit bivector. A meter may carry
//! an extra definition sign (so that `B = -A` can be expressed) and an
//! interpretation telling which orientation of the bivector is read as the
//! "up" leg. Bell's scalar model uses a unit vector `lambda` and the
//! observable `sign(n . lambda)`.

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, UnitVector};
use crate::error::{Error, Result};
use crate::sign::Sign;

/// Components at or below this magnitude count as zero when locating the
/// first nonzero component of a direction.
pub const AXIS_ZERO_TOL: f64 = 1e-12;

/// The hidden variable `mu = mu_sign · I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HiddenState {
    pub mu_sign: Sign,
}

impl HiddenState {
    pub const PLUS: HiddenState = HiddenState {
        mu_sign: Sign::Plus,
    };
    pub const MINUS: HiddenState = HiddenState {
        mu_sign: Sign::Minus,
    };
    pub const BOTH: [HiddenState; 2] = [Self::PLUS, Self::MINUS];

    pub fn to_multivector(self) -> Multivector {
        Multivector::pseudoscalar() * self.mu_sign.value()
    }

    pub fn flipped(self) -> Self {
        Self {
            mu_sign: -self.mu_sign,
        }
    }
}

/// Which bivector orientation a meter reads as "up".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Interpretation {
    /// `I ez` is up for a meter along `+ez`, and likewise for every axis.
    Natural,
    /// The reverse reading: `I ez` is the down leg.
    Flipped,
}

impl Interpretation {
    pub const BOTH: [Interpretation; 2] = [Interpretation::Natural, Interpretation::Flipped];

    pub fn sign(self) -> Sign {
        match self {
            Interpretation::Natural => Sign::Plus,
            Interpretation::Flipped => Sign::Minus,
        }
    }

    pub fn code(self) -> char {
        match self {
            Interpretation::Natural => 'N',
            Interpretation::Flipped => 'F',
        }
    }
}

/// Sign convention and reading of one spin meter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MeterModel {
    /// `Plus` gives `mu . n`, `Minus` gives `-mu . n`.
    pub def_sign: Sign,
    pub interp: Interpretation,
}

impl MeterModel {
    pub const fn new(def_sign: Sign, interp: Interpretation) -> Self {
        Self { def_sign, interp }
    }

    /// `mu . n` read naturally.
    pub const fn standard() -> Self {
        Self::new(Sign::Plus, Interpretation::Natural)
    }

    /// `-mu . n` read naturally, i.e. `B = -A`.
    pub const fn anticorrelated() -> Self {
        Self::new(Sign::Minus, Interpretation::Natural)
    }
}

/// `def_sign · (mu . n)`: a unit bivector.
pub fn christian_observable(meter: &MeterModel, n: &UnitVector, mu: HiddenState) -> Multivector {
    mu.to_multivector().dot(&n.to_multivector()) * meter.def_sign.value()
}

/// Sign of the first component of `n` whose magnitude exceeds
/// [`AXIS_ZERO_TOL`].
pub fn axis_sign(n: &UnitVector) -> Sign {
    n.components()
        .into_iter()
        .find(|c| c.abs() > AXIS_ZERO_TOL)
        .map(Sign::of)
        .unwrap_or(Sign::Plus)
}

/// Scalar outcome `mu I^-1 sgn(n_*)`.
pub fn effective_outcome(n: &UnitVector, mu: HiddenState) -> Sign {
    let scalar = (mu.to_multivector() * -Multivector::pseudoscalar()).scalar_part();
    Sign::of(scalar) * axis_sign(n)
}

/// Orientation of a bivector outcome relative to the reference `I p`, where
/// `p = sgn(n_*) n` is the representative of the measurement axis with a
/// positive leading component.
pub fn orientation(observable: &Multivector, n: &UnitVector) -> Sign {
    let p = if axis_sign(n) == Sign::Plus { *n } else { -*n };
    let reference = Multivector::pseudoscalar() * p.to_multivector();
    // A unit bivector B satisfies B^-1 = -B.
    Sign::of((*observable * -reference).scalar_part())
}

/// Outcome label (+1 up, -1 down) that `meter` assigns to `observable`.
pub fn interpret(meter: &MeterModel, observable: &Multivector, n: &UnitVector) -> Sign {
    meter.interp.sign() * orientation(observable, n)
}

/// Outcome label of `meter` measuring along `n` in hidden state `mu`.
pub fn meter_outcome(meter: &MeterModel, n: &UnitVector, mu: HiddenState) -> Sign {
    interpret(meter, &christian_observable(meter, n, mu), n)
}

/// `A_a(mu) B_b(mu)` under the geometric product.
pub fn pair_product(
    meter_a: &MeterModel,
    meter_b: &MeterModel,
    a: &UnitVector,
    b: &UnitVector,
    mu: HiddenState,
) -> Multivector {
    christian_observable(meter_a, a, mu) * christian_observable(meter_b, b, mu)
}

/// `(f(+I) + f(-I)) / 2`, by exact enumeration.
pub fn expectation_over_mu(f: impl Fn(HiddenState) -> Multivector) -> Multivector {
    (f(HiddenState::PLUS) + f(HiddenState::MINUS)) * 0.5
}

/// Averages over `mu` of `[A, B]` and `A^2`. The consistency requirements
/// are `commutator_avg = 0` and `square_avg = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub commutator_avg: Multivector,
    pub square_avg: Multivector,
}

pub fn constraint_check(
    meter_a: &MeterModel,
    meter_b: &MeterModel,
    a: &UnitVector,
    b: &UnitVector,
) -> ConstraintCheck {
    let commutator_avg = expectation_over_mu(|mu| {
        christian_observable(meter_a, a, mu).commutator(&christian_observable(meter_b, b, mu))
    });
    let square_avg = expectation_over_mu(|mu| {
        let obs = christian_observable(meter_a, a, mu);
        obs * obs
    });
    ConstraintCheck {
        commutator_avg,
        square_avg,
    }
}

/// Hidden unit vector of Bell's scalar model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellLambda {
    pub direction: UnitVector,
}

impl BellLambda {
    pub fn new(direction: UnitVector) -> Self {
        Self { direction }
    }

    /// Uniform draw from the unit sphere.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
        Self::new(UnitVector::normalize([x, y, z]).expect("sphere samples are nonzero"))
    }
}

/// `sign(a . lambda)`, ties resolved to `+1`.
pub fn bell_observable(a: &UnitVector, lambda: &BellLambda) -> Sign {
    Sign::of(a.dot(&lambda.direction))
}

/// Draws `lambda` uniformly from the hemisphere `outcome · (n . lambda) > 0`.
pub fn hemisphere_update<R: Rng + ?Sized>(
    n: &UnitVector,
    outcome: Sign,
    rng: &mut R,
) -> BellLambda {
    loop {
        let lambda = BellLambda::sample(rng);
        let side = n.dot(&lambda.direction) * outcome.value();
        if side > 0.0 {
            return lambda;
        }
        if side < 0.0 {
            // Reflection through the origin preserves the uniform measure.
            return BellLambda::new(-lambda.direction);
        }
    }
}

/// Probability that `sign(m . lambda) = +1` for `lambda` uniform on the
/// hemisphere around `pole`: the lune fraction `1 - angle(pole, m) / pi`.
pub fn hemisphere_up_probability(pole: &UnitVector, m: &UnitVector) -> f64 {
    1.0 - pole.angle_to(m) / std::f64::consts::PI
}

/// Measurement axes distinguished by the update rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DirectionTag {
    Z,
    X,
}

impl DirectionTag {
    pub fn direction(self) -> UnitVector {
        match self {
            DirectionTag::Z => UnitVector::ez(),
            DirectionTag::X => UnitVector::ex(),
        }
    }

    fn index(self) -> usize {
        match self {
            DirectionTag::Z => 0,
            DirectionTag::X => 1,
        }
    }
}

fn mu_index(mu: HiddenState) -> usize {
    match mu.mu_sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// Probability of negating `mu` after a measurement, per current state and
/// measured axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateRule {
    flip_prob: [[f64; 2]; 2],
}

impl UpdateRule {
    /// Leaves `mu` unchanged.
    pub const fn identity() -> Self {
        Self {
            flip_prob: [[0.0; 2]; 2],
        }
    }

    /// Same flip probability for every state and axis.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::identity().with_all(p)
    }

    fn with_all(mut self, p: f64) -> Result<Self> {
        check_probability(p)?;
        self.flip_prob = [[p; 2]; 2];
        Ok(self)
    }

    /// Copy with the entry for `(mu, tag)` replaced.
    pub fn with(mut self, mu: HiddenState, tag: DirectionTag, p: f64) -> Result<Self> {
        check_probability(p)?;
        self.flip_prob[mu_index(mu)][tag.index()] = p;
        Ok(self)
    }

    pub fn flip_prob(&self, mu: HiddenState, tag: DirectionTag) -> f64 {
        self.flip_prob[mu_index(mu)][tag.index()]
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}

/// Negates `mu` with the rule's probability for `(mu, tag)`.
pub fn apply_update<R: Rng + ?Sized>(
    rule: &UpdateRule,
    mu: HiddenState,
    tag: DirectionTag,
    rng: &mut R,
) -> HiddenState {
    let p = rule.flip_prob(mu, tag);
    if p > 0.0 && rng.random::<f64>() < p {
        mu.flipped()
    } else {
        mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Blade;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn christian_observable_examples() {
        let ez = UnitVector::ez();
        let exy = Multivector::blade(Blade::Exy);
        assert_eq!(
            christian_observable(&MeterModel::standard(), &ez, HiddenState::PLUS),
            exy
        );
        assert_eq!(
            christian_observable(&MeterModel::anticorrelated(), &ez, HiddenState::PLUS),
            -exy
        );
        assert_eq!(
            christian_observable(&MeterModel::standard(), &ez, HiddenState::MINUS),
            -exy
        );
    }

    #[test]
    fn effective_outcome_examples() {
        assert_eq!(
            effective_outcome(&UnitVector::ez(), HiddenState::PLUS),
            Sign::Plus
        );
        assert_eq!(
            effective_outcome(&UnitVector::ex(), HiddenState::MINUS),
            Sign::Minus
        );
        assert_eq!(
            effective_outcome(&-UnitVector::ez(), HiddenState::PLUS),
            Sign::Minus
        );
    }

    #[test]
    fn pair_product_examples() {
        let ez = UnitVector::ez();
        let std = MeterModel::standard();
        let p = pair_product(&std, &std, &ez, &ez, HiddenState::PLUS);
        assert_eq!(p, Multivector::scalar(-1.0));
        let p = pair_product(
            &std,
            &MeterModel::anticorrelated(),
            &ez,
            &ez,
            HiddenState::PLUS,
        );
        assert_eq!(p, Multivector::scalar(1.0));
        let p = pair_product(&std, &std, &ez, &UnitVector::ex(), HiddenState::PLUS);
        assert_eq!(p.scalar_part(), 0.0);
        assert!(p.grade_project(2).max_abs() > 0.5);
    }

    #[test]
    fn expectation_examples() {
        let std = MeterModel::standard();
        let ez = UnitVector::ez();
        let theta = 0.7f64;
        let b = UnitVector::in_xz_plane(theta);
        let e = expectation_over_mu(|mu| pair_product(&std, &std, &ez, &b, mu));
        assert!((e.scalar_part() + theta.cos()).abs() < 1e-12);
        let e = expectation_over_mu(|mu| {
            pair_product(&std, &MeterModel::anticorrelated(), &ez, &ez, mu)
        });
        assert_eq!(e.scalar_part(), 1.0);
        let e = expectation_over_mu(|mu| christian_observable(&std, &ez, mu));
        assert_eq!(e, Multivector::ZERO);
    }

    #[test]
    fn constraint_check_examples() {
        let std = MeterModel::standard();
        let (ez, ex) = (UnitVector::ez(), UnitVector::ex());
        let parallel = constraint_check(&std, &MeterModel::anticorrelated(), &ez, &ez);
        assert_eq!(parallel.commutator_avg, Multivector::ZERO);
        assert_eq!(parallel.square_avg, Multivector::scalar(-1.0));
        let ortho = constraint_check(&std, &std, &ez, &ex);
        let wedge = ez.to_multivector().wedge(&ex.to_multivector());
        assert_eq!(ortho.commutator_avg, wedge * -2.0);
        assert_eq!(ortho.commutator_avg, Multivector::blade(Blade::Ezx) * -2.0);
    }

    #[test]
    fn bell_observable_examples() {
        let ez = UnitVector::ez();
        assert_eq!(bell_observable(&ez, &BellLambda::new(ez)), Sign::Plus);
        let l = BellLambda::new(UnitVector::new(0.6, 0.0, -0.8).unwrap());
        assert_eq!(bell_observable(&ez, &l), Sign::Minus);
        let l = BellLambda::new(UnitVector::normalize([1.0, 1.0, 0.0]).unwrap());
        assert_eq!(bell_observable(&UnitVector::ex(), &l), Sign::Plus);
        // ties resolve to +1
        assert_eq!(
            bell_observable(&ez, &BellLambda::new(UnitVector::ex())),
            Sign::Plus
        );
    }

    #[test]
    fn hemisphere_update_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ez = UnitVector::ez();
        let n = 100_000;
        let (mut sum_z, mut sum_x, mut above) = (0.0, 0.0, 0usize);
        for _ in 0..n {
            let [x, _, z] = hemisphere_update(&ez, Sign::Plus, &mut rng)
                .direction
                .components();
            sum_z += z;
            sum_x += x;
            above += usize::from(z > 0.0);
        }
        assert!((sum_z / n as f64 - 0.5).abs() < 0.01);
        assert!((sum_x / n as f64).abs() < 0.01);
        assert_eq!(above, n);
    }

    #[test]
    fn hemisphere_update_respects_down_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ex = UnitVector::ex();
        for _ in 0..1000 {
            let l = hemisphere_update(&ex, Sign::Minus, &mut rng);
            assert!(l.direction.components()[0] < 0.0);
        }
    }

    #[test]
    fn lune_probability() {
        let (ez, ex) = (UnitVector::ez(), UnitVector::ex());
        assert_eq!(hemisphere_up_probability(&ez, &ez), 1.0);
        assert!((hemisphere_up_probability(&ez, &ex) - 0.5).abs() < 1e-15);
        assert!(hemisphere_up_probability(&ez, &-ez).abs() < 1e-15);
    }

    #[test]
    fn update_rule_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = UpdateRule::identity();
        assert_eq!(
            apply_update(&id, HiddenState::PLUS, DirectionTag::Z, &mut rng),
            HiddenState::PLUS
        );
        let always = UpdateRule::uniform(1.0).unwrap();
        assert_eq!(
            apply_update(&always, HiddenState::PLUS, DirectionTag::Z, &mut rng),
            HiddenState::MINUS
        );
        let half = UpdateRule::uniform(0.5).unwrap();
        let n = 100_000;
        let flips = (0..n)
            .filter(|_| {
                apply_update(&half, HiddenState::PLUS, DirectionTag::X, &mut rng)
                    == HiddenState::MINUS
            })
            .count();
        assert!((flips as f64 / n as f64 - 0.5).abs() < 0.01);
        assert_eq!(UpdateRule::uniform(1.5), Err(Error::Probability(1.5)));
        assert_eq!(
            id.with(HiddenState::MINUS, DirectionTag::X, -0.1),
            Err(Error::Probability(-0.1))
        );
    }

    #[test]
    fn flipped_interpretation_reverses_labels() {
        let ez = UnitVector::ez();
        let flipped = MeterModel::new(Sign::Plus, Interpretation::Flipped);
        assert_eq!(
            meter_outcome(&MeterModel::standard(), &ez, HiddenState::PLUS),
            Sign::Plus
        );
        assert_eq!(meter_outcome(&flipped, &ez, HiddenState::PLUS), Sign::Minus);
        // -I ez read as up: def_sign -1 with the flipped reading
        let forced_c = MeterModel::new(Sign::Minus, Interpretation::Flipped);
        assert_eq!(meter_outcome(&forced_c, &ez, HiddenState::PLUS), Sign::Plus);
        assert_eq!(
            meter_outcome(&forced_c, &ez, HiddenState::MINUS),
            Sign::Minus
        );
    }
}
