//! Mackey functors for the group of order two.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactalg::{FGAbelianGroup, GroupHom, IntMatrix};

/// Values at the two orbits with the structure maps between them.
///
/// `m_fixed` is the value at the fixed orbit, `m_free` the value at the free
/// orbit. Only the contravariant involution is stored; the covariant one
/// coincides with it.
#[derive(Clone, Debug, PartialEq)]
pub struct MackeyZ2 {
    pub m_free: FGAbelianGroup,
    pub m_fixed: FGAbelianGroup,
    pub t_star: GroupHom,
    pub res: GroupHom,
    pub tr: GroupHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// t² = id
    Involution,
    /// t ∘ res = res
    RestrictionInvariant,
    /// tr ∘ t = tr
    TransferInvariant,
    /// res ∘ tr = id + t
    DoubleCoset,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Involution => "t∘t = id",
            Axiom::RestrictionInvariant => "t∘res = res",
            Axiom::TransferInvariant => "tr∘t = tr",
            Axiom::DoubleCoset => "res∘tr = id + t",
        };
        f.write_str(s)
    }
}

/// A failed identity with the first generator on which the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on generator {}", self.axiom, self.witness)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MackeyError {
    #[error("structure maps have the wrong domain or codomain")]
    Shape,
    #[error("invalid Mackey functor: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown coefficient `{0}` (expected Z, Zop or A)")]
    UnknownName(String),
}

fn first_difference(a: &GroupHom, b: &GroupHom) -> Option<usize> {
    (0..a.domain.ngens()).find(|&j| {
        let e: Vec<BigInt> = (0..a.domain.ngens()).map(|i| BigInt::from((i == j) as i64)).collect();
        a.apply(&e) != b.apply(&e)
    })
}

impl MackeyZ2 {
    /// Assembles a functor without checking the axioms.
    pub fn from_parts(m_fixed: FGAbelianGroup, m_free: FGAbelianGroup, t_star: GroupHom, res: GroupHom, tr: GroupHom) -> Result<Self, MackeyError> {
        let ok = t_star.domain == m_free
            && t_star.codomain == m_free
            && res.domain == m_fixed
            && res.codomain == m_free
            && tr.domain == m_free
            && tr.codomain == m_fixed;
        if !ok {
            return Err(MackeyError::Shape);
        }
        Ok(MackeyZ2 {
            m_free,
            m_fixed,
            t_star,
            res,
            tr,
        })
    }

    /// Checks every axiom, reporting each failure.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let id = GroupHom::identity(&self.m_free);
        let compose = |a: &GroupHom, b: &GroupHom| a.compose(b).expect("shapes checked at construction");
        let checks = [
            (Axiom::Involution, compose(&self.t_star, &self.t_star), id.clone()),
            (Axiom::RestrictionInvariant, compose(&self.t_star, &self.res), self.res.clone()),
            (Axiom::TransferInvariant, compose(&self.tr, &self.t_star), self.tr.clone()),
            (Axiom::DoubleCoset, compose(&self.res, &self.tr), id.add(&self.t_star).expect("same shape")),
        ];
        let violations: Vec<Violation> = checks
            .iter()
            .filter_map(|(axiom, lhs, rhs)| first_difference(lhs, rhs).map(|w| Violation { axiom: *axiom, witness: w }))
            .collect();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn validated(self) -> Result<Self, MackeyError> {
        self.validate().map_err(MackeyError::Invalid)?;
        Ok(self)
    }

    /// Constant functor: restriction the identity, transfer multiplication by 2.
    pub fn constant(a: &FGAbelianGroup) -> Self {
        let two = BigInt::from(2);
        MackeyZ2 {
            m_free: a.clone(),
            m_fixed: a.clone(),
            t_star: GroupHom::identity(a),
            res: GroupHom::identity(a),
            tr: GroupHom::scalar(a, &two),
        }
    }

    /// Dual of the constant functor: restriction ×2, transfer the identity.
    pub fn constant_op(a: &FGAbelianGroup) -> Self {
        let two = BigInt::from(2);
        MackeyZ2 {
            m_free: a.clone(),
            m_fixed: a.clone(),
            t_star: GroupHom::identity(a),
            res: GroupHom::scalar(a, &two),
            tr: GroupHom::identity(a),
        }
    }

    /// Burnside functor: `Z ⊕ Z` at the fixed orbit with res(a,b) = a + 2b and tr(a) = (0,a).
    pub fn burnside() -> Self {
        let z = FGAbelianGroup::z();
        let z2 = FGAbelianGroup::free(2);
        let res = GroupHom::new(z2.clone(), z.clone(), IntMatrix::from_rows(&[vec![1, 2]])).expect("free");
        let tr = GroupHom::new(z.clone(), z2.clone(), IntMatrix::from_rows(&[vec![0], vec![1]])).expect("free");
        MackeyZ2 {
            m_free: z.clone(),
            m_fixed: z2,
            t_star: GroupHom::identity(&z),
            res,
            tr,
        }
    }

    /// `Z`, `Zop` or `A` (Burnside).
    pub fn named(name: &str) -> Result<Self, MackeyError> {
        match name {
            "Z" => Ok(Self::constant(&FGAbelianGroup::z())),
            "Zop" => Ok(Self::constant_op(&FGAbelianGroup::z())),
            "A" => Ok(Self::burnside()),
            other => Err(MackeyError::UnknownName(other.to_string())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m_free.is_zero() && self.m_fixed.is_zero()
    }

    /// Both values torsion free.
    pub fn is_free(&self) -> bool {
        self.m_free.is_free() && self.m_fixed.is_free()
    }

    /// Matches `Z` or `Zop` exactly, for readouts.
    pub fn short_name(&self) -> Option<&'static str> {
        let z = FGAbelianGroup::z();
        if *self == Self::constant(&z) {
            Some("Z")
        } else if *self == Self::constant_op(&z) {
            Some("Zop")
        } else if *self == Self::burnside() {
            Some("A")
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_examples_validate() {
        let z = FGAbelianGroup::z();
        assert!(MackeyZ2::constant(&z).validate().is_ok());
        assert!(MackeyZ2::constant_op(&z).validate().is_ok());
        assert!(MackeyZ2::burnside().validate().is_ok());
        assert!(MackeyZ2::constant(&FGAbelianGroup::zero()).is_zero());
        assert!(MackeyZ2::constant(&FGAbelianGroup::cyclic(2)).validate().is_ok());
    }

    #[test]
    fn identity_transfer_breaks_double_coset() {
        let z = FGAbelianGroup::z();
        let id = GroupHom::identity(&z);
        let m = MackeyZ2::from_parts(z.clone(), z.clone(), id.clone(), id.clone(), id).unwrap();
        let v = m.validate().unwrap_err();
        assert_eq!(v, vec![Violation { axiom: Axiom::DoubleCoset, witness: 0 }]);
    }

    #[test]
    fn constant_transfer_is_index() {
        let z = FGAbelianGroup::z();
        assert!(MackeyZ2::constant(&z).tr.is_multiplication_by(2));
        assert_eq!(MackeyZ2::named("Zop").unwrap().short_name(), Some("Zop"));
        assert!(MackeyZ2::named("B").is_err());
    }

    #[test]
    fn sign_flipped_transfer_fails() {
        let mut m = MackeyZ2::constant(&FGAbelianGroup::z());
        m.tr = GroupHom::scalar(&FGAbelianGroup::z(), &BigInt::from(-2));
        assert!(m.validated().is_err());
    }
}
