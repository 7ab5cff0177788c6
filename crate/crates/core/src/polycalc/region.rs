//! Exact sign checks of `A x² + B xy + C y² + D` over horizontal disks `|z|² ≤ R²`.

use num::{BigRational, Signed, Zero};

use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub xx: BigRational,
    pub xy: BigRational,
    pub yy: BigRational,
    pub constant: BigRational,
}

impl QuadraticForm {
    /// Accepts only polynomials in `x, y` (with `m = 2`) of the form `A x² + B xy + C y² + D`.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let layout = p.layout();
        if layout.m != 2 {
            return Err(Error::Unsupported("disk sign checks need m = 2".into()));
        }
        let n = layout.nvars();
        let mono = |ex: u32, ey: u32| {
            let mut e = vec![0; n];
            e[0] = ex;
            e[1] = ey;
            Monomial::from_exponents(e)
        };
        let allowed = [mono(2, 0), mono(1, 1), mono(0, 2), mono(0, 0)];
        if let Some((bad, _)) = p.terms().find(|(m, _)| !allowed.contains(m)) {
            return Err(Error::Unsupported(format!(
                "term with exponents {:?} is not part of a centred quadratic form in x, y",
                bad.exponents()
            )));
        }
        Ok(Self {
            xx: p.coefficient(&allowed[0]),
            xy: p.coefficient(&allowed[1]),
            yy: p.coefficient(&allowed[2]),
            constant: p.coefficient(&allowed[3]),
        })
    }

    /// `q ≤ 0` on the whole disk `x² + y² ≤ r2`.
    ///
    /// The maximum over the disk is `D + r2·max(λ_max, 0)`, so the condition is `D ≤ 0`
    /// together with negative semidefiniteness of `D·I + r2·M` for the symmetric matrix `M`.
    pub fn nonpositive_on_disk(&self, r2: &BigRational) -> bool {
        if self.constant.is_positive() {
            return false;
        }
        let two = BigRational::from_integer(2.into());
        let a = &self.constant + r2 * &self.xx;
        let c = &self.constant + r2 * &self.yy;
        let b = r2 * &self.xy / two;
        // −(a b; b c) ⪰ 0
        !a.is_positive() && !c.is_positive() && (&a * &c - &b * &b) >= BigRational::zero()
    }

    /// `q ≥ 0` on the whole disk.
    pub fn nonnegative_on_disk(&self, r2: &BigRational) -> bool {
        Self {
            xx: -self.xx.clone(),
            xy: -self.xy.clone(),
            yy: -self.yy.clone(),
            constant: -self.constant.clone(),
        }
        .nonpositive_on_disk(r2)
    }

    /// `q ≥ 0` on the whole plane: positive semidefinite form and `D ≥ 0`.
    pub fn nonnegative_everywhere(&self) -> bool {
        let four = BigRational::from_integer(4.into());
        !self.constant.is_negative()
            && !self.xx.is_negative()
            && !self.yy.is_negative()
            && &four * &self.xx * &self.yy >= &self.xy * &self.xy
    }
}
