//! Compensated (double-double) arithmetic: an f64 pair carrying about 31
//! significant digits. Used where a computation sums terms that tower
//! many orders of magnitude above the result, so plain f64 would lose
//! the cancellation. The building blocks are the classical error-free
//! transforms: two-sum for addition, FMA two-product for multiplication,
//! a corrected quotient for division, one Newton step for the root.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    pub(crate) hi: f64,
    lo: f64,
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(crate) fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn quick(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    pub(crate) fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let v = s - self.hi;
        let e = (self.hi - (s - v)) + (o.hi - v);
        Dd::quick(s, e + self.lo + o.lo)
    }

    pub(crate) fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub(crate) fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::quick(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub(crate) fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = (r.hi + r.lo) / o.hi;
        Dd::quick(q1, q2)
    }

    pub(crate) fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// One Newton refinement of the f64 root; callers pass positive
    /// arguments (q and its powers), zero maps to zero.
    pub(crate) fn sqrt(self) -> Dd {
        let y = self.hi.sqrt();
        if !(y > 0.0) {
            return Dd::ZERO;
        }
        let yd = Dd::from(y);
        let r = self.sub(yd.mul(yd));
        yd.add(r.div(Dd::from(2.0 * y)))
    }

    /// Integer power by binary decomposition; a negative exponent is the
    /// reciprocal of the positive power.
    pub(crate) fn powi(self, e: i64) -> Dd {
        if e < 0 {
            return Dd::ONE.div(self.powi(-e));
        }
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex double-double: a Dd pair with textbook complex arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ddc {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl Ddc {
    pub(crate) const ZERO: Ddc = Ddc {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub(crate) const ONE: Ddc = Ddc {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub(crate) fn from(c: Complex64) -> Ddc {
        Ddc {
            re: Dd::from(c.re),
            im: Dd::from(c.im),
        }
    }

    pub(crate) fn add(self, o: Ddc) -> Ddc {
        Ddc {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub(crate) fn sub(self, o: Ddc) -> Ddc {
        Ddc {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub(crate) fn mul(self, o: Ddc) -> Ddc {
        Ddc {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub(crate) fn mul_dd(self, s: Dd) -> Ddc {
        Ddc {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub(crate) fn div_dd(self, s: Dd) -> Ddc {
        Ddc {
            re: self.re.div(s),
            im: self.im.div(s),
        }
    }

    /// Rough magnitude of the leading parts, for ordering heuristics.
    pub(crate) fn mag_hi(self) -> f64 {
        self.re.hi.abs().max(self.im.hi.abs())
    }

    pub(crate) fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_resolves_cancellation_past_f64() {
        // (1 + 1e-20) - 1 in plain f64 is 0; in Dd it survives.
        let a = Dd::ONE.add(Dd::from(1e-20));
        let d = a.sub(Dd::ONE);
        assert!((d.value() - 1e-20).abs() < 1e-33);
    }

    #[test]
    fn dd_sqrt_and_powi_match_exact_values() {
        let q = Dd::from(0.95);
        let r = q.sqrt();
        // r² must reproduce q to Dd accuracy, far below f64 eps.
        let back = r.mul(r).sub(q);
        assert!(back.value().abs() < 1e-30);

        let p = q.powi(7);
        let mut expect = Dd::ONE;
        for _ in 0..7 {
            expect = expect.mul(q);
        }
        assert!((p.sub(expect)).value().abs() < 1e-28);

        let inv = q.powi(-3);
        let prod = inv.mul(q.powi(3)).sub(Dd::ONE);
        assert!(prod.value().abs() < 1e-30);
    }

    #[test]
    fn ddc_multiplication_matches_complex() {
        let a = Complex64::new(0.3, -1.2);
        let b = Complex64::new(-0.7, 0.4);
        let got = Ddc::from(a).mul(Ddc::from(b)).value();
        let want = a * b;
        assert!((got - want).norm() < 1e-15 * want.norm());
    }
}
