use crate::C64;

/// `m · 2^e` with `m` kept near unit size, so that long products of theta
/// factors neither overflow nor underflow before they are combined into a
/// moderate ratio. Rescaling is by exact powers of two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Scaled {
    m: C64,
    e: i32,
}

impl Scaled {
    pub(crate) const ONE: Scaled = Scaled {
        m: C64::new(1.0, 0.0),
        e: 0,
    };

    pub(crate) fn new(z: C64) -> Self {
        Scaled { m: z, e: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        let s = self.m.re.abs().max(self.m.im.abs());
        if s == 0.0 || !s.is_finite() {
            return self;
        }
        let shift = s.log2().floor() as i32;
        Scaled {
            m: self.m * 2f64.powi(-shift),
            e: self.e + shift,
        }
    }

    pub(crate) fn to_c64(self) -> C64 {
        // Split the exponent so that intermediate powers stay representable.
        let half = self.e / 2;
        self.m * 2f64.powi(half) * 2f64.powi(self.e - half)
    }
}

impl std::ops::Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled {
            m: self.m * rhs.m,
            e: self.e + rhs.e,
        }
        .normalized()
    }
}

impl std::ops::Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled {
            m: self.m / rhs.m,
            e: self.e - rhs.e,
        }
        .normalized()
    }
}

impl std::ops::Mul<C64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: C64) -> Scaled {
        self * Scaled::new(rhs)
    }
}
