use crate::special::{theta, theta_pochhammer_checked, NomePair};
use crate::{Error, Result, C64};

/// Relative tolerance on `k b c = q a t̃`.
pub const PRODUCT_RULE_TOL: f64 = 1e-13;

/// `(b, c)` from the spectator variable `y`:
/// `b = √(pq t̃ a / k) · y`, `c = √(q t̃ a / (p k)) / y`.
///
/// The square roots are taken factor by factor with principal branches
/// (`√p √q √t̃ √a / √k`), which makes `k b c = q a t̃` hold exactly in exact
/// arithmetic and makes the pair transform consistently when `a` and `k` are
/// exchanged. Each output squares to its radicand as written above.
pub fn derive_bc(t_tilde: C64, a: C64, k: C64, y: C64, nome: &NomePair) -> Result<(C64, C64)> {
    let zero = C64::new(0.0, 0.0);
    for (name, v) in [("k", k), ("y", y), ("p", nome.p())] {
        if v == zero {
            return Err(Error::Domain(format!("deriving (b, c) needs {name} ≠ 0")));
        }
    }
    let (sp, sq) = (nome.p().sqrt(), nome.q().sqrt());
    let common = sq * t_tilde.sqrt() * a.sqrt() / k.sqrt();
    Ok((sp * common * y, common / (sp * y)))
}

/// Parameters of the discrete Bailey lemma at matrix size `N+1`.
///
/// Construction checks the product rule `k b c = q a t̃` and that no theta
/// factor that ends up in a denominator of any of the matrices
/// `M(a,k), M(k,a), M(a,t̃), M(t̃,a), M(t̃,k)` or diagonal operators
/// `D(a;b,c), D(k;qt̃/c,qt̃/b), D(t̃;b,c), D(t̃;qt̃/c,qt̃/b)` vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteParams {
    a: C64,
    k: C64,
    t_tilde: C64,
    b: C64,
    c: C64,
    y: Option<C64>,
    n: usize,
    nome: NomePair,
}

impl DiscreteParams {
    /// `(b, c)` fixed by `y` through [`derive_bc`].
    pub fn from_y(a: C64, k: C64, t_tilde: C64, y: C64, n: usize, nome: &NomePair) -> Result<Self> {
        let (b, c) = derive_bc(t_tilde, a, k, y, nome)?;
        let params = DiscreteParams {
            a,
            k,
            t_tilde,
            b,
            c,
            y: Some(y),
            n,
            nome: nome.clone(),
        };
        params.validate()?;
        Ok(params)
    }

    /// Free `(b, c)`; only the product rule ties them to the rest.
    pub fn with_bc(
        a: C64,
        k: C64,
        t_tilde: C64,
        b: C64,
        c: C64,
        n: usize,
        nome: &NomePair,
    ) -> Result<Self> {
        let params = DiscreteParams {
            a,
            k,
            t_tilde,
            b,
            c,
            y: None,
            n,
            nome: nome.clone(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn k(&self) -> C64 {
        self.k
    }
    pub fn t_tilde(&self) -> C64 {
        self.t_tilde
    }
    pub fn b(&self) -> C64 {
        self.b
    }
    pub fn c(&self) -> C64 {
        self.c
    }
    pub fn y(&self) -> Option<C64> {
        self.y
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn nome(&self) -> &NomePair {
        &self.nome
    }

    pub fn triple(&self) -> ParamTriple {
        ParamTriple {
            t_tilde: self.t_tilde,
            a: self.a,
            k: self.k,
            b: self.b,
            c: self.c,
        }
    }

    /// `|k b c / (q a t̃) − 1|`
    pub fn product_rule_residual(&self) -> f64 {
        let lhs = self.k * self.b * self.c;
        let rhs = self.nome.q() * self.a * self.t_tilde;
        (lhs / rhs - 1.0).norm()
    }

    pub(crate) fn named_inputs(&self) -> Vec<(&'static str, C64)> {
        let mut v = vec![
            ("a", self.a),
            ("k", self.k),
            ("t_tilde", self.t_tilde),
            ("b", self.b),
            ("c", self.c),
        ];
        if let Some(y) = self.y {
            v.push(("y", y));
        }
        v.push(("p", self.nome.p()));
        v.push(("q", self.nome.q()));
        v
    }

    fn validate(&self) -> Result<()> {
        let zero = C64::new(0.0, 0.0);
        for (name, v) in [("a", self.a), ("k", self.k), ("t_tilde", self.t_tilde), ("b", self.b), ("c", self.c)] {
            if v == zero || !v.is_finite() {
                return Err(Error::Constraint(format!("{name} must be finite and nonzero")));
            }
        }
        let residual = self.product_rule_residual();
        if !(residual < PRODUCT_RULE_TOL) {
            return Err(Error::Constraint(format!(
                "k b c = q a t̃ violated (relative residual {residual:e})"
            )));
        }
        let (n, nome) = (self.n, &self.nome);
        let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
        theta_pochhammer_checked(q, n, nome, "q")?;
        for (name, x) in [("a", self.a), ("k", self.k), ("t_tilde", self.t_tilde)] {
            theta_pochhammer_checked(q * x, 2 * n, nome, &format!("q{name}"))?;
            let t = theta(x, p, policy)?;
            if t.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("θ({name}; p)"),
                    modulus: t.norm(),
                });
            }
        }
        let (a, k, tt, b, c) = (self.a, self.k, self.t_tilde, self.b, self.c);
        for (what, z) in [
            ("aq/b", a * q / b),
            ("aq/c", a * q / c),
            ("kc/t̃", k * c / tt),
            ("kb/t̃", k * b / tt),
            ("t̃q/b", tt * q / b),
            ("t̃q/c", tt * q / c),
            ("b", b),
            ("c", c),
        ] {
            theta_pochhammer_checked(z, n, nome, what)?;
        }
        Ok(())
    }
}

/// The ordered triple `(t̃, a, k)` with its `(b, c)` labels, acted on by the
/// elementary transpositions.
///
/// `s₁` swaps `t̃` and `a` and leaves `(b, c)` alone; `s₂` swaps `a` and `k`
/// and sends `(b, c)` to `(qt̃/c, qt̃/b)`. Both preserve `k b c = q a t̃`.
/// The generators are `S₁(t̃,a,k) = M(t̃,a)` and `S₂(t̃,a,k) = D(t̃;b,c)`, and
/// products follow the twisted rule `SᵢSⱼ := Sᵢ(sⱼ·t) Sⱼ(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamTriple {
    pub t_tilde: C64,
    pub a: C64,
    pub k: C64,
    pub b: C64,
    pub c: C64,
}

impl ParamTriple {
    pub fn s1(&self) -> Self {
        ParamTriple {
            t_tilde: self.a,
            a: self.t_tilde,
            ..*self
        }
    }

    pub fn s2(&self, q: C64) -> Self {
        ParamTriple {
            t_tilde: self.t_tilde,
            a: self.k,
            k: self.a,
            b: q * self.t_tilde / self.c,
            c: q * self.t_tilde / self.b,
        }
    }

    pub fn gen1(&self, n: usize, nome: &NomePair) -> Result<super::BaileyMatrix> {
        super::build_m(n, self.t_tilde, self.a, nome)
    }

    pub fn gen2(&self, n: usize, nome: &NomePair) -> Result<super::DiagonalOp> {
        super::build_d(n, self.t_tilde, self.b, self.c, nome)
    }
}
