//! Truncated Taylor-series arithmetic. A jet of order K stores the
//! coefficients c_0..c_K of f around a point, with c_k = f^{(k)}/k!, and the
//! elementary operations propagate them exactly (to roundoff) through
//! products, quotients, exp, ln and real powers.

/// Taylor coefficients c_k = f^{(k)}/k! of a smooth function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Jet {
    pub fn zeros(order: usize) -> Self {
        Jet {
            c: vec![0.0; order + 1],
        }
    }

    pub fn constant(order: usize, v: f64) -> Self {
        let mut j = Jet::zeros(order);
        j.c[0] = v;
        j
    }

    /// The identity function evaluated at `v`: value v, first derivative 1.
    pub fn variable(order: usize, v: f64) -> Self {
        let mut j = Jet::zeros(order);
        j.c[0] = v;
        if order >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    pub fn from_coefficients(c: Vec<f64>) -> Self {
        assert!(!c.is_empty());
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative value, i.e. c_k · k!.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * factorial(k)
    }

    pub fn neg(&self) -> Jet {
        Jet {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|x| a * x).collect(),
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        assert_eq!(self.order(), other.order());
        Jet {
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Cauchy product truncated at the jet order.
    pub fn mul(&self, other: &Jet) -> Jet {
        assert_eq!(self.order(), other.order());
        let n = self.c.len();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.c[i] * other.c[k - i];
            }
            out[k] = acc;
        }
        Jet { c: out }
    }

    /// Reciprocal; requires a nonzero value coefficient.
    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let mut out = vec![0.0; n];
        out[0] = 1.0 / self.c[0];
        for k in 1..n {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += self.c[i] * out[k - i];
            }
            out[k] = -acc / self.c[0];
        }
        Jet { c: out }
    }

    /// exp ∘ f via the recurrence k·b_k = Σ_{j=1..k} j·a_j·b_{k−j}.
    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut out = vec![0.0; n];
        out[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        Jet { c: out }
    }

    /// ln ∘ f; requires a positive value coefficient.
    pub fn ln(&self) -> Jet {
        let n = self.c.len();
        let mut out = vec![0.0; n];
        out[0] = self.c[0].ln();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * out[j] * self.c[k - j];
            }
            out[k] = (self.c[k] - acc / k as f64) / self.c[0];
        }
        Jet { c: out }
    }

    /// f^p for real p, as exp(p·ln f); requires a positive value coefficient.
    pub fn powf(&self, p: f64) -> Jet {
        self.ln().scale(p).exp()
    }
}
