//! Closed-form bounds, the dyadic degree decomposition, and a numeric
//! certifier for the doubly-exponential recurrence solution.
//!
//! Everything here is binary64. Constants hidden by `O(·)` are explicit
//! parameters defaulting to one, and logarithms are natural and clamped
//! below at one (see [`clamped_log`]) so every formula stays positive when
//! `n ≈ k³`.

// `!(x >= c)` is deliberate: it rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Relative tolerance for identities along a recurrence trace.
pub const IDENTITY_TOL: f64 = 1e-12;

/// `max(1, ln x)`.
pub fn clamped_log(x: f64) -> f64 {
    if x > 0.0 {
        x.ln().max(1.0)
    } else {
        1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Number of non-overlapping `k`-rich lenses.
    Thm1Count,
    /// Total degree of such a family.
    Thm1Degree,
    /// Degree bound from the three-dimensional point-line argument.
    GkDegree,
    /// Non-overlapping 2-rich lenses, `n^{3/2} log n`.
    Mt,
    /// Point-circle incidences.
    PtCircle,
    /// Lens-circle incidences for `m` non-overlapping lenses.
    LensCircle,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Thm1Count,
        BoundKind::Thm1Degree,
        BoundKind::GkDegree,
        BoundKind::Mt,
        BoundKind::PtCircle,
        BoundKind::LensCircle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Thm1Count => "thm1-count",
            BoundKind::Thm1Degree => "thm1-degree",
            BoundKind::GkDegree => "gk-degree",
            BoundKind::Mt => "mt",
            BoundKind::PtCircle => "pt-circle",
            BoundKind::LensCircle => "lens-circle",
        }
    }

    fn uses_k(self) -> bool {
        matches!(
            self,
            BoundKind::Thm1Count | BoundKind::Thm1Degree | BoundKind::GkDegree
        )
    }

    fn uses_m(self) -> bool {
        matches!(self, BoundKind::PtCircle | BoundKind::LensCircle)
    }
}

impl FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown bound kind {s:?}")))
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    /// Number of circles.
    pub n: f64,
    /// Number of points (or lenses, for `lens-circle`).
    pub m: f64,
    pub k: f64,
    /// Multiplicative constant applied to the whole formula.
    pub a: f64,
}

impl BoundParams {
    pub fn new(n: f64, m: f64, k: f64) -> Self {
        BoundParams { n, m, k, a: 1.0 }
    }
}

pub fn bound_eval(kind: BoundKind, p: &BoundParams) -> Result<f64> {
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{name} must be positive, got {v}"
            )))
        }
    };
    positive("n", p.n)?;
    positive("a", p.a)?;
    if kind.uses_k() {
        positive("k", p.k)?;
        if p.k < 2.0 {
            return Err(Error::InvalidInput(format!(
                "k must be at least 2, got {}",
                p.k
            )));
        }
    }
    if kind.uses_m() {
        positive("m", p.m)?;
    }
    let (n, m, k) = (p.n, p.m, p.k);
    let value = match kind {
        BoundKind::Thm1Count => n.powf(1.5) * clamped_log(n / k.powi(3)) / k.powf(2.5) + n / k,
        BoundKind::Thm1Degree => n.powf(1.5) * clamped_log(n / k.powi(3)) / k.powf(1.5) + n,
        BoundKind::GkDegree => n * n / k.powi(3) + n,
        BoundKind::Mt => n.powf(1.5) * clamped_log(n),
        BoundKind::PtCircle => {
            m.powf(2.0 / 3.0) * n.powf(2.0 / 3.0)
                + m.powf(6.0 / 11.0)
                    * n.powf(9.0 / 11.0)
                    * clamped_log(m.powi(3) / n).powf(2.0 / 11.0)
                + m
                + n
        }
        BoundKind::LensCircle => {
            m.powf(0.6) * n.powf(0.6) * clamped_log(m.powi(3) / (n * n)).powf(0.4) + n
        }
    };
    Ok(p.a * value)
}

/// Dyadic decomposition of a family's degree by richness class.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicSum {
    pub j0: u32,
    pub sum: f64,
    pub closed_form: f64,
    pub ratio: f64,
}

/// Sums the per-class degree bounds for classes `2^{-j} n^{1/3}`,
/// `j = 1..=j0`, plus the linear term, and compares with
/// `A n^{3/2} L(n/k³)/k^{3/2} + n`.
pub fn dyadic_degree_sum(n: f64, k: f64, a: f64) -> Result<DyadicSum> {
    if !(k >= 2.0) || !(n > 0.0) || !(a > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need k >= 2, n > 0, A > 0 (n={n}, k={k}, A={a})"
        )));
    }
    let k3 = k.powi(3);
    if k3 > n {
        return Err(Error::InvalidInput(format!(
            "k={k} exceeds n^(1/3) for n={n}"
        )));
    }
    // smallest j with 2^{-j} n^{1/3} <= k, i.e. n <= k³·8^j
    let mut j0 = 0u32;
    while n > k3 * 8f64.powi(j0 as i32) {
        j0 += 1;
    }
    let cube_root = n.cbrt();
    let terms: f64 = (1..=j0)
        .map(|j| {
            let lo = cube_root / 2f64.powi(j as i32);
            let hi = 2.0 * lo;
            hi * a * n.powf(1.5) * clamped_log(8f64.powi(j as i32)) / lo.powf(2.5)
        })
        .sum();
    let sum = terms + n;
    let closed_form = a * n.powf(1.5) * clamped_log(n / k3) / k.powf(1.5) + n;
    Ok(DyadicSum {
        j0,
        sum,
        closed_form,
        ratio: sum / closed_form,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub j: u32,
    pub n_j: f64,
    pub d_j: f64,
    /// `A₀ z^{1/2} (3A)^j n_j^{3/2} / k^{3/2}`.
    pub bound_j: f64,
}

/// One numerically checked step of the induction chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCheck {
    pub j: u32,
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCertificate {
    pub n: f64,
    pub k: f64,
    pub a: f64,
    pub a0: f64,
    /// `z₀ = n/k³, z₁ = √z₀, …, z_s = z`.
    pub z_sequence: Vec<f64>,
    pub z: f64,
    pub s: u32,
    pub trace: Vec<TraceRow>,
    pub checks: Vec<ChainCheck>,
    pub max_identity_rel_err: f64,
    /// `b = log₂ B` with `B = 3^{5/2} A`.
    pub b: f64,
    /// `A₀ z^{1/2} B^s n^{3/2}/k^{3/2}`.
    pub final_bound: f64,
    pub a1: f64,
}

impl RecurrenceCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn rel_err(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

pub fn recurrence_certify(n: f64, k: f64, a: f64, a0: f64) -> Result<RecurrenceCertificate> {
    if !(k >= 2.0) || !(a >= 1.0) || !(a0 >= 1.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need k >= 2, A >= 1, A0 >= 1 (k={k}, A={a}, A0={a0})"
        )));
    }
    let k3 = k.powi(3);
    let sqrt2 = std::f64::consts::SQRT_2;
    if n <= k3 * sqrt2 {
        return Err(Error::OutOfDomain(format!(
            "need n > k³·√2, got n={n}, k³·√2={}",
            k3 * sqrt2
        )));
    }

    let mut z_sequence = vec![n / k3];
    while *z_sequence.last().expect("nonempty") > 2.0 {
        let next = z_sequence.last().expect("nonempty").sqrt();
        z_sequence.push(next);
    }
    let z = *z_sequence.last().expect("nonempty");
    let s = (z_sequence.len() - 1) as u32;
    let kp = k.powf(1.5);
    let zh = z.sqrt();

    let trace: Vec<TraceRow> = (0..=s)
        .map(|j| {
            let e = 2f64.powi(j as i32);
            let n_j = k3 * z.powf(e);
            TraceRow {
                j,
                n_j,
                d_j: z.powf(e / 2.0),
                bound_j: a0 * zh * (3.0 * a).powi(j as i32) * n_j.powf(1.5) / kp,
            }
        })
        .collect();

    let le = |lhs: f64, rhs: f64| lhs <= rhs * (1.0 + IDENTITY_TOL);
    let mut checks = Vec::new();
    let mut max_identity_rel_err = 0.0f64;

    // base case F(k³z, k) <= A₀k³z² must be dominated by the j = 0 bound
    let base = a0 * k3 * z * z;
    checks.push(ChainCheck {
        j: 0,
        name: "base-case",
        lhs: base,
        rhs: trace[0].bound_j,
        pass: le(base, trace[0].bound_j),
    });
    checks.push(ChainCheck {
        j: s,
        name: "endpoint",
        lhs: trace[s as usize].n_j,
        rhs: n,
        pass: rel_err(trace[s as usize].n_j, n) < 1e-10,
    });

    for j in 0..s {
        let cur = &trace[j as usize];
        let next = &trace[j as usize + 1];
        let d2 = cur.d_j * cur.d_j;
        let d3 = d2 * cur.d_j;
        let x = next.n_j.powf(1.5) / kp;

        // n_{j+1}/D_j² = n_j
        checks.push(ChainCheck {
            j,
            name: "split",
            lhs: next.n_j / d2,
            rhs: cur.n_j,
            pass: rel_err(next.n_j / d2, cur.n_j) < IDENTITY_TOL,
        });
        // F(AD², ·) <= F(n_j, ·) needs A·D_j² <= n_j
        checks.push(ChainCheck {
            j,
            name: "small-term",
            lhs: a * d2,
            rhs: cur.n_j,
            pass: le(a * d2, cur.n_j),
        });
        // and F(n_j) <= A D³ F(n_j) needs A D³ >= 1
        checks.push(ChainCheck {
            j,
            name: "absorb",
            lhs: 1.0,
            rhs: a * d3,
            pass: le(1.0, a * d3),
        });
        // D_j² n_{j+1} = n_{j+1}^{3/2}/k^{3/2} = D_j³ n_j^{3/2}/k^{3/2} = D_j² n_j²/k³
        let forms = [
            d2 * next.n_j,
            d3 * cur.n_j.powf(1.5) / kp,
            d2 * cur.n_j * cur.n_j / k3,
        ];
        let err = forms.iter().map(|&f| rel_err(f, x)).fold(0.0, f64::max);
        max_identity_rel_err = max_identity_rel_err.max(err);
        checks.push(ChainCheck {
            j,
            name: "identity",
            lhs: d2 * next.n_j,
            rhs: x,
            pass: err < IDENTITY_TOL,
        });
        // 2A D³ · bound_j = 2·3^j A₀ z^{1/2} A^{j+1} n_{j+1}^{3/2}/k^{3/2}
        let scaled = 2.0 * a * d3 * cur.bound_j;
        let rewritten = 2.0 * 3f64.powi(j as i32) * a0 * zh * a.powi(j as i32 + 1) * x;
        checks.push(ChainCheck {
            j,
            name: "rewrite",
            lhs: scaled,
            rhs: rewritten,
            pass: rel_err(scaled, rewritten) < IDENTITY_TOL,
        });
        // closing inequality
        let lhs = rewritten + a * d2 * next.n_j;
        checks.push(ChainCheck {
            j,
            name: "close",
            lhs,
            rhs: next.bound_j,
            pass: le(lhs, next.bound_j),
        });
    }

    // k replaced by k/3^s at depth s
    let big_b = 3f64.powf(2.5) * a;
    let b = big_b.log2();
    let final_bound = a0 * zh * big_b.powi(s as i32) * n.powf(1.5) / kp;
    let shifted =
        a0 * zh * (3.0 * a).powi(s as i32) * n.powf(1.5) / (k / 3f64.powi(s as i32)).powf(1.5);
    checks.push(ChainCheck {
        j: s,
        name: "rescale",
        lhs: shifted,
        rhs: final_bound,
        pass: rel_err(shifted, final_bound) < 1e-10,
    });
    let log_ratio = (n / k3).log2() / z.log2();
    checks.push(ChainCheck {
        j: s,
        name: "power-of-two",
        lhs: 2f64.powi(s as i32),
        rhs: log_ratio,
        pass: rel_err(2f64.powi(s as i32), log_ratio) < 1e-10,
    });
    let a1 = a0 * sqrt2 / 0.5f64.powf(b);
    let coeff = a0 * zh / z.log2().powf(b);
    checks.push(ChainCheck {
        j: s,
        name: "constant",
        lhs: coeff,
        rhs: a1,
        pass: le(coeff, a1),
    });

    Ok(RecurrenceCertificate {
        n,
        k,
        a,
        a0,
        z_sequence,
        z,
        s,
        trace,
        checks,
        max_identity_rel_err,
        b,
        final_bound,
        a1,
    })
}
