//! The certified-optimization targets: function, root box, half-spaces,
//! threshold and a known near-maximizer.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};

use super::forms::Affine;
use super::functions::{f, f_claim1, u, v, Expr};
use super::interval::IntervalValue;

pub struct Target {
    pub name: &'static str,
    pub labels: Vec<&'static str>,
    pub expr: Expr,
    pub root: Vec<IntervalValue>,
    /// Half-spaces `a(y) ≥ 0` cutting the root box.
    pub constraints: Vec<Affine>,
    pub threshold: Rational,
    pub witness: Option<Vec<Rational>>,
}

pub const TARGET_NAMES: [&str; 4] = ["lemma-inequality", "claim1", "claim2-u", "claim2-v"];

/// Largest denominator used for the rational enclosure of φ.
pub const PHI_MAX_DEN: u64 = 1_000_000;

/// `p/q ≤ (3 - √5)/2`, decided exactly.
pub fn below_phi(r: &Rational) -> bool {
    let (p, q) = (r.numer(), r.denom());
    let t: BigInt = BigInt::from(3) * q - BigInt::from(2) * p;
    !t.is_negative() && BigInt::from(5) * q * q <= &t * &t
}

/// `p/q ≥ (3 - √5)/2`, decided exactly.
pub fn above_phi(r: &Rational) -> bool {
    let (p, q) = (r.numer(), r.denom());
    let t: BigInt = BigInt::from(3) * q - BigInt::from(2) * p;
    t.is_negative() || BigInt::from(5) * q * q >= &t * &t
}

/// Rationals `lo ≤ φ ≤ hi` with denominators at most `max_den`, from the
/// ratios of Fibonacci numbers `F(k) / F(k+2)`, which alternate around φ.
pub fn phi_bracket(max_den: u64) -> (Rational, Rational) {
    let (mut lo, mut hi) = (int(0), int(1));
    let (mut a, mut b) = (0u64, 1u64);
    loop {
        // (a, b) = (F(k), F(k+1)); the ratio is F(k) / F(k+2).
        let den = a + b;
        if den > max_den {
            break;
        }
        let r = ratio(a as i64, den as i64);
        if below_phi(&r) && r > lo {
            lo = r.clone();
        }
        if above_phi(&r) && r < hi {
            hi = r;
        }
        (a, b) = (b, a + b);
    }
    assert!(below_phi(&lo) && above_phi(&hi));
    (lo, hi)
}

fn iv(lo: Rational, hi: Rational) -> IntervalValue {
    IntervalValue::new(lo, hi)
}

pub fn lemma_inequality() -> Target {
    let fifth = ratio(1, 5);
    Target {
        name: "lemma-inequality",
        labels: vec!["x0", "x1", "y0", "y1"],
        expr: f(),
        root: vec![iv(int(0), int(1)); 4],
        constraints: vec![
            // s ≥ 1/2, s ≤ 1
            Affine::from_ints(&[2, 2, 2, 2], -1, 2),
            Affine::from_ints(&[-1, -1, -1, -1], 1, 1),
        ],
        threshold: ratio(3, 20),
        witness: Some(vec![fifth; 4]),
    }
}

pub fn claim1() -> Target {
    Target {
        name: "claim1",
        labels: vec!["x0", "x1"],
        expr: f_claim1(),
        root: vec![iv(int(0), ratio(1, 2)); 2],
        constraints: vec![
            // s = 2(x0 + x1) ∈ [1/2, 1]
            Affine::from_ints(&[4, 4], -1, 4),
            Affine::from_ints(&[-2, -2], 1, 2),
        ],
        threshold: ratio(3, 20),
        witness: Some(vec![ratio(1, 5), ratio(1, 5)]),
    }
}

/// Bounding box of the triangle with vertices (1/3,0), (1/2,0), (1/4,1/4).
fn triangle_box() -> Vec<IntervalValue> {
    vec![iv(ratio(1, 4), ratio(1, 2)), iv(int(0), ratio(1, 4))]
}

fn triangle_edges() -> Vec<Affine> {
    vec![
        // x0 + x1 ≤ 1/2
        Affine::from_ints(&[-2, -2], 1, 2),
        // 3x0 + x1 ≥ 1
        Affine::from_ints(&[3, 1], -1, 1),
    ]
}

/// u over the part of the triangle on or above `x1 = φ_lo x0`.
pub fn claim2_u() -> Target {
    let (lo, hi) = phi_bracket(PHI_MAX_DEN);
    let mut constraints = triangle_edges();
    constraints.push(Affine {
        c: vec![-lo, int(1)],
        k: int(0),
    });
    // The vertex of T on x0 + x1 = 1/2, approximated from above along x1 = φ_hi x0.
    let x0 = int(1) / (int(2) * (int(1) + &hi));
    let x1 = &hi * &x0;
    Target {
        name: "claim2-u",
        labels: vec!["x0", "x1"],
        expr: u(),
        root: triangle_box(),
        constraints,
        threshold: ratio(-1, 10),
        witness: Some(vec![x0, x1]),
    }
}

/// v over the part of the triangle on or below `x1 = φ_hi x0`.
pub fn claim2_v() -> Target {
    let (_, hi) = phi_bracket(PHI_MAX_DEN);
    let mut constraints = triangle_edges();
    constraints.push(Affine {
        c: vec![hi, int(-1)],
        k: int(0),
    });
    Target {
        name: "claim2-v",
        labels: vec!["x0", "x1"],
        expr: v(),
        root: triangle_box(),
        constraints,
        threshold: ratio(-1, 10),
        witness: Some(vec![ratio(2, 5), ratio(1, 10)]),
    }
}

pub fn target_by_name(name: &str) -> Result<Target> {
    match name {
        "lemma-inequality" => Ok(lemma_inequality()),
        "claim1" => Ok(claim1()),
        "claim2-u" => Ok(claim2_u()),
        "claim2-v" => Ok(claim2_v()),
        other => Err(Error::domain(format!(
            "unknown target `{other}` (expected one of {})",
            TARGET_NAMES.join(", ")
        ))),
    }
}

impl Target {
    pub fn inside(&self, y: &[Rational]) -> bool {
        y.iter().zip(&self.root).all(|(v, b)| b.contains(v))
            && self.constraints.iter().all(|c| !c.eval(y).is_negative())
    }
}
