//! Exact randomized checks of the G identities and of the facts about u, v
//! and g used to reduce the four-variable inequality.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::counting::g_exact;
use crate::rational::{fmt_rational, int, plus_part, ratio, Rational};

use super::forms::{solve, Quadratic};
use super::functions::{eval_f, eval_g, eval_u, eval_v, u, v};
use super::targets::{above_phi, below_phi};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub checked: u64,
    /// Failing arguments, at most `FAILURE_LIMIT`.
    pub failures: Vec<Vec<String>>,
    pub failure_count: u64,
}

impl IdentityReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn record(&mut self, ok: bool, args: &[&Rational]) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < FAILURE_LIMIT {
                self.failures.push(args.iter().map(|a| fmt_rational(a)).collect());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const FAILURE_LIMIT: usize = 20;

/// A random non-negative rational with a small denominator.
fn sample(rng: &mut StdRng, max_num: i64) -> Rational {
    ratio(rng.gen_range(0..=max_num), rng.gen_range(1..=12))
}

/// `G((x+y)/2, (x+y)/2, z) = G(x,y,z) + (x-y)²/4 - (|x-y| - z)₊²/4`, and the
/// resulting inequality `G((x+y)/2, (x+y)/2, z) ≥ G(x,y,z)`, on random
/// non-negative triples. Every fifth trial places `z` on one of the case
/// boundaries `x`, `(x+y)/2`, `y`, or at `0` or `x+y`.
pub fn verify_balancing_identity(trials: u64, seed: u64) -> (IdentityReport, IdentityReport) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut identity = IdentityReport::new("balancing identity");
    let mut inequality = IdentityReport::new("balancing inequality");
    let quarter = ratio(1, 4);
    for t in 0..trials {
        let x = sample(&mut rng, 60);
        let y = sample(&mut rng, 60);
        let z = match t % 5 {
            0 => match rng.gen_range(0..5) {
                0 => x.clone(),
                1 => (&x + &y) / int(2),
                2 => y.clone(),
                3 => int(0),
                _ => &x + &y,
            },
            _ => sample(&mut rng, 60),
        };
        let m = (&x + &y) / int(2);
        let lhs = g_exact(&m, &m, &z);
        let g = g_exact(&x, &y, &z);
        let d = &x - &y;
        let ad = if d < int(0) { -d.clone() } else { d.clone() };
        let rhs = &g + &quarter * &d * &d - &quarter * plus_part(&(ad - &z)).pow(2);
        identity.record(lhs == rhs, &[&x, &y, &z]);
        inequality.record(lhs >= g, &[&x, &y, &z]);
    }
    (identity, inequality)
}

/// `G(x, x, z) ≤ xz - z²/4` for `0 ≤ z ≤ 2x`, including `z = x` and
/// `z = 2x`.
pub fn verify_xy_lemma(trials: u64, seed: u64) -> IdentityReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = IdentityReport::new("x=y lemma");
    for t in 0..trials {
        let x = sample(&mut rng, 60);
        let z = match t % 4 {
            0 => x.clone(),
            1 => &x * int(2),
            _ => &x * int(2) * ratio(rng.gen_range(0..=1000), 1000),
        };
        let ok = g_exact(&x, &x, &z) <= &x * &z - &z * &z / int(4);
        report.record(ok, &[&x, &z]);
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub function: String,
    pub point: [String; 2],
    pub value: String,
    pub line: String,
    pub on_line: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPointReport {
    pub points: Vec<CriticalPoint>,
}

impl CriticalPointReport {
    pub fn confirmed(&self) -> bool {
        let expect = [["3/10", "1/10"], ["7/20", "3/20"]];
        self.points.len() == 2
            && self
                .points
                .iter()
                .zip(expect)
                .all(|(p, e)| p.on_line && p.point[0] == e[0] && p.point[1] == e[1])
    }
}

fn stationary(q: &Quadratic) -> Option<Vec<Rational>> {
    let hess = q
        .h
        .iter()
        .map(|row| row.iter().map(|x| x * int(2)).collect())
        .collect();
    solve(hess, q.g.iter().map(|x| -x).collect())
}

/// Solves `∇u = 0` and `∇v = 0` exactly and checks the solutions lie on
/// `3x0 + x1 = 1` and `x0 + x1 = 1/2` respectively.
pub fn critical_point_report() -> CriticalPointReport {
    let mut points = Vec::new();
    for (name, expr, line) in [("u", u(), "3x0+x1=1"), ("v", v(), "x0+x1=1/2")] {
        let super::functions::Term::Poly(p) = &expr.terms[0] else {
            unreachable!("u and v are single quadratics")
        };
        let q = p.quadratic(2);
        let y = stationary(&q).expect("u and v have nondegenerate Hessians");
        let on_line = match name {
            "u" => int(3) * &y[0] + &y[1] == int(1),
            _ => &y[0] + &y[1] == ratio(1, 2),
        };
        points.push(CriticalPoint {
            function: name.into(),
            point: [fmt_rational(&y[0]), fmt_rational(&y[1])],
            value: fmt_rational(&q.eval(&y)),
            line: line.into(),
            on_line,
        });
    }
    CriticalPointReport { points }
}

/// `f(x0,x1,x1,x0)` against the specialized form
/// `min{0.15s², 2x0x1} + G(x0,x0,1-s) + G(x1,x1,1-s) + 0.25(1-s)²`.
pub fn verify_claim1_specialization(trials: u64, seed: u64) -> IdentityReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = IdentityReport::new("claim-1 specialization");
    for _ in 0..trials {
        let x0 = sample(&mut rng, 6) / int(12);
        let x1 = sample(&mut rng, 6) / int(12);
        let s = int(2) * (&x0 + &x1);
        let t = int(1) - &s;
        let direct = (ratio(3, 20) * &s * &s).min(int(2) * &x0 * &x1)
            + g_exact(&x0, &x0, &t)
            + g_exact(&x1, &x1, &t)
            + ratio(1, 4) * &t * &t;
        let via_f = eval_f(&[x0.clone(), x1.clone(), x1.clone(), x0.clone()]);
        report.record(direct == via_f, &[&x0, &x1]);
    }
    report
}

/// Random point of the triangle `x0+x1 ≤ 1/2, 3x0+x1 ≥ 1, x1 ≥ 0`, strictly
/// inside, as a convex combination of its vertices.
fn triangle_point(rng: &mut StdRng) -> [Rational; 2] {
    let (a, b) = loop {
        let a = rng.gen_range(1..1000);
        let b = rng.gen_range(1..1000);
        if a + b < 1000 {
            break (a, b);
        }
    };
    let (la, lb) = (ratio(a, 1000), ratio(b, 1000));
    let lc = int(1) - &la - &lb;
    // vertices (1/3,0), (1/2,0), (1/4,1/4)
    let x0 = &la * ratio(1, 3) + &lb * ratio(1, 2) + &lc * ratio(1, 4);
    let x1 = &lc * ratio(1, 4);
    [x0, x1]
}

/// At points strictly inside T (above `x1 = φ x0`) `min{u,v} = u`, and
/// strictly inside R (below it) `min{u,v} = v`.
pub fn verify_min_side(trials: u64, seed: u64) -> IdentityReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = IdentityReport::new("min{u,v} side");
    let mut done = 0;
    while done < trials {
        let p = triangle_point(&mut rng);
        let slope = &p[1] / &p[0];
        let (uu, vv) = (eval_u(&p), eval_v(&p));
        if !below_phi(&slope) {
            report.record(uu <= vv, &[&p[0], &p[1]]);
        } else if !above_phi(&slope) {
            report.record(vv <= uu, &[&p[0], &p[1]]);
        } else {
            continue;
        }
        done += 1;
    }
    report
}

/// Replacing `x0, y0` by their average and `x1, y1` by theirs does not
/// decrease `g`, for non-negative quadruples with `s ≤ 1`.
pub fn verify_g_balancing(trials: u64, seed: u64) -> IdentityReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = IdentityReport::new("g balancing");
    for _ in 0..trials {
        let p: [Rational; 4] = std::array::from_fn(|_| sample(&mut rng, 12) / int(48));
        let s: Rational = p.iter().sum();
        if s > int(1) {
            continue;
        }
        let a0 = (&p[0] + &p[2]) / int(2);
        let a1 = (&p[1] + &p[3]) / int(2);
        let balanced = eval_g(&[a0.clone(), a1.clone(), a0, a1]);
        report.record(balanced >= eval_g(&p), &[&p[0], &p[1], &p[2], &p[3]]);
    }
    report
}
