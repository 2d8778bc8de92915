//! The functions f, g, u, v as sums of quadratic, min and G terms, with
//! exact point evaluation, interval enclosures and an exact piecewise bound.

use num_traits::{Signed, Zero};

use crate::counting::g_exact;
use crate::rational::{int, ratio, Rational};

use super::forms::{max_at_most, Affine, Quadratic};
use super::interval::{g_interval, IntervalValue};

/// One monomial-like piece of a quadratic, kept in factored form so the
/// natural interval extension stays reasonably tight.
#[derive(Clone, Debug)]
pub enum Atom {
    /// `k · a²`
    Sq(Rational, Affine),
    /// `k · a · b`
    Prod(Rational, Affine, Affine),
    Lin(Affine),
}

#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub atoms: Vec<Atom>,
}

impl Poly {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.atoms.iter().fold(Rational::zero(), |acc, atom| {
            acc + match atom {
                Atom::Sq(k, a) => {
                    let v = a.eval(y);
                    k * &v * &v
                }
                Atom::Prod(k, a, b) => k * a.eval(y) * b.eval(y),
                Atom::Lin(a) => a.eval(y),
            }
        })
    }

    pub fn enclose(&self, region: &[IntervalValue]) -> IntervalValue {
        let mut acc = IntervalValue::point(Rational::zero());
        for atom in &self.atoms {
            let term = match atom {
                Atom::Sq(k, a) => a.enclose(region).sqr().scale(k),
                Atom::Prod(k, a, b) => (&a.enclose(region) * &b.enclose(region)).scale(k),
                Atom::Lin(a) => a.enclose(region),
            };
            acc = &acc + &term;
        }
        acc
    }

    pub fn quadratic(&self, n: usize) -> Quadratic {
        self.atoms.iter().fold(Quadratic::zero(n), |acc, atom| {
            acc.add(&match atom {
                Atom::Sq(k, a) => Quadratic::product(a, a).scale(k),
                Atom::Prod(k, a, b) => Quadratic::product(a, b).scale(k),
                Atom::Lin(a) => Quadratic::from_affine(a),
            })
        })
    }
}

#[derive(Clone, Debug)]
pub enum Term {
    Poly(Poly),
    Min(Poly, Poly),
    G([Affine; 3]),
}

/// A sum of terms over `nvars` variables.
#[derive(Clone, Debug)]
pub struct Expr {
    pub nvars: usize,
    pub terms: Vec<Term>,
}

fn bounds(region: &[IntervalValue]) -> (Vec<Rational>, Vec<Rational>) {
    region.iter().map(|v| (v.lo().clone(), v.hi().clone())).unzip()
}

/// `(2ab + 2bc + 2ca - a² - b² - c²) / 4`, the value of `G` when each
/// argument is at most the sum of the other two.
fn g_quadratic(args: &[Affine; 3], n: usize) -> Quadratic {
    let [a, b, c] = args;
    let two = int(2);
    let m1 = int(-1);
    Poly::new(vec![
        Atom::Prod(two.clone(), a.clone(), b.clone()),
        Atom::Prod(two.clone(), b.clone(), c.clone()),
        Atom::Prod(two, c.clone(), a.clone()),
        Atom::Sq(m1.clone(), a.clone()),
        Atom::Sq(m1.clone(), b.clone()),
        Atom::Sq(m1, c.clone()),
    ])
    .quadratic(n)
    .scale(&ratio(1, 4))
}

/// Alternatives for one term on a box: each is a region (extra
/// half-spaces) with quadratic upper bounds valid on it.
struct Alternative {
    region: Vec<Affine>,
    candidates: Vec<Quadratic>,
}

impl Expr {
    pub fn eval(&self, y: &[Rational]) -> Rational {
        assert_eq!(y.len(), self.nvars);
        self.terms.iter().fold(Rational::zero(), |acc, t| {
            acc + match t {
                Term::Poly(p) => p.eval(y),
                Term::Min(a, b) => a.eval(y).min(b.eval(y)),
                Term::G([a, b, c]) => g_exact(&a.eval(y), &b.eval(y), &c.eval(y)),
            }
        })
    }

    /// Natural interval extension.
    pub fn enclose(&self, region: &[IntervalValue]) -> IntervalValue {
        assert_eq!(region.len(), self.nvars);
        let mut acc = IntervalValue::point(Rational::zero());
        for t in &self.terms {
            let v = match t {
                Term::Poly(p) => p.enclose(region),
                Term::Min(a, b) => a.enclose(region).min(&b.enclose(region)),
                Term::G([a, b, c]) => {
                    g_interval(&a.enclose(region), &b.enclose(region), &c.enclose(region))
                }
            };
            acc = &acc + &v;
        }
        acc
    }

    fn poly_upper(&self, p: &Poly, region: &[IntervalValue]) -> Rational {
        let (lo, hi) = bounds(region);
        let natural = p.enclose(region).hi().clone();
        let centered = p.quadratic(self.nvars).centered(&lo, &hi).1;
        natural.min(centered)
    }

    /// Upper bound used by branch and bound: the natural extension with
    /// quadratic terms replaced by the better of natural and centered forms.
    pub fn quick_upper(&self, region: &[IntervalValue]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, t| {
            acc + match t {
                Term::Poly(p) => self.poly_upper(p, region),
                Term::Min(a, b) => self.poly_upper(a, region).min(self.poly_upper(b, region)),
                Term::G([a, b, c]) => g_interval(
                    &a.enclose(region),
                    &b.enclose(region),
                    &c.enclose(region),
                )
                .hi()
                .clone(),
            }
        })
    }

    /// Whether an argument is non-negative on `region ∩ {cons ≥ 0}`, either
    /// from its range or because it is a positive multiple of a constraint.
    fn nonnegative(arg: &Affine, region: &[IntervalValue], cons: &[Affine]) -> bool {
        if !arg.enclose(region).lo().is_negative() {
            return true;
        }
        cons.iter().any(|c| {
            let Some(i) = c.c.iter().position(|x| !x.is_zero()) else {
                return false;
            };
            let lambda = &arg.c[i] / &c.c[i];
            lambda.is_positive() && &c.scale(&lambda) == arg
        })
    }

    fn alternatives(&self, term: &Term, region: &[IntervalValue], cons: &[Affine]) -> Option<Vec<Alternative>> {
        let n = self.nvars;
        Some(match term {
            Term::Poly(p) => vec![Alternative {
                region: vec![],
                candidates: vec![p.quadratic(n)],
            }],
            Term::Min(a, b) => {
                let (ea, eb) = (a.enclose(region), b.enclose(region));
                let candidates = if ea.hi() <= eb.lo() {
                    vec![a.quadratic(n)]
                } else if eb.hi() <= ea.lo() {
                    vec![b.quadratic(n)]
                } else {
                    vec![a.quadratic(n), b.quadratic(n)]
                };
                vec![Alternative {
                    region: vec![],
                    candidates,
                }]
            }
            Term::G(args) => {
                // With non-negative arguments, G is the product of two of
                // them where the third exceeds their sum, and the symmetric
                // quadratic where no argument exceeds the sum of the others.
                if !args.iter().all(|a| Self::nonnegative(a, region, cons)) {
                    return None;
                }
                let mut out = Vec::new();
                let mut q_region = Vec::new();
                let mut q_possible = true;
                for k in 0..3 {
                    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                    let d = args[k].sub(&args[i]).sub(&args[j]);
                    let range = d.enclose(region);
                    if !range.hi().is_negative() {
                        let region_k = if range.lo().is_negative() { vec![d.clone()] } else { vec![] };
                        out.push(Alternative {
                            region: region_k,
                            candidates: vec![Quadratic::product(&args[i], &args[j])],
                        });
                    }
                    if range.lo().is_positive() {
                        q_possible = false;
                    } else if range.hi().is_positive() {
                        q_region.push(d.scale(&int(-1)));
                    }
                }
                if q_possible {
                    out.push(Alternative {
                        region: q_region,
                        candidates: vec![g_quadratic(args, n)],
                    });
                }
                out
            }
        })
    }

    /// Exact test of `sup { self(y) : y ∈ region, cons(y) ≥ 0 } ≤ bound` by
    /// splitting G terms along their case boundaries and bounding each min
    /// term by one of its arguments. `false` means "not shown", not "false".
    pub fn piecewise_at_most(&self, region: &[IntervalValue], cons: &[Affine], bound: &Rational) -> bool {
        let (lo, hi) = bounds(region);
        let mut per_term = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match self.alternatives(t, region, cons) {
                Some(alts) => per_term.push(alts),
                None => return false,
            }
        }
        // Every combination of regions must be covered by some choice of
        // candidates.
        let mut choice = vec![0usize; per_term.len()];
        loop {
            let mut all_cons = cons.to_vec();
            for (alts, &c) in per_term.iter().zip(&choice) {
                all_cons.extend(alts[c].region.iter().cloned());
            }
            let lists: Vec<&Vec<Quadratic>> =
                per_term.iter().zip(&choice).map(|(alts, &c)| &alts[c].candidates).collect();
            if !any_candidate(lists.as_slice(), &lo, &hi, &all_cons, bound, self.nvars) {
                return false;
            }
            // Next combination.
            let mut t = 0;
            loop {
                if t == choice.len() {
                    return true;
                }
                choice[t] += 1;
                if choice[t] < per_term[t].len() {
                    break;
                }
                choice[t] = 0;
                t += 1;
            }
        }
    }
}

fn any_candidate(
    lists: &[&Vec<Quadratic>],
    lo: &[Rational],
    hi: &[Rational],
    cons: &[Affine],
    bound: &Rational,
    n: usize,
) -> bool {
    let mut pick = vec![0usize; lists.len()];
    let mut sums = Vec::new();
    loop {
        let q = lists
            .iter()
            .zip(&pick)
            .fold(Quadratic::zero(n), |acc, (l, &p)| acc.add(&l[p]));
        sums.push(q);
        let mut t = 0;
        loop {
            if t == pick.len() {
                // Cheap screens first, then exact maximization.
                if sums.iter().any(|q| &q.centered(lo, hi).1 <= bound) {
                    return true;
                }
                return sums.iter().any(|q| max_at_most(q, lo, hi, cons, bound));
            }
            pick[t] += 1;
            if pick[t] < lists[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

fn var(n: usize, i: usize) -> Affine {
    Affine::var(n, i)
}

/// Builds f(x0, x1, y0, y1) for arguments given as affine forms.
fn f_expr(n: usize, x0: Affine, x1: Affine, y0: Affine, y1: Affine) -> Expr {
    let s = x0.add(&x1).add(&y0).add(&y1);
    let one_minus_s = Affine::constant(n, int(1)).sub(&s);
    Expr {
        nvars: n,
        terms: vec![
            Term::Min(
                Poly::new(vec![Atom::Sq(ratio(3, 20), s.clone())]),
                Poly::new(vec![
                    Atom::Prod(int(1), x0.clone(), y0.clone()),
                    Atom::Prod(int(1), x1.clone(), y1.clone()),
                ]),
            ),
            Term::G([x0, y1, one_minus_s.clone()]),
            Term::G([x1, y0, one_minus_s.clone()]),
            Term::Poly(Poly::new(vec![Atom::Sq(ratio(1, 4), one_minus_s)])),
        ],
    }
}

/// `f(x0,x1,y0,y1) = min{0.15 s², x0 y0 + x1 y1} + G(x0,y1,1-s) + G(x1,y0,1-s) + 0.25 (1-s)²`
/// with `s = x0 + x1 + y0 + y1`.
pub fn f() -> Expr {
    f_expr(4, var(4, 0), var(4, 1), var(4, 2), var(4, 3))
}

/// `f(x0, x1, x1, x0)` as a function of `(x0, x1)`.
pub fn f_claim1() -> Expr {
    f_expr(2, var(2, 0), var(2, 1), var(2, 1), var(2, 0))
}

/// `g(x0,x1,y0,y1) = min{0.15 s², x0 y0 + x1 y1} + (x1 + y1)(1-s) + 0.25 (1-s)²`.
pub fn g() -> Expr {
    let n = 4;
    let (x0, x1, y0, y1) = (var(n, 0), var(n, 1), var(n, 2), var(n, 3));
    let s = x0.add(&x1).add(&y0).add(&y1);
    let one_minus_s = Affine::constant(n, int(1)).sub(&s);
    Expr {
        nvars: n,
        terms: vec![
            Term::Min(
                Poly::new(vec![Atom::Sq(ratio(3, 20), s)]),
                Poly::new(vec![
                    Atom::Prod(int(1), x0, y0),
                    Atom::Prod(int(1), x1.clone(), y1.clone()),
                ]),
            ),
            Term::Poly(Poly::new(vec![
                Atom::Prod(int(1), x1.add(&y1), one_minus_s.clone()),
                Atom::Sq(ratio(1, 4), one_minus_s),
            ])),
        ],
    }
}

fn quadratic_2d(a: Rational, b: Rational, c: Rational, d: Rational, e: Rational) -> Expr {
    // a x0² + b x0 x1 + c x1² + d x0 + e x1
    let (x0, x1) = (var(2, 0), var(2, 1));
    Expr {
        nvars: 2,
        terms: vec![Term::Poly(Poly::new(vec![
            Atom::Sq(a, x0.clone()),
            Atom::Prod(b, x0.clone(), x1.clone()),
            Atom::Sq(c, x1.clone()),
            Atom::Lin(x0.scale(&d).add(&x1.scale(&e))),
        ]))],
    }
}

/// `u(x0,x1) = 2x0² - 2x0x1 - 2x1² - x0 + x1`.
pub fn u() -> Expr {
    quadratic_2d(int(2), int(-2), int(-2), int(-1), int(1))
}

/// `v(x0,x1) = 1.6x0² - 0.8x0x1 - 2.4x1² - x0 + x1`.
pub fn v() -> Expr {
    quadratic_2d(ratio(8, 5), ratio(-4, 5), ratio(-12, 5), int(-1), int(1))
}

pub fn eval_f(p: &[Rational; 4]) -> Rational {
    f().eval(p)
}

pub fn eval_g(p: &[Rational; 4]) -> Rational {
    g().eval(p)
}

pub fn eval_u(p: &[Rational; 2]) -> Rational {
    u().eval(p)
}

pub fn eval_v(p: &[Rational; 2]) -> Rational {
    v().eval(p)
}

pub fn enclose_f(region: &[IntervalValue; 4]) -> IntervalValue {
    f().enclose(region)
}

pub fn enclose_g(region: &[IntervalValue; 4]) -> IntervalValue {
    g().enclose(region)
}

pub fn enclose_u(region: &[IntervalValue; 2]) -> IntervalValue {
    u().enclose(region)
}

pub fn enclose_v(region: &[IntervalValue; 2]) -> IntervalValue {
    v().enclose(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn f_examples() {
        let fifth = r(1, 5);
        assert_eq!(eval_f(&[fifth.clone(), fifth.clone(), fifth.clone(), fifth]), r(3, 20));
        assert_eq!(eval_f(&[r(0, 1), r(0, 1), r(0, 1), r(1, 2)]), r(1, 16));
        assert_eq!(eval_f(&[r(1, 2), r(0, 1), r(1, 2), r(0, 1)]), r(3, 20));
    }

    #[test]
    fn u_v_examples() {
        assert_eq!(eval_u(&[r(3, 10), r(1, 10)]), r(-1, 10));
        assert_eq!(eval_v(&[r(1, 4), r(1, 4)]), r(-1, 10));
        assert_eq!(eval_v(&[r(1, 2), r(0, 1)]), r(-1, 10));
    }

    #[test]
    fn g_matches_formula() {
        let p = [r(1, 10), r(1, 5), r(3, 20), r(1, 4)];
        let s: Rational = p.iter().sum();
        let one_s = int(1) - &s;
        let min = (r(3, 20) * &s * &s).min(&p[0] * &p[2] + &p[1] * &p[3]);
        let expect = min + (&p[1] + &p[3]) * &one_s + r(1, 4) * &one_s * &one_s;
        assert_eq!(eval_g(&p), expect);
    }

    #[test]
    fn point_enclosures_are_exact() {
        let p = [r(1, 5), r(1, 5), r(1, 5), r(1, 5)];
        let b = p.clone().map(IntervalValue::point);
        assert_eq!(enclose_f(&b), IntervalValue::point(r(3, 20)));
    }

    #[test]
    fn piecewise_bound_closes_box_around_equality_point() {
        let f = f();
        let w = r(1, 64);
        let region: Vec<IntervalValue> = (0..4)
            .map(|_| IntervalValue::new(r(1, 5) - &w, r(1, 5) + &w))
            .collect();
        let cons = vec![
            Affine::from_ints(&[2, 2, 2, 2], -1, 2),
            Affine::from_ints(&[-1, -1, -1, -1], 1, 1),
        ];
        assert!(f.quick_upper(&region) > r(3, 20));
        assert!(f.piecewise_at_most(&region, &cons, &r(3, 20)));
        assert!(!f.piecewise_at_most(&region, &cons, &(r(3, 20) - r(1, 1_000_000))));
    }
}
