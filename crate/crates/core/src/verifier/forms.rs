//! Affine and quadratic forms in exact rationals, and an exact test of
//! `max q ≤ bound` over a box cut by half-spaces.

use num_traits::{Signed, Zero};

use crate::rational::{int, Rational};

use super::interval::IntervalValue;

/// `c · y + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub c: Vec<Rational>,
    pub k: Rational,
}

impl Affine {
    pub fn constant(n: usize, k: Rational) -> Self {
        Self {
            c: vec![Rational::zero(); n],
            k,
        }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut a = Self::constant(n, Rational::zero());
        a.c[i] = int(1);
        a
    }

    /// `Σ coef_i y_i + k` from small integers over a common denominator.
    pub fn from_ints(coefs: &[i64], k: i64, den: i64) -> Self {
        Self {
            c: coefs.iter().map(|&x| Rational::new(x.into(), den.into())).collect(),
            k: Rational::new(k.into(), den.into()),
        }
    }

    pub fn nvars(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        self.c.iter().zip(y).fold(self.k.clone(), |acc, (c, y)| acc + c * y)
    }

    /// Exact range over a box.
    pub fn range(&self, lo: &[Rational], hi: &[Rational]) -> (Rational, Rational) {
        let mut min = self.k.clone();
        let mut max = self.k.clone();
        for ((c, l), h) in self.c.iter().zip(lo).zip(hi) {
            if c.is_negative() {
                min += c * h;
                max += c * l;
            } else {
                min += c * l;
                max += c * h;
            }
        }
        (min, max)
    }

    pub fn enclose(&self, region: &[IntervalValue]) -> IntervalValue {
        let (lo, hi): (Vec<_>, Vec<_>) = region.iter().map(|v| (v.lo().clone(), v.hi().clone())).unzip();
        let (a, b) = self.range(&lo, &hi);
        IntervalValue::new(a, b)
    }

    pub fn add(&self, other: &Affine) -> Affine {
        Affine {
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
            k: &self.k + &other.k,
        }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Affine {
        Affine {
            c: self.c.iter().map(|a| a * s).collect(),
            k: &self.k * s,
        }
    }

    /// Composes with `y = M z + m`, given as one affine map per `y_i`.
    fn compose(&self, map: &[Affine]) -> Affine {
        let m = map.first().map_or(0, Affine::nvars);
        let mut out = Affine::constant(m, self.k.clone());
        for (c, yi) in self.c.iter().zip(map) {
            if !c.is_zero() {
                out = out.add(&yi.scale(c));
            }
        }
        out
    }
}

/// `yᵀ H y + g · y + k` with `H` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub h: Vec<Vec<Rational>>,
    pub g: Vec<Rational>,
    pub k: Rational,
}

impl Quadratic {
    pub fn zero(n: usize) -> Self {
        Self {
            h: vec![vec![Rational::zero(); n]; n],
            g: vec![Rational::zero(); n],
            k: Rational::zero(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.g.len()
    }

    pub fn from_affine(a: &Affine) -> Self {
        let mut q = Self::zero(a.nvars());
        q.g = a.c.clone();
        q.k = a.k.clone();
        q
    }

    /// `a · b`.
    pub fn product(a: &Affine, b: &Affine) -> Self {
        let n = a.nvars();
        let half = Rational::new(1.into(), 2.into());
        let mut q = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                q.h[i][j] = (&a.c[i] * &b.c[j] + &a.c[j] * &b.c[i]) * &half;
            }
            q.g[i] = &a.c[i] * &b.k + &b.c[i] * &a.k;
        }
        q.k = &a.k * &b.k;
        q
    }

    pub fn add(&self, other: &Quadratic) -> Quadratic {
        let n = self.nvars();
        let mut q = self.clone();
        for i in 0..n {
            for j in 0..n {
                q.h[i][j] += &other.h[i][j];
            }
            q.g[i] += &other.g[i];
        }
        q.k += &other.k;
        q
    }

    pub fn scale(&self, s: &Rational) -> Quadratic {
        Quadratic {
            h: self.h.iter().map(|row| row.iter().map(|x| x * s).collect()).collect(),
            g: self.g.iter().map(|x| x * s).collect(),
            k: &self.k * s,
        }
    }

    pub fn eval(&self, y: &[Rational]) -> Rational {
        let n = self.nvars();
        let mut acc = self.k.clone();
        for i in 0..n {
            let mut row = Rational::zero();
            for j in 0..n {
                if !self.h[i][j].is_zero() {
                    row += &self.h[i][j] * &y[j];
                }
            }
            acc += (row + &self.g[i]) * &y[i];
        }
        acc
    }

    pub fn gradient(&self, y: &[Rational]) -> Vec<Rational> {
        let n = self.nvars();
        (0..n)
            .map(|i| {
                let mut d = self.g[i].clone();
                for j in 0..n {
                    d += int(2) * &self.h[i][j] * &y[j];
                }
                d
            })
            .collect()
    }

    /// Centered-form enclosure over a box: exact value at the midpoint plus
    /// worst-case linear and quadratic deviations.
    pub fn centered(&self, lo: &[Rational], hi: &[Rational]) -> (Rational, Rational) {
        let n = self.nvars();
        let two = int(2);
        let c: Vec<Rational> = lo.iter().zip(hi).map(|(l, h)| (l + h) / &two).collect();
        let r: Vec<Rational> = lo.iter().zip(hi).map(|(l, h)| (h - l) / &two).collect();
        let center = self.eval(&c);
        let grad = self.gradient(&c);
        let mut up = Rational::zero();
        let mut down = Rational::zero();
        for i in 0..n {
            let lin = grad[i].abs() * &r[i];
            up += &lin;
            down -= &lin;
            let hii = &self.h[i][i] * &r[i] * &r[i];
            if hii.is_positive() {
                up += hii;
            } else {
                down += hii;
            }
            for j in 0..n {
                if i != j && !self.h[i][j].is_zero() {
                    let cross = self.h[i][j].abs() * &r[i] * &r[j];
                    up += &cross;
                    down -= cross;
                }
            }
        }
        (&center + down, center + up)
    }

    /// Composes with `y = M z + m`.
    fn compose(&self, map: &[Affine]) -> Quadratic {
        let m = map.first().map_or(0, Affine::nvars);
        let mut out = Quadratic::zero(m);
        out.k = self.k.clone();
        let n = self.nvars();
        for i in 0..n {
            if !self.g[i].is_zero() {
                out = out.add(&Quadratic::from_affine(&map[i]).scale(&self.g[i]));
            }
            for j in 0..n {
                if !self.h[i][j].is_zero() {
                    out = out.add(&Quadratic::product(&map[i], &map[j]).scale(&self.h[i][j]));
                }
            }
        }
        out
    }
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// A face of `{lo ≤ y ≤ hi, cons(y) ≥ 0}` after some constraints were made
/// tight. Constraint ids: `2i`/`2i+1` for the lower/upper bound of original
/// variable `i`, `2n + j` for general constraint `j`.
#[derive(Clone)]
struct Face {
    q: Quadratic,
    lo: Vec<Rational>,
    hi: Vec<Rational>,
    box_ids: Vec<usize>,
    cons: Vec<(Affine, usize)>,
}

impl Face {
    /// Drops the variable `j`, replacing it by `value` (an affine form in the
    /// remaining variables).
    fn eliminate(&self, j: usize, value: Affine) -> Face {
        let m = self.lo.len();
        let map: Vec<Affine> = (0..m)
            .map(|i| match i.cmp(&j) {
                std::cmp::Ordering::Less => Affine::var(m - 1, i),
                std::cmp::Ordering::Equal => value.clone(),
                std::cmp::Ordering::Greater => Affine::var(m - 1, i - 1),
            })
            .collect();
        let keep = |v: &Vec<Rational>| -> Vec<Rational> {
            v.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x.clone()).collect()
        };
        Face {
            q: self.q.compose(&map),
            lo: keep(&self.lo),
            hi: keep(&self.hi),
            box_ids: self
                .box_ids
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, x)| *x)
                .collect(),
            cons: self.cons.iter().map(|(a, id)| (a.compose(&map), *id)).collect(),
        }
    }

    fn feasible(&self, y: &[Rational]) -> bool {
        y.iter().zip(&self.lo).zip(&self.hi).all(|((v, l), h)| l <= v && v <= h)
            && self.cons.iter().all(|(a, _)| !a.eval(y).is_negative())
    }
}

/// Decides `max { q(y) : lo ≤ y ≤ hi, cons(y) ≥ 0 } ≤ bound` exactly. An
/// empty region passes.
pub fn max_at_most(
    q: &Quadratic,
    lo: &[Rational],
    hi: &[Rational],
    cons: &[Affine],
    bound: &Rational,
) -> bool {
    let n = lo.len();
    let face = Face {
        q: q.clone(),
        lo: lo.to_vec(),
        hi: hi.to_vec(),
        box_ids: (0..n).map(|i| 2 * i).collect(),
        cons: cons.iter().cloned().enumerate().map(|(j, a)| (a, 2 * n + j)).collect(),
    };
    face_at_most(face, None, bound)
}

fn face_at_most(mut face: Face, last: Option<usize>, bound: &Rational) -> bool {
    // Constraints that hold on the whole box are redundant; one that fails
    // on the whole box empties the face.
    let mut kept = Vec::with_capacity(face.cons.len());
    for (a, id) in face.cons.drain(..) {
        let (min, max) = a.range(&face.lo, &face.hi);
        if max.is_negative() {
            return true;
        }
        if min.is_negative() {
            kept.push((a, id));
        }
    }
    face.cons = kept;
    let m = face.lo.len();
    if m == 0 {
        return &face.q.k <= bound;
    }
    if &face.q.centered(&face.lo, &face.hi).1 <= bound {
        return true;
    }
    // Interior stationary point of this face.
    let hess: Vec<Vec<Rational>> = face
        .q
        .h
        .iter()
        .map(|row| row.iter().map(|x| x * int(2)).collect())
        .collect();
    let rhs: Vec<Rational> = face.q.g.iter().map(|x| -x).collect();
    if let Some(y) = solve(hess, rhs) {
        if face.feasible(&y) && &face.q.eval(&y) > bound {
            return false;
        }
    }
    let after = |id: usize| last.is_none_or(|l| id > l);
    let mut candidates: Vec<(usize, Option<(usize, bool)>)> = Vec::new();
    for (i, &base) in face.box_ids.iter().enumerate() {
        candidates.push((base, Some((i, false))));
        candidates.push((base + 1, Some((i, true))));
    }
    for (_, id) in &face.cons {
        candidates.push((*id, None));
    }
    candidates.sort_by_key(|c| c.0);
    for (id, which) in candidates {
        if !after(id) {
            continue;
        }
        let facet = match which {
            Some((i, upper)) => {
                let v = if upper { face.hi[i].clone() } else { face.lo[i].clone() };
                face.eliminate(i, Affine::constant(m - 1, v))
            }
            None => {
                let a = &face.cons.iter().find(|(_, k)| *k == id).unwrap().0;
                let Some(j) = (0..m).max_by(|&x, &y| a.c[x].abs().cmp(&a.c[y].abs())) else {
                    continue;
                };
                if a.c[j].is_zero() {
                    continue;
                }
                // y_j = -(k + Σ_{i≠j} c_i y_i) / c_j
                let inv = -(a.c[j].recip());
                let mut value = Affine::constant(m - 1, &a.k * &inv);
                for i in (0..m).filter(|&i| i != j) {
                    value.c[if i < j { i } else { i - 1 }] = &a.c[i] * &inv;
                }
                let (lo_j, hi_j, base) = (face.lo[j].clone(), face.hi[j].clone(), face.box_ids[j]);
                let mut facet = face.clone();
                facet.cons.retain(|(_, k)| *k != id);
                let mut facet = facet.eliminate(j, value.clone());
                facet.cons.push((value.sub(&Affine::constant(m - 1, lo_j)), base));
                facet
                    .cons
                    .push((Affine::constant(m - 1, hi_j).sub(&value), base + 1));
                facet
            }
        };
        if !face_at_most(facet, Some(id), bound) {
            return false;
        }
    }
    true
}
