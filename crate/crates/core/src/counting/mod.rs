//! Exact triple counting, the `G` majorant and the closed-form bounds.

mod engine;
mod structure;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numset::{is_antisymmetric, negate, to_integer_sets, NumSet};
use crate::rational::{int, ratio, to_pair, Rational};

pub use engine::{CountMethod, MAX_CONV_SPAN};
pub use structure::{
    case_bound_checks, decomposition_check, parity_profile, CaseCheck, CaseReport,
    ParityProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    /// a + b = 2c
    ApSum,
    /// a - b = 2c
    ApDiff,
    /// a + b = c
    PlainSum,
    /// a + b = λc
    LambdaSum,
    /// a - b = λc
    LambdaDiff,
}

/// The equation whose solutions are counted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationSpec {
    kind: EquationKind,
    lambda: Option<Rational>,
}

impl EquationSpec {
    pub fn ap_sum() -> Self {
        Self {
            kind: EquationKind::ApSum,
            lambda: None,
        }
    }

    pub fn ap_diff() -> Self {
        Self {
            kind: EquationKind::ApDiff,
            lambda: None,
        }
    }

    pub fn plain_sum() -> Self {
        Self {
            kind: EquationKind::PlainSum,
            lambda: None,
        }
    }

    pub fn lambda_sum(lambda: Rational) -> Result<Self> {
        Self::with_lambda(EquationKind::LambdaSum, lambda)
    }

    pub fn lambda_diff(lambda: Rational) -> Result<Self> {
        Self::with_lambda(EquationKind::LambdaDiff, lambda)
    }

    fn with_lambda(kind: EquationKind, lambda: Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::domain("lambda must be positive"));
        }
        Ok(Self {
            kind,
            lambda: Some(lambda),
        })
    }

    /// Builds a spec from its kind, requiring `lambda` exactly for the
    /// λ-kinds.
    pub fn new(kind: EquationKind, lambda: Option<Rational>) -> Result<Self> {
        match (kind, lambda) {
            (EquationKind::LambdaSum | EquationKind::LambdaDiff, Some(l)) => {
                Self::with_lambda(kind, l)
            }
            (EquationKind::LambdaSum | EquationKind::LambdaDiff, None) => {
                Err(Error::domain("lambda equations need a lambda value"))
            }
            (_, Some(_)) => Err(Error::domain(
                "lambda is only meaningful for lambda equations",
            )),
            (kind, None) => Ok(Self { kind, lambda: None }),
        }
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn lambda(&self) -> Option<&Rational> {
        self.lambda.as_ref()
    }

    /// +1 for `a + b`, -1 for `a - b`.
    pub fn sign(&self) -> i64 {
        match self.kind {
            EquationKind::ApDiff | EquationKind::LambdaDiff => -1,
            _ => 1,
        }
    }

    /// The coefficient of `c`.
    pub fn multiplier(&self) -> Rational {
        match self.kind {
            EquationKind::ApSum | EquationKind::ApDiff => int(2),
            EquationKind::PlainSum => int(1),
            EquationKind::LambdaSum | EquationKind::LambdaDiff => {
                self.lambda.clone().expect("validated at construction")
            }
        }
    }

    /// Whether `(a, b, c)` solves the equation.
    pub fn holds(&self, a: &Rational, b: &Rational, c: &Rational) -> bool {
        let lhs = if self.sign() > 0 { a + b } else { a - b };
        lhs == self.multiplier() * c
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.sign() > 0 { '+' } else { '-' };
        match self.kind {
            EquationKind::ApSum | EquationKind::ApDiff => write!(f, "a{op}b=2c"),
            EquationKind::PlainSum => write!(f, "a+b=c"),
            _ => write!(
                f,
                "a{op}b=({})c",
                crate::rational::fmt_rational(&self.multiplier())
            ),
        }
    }
}

/// One closed-form bound compared against a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub value: Rational,
    /// `value - count`; negative means the bound is violated.
    pub slack: Rational,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, value: Rational, count: u64) -> Self {
        let slack = &value - Rational::from_integer(BigInt::from(count));
        Self {
            name: name.into(),
            value,
            slack,
        }
    }

    pub fn violated(&self) -> bool {
        self.slack.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: u64,
    pub sizes: (usize, usize, usize),
    pub bounds: Vec<BoundCheck>,
}

#[derive(Serialize, Deserialize)]
struct BoundDoc {
    name: String,
    value_num: String,
    value_den: String,
    slack_num: String,
    slack_den: String,
}

#[derive(Serialize, Deserialize)]
struct CountReportDoc {
    count: u64,
    sizes: [usize; 3],
    bounds: Vec<BoundDoc>,
}

impl CountReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().filter(|b| b.violated())
    }

    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// The structured document: `{count, sizes, bounds: [...]}` with every
    /// rational as a numerator/denominator pair of decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = CountReportDoc {
            count: self.count,
            sizes: [self.sizes.0, self.sizes.1, self.sizes.2],
            bounds: self
                .bounds
                .iter()
                .map(|b| {
                    let (value_num, value_den) = to_pair(&b.value);
                    let (slack_num, slack_den) = to_pair(&b.slack);
                    BoundDoc {
                        name: b.name.clone(),
                        value_num,
                        value_den,
                        slack_num,
                        slack_den,
                    }
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("report serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Option<Self> {
        let doc: CountReportDoc = serde_json::from_value(value.clone()).ok()?;
        let bounds = doc
            .bounds
            .into_iter()
            .map(|b| {
                Some(BoundCheck {
                    name: b.name,
                    value: crate::rational::from_pair(&b.value_num, &b.value_den)?,
                    slack: crate::rational::from_pair(&b.slack_num, &b.slack_den)?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            count: doc.count,
            sizes: (doc.sizes[0], doc.sizes[1], doc.sizes[2]),
            bounds,
        })
    }
}

/// Number of ordered triples in `A x B x C` solving `eq`.
pub fn count_only(a: &NumSet, b: &NumSet, c: &NumSet, eq: &EquationSpec, method: CountMethod) -> u64 {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return 0;
    }
    let (sets, _) = to_integer_sets(&[a.clone(), b.clone(), c.clone()]);
    let ints: Vec<Vec<BigInt>> = sets
        .iter()
        .map(|s| s.integers().expect("denominators cleared"))
        .collect();
    let mult = eq.multiplier();
    engine::count(
        &engine::Normalized {
            a: &ints[0],
            b: &ints[1],
            c: &ints[2],
            sign: eq.sign(),
            p: mult.numer(),
            q: mult.denom(),
        },
        method,
    )
}

/// Counts the ordered triples `(a, b, c)` in `A x B x C` solving `eq` and
/// attaches every closed-form bound that applies to the configuration.
pub fn count_triples(a: &NumSet, b: &NumSet, c: &NumSet, eq: &EquationSpec) -> CountReport {
    count_triples_with(a, b, c, eq, CountMethod::Auto)
}

pub fn count_triples_with(
    a: &NumSet,
    b: &NumSet,
    c: &NumSet,
    eq: &EquationSpec,
    method: CountMethod,
) -> CountReport {
    let count = count_only(a, b, c, eq, method);
    let (na, nb, nc) = (a.len(), b.len(), c.len());
    let mut bounds = Vec::new();
    match eq.kind() {
        EquationKind::ApSum => {
            if *c == a.union(b) {
                bounds.push(BoundCheck::new("main", bound_main(na as u64, nb as u64), count));
            }
            bounds.push(BoundCheck::new(
                "recasting",
                recast_bound(na as u64, nb as u64, nc as u64),
                count,
            ));
        }
        EquationKind::ApDiff => {
            if a == b && a == c {
                bounds.push(BoundCheck::new("principal", bound_principal(na as u64), count));
                if is_antisymmetric(a) {
                    bounds.push(BoundCheck::new(
                        "antisymmetric",
                        bound_antisymmetric(na as u64),
                        count,
                    ));
                }
            }
        }
        EquationKind::PlainSum => {
            if let Ok(v) = bound_leqfis(na as u64, nb as u64, nc as u64) {
                bounds.push(BoundCheck::new("leqfis", v, count));
            }
        }
        // No extremal bound is known for fixed lambda.
        EquationKind::LambdaSum | EquationKind::LambdaDiff => {}
    }
    CountReport {
        count,
        sizes: (na, nb, nc),
        bounds,
    }
}

/// Triples `a - b = 2c` with `a, b, c` in `A`.
pub fn count_diff(a: &NumSet) -> CountReport {
    let report = count_triples(a, a, a, &EquationSpec::ap_diff());
    if is_antisymmetric(a) {
        let neg = negate(a);
        let doubled = count_only(a, &neg, &a.union(&neg), &EquationSpec::ap_sum(), CountMethod::Auto);
        assert_eq!(
            doubled,
            2 * report.count,
            "antisymmetric doubling identity failed for {a}"
        );
    }
    report
}

/// The piecewise-quadratic majorant. With `(ξ, η, ζ)` the sorted triple it
/// is `ξη` when `ζ ≥ ξ + η` and `ξη - (ξ + η - ζ)² / 4` otherwise.
pub fn g_exact(x: &Rational, y: &Rational, z: &Rational) -> Rational {
    let mut v = [x, y, z];
    v.sort();
    let [xi, eta, zeta] = v;
    let prod = xi * eta;
    let excess = xi + eta - zeta;
    if excess.is_positive() {
        prod - &excess * &excess / int(4)
    } else {
        prod
    }
}

fn n(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `0.15 (nA + nB)² + 0.5 (nA + nB)`.
pub fn bound_main(na: u64, nb: u64) -> Rational {
    let t = n(na + nb);
    ratio(3, 20) * &t * &t + ratio(1, 2) * t
}

/// `0.3 n² + 0.5 n`.
pub fn bound_antisymmetric(size: u64) -> Rational {
    let t = n(size);
    ratio(3, 10) * &t * &t + ratio(1, 2) * t
}

/// `0.5 n² + 0.5 n`.
pub fn bound_principal(size: u64) -> Rational {
    let t = n(size);
    ratio(1, 2) * &t * &t + ratio(1, 2) * t
}

/// `nA nB - (nA + nB - nC)² / 4 + 1/4`, valid for
/// `max(nA, nB) ≤ nC ≤ nA + nB`.
pub fn bound_leqfis(na: u64, nb: u64, nc: u64) -> Result<Rational> {
    if nc < na.max(nb) {
        return Err(Error::domain(format!(
            "max(|A|, |B|) <= |C| fails: max({na}, {nb}) > {nc}"
        )));
    }
    if nc > na + nb {
        return Err(Error::domain(format!(
            "|C| <= |A| + |B| fails: {nc} > {na} + {nb}"
        )));
    }
    let gap = n(na + nb - nc);
    Ok(n(na * nb) - &gap * &gap / int(4) + ratio(1, 4))
}

/// `G(nA, nB, nC) + 1/4`.
pub fn recast_bound(na: u64, nb: u64, nc: u64) -> Rational {
    g_exact(&n(na), &n(nb), &n(nc)) + ratio(1, 4)
}
