//! Generating functions of a classified grammar and the radius search.
//!
//! Class `C_i` with variants `p` (multiplicity `n_ip`, children `a_ip1`,
//! `a_ip2`) gets
//!
//! ```text
//! V_i(z) = sum_p n_ip * z^k * V_{a_ip1}(z) * V_{a_ip2}(z) / sum_q n_iq
//! ```
//!
//! with `k = 1` ([`KMode::Unit`]) or `k = 1 / n_ip` ([`KMode::Inverse`]);
//! terminal classes are the constant 1. Values at a point `z` come from the
//! Jacobi iteration `V^m = Phi_z(V^(m-1))` started at `V^0 = 1`, and the
//! radius `R` is located by bisecting `[0, 1]` on the convergence verdict.
//! `K0 = -ln R`.
//!
//! For `z` in `[0, 1]` the iterates are nonincreasing in `m` and stay in
//! `[0, 1]`. Every term is accumulated with [`exact_sum`], so the floating
//! point iteration keeps both properties and its result does not depend on
//! class or variant order: isomorphic grammars give bit-identical values.

use serde::Serialize;

use crate::encoding::BitString;
use crate::error::{Error, Result};
use crate::grammar::{classify, BitTree, Grammar, Rhs};
use crate::scalar::{exact_sum, Scalar};

/// Exponent applied to `z` in each term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMode {
    /// `k = 1`.
    #[default]
    Unit,
    /// `k = 1 / n_ip`: heavily repeated rules carry a smaller exponent.
    Inverse,
}

#[derive(Clone, Debug, PartialEq)]
struct Term<T> {
    multiplicity: T,
    exponent: T,
    left: usize,
    right: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum ClassFn<T> {
    Constant,
    Sum { terms: Vec<Term<T>>, denominator: T },
}

/// One generating function per grammar class.
#[derive(Clone, Debug, PartialEq)]
pub struct GenFunSystem<T> {
    classes: Vec<ClassFn<T>>,
    root: usize,
    k_mode: KMode,
}

pub fn system_from_grammar<T: Scalar>(g: &Grammar, k_mode: KMode) -> GenFunSystem<T> {
    let classes = g
        .classes
        .iter()
        .map(|class| {
            if class.is_terminal() {
                return ClassFn::Constant;
            }
            let terms = class
                .variants
                .iter()
                .map(|v| {
                    let Rhs::Internal { left, right } = v.rhs else {
                        unreachable!("internal classes only hold internal variants")
                    };
                    let n = T::from_u32(v.multiplicity).expect("multiplicity fits");
                    let exponent = match k_mode {
                        KMode::Unit => T::one(),
                        KMode::Inverse => n.recip(),
                    };
                    Term {
                        multiplicity: n,
                        exponent,
                        left: left.index(),
                        right: right.index(),
                    }
                })
                .collect();
            ClassFn::Sum {
                terms,
                denominator: T::from_u32(class.rule_count()).expect("count fits"),
            }
        })
        .collect();
    GenFunSystem {
        classes,
        root: g.root_class.index(),
        k_mode,
    }
}

impl<T: Scalar> GenFunSystem<T> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the root class's function (`C1` is index 0).
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn k_mode(&self) -> KMode {
        self.k_mode
    }

    pub fn is_constant(&self, class: usize) -> bool {
        matches!(self.classes[class], ClassFn::Constant)
    }

    /// `(multiplicity, exponent, left, right)` of every term of `class`,
    /// with 0-based class indices.
    pub fn terms(&self, class: usize) -> Vec<(T, T, usize, usize)> {
        match &self.classes[class] {
            ClassFn::Constant => Vec::new(),
            ClassFn::Sum { terms, .. } => terms
                .iter()
                .map(|t| (t.multiplicity, t.exponent, t.left, t.right))
                .collect(),
        }
    }

    /// Human-readable recurrence, one line per class, e.g.
    /// `V1(z) = (1 z^1 V1 V1 + 1 z^1 V2 V3) / 2`.
    pub fn describe(&self) -> Vec<String> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, class)| match class {
                ClassFn::Constant => format!("V{}(z) = 1", i + 1),
                ClassFn::Sum { terms, denominator } => {
                    let body: Vec<String> = terms
                        .iter()
                        .map(|t| {
                            format!(
                                "{} z^{} V{} V{}",
                                t.multiplicity,
                                t.exponent,
                                t.left + 1,
                                t.right + 1
                            )
                        })
                        .collect();
                    format!("V{}(z) = ({}) / {}", i + 1, body.join(" + "), denominator)
                }
            })
            .collect()
    }

    /// `z^k` for every term at a fixed `z`, so the iteration does not
    /// recompute powers.
    fn powers(&self, z: T) -> Vec<Vec<T>> {
        self.classes
            .iter()
            .map(|class| match class {
                ClassFn::Constant => Vec::new(),
                ClassFn::Sum { terms, .. } => terms
                    .iter()
                    .map(|t| {
                        if t.exponent == T::one() {
                            z
                        } else {
                            z.powf(t.exponent)
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    fn step(&self, powers: &[Vec<T>], prev: &[T], next: &mut [T]) {
        for (i, class) in self.classes.iter().enumerate() {
            next[i] =
                match class {
                    ClassFn::Constant => T::one(),
                    ClassFn::Sum { terms, denominator } => {
                        let sum =
                            exact_sum(terms.iter().zip(&powers[i]).map(|(t, &zk)| {
                                t.multiplicity * zk * (prev[t.left] * prev[t.right])
                            }));
                        sum / *denominator
                    }
                };
        }
    }

    /// Iterates `V^1, V^2, ...` at `z` without any stopping rule.
    pub fn iterates(&self, z: T) -> Iterates<'_, T> {
        Iterates {
            system: self,
            powers: self.powers(z),
            current: vec![T::one(); self.classes.len()],
        }
    }
}

/// Endless sequence of Jacobi iterates started from `V^0 = 1`.
pub struct Iterates<'a, T> {
    system: &'a GenFunSystem<T>,
    powers: Vec<Vec<T>>,
    current: Vec<T>,
}

impl<T: Scalar> Iterator for Iterates<'_, T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        let mut next = vec![T::zero(); self.current.len()];
        self.system.step(&self.powers, &self.current, &mut next);
        self.current.clone_from(&next);
        Some(next)
    }
}

/// Iteration budget, stopping tolerance and bisection settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceParams<T> {
    /// Maximum number of iterations per point.
    pub m_max: usize,
    /// Absolute tolerance on `max_i |V_i^m - V_i^(m-1)|`.
    pub eps: T,
    /// Any iterate above this counts as divergence.
    pub value_cap: T,
    /// Number of bisection steps on `[0, 1]`.
    pub bisect_iters: usize,
    /// Test `z = 1` before bisecting and report `R = 1` when it converges.
    pub unit_probe: bool,
}

impl<T: Scalar> Default for ConvergenceParams<T> {
    fn default() -> Self {
        ConvergenceParams {
            m_max: 200,
            eps: T::from_f64_lossy(1e-9),
            value_cap: T::from_f64_lossy(1e100).min(T::max_value()),
            bisect_iters: 40,
            unit_probe: true,
        }
    }
}

impl<T: Scalar> ConvergenceParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.m_max < 1 {
            return Err(Error::InvalidParams("m_max must be at least 1"));
        }
        if !(self.eps > T::zero() && self.eps < T::one()) {
            return Err(Error::InvalidParams("eps must lie in (0, 1)"));
        }
        if self.value_cap.is_nan() || self.value_cap <= T::one() {
            return Err(Error::InvalidParams("value_cap must exceed 1"));
        }
        if self.bisect_iters < 1 {
            return Err(Error::InvalidParams("bisect_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of iterating at one `z`.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<T> {
    Converged { values: Vec<T>, iterations: usize },
    NotConverged { iterations: usize, capped: bool },
}

impl<T> Verdict<T> {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }

    pub fn iterations(&self) -> usize {
        match self {
            Verdict::Converged { iterations, .. } | Verdict::NotConverged { iterations, .. } => {
                *iterations
            }
        }
    }
}

/// Runs the iteration at `z` until successive iterates agree to within
/// `eps`, the budget runs out, or a value exceeds `value_cap`.
pub fn iterate<T: Scalar>(
    system: &GenFunSystem<T>,
    z: T,
    params: &ConvergenceParams<T>,
) -> Result<Verdict<T>> {
    params.validate()?;
    if !(z >= T::zero() && z <= T::one()) {
        return Err(Error::ZOutOfRange {
            z: z.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut prev = vec![T::one(); system.len()];
    for (m, values) in system.iterates(z).take(params.m_max).enumerate() {
        let mut delta = T::zero();
        for (&a, &b) in values.iter().zip(&prev) {
            if a.is_nan() || a > params.value_cap {
                return Ok(Verdict::NotConverged {
                    iterations: m + 1,
                    capped: true,
                });
            }
            debug_assert!(a <= b, "iterates must be nonincreasing on [0, 1]");
            delta = delta.max((a - b).abs());
        }
        if delta <= params.eps {
            return Ok(Verdict::Converged {
                values,
                iterations: m + 1,
            });
        }
        prev = values;
    }
    Ok(Verdict::NotConverged {
        iterations: params.m_max,
        capped: false,
    })
}

/// Radius of convergence and the derived complexity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexityResult<T> {
    /// Largest tested `z` whose iteration converged (0 if none did).
    pub radius: T,
    /// `-ln radius`, in nats.
    pub k0: T,
    /// `z = 1` was probed and converged, so no bisection ran.
    pub converged_at_one: bool,
}

impl<T: Scalar> ComplexityResult<T> {
    fn from_radius(radius: T, converged_at_one: bool) -> Self {
        // 0 - ln 1 is +0, unlike -(ln 1).
        ComplexityResult {
            radius,
            k0: T::zero() - radius.ln(),
            converged_at_one,
        }
    }
}

/// One convergence test made during the radius search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Probe<T> {
    pub z: T,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusSearch<T> {
    pub result: ComplexityResult<T>,
    pub trace: Vec<Probe<T>>,
}

impl<T: Scalar> RadiusSearch<T> {
    /// No probe that converged lies above a probe that did not.
    pub fn trace_is_monotone(&self) -> bool {
        let lowest_failure = self
            .trace
            .iter()
            .filter(|p| !p.converged)
            .map(|p| p.z)
            .fold(T::infinity(), T::min);
        self.trace
            .iter()
            .filter(|p| p.converged)
            .all(|p| p.z < lowest_failure)
    }
}

/// Bisects `[0, 1]`: a convergent midpoint raises the lower bound, anything
/// else lowers the upper bound. `R` is the final lower bound.
pub fn radius_traced<T: Scalar>(
    system: &GenFunSystem<T>,
    params: &ConvergenceParams<T>,
) -> Result<RadiusSearch<T>> {
    params.validate()?;
    let mut trace = Vec::with_capacity(params.bisect_iters + 1);
    let probe = |z: T, trace: &mut Vec<Probe<T>>| -> Result<bool> {
        let verdict = iterate(system, z, params)?;
        let converged = verdict.is_converged();
        trace.push(Probe {
            z,
            converged,
            iterations: verdict.iterations(),
        });
        Ok(converged)
    };

    if params.unit_probe && probe(T::one(), &mut trace)? {
        return Ok(RadiusSearch {
            result: ComplexityResult::from_radius(T::one(), true),
            trace,
        });
    }

    let two = T::one() + T::one();
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..params.bisect_iters {
        let mid = (lo + hi) / two;
        if probe(mid, &mut trace)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusSearch {
        result: ComplexityResult::from_radius(lo, false),
        trace,
    })
}

pub fn radius<T: Scalar>(
    system: &GenFunSystem<T>,
    params: &ConvergenceParams<T>,
) -> Result<ComplexityResult<T>> {
    radius_traced(system, params).map(|search| search.result)
}

/// Window to complexity: tree, classification, generating functions,
/// radius search.
pub fn k0_of_window<T: Scalar>(
    window: &BitString,
    iso_depth: u32,
    k_mode: KMode,
    params: &ConvergenceParams<T>,
) -> Result<ComplexityResult<T>> {
    let tree = BitTree::new(window.clone())?;
    let grammar = classify(&tree, iso_depth);
    radius(&system_from_grammar(&grammar, k_mode), params)
}
