//! The sigmoid loss written as a sigmoidal program over rating differences,
//! solved globally by spatial branch-and-bound at small scale.
//!
//! Program form: one variable `x_ab = θ_a − θ_b` per ordered pair, bounds
//! `[−u, u]` with `u = θ_max − θ_min`, antisymmetry rows `x_ab + x_ba = 0`,
//! transitivity rows `x_ab + x_bc − x_ac = 0` for `a < b < c`, and objective
//! `Σ N(a,b)·σ(−x_ab/τ)`.
//!
//! The solver eliminates the equality constraints by branching directly on
//! ratings `θ ∈ [0, u]^m`; every `x_ab` is then feasible by construction.
//! Each node is bounded below by the Lagrangian dual of its convex-envelope
//! relaxation, which is a valid bound for any choice of multipliers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::profile::{preference_matrix, PreferenceProfile};
use crate::sco::{logistic, Bounds, Ratings};

pub const DEFAULT_MAX_ALTERNATIVES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Antisymmetry,
    Transitivity,
}

/// `Σ coefficient·x_var = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualityConstraint {
    pub kind: ConstraintKind,
    pub coefficients: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmoidalProgram {
    m: usize,
    variables: Vec<(usize, usize)>,
    lower: f64,
    upper: f64,
    constraints: Vec<EqualityConstraint>,
    weights: Vec<f64>,
    temperature: f64,
}

impl SigmoidalProgram {
    pub fn num_alternatives(&self) -> usize {
        self.m
    }

    /// Ordered pairs `(a, b)`, row-major, one per variable.
    pub fn variables(&self) -> &[(usize, usize)] {
        &self.variables
    }

    pub fn variable_bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn constraints(&self) -> &[EqualityConstraint] {
        &self.constraints
    }

    /// `N(a, b)` for each variable.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Index of variable `x_ab`.
    pub fn var(&self, a: usize, b: usize) -> usize {
        assert!(a != b && a < self.m && b < self.m);
        a * (self.m - 1) + if b > a { b - 1 } else { b }
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(x)
            .map(|(&w, &xi)| w * logistic(-xi / self.temperature))
            .sum()
    }

    /// Largest absolute residual over all equality rows.
    pub fn constraint_residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.coefficients.iter().map(|&(v, k)| k * x[v]).sum::<f64>() - c.rhs).abs())
            .fold(0.0, f64::max)
    }

    /// Plain-text listing, one item per line:
    ///
    /// ```text
    /// sigmoidal-program alternatives=3 temperature=1
    /// var 0 x[0,1] lower=-100 upper=100 weight=4
    /// eq antisymmetry +1*v0 +1*v2 = 0
    /// eq transitivity +1*v0 +1*v3 -1*v1 = 0
    /// ```
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sigmoidal-program alternatives={} temperature={}",
            self.m, self.temperature
        );
        for (i, &(a, b)) in self.variables.iter().enumerate() {
            let _ = writeln!(
                out,
                "var {i} x[{a},{b}] lower={} upper={} weight={}",
                self.lower, self.upper, self.weights[i]
            );
        }
        for c in &self.constraints {
            let kind = match c.kind {
                ConstraintKind::Antisymmetry => "antisymmetry",
                ConstraintKind::Transitivity => "transitivity",
            };
            let terms: Vec<String> = c.coefficients.iter().map(|&(v, k)| format!("{k:+}*v{v}")).collect();
            let _ = writeln!(out, "eq {kind} {} = {}", terms.join(" "), c.rhs);
        }
        out
    }
}

/// Builds the pairwise-difference program for `profile`.
pub fn build_program(profile: &PreferenceProfile, bounds: Bounds, temperature: f64) -> Result<SigmoidalProgram> {
    let m = profile.num_alternatives();
    if m < 2 {
        return Err(Error::InvalidConfig(
            "a sigmoidal program needs at least two alternatives".into(),
        ));
    }
    if !(temperature > 0.0) {
        return Err(Error::InvalidConfig("temperature must be positive".into()));
    }
    let n = preference_matrix(profile);
    let mut variables = Vec::with_capacity(m * (m - 1));
    let mut weights = Vec::with_capacity(m * (m - 1));
    for a in 0..m {
        for b in 0..m {
            if a != b {
                variables.push((a, b));
                weights.push(n.get(a, b) as f64);
            }
        }
    }
    let u = bounds.width();
    let mut program = SigmoidalProgram {
        m,
        variables,
        lower: -u,
        upper: u,
        constraints: Vec::new(),
        weights,
        temperature,
    };
    let mut constraints = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            constraints.push(EqualityConstraint {
                kind: ConstraintKind::Antisymmetry,
                coefficients: vec![(program.var(a, b), 1.0), (program.var(b, a), 1.0)],
                rhs: 0.0,
            });
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                constraints.push(EqualityConstraint {
                    kind: ConstraintKind::Transitivity,
                    coefficients: vec![
                        (program.var(a, b), 1.0),
                        (program.var(b, c), 1.0),
                        (program.var(a, c), -1.0),
                    ],
                    rhs: 0.0,
                });
            }
        }
    }
    program.constraints = constraints;
    Ok(program)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbConfig {
    /// Absolute optimality gap at which the search stops.
    pub tolerance: f64,
    /// Budget of node expansions.
    pub max_iterations: usize,
    pub max_alternatives: usize,
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            tolerance: 1e-4,
            max_iterations: 200_000,
            max_alternatives: DEFAULT_MAX_ALTERNATIVES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbSolution {
    /// Assignment of every program variable.
    pub x: Vec<f64>,
    /// Objective at `x`.
    pub objective: f64,
    /// Certified lower bound on the global minimum.
    pub lower_bound: f64,
    /// `objective − lower_bound`.
    pub gap: f64,
    /// Whether `gap ≤ tolerance` was reached within the budget.
    pub certified: bool,
    pub nodes_expanded: usize,
}

/// A single term `w·σ(−x/τ)`, decreasing, concave for `x < 0` and convex for `x > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Term {
    pub w: f64,
    pub tau: f64,
}

impl Term {
    pub fn value(&self, x: f64) -> f64 {
        self.w * logistic(-x / self.tau)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let s = logistic(-x / self.tau);
        -self.w * s * (1.0 - s) / self.tau
    }

    /// Tightest convex under-estimator of the term on `[lo, hi]`.
    pub fn envelope(&self, lo: f64, hi: f64) -> Envelope {
        if lo >= 0.0 || hi <= lo {
            return Envelope::Exact;
        }
        let chord = |t: f64| {
            let slope = (self.value(t) - self.value(lo)) / (t - lo);
            (slope, self.value(lo) - slope * lo)
        };
        if hi <= 0.0 {
            let (slope, intercept) = chord(hi);
            return Envelope::Line { slope, intercept };
        }
        // ψ(t) = f(t) + f'(t)(lo − t) − f(lo) decreases on [0, ∞) from ψ(0) ≥ 0.
        let psi = |t: f64| self.value(t) + self.deriv(t) * (lo - t) - self.value(lo);
        if psi(hi) >= 0.0 {
            let (slope, intercept) = chord(hi);
            return Envelope::Line { slope, intercept };
        }
        let (mut a, mut b) = (0.0, hi);
        while b - a > 1e-10 {
            let mid = 0.5 * (a + b);
            if psi(mid) >= 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let t = b;
        let slope = self.deriv(t);
        Envelope::Tangent {
            t,
            slope,
            intercept: self.value(t) - slope * t,
        }
    }

    /// `min_{x ∈ [lo, hi]} f(x) − λx`, from endpoints and stationary points.
    pub fn min_shifted(&self, lambda: f64, lo: f64, hi: f64) -> f64 {
        let h = |x: f64| self.value(x) - lambda * x;
        let mut best = h(lo).min(h(hi));
        let p = -lambda * self.tau / self.w;
        if p > 0.0 && p <= 0.25 {
            let q = (1.0 - 4.0 * p).max(0.0).sqrt();
            let s_small = 2.0 * p / (1.0 + q);
            let x = self.tau * ((1.0 - s_small) / s_small).ln();
            for c in [x, -x] {
                if c > lo && c < hi {
                    best = best.min(h(c));
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Envelope {
    /// The term is already convex on the interval.
    Exact,
    /// A single line over the whole interval.
    Line { slope: f64, intercept: f64 },
    /// Line up to `t`, the term itself beyond.
    Tangent { t: f64, slope: f64, intercept: f64 },
}

impl Envelope {
    pub fn value(&self, term: &Term, x: f64) -> f64 {
        match *self {
            Envelope::Exact => term.value(x),
            Envelope::Line { slope, intercept } => slope * x + intercept,
            Envelope::Tangent { t, slope, intercept } => {
                if x < t {
                    slope * x + intercept
                } else {
                    term.value(x)
                }
            }
        }
    }

    pub fn deriv(&self, term: &Term, x: f64) -> f64 {
        match *self {
            Envelope::Exact => term.deriv(x),
            Envelope::Line { slope, .. } => slope,
            Envelope::Tangent { t, slope, .. } => {
                if x < t {
                    slope
                } else {
                    term.deriv(x)
                }
            }
        }
    }
}

/// An ordered pair with positive weight, on `x = θ_a − θ_b`.
#[derive(Debug, Clone, Copy)]
struct PairTerm {
    a: usize,
    b: usize,
    term: Term,
}

#[derive(Debug, Clone)]
struct Node {
    id: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    lower_bound: f64,
    /// Minimizer of the envelope relaxation.
    point: Vec<f64>,
    /// Term with the largest envelope gap at `point`.
    branch_term: Option<usize>,
}

struct Queued(Node);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // BinaryHeap is a max-heap: smallest bound first, then smallest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .lower_bound
            .total_cmp(&self.0.lower_bound)
            .then(other.0.id.cmp(&self.0.id))
    }
}

struct Solver {
    m: usize,
    terms: Vec<PairTerm>,
}

impl Solver {
    fn objective(&self, theta: &[f64]) -> f64 {
        self.terms.iter().map(|p| p.term.value(theta[p.a] - theta[p.b])).sum()
    }

    /// Evaluates a box: envelope relaxation, its minimizer, and a dual bound.
    fn evaluate(&self, id: usize, lo: Vec<f64>, hi: Vec<f64>) -> Node {
        let envs: Vec<Envelope> = self
            .terms
            .iter()
            .map(|p| p.term.envelope(lo[p.a] - hi[p.b], hi[p.a] - lo[p.b]))
            .collect();
        let mut theta: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();

        let partial = |theta: &[f64], c: usize| -> f64 {
            let mut d = 0.0;
            for (p, env) in self.terms.iter().zip(&envs) {
                if p.a == c {
                    d += env.deriv(&p.term, theta[c] - theta[p.b]);
                } else if p.b == c {
                    d -= env.deriv(&p.term, theta[p.a] - theta[c]);
                }
            }
            d
        };
        // Cyclic coordinate descent with exact line minimization by
        // bisection on the sign of the (monotone) partial derivative.
        for _sweep in 0..200 {
            let mut moved = 0.0f64;
            for c in 0..self.m {
                let old = theta[c];
                theta[c] = lo[c];
                let next = if partial(&theta, c) >= 0.0 {
                    lo[c]
                } else {
                    theta[c] = hi[c];
                    if partial(&theta, c) <= 0.0 {
                        hi[c]
                    } else {
                        let (mut l, mut h) = (lo[c], hi[c]);
                        while h - l > 1e-9 * (1.0 + hi[c] - lo[c]) {
                            theta[c] = 0.5 * (l + h);
                            if partial(&theta, c) > 0.0 {
                                h = theta[c];
                            } else {
                                l = theta[c];
                            }
                        }
                        0.5 * (l + h)
                    }
                };
                theta[c] = next;
                moved = moved.max((next - old).abs());
            }
            if moved < 1e-9 {
                break;
            }
        }

        // Weak duality: for any λ,
        //   min Σ env(x) s.t. x = Dθ  ≥  Σ min_x (f(x) − λx) + min_θ λᵀDθ.
        let mut bound = 0.0;
        let mut coeff = vec![0.0; self.m];
        let mut branch_term = None;
        let mut widest_gap = 0.0;
        for (k, (p, env)) in self.terms.iter().zip(&envs).enumerate() {
            let x = theta[p.a] - theta[p.b];
            let lambda = env.deriv(&p.term, x);
            bound += p.term.min_shifted(lambda, lo[p.a] - hi[p.b], hi[p.a] - lo[p.b]);
            coeff[p.a] += lambda;
            coeff[p.b] -= lambda;
            let gap = p.term.value(x) - env.value(&p.term, x);
            if gap > widest_gap {
                widest_gap = gap;
                branch_term = Some(k);
            }
        }
        for c in 0..self.m {
            bound += (coeff[c] * lo[c]).min(coeff[c] * hi[c]);
        }
        Node {
            id,
            lo,
            hi,
            lower_bound: bound,
            point: theta,
            branch_term,
        }
    }
}

/// Branch-and-bound to a certified gap of `config.tolerance`. When the node
/// budget runs out the incumbent is returned with `certified = false`.
pub fn solve_branch_and_bound(program: &SigmoidalProgram, config: &BnbConfig) -> Result<BnbSolution> {
    let m = program.m;
    if m > config.max_alternatives {
        return Err(Error::TooManyAlternatives {
            m,
            max_m: config.max_alternatives,
        });
    }
    if !(config.tolerance > 0.0) || config.max_iterations == 0 {
        return Err(Error::InvalidConfig(
            "tolerance and iteration budget must be positive".into(),
        ));
    }
    let tau = program.temperature;
    let terms: Vec<PairTerm> = program
        .variables
        .iter()
        .zip(&program.weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&(a, b), &w)| PairTerm {
            a,
            b,
            term: Term { w, tau },
        })
        .collect();
    let solver = Solver { m, terms };
    let u = program.upper;

    // The objective only sees differences, so every optimum has a copy whose
    // smallest rating is 0. Root `k` pins coordinate `k` there.
    let roots: Vec<Node> = (0..m)
        .map(|k| {
            let mut hi = vec![u; m];
            hi[k] = 0.0;
            solver.evaluate(k, vec![0.0; m], hi)
        })
        .collect();
    let mut best_theta = roots[0].point.clone();
    let mut best_value = solver.objective(&best_theta);
    for r in &roots[1..] {
        let v = solver.objective(&r.point);
        if v < best_value {
            best_value = v;
            best_theta = r.point.clone();
        }
    }
    let mut next_id = m;
    let mut heap: BinaryHeap<Queued> = roots.into_iter().map(Queued).collect();
    let mut expanded = 0;
    let mut certified = false;
    let mut lower_bound = best_value;
    // Smallest bound among nodes dropped against the incumbent.
    let mut fathomed = f64::INFINITY;

    while let Some(Queued(node)) = heap.pop() {
        lower_bound = node.lower_bound.min(best_value);
        if best_value - node.lower_bound <= config.tolerance {
            certified = true;
            break;
        }
        if expanded >= config.max_iterations {
            break;
        }
        expanded += 1;
        let Some(k) = node.branch_term else {
            // Relaxation exact at its minimizer; nothing left to split.
            fathomed = fathomed.min(node.lower_bound);
            continue;
        };
        let p = solver.terms[k];
        let c = if node.hi[p.a] - node.lo[p.a] >= node.hi[p.b] - node.lo[p.b] {
            p.a
        } else {
            p.b
        };
        let mid = 0.5 * (node.lo[c] + node.hi[c]);
        for (lo_c, hi_c) in [(node.lo[c], mid), (mid, node.hi[c])] {
            let mut lo = node.lo.clone();
            let mut hi = node.hi.clone();
            lo[c] = lo_c;
            hi[c] = hi_c;
            let child = solver.evaluate(next_id, lo, hi);
            next_id += 1;
            let value = solver.objective(&child.point);
            if value < best_value {
                best_value = value;
                best_theta = child.point.clone();
            }
            if best_value - child.lower_bound > config.tolerance {
                heap.push(Queued(child));
            } else {
                fathomed = fathomed.min(child.lower_bound);
            }
        }
    }
    if heap.is_empty() && !certified {
        // Every open node was fathomed against the incumbent.
        certified = true;
        lower_bound = fathomed.min(best_value);
    }
    let x = program
        .variables
        .iter()
        .map(|&(a, b)| best_theta[a] - best_theta[b])
        .collect();
    Ok(BnbSolution {
        x,
        objective: best_value,
        lower_bound,
        gap: best_value - lower_bound,
        certified,
        nodes_expanded: expanded,
    })
}

/// Ratings whose pairwise differences reproduce `x`, centred in the box.
pub fn recover_ratings(program: &SigmoidalProgram, x: &[f64], bounds: Bounds, tolerance: f64) -> Result<Ratings> {
    let m = program.m;
    let last = m - 1;
    let mut diff = vec![0.0; m];
    for (a, d) in diff.iter_mut().enumerate().take(last) {
        *d = x[program.var(a, last)];
    }
    let residual = program
        .variables
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (x[i] - (diff[a] - diff[b])).abs())
        .fold(0.0, f64::max);
    if residual > 10.0 * tolerance {
        return Err(Error::InconsistentSolution { residual });
    }
    let hi = diff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = diff.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = bounds.midpoint() - 0.5 * (hi + lo);
    let theta: Vec<f64> = diff.iter().map(|d| d + shift).collect();
    Ok(crate::sco::project(&theta, bounds))
}
