//! Dense winding lines on the torus model `R^2 / pi Z^2`.
//!
//! The line `{ s (1, phi) }` with `phi` the golden ratio is handled exactly:
//! angles are written as `pi * u` with `u` in `Q(phi)`, where membership in
//! the line modulo the lattice is a pair of integrality tests.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::Real;

/// `a + b phi` with rational `a`, `b` and `phi^2 = phi + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenNumber {
    pub a: BigRational,
    pub b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GoldenNumber {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: &BigInt, b: &BigInt) -> Self {
        Self::new(BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()))
    }

    pub fn rational(a: BigRational) -> Self {
        Self::new(a, BigRational::zero())
    }

    pub fn phi() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, via `a + b phi = P + Q sqrt(5)` with `P = a + b/2`, `Q = b/2`.
    pub fn signum(&self) -> Ordering {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let p = &self.a + &self.b * &half;
        let q = &self.b * &half;
        let sp = p.cmp(&BigRational::zero());
        let sq = q.cmp(&BigRational::zero());
        if sp == sq || sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // opposite signs: compare P^2 with 5 Q^2
        let d = &p * &p - rat(5) * &q * &q;
        match d.cmp(&BigRational::zero()) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }

    /// Nearest double, without cancellation when `a` and `b phi` nearly cancel.
    pub fn to_f64(&self) -> f64 {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let p = &self.a + &self.b * &half;
        let q = &self.b * &half;
        let s5 = 5f64.sqrt();
        let pf = p.to_f64().unwrap_or(f64::NAN);
        let qf = q.to_f64().unwrap_or(f64::NAN);
        if (pf >= 0.0) == (qf >= 0.0) {
            return pf + qf * s5;
        }
        let num = (&p * &p - rat(5) * &q * &q).to_f64().unwrap_or(f64::NAN);
        num / (pf - qf * s5)
    }
}

impl Add for GoldenNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for GoldenNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Mul for GoldenNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let bb = &self.b * &o.b;
        Self::new(&self.a * &o.a + &bb, &self.a * &o.b + &o.a * &self.b + bb)
    }
}

impl Neg for GoldenNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

/// A torus point `pi * (u1, u2)` with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTorusPoint {
    pub u: [GoldenNumber; 2],
}

impl ExactTorusPoint {
    /// `g-` coordinates `pi * u`.
    pub fn coords(&self) -> [f64; 2] {
        [
            std::f64::consts::PI * self.u[0].to_f64(),
            std::f64::consts::PI * self.u[1].to_f64(),
        ]
    }

    /// Lies on the line `R (1, phi)` modulo `Z^2`: writing `u_i = a_i + b_i phi`,
    /// this holds iff `a2 - b1` and `a1 + b1 - b2` are integers.
    pub fn on_golden_line(&self) -> bool {
        let [u1, u2] = &self.u;
        let m2 = &u2.a - &u1.b;
        let m1 = &u1.a + &u1.b - &u2.b;
        m1.is_integer() && m2.is_integer()
    }

    /// The point is the base point of the torus.
    pub fn is_base(&self) -> bool {
        self.u.iter().all(|x| x.b.is_zero() && x.a.is_integer())
    }
}

/// Convergents `p/q` of `phi` (ratios of consecutive Fibonacci numbers)
/// with `q <= max_q`.
pub fn golden_convergents(max_q: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut q, mut p) = (BigInt::one(), BigInt::one());
    let limit = BigInt::from(max_q);
    while q <= limit {
        out.push((p.clone(), q.clone()));
        let next = &p + &q;
        q = std::mem::replace(&mut p, next);
    }
    out
}

/// `(0, q phi - p)`: the line point at `s = pi q`, reduced modulo the lattice.
pub fn density_witness(p: &BigInt, q: &BigInt) -> ExactTorusPoint {
    ExactTorusPoint {
        u: [
            GoldenNumber::rational(BigRational::zero()),
            GoldenNumber::from_ints(&-p.clone(), q),
        ],
    }
}

/// Line points `(0, q phi - p)` whose second coordinate approaches `target`
/// (each strictly closer than the previous), with `q <= max_q`.
pub fn approach_sequence(target: &BigRational, max_q: u64) -> Vec<ExactTorusPoint> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let t = target.to_f64().unwrap_or(0.0);
    let mut out: Vec<ExactTorusPoint> = Vec::new();
    let mut best: Option<GoldenNumber> = None;
    for q in 1..=max_q {
        let p = ((q as f64) * phi - t).round() as i64;
        let pt = density_witness(&BigInt::from(p), &BigInt::from(q));
        let gap = (pt.u[1].clone() - GoldenNumber::rational(target.clone())).abs();
        if best.as_ref().is_none_or(|b| gap.cmp_exact(b) == Ordering::Less) {
            best = Some(gap);
            out.push(pt);
        }
    }
    out
}

/// Exact distance `|u2 - target|` used to certify an approach sequence.
pub fn gap_to(pt: &ExactTorusPoint, target: &BigRational) -> GoldenNumber {
    (pt.u[1].clone() - GoldenNumber::rational(target.clone())).abs()
}

/// Floating membership oracle for a line `R d` in `R^2 / period Z^2`:
/// searches lattice translates with `|m1| <= budget` (or `|m2|` when the line
/// is closer to vertical).
#[derive(Debug, Clone, PartialEq)]
pub struct LineLattice<T: Real> {
    pub period: T,
    pub budget: u64,
}

impl<T: Real> LineLattice<T> {
    pub fn new(period: T, budget: u64) -> Self {
        Self { period, budget }
    }

    /// Smallest `|<c, w + period m>|` over the searched translates, with the
    /// minimizing `m`; `c` is the unit normal of the line.
    pub fn residual(&self, normal: &[T], w: &[T]) -> (T, [i64; 2]) {
        let f = (normal[0] * w[0] + normal[1] * w[1]) / self.period;
        let (i, j) = if normal[1].abs() >= normal[0].abs() { (0, 1) } else { (1, 0) };
        let mut best = (T::infinity(), [0i64; 2]);
        let q = self.budget as i64;
        for mi in -q..=q {
            let partial = f + normal[i] * T::c(mi as f64);
            let mj = (-partial / normal[j]).round();
            let r = (partial + normal[j] * mj).abs() * self.period;
            if r < best.0 {
                let mut m = [0i64; 2];
                m[i] = mi;
                m[j] = mj.as_f64() as i64;
                best = (r, m);
            }
        }
        best
    }
}

/// For a direction `f` transverse to `(1, phi)`, the points `t f` that lie on
/// the golden line modulo `pi Z^2`, from the convergents with `q <= max_q`:
/// `(t, s)` solves `t f - s (1, phi) = pi (q, p)`.
pub fn transverse_witnesses(f: &[f64], max_q: u64) -> Vec<Vec<f64>> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let det = -f[0] * phi + f[1];
    if det.abs() < 1e-12 {
        return Vec::new();
    }
    golden_convergents(max_q)
        .iter()
        .map(|(p, q)| {
            // p - q phi exactly, then Cramer's rule for t
            let small = GoldenNumber::from_ints(p, &-q.clone()).to_f64();
            let t = std::f64::consts::PI * small / det;
            vec![t * f[0], t * f[1]]
        })
        .collect()
}
