//! Closed-form counts as exact integers, and the same formulas as
//! polynomials in `p` with integer coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{Caps, Execution};
use crate::group::{GroupId, GroupKind};
use crate::modular::{check_odd_prime, p_binomial, BigCount};

fn big(p: u32) -> BigUint {
    BigUint::from(p)
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::Domain(format!("k={k} outside 0..={n}")));
    }
    Ok(())
}

fn to_count(v: BigInt) -> BigCount {
    BigCount(v.to_biguint().expect("count is non-negative"))
}

/// `α_k(p, n)`: number of `k`-dimensional isotropic subspaces of `F_p^{2n}`.
pub fn alpha_k(p: u32, n: usize, k: usize) -> Result<BigCount> {
    check_k(n, k)?;
    let prod: BigUint = (0..k).map(|i| big(p).pow((n - i) as u32) + 1u32).product();
    Ok(BigCount(p_binomial(n as i64, k as i64, p).0 * prod))
}

/// `β_k(p, n)`: number of `k`-dimensional isotropic subspaces inside `V_1`.
pub fn beta_k(p: u32, n: usize, k: usize) -> Result<BigCount> {
    check_k(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    Ok(match k {
        0 => BigCount::one(),
        1 => p_binomial(2 * ni - 1, 1, p),
        _ => {
            let lead = big(p).pow(k as u32)
                * (big(p).pow((n - k) as u32) + 1u32)
                * p_binomial(ni - 1, ki, p).0
                + p_binomial(ni - 1, ki - 1, p).0;
            let prod: BigUint = (1..k).map(|i| big(p).pow((n - i) as u32) + 1u32).product();
            BigCount(lead * prod)
        }
    })
}

/// `γ_k(p, n)`: number of surjective linear maps `F_p^{2n} -> F_p^k`.
pub fn gamma_k(p: u32, n: usize, k: usize) -> Result<BigCount> {
    check_k(n, k)?;
    let mut gammas: Vec<BigInt> = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut g = BigInt::from(p).pow((2 * n * j) as u32);
        for (i, gi) in gammas.iter().enumerate() {
            g -= BigInt::from(p_binomial(j as i64, i as i64, p).0) * gi;
        }
        gammas.push(g);
    }
    Ok(to_count(gammas.pop().unwrap()))
}

/// `|X| = #{N in M_{2n}(F_p) : N^t Δ N = 0}`.
pub fn count_x(p: u32, n: usize) -> BigCount {
    (0..=n)
        .map(|k| alpha_k(p, n, k).unwrap() * gamma_k(p, n, k).unwrap())
        .sum()
}

/// `|Y| = #{N in X : Im(N) ⊆ V_1}`.
pub fn count_y(p: u32, n: usize) -> BigCount {
    (0..=n)
        .map(|k| beta_k(p, n, k).unwrap() * gamma_k(p, n, k).unwrap())
        .sum()
}

/// `|Sp(2n, F_p)| = p^{n^2} prod_{j=1}^{n} (p^{2j} - 1)`; `1` for `n = 0`.
pub fn sp_order(n: usize, p: u32) -> BigCount {
    let prod: BigUint = (1..=n).map(|j| big(p).pow(2 * j as u32) - 1u32).product();
    BigCount(big(p).pow((n * n) as u32) * prod)
}

/// `|Im Φ_2| = p^{2n-1} (p - 1) |Sp(2n - 2, F_p)|`.
pub fn im_phi2_order(n: usize, p: u32) -> BigCount {
    assert!(n >= 1);
    BigCount(big(p).pow(2 * n as u32 - 1) * (big(p) - 1u32) * sp_order(n - 1, p).0)
}

/// `|Aut(G)| = p^{n^2+2n} (p-1) prod_j (p^{2j} - 1)`, with `j` up to `n` for
/// the first type and `n - 1` for the second.
pub fn aut_order(group: &GroupId) -> BigCount {
    let (p, n) = (group.p(), group.n());
    let top = if group.kind().is_second_type() {
        n - 1
    } else {
        n
    };
    let prod: BigUint = (1..=top).map(|j| big(p).pow(2 * j as u32) - 1u32).product();
    BigCount(big(p).pow((n * n + 2 * n) as u32) * (big(p) - 1u32) * prod)
}

/// `|End(G)| = |Aut(G)| + p^{2n} |X|` (first type) or `+ p^{2n} |Y|` (second).
pub fn end_order(group: &GroupId) -> BigCount {
    let (p, n) = (group.p(), group.n());
    let singular = if group.kind().is_second_type() {
        count_y(p, n)
    } else {
        count_x(p, n)
    };
    aut_order(group) + BigCount::pow(p as u64, 2 * n as u32) * singular
}

/// A polynomial in `p` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn constant(c: i64) -> Self {
        Poly(vec![BigInt::from(c)]).trimmed()
    }

    /// `c p^deg`.
    pub fn monomial(c: i64, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = BigInt::from(c);
        Poly(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn eval(&self, p: u32) -> BigInt {
        let p = BigInt::from(p);
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &p + c)
    }

    /// `p^{deg} + 1`-style helper: `p^deg + c`.
    fn shifted_power(deg: usize, c: i64) -> Self {
        Poly::monomial(1, deg) + Poly::constant(c)
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let len = self.0.len().max(rhs.0.len());
        let mut v = vec![BigInt::zero(); len];
        for (i, c) in self.0.into_iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in rhs.0.into_iter().enumerate() {
            v[i] += c;
        }
        Poly(v).trimmed()
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly(Vec::new());
        }
        let mut v = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v).trimmed()
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::constant(1), |a, b| a * b)
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::constant(0), |a, b| a + b)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.sign() == Sign::Minus { "-" } else { "+" };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if deg == 1 {
                        f.write_str("p")?;
                    } else {
                        write!(f, "p^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Gaussian binomial as a polynomial, via `[n,k] = [n-1,k-1] + p^k [n-1,k]`.
pub fn p_binomial_poly(n: i64, k: i64) -> Poly {
    if k < 0 || n < 0 || k > n {
        return Poly::constant(0);
    }
    let (n, k) = (n as usize, k as usize);
    let mut row = vec![Poly::constant(1)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let left = if j >= 1 {
                row[j - 1].clone()
            } else {
                Poly::constant(0)
            };
            let right = if j < m {
                Poly::monomial(1, j) * row[j].clone()
            } else {
                Poly::constant(0)
            };
            next.push(left + right);
        }
        row = next;
    }
    row.swap_remove(k)
}

pub fn alpha_poly(n: usize, k: usize) -> Poly {
    let prod: Poly = (0..k).map(|i| Poly::shifted_power(n - i, 1)).product();
    p_binomial_poly(n as i64, k as i64) * prod
}

pub fn beta_poly(n: usize, k: usize) -> Poly {
    let (ni, ki) = (n as i64, k as i64);
    match k {
        0 => Poly::constant(1),
        1 => p_binomial_poly(2 * ni - 1, 1),
        _ => {
            let lead =
                Poly::monomial(1, k) * Poly::shifted_power(n - k, 1) * p_binomial_poly(ni - 1, ki)
                    + p_binomial_poly(ni - 1, ki - 1);
            let prod: Poly = (1..k).map(|i| Poly::shifted_power(n - i, 1)).product();
            lead * prod
        }
    }
}

pub fn gamma_poly(n: usize, k: usize) -> Poly {
    let mut gammas: Vec<Poly> = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut g = Poly::monomial(1, 2 * n * j);
        for (i, gi) in gammas.iter().enumerate() {
            g = g - &p_binomial_poly(j as i64, i as i64) * gi;
        }
        gammas.push(g);
    }
    gammas.pop().unwrap()
}

pub fn count_x_poly(n: usize) -> Poly {
    (0..=n).map(|k| alpha_poly(n, k) * gamma_poly(n, k)).sum()
}

pub fn count_y_poly(n: usize) -> Poly {
    (0..=n).map(|k| beta_poly(n, k) * gamma_poly(n, k)).sum()
}

pub fn sp_poly(n: usize) -> Poly {
    let prod: Poly = (1..=n).map(|j| Poly::shifted_power(2 * j, -1)).product();
    Poly::monomial(1, n * n) * prod
}

pub fn aut_poly(kind: GroupKind, n: usize) -> Poly {
    let top = if kind.is_second_type() { n - 1 } else { n };
    let prod: Poly = (1..=top).map(|j| Poly::shifted_power(2 * j, -1)).product();
    Poly::monomial(1, n * n + 2 * n) * Poly::shifted_power(1, -1) * prod
}

pub fn end_poly(kind: GroupKind, n: usize) -> Poly {
    let singular = if kind.is_second_type() {
        count_y_poly(n)
    } else {
        count_x_poly(n)
    };
    aut_poly(kind, n) + Poly::monomial(1, 2 * n) * singular
}

/// A counted quantity, named as in the CLI and JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    AlphaK,
    BetaK,
    GammaK,
    CountX,
    CountY,
    AutOrder,
    EndOrder,
    SpOrder,
    ImPhi2Order,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::AlphaK,
        Quantity::BetaK,
        Quantity::GammaK,
        Quantity::CountX,
        Quantity::CountY,
        Quantity::AutOrder,
        Quantity::EndOrder,
        Quantity::SpOrder,
        Quantity::ImPhi2Order,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::AlphaK => "alpha_k",
            Quantity::BetaK => "beta_k",
            Quantity::GammaK => "gamma_k",
            Quantity::CountX => "count_x",
            Quantity::CountY => "count_y",
            Quantity::AutOrder => "aut_order",
            Quantity::EndOrder => "end_order",
            Quantity::SpOrder => "sp_order",
            Quantity::ImPhi2Order => "im_phi2_order",
        }
    }

    /// Indexed by `k = 0..=n`.
    pub fn takes_k(self) -> bool {
        matches!(self, Quantity::AlphaK | Quantity::BetaK | Quantity::GammaK)
    }

    /// Depends on the family (first or second type).
    pub fn per_family(self) -> bool {
        matches!(self, Quantity::AutOrder | Quantity::EndOrder)
    }

    /// Closed-form value. `family` is required for per-family quantities and
    /// `k` for indexed ones.
    pub fn formula(
        self,
        family: Option<GroupKind>,
        p: u32,
        n: usize,
        k: Option<usize>,
    ) -> Result<BigCount> {
        let need_k = || k.ok_or_else(|| Error::Domain(format!("{} needs k", self.name())));
        let need_group = || {
            let kind =
                family.ok_or_else(|| Error::Domain(format!("{} needs a group", self.name())))?;
            GroupId::new(kind, p as u64, n)
        };
        Ok(match self {
            Quantity::AlphaK => alpha_k(p, n, need_k()?)?,
            Quantity::BetaK => beta_k(p, n, need_k()?)?,
            Quantity::GammaK => gamma_k(p, n, need_k()?)?,
            Quantity::CountX => count_x(p, n),
            Quantity::CountY => count_y(p, n),
            Quantity::AutOrder => aut_order(&need_group()?),
            Quantity::EndOrder => end_order(&need_group()?),
            Quantity::SpOrder => sp_order(n, p),
            Quantity::ImPhi2Order => im_phi2_order(n, p),
        })
    }

    /// The same quantity as a polynomial in `p`.
    pub fn polynomial(self, family: Option<GroupKind>, n: usize, k: Option<usize>) -> Option<Poly> {
        let kind = family.unwrap_or(GroupKind::Es1);
        Some(match self {
            Quantity::AlphaK => alpha_poly(n, k?),
            Quantity::BetaK => beta_poly(n, k?),
            Quantity::GammaK => gamma_poly(n, k?),
            Quantity::CountX => count_x_poly(n),
            Quantity::CountY => count_y_poly(n),
            Quantity::AutOrder => aut_poly(kind, n),
            Quantity::EndOrder => end_poly(kind, n),
            Quantity::SpOrder => sp_poly(n),
            Quantity::ImPhi2Order => {
                let sp = if n >= 1 { sp_poly(n - 1) } else { return None };
                Poly::monomial(1, 2 * n - 1) * Poly::shifted_power(1, -1) * sp
            }
        })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == lower)
            .ok_or_else(|| Error::parse(0, format!("unknown quantity '{s}'")))
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A closed-form value next to its brute-force counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub quantity: Quantity,
    pub group: Option<GroupKind>,
    pub p: u32,
    pub n: usize,
    pub k: Option<usize>,
    pub formula_value: BigCount,
    pub oracle_value: Option<BigCount>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    /// Which oracle ran, or why none did.
    pub detail: Option<String>,
}

impl CountReport {
    /// Evaluates the formula and, when `with_oracle`, the matching oracle. An
    /// oracle that would exceed its cap is reported as skipped, not as an error.
    #[allow(clippy::too_many_arguments)]
    pub fn compute(
        quantity: Quantity,
        group: Option<GroupKind>,
        p: u64,
        n: usize,
        k: Option<usize>,
        with_oracle: bool,
        exec: Execution,
        caps: &Caps,
    ) -> Result<CountReport> {
        let p = check_odd_prime(p)?;
        if n == 0 {
            return Err(Error::Domain("rank n must be at least 1".into()));
        }
        let formula_value = quantity.formula(group, p, n, k)?;
        let mut report = CountReport {
            quantity,
            group: if quantity.per_family() { group } else { None },
            p,
            n,
            k,
            formula_value,
            oracle_value: None,
            matches: None,
            detail: None,
        };
        if with_oracle {
            match crate::oracle::oracle_count(quantity, group, p, n, k, exec, caps) {
                Ok((value, how)) => {
                    report.matches = Some(value == report.formula_value);
                    report.oracle_value = Some(value);
                    report.detail = Some(how.to_string());
                }
                Err(Error::Resource { what, .. }) => {
                    report.detail = Some(format!("skipped: {what} over cap"));
                }
                Err(e) => return Err(e),
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn alpha_beta_gamma_examples() {
        assert_eq!(alpha_k(3, 2, 0).unwrap(), c(1));
        assert_eq!(alpha_k(3, 1, 1).unwrap(), c(4));
        assert_eq!(alpha_k(3, 2, 1).unwrap(), c(40));
        assert_eq!(alpha_k(3, 2, 2).unwrap(), c(40));
        assert_eq!(beta_k(3, 2, 0).unwrap(), c(1));
        assert_eq!(beta_k(3, 1, 1).unwrap(), c(1));
        assert_eq!(beta_k(3, 2, 1).unwrap(), c(13));
        assert_eq!(beta_k(3, 2, 2).unwrap(), c(4));
        assert_eq!(gamma_k(3, 1, 0).unwrap(), c(1));
        assert_eq!(gamma_k(3, 1, 1).unwrap(), c(8));
        assert_eq!(gamma_k(3, 2, 1).unwrap(), c(80));
        assert_eq!(gamma_k(3, 2, 2).unwrap(), c(6240));
        assert!(matches!(alpha_k(3, 1, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn matrix_set_counts() {
        assert_eq!(count_x(3, 1), c(33));
        assert_eq!(count_y(3, 1), c(9));
        assert_eq!(count_x(3, 2), c(252801));
        assert_eq!(count_y(3, 2), c(26001));
        assert_eq!(sp_order(1, 3), c(24));
        assert_eq!(sp_order(2, 3), c(51840));
        assert_eq!(im_phi2_order(1, 3), c(6));
    }

    #[test]
    fn group_orders() {
        let g = |k, p, n| GroupId::new(k, p, n).unwrap();
        assert_eq!(end_order(&g(GroupKind::Es1, 3, 1)), c(729));
        assert_eq!(end_order(&g(GroupKind::Es1, 5, 1)), c(15625));
        assert_eq!(end_order(&g(GroupKind::Es2, 3, 1)), c(135));
        assert_eq!(aut_order(&g(GroupKind::Es1, 3, 1)), c(432));
        assert_eq!(aut_order(&g(GroupKind::Es2, 3, 1)), c(54));
        assert_eq!(aut_order(&g(GroupKind::Es2, 3, 2)), c(104976));
        assert_eq!(end_order(&g(GroupKind::Es2, 3, 2)), c(2211057));
        for p in [3u64, 5, 7, 11] {
            let pp = p;
            assert_eq!(end_order(&g(GroupKind::Es1, p, 1)), c(pp.pow(6)));
            assert_eq!(
                end_order(&g(GroupKind::Es2, p, 1)),
                c(2 * pp.pow(4) - pp.pow(3))
            );
            assert_eq!(
                aut_order(&g(GroupKind::Es1, p, 1)),
                c(pp.pow(3) * (pp - 1) * (pp * pp - 1))
            );
            assert_eq!(aut_order(&g(GroupKind::Es2, p, 1)), c(pp.pow(3) * (pp - 1)));
        }
    }

    #[test]
    fn polynomials_agree_with_values() {
        for n in 1..=4usize {
            for p in [3u32, 5, 7] {
                let ev = |poly: Poly| to_count(poly.eval(p));
                for k in 0..=n {
                    assert_eq!(ev(alpha_poly(n, k)), alpha_k(p, n, k).unwrap());
                    assert_eq!(ev(beta_poly(n, k)), beta_k(p, n, k).unwrap());
                    assert_eq!(ev(gamma_poly(n, k)), gamma_k(p, n, k).unwrap());
                    assert_eq!(
                        ev(p_binomial_poly(n as i64, k as i64)),
                        p_binomial(n as i64, k as i64, p)
                    );
                }
                assert_eq!(ev(count_x_poly(n)), count_x(p, n));
                assert_eq!(ev(count_y_poly(n)), count_y(p, n));
                for kind in [GroupKind::Es1, GroupKind::Es2] {
                    let g = GroupId::new(kind, p as u64, n).unwrap();
                    assert_eq!(ev(end_poly(kind, n)), end_order(&g));
                    assert_eq!(ev(aut_poly(kind, n)), aut_order(&g));
                }
            }
        }
    }

    #[test]
    fn poly_display() {
        assert_eq!(Poly::constant(0).to_string(), "0");
        assert_eq!(end_poly(GroupKind::Es1, 1).to_string(), "p^6");
        assert_eq!(end_poly(GroupKind::Es2, 1).to_string(), "2*p^4 - p^3");
        assert_eq!(alpha_poly(1, 1).to_string(), "p + 1");
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        assert_eq!("count_X".parse::<Quantity>().unwrap(), Quantity::CountX);
        assert!("nope".parse::<Quantity>().is_err());
    }
}
