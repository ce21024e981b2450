use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::{check_eulerian, Multigraph, Node, PrioritySet};

/// Exact nonnegative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `n! / (n - k)!`, or zero when `k > n`.
    pub fn falling_factorial(n: usize, k: usize) -> Self {
        if k > n {
            return BigCount::zero();
        }
        BigCount(((n - k + 1)..=n).fold(BigUint::one(), |acc, x| acc * BigUint::from(x)))
    }

    pub fn factorial(n: u64) -> Self {
        BigCount((1..=n).fold(BigUint::one(), |acc, x| acc * BigUint::from(x)))
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl Mul for BigCount {
    type Output = BigCount;

    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl Div for BigCount {
    type Output = BigCount;

    fn div(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 / rhs.0)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination with row pivoting. Every intermediate division is exact.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Number of `r`-Eulerian cycles respecting `f`.
///
/// With `G'` the graph without the (demoted) priority arcs and `D(v)` its
/// out-multiplicities, the count is
/// `D(r) * prod_v (D(v) - 1)! / prod_e mult(e)! * W`, where `W` is the
/// multiplicity-weighted number of `r`-oriented spanning trees of `G'`,
/// obtained as a minor of its out-degree Laplacian.
pub fn count_ecp(g: &Multigraph, f: &PrioritySet, r: Node) -> BigCount {
    if !check_eulerian(g, r) {
        return BigCount::zero();
    }
    if g.arc_count() == 0 {
        return BigCount::one();
    }
    let f = f.demoted(g);
    let kept = |a: usize| !f.contains(a, g);

    let active = g.active_nodes(r);
    let others: Vec<Node> = (0..g.node_count()).filter(|&v| active[v] && v != r).collect();
    let mut slot = vec![usize::MAX; g.node_count()];
    for (i, &v) in others.iter().enumerate() {
        slot[v] = i;
    }

    let mut out_deg = vec![0u64; g.node_count()];
    let mut laplacian = vec![vec![BigInt::zero(); others.len()]; others.len()];
    let mut denominator = BigUint::one();
    for (a, arc) in g.arcs().iter().enumerate() {
        if !kept(a) {
            continue;
        }
        out_deg[arc.tail] += arc.mult as u64;
        denominator *= BigCount::factorial(arc.mult as u64).0;
        if arc.tail != r {
            let i = slot[arc.tail];
            laplacian[i][i] += arc.mult;
            if arc.head != r {
                laplacian[i][slot[arc.head]] -= arc.mult;
            }
        }
    }
    let trees = determinant(laplacian);
    let trees = match trees.to_biguint() {
        Some(t) if trees.sign() != Sign::Minus => t,
        _ => return BigCount::zero(),
    };
    if trees.is_zero() || out_deg[r] == 0 {
        return BigCount::zero();
    }

    let mut numerator = BigUint::from(out_deg[r]) * trees;
    for v in (0..g.node_count()).filter(|&v| active[v]) {
        if out_deg[v] == 0 {
            return BigCount::zero();
        }
        numerator *= BigCount::factorial(out_deg[v] - 1).0;
    }
    debug_assert!((&numerator % &denominator).is_zero());
    BigCount(numerator / denominator)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{chord_triangle, two_cycle};
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Leibniz expansion, the slow independent route.
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn go(m: &[Vec<BigInt>], perm: &mut Vec<usize>, total: &mut BigInt) {
            let n = m.len();
            if perm.len() == n {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let mut term = BigInt::one();
                for (row, &col) in perm.iter().enumerate() {
                    term *= &m[row][col];
                }
                if inversions % 2 == 1 {
                    term = -term;
                }
                *total += term;
                return;
            }
            for c in 0..n {
                if !perm.contains(&c) {
                    perm.push(c);
                    go(m, perm, total);
                    perm.pop();
                }
            }
        }
        let mut total = BigInt::zero();
        go(m, &mut Vec::new(), &mut total);
        total
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(big(&[])), BigInt::one());
        assert_eq!(determinant(big(&[&[7]])), BigInt::from(7));
        assert_eq!(determinant(big(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        assert_eq!(determinant(big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(big(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn determinant_matches_leibniz() {
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 11) as i64 - 5
        };
        for n in 1..=5 {
            for _ in 0..40 {
                let m: Vec<Vec<BigInt>> =
                    (0..n).map(|_| (0..n).map(|_| BigInt::from(next())).collect()).collect();
                assert_eq!(determinant(m.clone()), leibniz(&m));
            }
        }
    }

    #[test]
    fn counts() {
        let g = two_cycle();
        assert_eq!(count_ecp(&g, &PrioritySet::empty(&g), 0), BigCount::one());
        let (g, f) = chord_triangle();
        // (a,c) must leave a first: a→c→a→b→c→a is the only choice
        assert_eq!(count_ecp(&g, &f, 0), BigCount::one());
        // without priority: both orders at a
        assert_eq!(count_ecp(&g, &PrioritySet::empty(&g), 0), BigCount::from(2));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(BigCount::falling_factorial(3, 3).to_u64(), Some(6));
        assert_eq!(BigCount::falling_factorial(5, 2).to_u64(), Some(20));
        assert_eq!(BigCount::falling_factorial(2, 3), BigCount::zero());
        assert_eq!(BigCount::falling_factorial(4, 0), BigCount::one());
    }
}
