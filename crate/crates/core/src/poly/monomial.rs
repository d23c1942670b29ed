use std::cmp::Ordering;

/// Exponent vector indexed by declared variable, trailing zeros trimmed.
///
/// The natural order is lexicographic with the last-declared variable most
/// significant, which is also the order used for printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::from_exps(v)
    }

    pub fn from_exps(mut v: Vec<u32>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Highest variable index with a positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let n = self.0.len().max(rhs.0.len());
        Monomial((0..n).map(|i| self.exp(i) + rhs.exp(i)).collect())
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        self.0.len() <= rhs.0.len() && self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    /// `rhs / self` when `self` divides `rhs`.
    pub fn quotient_of(&self, rhs: &Monomial) -> Option<Monomial> {
        if !self.divides(rhs) {
            return None;
        }
        Some(Monomial::from_exps(
            (0..rhs.0.len()).map(|i| rhs.exp(i) - self.exp(i)).collect(),
        ))
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        let n = self.0.len().max(rhs.0.len());
        Monomial((0..n).map(|i| self.exp(i).max(rhs.exp(i))).collect())
    }

    pub fn is_coprime(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Same exponents with variable `v` removed (set to zero).
    pub fn without(&self, v: usize) -> Monomial {
        let mut e = self.0.clone();
        if v < e.len() {
            e[v] = 0;
        }
        Monomial::from_exps(e)
    }

    pub fn with_exp(&self, v: usize, e: u32) -> Monomial {
        let mut x = self.0.clone();
        if x.len() <= v {
            x.resize(v + 1, 0);
        }
        x[v] = e;
        Monomial::from_exps(x)
    }

    /// Lex comparison, last variable most significant.
    pub fn cmp_lex(&self, rhs: &Monomial) -> Ordering {
        let n = self.0.len().max(rhs.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&rhs.exp(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, rhs: &Self) -> Ordering {
        self.cmp_lex(rhs)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, rhs: &Self) -> Option<Ordering> {
        Some(self.cmp(rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_with_last_variable_greatest() {
        // vars [y, x]: x > y^5
        let x = Monomial::var(1, 1);
        let y5 = Monomial::var(0, 5);
        assert!(x > y5);
        assert!(Monomial::from_exps(vec![2, 1]) > Monomial::from_exps(vec![1, 1]));
        assert!(Monomial::one() < y5);
    }

    #[test]
    fn trimming_and_division() {
        assert_eq!(Monomial::from_exps(vec![1, 0, 0]), Monomial::var(0, 1));
        let a = Monomial::from_exps(vec![1, 2]);
        let b = Monomial::from_exps(vec![3, 2]);
        assert_eq!(a.quotient_of(&b), Some(Monomial::var(0, 2)));
        assert_eq!(b.quotient_of(&a), None);
        assert_eq!(
            a.lcm(&Monomial::var(2, 1)),
            Monomial::from_exps(vec![1, 2, 1])
        );
        assert!(Monomial::var(0, 1).is_coprime(&Monomial::var(1, 3)));
    }
}
