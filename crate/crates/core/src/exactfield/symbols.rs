use super::{Rat, RatFunc};

/// Rising factorial `(base)_k = base (base+1) ... (base+k-1)`; `(base)_0 = 1`.
pub fn pochhammer(base: &RatFunc, k: u32) -> RatFunc {
    let mut acc = RatFunc::one();
    for i in 0..k {
        acc = &acc * &(base + &RatFunc::from_int(i as i64));
    }
    acc
}

/// Falling factorial `[nu]_i = nu (nu-1) ... (nu-i+1)`; `[nu]_0 = 1`.
pub fn falling_factorial(nu: &RatFunc, i: u32) -> RatFunc {
    let mut acc = RatFunc::one();
    for k in 0..i {
        acc = &acc * &(nu - &RatFunc::from_int(k as i64));
    }
    acc
}

pub fn factorial(k: u32) -> Rat {
    (1..=k as i64).fold(Rat::one(), |acc, v| &acc * &Rat::from_int(v))
}

pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    &factorial(n) / &(&factorial(k) * &factorial(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Var;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rf("(n+1)/2"), 1), rf("(n+1)/2"));
        assert_eq!(pochhammer(&RatFunc::var(Var::X), 0), RatFunc::one());
        // 2*3*4
        assert_eq!(pochhammer(&RatFunc::from_int(2), 3), RatFunc::from_int(24));
    }

    #[test]
    fn falling_factorial_examples() {
        let w = RatFunc::var(Var::W);
        assert_eq!(falling_factorial(&w, 0), RatFunc::one());
        assert_eq!(falling_factorial(&w, 2), rf("w^2 - w"));
        // The factor (3 - 3) appears.
        assert_eq!(falling_factorial(&RatFunc::from_int(3), 5), RatFunc::zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Rat::from_int(10));
        assert_eq!(binomial(2, 5), Rat::zero());
        assert_eq!(factorial(0), Rat::one());
    }
}
