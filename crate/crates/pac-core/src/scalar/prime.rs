use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng as _;

use crate::util::rng;

/// Miller-Rabin with `rounds` random bases, deterministic for a given input.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let s = BigUint::from(small);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut r = 0u32;
    while !d.bit(0) {
        d >>= 1;
        r += 1;
    }
    let digits = n.to_u64_digits();
    let mut g = rng(digits[0] ^ (digits.len() as u64).rotate_left(32));
    let span = n - 4u32;
    'outer: for _ in 0..rounds {
        let mut words = alloc::vec::Vec::with_capacity(digits.len() + 1);
        for _ in 0..=digits.len() {
            words.push(g.gen::<u32>());
        }
        let a = BigUint::new(words) % &span + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..r {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
