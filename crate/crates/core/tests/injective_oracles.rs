use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use tgx_core::injective::unpair;
use tgx_core::{injective_multiset_sum, intern, AggParams, ExactScalar, Value};

type Elem = (u64, u64, u64);

/// Every multiset of size `< n` over `domain`, as sorted vectors.
fn multisets(domain: &[Elem], n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 0usize)];
    for _ in 1..n {
        let mut next = Vec::new();
        for (m, start) in frontier {
            for (j, x) in domain.iter().enumerate().skip(start) {
                let mut grown: Vec<Elem> = m.clone();
                grown.push(*x);
                out.push(grown.clone());
                next.push((grown, j));
            }
        }
        frontier = next;
    }
    out
}

/// Reads the multiset back out of the base-`b` digits of the scalar.
/// `top` must bound every exponent that can occur.
fn decode(s: &ExactScalar, p: &AggParams, top: u64) -> BTreeMap<Elem, u64> {
    // Every exponent is a multiple of beta, so scale by a beta-aligned power.
    let top = top.div_ceil(p.beta) * p.beta;
    let scaled = &s.0 * BigRational::from_integer(BigInt::from(p.base).pow(top as u32));
    assert!(scaled.is_integer(), "{s} has digits past base^-{top}");
    let mut num = scaled.to_integer();
    let block = BigInt::from(p.base).pow(p.beta as u32);
    let mut out = BTreeMap::new();
    let mut exp = top;
    while !num.is_zero() {
        let count = (&num % &block).to_u64().unwrap();
        if count > 0 {
            let (x, e) = unpair((exp / p.k) as u128);
            out.insert((x, e, (exp % p.k) / p.beta), count);
        }
        num /= &block;
        if exp == 0 {
            assert!(num.is_zero(), "{s} carried into the integer part");
            break;
        }
        exp -= p.beta;
    }
    out
}

fn domain(features: u64, edge_features: u64, times: &[u64]) -> Vec<Elem> {
    let mut d = Vec::new();
    for x in 0..features {
        for e in 0..edge_features {
            for &t in times {
                d.push((x, e, t));
            }
        }
    }
    d
}

#[test]
fn exhaustive_injectivity_on_the_bounded_domain() {
    let p = AggParams::decimal(4, 2).unwrap();
    let all = multisets(&domain(2, 2, &[1, 2]), 4);
    assert_eq!(all.len(), 165);
    let mut seen: HashMap<ExactScalar, &Vec<Elem>> = HashMap::new();
    for m in &all {
        let s = injective_multiset_sum(m, &p).unwrap();
        if let Some(prev) = seen.insert(s.clone(), m) {
            panic!("{prev:?} and {m:?} collide at {s}");
        }
        let mut counts = BTreeMap::new();
        for x in m {
            *counts.entry(*x).or_insert(0) += 1;
        }
        assert_eq!(decode(&s, &p, 64), counts);
    }
    // Pairwise comparisons implied by the distinct-map check.
    assert!(all.len() * (all.len() - 1) / 2 > 10_000);
}

#[test]
fn injectivity_in_binary_and_with_wider_multisets() {
    let p = AggParams::new(6, 3, 2).unwrap();
    let all = multisets(&domain(2, 1, &[0, 3]), 6);
    let mut seen = HashMap::new();
    for m in &all {
        let s = injective_multiset_sum(m, &p).unwrap();
        assert!(seen.insert(s.clone(), m.clone()).is_none(), "collision at {m:?}");
        assert_eq!(decode(&s, &p, 64).values().sum::<u64>(), m.len() as u64);
    }
}

proptest! {
    #[test]
    fn sum_ignores_order(mut m in proptest::collection::vec((0u64..4, 0u64..3, 0u64..5), 0..10), seed in any::<u64>()) {
        let p = AggParams::decimal(11, 5).unwrap();
        let a = injective_multiset_sum(&m, &p).unwrap();
        let shift = (seed as usize) % m.len().max(1);
        m.rotate_left(shift);
        m.reverse();
        prop_assert_eq!(a, injective_multiset_sum(&m, &p).unwrap());
    }

    #[test]
    fn intern_respects_structure(a in proptest::collection::vec(0u64..4, 0..4), b in proptest::collection::vec(0u64..4, 0..4)) {
        let ia = intern(Value::ints(&a));
        let ib = intern(Value::ints(&b));
        prop_assert_eq!(ia == ib, a == b);
        let ma = intern(Value::multiset(a.iter().copied().map(Value::Int).collect()));
        let mb = intern(Value::multiset(b.iter().copied().map(Value::Int).collect()));
        let (mut sa, mut sb) = (a.clone(), b.clone());
        sa.sort();
        sb.sort();
        prop_assert_eq!(ma == mb, sa == sb);
    }
}
