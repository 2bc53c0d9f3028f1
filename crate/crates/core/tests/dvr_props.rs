use proptest::prelude::*;
use valued_ifs::{Characteristic, DvrContext, Element, Valuation};

fn base_p(mut x: u64, p: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d as u32
        })
        .collect()
}

/// `x / p^l` with `x` in `[0, p^(N+l))`.
fn from_scaled(ctx: &DvrContext, x: u64, l: u32) -> Element {
    let len = (ctx.precision() + l) as usize;
    ctx.element(-(l as i32), &base_p(x, ctx.p() as u64, len)).unwrap()
}

fn p_adic_valuation(x: u64, p: u64, cap: i32, l: u32) -> Valuation {
    if x == 0 {
        return Valuation::AtLeast(cap);
    }
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Valuation::Finite(v - l as i32)
}

#[test]
fn mixed_char_matches_integers_mod_p_pow_n() {
    for p in [2u64, 3] {
        for n in 1..=6u32 {
            let ctx = DvrContext::mixed_char(p as u32, n).unwrap();
            for l in [0u32, 1] {
                let modulus = p.pow(n + l);
                // a sparse grid keeps p = 3, N = 6 quick
                let stride = (modulus / 60).max(1);
                for x in (0..modulus).step_by(stride as usize) {
                    for y in (0..modulus).step_by(stride as usize) {
                        let (a, b) = (from_scaled(&ctx, x, l), from_scaled(&ctx, y, l));
                        assert_eq!(&a + &b, from_scaled(&ctx, (x + y) % modulus, l));
                        let diff = (x + modulus - y) % modulus;
                        assert_eq!(&a - &b, from_scaled(&ctx, diff, l));
                        assert_eq!(-&a, from_scaled(&ctx, (modulus - x) % modulus, l));
                        assert_eq!(
                            (&a - &b).valuation(),
                            p_adic_valuation(diff, p, n as i32, l),
                            "p={p} N={n} x={x} y={y} l={l}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn mixed_char_exhaustive_small() {
    let ctx = DvrContext::mixed_char(2, 4).unwrap();
    for x in 0..16 {
        for y in 0..16 {
            let (a, b) = (from_scaled(&ctx, x, 0), from_scaled(&ctx, y, 0));
            assert_eq!(&a + &b, from_scaled(&ctx, (x + y) % 16, 0));
        }
    }
}

#[test]
fn equal_char_is_digitwise() {
    let ctx = DvrContext::equal_char(3, 4).unwrap();
    let elems: Vec<Element> = (0..81u64).map(|x| from_scaled(&ctx, x, 0)).collect();
    for (x, a) in elems.iter().enumerate() {
        for (y, b) in elems.iter().enumerate() {
            let dx = base_p(x as u64, 3, 4);
            let dy = base_p(y as u64, 3, 4);
            let sum: Vec<u32> = dx.iter().zip(&dy).map(|(u, v)| (u + v) % 3).collect();
            let diff: Vec<u32> = dx.iter().zip(&dy).map(|(u, v)| (u + 3 - v) % 3).collect();
            assert_eq!(a + b, ctx.element(0, &sum).unwrap());
            assert_eq!(a - b, ctx.element(0, &diff).unwrap());
        }
    }
}

/// All elements with digits at indices `-2..N`.
fn with_tails(ctx: &DvrContext) -> Vec<Element> {
    let len = ctx.precision() as usize + 2;
    let count = (ctx.p() as u64).pow(len as u32);
    (0..count)
        .map(|x| ctx.element(-2, &base_p(x, ctx.p() as u64, len)).unwrap())
        .collect()
}

#[test]
fn ultrametric_law_exhaustive() {
    for mode in [Characteristic::EqualChar, Characteristic::MixedChar] {
        let ctx = DvrContext::new(2, mode, 4).unwrap();
        let elems = with_tails(&ctx);
        for a in &elems {
            for b in &elems {
                let dab = a.distance(b);
                assert_eq!(dab, b.distance(a));
                assert_eq!((a - b).valuation(), (b - a).valuation());
                for c in elems.iter().step_by(3) {
                    assert!(a.distance(c) <= dab.max(b.distance(c)));
                }
            }
        }
    }
}

#[test]
fn minus_part_structure() {
    for mode in [Characteristic::EqualChar, Characteristic::MixedChar] {
        let ctx = DvrContext::new(3, mode, 2).unwrap();
        for a in with_tails(&ctx) {
            let m = a.minus_part();
            assert_eq!(m.minus_part(), m);
            assert!((&a - &m).is_integral());
            assert!((0..2).all(|j| m.digit(j) == 0));
            assert!((-2..0).all(|j| m.digit(j) == a.digit(j)));
        }
    }
}

fn element_strategy() -> impl Strategy<Value = (u32, u32, i32, Vec<u32>)> {
    (prop_oneof![Just(2u32), Just(3), Just(5)], 1..6u32).prop_flat_map(|(p, n)| {
        (0..4i32).prop_flat_map(move |l| {
            (
                Just(p),
                Just(n),
                Just(-l),
                proptest::collection::vec(0..p, (n as usize) + l as usize),
            )
        })
    })
}

proptest! {
    #[test]
    fn text_round_trip((p, n, off, digits) in element_strategy(), mixed in any::<bool>()) {
        let mode = if mixed { Characteristic::MixedChar } else { Characteristic::EqualChar };
        let ctx = DvrContext::new(p, mode, n).unwrap();
        let a = ctx.element(off, &digits).unwrap();
        prop_assert_eq!(ctx.parse_element(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn additive_group_laws((p, n, off, digits) in element_strategy(), seed in any::<u64>(), mixed in any::<bool>()) {
        let mode = if mixed { Characteristic::MixedChar } else { Characteristic::EqualChar };
        let ctx = DvrContext::new(p, mode, n).unwrap();
        let a = ctx.element(off, &digits).unwrap();
        let other: Vec<u32> = digits.iter().enumerate().map(|(i, d)| ((seed >> (i % 60)) as u32 + d) % p).collect();
        let b = ctx.element(off, &other).unwrap();
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a + &(-&a), ctx.zero());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).valuation() == Valuation::AtLeast(n as i32));
    }

    #[test]
    fn shift_raises_valuation((p, n, off, digits) in element_strategy(), k in 0..3u32) {
        let ctx = DvrContext::equal_char(p, n + 3).unwrap();
        let a = ctx.element(off, &digits).unwrap();
        let s = a.shift(k);
        match (a.valuation(), s.valuation()) {
            (Valuation::Finite(v), Valuation::Finite(w)) => prop_assert_eq!(w, v + k as i32),
            (Valuation::AtLeast(_), Valuation::AtLeast(_)) => {}
            (Valuation::Finite(v), Valuation::AtLeast(_)) => prop_assert!(v + k as i32 >= (n + 3) as i32),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
