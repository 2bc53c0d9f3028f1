use std::collections::BTreeSet;

use valued_ifs::ifs::IdentityCheck;
use valued_ifs::sc::{verify_exact_contraction, verify_weak_contraction};
use valued_ifs::words::words;
use valued_ifs::{Ball, Budget, Characteristic, ClopenSet, DvrContext, Element, Ifs, SystemKind};

fn systems(ctx: DvrContext) -> Vec<Ifs> {
    let mut out = vec![Ifs::digit_prepend(ctx), Ifs::tail_fixing(ctx)];
    for mu in 1..=2 {
        if (mu + 1) < ctx.precision() {
            out.push(Ifs::window(ctx, mu).unwrap());
        }
    }
    out
}

fn contexts() -> Vec<DvrContext> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for n in 1..=4 {
            for mode in [Characteristic::EqualChar, Characteristic::MixedChar] {
                out.push(DvrContext::new(p, mode, n).unwrap());
            }
        }
    }
    out
}

/// Balls the system can map: integral for ring systems, with a tail for
/// tail-fixing ones.
fn sample_balls(ifs: &Ifs) -> Vec<Ball> {
    let ctx = *ifs.context();
    let tail = match ifs.kind() {
        SystemKind::TailFixing => ctx.element(-1, &[1]).unwrap(),
        _ => ctx.zero(),
    };
    let mut out = Vec::new();
    for r in 0..=(ctx.precision() - ifs.step()) as i32 {
        for x in ctx.ring_elements().step_by(3) {
            out.push(Ball::new(&(&x + &tail), r).unwrap());
        }
    }
    out
}

#[test]
fn image_of_ball_is_the_elementwise_image() {
    for ctx in contexts() {
        for ifs in systems(ctx) {
            for b in sample_balls(&ifs) {
                for f in ifs.maps() {
                    let image = f.image_of_ball(&b).unwrap();
                    let pointwise: BTreeSet<Element> =
                        b.elements().map(|x| f.apply(&x).unwrap()).collect();
                    let hull: BTreeSet<Element> = image.elements().collect();
                    assert_eq!(pointwise, hull, "{f} on {b}");
                }
            }
        }
    }
}

#[test]
fn composition_matches_pointwise_images() {
    for ctx in contexts() {
        for ifs in systems(ctx) {
            let anchor = match ifs.kind() {
                SystemKind::TailFixing if ctx.precision() >= 2 => ctx.element(-2, &[1, 1]).unwrap(),
                SystemKind::TailFixing => ctx.element(-1, &[1]).unwrap(),
                _ => ctx.zero(),
            };
            let universe = ifs.universe(&anchor).unwrap();
            let depth = (ctx.precision() / ifs.step()) as usize;
            for k in 0..=depth.min(3) {
                for word in words(ifs.len(), k) {
                    let predicted = ifs.predicted_image(&word, &anchor).unwrap();
                    let pointwise: BTreeSet<Element> = universe
                        .elements()
                        .map(|x| ifs.compose_element(&word, &x).unwrap())
                        .collect();
                    let hull: BTreeSet<Element> = predicted.elements().collect();
                    assert_eq!(pointwise, hull, "{word:?}");
                    assert_eq!(
                        ifs.compose_image(&word, &ClopenSet::from_ball(universe.clone())).unwrap(),
                        ClopenSet::from_ball(predicted)
                    );
                }
            }
        }
    }
}

#[test]
fn systems_are_invariant_on_their_universe() {
    for ctx in contexts() {
        for ifs in systems(ctx) {
            let anchors = match ifs.kind() {
                SystemKind::TailFixing => vec![
                    ctx.element(-1, &[1]).unwrap(),
                    ctx.element(-2, &[1, 1]).unwrap(),
                    ctx.element(-3, &[1, 0, 1]).unwrap(),
                ],
                _ => vec![ctx.zero()],
            };
            // deeper tails exceed the precision
            for a in anchors.into_iter().filter(|a| -a.offset() <= ctx.precision() as i32) {
                let x = ClopenSet::from_ball(ifs.universe(&a).unwrap());
                assert_eq!(ifs.image(&x).unwrap(), x, "{} at {a}", ifs.kind());
            }
        }
    }
}

#[test]
fn identity_and_contraction_across_contexts() {
    for ctx in contexts() {
        for ifs in systems(ctx) {
            let anchor = match ifs.kind() {
                SystemKind::TailFixing => ctx.element(-1, &[1]).unwrap(),
                _ => ctx.zero(),
            };
            let depth = (ctx.precision() / ifs.step()) as usize;
            for m in 1..=depth {
                let check = ifs.verify_composition_identity(m, &anchor, Budget::DEFAULT).unwrap();
                assert!(matches!(check, IdentityCheck::Holds { .. }));
            }
            assert!(verify_exact_contraction(&ifs, &anchor, Budget::DEFAULT).unwrap().passed());
            assert!(verify_weak_contraction(&ifs, &anchor, Budget::DEFAULT).unwrap().passed());
        }
    }
}

/// `f_i(x) = i + p x (mod p^N)` on the integers.
#[test]
fn mixed_digit_prepend_matches_integer_maps() {
    for (p, n) in [(2u64, 6u32), (5, 3)] {
        let ctx = DvrContext::mixed_char(p as u32, n).unwrap();
        let modulus = p.pow(n);
        let ifs = Ifs::digit_prepend(ctx);
        let to_element = |mut x: u64| {
            let digits: Vec<u32> = (0..n)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d as u32
                })
                .collect();
            ctx.element(0, &digits).unwrap()
        };
        for x in 0..modulus {
            for (i, f) in ifs.maps().iter().enumerate() {
                let expected = (i as u64 + p * x) % modulus;
                assert_eq!(f.apply(&to_element(x)).unwrap(), to_element(expected));
            }
        }
    }
}

#[test]
fn ring_maps_reject_tails() {
    let ctx = DvrContext::equal_char(2, 4).unwrap();
    let x = ctx.element(-1, &[1]).unwrap();
    for ifs in [Ifs::digit_prepend(ctx), Ifs::window(ctx, 1).unwrap()] {
        assert!(ifs.maps()[0].apply(&x).is_err());
        assert!(ifs.universe(&x).is_err());
    }
}
