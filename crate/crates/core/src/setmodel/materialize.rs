use super::bits::Bits;
use super::exact::ExactSet;
use super::spec::SetSpec;
use super::window::{Window, WindowedSet};
use crate::error::{Error, Result};
use crate::rng::keyed_unit;

/// How far the subtrahend of a non-exact `diff(...)` is materialized on
/// each side of zero, as a clamp of the requested window length.
const MIN_DIFF_MARGIN: i64 = 256;
const MAX_DIFF_MARGIN: i64 = 1 << 14;

/// Membership of `spec` on every integer of `window`.
///
/// Every constructor is evaluated pointwise except `diff(a, b)`. When both
/// operands have an exact periodic-plus-finite form the difference is exact.
/// When one operand is finite the other is materialized on exactly the
/// window needed, which is again exact relative to that operand. Otherwise
/// `b` is materialized on `[-M, M]` and `a` on the requested window widened
/// by `M` (`M` = window length clamped to `[256, 16384]`), and the result is
/// flagged as an under-approximation: every reported member is a genuine
/// difference. All constructors are monotone, so the flag propagates
/// upward through the AST without losing soundness.
pub fn materialize(spec: &SetSpec, window: Window) -> Result<WindowedSet> {
    spec.validate()?;
    eval(spec, window)
}

fn eval(spec: &SetSpec, w: Window) -> Result<WindowedSet> {
    Ok(match spec {
        SetSpec::Periodic { .. } | SetSpec::Ap { .. } | SetSpec::Explicit(_) => {
            ExactSet::of(spec)
                .map(|e| e.materialize(w))
                .unwrap_or_else(|| WindowedSet::from_fn(w, |n| leaf_contains(spec, n)))
        }
        SetSpec::Bohr(b) => WindowedSet::from_fn(w, |n| b.contains(n)),
        SetSpec::Random { density, seed } => {
            let d = density.to_f64();
            WindowedSet::from_fn(w, |n| keyed_unit(*seed, n) < d)
        }
        SetSpec::Union(a, b) => eval(a, w)?.union(&eval(b, w)?)?,
        SetSpec::Intersect(a, b) => eval(a, w)?.intersect(&eval(b, w)?)?,
        SetSpec::Shift(a, m) => eval(a, w.shifted(-m))?.shifted(*m),
        SetSpec::Diff(a, b) => eval_diff(a, b, w)?,
    })
}

fn leaf_contains(spec: &SetSpec, n: i64) -> bool {
    match spec {
        SetSpec::Periodic { period, residues } => residues.binary_search(&n.rem_euclid(*period)).is_ok(),
        SetSpec::Ap { start, step } => (n - start).rem_euclid(*step) == 0,
        SetSpec::Explicit(v) => v.binary_search(&n).is_ok(),
        _ => unreachable!("not a leaf"),
    }
}

fn finite_span(spec: &SetSpec) -> Option<(i64, i64)> {
    let e = ExactSet::of(spec)?;
    if !e.is_finite() {
        return None;
    }
    Some((*e.extras().first()?, *e.extras().last()?))
}

fn eval_diff(a: &SetSpec, b: &SetSpec, w: Window) -> Result<WindowedSet> {
    if let (Some(ea), Some(eb)) = (ExactSet::of(a), ExactSet::of(b)) {
        if let Some(d) = ea.diff(&eb) {
            return Ok(d.materialize(w));
        }
    }
    // a - b = n ∈ w needs a ∈ w + b.
    let (wa, wb, widened) = if let Some((lo, hi)) = finite_span(b) {
        (w.widened(-lo, hi)?, Window::new(lo, hi)?, false)
    } else if let Some((lo, hi)) = finite_span(a) {
        (Window::new(lo, hi)?, Window::new(lo - w.hi(), hi - w.lo())?, false)
    } else {
        let m = (w.len() as i64).clamp(MIN_DIFF_MARGIN, MAX_DIFF_MARGIN);
        (w.widened(m, m)?, Window::new(-m, m)?, true)
    };
    let sa = eval(a, wa)?;
    let sb = eval(b, wb)?;
    if sa.is_empty() || sb.is_empty() {
        let mut out = WindowedSet::empty(w);
        out.set_approximate(widened || sa.is_approximate() || sb.is_approximate());
        return Ok(out);
    }
    let mut out = diff_set(&sa, &sb)?.restrict(w)?;
    out.set_approximate(widened || sa.is_approximate() || sb.is_approximate());
    Ok(out)
}

/// `{a - b}` over all members of two materialized sets, on the window
/// `[A.lo - B.hi, A.hi - B.lo]`. Exact for the given finite sets, hence a
/// sound under-approximation of the difference of any extensions.
pub fn diff_set(a: &WindowedSet, b: &WindowedSet) -> Result<WindowedSet> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (wa, wb) = (a.window(), b.window());
    let window = Window::new(wa.lo() - wb.hi(), wa.hi() - wb.lo())?;
    let mut bits = Bits::new(window.len());
    // Result index of a - b is (a - A.lo) + (B.hi - b).
    if b.count() <= a.count() {
        for y in b.members() {
            bits.or_shifted(a.bits(), (wb.hi() - y) as isize);
        }
    } else {
        let rev = b.bits().reversed();
        for x in a.members() {
            bits.or_shifted(&rev, (x - wa.lo()) as isize);
        }
    }
    Ok(WindowedSet::from_bits(
        window,
        bits,
        a.is_approximate() || b.is_approximate(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohr::BohrSpec;
    use crate::real::Real;
    use crate::setmodel::parse;
    use proptest::prelude::*;

    fn w(lo: i64, hi: i64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    fn members(s: &WindowedSet) -> Vec<i64> {
        s.members().collect()
    }

    fn brute_diff(a: &WindowedSet, b: &WindowedSet) -> Vec<i64> {
        let mut v: Vec<i64> = a.members().flat_map(|x| b.members().map(move |y| x - y)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn materialize_examples() {
        let p3 = parse("periodic(3;0)").unwrap();
        assert_eq!(members(&materialize(&p3, w(0, 9)).unwrap()), vec![0, 3, 6, 9]);
        let b = parse("bohr(1/2;1/4)").unwrap();
        assert_eq!(members(&materialize(&b, w(0, 9)).unwrap()), vec![0, 2, 4, 6, 8]);
        let u = parse("union(periodic(2;0), explicit(1))").unwrap();
        assert_eq!(members(&materialize(&u, w(0, 5)).unwrap()), vec![0, 1, 2, 4]);
        let s = parse("shift(periodic(2;0);1)").unwrap();
        assert_eq!(members(&materialize(&s, w(0, 5)).unwrap()), vec![1, 3, 5]);
        let a = parse("ap(2;5)").unwrap();
        assert_eq!(members(&materialize(&a, w(-10, 10)).unwrap()), vec![-8, -3, 2, 7]);
    }

    #[test]
    fn diff_set_examples() {
        let z = WindowedSet::from_members(w(0, 0), [0]);
        let d = diff_set(&z, &z).unwrap();
        assert_eq!((d.window(), members(&d)), (w(0, 0), vec![0]));

        let evens = WindowedSet::from_members(w(0, 10), [0, 2, 4, 6, 8, 10]);
        let one = WindowedSet::from_members(w(1, 1), [1]);
        let d = diff_set(&evens, &one).unwrap();
        assert_eq!((d.window(), members(&d)), (w(-1, 9), vec![-1, 1, 3, 5, 7, 9]));

        let c = WindowedSet::from_members(w(0, 9), [0, 3, 6, 9]);
        let d = diff_set(&c, &c).unwrap();
        assert_eq!(members(&d), brute_diff(&c, &c));
        assert_eq!(members(&d), vec![-9, -6, -3, 0, 3, 6, 9]);

        assert_eq!(diff_set(&WindowedSet::empty(w(0, 3)), &c), Err(Error::EmptySet));
    }

    #[test]
    fn exact_diff_spec() {
        let d = parse("diff(periodic(3;0), periodic(3;0))").unwrap();
        let m = materialize(&d, w(-9, 9)).unwrap();
        assert!(!m.is_approximate());
        assert_eq!(members(&m), vec![-9, -6, -3, 0, 3, 6, 9]);
        let f = parse("diff(explicit(0,5), explicit(1))").unwrap();
        assert_eq!(members(&materialize(&f, w(-5, 5)).unwrap()), vec![-1, 4]);
    }

    #[test]
    fn irrational_diff_is_flagged_and_sound() {
        let spec = parse("diff(bohr(0.41421356;0.1), bohr(0.41421356;0.1))").unwrap();
        let win = w(-200, 200);
        let m = materialize(&spec, win).unwrap();
        assert!(m.is_approximate());
        let SetSpec::Diff(a, _) = &spec else { unreachable!() };
        let SetSpec::Bohr(b) = a.as_ref() else { unreachable!() };
        // Every member is a genuine difference: witness search on a wide range.
        for n in m.members() {
            assert!((-5000..=5000).any(|y| b.contains(y) && b.contains(n + y)), "n = {n}");
        }
        // Triangle inequality: the Bohr_0 set at radius 0.1 lies inside C - C.
        let inner = BohrSpec::zero(vec![Real::Float(0.41421356)], Real::Float(0.1)).unwrap();
        for n in win.iter().filter(|&n| inner.contains(n)) {
            assert!(m.contains(n).unwrap());
        }
    }

    #[test]
    fn finite_operand_diff_is_exact() {
        let spec = parse("diff(bohr(0.3;0.05), explicit(-4,9))").unwrap();
        let m = materialize(&spec, w(-50, 50)).unwrap();
        assert!(!m.is_approximate());
        let b = BohrSpec::zero(vec![Real::Float(0.3)], Real::Float(0.05)).unwrap();
        for n in -50..=50 {
            assert_eq!(m.contains(n).unwrap(), b.contains(n - 4) || b.contains(n + 9));
        }
    }

    #[test]
    fn random_is_window_independent() {
        let r = parse("random(0.3;9)").unwrap();
        let big = materialize(&r, w(-100, 100)).unwrap();
        let small = materialize(&r, w(10, 40)).unwrap();
        assert_eq!(big.restrict(w(10, 40)).unwrap(), small);
        let frac = big.count() as f64 / 201.0;
        assert!((0.15..0.45).contains(&frac));
    }

    fn leaf() -> impl Strategy<Value = SetSpec> {
        prop_oneof![
            (1i64..12, prop::collection::vec(0i64..12, 1..4)).prop_map(|(p, r)| SetSpec::periodic(p, r).unwrap()),
            (-20i64..20, 1i64..9).prop_map(|(s, d)| SetSpec::ap(s, d).unwrap()),
            prop::collection::vec(-30i64..30, 1..5).prop_map(|v| SetSpec::explicit(v).unwrap()),
            (0u64..1000).prop_map(|seed| SetSpec::random(Real::ratio(1, 2), seed).unwrap()),
            (1i64..7, 2i64..8).prop_map(|(p, q)| {
                let p = p % q;
                SetSpec::Bohr(BohrSpec::zero(vec![Real::ratio(p, q)], Real::ratio(1, 5)).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn union_intersect_shift_are_pointwise(s in leaf(), t in leaf(), m in -40i64..40, lo in -50i64..50) {
            let win = w(lo, lo + 60);
            let ms = materialize(&s, win).unwrap();
            let mt = materialize(&t, win).unwrap();
            let u = materialize(&SetSpec::union(s.clone(), t.clone()), win).unwrap();
            let i = materialize(&SetSpec::intersect(s.clone(), t.clone()), win).unwrap();
            for n in win.iter() {
                prop_assert_eq!(u.contains(n).unwrap(), ms.contains(n).unwrap() || mt.contains(n).unwrap());
                prop_assert_eq!(i.contains(n).unwrap(), ms.contains(n).unwrap() && mt.contains(n).unwrap());
            }
            let sh = materialize(&SetSpec::shift(s.clone(), m), win).unwrap();
            let base = materialize(&s, win.shifted(-m)).unwrap();
            for n in win.iter() {
                prop_assert_eq!(sh.contains(n).unwrap(), base.contains(n - m).unwrap());
            }
        }

        #[test]
        fn diff_set_matches_brute_force(
            a in prop::collection::vec(-40i64..40, 1..25),
            b in prop::collection::vec(-40i64..40, 1..25),
        ) {
            let sa = WindowedSet::from_members(w(-40, 39), a);
            let sb = WindowedSet::from_members(w(-40, 39), b);
            let d = diff_set(&sa, &sb).unwrap();
            prop_assert_eq!(members(&d), brute_diff(&sa, &sb));
            let dd = diff_set(&sa, &sa).unwrap();
            prop_assert!(dd.contains(0).unwrap());
            for n in dd.members() {
                prop_assert!(dd.contains(-n).unwrap());
            }
        }

        #[test]
        fn exact_diff_spec_matches_window_brute_force(s in leaf(), t in leaf()) {
            prop_assume!(!s.uses_random() && !t.uses_random());
            // Leaves have period < 12 and explicit points in [-30, 30], so
            // witnesses within [-200, 200] cover every difference in [-40, 40].
            let reach = w(-200, 200);
            let ms = materialize(&s, reach).unwrap();
            let mt = materialize(&t, reach).unwrap();
            let d = materialize(&SetSpec::diff(s, t), w(-40, 40)).unwrap();
            prop_assert!(!d.is_approximate());
            let brute = diff_set(&ms, &mt).unwrap().restrict(w(-40, 40)).unwrap();
            prop_assert_eq!(d, brute);
        }
    }
}
