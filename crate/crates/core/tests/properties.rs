use proptest::prelude::*;

use ringaug::baselines::{generate_corpus, SyntheticRingSpec};
use ringaug::io::{parse_annotations, render_annotations, AnnotationDocument, AnnotationFormat, ImageRef};
use ringaug::metrics::{cap_order, cap_strict, mean_cap, CapField, CapReport};
use ringaug::project::{IndexedVertex, SurvivorSequence};
use ringaug::raster::{rasterize, BinaryMask};
use ringaug::repair::repair;
use ringaug::transform::{derive_seed, sample, AugmentationKind, AugmentationSpec};
use ringaug::{successor, Point2, RingPolygon};

/// Strictly increasing subset of 1..=n with at least `min` elements.
fn subset(n: usize, min: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(any::<bool>(), n).prop_filter_map("too few survivors", move |keep| {
        let s: Vec<usize> = (1..=n).filter(|&i| keep[i - 1]).collect();
        (s.len() >= min).then_some(s)
    })
}

fn survivors(indices: &[usize], n: usize) -> SurvivorSequence {
    let v = indices
        .iter()
        .map(|&i| IndexedVertex {
            original_index: i,
            position: Point2::new(i as f64, (i * i) as f64),
        })
        .collect();
    SurvivorSequence::new(v, n, None).unwrap()
}

/// Per-pixel even-odd parity by counting rightward crossings of every loop.
fn parity_oracle(loops: &[Vec<Point2>], w: usize, h: usize) -> BinaryMask {
    BinaryMask::from_fn(w, h, |px, py| {
        let (cx, cy) = (px as f64 + 0.5, py as f64 + 0.5);
        let mut inside = false;
        for lp in loops {
            for i in 0..lp.len() {
                let (a, b) = (lp[i], lp[(i + 1) % lp.len()]);
                let (lo, hi) = if a.y <= b.y { (a, b) } else { (b, a) };
                if lo.y <= cy && cy < hi.y {
                    let x = (hi.x - lo.x) * (cy - lo.y) / (hi.y - lo.y) + lo.x;
                    if x > cx {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    })
}

fn quarter_point(w: usize, h: usize) -> impl Strategy<Value = Point2> {
    (0..=(4 * w as i64 + 8), 0..=(4 * h as i64 + 8))
        .prop_map(|(x, y)| Point2::new(x as f64 / 4.0 - 1.0, y as f64 / 4.0 - 1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn successor_is_a_cyclic_bijection(n in 1usize..200) {
        let mut seen = vec![false; n + 1];
        let mut i = 1;
        for _ in 0..n {
            let s = successor(i, n).unwrap();
            prop_assert!(!seen[s]);
            seen[s] = true;
            i = s;
        }
        prop_assert_eq!(i, 1);
    }

    #[test]
    fn split_then_concat_is_identity(n in 6usize..40, l_off in 0usize..40) {
        let l = 3 + l_off % (n - 5);
        let v: Vec<Point2> = (0..n).map(|k| Point2::new(k as f64, (k * 7 % 11) as f64)).collect();
        let ring = RingPolygon::ring(v.clone(), l).unwrap();
        let (outer, inner) = ring.split_boundaries().unwrap();
        prop_assert_eq!(outer.len(), l);
        prop_assert_eq!([outer, inner].concat(), v);
    }

    #[test]
    fn sampled_plans_invert(kind_idx in 0usize..8, seed: u64, x in -100.0f64..600.0, y in -100.0f64..600.0) {
        let kinds = [
            AugmentationKind::Identity, AugmentationKind::Rotation, AugmentationKind::Scale,
            AugmentationKind::Crop, AugmentationKind::RotationCrop, AugmentationKind::Translation,
            AugmentationKind::Flip, AugmentationKind::Composite,
        ];
        let plan = sample(&AugmentationSpec::new(kinds[kind_idx]), 512, 512, seed).unwrap();
        let p = Point2::new(x, y);
        let back = plan.invert().unwrap().apply_point(plan.apply_point(p));
        prop_assert!(back.distance(p) < 1e-9, "{p} -> {back}");
    }

    #[test]
    fn rasterize_matches_parity_oracle(
        w in 1usize..48,
        h in 1usize..48,
        pts in proptest::collection::vec(quarter_point(48, 48), 3..24),
    ) {
        let poly = RingPolygon::simple(pts.clone()).unwrap();
        prop_assert_eq!(rasterize(&poly, w, h), parity_oracle(&[pts], w, h));
    }

    #[test]
    fn ring_rasterizes_as_two_loops(
        outer in proptest::collection::vec(quarter_point(40, 40), 3..10),
        inner in proptest::collection::vec(quarter_point(40, 40), 3..10),
    ) {
        let l = outer.len();
        let chain = [outer.clone(), inner.clone()].concat();
        let ring = RingPolygon::ring(chain, l).unwrap();
        prop_assert_eq!(rasterize(&ring, 40, 40), parity_oracle(&[outer, inner], 40, 40));
    }

    #[test]
    fn cap_bounds_and_ordering(n in 1usize..40, seq in proptest::collection::vec(1usize..40, 1..40)) {
        let seq: Vec<usize> = seq.into_iter().map(|k| (k - 1) % n + 1).collect();
        let s = cap_strict(n, &seq).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        let mut dedup = seq.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() == seq.len() {
            let o = cap_order(n, &seq).unwrap();
            prop_assert!((0.0..=1.0).contains(&o));
            prop_assert!(s <= o);
        }
    }

    #[test]
    fn in_order_subsequences_score_one(n in 3usize..60, rot in 0usize..60, keep in subset(60, 1)) {
        let mut seq: Vec<usize> = keep.into_iter().filter(|&k| k <= n).collect();
        prop_assume!(!seq.is_empty());
        let r = rot % seq.len();
        seq.rotate_left(r);
        prop_assert_eq!(cap_order(n, &seq).unwrap(), 1.0);
        let full: Vec<usize> = (1..=n).collect();
        prop_assert_eq!(cap_strict(n, &full).unwrap(), 1.0);
    }

    #[test]
    fn mean_is_permutation_invariant(vals in proptest::collection::vec(0u32..=64, 1..50), seed: u64) {
        let reports: Vec<CapReport> = vals
            .iter()
            .map(|&v| CapReport { cap_strict: v as f64 / 64.0, cap_order: 1.0, n: 64, m: 64, unmatched_new_vertices: 0 })
            .collect();
        let mut shuffled = reports.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            let j = (derive_seed(seed, "shuffle", i as u64) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let a = mean_cap(&reports, CapField::Strict).unwrap();
        let b = mean_cap(&shuffled, CapField::Strict).unwrap();
        // Sums of multiples of 1/64 below 2^53 are exact in any order.
        prop_assert_eq!(a, b);
    }

    #[test]
    fn repair_keeps_order_and_is_idempotent(n in 3usize..80, keep in subset(80, 3)) {
        let keep: Vec<usize> = keep.into_iter().filter(|&k| k <= n).collect();
        prop_assume!(keep.len() >= 3);
        let r = repair(&survivors(&keep, n)).unwrap();
        prop_assert_eq!(r.original_indices(), keep.clone());
        prop_assert!(r.is_closed());
        prop_assert_eq!(r.edges().count(), keep.len());
        prop_assert_eq!(cap_order(n, &r.original_indices()).unwrap(), 1.0);
        let again = repair(&survivors(&r.original_indices(), n)).unwrap();
        prop_assert_eq!(again, r);
    }
}

fn document(seed: u64, count: usize) -> AnnotationDocument {
    let mut annotations = generate_corpus(&SyntheticRingSpec {
        count,
        seed,
        ..Default::default()
    })
    .unwrap();
    // Sub-pixel coordinates exercise shortest round-trip decimals.
    for (k, a) in annotations.iter_mut().enumerate() {
        let jitter = 1.0 / (k as f64 + 3.0);
        *a = a.map_points(|p| Point2::new(p.x + jitter, p.y - jitter / 7.0));
    }
    AnnotationDocument::new(
        ImageRef {
            path: format!("img_{seed}.png"),
            width: 512,
            height: 512,
        },
        annotations,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn write_read_fixpoint(seed: u64, count in 0usize..4, fmt in 0usize..3) {
        let format = AnnotationFormat::ALL[fmt];
        let doc = document(seed, count);
        let text = render_annotations(&doc, format);
        let back = parse_annotations(&text).unwrap();
        prop_assert_eq!(&back.annotations, &doc.annotations);
        prop_assert_eq!(render_annotations(&back, format), text);
    }

    #[test]
    fn truncations_are_rejected(seed: u64, fmt in 0usize..3, cut in 0.0f64..1.0) {
        let text = render_annotations(&document(seed, 1), AnnotationFormat::ALL[fmt]);
        let body = text.trim_end();
        let at = ((body.len() as f64) * cut) as usize;
        prop_assert!(parse_annotations(&body[..at]).is_err());
    }

    #[test]
    fn corruption_never_panics(seed: u64, fmt in 0usize..3, pos in 0.0f64..1.0, byte in 0u8..128) {
        let text = render_annotations(&document(seed, 1), AnnotationFormat::ALL[fmt]);
        let mut bytes = text.into_bytes();
        let at = ((bytes.len() as f64) * pos) as usize;
        bytes[at] = byte;
        if let Ok(s) = String::from_utf8(bytes) {
            let _ = parse_annotations(&s);
        }
    }
}

proptest! {
    #[test]
    fn strict_one_only_for_full_rotations(n in 1usize..30, picks in proptest::collection::vec(0usize..30, 1..30)) {
        let mut seq = Vec::new();
        for p in picks {
            let k = p % n + 1;
            if !seq.contains(&k) {
                seq.push(k);
            }
        }
        let is_rotation = seq.len() == n && (0..n).all(|t| seq[(t + 1) % n] == seq[t] % n + 1);
        prop_assert_eq!(cap_strict(n, &seq).unwrap() == 1.0, is_rotation);
        let r = seq[0] - 1;
        let rotated: Vec<usize> = (0..n).map(|t| (r + t) % n + 1).collect();
        prop_assert_eq!(cap_strict(n, &rotated).unwrap(), 1.0);
    }
}
