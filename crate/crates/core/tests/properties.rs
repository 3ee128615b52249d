use proptest::prelude::*;
use sparrow_core::{
    angular_error, box_blur, diagonal_correct, estimate, gray_world, rsr_render, sample_grid,
    sdwgw, shades_of_gray, summarize, CsParams, Kernel, LinearImage, PixelMask, Rect, Rgb,
    SprayParams, Weighting, EPSILON,
};

fn image(max_side: usize, lo: f64) -> impl Strategy<Value = LinearImage> {
    (3..=max_side, 3..=max_side).prop_flat_map(move |(w, h)| {
        prop::collection::vec(lo..=1.0f64, w * h * 3)
            .prop_map(move |data| LinearImage::new(w, h, data).unwrap())
    })
}

fn with_zeros(max_side: usize) -> impl Strategy<Value = LinearImage> {
    image(max_side, 0.0).prop_map(|img| {
        img.map(|p| p.map(|v| if v < 0.2 { 0.0 } else { v }))
            .unwrap()
    })
}

fn small_cs(seed: u64) -> CsParams {
    let mut p = CsParams::default().with_steps(3, 4).with_seed(seed);
    p.spray.points_per_spray = 30;
    p.kernel_size = 3;
    p
}

fn positive_rgb() -> impl Strategy<Value = Rgb> {
    [0.01..10.0f64, 0.01..10.0f64, 0.01..10.0f64]
}

fn unit_sphere() -> impl Strategy<Value = Rgb> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64].prop_filter("non-degenerate", |v| {
        v.iter().map(|x| x * x).sum::<f64>() > 1e-3
    })
}

fn permutation() -> impl Strategy<Value = [usize; 3]> {
    prop::sample::select(vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ])
}

fn permuted(v: Rgb, order: [usize; 3]) -> Rgb {
    [v[order[0]], v[order[1]], v[order[2]]]
}

fn direction(v: Rgb) -> Rgb {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lightness_lies_in_unit_interval(img in with_zeros(10), seed: u64, n in 1usize..40) {
        let out = rsr_render(&img, &SprayParams::new(2, n).with_seed(seed)).unwrap();
        prop_assert!(out.data().iter().all(|&l| l > 0.0 && l <= 1.0));
    }

    #[test]
    fn lightness_is_scale_invariant(img in image(9, 100.0 * EPSILON), s in 0.05..20.0f64, seed: u64) {
        let params = SprayParams::new(2, 25).with_seed(seed);
        let a = rsr_render(&img, &params).unwrap();
        let b = rsr_render(&img.scaled(s).unwrap(), &params).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn lightness_is_deterministic(img in image(8, 0.0), seed: u64) {
        let params = SprayParams::new(3, 12).with_seed(seed);
        prop_assert_eq!(rsr_render(&img, &params).unwrap(), rsr_render(&img, &params).unwrap());
    }

    #[test]
    fn estimate_direction_survives_exposure(img in image(14, 0.02), s in 0.5..2.0f64, seed: u64) {
        let mask = PixelMask::none(img.width(), img.height());
        let params = small_cs(seed);
        let a = estimate(&img, &mask, &params).unwrap();
        let b = estimate(&img.scaled(s).unwrap(), &mask, &params).unwrap();
        prop_assert!(angular_error(&a.rgb(), &b.rgb()).unwrap() < 0.2);
    }

    #[test]
    fn estimate_is_channel_equivariant(img in image(14, 0.0), order in permutation(), seed: u64, unit: bool) {
        let mask = PixelMask::none(img.width(), img.height());
        let mut params = small_cs(seed);
        if unit {
            params.weighting = Weighting::Unit;
        }
        let a = estimate(&img, &mask, &params).unwrap();
        let b = estimate(&img.permute_channels(order), &mask, &params).unwrap();
        prop_assert_eq!(permuted(a.rgb(), order), b.rgb());
    }

    #[test]
    fn estimate_is_deterministic(img in image(14, 0.0), seed: u64) {
        let mask = PixelMask::from_rects(img.width(), img.height(), &[Rect::new(1, 1, 2, 2)]).unwrap();
        let params = small_cs(seed);
        let a = estimate(&img, &mask, &params).unwrap();
        let b = estimate(&img, &mask, &params).unwrap();
        prop_assert_eq!(a.rgb().map(f64::to_bits), b.rgb().map(f64::to_bits));
    }

    #[test]
    fn masked_pixels_outside_windows_do_not_matter(
        img in image(20, 0.01),
        rect in (0usize..20, 0usize..20, 1usize..8, 1usize..8),
        fill in 0.0..5.0f64,
        seed: u64,
    ) {
        let (w, h) = (img.width(), img.height());
        let (x, y) = (rect.0 % w, rect.1 % h);
        let rect = Rect::new(x, y, rect.2.min(w - x), rect.3.min(h - y));
        let mask = PixelMask::from_rects(w, h, &[rect]).unwrap();
        let params = small_cs(seed);
        let grid = sample_grid((w, h), &mask, params.row_step, params.col_step);
        prop_assume!(!grid.is_empty());
        let half = params.kernel_size / 2;
        let in_window = |px: usize, py: usize| {
            grid.iter().any(|g| px.abs_diff(g.x) <= half && py.abs_diff(g.y) <= half)
        };
        let mut data = img.data().to_vec();
        for py in rect.y..rect.y + rect.h {
            for px in rect.x..rect.x + rect.w {
                if !in_window(px, py) {
                    let i = (py * w + px) * 3;
                    data[i..i + 3].copy_from_slice(&[fill, fill * 0.5, 1.0]);
                }
            }
        }
        let altered = LinearImage::new(w, h, data).unwrap();
        let a = estimate(&img, &mask, &params).unwrap();
        let b = estimate(&altered, &mask, &params).unwrap();
        prop_assert_eq!(a.rgb(), b.rgb());
    }

    #[test]
    fn blur_is_linear(
        pair in (3usize..10, 3usize..10).prop_flat_map(|(w, h)| (
            prop::collection::vec(0.0..1.0f64, w * h * 3),
            prop::collection::vec(0.0..1.0f64, w * h * 3),
            Just((w, h)),
        )),
        a in 0.0..4.0f64,
        b in 0.0..4.0f64,
        k in prop::sample::select(vec![1usize, 3, 5]),
    ) {
        let (xs, ys, (w, h)) = pair;
        prop_assume!(k <= 2 * w.min(h) - 1);
        let combined: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
        let kernel = Kernel::new(k).unwrap();
        let blur = |d: Vec<f64>| box_blur(&LinearImage::new(w, h, d).unwrap(), kernel).unwrap();
        let (bx, by, bc) = (blur(xs), blur(ys), blur(combined));
        for i in 0..bc.data().len() {
            let expected = a * bx.data()[i] + b * by.data()[i];
            prop_assert!((bc.data()[i] - expected).abs() <= 1e-9 * expected.abs().max(1e-300) + 1e-15);
        }
    }

    #[test]
    fn gray_world_correction_equalises_means(img in image(12, 0.05)) {
        let mask = PixelMask::none(img.width(), img.height());
        let e = gray_world(&img, &mask).unwrap();
        let out = diagonal_correct(&img, &e.rgb()).unwrap();
        let mut mean = [0.0; 3];
        for p in out.pixels() {
            for c in 0..3 {
                mean[c] += p[c];
            }
        }
        for c in 1..3 {
            prop_assert!((mean[c] - mean[0]).abs() <= 1e-6 * mean[0]);
        }
    }

    #[test]
    fn baselines_are_channel_equivariant(img in image(12, 0.0), order in permutation(), blocks in 1usize..10, p in 1.0..12.0f64) {
        let mask = PixelMask::none(img.width(), img.height());
        let swapped = img.permute_channels(order);
        let pairs = [
            (gray_world(&img, &mask), gray_world(&swapped, &mask)),
            (sdwgw(&img, &mask, blocks), sdwgw(&swapped, &mask, blocks)),
            (shades_of_gray(&img, &mask, p), shades_of_gray(&swapped, &mask, p)),
        ];
        for (a, b) in pairs {
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert_eq!(permuted(a.rgb(), order), b.rgb()),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }

    #[test]
    fn baselines_follow_exposure(img in image(12, 0.01), s in 0.1..10.0f64, k in -4i32..4, p in 1.0..12.0f64) {
        let mask = PixelMask::none(img.width(), img.height());
        // Power-of-two scaling is exact in floating point.
        let pow2 = 2f64.powi(k);
        let scaled = img.scaled(pow2).unwrap();
        let gw = gray_world(&img, &mask).unwrap().rgb();
        prop_assert_eq!(gray_world(&scaled, &mask).unwrap().rgb(), gw.map(|v| v * pow2));
        let sog = shades_of_gray(&img, &mask, p).unwrap().rgb();
        prop_assert_eq!(direction(shades_of_gray(&scaled, &mask, p).unwrap().rgb()), direction(sog));

        let scaled = img.scaled(s).unwrap();
        for (a, b) in [
            (gray_world(&scaled, &mask).unwrap().unit(), gray_world(&img, &mask).unwrap().unit()),
            (shades_of_gray(&scaled, &mask, p).unwrap().unit(), shades_of_gray(&img, &mask, p).unwrap().unit()),
        ] {
            for c in 0..3 {
                prop_assert!((a[c] - b[c]).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn angular_error_symmetry_and_scaling(e in positive_rgb(), g in positive_rgb(), a in 0.01..100.0f64, b in 0.01..100.0f64, k in -8i32..8) {
        let base = angular_error(&e, &g).unwrap();
        prop_assert_eq!(base, angular_error(&g, &e).unwrap());
        prop_assert!((0.0..=180.0).contains(&base));
        let pow2 = 2f64.powi(k);
        prop_assert_eq!(angular_error(&e.map(|v| v * pow2), &g.map(|v| v * 0.5)).unwrap(), base);
        let scaled = angular_error(&e.map(|v| v * a), &g.map(|v| v * b)).unwrap();
        prop_assert!((scaled - base).abs() < 1e-9);
    }

    #[test]
    fn angular_error_triangle_inequality(x in unit_sphere(), y in unit_sphere(), z in unit_sphere()) {
        let d = |a: &Rgb, b: &Rgb| angular_error(a, b).unwrap().to_radians();
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
        prop_assert_eq!(d(&x, &x), 0.0);
    }
}

proptest! {
    #[test]
    fn summarize_ignores_order(mut errors in prop::collection::vec(0.0..180.0f64, 1..50), seed: u64) {
        let a = summarize(&errors, 1.0).unwrap();
        // Deterministic shuffle.
        let mut state = seed | 1;
        for i in (1..errors.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            errors.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let b = summarize(&errors, 1.0).unwrap();
        prop_assert_eq!((a.median, a.trimean, a.max), (b.median, b.trimean, b.max));
        prop_assert!((a.mean - b.mean).abs() <= 1e-12 * a.mean.max(1.0));
        prop_assert!(a.median <= a.max && a.mean <= a.max);
    }
}

#[test]
fn constant_image_estimate_is_independent_of_sampling_density() {
    let img = LinearImage::filled(30, 20, [0.7, 0.35, 0.14]);
    let mask = PixelMask::none(30, 20);
    let mut dense = CsParams::default().with_steps(1, 1).with_seed(5);
    dense.spray.points_per_spray = 20;
    let sparse = dense.with_steps(7, 7);
    let a = estimate(&img, &mask, &dense).unwrap().unit();
    let b = estimate(&img, &mask, &sparse).unwrap().unit();
    for c in 0..3 {
        assert!((a[c] - b[c]).abs() < 1e-12);
    }
}
