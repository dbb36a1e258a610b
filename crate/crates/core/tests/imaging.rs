mod common;

use common::scene;
use proptest::prelude::*;
use quatcomp::imaging::{
    decode, encode, make_mask, mask_from_json, mask_from_png, mask_to_json, mask_to_png, parse_patterns, psnr, ssim,
    ImageQ, MaskPattern,
};
use quatcomp::Mask;

fn small_image(bytes: &[u8], n: u32) -> image::RgbImage {
    image::RgbImage::from_fn(n, n, |x, y| {
        let k = ((y * n + x) * 3) as usize;
        image::Rgb([bytes[k % bytes.len()], bytes[(k + 1) % bytes.len()], bytes[(k + 2) % bytes.len()]])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encode_decode_is_lossless(bytes in prop::collection::vec(any::<u8>(), 3..200), n in 1u32..12) {
        let img = small_image(&bytes, n);
        let q = encode(&img);
        prop_assert!(q.matrix().is_pure());
        prop_assert_eq!(decode(&q), img);
    }

    #[test]
    fn mask_png_and_json_round_trip(rows in 1usize..40, cols in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let m = make_mask(&[MaskPattern::Random { p, seed }], rows, cols).unwrap();
        prop_assert_eq!(&mask_from_png(&mask_to_png(&m).unwrap()).unwrap(), &m);
        prop_assert_eq!(&mask_from_json(&mask_to_json(&m).unwrap()).unwrap(), &m);
    }

    #[test]
    fn psnr_and_ssim_are_symmetric(a in prop::collection::vec(any::<u8>(), 3..300), b in prop::collection::vec(any::<u8>(), 3..300)) {
        let x = encode(&small_image(&a, 16));
        let y = encode(&small_image(&b, 16));
        prop_assert_eq!(psnr(&x, &y).unwrap(), psnr(&y, &x).unwrap());
        prop_assert!((ssim(&x, &y).unwrap() - ssim(&y, &x).unwrap()).abs() < 1e-12);
        prop_assert!(ssim(&x, &y).unwrap() <= 1.0 + 1e-12);
    }
}

#[test]
fn identical_images_score_perfectly() {
    let q = encode(&scene(40, 1));
    assert_eq!(psnr(&q, &q).unwrap(), f64::INFINITY);
    assert!((ssim(&q, &q).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn psnr_falls_as_noise_grows() {
    let truth = encode(&scene(48, 2));
    let mut last = f64::INFINITY;
    for amp in [2.0, 8.0, 32.0] {
        let mut noisy = truth.matrix().clone();
        for l in 1..4 {
            for (k, v) in noisy.plane_mut(l).iter_mut().enumerate() {
                *v = (*v + if k % 2 == 0 { amp } else { -amp }).clamp(0.0, 255.0);
            }
        }
        let p = psnr(&ImageQ::new(noisy).unwrap(), &truth).unwrap();
        assert!(p < last);
        last = p;
    }
}

#[test]
fn pattern_union_covers_each_part() {
    let pats = parse_patterns("block:x=2:y=3:w=4:h=5+diamond:row=20:col=20:d=3").unwrap();
    let m = make_mask(&pats, 30, 30).unwrap();
    let block = make_mask(&pats[..1], 30, 30).unwrap();
    let diamond = make_mask(&pats[1..], 30, 30).unwrap();
    assert_eq!(m.missing_count(), block.missing_count() + diamond.missing_count());
    assert_eq!(block.missing_count(), 20);
    assert_eq!(diamond.missing_count(), 25);
    assert!(m.bitmap().iter().zip(Mask::full(30, 30).bitmap()).any(|(a, b)| a != b));
}
