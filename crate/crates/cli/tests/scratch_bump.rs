use mfe_core::analysis::fields::RadialBump;
use mfe_core::basis::{gram_hs, BasisFamily, BasisSpec};
use mfe_core::decoder::DualRepresentation;
use mfe_core::encoder::{encode_joint, Block, JointManifoldFunction};
use mfe_core::geometry::shapes;
use rand::{Rng, SeedableRng};

#[test]
#[ignore]
fn bump_decay_table() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let mut pentagon = shapes::regular_polygon_boundary([0.35, 0.65], 0.18, 5, 16);
    for v in pentagon.values.iter_mut() { *v = rng.gen_range(0.5..1.5); }
    let mut disk = shapes::disk([0.65, 0.3], 0.15, 6, 48);
    for v in disk.values.iter_mut() { *v = rng.gen_range(-1.0..1.0); }
    for (cx, r) in [(0.15f64, 0.12f64), (0.17, 0.16), (0.17, 0.17), (0.2, 0.2), (0.17, 0.22)] {
        let bump = RadialBump { center: vec![cx, cx], radius: r };
        print!("center={cx} radius={r}: ");
        for n in [8usize, 12, 16, 20, 24] {
            let spec = BasisSpec::new(BasisFamily::LegendreTensor, n, 2).unwrap();
            let jmf = JointManifoldFunction::new(2)
                .with_part(pentagon.clone()).unwrap()
                .with_part(disk.clone()).unwrap();
            let encoded = encode_joint(&jmf, &spec, None).unwrap();
            let gram = gram_hs(&spec, 0).unwrap();
            let dual = DualRepresentation::new(&encoded, &gram).unwrap();
            let s = dual.pair(Block::Shape, &bump).unwrap().abs();
            let f = dual.pair(Block::Function, &bump).unwrap().abs();
            print!("n={n}:{:.1e}/{:.1e} ", s, f);
        }
        println!();
    }
}
