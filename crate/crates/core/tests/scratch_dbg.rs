// temporary diagnostic
use mfe_core::io;
use mfe_core::neuralop::evaluate_relative_l2;

#[test]
#[ignore]
fn poisson_error_distribution() {
    let ckpt = io::load_checkpoint(std::path::Path::new("/tmp/mfesmoke/model.json")).unwrap();
    let data = io::load_dataset(std::path::Path::new("/tmp/mfesmoke/test.json")).unwrap();
    let report = evaluate_relative_l2(&ckpt.params, &data).unwrap();
    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new(); // rel, a, b, c
    for (i, rel) in report.per_sample.iter().enumerate() {
        let rel = rel.unwrap();
        let shape = &data.samples[i].branch_inputs[0];
        let func = &data.samples[i].branch_inputs[1];
        let len = shape[0];
        let sum_ab = 1.0 + shape[1] / (3f64.sqrt() * len);
        let a = (sum_ab - len) / 2.0;
        let b = (sum_ab + len) / 2.0;
        let c = func[0] / shape[0];
        rows.push((rel, a, b, c));
    }
    rows.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    println!("worst 15:");
    for r in rows.iter().take(15) {
        println!("rel={:.4} a={:.3} b={:.3} c={:+.3} len={:.3}", r.0, r.1, r.2, r.3, r.2 - r.1);
    }
    println!("best 5:");
    for r in rows.iter().rev().take(5) {
        println!("rel={:.4} a={:.3} b={:.3} c={:+.3}", r.0, r.1, r.2, r.3);
    }
    let median = rows[rows.len() / 2].0;
    println!("mean={:.4} median={median:.4}", report.mean);
    let frac_over10 = rows.iter().filter(|r| r.0 > 0.1).count() as f64 / rows.len() as f64;
    println!("fraction over 10%: {frac_over10:.3}");
}
