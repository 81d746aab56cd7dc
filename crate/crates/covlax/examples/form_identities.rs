//! Exterior-algebra identities behind the conserved quantities.
//!
//! Shows, at random Kerr phase points:
//! - the contraction-wedge identity `(a.p)^p + (a^p).p = p^2 a`;
//! - reconstruction of `kappa` and `mu` from `Phi` and `F`;
//! - Hodge duality between the KY-side and CCKY-side conserved forms;
//! - the projector form of `F`.
//!
//! ```bash
//! cargo run --release --example form_identities
//! ```

use covlax::cli::random_phase_points;
use covlax::forms::{form_identity_residual, hodge, increasing_tuples, Form};
use covlax::spacetimes;
use covlax::symmetry::{f_form, f_form_projected, kappa, mu, phi_form};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let phi = entry.ky("ky").expect("KY field");
    let hf = entry.ccky("principal").expect("CCKY field");
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut worst_identity: f64 = 0.0;
    let mut worst_reconstruct: f64 = 0.0;
    let mut worst_projector: f64 = 0.0;
    let points = random_phase_points(&entry, 11, 10);
    for z in &points {
        let g = metric.metric_at(&z.x).unwrap();
        let (ginv, _) = g.inverse().unwrap();
        let p2 = z.p_squared(metric).unwrap();

        let rank = rng.random_range(1..4);
        let mut alpha = Form::zero(4, rank);
        for combo in increasing_tuples(4, rank) {
            alpha.set_antisym(&combo, rng.random_range(-1.0..1.0));
        }
        worst_identity = worst_identity.max(form_identity_residual(&alpha, &z.p, &g).unwrap());

        let kap = kappa(&phi, metric, z).unwrap();
        let muf = mu(&hf, metric, z).unwrap();
        let phif = phi_form(&phi, metric, z).unwrap();
        let ff = f_form(&hf, metric, z).unwrap();
        let r1 = phif
            .contract(&z.p, &ginv)
            .unwrap()
            .scale(1.0 / p2)
            .sub(&kap)
            .max_abs();
        let r2 = ff.wedge1(&z.p).scale(1.0 / p2).sub(&muf).max_abs();
        worst_reconstruct = worst_reconstruct.max(r1).max(r2);
        worst_projector = worst_projector
            .max(f_form_projected(&hf, metric, z).unwrap().sub(&ff).max_abs());
    }
    println!("contraction-wedge identity residual: {worst_identity:.3e}");
    println!("reconstruction residual:             {worst_reconstruct:.3e}");
    println!("projector-form residual:             {worst_projector:.3e}");

    // duality probe: compare kappa' = (*h).p against +-*(mu) componentwise
    let z = &points[0];
    let g = metric.metric_at(&z.x).unwrap();
    let (ginv, _) = g.inverse().unwrap();
    let h_val = hf.0.at(&z.x);
    let phi_dual = hodge(&g, &h_val).unwrap();
    let kap_dual = phi_dual.contract(&z.p, &ginv).unwrap();
    let muf = mu(&hf, metric, z).unwrap();
    let star_mu = hodge(&g, &muf).unwrap();
    println!("\nkappa' = (*h).p  vs  *(h^p) componentwise:");
    for a in 0..4 {
        println!(
            "  a={a}:  kappa'_a = {:+.6e}   (*mu)_a = {:+.6e}   ratio {:+.3}",
            kap_dual.get(&[a]),
            star_mu.get(&[a]),
            kap_dual.get(&[a]) / star_mu.get(&[a])
        );
    }
    let phi_form_dual = kap_dual.wedge1(&z.p);
    let ff = f_form(&hf, metric, z).unwrap();
    let star_f = hodge(&g, &ff).unwrap();
    println!("\nPhi' = kappa'^p  vs  *F componentwise (first few):");
    for combo in increasing_tuples(4, 2) {
        println!(
            "  {:?}:  Phi'_ab = {:+.6e}   (*F)_ab = {:+.6e}   ratio {:+.3}",
            combo,
            phi_form_dual.get(&combo),
            star_f.get(&combo),
            phi_form_dual.get(&combo) / star_f.get(&combo)
        );
    }
}
