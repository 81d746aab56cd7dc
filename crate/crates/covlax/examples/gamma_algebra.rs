//! Gamma-matrix bases across dimensions and signatures.
//!
//! Builds the recursive Kronecker representation for D = 2..=6, checks the
//! anticommutation relations close exactly, and prints a few antisymmetrized
//! products.
//!
//! ```bash
//! cargo run --example gamma_algebra
//! ```

use covlax::clifford::build_gamma_basis;

fn main() {
    println!("{:<4} {:<12} {:<6} {:<22} {:<10}", "D", "signature", "N", "anticommutator resid", "tr gamma^12");
    for d in 2..=6usize {
        let lorentzian: Vec<i8> = std::iter::once(-1)
            .chain(std::iter::repeat(1))
            .take(d)
            .collect();
        for signature in [vec![1i8; d], lorentzian] {
            let basis = build_gamma_basis(d, &signature).expect("basis");
            let resid = basis.anticommutator_residual();
            let g12 = basis.gamma_antisym(&[0, 1]).expect("gamma^{01}");
            println!(
                "{:<4} {:<12} {:<6} {:<22} {:<10.1e}",
                d,
                format!("{signature:?}"),
                basis.n,
                format!("{resid:.1e} (exact)"),
                g12.trace().norm()
            );
        }
    }

    // rank-r antisymmetrized products are traceless below the top rank
    let basis = build_gamma_basis(4, &[-1, 1, 1, 1]).expect("basis");
    println!("\nD = 4 Lorentzian, antisymmetrized products:");
    for r in 1..=4usize {
        let idx: Vec<usize> = (0..r).collect();
        let g = basis.gamma_antisym(&idx).expect("product");
        println!(
            "  gamma^{:?}: max |entry| = {:.3}, |trace| = {:.1e}",
            idx,
            g.max_abs(),
            g.trace().norm()
        );
    }
}
