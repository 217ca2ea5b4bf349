//! Walk the bundled transition catalog and print each record with its
//! derived rates.
//!
//! ```bash
//! cargo run -p recqed --example catalog_tour
//! ```

use recqed::catalog::Catalog;

fn main() {
    let catalog = Catalog::builtin();
    println!("{} transitions in the bundled catalog\n", catalog.len());
    println!(
        "{:<28} {:>10} {:>9} {:>9} {:>9} {:>12} {:>12}",
        "id", "lambda/nm", "f", "T1/us", "T2/us", "gamma/s^-1", "gamma_p/s^-1"
    );
    for t in catalog.records() {
        println!(
            "{:<28} {:>10} {:>9.1e} {:>9} {:>9} {:>12.3e} {:>12.3e}",
            t.id,
            t.wavelength_nm,
            t.oscillator_strength,
            t.t1_us,
            t.t2_us,
            t.gamma(),
            t.gamma_p(),
        );
    }
    println!(
        "\nT2 field annotations: {}",
        catalog
            .records()
            .iter()
            .map(|t| format!(
                "{} ({})",
                t.id.split(' ').next().unwrap_or(""),
                t.t2_field_note
            ))
            .collect::<Vec<_>>()
            .join(", ")
    );
}
