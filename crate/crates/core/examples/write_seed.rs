//! Prints the canonical shipped catalog. Regenerate `data/catalog.json` with
//! `cargo run -p authn-catalog --example write_seed > data/catalog.json`.

use std::io::Write;

fn main() -> std::io::Result<()> {
    let bytes = authn_catalog::save(&authn_catalog::seed::seed_document());
    std::io::stdout().write_all(&bytes)
}
