//! Vertex data for redrawing region shapes: a two-dimensional slice in
//! boundary order, and the faces of the full polytope.
//!
//! cargo run --example plot_slice > slice.csv

use bcdof::catalog::region_for;
use bcdof::rational::{format, int};
use bcdof::scenario::{AntennaConfig, Coord, CsitModel, MessageSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = AntennaConfig::new(3, 2, 1)?;
    let dd: CsitModel = "DD".parse()?;
    let (region, _) = region_for(cfg, MessageSet::Common, dd);

    let slice = region.slice(Coord::D2, &int(0));
    println!("d1,d0");
    for p in slice.boundary_order()? {
        println!("{},{}", format(&p.d1), format(&p.d0));
    }

    let vertices = region.vertices()?;
    for h in region.halfspaces.iter().filter(|h| !h.is_trivial()) {
        let on: Vec<String> = vertices
            .iter()
            .filter(|v| h.is_tight_at(v))
            .map(|v| v.to_string())
            .collect();
        eprintln!("{h}: {}", on.join(" "));
    }
    Ok(())
}
