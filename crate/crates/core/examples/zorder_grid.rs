//! Grid derivation, z-value interleaving and reference trajectories.

use trajsearch::fixtures::{running_grid, table2};
use trajsearch::zorder::{deinterleave, interleave, to_reference};
use trajsearch::{build_grid, BBox, Measure};

fn main() -> anyhow::Result<()> {
    let z = interleave(0b010, 0b101, 3);
    println!("col 010, row 101 -> {}  (back to {:?})", z.to_binary(3), deinterleave(z, 3));

    let g = build_grid(&BBox::new(-3.0, 10.0, 97.0, 40.0), 7.5)?;
    println!(
        "bbox 100x30, requested cell 7.5 -> {} cells per axis of {:.4}, origin ({:.3}, {:.3}), slack {:.4}",
        g.level_l, g.cell_size, g.origin.x, g.origin.y, g.slack
    );

    let grid = running_grid();
    let (data, _) = table2();
    for t in data.iter() {
        let seq = to_reference(t, &grid, Measure::Frechet)?;
        let set = to_reference(t, &grid, Measure::Hausdorff)?;
        let bin = |zs: &[trajsearch::ZValue]| zs.iter().map(|z| z.to_binary(grid.bits)).collect::<Vec<_>>().join(" ");
        println!("t{}  sequence: {}", t.id, bin(&seq.zvals));
        println!("    set:      {}", bin(&set.zvals));
    }
    Ok(())
}
