// SPDX-License-Identifier: Apache-2.0

//! Score candidates against references and aggregate the reports.
//! Here each corpus file is compared with a copy shifted by a few grid
//! units.

use std::path::PathBuf;

use atomsvg::atomize::{atomize_str, AtomicCommand, AtomicSvg};
use atomsvg::bench::{aggregate, evaluate_pairs, EvalPair};
use atomsvg::raster::RenderOptions;

fn shifted(svg: &AtomicSvg, d: f64) -> AtomicSvg {
    let mv = |p: atomsvg::geom::Point| atomsvg::geom::Point::new((p.x + d).min(199.0), p.y);
    let mut out = svg.clone();
    for cmd in out.paths.iter_mut().flat_map(|p| p.commands.iter_mut()) {
        *cmd = match *cmd {
            AtomicCommand::M(p) => AtomicCommand::M(mv(p)),
            AtomicCommand::L(p) => AtomicCommand::L(mv(p)),
            AtomicCommand::C(a, b, p) => AtomicCommand::C(mv(a), mv(b), mv(p)),
            AtomicCommand::A(mut a) => {
                a.to = mv(a.to);
                AtomicCommand::A(a)
            }
            AtomicCommand::Z => AtomicCommand::Z,
        };
    }
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let work = std::env::temp_dir().join("atomsvg_evaluate");
    std::fs::create_dir_all(&work)?;

    let mut pairs = Vec::new();
    for name in ["01_rect", "17_icon_home", "23_compound_icon"] {
        let reference = corpus.join(format!("{name}.svg"));
        let svg = atomize_str(&std::fs::read_to_string(&reference)?)?;
        let candidate = work.join(format!("{name}.svg"));
        std::fs::write(&candidate, shifted(&svg, 3.0).to_svg_string())?;
        pairs.push(EvalPair { id: name.into(), reference, candidate });
    }

    let records = evaluate_pairs(&pairs, &RenderOptions::default(), None).into_iter().collect::<Result<Vec<_>, _>>()?;
    for r in &records {
        println!("{}", serde_json::to_string(r)?);
    }
    let s = aggregate(&records)?;
    println!("{} pairs: ssim mean {:.3}, mse mean {:.4}", s.count, s.ssim.mean, s.mse.mean);
    Ok(())
}
