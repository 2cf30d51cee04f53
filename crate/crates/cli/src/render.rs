//! SVG rendering of validated packings. The y axis points up, as in the
//! packing coordinates.

use std::fmt::Write;

use rectpack::{validate_packing, Instance, Packing, Region};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    /// Pixels per unit length.
    pub scale: u64,
    /// Print id and profit inside each item.
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { scale: 20, labels: true }
    }
}

const MARGIN: u64 = 10;

fn fill(id: u32) -> String {
    format!("hsl({},60%,70%)", (id as u64 * 137) % 360)
}

/// Refuses packings that fail [`validate_packing`]; output is a pure function
/// of the arguments.
pub fn render_svg(instance: &Instance, packing: &Packing, style: &RenderStyle) -> Result<String, CliError> {
    let report = validate_packing(instance, packing)?;
    if !report.is_feasible() {
        return Err(CliError::Infeasible(format!("refusing to render: {:?}", report.violations)));
    }
    let items = instance.items();
    let s = style.scale.max(1);
    let (w, h) = match instance.region() {
        Region::Rect { w, h } => (w, h),
        Region::Strip { w } => (w, packing.height(&items).max(1)),
        Region::L { n, .. } => (n, n),
    };
    // Flip y: a box [y, y+bh) lands at svg row (h − y − bh).
    let rect = |x: u64, y: u64, bw: u64, bh: u64| (x * s + MARGIN, (h - y - bh) * s + MARGIN, bw * s, bh * s);

    let mut out = String::new();
    let (pw, ph) = (w * s + 2 * MARGIN, h * s + 2 * MARGIN);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{pw}" height="{ph}" viewBox="0 0 {pw} {ph}">"#
    )
    .unwrap();
    let outlines = match instance.region() {
        Region::Rect { .. } | Region::Strip { .. } => vec![(0, 0, w, h)],
        Region::L { n, w_l, h_l } => vec![(0, 0, n, h_l), (0, 0, w_l, n)],
    };
    for (x, y, bw, bh) in outlines {
        let (x, y, bw, bh) = rect(x, y, bw, bh);
        writeln!(
            out,
            r##"  <rect class="region" x="{x}" y="{y}" width="{bw}" height="{bh}" fill="none" stroke="#000" stroke-width="2"/>"##
        )
        .unwrap();
    }
    for p in &packing.placements {
        let it = items.iter().find(|i| i.id == p.item).expect("validated");
        let (iw, ih) = it.dims(p.rotated);
        let (x, y, bw, bh) = rect(p.x, p.y, iw, ih);
        writeln!(
            out,
            r##"  <rect class="item" data-id="{}" x="{x}" y="{y}" width="{bw}" height="{bh}" fill="{}" stroke="#333"/>"##,
            it.id,
            fill(it.id.0)
        )
        .unwrap();
        if style.labels {
            writeln!(
                out,
                r#"  <text x="{}" y="{}" font-size="{}" text-anchor="middle" dominant-baseline="middle">{} ({})</text>"#,
                x + bw / 2,
                y + bh / 2,
                (s / 2).max(6),
                it.id,
                it.profit
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
