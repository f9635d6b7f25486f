//! Minimal SVG 1.1 emitters. The barcode x-axis runs from the capacity down
//! to the smallest spectrum value (the filtration parameter decreases left to
//! right); dendrogram heights decrease downward.

use hypergh::dowker::Barcode;
use hypergh::graphify::Dendrogram;
use std::fmt::Write as _;

const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(width: f64, height: f64) -> String {
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
            "width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n",
            "<rect width=\"{w:.0}\" height=\"{h:.0}\" fill=\"white\"/>\n"
        ),
        w = width,
        h = height
    )
}

/// Bars drawn against a δ-axis that starts at `cap` on the left and ends at
/// `floor` on the right. Essential bars run off the right edge; zero-length
/// bars become dots.
pub fn barcode_svg(barcode: &Barcode, cap: f64, floor: f64) -> String {
    let (left, top, plot_w, row_h, axis_h) = (70.0, 20.0, 600.0, 14.0, 40.0);
    let span = if cap > floor { cap - floor } else { 1.0 };
    let x = |delta: f64| left + (cap - delta) / span * plot_w;

    let total_bars: usize = (0..=barcode.max_degree()).map(|k| barcode.degree(k).len()).sum();
    let height = top + (total_bars.max(1) as f64) * row_h + axis_h;
    let width = left + plot_w + 50.0;
    let mut s = header(width, height);

    let mut row = 0usize;
    for k in 0..=barcode.max_degree() {
        let color = PALETTE[k % PALETTE.len()];
        for bar in barcode.degree(k) {
            let y = top + (row as f64 + 0.5) * row_h;
            row += 1;
            let x0 = x(bar.birth);
            if bar.is_essential() {
                let edge = left + plot_w;
                let _ = writeln!(
                    s,
                    "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{edge:.2}\" y2=\"{y:.2}\" \
                     stroke=\"{color}\" stroke-width=\"3\"/>\n\
                     <path d=\"M {tip:.2} {y:.2} l -8 -4 l 0 8 z\" fill=\"{color}\"/>",
                    tip = edge + 10.0,
                );
            } else if bar.is_ephemeral() {
                let _ = writeln!(
                    s,
                    "<circle cx=\"{x0:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"{color}\"/>"
                );
            } else {
                let x1 = x(bar.death);
                let _ = writeln!(
                    s,
                    "<line x1=\"{x0:.2}\" y1=\"{y:.2}\" x2=\"{x1:.2}\" y2=\"{y:.2}\" \
                     stroke=\"{color}\" stroke-width=\"3\"/>"
                );
            }
        }
        if !barcode.degree(k).is_empty() {
            let y = top + (row as f64 - barcode.degree(k).len() as f64 / 2.0) * row_h;
            let _ = writeln!(
                s,
                "<text x=\"10\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" \
                 fill=\"{color}\">deg {k}</text>",
                y + 4.0
            );
        }
    }

    // δ-axis with end ticks; the parameter decreases to the right.
    let ax_y = height - axis_h + 10.0;
    let _ = writeln!(
        s,
        "<line x1=\"{left:.2}\" y1=\"{ax_y:.2}\" x2=\"{r:.2}\" y2=\"{ax_y:.2}\" \
         stroke=\"black\" stroke-width=\"1\"/>",
        r = left + plot_w
    );
    for (delta, anchor) in [(cap, "start"), (floor, "end")] {
        let tx = x(delta);
        let _ = writeln!(
            s,
            "<line x1=\"{tx:.2}\" y1=\"{ax_y:.2}\" x2=\"{tx:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n\
             <text x=\"{tx:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"{anchor}\">&#948; = {delta}</text>",
            ax_y + 5.0,
            ax_y + 18.0,
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Merge tree with threshold decreasing downward: every leaf hangs at its own
/// height and clusters join at the height of their merge.
pub fn dendrogram_svg(d: &Dendrogram) -> String {
    let n = d.leaves.len();
    let (left, top, plot_h, slot, label_h) = (50.0, 20.0, 300.0, 56.0, 40.0);

    // Children of every internal cluster; cluster ids: leaves 0..n, then one
    // fresh id per merge.
    let mut children: Vec<Option<(usize, usize)>> = vec![None; n + d.merges.len()];
    let mut is_child = vec![false; n + d.merges.len()];
    for (idx, m) in d.merges.iter().enumerate() {
        children[n + idx] = Some((m.a, m.b));
        is_child[m.a] = true;
        is_child[m.b] = true;
    }

    // Leaves in tree order, roots left to right (agenda pops ascending ids).
    let mut order = Vec::with_capacity(n);
    let mut agenda: Vec<usize> = (0..n + d.merges.len()).rev().filter(|&c| !is_child[c]).collect();
    while let Some(c) = agenda.pop() {
        match children[c] {
            Some((a, b)) => {
                agenda.push(b);
                agenda.push(a);
            }
            None => order.push(c),
        }
    }

    let mut heights: Vec<f64> = d.leaf_heights.clone();
    heights.extend(d.merges.iter().map(|m| m.height));
    let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = heights.iter().copied().fold(f64::INFINITY, f64::min);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let y = |h: f64| top + (hi - h) / span * plot_h;

    let mut slot_of = vec![0usize; n];
    for (s, &leaf) in order.iter().enumerate() {
        slot_of[leaf] = s;
    }
    let mut pos: Vec<(f64, f64)> =
        (0..n).map(|i| (left + slot_of[i] as f64 * slot, y(d.leaf_heights[i]))).collect();

    let width = left + ((n.max(1) - 1) as f64) * slot + 90.0;
    let height = top + plot_h + label_h;
    let mut s = header(width, height);

    for m in &d.merges {
        let ((xa, ya), (xb, yb)) = (pos[m.a], pos[m.b]);
        let ym = y(m.height);
        let _ = writeln!(
            s,
            "<path d=\"M {xa:.2} {ya:.2} L {xa:.2} {ym:.2} L {xb:.2} {ym:.2} L {xb:.2} {yb:.2}\" \
             fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>"
        );
        pos.push(((xa + xb) / 2.0, ym));
    }

    for (i, leaf) in d.leaves.iter().enumerate() {
        let (lx, ly) = pos[i];
        let _ = writeln!(
            s,
            "<circle cx=\"{lx:.2}\" cy=\"{ly:.2}\" r=\"3\" fill=\"#1f77b4\"/>\n\
             <text x=\"{lx:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>",
            top + plot_h + 18.0,
            escape(leaf)
        );
    }
    s.push_str("</svg>\n");
    s
}
