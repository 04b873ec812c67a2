//! SVG pictures of grid surfaces: every horizontal loop of cells is drawn
//! as a row, with the vertical gluings written on the edges and the cone
//! points coloured by the order of the zero.

use std::fmt::Write;

use crate::surface::GridSurface;

const CELL: usize = 44;
const MARGIN: usize = 24;

/// Fill colour for a zero of the given order.
pub fn zero_colour(order: usize) -> &'static str {
    match order {
        1 => "#d62728",
        2 => "#ffffff",
        3 => "#1f77b4",
        4 => "#2ca02c",
        5 => "#9467bd",
        6 => "#ff7f0e",
        7 => "#8c564b",
        _ => "#000000",
    }
}

/// Rows of the picture: the loops of `right`, each starting at its
/// smallest cell, ordered by that cell.
fn rows(s: &GridSurface) -> Vec<Vec<usize>> {
    let mut seen = vec![false; s.num_cells()];
    let mut out = Vec::new();
    for c in 0..s.num_cells() {
        if !seen[c] {
            let r = s.row(c);
            for &x in &r {
                seen[x] = true;
            }
            out.push(r);
        }
    }
    out
}

pub fn render_svg(s: &GridSurface, title: Option<&str>) -> String {
    let rows = rows(s);
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(1);
    let title_h = if title.is_some() { 24 } else { 0 };
    let row_gap = 22;
    let w = 2 * MARGIN + width * CELL + 40;
    let h = 2 * MARGIN + title_h + rows.len() * (CELL + row_gap);
    let mult = s.vertex_multiplicities();
    let vid = s.vertex_ids();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if let Some(t) = title {
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="15">{}</text>"#, MARGIN, MARGIN + 4, escape(t));
    }
    let mut dots = String::new();
    for (ri, row) in rows.iter().enumerate() {
        let y0 = MARGIN + title_h + ri * (CELL + row_gap) + row_gap / 2;
        for (ci, &c) in row.iter().enumerate() {
            let x0 = MARGIN + 20 + ci * CELL;
            let _ = writeln!(
                out,
                r##"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="#eef3fb" stroke="#333" stroke-width="1"/>"##
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
                x0 + CELL / 2,
                y0 + CELL / 2 + 5,
                c + 1
            );
            // Which cell lies above and below, written just inside the edges.
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-size="9" fill="#555" text-anchor="middle">{}</text>"##,
                x0 + CELL / 2,
                y0 + 10,
                s.top(c) + 1
            );
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-size="9" fill="#555" text-anchor="middle">{}</text>"##,
                x0 + CELL / 2,
                y0 + CELL - 3,
                s.bottom(c) + 1
            );
            let corners = [
                (x0, y0 + CELL, c),
                (x0 + CELL, y0 + CELL, s.right(c)),
                (x0, y0, s.top(c)),
                (x0 + CELL, y0, s.top(s.right(c))),
            ];
            for (x, y, cell) in corners {
                let order = mult[vid[cell]] - 1;
                if order > 0 {
                    let _ = writeln!(
                        dots,
                        r##"<circle cx="{x}" cy="{y}" r="5" fill="{}" stroke="#000" stroke-width="1.2"/>"##,
                        zero_colour(order)
                    );
                }
            }
        }
        // The two vertical ends of a row are glued to each other.
        let xl = MARGIN + 20;
        let xr = xl + row.len() * CELL;
        for x in [xl - 8, xr + 8] {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
                x,
                y0 + CELL / 2 + 4,
                glyph(ri)
            );
        }
    }
    out.push_str(&dots);
    out.push_str("</svg>\n");
    out
}

fn glyph(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    let mut s = String::new();
    let mut i = i;
    loop {
        s.insert(0, letters[i % 26] as char);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
