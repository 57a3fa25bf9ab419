//! Text, JSON and SVG charts for coefficient tables and spectral sequence
//! pages.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffring::{basis_at, group_at, Theory, Window};
use crate::exactalg::FGAbelianGroup;
use crate::ssengine::{Page, Spot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("unsupported format `{0}`")]
    Format(String),
    #[error("unsupported indexing `{0}`")]
    Indexing(String),
    #[error("malformed document: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, RenderError> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(RenderError::Format(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Indexing {
    #[default]
    Serre,
    /// `(a, b) = (-(p + q), p)`
    Adams,
}

impl FromStr for Indexing {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, RenderError> {
        match s {
            "serre" => Ok(Indexing::Serre),
            "adams" => Ok(Indexing::Adams),
            _ => Err(RenderError::Indexing(s.to_string())),
        }
    }
}

impl Indexing {
    pub fn place(&self, s: Spot) -> (i64, i64) {
        match self {
            Indexing::Serre => (s.p, s.q),
            Indexing::Adams => (-(s.p + s.q), s.p),
        }
    }

    fn axes(&self) -> (&'static str, &'static str) {
        match self {
            Indexing::Serre => ("p", "q"),
            Indexing::Adams => ("a", "b"),
        }
    }
}

/// Chart glyph: `O` for `Z`, `*` for `Z/2`, `.` for `0`, `#` otherwise, `X` when indeterminate.
pub fn glyph(g: &FGAbelianGroup, indeterminate: bool) -> char {
    if indeterminate {
        'X'
    } else if g.is_zero() {
        '.'
    } else if *g == FGAbelianGroup::z() {
        'O'
    } else if *g == FGAbelianGroup::cyclic(2) {
        '*'
    } else {
        '#'
    }
}

#[derive(Clone, Debug, Default)]
struct Chart {
    title: String,
    axes: (&'static str, &'static str),
    /// chart-coordinate bounds, `None` for an empty chart
    bounds: Option<(i64, i64, i64, i64)>,
    cells: BTreeMap<(i64, i64), (FGAbelianGroup, bool)>,
    arrows: Vec<((i64, i64), (i64, i64))>,
    notes: Vec<String>,
}

impl Chart {
    fn text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let Some((xmin, xmax, ymin, ymax)) = self.bounds else {
            out.push_str("(empty)\n");
            return out;
        };
        let lw = [ymin, ymax].iter().map(|y| y.to_string().len()).max().unwrap_or(1);
        for y in (ymin..=ymax).rev() {
            let _ = write!(out, "{y:>lw$} |");
            for x in xmin..=xmax {
                let c = self.cells.get(&(x, y)).map_or('.', |(g, ind)| glyph(g, *ind));
                out.push(' ');
                out.push(c);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:>lw$} +{}", "", "-".repeat(2 * (xmax - xmin + 1) as usize));
        let _ = writeln!(out, "{:>lw$}   {} = {xmin}..{xmax}, {} = {ymin}..{ymax}", "", self.axes.0, self.axes.1);
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }

    fn svg(&self) -> String {
        const U: i64 = 10;
        let (xmin, xmax, ymin, ymax) = self.bounds.unwrap_or((0, -1, 0, -1));
        let w = (xmax - xmin + 3).max(2) * U;
        let h = (ymax - ymin + 3).max(2) * U;
        let px = |x: i64| (x - xmin + 1) * U;
        let py = |y: i64| (ymax - y + 1) * U;
        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        out.push_str(r#"<defs><marker id="head" markerWidth="4" markerHeight="4" refX="4" refY="2" orient="auto"><path d="M0,0 L4,2 L0,4 z"/></marker></defs>"#);
        out.push('\n');
        if self.bounds.is_some() {
            let _ = writeln!(out, r##"<g stroke="#ddd" stroke-width="0.5">"##);
            for x in xmin..=xmax {
                let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, px(x), py(ymax), py(ymin));
            }
            for y in ymin..=ymax {
                let _ = writeln!(out, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, py(y), px(xmin), px(xmax));
            }
            out.push_str("</g>\n");
        }
        for ((x, y), (g, ind)) in &self.cells {
            let (cx, cy) = (px(*x), py(*y));
            let _ = match glyph(g, *ind) {
                'O' => writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="none" stroke="black"/>"#),
                '*' => writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="2" fill="black"/>"#),
                'X' => writeln!(
                    out,
                    r#"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="red"/>"#,
                    cx - 3,
                    cy - 3,
                    cx + 3,
                    cy + 3,
                    cx - 3,
                    cy + 3,
                    cx + 3,
                    cy - 3
                ),
                '#' => writeln!(out, r#"<rect x="{}" y="{}" width="6" height="6" fill="gray"/>"#, cx - 3, cy - 3),
                _ => Ok(()),
            };
        }
        for ((x0, y0), (x1, y1)) in &self.arrows {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="blue" marker-end="url(#head)"/>"#,
                px(*x0),
                py(*y0),
                px(*x1),
                py(*y1)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One entry of a coefficient table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffCell {
    pub p: i64,
    pub q: i64,
    pub group: String,
    pub generator: Option<String>,
}

/// Nonzero entries of `H^{p,q}` of a closed-form theory over a window.
pub fn coefficient_table(theory: Theory, window: Window) -> Vec<CoeffCell> {
    window
        .spots()
        .filter_map(|(p, q)| {
            let m = basis_at(theory, p, q)?;
            Some(CoeffCell {
                p,
                q,
                group: group_at(theory, p, q).to_string(),
                generator: Some(m.to_string()),
            })
        })
        .collect()
}

/// Renders `(p, q) → group` tables, dimension horizontal and weight vertical.
pub fn render_table(title: &str, window: Window, cells: &[CoeffCell], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(cells).expect("serializable") + "\n",
        Format::Text | Format::Svg => {
            let mut chart = Chart {
                title: title.to_string(),
                axes: ("p", "q"),
                bounds: (!window.is_empty()).then_some((window.pmin, window.pmax, window.qmin, window.qmax)),
                ..Chart::default()
            };
            for c in cells {
                let g = c.group.parse().unwrap_or_else(|_| FGAbelianGroup::free(2));
                chart.cells.insert((c.p, c.q), (g, false));
            }
            if format == Format::Text {
                chart.text()
            } else {
                chart.svg()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDump {
    pub p: i64,
    pub q: i64,
    pub group: String,
    pub gens: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialDump {
    pub from: Spot,
    pub to: Spot,
    pub matrix: Vec<Vec<String>>,
}

/// JSON form of a page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDump {
    pub r: u32,
    pub cells: Vec<CellDump>,
    pub differentials: Vec<DifferentialDump>,
    pub indeterminate: Vec<Spot>,
}

impl PageDump {
    pub fn from_page(page: &Page) -> Self {
        PageDump {
            r: page.r(),
            cells: page
                .cells()
                .map(|(s, g)| CellDump {
                    p: s.p,
                    q: s.q,
                    group: g.to_string(),
                    gens: g.names().to_vec(),
                })
                .collect(),
            differentials: page
                .differentials()
                .map(|(s, d)| DifferentialDump {
                    from: *s,
                    to: s.d_target(page.r()),
                    matrix: d.matrix.to_dense().iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect(),
                })
                .collect(),
            indeterminate: page.indeterminate().iter().copied().collect(),
        }
    }

    pub fn parse(json: &str) -> Result<Self, RenderError> {
        serde_json::from_str(json).map_err(|e| RenderError::Parse(e.to_string()))
    }

    /// Cells as groups, for comparison with a page.
    pub fn groups(&self) -> Result<BTreeMap<Spot, FGAbelianGroup>, RenderError> {
        self.cells
            .iter()
            .map(|c| {
                let g: FGAbelianGroup = c.group.parse().map_err(|_| RenderError::Parse(c.group.clone()))?;
                Ok((Spot::new(c.p, c.q), g.with_names(c.gens.clone())))
            })
            .collect()
    }
}

pub fn render_page(title: &str, page: &Page, indexing: Indexing, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(&PageDump::from_page(page)).expect("serializable") + "\n";
    }
    let w = page.window();
    let corners = [Spot::new(w.pmin, w.qmin), Spot::new(w.pmin, w.qmax), Spot::new(w.pmax, w.qmin), Spot::new(w.pmax, w.qmax)];
    let bounds = (!w.is_empty()).then(|| match indexing {
        Indexing::Serre => (w.pmin, w.pmax, w.qmin, w.qmax),
        Indexing::Adams => {
            let placed: Vec<(i64, i64)> = corners.iter().map(|s| indexing.place(*s)).collect();
            let xs = placed.iter().map(|c| c.0);
            let ys = placed.iter().map(|c| c.1);
            (xs.clone().min().unwrap(), xs.max().unwrap(), ys.clone().min().unwrap(), ys.max().unwrap())
        }
    });
    let mut chart = Chart {
        title: format!("{title} (E_{})", page.r()),
        axes: indexing.axes(),
        bounds,
        ..Chart::default()
    };
    for (s, g) in page.cells() {
        chart.cells.insert(indexing.place(*s), (g.clone(), page.is_indeterminate(*s)));
    }
    for s in page.indeterminate() {
        chart.cells.entry(indexing.place(*s)).or_insert((FGAbelianGroup::zero(), true));
    }
    for (s, d) in page.differentials() {
        let t = s.d_target(page.r());
        chart.arrows.push((indexing.place(*s), indexing.place(t)));
        let entries: Vec<String> = d.matrix.to_dense().iter().flatten().map(|v| v.to_string()).collect();
        chart.notes.push(format!("d{}: {} -> {} [{}]", page.r(), s, t, entries.join(" ")));
    }
    let used = chart.cells.keys().copied().chain(chart.arrows.iter().flat_map(|(a, b)| [*a, *b]));
    if let Some(b) = used.fold(None, |b: Option<(i64, i64, i64, i64)>, (x, y)| {
        Some(b.map_or((x, x, y, y), |(a, c, d, e)| (a.min(x), c.max(x), d.min(y), e.max(y))))
    }) {
        chart.bounds = Some(b);
    }
    match format {
        Format::Text => chart.text(),
        _ => chart.svg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krtower::{build, default_window, Mode, Space, Variant};

    #[test]
    fn adams_d3_has_slope_minus_one_three() {
        let t = build(Space::Pt, Variant::Kr, Mode::Stable, default_window()).unwrap();
        assert!(t.e3.differentials().count() > 0);
        for (s, _) in t.e3.differentials() {
            let (a0, b0) = Indexing::Adams.place(*s);
            let (a1, b1) = Indexing::Adams.place(s.d_target(3));
            assert_eq!((a1 - a0, b1 - b0), (-1, 3));
        }
    }

    #[test]
    fn table_text_marks_z_and_torsion() {
        let w = Window::new(-1, 2, -3, 2);
        let t = render_table("H(pt)", w, &coefficient_table(Theory::Pt, w), Format::Text);
        let lines: Vec<&str> = t.lines().collect();
        // rows from q = 2 down to q = -3, columns p = -1..2
        assert_eq!(lines[1], " 2 | . O . *");
        assert_eq!(lines[6], "-3 | . * . .");
    }

    #[test]
    fn empty_window_document() {
        let t = render_table("empty", Window::empty(), &[], Format::Text);
        assert_eq!(t, "empty\n(empty)\n");
        assert_eq!(render_table("empty", Window::empty(), &[], Format::Json), "[]\n");
    }

    #[test]
    fn json_round_trip() {
        let t = build(Space::Pt, Variant::Kr, Mode::Stable, Window::new(-6, 6, -12, 12)).unwrap();
        let doc = render_page("pt", &t.e3, Indexing::Serre, Format::Json);
        let back = PageDump::parse(&doc).unwrap();
        assert_eq!(back, PageDump::from_page(&t.e3));
        let groups = back.groups().unwrap();
        let original: BTreeMap<Spot, FGAbelianGroup> = t.e3.cells().map(|(s, g)| (*s, g.clone())).collect();
        assert_eq!(groups, original);
        for (s, g) in &groups {
            assert_eq!(g.names(), original[s].names());
        }
    }

    #[test]
    fn adams_arrows_have_slope() {
        let t = build(Space::Pt, Variant::Kr, Mode::Stable, default_window()).unwrap();
        for (s, _) in t.e3.differentials() {
            let (a0, b0) = Indexing::Adams.place(*s);
            let (a1, b1) = Indexing::Adams.place(s.d_target(3));
            assert_eq!((a1 - a0, b1 - b0), (-1, 3));
        }
        let svg = render_page("pt", &t.e3, Indexing::Adams, Format::Svg);
        assert!(svg.contains("marker-end"));
        assert_eq!(svg, render_page("pt", &t.e3, Indexing::Adams, Format::Svg));
    }

    #[test]
    fn format_names() {
        assert!("pdf".parse::<Format>().is_err());
        assert_eq!("adams".parse::<Indexing>().unwrap(), Indexing::Adams);
    }
}
