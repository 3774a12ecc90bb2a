//! Dendrogram serialization: merge table, Newick, JSON and SVG.
//!
//! Merge tables print heights with 7 significant digits; JSON carries full
//! precision and round-trips exactly. Newick branch lengths are parent height
//! minus child height with leaves at height 0, so a leaf-to-leaf path through
//! a node is twice that node's height.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dendrogram::{Dendrogram, HeightScale};
use crate::engine::Algorithm;
use crate::error::Result;
use crate::matrix::Scale;
use crate::method::LinkageMethod;

pub const NODE_ID_CONVENTION: &str = "leaves are 0..n-1; the cluster created at step t is node n+t";

/// Significant digits used when heights are printed.
pub const PRINTED_DIGITS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    MergeTable,
    Newick,
    Json,
    Svg,
}

impl Format {
    pub const ALL: [Format; 4] = [Format::MergeTable, Format::Newick, Format::Json, Format::Svg];

    pub fn name(self) -> &'static str {
        match self {
            Format::MergeTable => "merge-table",
            Format::Newick => "newick",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::MergeTable => "csv",
            Format::Newick => "nwk",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Format::MergeTable => "n-1 rows of left,right,height,size (7 significant digits)",
            Format::Newick => "nested parentheses; branch length = parent height - child height",
            Format::Json => "full-precision steps plus run metadata; re-importable",
            Format::Svg => "static dendrogram drawing, heights on the vertical axis",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Format::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown format {s:?}"))
    }
}

/// A step applied between reading the input and writing the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    EuclideanDistance,
    SquareInput,
    ForcedScale,
    SqrtHeights,
}

/// Whether a run realizes Ward's minimum-variance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Ward,
    NonWard,
    NotWardMethod,
}

impl Classification {
    /// `ward.D` needs squared input and `ward.D2` plain input; any other
    /// pairing is a well-defined hierarchy that is not Ward's.
    pub fn of(method: LinkageMethod, agglomeration_scale: Scale) -> Self {
        match (method, agglomeration_scale) {
            (LinkageMethod::WardD, Scale::Squared) | (LinkageMethod::WardD2, Scale::Plain) => Classification::Ward,
            (LinkageMethod::WardD, _) | (LinkageMethod::WardD2, _) => Classification::NonWard,
            _ => Classification::NotWardMethod,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub method: LinkageMethod,
    pub algorithm: Algorithm,
    pub input_kind: String,
    pub agglomeration_scale: Scale,
    pub height_scale: HeightScale,
    pub transforms: Vec<Transform>,
    pub classification: Classification,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunMetadata {
    /// Metadata for a dendrogram produced without any recorded pipeline.
    pub fn describe(dend: &Dendrogram, algorithm: Algorithm) -> Self {
        let mut transforms = Vec::new();
        if dend.method().required_scale().is_some_and(|s| s != dend.input_scale()) {
            transforms.push(Transform::ForcedScale);
        }
        if dend.height_scale() == HeightScale::SqrtTransformed {
            transforms.push(Transform::SqrtHeights);
        }
        let classification = Classification::of(dend.method(), dend.input_scale());
        RunMetadata {
            method: dend.method(),
            algorithm,
            input_kind: "dissimilarity".into(),
            agglomeration_scale: dend.input_scale(),
            height_scale: dend.height_scale(),
            transforms,
            classification,
            warnings: non_ward_warning(dend.method(), dend.input_scale()).into_iter().collect(),
            seed: None,
        }
    }
}

pub fn non_ward_warning(method: LinkageMethod, scale: Scale) -> Option<String> {
    (Classification::of(method, scale) == Classification::NonWard).then(|| {
        let wanted = method.required_scale().unwrap_or(scale);
        format!(
            "NON-WARD: {method} was run on {scale} dissimilarities; it realizes the Ward criterion only on {wanted} input"
        )
    })
}

/// Formats `x` with `digits` significant digits, dropping trailing zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn merge_table(dend: &Dendrogram) -> String {
    let mut out = format!("# {NODE_ID_CONVENTION}\nleft,right,height,size\n");
    for s in dend.steps() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.left,
            s.right,
            format_significant(s.height, PRINTED_DIGITS),
            format_significant(s.size, PRINTED_DIGITS)
        );
    }
    out
}

fn newick_label(name: &str) -> String {
    if name.chars().any(|c| "()[]':;, \t".contains(c)) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

pub fn newick(dend: &Dendrogram, labels: Option<&[String]>) -> String {
    fn write_node(dend: &Dendrogram, labels: Option<&[String]>, node: usize, out: &mut String) {
        let n = dend.n();
        if node < n {
            match labels {
                Some(l) => out.push_str(&newick_label(&l[node])),
                None => out.push_str(&node.to_string()),
            }
            return;
        }
        let s = dend.steps()[node - n];
        out.push('(');
        for (i, child) in [s.left, s.right].into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_node(dend, labels, child, out);
            let _ = write!(out, ":{}", s.height - dend.height_of(child));
        }
        out.push(')');
    }
    let mut out = String::new();
    let root = if dend.steps().is_empty() { 0 } else { 2 * dend.n() - 2 };
    write_node(dend, labels, root, &mut out);
    out.push(';');
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DendrogramDocument {
    pub node_ids: String,
    pub metadata: RunMetadata,
    pub dendrogram: Dendrogram,
}

pub fn to_json(dend: &Dendrogram, metadata: &RunMetadata) -> String {
    let doc = DendrogramDocument {
        node_ids: NODE_ID_CONVENTION.into(),
        metadata: metadata.clone(),
        dendrogram: dend.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("dendrogram serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<DendrogramDocument> {
    Ok(serde_json::from_str(text)?)
}

/// Static drawing with leaves in [`Dendrogram::order`] along the bottom.
pub fn svg(dend: &Dendrogram, labels: Option<&[String]>, title: &str) -> String {
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const PLOT_H: f64 = 320.0;
    let n = dend.n();
    let show_labels = n <= 80;
    let bottom = if show_labels { 60.0 } else { 20.0 };
    let plot_w = (n as f64 * 14.0).max(360.0);
    let width = LEFT + plot_w + RIGHT;
    let height = TOP + PLOT_H + bottom;

    let heights = dend.heights();
    let lo = heights.iter().copied().fold(0.0, f64::min);
    let mut hi = heights.iter().copied().fold(0.0, f64::max);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let y_of = |h: f64| TOP + PLOT_H * (1.0 - (h - lo) / (hi - lo));

    let mut x_of = vec![0.0; 2 * n - 1];
    for (pos, &leaf) in dend.order().iter().enumerate() {
        x_of[leaf] = LEFT + (pos as f64 + 0.5) * plot_w / n as f64;
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        xml_escape(title)
    );

    // vertical axis
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + PLOT_H
    );
    for i in 0..=4 {
        let h = lo + (hi - lo) * i as f64 / 4.0;
        let y = y_of(h);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            format_significant(h, 4)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">height ({})</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0,
        dend.height_scale().name()
    );

    let _ = writeln!(out, r#"<g stroke="steelblue" stroke-width="1.5" fill="none">"#);
    for (t, s) in dend.steps().iter().enumerate() {
        let (xl, xr) = (x_of[s.left], x_of[s.right]);
        let (yl, yr) = (y_of(dend.height_of(s.left)), y_of(dend.height_of(s.right)));
        let y = y_of(s.height);
        let _ = writeln!(
            out,
            r#"<path d="M{xl:.2},{yl:.2}V{y:.2}H{xr:.2}V{yr:.2}"/>"#
        );
        x_of[n + t] = (xl + xr) / 2.0;
    }
    let _ = writeln!(out, "</g>");

    if show_labels {
        for &leaf in dend.order() {
            let name = labels.map_or_else(|| leaf.to_string(), |l| l[leaf].clone());
            let (x, y) = (x_of[leaf], TOP + PLOT_H + 12.0);
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{y:.2}" text-anchor="end" transform="rotate(-60 {x:.2} {y:.2})">{}</text>"#,
                xml_escape(&name)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
