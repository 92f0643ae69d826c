use super::{node_features, BBox, LayoutPage, Region};
use crate::error::Result;
use crate::graph::Graph;

/// How a visible pair of regions sees each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Stacked: x-intervals overlap, sight line runs vertically.
    Vertical,
    /// Side by side: y-intervals overlap, sight line runs horizontally.
    Horizontal,
    /// Boxes overlap with positive area.
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityConfig {
    /// Longest allowed vertical gap as a fraction of page height.
    pub max_vertical_gap: Option<f64>,
    /// Longest allowed horizontal gap as a fraction of page width.
    pub max_horizontal_gap: Option<f64>,
}

impl Default for VisibilityConfig {
    fn default() -> Self {
        VisibilityConfig {
            max_vertical_gap: Some(0.25),
            max_horizontal_gap: None,
        }
    }
}

fn interval_overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    a1.min(b1) - a0.max(b0)
}

/// Open rectangle `(x0, x1) × (y0, y1)` against a box's interior.
fn blocks_corridor(b: &BBox, cx0: f64, cx1: f64, cy0: f64, cy1: f64) -> bool {
    b.x0 < cx1 && b.x1 > cx0 && b.y0 < cy1 && b.y1 > cy0
}

/// Decides whether `a` and `b` see each other past `others`.
///
/// Vertical visibility needs x-intervals overlapping with positive length
/// and an open corridor (x-overlap × gap between facing edges) that no other
/// box intersects. Horizontal visibility is the transpose. Overlapping boxes
/// are always visible. Gap caps come from `cfg`.
pub fn is_visible(
    a: &BBox,
    b: &BBox,
    others: &[&BBox],
    page: &LayoutPage,
    cfg: &VisibilityConfig,
) -> Option<Axis> {
    let x_overlap = interval_overlap(a.x0, a.x1, b.x0, b.x1);
    let y_overlap = interval_overlap(a.y0, a.y1, b.y0, b.y1);
    if x_overlap > 0.0 && y_overlap > 0.0 {
        return Some(Axis::Overlap);
    }
    if x_overlap > 0.0 {
        let (upper, lower) = if a.y0 <= b.y0 { (a, b) } else { (b, a) };
        let (cy0, cy1) = (upper.y1, lower.y0);
        if let Some(cap) = cfg.max_vertical_gap {
            if cy1 - cy0 > cap * page.height {
                return None;
            }
        }
        let (cx0, cx1) = (a.x0.max(b.x0), a.x1.min(b.x1));
        if others.iter().all(|o| !blocks_corridor(o, cx0, cx1, cy0, cy1)) {
            return Some(Axis::Vertical);
        }
        return None;
    }
    if y_overlap > 0.0 {
        let (left, right) = if a.x0 <= b.x0 { (a, b) } else { (b, a) };
        let (cx0, cx1) = (left.x1, right.x0);
        if let Some(cap) = cfg.max_horizontal_gap {
            if cx1 - cx0 > cap * page.width {
                return None;
            }
        }
        let (cy0, cy1) = (a.y0.max(b.y0), a.y1.min(b.y1));
        if others.iter().all(|o| !blocks_corridor(o, cx0, cx1, cy0, cy1)) {
            return Some(Axis::Horizontal);
        }
    }
    None
}

/// One node per region in input order, with 7-dim features and class labels.
pub fn build_visibility_graph(page: &LayoutPage, cfg: &VisibilityConfig) -> Result<Graph> {
    page.validate()?;
    let regions: &[Region] = &page.regions;
    let n = regions.len();
    let features = regions
        .iter()
        .map(|r| node_features(r, page).map(|f| f.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let labels = regions.iter().map(|r| r.class_id).collect();

    let mut edges = Vec::new();
    let mut others: Vec<&BBox> = Vec::with_capacity(n);
    for i in 0..n {
        for j in i + 1..n {
            others.clear();
            others.extend(
                regions
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, r)| &r.bbox),
            );
            if is_visible(&regions[i].bbox, &regions[j].bbox, &others, page, cfg).is_some() {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)?.with_features(features)?.with_labels(labels)
}
