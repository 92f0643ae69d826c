//! Annotated document pages and their visibility graphs.
//!
//! A page is a set of labelled regions. Two regions are joined when an
//! axis-aligned corridor between their facing edges is free of other
//! regions; vertical links longer than a quarter of the page height are
//! dropped. Each node carries the normalized box plus the digit / letter /
//! symbol mix of its text.

mod annotation;
mod visibility;

pub use annotation::{class_id, class_name, load_page, parse_page, CLASS_NAMES};
pub use visibility::{build_visibility_graph, is_visible, Axis, VisibilityConfig};

use unicode_properties::{GeneralCategory, GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// Axis-aligned box `(x0, y0, x1, y1)` with `y` growing downward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl BBox {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        BBox { x0, y0, x1, y1 }
    }

    pub fn is_well_ordered(&self) -> bool {
        self.x0 < self.x1 && self.y0 < self.y1
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        BBox::new(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)
    }
}

/// Character counts by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Histogram {
    pub digits: u64,
    pub alphas: u64,
    pub symbols: u64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.digits + self.alphas + self.symbols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Content {
    Text(String),
    Histogram(Histogram),
}

impl Content {
    pub fn histogram(&self) -> Histogram {
        match self {
            Content::Text(t) => content_histogram(t),
            Content::Histogram(h) => *h,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub class_id: u32,
    pub bbox: BBox,
    pub content: Content,
}

impl Region {
    pub fn new(class_id: u32, bbox: BBox, content: Content) -> Self {
        Region {
            class_id,
            bbox,
            content,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutPage {
    pub width: f64,
    pub height: f64,
    pub regions: Vec<Region>,
}

impl LayoutPage {
    /// Checks page extents and that every box is well-ordered and on the page.
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err(Error::structural(format!(
                "page extents {}x{} must be positive",
                self.width, self.height
            )));
        }
        for (i, r) in self.regions.iter().enumerate() {
            let b = r.bbox;
            if !b.is_well_ordered() {
                return Err(Error::structural(format!("region {i} has a degenerate box")));
            }
            if b.x0 < 0.0 || b.y0 < 0.0 || b.x1 > self.width || b.y1 > self.height {
                return Err(Error::structural(format!("region {i} lies outside the page")));
            }
        }
        Ok(())
    }
}

/// Counts non-whitespace characters by Unicode general category: decimal
/// digits (Nd), letters (L*), and everything else.
pub fn content_histogram(text: &str) -> Histogram {
    let mut h = Histogram::default();
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        match ch.general_category() {
            GeneralCategory::DecimalNumber => h.digits += 1,
            _ if ch.general_category_group() == GeneralCategoryGroup::Letter => h.alphas += 1,
            _ => h.symbols += 1,
        }
    }
    h
}

/// Normalized box corners followed by digit, letter and symbol fractions.
pub fn node_features(r: &Region, page: &LayoutPage) -> Result<[f64; 7]> {
    if !r.bbox.is_well_ordered() {
        return Err(Error::structural("zero-area region box"));
    }
    if !(page.width > 0.0 && page.height > 0.0) {
        return Err(Error::structural("page extents must be positive"));
    }
    let b = r.bbox;
    let h = r.content.histogram();
    let total = h.total();
    let frac = |c: u64| if total == 0 { 0.0 } else { c as f64 / total as f64 };
    Ok([
        b.x0 / page.width,
        b.y0 / page.height,
        b.x1 / page.width,
        b.y1 / page.height,
        frac(h.digits),
        frac(h.alphas),
        frac(h.symbols),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(d: u64, a: u64, s: u64) -> Histogram {
        Histogram {
            digits: d,
            alphas: a,
            symbols: s,
        }
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(content_histogram(""), hist(0, 0, 0));
        assert_eq!(content_histogram("INV-2024"), hist(4, 3, 1));
        assert_eq!(content_histogram("a 1 ."), hist(1, 1, 1));
        assert_eq!(content_histogram("Nº ٣\t€"), hist(1, 2, 1));
    }

    fn page(w: f64, h: f64) -> LayoutPage {
        LayoutPage {
            width: w,
            height: h,
            regions: vec![],
        }
    }

    #[test]
    fn feature_examples() {
        let r = Region::new(0, BBox::new(100.0, 50.0, 300.0, 90.0), Content::Text("INV-2024".into()));
        let f = node_features(&r, &page(1000.0, 800.0)).unwrap();
        assert_eq!(f, [0.1, 0.0625, 0.3, 0.1125, 0.5, 0.375, 0.125]);

        let r = Region::new(0, BBox::new(0.0, 0.0, 1000.0, 800.0), Content::Text(String::new()));
        let f = node_features(&r, &page(1000.0, 800.0)).unwrap();
        assert_eq!(f, [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);

        let r = Region::new(0, BBox::new(0.0, 0.0, 500.0, 400.0), Content::Text("12".into()));
        let f = node_features(&r, &page(1000.0, 800.0)).unwrap();
        assert_eq!(f, [0.0, 0.0, 0.5, 0.5, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_area_box_rejected() {
        let r = Region::new(0, BBox::new(1.0, 1.0, 1.0, 5.0), Content::Histogram(hist(1, 0, 0)));
        assert!(node_features(&r, &page(10.0, 10.0)).is_err());
    }

    #[test]
    fn validate_catches_offpage_regions() {
        let mut p = page(10.0, 10.0);
        p.regions.push(Region::new(0, BBox::new(5.0, 5.0, 11.0, 6.0), Content::Text("x".into())));
        assert!(p.validate().is_err());
        p.regions[0].bbox.x1 = 10.0;
        assert!(p.validate().is_ok());
    }
}
