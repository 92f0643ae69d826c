use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{BBox, Content, Histogram, LayoutPage, Region};
use crate::error::{Error, Result};

/// Entity classes, indexed by class id.
pub const CLASS_NAMES: &[&str] = &["header", "address", "date", "table", "total", "other"];

/// Case-insensitive lookup in [`CLASS_NAMES`].
pub fn class_id(name: &str) -> Option<u32> {
    CLASS_NAMES
        .iter()
        .position(|c| c.eq_ignore_ascii_case(name.trim()))
        .map(|i| i as u32)
}

pub fn class_name(id: u32) -> Option<&'static str> {
    CLASS_NAMES.get(id as usize).copied()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PageFile {
    page_width: f64,
    page_height: f64,
    regions: Vec<RegionFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    class: String,
    #[serde(rename = "box")]
    bbox: [f64; 4],
    text: Option<String>,
    histogram: Option<[u64; 3]>,
}

/// Parses a page annotation document:
///
/// ```json
/// {"page_width": 1000, "page_height": 800,
///  "regions": [{"class": "header", "box": [100, 50, 300, 90], "text": "INV-2024"},
///              {"class": "table", "box": [50, 200, 950, 600], "histogram": [120, 40, 12]}]}
/// ```
pub fn parse_page(src: &str) -> Result<LayoutPage> {
    let file: PageFile = serde_json::from_str(src)?;
    let mut regions = Vec::with_capacity(file.regions.len());
    for (i, r) in file.regions.into_iter().enumerate() {
        let class_id = class_id(&r.class)
            .ok_or_else(|| Error::structural(format!("region {i}: unknown class {:?}", r.class)))?;
        let content = match (r.text, r.histogram) {
            (Some(t), None) => Content::Text(t),
            (None, Some([digits, alphas, symbols])) => Content::Histogram(Histogram {
                digits,
                alphas,
                symbols,
            }),
            (None, None) => Content::Text(String::new()),
            (Some(_), Some(_)) => {
                return Err(Error::structural(format!(
                    "region {i}: give either text or histogram, not both"
                )))
            }
        };
        let [x0, y0, x1, y1] = r.bbox;
        regions.push(Region::new(class_id, BBox::new(x0, y0, x1, y1), content));
    }
    let page = LayoutPage {
        width: file.page_width,
        height: file.page_height,
        regions,
    };
    page.validate()?;
    Ok(page)
}

pub fn load_page(path: &Path) -> Result<LayoutPage> {
    parse_page(&fs::read_to_string(path)?)
}
