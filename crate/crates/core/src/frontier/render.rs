use image::{ImageEncoder, Rgb, RgbImage};

use super::annotate::{AnnotatedMap, MarkerKind};
use super::font::{pixel, GLYPH_H, GLYPH_W};
use crate::category::NUM_CATEGORIES;
use crate::geometry::{Cell, CellRect};
use crate::mapping::Layer;

/// Colors for map layers. Markers carry their own colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    pub unknown: [u8; 3],
    pub free: [u8; 3],
    pub wall: [u8; 3],
    pub past: [u8; 3],
    /// Indexed by category.
    pub categories: [[u8; 3]; NUM_CATEGORIES],
}

pub const PALETTE: Palette = Palette {
    unknown: [255, 255, 255],
    free: [228, 228, 228],
    wall: [96, 96, 96],
    past: [168, 200, 250],
    categories: [
        [31, 119, 180],  // chair
        [255, 127, 14],  // bed
        [44, 160, 44],   // plant
        [214, 39, 40],   // toilet
        [148, 103, 189], // tv
        [140, 86, 75],   // sofa
        [227, 119, 194], // sink
        [23, 190, 207],  // shower
        [188, 189, 34],  // table
        [127, 127, 127], // fridge
        [174, 199, 232], // counter
        [255, 187, 120], // wardrobe
    ],
};

const MARGIN: i32 = 8;
const GLYPH_SCALE: usize = 2;

// Map-to-pixel transform: the view rectangle is scaled uniformly and centered.
struct View {
    rect: CellRect,
    scale: f64,
    ox: f64,
    oy: f64,
}

impl View {
    fn new(rect: CellRect, width: u32, height: u32) -> Self {
        let (cw, ch) = (rect.width() as f64, rect.height() as f64);
        let scale = (width as f64 / cw).min(height as f64 / ch);
        Self {
            rect,
            scale,
            ox: (width as f64 - cw * scale) / 2.0,
            oy: (height as f64 - ch * scale) / 2.0,
        }
    }

    fn cell_at(&self, px: u32, py: u32) -> Option<Cell> {
        let fx = (px as f64 + 0.5 - self.ox) / self.scale;
        let fy = (py as f64 + 0.5 - self.oy) / self.scale;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let c = Cell::new(self.rect.min.x + fx as i32, self.rect.min.y + fy as i32);
        self.rect.contains(c).then_some(c)
    }

    fn pixel_of(&self, c: Cell) -> (f64, f64) {
        (
            self.ox + (c.x - self.rect.min.x) as f64 * self.scale + self.scale / 2.0,
            self.oy + (c.y - self.rect.min.y) as f64 * self.scale + self.scale / 2.0,
        )
    }
}

fn view_rect(annotated: &AnnotatedMap<'_>) -> Option<CellRect> {
    let map = annotated.base;
    let mut rect: Option<CellRect> = None;
    let mut add = |c: Cell| match &mut rect {
        Some(r) => r.include(c),
        None => rect = Some(CellRect::point(c)),
    };
    let explored = map.channel(Layer::Explored.index());
    let n = map.size();
    for (i, v) in explored.iter().enumerate() {
        if *v > 0.0 {
            add(Cell::new((i % n) as i32, (i / n) as i32));
        }
    }
    for m in &annotated.markers {
        add(m.coord);
    }
    rect.map(|r| r.expanded(MARGIN))
}

fn cell_color(annotated: &AnnotatedMap<'_>, c: Cell, palette: &Palette) -> [u8; 3] {
    let map = annotated.base;
    let mut best: Option<(usize, f32)> = None;
    for k in 0..NUM_CATEGORIES {
        let v = map.get_channel(k, c);
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    if let Some((k, _)) = best {
        return palette.categories[k];
    }
    if map.is_obstacle(c) {
        palette.wall
    } else if map.get(Layer::Past, c) > 0.0 || map.get(Layer::Current, c) > 0.0 {
        palette.past
    } else if map.is_explored(c) {
        palette.free
    } else {
        palette.unknown
    }
}

fn put(img: &mut RgbImage, x: i64, y: i64, color: [u8; 3]) {
    if x >= 0 && y >= 0 && (x as u32) < img.width() && (y as u32) < img.height() {
        img.put_pixel(x as u32, y as u32, Rgb(color));
    }
}

fn draw_dot(img: &mut RgbImage, cx: f64, cy: f64, r: f64, color: [u8; 3]) {
    let ri = r.ceil() as i64;
    for dy in -ri..=ri {
        for dx in -ri..=ri {
            if ((dx * dx + dy * dy) as f64) <= r * r {
                put(img, cx as i64 + dx, cy as i64 + dy, color);
            }
        }
    }
}

fn draw_arrow(img: &mut RgbImage, cx: f64, cy: f64, heading: f64, size: f64, color: [u8; 3]) {
    let (s, c) = heading.to_radians().sin_cos();
    let tip = (cx + c * size, cy + s * size);
    let left = (
        cx - c * size * 0.6 + s * size * 0.6,
        cy - s * size * 0.6 - c * size * 0.6,
    );
    let right = (
        cx - c * size * 0.6 - s * size * 0.6,
        cy - s * size * 0.6 + c * size * 0.6,
    );
    let tri = [tip, left, right];
    let r = size.ceil() as i64;
    let edge = |a: (f64, f64), b: (f64, f64), p: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    for dy in -r..=r {
        for dx in -r..=r {
            let p = (cx.floor() + dx as f64 + 0.5, cy.floor() + dy as f64 + 0.5);
            let e: Vec<f64> = (0..3).map(|i| edge(tri[i], tri[(i + 1) % 3], p)).collect();
            if e.iter().all(|&v| v >= 0.0) || e.iter().all(|&v| v <= 0.0) {
                put(img, cx.floor() as i64 + dx, cy.floor() as i64 + dy, color);
            }
        }
    }
}

fn draw_label(img: &mut RgbImage, cx: f64, cy: f64, text: &str, color: [u8; 3]) {
    let gw = (GLYPH_W + 1) * GLYPH_SCALE;
    let w = text.chars().count() * gw + GLYPH_SCALE;
    let h = GLYPH_H * GLYPH_SCALE + 2 * GLYPH_SCALE;
    let x0 = cx as i64 - w as i64 / 2;
    let y0 = cy as i64 - h as i64 / 2;
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            put(img, x0 + x, y0 + y, color);
        }
    }
    for (i, ch) in text.chars().enumerate() {
        for row in 0..GLYPH_H {
            for col in 0..GLYPH_W {
                if pixel(ch, col, row) {
                    for sy in 0..GLYPH_SCALE {
                        for sx in 0..GLYPH_SCALE {
                            put(
                                img,
                                x0 + (GLYPH_SCALE + i * gw + col * GLYPH_SCALE + sx) as i64,
                                y0 + (GLYPH_SCALE + row * GLYPH_SCALE + sy) as i64,
                                [255, 255, 255],
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Rasterizes the explored part of the map, scaled to fit, with markers
/// drawn last in list order.
pub fn render(annotated: &AnnotatedMap<'_>, width: u32, height: u32) -> RgbImage {
    let palette = &PALETTE;
    let mut img = RgbImage::from_pixel(width.max(1), height.max(1), Rgb(palette.unknown));
    let Some(rect) = view_rect(annotated) else {
        return img;
    };
    let view = View::new(rect, img.width(), img.height());
    for py in 0..img.height() {
        for px in 0..img.width() {
            if let Some(c) = view.cell_at(px, py) {
                img.put_pixel(px, py, Rgb(cell_color(annotated, c, palette)));
            }
        }
    }
    let size = (view.scale * 4.0).max(8.0);
    for m in &annotated.markers {
        let (x, y) = view.pixel_of(m.coord);
        match m.kind {
            MarkerKind::RobotArrow => draw_arrow(&mut img, x, y, m.heading.unwrap_or(0.0), size, m.color),
            MarkerKind::LastGoalDot => draw_dot(&mut img, x, y, size * 0.4, m.color),
            MarkerKind::HistoryLetter | MarkerKind::FrontierLetter => draw_label(&mut img, x, y, &m.glyph, m.color),
        }
    }
    img
}

/// [`render`] encoded as PNG.
pub fn render_png(annotated: &AnnotatedMap<'_>, width: u32, height: u32) -> Vec<u8> {
    let img = render(annotated, width, height);
    let mut out = Vec::new();
    image::codecs::png::PngEncoder::new(&mut out)
        .write_image(img.as_raw(), img.width(), img.height(), image::ExtendedColorType::Rgb8)
        .expect("in-memory PNG encoding");
    out
}
