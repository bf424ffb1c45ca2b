//! PNG rendering of transmission maps.
//!
//! Flux runs left to right and frequency bottom to top. Amplitudes are
//! already normalized to the bare resonator, so the color scale is linear
//! on [0, 1] and clipped above. Failed cells are drawn grey.

use fluxsim::dissipation::TransmissionMap;
use std::io::Write;

const STOPS: [[f64; 3]; 5] = [
    [13.0, 8.0, 135.0],
    [126.0, 3.0, 168.0],
    [204.0, 71.0, 120.0],
    [248.0, 149.0, 64.0],
    [240.0, 249.0, 33.0],
];
const HOLE: [u8; 3] = [128, 128, 128];

/// Color for a normalized amplitude.
pub fn color(v: f64) -> [u8; 3] {
    if !v.is_finite() {
        return HOLE;
    }
    let x = v.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let t = x - i as f64;
    let mut out = [0u8; 3];
    for c in 0..3 {
        out[c] = (STOPS[i][c] + t * (STOPS[i + 1][c] - STOPS[i][c])).round() as u8;
    }
    out
}

/// RGB pixels, `scale` pixels per cell.
pub fn render(map: &TransmissionMap, scale: usize) -> (u32, u32, Vec<u8>) {
    let (nx, ny) = (map.flux.len(), map.freq.len());
    let (w, h) = (nx * scale, ny * scale);
    let mut pixels = vec![0u8; w * h * 3];
    for py in 0..h {
        let j = ny - 1 - py / scale;
        for px in 0..w {
            let rgb = color(map.get(px / scale, j));
            let k = 3 * (py * w + px);
            pixels[k..k + 3].copy_from_slice(&rgb);
        }
    }
    (w as u32, h as u32, pixels)
}

pub fn write_png(map: &TransmissionMap, scale: usize, out: impl Write) -> std::io::Result<()> {
    let (w, h, pixels) = render(map, scale);
    let mut enc = png::Encoder::new(out, w, h);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header().map_err(std::io::Error::other)?;
    writer.write_image_data(&pixels).map_err(std::io::Error::other)?;
    writer.finish().map_err(std::io::Error::other)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_scale_endpoints() {
        assert_eq!(color(0.0), [13, 8, 135]);
        assert_eq!(color(1.0), [240, 249, 33]);
        assert_eq!(color(7.0), color(1.0));
        assert_eq!(color(f64::NAN), HOLE);
    }

    #[test]
    fn renders_with_frequency_upwards() {
        let map = TransmissionMap {
            flux: vec![0.0, 0.5],
            freq: vec![4.9, 5.0],
            amplitude: vec![0.0, 1.0, 0.0, f64::NAN],
            failures: vec![],
        };
        let (w, h, px) = render(&map, 2);
        assert_eq!((w, h), (4, 4));
        // top-left pixel is flux 0 at the highest frequency
        assert_eq!(&px[0..3], &color(1.0));
        assert_eq!(&px[3 * (3 * 4 + 3)..3 * (3 * 4 + 3) + 3], &color(0.0));
        assert_eq!(&px[3 * 3..3 * 3 + 3], &HOLE);
        let mut buf = Vec::new();
        write_png(&map, 2, &mut buf).unwrap();
        assert_eq!(&buf[1..4], b"PNG");
    }
}
