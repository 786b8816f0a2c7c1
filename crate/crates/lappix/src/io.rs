//! PGM (P5), PPM (P6) and single-frame Y4M readers and writers.
//!
//! PPM content is converted to full-range BT.601 YCbCr 4:4:4 with 16-bit
//! fixed-point integer arithmetic, so the conversion is identical on every
//! platform.

use std::fs;
use std::path::Path;

use lappix_core::{ChromaFormat, Image, Plane, PlaneError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed header: {0}")]
    Malformed(&'static str),
    #[error("truncated data")]
    Truncated,
    #[error("unsupported bit depth")]
    UnsupportedBitDepth,
    #[error("unsupported chroma format {0}")]
    UnsupportedChroma(String),
    #[error("PGM is single-plane")]
    NotSinglePlane,
    #[error("PPM needs 4:4:4 or monochrome content")]
    NotFullChroma,
    #[error("empty image")]
    Empty,
    #[error("unknown image format for {0}")]
    UnknownFormat(String),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageFormat {
    Y4m,
    Pgm,
    Ppm,
}

impl ImageFormat {
    /// Format implied by a file extension.
    pub fn from_path(path: &Path) -> Result<Self, IoError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("y4m") => Ok(ImageFormat::Y4m),
            Some("pgm") => Ok(ImageFormat::Pgm),
            Some("ppm") => Ok(ImageFormat::Ppm),
            _ => Err(IoError::UnknownFormat(path.display().to_string())),
        }
    }
}

pub fn read_image(path: &Path, format: ImageFormat) -> Result<Image, IoError> {
    parse_image(&fs::read(path)?, format)
}

pub fn write_image(img: &Image, path: &Path, format: ImageFormat) -> Result<(), IoError> {
    let bytes = serialize_image(img, format)?;
    fs::write(path, bytes)?;
    Ok(())
}

/// Read an image whose format follows from the file extension.
pub fn read_auto(path: &Path) -> Result<Image, IoError> {
    read_image(path, ImageFormat::from_path(path)?)
}

/// Write an image whose format follows from the file extension.
pub fn write_auto(img: &Image, path: &Path) -> Result<(), IoError> {
    write_image(img, path, ImageFormat::from_path(path)?)
}

pub fn parse_image(bytes: &[u8], format: ImageFormat) -> Result<Image, IoError> {
    match format {
        ImageFormat::Pgm => {
            let (w, h, data) = parse_pnm(bytes, b"P5", 1)?;
            Ok(Image::mono(Plane::new(w, h, 0, 0, data.to_vec())?)?)
        }
        ImageFormat::Ppm => {
            let (w, h, data) = parse_pnm(bytes, b"P6", 3)?;
            rgb_to_image(w, h, data)
        }
        ImageFormat::Y4m => parse_y4m(bytes),
    }
}

pub fn serialize_image(img: &Image, format: ImageFormat) -> Result<Vec<u8>, IoError> {
    if img.width() == 0 || img.height() == 0 {
        return Err(IoError::Empty);
    }
    match format {
        ImageFormat::Pgm => {
            if img.format != ChromaFormat::Mono {
                return Err(IoError::NotSinglePlane);
            }
            let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
            out.extend_from_slice(img.y.samples());
            Ok(out)
        }
        ImageFormat::Ppm => {
            let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
            out.extend(image_to_rgb(img)?);
            Ok(out)
        }
        ImageFormat::Y4m => {
            let tag = match img.format {
                ChromaFormat::Yuv420 => "420jpeg",
                ChromaFormat::Yuv444 => "444",
                ChromaFormat::Mono => "mono",
            };
            let mut out = format!(
                "YUV4MPEG2 W{} H{} F25:1 Ip A1:1 C{tag}\nFRAME\n",
                img.width(),
                img.height()
            )
            .into_bytes();
            for p in img.planes() {
                out.extend_from_slice(p.samples());
            }
            Ok(out)
        }
    }
}

/// Header tokens of a binary PNM file; returns dimensions and sample data.
fn parse_pnm<'a>(bytes: &'a [u8], magic: &[u8; 2], channels: usize) -> Result<(usize, usize, &'a [u8]), IoError> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(IoError::Malformed("magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for f in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(IoError::Truncated),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(IoError::Malformed("expected a number"));
        }
        *f = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(IoError::Malformed("number out of range"))?;
    }
    // Exactly one whitespace byte separates the header from the samples.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(IoError::Malformed("missing separator"));
    }
    pos += 1;
    let [w, h, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(IoError::Malformed("maxval"));
    }
    if maxval > 255 {
        return Err(IoError::UnsupportedBitDepth);
    }
    if w == 0 || h == 0 {
        return Err(IoError::Empty);
    }
    let len = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(IoError::Malformed("dimensions"))?;
    let data = bytes.get(pos..pos + len).ok_or(IoError::Truncated)?;
    Ok((w, h, data))
}

fn parse_y4m(bytes: &[u8]) -> Result<Image, IoError> {
    let header_end = bytes
        .iter()
        .position(|&c| c == b'\n')
        .ok_or(IoError::Truncated)?;
    let header = std::str::from_utf8(&bytes[..header_end]).map_err(|_| IoError::Malformed("header"))?;
    let mut tokens = header.split(' ');
    if tokens.next() != Some("YUV4MPEG2") {
        return Err(IoError::Malformed("magic"));
    }
    let (mut w, mut h) = (None, None);
    let mut format = ChromaFormat::Yuv420;
    for t in tokens.filter(|t| !t.is_empty()) {
        let (tag, val) = t.split_at(1);
        match tag {
            "W" => w = Some(val.parse::<usize>().map_err(|_| IoError::Malformed("width"))?),
            "H" => h = Some(val.parse::<usize>().map_err(|_| IoError::Malformed("height"))?),
            "C" => {
                format = match val {
                    "420" | "420jpeg" | "420paldv" | "420mpeg2" => ChromaFormat::Yuv420,
                    "444" => ChromaFormat::Yuv444,
                    "mono" => ChromaFormat::Mono,
                    v if v.contains('p') => return Err(IoError::UnsupportedBitDepth),
                    v => return Err(IoError::UnsupportedChroma(v.to_string())),
                }
            }
            _ => {}
        }
    }
    let (w, h) = (w.ok_or(IoError::Malformed("width"))?, h.ok_or(IoError::Malformed("height"))?);
    if w == 0 || h == 0 {
        return Err(IoError::Empty);
    }
    let rest = &bytes[header_end + 1..];
    if !rest.starts_with(b"FRAME") {
        return Err(if rest.len() < 5 { IoError::Truncated } else { IoError::Malformed("frame marker") });
    }
    let frame_end = rest.iter().position(|&c| c == b'\n').ok_or(IoError::Truncated)?;
    let mut data = &rest[frame_end + 1..];
    let (xd, yd) = format.decimation();
    let (cw, ch) = if format.has_chroma() {
        ((w + (1 << xd) - 1) >> xd, (h + (1 << yd) - 1) >> yd)
    } else {
        (0, 0)
    };
    let mut take = |pw: usize, ph: usize| -> Result<Plane, IoError> {
        let n = pw.checked_mul(ph).ok_or(IoError::Malformed("dimensions"))?;
        if data.len() < n {
            return Err(IoError::Truncated);
        }
        let (head, tail) = data.split_at(n);
        data = tail;
        Ok(Plane::new(pw, ph, 0, 0, head.to_vec())?)
    };
    let y = take(w, h)?;
    if format == ChromaFormat::Mono {
        return Ok(Image::mono(y)?);
    }
    let cb = take(cw, ch)?;
    let cr = take(cw, ch)?;
    Ok(Image::new(y, cb, cr, format)?)
}

fn clamp_u8(v: i32) -> u8 {
    v.clamp(0, 255) as u8
}

/// Full-range BT.601 RGB to YCbCr, 16 fractional bits.
pub fn rgb_to_ycbcr(r: u8, g: u8, b: u8) -> [u8; 3] {
    let (r, g, b) = (r as i32, g as i32, b as i32);
    let y = (19595 * r + 38470 * g + 7471 * b + 32768) >> 16;
    let cb = ((-11059 * r - 21709 * g + 32768 * b + 32768) >> 16) + 128;
    let cr = ((32768 * r - 27439 * g - 5329 * b + 32768) >> 16) + 128;
    [clamp_u8(y), clamp_u8(cb), clamp_u8(cr)]
}

/// Full-range BT.601 YCbCr to RGB, 16 fractional bits.
pub fn ycbcr_to_rgb(y: u8, cb: u8, cr: u8) -> [u8; 3] {
    let y = (y as i32) << 16;
    let (cb, cr) = (cb as i32 - 128, cr as i32 - 128);
    let r = (y + 91881 * cr + 32768) >> 16;
    let g = (y - 22554 * cb - 46802 * cr + 32768) >> 16;
    let b = (y + 116130 * cb + 32768) >> 16;
    [clamp_u8(r), clamp_u8(g), clamp_u8(b)]
}

fn rgb_to_image(w: usize, h: usize, rgb: &[u8]) -> Result<Image, IoError> {
    let mut planes = [Vec::with_capacity(w * h), Vec::with_capacity(w * h), Vec::with_capacity(w * h)];
    for px in rgb.chunks_exact(3) {
        let ycc = rgb_to_ycbcr(px[0], px[1], px[2]);
        for (p, v) in planes.iter_mut().zip(ycc) {
            p.push(v);
        }
    }
    let [y, cb, cr] = planes;
    Ok(Image::new(
        Plane::new(w, h, 0, 0, y)?,
        Plane::new(w, h, 0, 0, cb)?,
        Plane::new(w, h, 0, 0, cr)?,
        ChromaFormat::Yuv444,
    )?)
}

fn image_to_rgb(img: &Image) -> Result<Vec<u8>, IoError> {
    let mut out = Vec::with_capacity(img.width() * img.height() * 3);
    match img.format {
        ChromaFormat::Mono => {
            for &v in img.y.samples() {
                out.extend([v, v, v]);
            }
        }
        ChromaFormat::Yuv444 => {
            let (y, cb, cr) = (img.y.samples(), img.cb.samples(), img.cr.samples());
            for i in 0..y.len() {
                out.extend(ycbcr_to_rgb(y[i], cb[i], cr[i]));
            }
        }
        ChromaFormat::Yuv420 => return Err(IoError::NotFullChroma),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_pgm() {
        let img = parse_image(b"P5\n2 2\n255\n\x80\x80\x80\x80", ImageFormat::Pgm).unwrap();
        assert_eq!(img.y.samples(), &[128; 4]);
        assert_eq!((img.width(), img.height()), (2, 2));
    }

    #[test]
    fn pgm_with_comments() {
        let img = parse_image(b"P5 # c\n# more\n3\t1 255 abc", ImageFormat::Pgm).unwrap();
        assert_eq!(img.y.samples(), b"abc");
    }

    #[test]
    fn sixteen_bit_pgm_is_rejected() {
        let err = parse_image(b"P5\n1 1\n65535\n\0\0", ImageFormat::Pgm).unwrap_err();
        assert_eq!(err.to_string(), "unsupported bit depth");
    }

    #[test]
    fn truncated_inputs() {
        assert!(matches!(parse_image(b"P5\n2 2\n255\n\0", ImageFormat::Pgm), Err(IoError::Truncated)));
        assert!(matches!(parse_image(b"P5\n2", ImageFormat::Pgm), Err(IoError::Truncated)));
        assert!(matches!(parse_image(b"P6\n1 1\n255\n\0\0", ImageFormat::Ppm), Err(IoError::Truncated)));
        let y4m = b"YUV4MPEG2 W2 H2 C420jpeg\nFRAME\n\0\0\0\0\0";
        assert!(matches!(parse_image(y4m, ImageFormat::Y4m), Err(IoError::Truncated)));
        assert!(matches!(parse_image(b"YUV4MPEG2 W2", ImageFormat::Y4m), Err(IoError::Truncated)));
    }

    #[test]
    fn gray_ppm_has_neutral_chroma() {
        let mut bytes = b"P6\n4 4\n255\n".to_vec();
        bytes.extend([128u8; 48]);
        let img = parse_image(&bytes, ImageFormat::Ppm).unwrap();
        assert!(img.y.samples().iter().all(|&v| v == 128));
        assert!(img.cb.samples().iter().all(|&v| v == 128));
        assert!(img.cr.samples().iter().all(|&v| v == 128));
    }

    #[test]
    fn color_matrix_matches_floating_point() {
        for (r, g, b) in [(255u8, 0u8, 0u8), (0, 255, 0), (0, 0, 255), (10, 200, 90), (255, 255, 255)] {
            let (rf, gf, bf) = (r as f64, g as f64, b as f64);
            let y = 0.299 * rf + 0.587 * gf + 0.114 * bf;
            let cb = 128.0 - 0.168736 * rf - 0.331264 * gf + 0.5 * bf;
            let cr = 128.0 + 0.5 * rf - 0.418688 * gf - 0.081312 * bf;
            let got = rgb_to_ycbcr(r, g, b);
            for (g, want) in got.iter().zip([y, cb, cr]) {
                assert!((*g as f64 - want.clamp(0.0, 255.0)).abs() <= 0.5 + 1e-3, "{r} {g} {b}");
            }
        }
    }

    #[test]
    fn gray_rgb_round_trips() {
        for v in 0..=255u8 {
            let [y, cb, cr] = rgb_to_ycbcr(v, v, v);
            assert_eq!((y, cb, cr), (v, 128, 128));
            assert_eq!(ycbcr_to_rgb(y, cb, cr), [v, v, v]);
        }
    }

    #[test]
    fn y4m_round_trip_every_format() {
        for format in [ChromaFormat::Yuv420, ChromaFormat::Yuv444, ChromaFormat::Mono] {
            let mut img = Image::constant(5, 3, format, [1, 2, 3]).unwrap();
            img.y.set(4, 2, 250);
            let bytes = serialize_image(&img, ImageFormat::Y4m).unwrap();
            assert_eq!(parse_image(&bytes, ImageFormat::Y4m).unwrap(), img);
        }
    }

    #[test]
    fn y4m_defaults_to_420_and_rejects_high_depth() {
        let mut bytes = b"YUV4MPEG2 W2 H2 F30:1\nFRAME Ixyz\n".to_vec();
        bytes.extend([7u8; 6]);
        assert_eq!(parse_image(&bytes, ImageFormat::Y4m).unwrap().format, ChromaFormat::Yuv420);
        let err = parse_image(b"YUV4MPEG2 W2 H2 C420p10\nFRAME\n", ImageFormat::Y4m).unwrap_err();
        assert_eq!(err.to_string(), "unsupported bit depth");
    }

    #[test]
    fn write_errors() {
        let img = Image::constant(4, 4, ChromaFormat::Yuv420, [1, 2, 3]).unwrap();
        assert_eq!(serialize_image(&img, ImageFormat::Pgm).unwrap_err().to_string(), "PGM is single-plane");
        assert!(matches!(serialize_image(&img, ImageFormat::Ppm), Err(IoError::NotFullChroma)));
        let empty = Image {
            y: Plane::filled(0, 0, 0),
            cb: Plane::filled(0, 0, 0),
            cr: Plane::filled(0, 0, 0),
            format: ChromaFormat::Mono,
        };
        assert_eq!(serialize_image(&empty, ImageFormat::Pgm).unwrap_err().to_string(), "empty image");
        assert!(matches!(parse_image(b"P5 0 4 255 ", ImageFormat::Pgm), Err(IoError::Empty)));
    }

    #[test]
    fn extension_lookup() {
        assert_eq!(ImageFormat::from_path(Path::new("a/b.Y4M")).unwrap(), ImageFormat::Y4m);
        assert!(ImageFormat::from_path(Path::new("x.png")).is_err());
    }
}
