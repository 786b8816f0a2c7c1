//! Planar sample buffers.

use alloc::vec;
use alloc::vec::Vec;

/// Only 8-bit content is supported.
pub const BIT_DEPTH: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneError {
    #[error("empty image")]
    Empty,
    #[error("unsupported bit depth {0}")]
    UnsupportedBitDepth(u32),
    #[error("sample buffer holds {got} samples, expected {expected}")]
    SampleCount { expected: usize, got: usize },
    #[error("chroma plane is {got_w}x{got_h}, expected {want_w}x{want_h}")]
    ChromaSize {
        want_w: usize,
        want_h: usize,
        got_w: usize,
        got_h: usize,
    },
}

/// Chroma layout of an [`Image`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChromaFormat {
    /// Luma only; the chroma planes are empty.
    Mono,
    Yuv420,
    Yuv444,
}

impl ChromaFormat {
    /// Horizontal and vertical chroma decimation shifts.
    pub fn decimation(self) -> (u8, u8) {
        match self {
            ChromaFormat::Yuv420 => (1, 1),
            ChromaFormat::Yuv444 | ChromaFormat::Mono => (0, 0),
        }
    }

    pub fn has_chroma(self) -> bool {
        self != ChromaFormat::Mono
    }
}

/// One 8-bit plane stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plane {
    width: usize,
    height: usize,
    xdec: u8,
    ydec: u8,
    samples: Vec<u8>,
}

impl Plane {
    pub fn new(
        width: usize,
        height: usize,
        xdec: u8,
        ydec: u8,
        samples: Vec<u8>,
    ) -> Result<Self, PlaneError> {
        if samples.len() != width * height {
            return Err(PlaneError::SampleCount {
                expected: width * height,
                got: samples.len(),
            });
        }
        Ok(Plane {
            width,
            height,
            xdec,
            ydec,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Plane {
            width,
            height,
            xdec: 0,
            ydec: 0,
            samples: vec![value; width * height],
        }
    }

    pub fn with_decimation(mut self, xdec: u8, ydec: u8) -> Self {
        self.xdec = xdec;
        self.ydec = ydec;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bit_depth(&self) -> u8 {
        BIT_DEPTH
    }

    pub fn xdec(&self) -> u8 {
        self.xdec
    }

    pub fn ydec(&self) -> u8 {
        self.ydec
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }
}

/// A Y'CbCr image. Chroma planes are `ceil(luma / 2^dec)` in each axis, or
/// empty for [`ChromaFormat::Mono`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    pub y: Plane,
    pub cb: Plane,
    pub cr: Plane,
    pub format: ChromaFormat,
}

pub(crate) fn chroma_dims(width: usize, height: usize, format: ChromaFormat) -> (usize, usize) {
    match format {
        ChromaFormat::Mono => (0, 0),
        _ => {
            let (xd, yd) = format.decimation();
            (
                (width + (1 << xd) - 1) >> xd,
                (height + (1 << yd) - 1) >> yd,
            )
        }
    }
}

impl Image {
    pub fn new(y: Plane, cb: Plane, cr: Plane, format: ChromaFormat) -> Result<Self, PlaneError> {
        if y.is_empty() {
            return Err(PlaneError::Empty);
        }
        let (cw, ch) = chroma_dims(y.width, y.height, format);
        let (xd, yd) = format.decimation();
        for c in [&cb, &cr] {
            if c.width != cw || c.height != ch {
                return Err(PlaneError::ChromaSize {
                    want_w: cw,
                    want_h: ch,
                    got_w: c.width,
                    got_h: c.height,
                });
            }
        }
        Ok(Image {
            y: y.with_decimation(0, 0),
            cb: cb.with_decimation(xd, yd),
            cr: cr.with_decimation(xd, yd),
            format,
        })
    }

    pub fn mono(y: Plane) -> Result<Self, PlaneError> {
        Image::new(y, Plane::filled(0, 0, 0), Plane::filled(0, 0, 0), ChromaFormat::Mono)
    }

    /// Image with every plane set to a constant.
    pub fn constant(
        width: usize,
        height: usize,
        format: ChromaFormat,
        yuv: [u8; 3],
    ) -> Result<Self, PlaneError> {
        let (cw, ch) = chroma_dims(width, height, format);
        Image::new(
            Plane::filled(width, height, yuv[0]),
            Plane::filled(cw, ch, yuv[1]),
            Plane::filled(cw, ch, yuv[2]),
            format,
        )
    }

    pub fn width(&self) -> usize {
        self.y.width
    }

    pub fn height(&self) -> usize {
        self.y.height
    }

    /// The planes actually carrying data, luma first.
    pub fn planes(&self) -> impl Iterator<Item = &Plane> {
        let n = if self.format.has_chroma() { 3 } else { 1 };
        [&self.y, &self.cb, &self.cr].into_iter().take(n)
    }

    pub fn plane(&self, index: usize) -> &Plane {
        match index {
            0 => &self.y,
            1 => &self.cb,
            _ => &self.cr,
        }
    }

    pub fn plane_mut(&mut self, index: usize) -> &mut Plane {
        match index {
            0 => &mut self.y,
            1 => &mut self.cb,
            _ => &mut self.cr,
        }
    }

    pub fn num_planes(&self) -> usize {
        if self.format.has_chroma() {
            3
        } else {
            1
        }
    }
}

/// Signed working buffer used by the transform and filter stages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPlane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<i32>,
}

impl IntPlane {
    pub fn new(width: usize, height: usize) -> Self {
        IntPlane {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> i32) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        IntPlane {
            width,
            height,
            data,
        }
    }

    /// Copy of `plane` padded to `width`x`height` by edge replication.
    pub fn padded_from(plane: &Plane, width: usize, height: usize) -> Self {
        IntPlane::from_fn(width, height, |x, y| {
            let sx = x.min(plane.width() - 1);
            let sy = y.min(plane.height() - 1);
            plane.get(sx, sy) as i32
        })
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: i32) {
        self.data[y * self.width + x] = v;
    }

    #[inline]
    pub fn at_mut(&mut self, x: usize, y: usize) -> &mut i32 {
        &mut self.data[y * self.width + x]
    }

    /// Crop to `width`x`height` and clamp to the 8-bit range.
    pub fn to_plane(&self, width: usize, height: usize, xdec: u8, ydec: u8) -> Plane {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(self.get(x, y).clamp(0, 255) as u8);
            }
        }
        Plane {
            width,
            height,
            xdec,
            ydec,
            samples,
        }
    }
}
