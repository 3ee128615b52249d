//! 8- and 16-bit RGB PNG reading and writing.
//!
//! Samples are mapped linearly: code `v` at bit depth `b` becomes
//! `v / (2^b - 1)`. No transfer function is applied, the files are assumed
//! to hold linear data already.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use png::{BitDepth, ColorType, Decoder, Encoder, Transformations};
use sparrow_core::LinearImage;

use crate::error::{Error, Result};

pub fn load_png(path: impl AsRef<Path>) -> Result<LinearImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    decode_png(BufReader::new(file), path)
}

/// Decodes an RGB PNG from `reader`; `path` is only used in error messages.
pub fn decode_png<R: Read + std::io::BufRead + std::io::Seek>(
    reader: R,
    path: &Path,
) -> Result<LinearImage> {
    let decode_err = |source| Error::Decode {
        path: path.to_owned(),
        source,
    };
    let mut decoder = Decoder::new(reader);
    decoder.set_transformations(Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(decode_err)?;
    let info = reader.info();
    let (width, height) = (info.width as usize, info.height as usize);
    let (color, depth) = (info.color_type, info.bit_depth);
    if color != ColorType::Rgb {
        return Err(Error::Unsupported {
            path: path.to_owned(),
            what: format!("{color:?}, expected RGB"),
        });
    }
    if width == 0 || height == 0 {
        return Err(Error::Core(sparrow_core::Error::EmptyImage));
    }

    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Unsupported {
            path: path.to_owned(),
            what: "image too large".into(),
        })?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(decode_err)?;
    let bytes = &buf[..frame.buffer_size()];
    let samples = width * height * 3;

    let data: Vec<f64> = match depth {
        BitDepth::Eight => {
            let scale = 1.0 / 255.0;
            bytes[..samples].iter().map(|&v| v as f64 * scale).collect()
        }
        BitDepth::Sixteen => {
            let scale = 1.0 / 65535.0;
            bytes[..samples * 2]
                .chunks_exact(2)
                .map(|b| u16::from_be_bytes([b[0], b[1]]) as f64 * scale)
                .collect()
        }
        other => {
            return Err(Error::Unsupported {
                path: path.to_owned(),
                what: format!("{other:?} bit depth"),
            });
        }
    };
    let bits = if depth == BitDepth::Eight { 8 } else { 16 };
    Ok(LinearImage::with_bit_depth(width, height, data, bits)?)
}

/// Writes `img` at its recorded bit depth (8 or 16), clipping to `[0, 1]`.
pub fn save_png(img: &LinearImage, path: impl AsRef<Path>) -> Result<()> {
    save_png_with_depth(img, path, img.bit_depth())
}

pub fn save_png_with_depth(img: &LinearImage, path: impl AsRef<Path>, bits: u8) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode_png(img, &mut w, bits)?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Encodes `img` as an RGB PNG with 8 or 16 bits per sample.
pub fn encode_png<W: Write>(img: &LinearImage, writer: W, bits: u8) -> Result<()> {
    let depth = match bits {
        8 => BitDepth::Eight,
        16 => BitDepth::Sixteen,
        _ => return Err(Error::Usage(format!("unsupported output bit depth {bits}"))),
    };
    let mut encoder = Encoder::new(writer, img.width() as u32, img.height() as u32);
    encoder.set_color(ColorType::Rgb);
    encoder.set_depth(depth);
    let mut writer = encoder.write_header()?;
    let bytes: Vec<u8> = if bits == 8 {
        img.data()
            .iter()
            .map(|&v| quantize(v, 255.0) as u8)
            .collect()
    } else {
        img.data()
            .iter()
            .flat_map(|&v| (quantize(v, 65535.0) as u16).to_be_bytes())
            .collect()
    };
    writer.write_image_data(&bytes)?;
    writer.finish()?;
    Ok(())
}

#[inline]
fn quantize(v: f64, max: f64) -> f64 {
    (v.clamp(0.0, 1.0) * max).round()
}
