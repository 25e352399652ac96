//! Minimal RIFF/WAVE reader for uncompressed PCM and IEEE-float data.

use std::path::Path;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy)]
struct Format {
    tag: u16,
    channels: u16,
    sample_rate: u32,
    bits: u16,
}

fn u16_le(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_le(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Format> {
    if body.len() < 16 {
        return Err(Error::MalformedContainer(format!(
            "fmt chunk is {} bytes, need at least 16",
            body.len()
        )));
    }
    let mut tag = u16_le(body, 0);
    let channels = u16_le(body, 2);
    let sample_rate = u32_le(body, 4);
    let bits = u16_le(body, 14);
    if tag == FORMAT_EXTENSIBLE {
        // cbSize(2) validBits(2) channelMask(4) then the sub-format GUID,
        // whose first two bytes carry the real format tag.
        if body.len() < 26 {
            return Err(Error::MalformedContainer(
                "WAVE_FORMAT_EXTENSIBLE fmt chunk is truncated".into(),
            ));
        }
        tag = u16_le(body, 24);
    }
    if channels == 0 {
        return Err(Error::MalformedContainer(
            "fmt declares zero channels".into(),
        ));
    }
    if sample_rate == 0 {
        return Err(Error::MalformedContainer(
            "fmt declares zero sample rate".into(),
        ));
    }
    Ok(Format {
        tag,
        channels,
        sample_rate,
        bits,
    })
}

type SampleReader = fn(&[u8]) -> f64;

fn sample_reader(fmt: &Format) -> Result<SampleReader> {
    let reader: SampleReader = match (fmt.tag, fmt.bits) {
        (FORMAT_PCM, 8) => |b| (f64::from(b[0]) - 128.0) / 128.0,
        (FORMAT_PCM, 16) => |b| f64::from(i16::from_le_bytes([b[0], b[1]])) / 32768.0,
        (FORMAT_PCM, 24) => |b| {
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            f64::from(v) / 8_388_608.0
        },
        (FORMAT_PCM, 32) => {
            |b| f64::from(i32::from_le_bytes([b[0], b[1], b[2], b[3]])) / 2_147_483_648.0
        }
        (FORMAT_IEEE_FLOAT, 32) => |b| f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])),
        (FORMAT_IEEE_FLOAT, 64) => {
            |b| f64::from_le_bytes([b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]])
        }
        (format, bits) => return Err(Error::UnsupportedEncoding { format, bits }),
    };
    Ok(reader)
}

/// Decode a RIFF/WAVE byte buffer into a mono [`TimeSeries`].
///
/// Chunks may appear in any order; unknown chunks (`LIST`, `fact`, ...) are
/// skipped. Multi-channel frames are mixed down by arithmetic mean and
/// integer samples are scaled by their full-scale value into `[-1, 1]`.
pub fn decode_wav(bytes: &[u8]) -> Result<TimeSeries> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::MalformedContainer("missing RIFF/WAVE header".into()));
    }

    let mut fmt = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let declared = u32_le(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        // Writers that stream audio often leave the size unpatched; clamp to
        // what is actually present.
        let body_end = body_start.saturating_add(declared).min(bytes.len());
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => fmt = Some(parse_fmt(body)?),
            b"data" => data = Some(body),
            _ => {}
        }
        pos = body_start
            .saturating_add(declared)
            .saturating_add(declared & 1);
    }

    let fmt = fmt.ok_or_else(|| Error::MalformedContainer("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::MalformedContainer("no data chunk".into()))?;
    let read = sample_reader(&fmt)?;

    let width = usize::from(fmt.bits / 8);
    let channels = usize::from(fmt.channels);
    let frame = width * channels;
    let frames = data.len() / frame;
    if frames == 0 {
        return Err(Error::EmptyData);
    }

    let samples = data
        .chunks_exact(frame)
        .map(|f| {
            let sum: f64 = f.chunks_exact(width).map(read).sum();
            sum / channels as f64
        })
        .collect();
    TimeSeries::new(samples, f64::from(fmt.sample_rate))
}

/// Read and decode a WAV file from disk.
pub fn read_wav(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_wav(&bytes)
}

/// Encode a series as a mono 32-bit IEEE-float WAV file at `sample_rate` Hz.
pub fn encode_wav_f32(samples: &[f64], sample_rate: u32) -> Vec<u8> {
    let data_len = samples.len() * 4;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_IEEE_FLOAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 4).to_le_bytes());
    out.extend_from_slice(&4u16.to_le_bytes());
    out.extend_from_slice(&32u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in samples {
        out.extend_from_slice(&(s as f32).to_le_bytes());
    }
    out
}
