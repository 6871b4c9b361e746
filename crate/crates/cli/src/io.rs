//! WAV reading and writing, and atomic file output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use qpcp::AudioClip;

use crate::error::{CliError, CliResult};

/// Reads 16-bit PCM or 32-bit float WAV, mono or stereo.
pub fn read_wav(path: &Path) -> CliResult<AudioClip> {
    let mut reader = WavReader::open(path).map_err(|e| CliError::io(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 || channels > 2 {
        return Err(CliError::data(format!(
            "{}: {channels} channels, only mono and stereo are supported",
            path.display()
        )));
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<Result<_, _>>(),
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<Result<_, _>>(),
        (format, bits) => {
            return Err(CliError::data(format!(
                "{}: unsupported sample format {format:?} at {bits} bits (use 16-bit PCM or 32-bit float)",
                path.display()
            )))
        }
    }
    .map_err(|e| CliError::io(path, e))?;
    let mut split = vec![Vec::with_capacity(interleaved.len() / channels); channels];
    for frame in interleaved.chunks_exact(channels) {
        for (c, &v) in frame.iter().enumerate() {
            split[c].push(v);
        }
    }
    AudioClip::new(spec.sample_rate, split).map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

/// Writes `clip` as 32-bit float WAV.
pub fn write_wav(path: &Path, clip: &AudioClip) -> CliResult<()> {
    let spec = WavSpec {
        channels: clip.num_channels() as u16,
        sample_rate: clip.sample_rate(),
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    write_atomic(path, |file| {
        let mut writer = WavWriter::new(BufWriter::new(file), spec).map_err(to_io)?;
        for n in 0..clip.len() {
            for ch in clip.channels() {
                writer.write_sample(ch[n] as f32).map_err(to_io)?;
            }
        }
        writer.finalize().map_err(to_io)
    })
}

fn to_io(e: hound::Error) -> std::io::Error {
    match e {
        hound::Error::IoError(io) => io,
        other => std::io::Error::other(other.to_string()),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failure never leaves a partial file behind.
pub fn write_atomic(
    path: &Path,
    fill: impl FnOnce(&mut File) -> std::io::Result<()>,
) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    fill(tmp.as_file_mut()).map_err(|e| CliError::io(path, e))?;
    tmp.as_file_mut().flush().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write_atomic(path, |file| file.write_all(text.as_bytes()))
}
