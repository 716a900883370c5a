//! Raw sample dump: interleaved little-endian `f64` pairs `(re, im)`, one
//! per sample, no header. The sample rate is 61.44 MHz.

use std::io::{self, Write};

use ini_core::SampleBuffer;

pub fn write_samples(buf: &SampleBuffer, out: &mut impl Write) -> io::Result<()> {
    let mut w = io::BufWriter::new(out);
    for s in &buf.samples {
        w.write_all(&s.re.to_le_bytes())?;
        w.write_all(&s.im.to_le_bytes())?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ini_core::waveform::synthesize;
    use ini_core::{SymbolStream, ToneAllocation};

    #[test]
    fn round_trips() {
        let stream = SymbolStream::new(ToneAllocation::new(1, 4, 3).unwrap(), 2, 9);
        let buf = synthesize(&stream).unwrap();
        let mut bytes = Vec::new();
        write_samples(&buf, &mut bytes).unwrap();
        assert_eq!(bytes.len(), buf.len() * 16);
        let back: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        for (k, s) in buf.samples.iter().enumerate() {
            assert_eq!((back[2 * k], back[2 * k + 1]), (s.re, s.im));
        }
    }
}
