//! Binary layout: the index as an 8-byte double, then the payload doubles,
//! all little-endian.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WireMessage {
    pub index: f64,
    pub payload: Vec<f64>,
}

impl WireMessage {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (1 + self.payload.len()));
        out.extend_from_slice(&self.index.to_le_bytes());
        for v in &self.payload {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(Error::TruncatedStream(format!("{} bytes, need at least 8 for the index", bytes.len())));
        }
        if bytes.len() % 8 != 0 {
            return Err(Error::TruncatedStream(format!("{} bytes is not a whole number of doubles", bytes.len())));
        }
        let mut it = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let index = it.next().unwrap();
        Ok(WireMessage { index, payload: it.collect() })
    }

    /// Checks that the payload splits into whole blocks.
    pub fn check_blocks(&self, block_len: usize) -> Result<usize> {
        if block_len == 0 || self.payload.len() % block_len != 0 {
            return Err(Error::SizeMismatch(format!(
                "payload of {} values does not split into blocks of {block_len}",
                self.payload.len()
            )));
        }
        Ok(self.payload.len() / block_len)
    }
}

pub fn wire_write(w: &WireMessage, mut sink: impl Write) -> Result<()> {
    sink.write_all(&w.to_bytes())?;
    Ok(())
}

pub fn wire_read(mut source: impl Read) -> Result<WireMessage> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    WireMessage::from_bytes(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sizes() {
        let w = WireMessage { index: 1.0, payload: vec![0.5; 11] };
        let mut buf = Vec::new();
        wire_write(&w, &mut buf).unwrap();
        assert_eq!(buf.len(), 96);
        assert_eq!(&buf[..8], &1.0f64.to_le_bytes());
        assert_eq!(wire_read(&buf[..]).unwrap(), w);
        assert!(matches!(wire_read(&buf[..95]), Err(Error::TruncatedStream(_))));
        assert!(matches!(wire_read(&buf[..3]), Err(Error::TruncatedStream(_))));
        assert_eq!(wire_read(&buf[..8]).unwrap().payload.len(), 0);
    }

    #[test]
    fn block_check() {
        let w = WireMessage { index: 1.0, payload: vec![0.0; 20] };
        assert_eq!(w.check_blocks(10).unwrap(), 2);
        assert!(matches!(w.check_blocks(11), Err(Error::SizeMismatch(_))));
    }

    proptest! {
        #[test]
        fn byte_exact(index in any::<f64>(), payload in prop::collection::vec(any::<f64>(), 0..64)) {
            let w = WireMessage { index, payload };
            let bytes = w.to_bytes();
            prop_assert_eq!(bytes.len(), 8 * (1 + w.payload.len()));
            let back = WireMessage::from_bytes(&bytes).unwrap();
            prop_assert_eq!(back.to_bytes(), bytes);
        }
    }
}
