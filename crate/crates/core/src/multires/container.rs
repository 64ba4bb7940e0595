//! `ENOMR1` container: magic, header length (u32 LE), JSON header, then
//! little-endian f64 data (`q0`, then details of levels 1..K, row-major in 2D).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::twod::{Grid2D, MultiResRep2D};
use super::{MultiResRep, ThresholdSchedule};
use crate::eno_core::GhostPolicy;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"ENOMR1";

#[derive(Clone, Debug, PartialEq)]
pub enum Container {
    OneD(MultiResRep),
    TwoD(MultiResRep2D),
}

#[derive(Serialize, Deserialize)]
struct Header {
    p: usize,
    #[serde(rename = "N0", skip_serializing_if = "Option::is_none", default)]
    n0: Option<usize>,
    #[serde(rename = "Nx0", skip_serializing_if = "Option::is_none", default)]
    nx0: Option<usize>,
    #[serde(rename = "Ny0", skip_serializing_if = "Option::is_none", default)]
    ny0: Option<usize>,
    #[serde(rename = "K")]
    k: usize,
    eps: f64,
    t: f64,
    ghost_policy: GhostPolicy,
}

fn put(out: &mut Vec<u8>, v: &[f64]) {
    for x in v {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

pub fn to_bytes(c: &Container) -> Vec<u8> {
    let (header, mut data) = match c {
        Container::OneD(r) => {
            let mut d = Vec::new();
            put(&mut d, &r.q0);
            r.details.iter().for_each(|l| put(&mut d, l));
            let h = Header {
                p: r.p,
                n0: Some(r.n0),
                nx0: None,
                ny0: None,
                k: r.schedule.k,
                eps: r.schedule.eps,
                t: r.schedule.t,
                ghost_policy: r.ghost,
            };
            (h, d)
        }
        Container::TwoD(r) => {
            let mut d = Vec::new();
            put(&mut d, &r.q0.values);
            r.details.iter().for_each(|l| put(&mut d, &l.values));
            let h = Header {
                p: r.p,
                n0: None,
                nx0: Some(r.q0.nx),
                ny0: Some(r.q0.ny),
                k: r.schedule.k,
                eps: r.schedule.eps,
                t: r.schedule.t,
                ghost_policy: r.ghost,
            };
            (h, d)
        }
    };
    let json = serde_json::to_vec(&header).expect("header serializes");
    let mut out = MAGIC.to_vec();
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    out.append(&mut data);
    out
}

struct Floats<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Floats<'_> {
    fn take(&mut self, n: usize) -> Result<Vec<f64>> {
        let end = self.pos + 8 * n;
        if end > self.data.len() {
            return Err(Error::Parse("container data is truncated".into()));
        }
        let v = self.data[self.pos..end]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        self.pos = end;
        Ok(v)
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<Container> {
    if bytes.len() < 10 || &bytes[..6] != MAGIC {
        return Err(Error::Parse("missing ENOMR1 magic".into()));
    }
    let len = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    if bytes.len() < 10 + len {
        return Err(Error::Parse("container header is truncated".into()));
    }
    let h: Header = serde_json::from_slice(&bytes[10..10 + len]).map_err(|e| Error::Parse(format!("container header: {e}")))?;
    let schedule = ThresholdSchedule::new(h.eps, h.t, h.k)?;
    let mut f = Floats {
        data: &bytes[10 + len..],
        pos: 0,
    };
    let c = match (h.n0, h.nx0, h.ny0) {
        (Some(n0), None, None) => {
            let q0 = f.take(n0 + 1)?;
            let details = (1..=h.k).map(|k| f.take(n0 << (k - 1))).collect::<Result<_>>()?;
            Container::OneD(MultiResRep {
                p: h.p,
                n0,
                ghost: h.ghost_policy,
                schedule,
                q0,
                details,
            })
        }
        (None, Some(nx0), Some(ny0)) => {
            let q0 = Grid2D::new(nx0, ny0, f.take((nx0 + 1) * (ny0 + 1))?)?;
            let details = (1..=h.k)
                .map(|k| {
                    let (nx, ny) = (nx0 << k, ny0 << k);
                    Grid2D::new(nx, ny, f.take((nx + 1) * (ny + 1))?)
                })
                .collect::<Result<_>>()?;
            Container::TwoD(MultiResRep2D {
                p: h.p,
                ghost: h.ghost_policy,
                schedule,
                q0,
                details,
            })
        }
        _ => return Err(Error::Parse("header needs either N0 or both Nx0 and Ny0".into())),
    };
    if f.pos != f.data.len() {
        return Err(Error::Parse("trailing bytes after container data".into()));
    }
    Ok(c)
}

pub fn write_container(c: &Container, mut w: impl Write) -> Result<()> {
    w.write_all(&to_bytes(c))?;
    Ok(())
}

pub fn read_container(mut r: impl Read) -> Result<Container> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    from_bytes(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multires::{encode, encode2d, EnoRefiner};

    #[test]
    fn round_trips() {
        let f: Vec<f64> = (0..=36).map(|i| (i as f64 * 0.4).cos()).collect();
        let s = ThresholdSchedule::new(0.1, 0.5, 2).unwrap();
        let c = Container::OneD(encode(&f, 3, s, GhostPolicy::Reflect).unwrap());
        let bytes = to_bytes(&c);
        assert_eq!(&bytes[..6], MAGIC);
        assert_eq!(from_bytes(&bytes).unwrap(), c);
        assert!(from_bytes(&bytes[..bytes.len() - 1]).is_err());

        let g = Grid2D::sample(8, 4, (0.0, 1.0), (0.0, 1.0), |x, y| x - y);
        let r = EnoRefiner { p: 2, ghost: GhostPolicy::default() };
        let (q0, details) = encode2d(&g, s, &r).unwrap();
        let c = Container::TwoD(MultiResRep2D { p: 2, ghost: r.ghost, schedule: s, q0, details });
        assert_eq!(from_bytes(&to_bytes(&c)).unwrap(), c);
        assert!(from_bytes(b"ENOMR2\0\0\0\0").is_err());
    }
}
