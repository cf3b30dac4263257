//! Line-oriented event files.
//!
//! ```text
//! event <id>
//! region <idx> <45 tuples pt:sub_row:sub_col:kind:quality>   (x36)
//! <blank line>
//! ```
//!
//! Tuples are charged, photon, neutral in record order; kind is `c`, `p` or
//! `n`. Origins are implied by position and not written.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Event, Region, Toward, Track, TrackKind, CHARGED, NEUTRAL, PHOTON, TRACKS_PER_REGION};
use crate::{Error, Result, REGIONS};

pub fn render_events(events: &[Event]) -> String {
    let mut out = String::new();
    for e in events {
        writeln!(out, "event {}", e.id).unwrap();
        for r in e.regions().iter() {
            write!(out, "region {}", r.index()).unwrap();
            for t in r.tracks() {
                let kind = match t.kind {
                    TrackKind::Charged => 'c',
                    TrackKind::Photon => 'p',
                    TrackKind::Neutral => 'n',
                };
                write!(
                    out,
                    " {}:{}:{}:{}:{}",
                    t.pt, t.sub_row as u8, t.sub_col as u8, kind, t.quality
                )
                .unwrap();
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn write_events(path: impl AsRef<Path>, events: &[Event]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_events(events)).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_events(path: impl AsRef<Path>) -> Result<Vec<Event>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_events(&text)
}

struct Pending {
    id: u64,
    header_line: usize,
    regions: Vec<Region>,
}

impl Pending {
    fn finish(self, line: usize) -> Result<Event> {
        if self.regions.len() != REGIONS {
            return Err(Error::EventShape {
                line,
                event: self.id,
                msg: format!("expected {REGIONS} regions, found {}", self.regions.len()),
            });
        }
        Event::new(self.id, self.regions).map_err(|e| Error::EventShape {
            line: self.header_line,
            event: self.id,
            msg: e.to_string(),
        })
    }
}

pub fn parse_events(text: &str) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let mut words = raw.split_whitespace();
        match words.next() {
            None => {
                if let Some(p) = pending.take() {
                    events.push(p.finish(line)?);
                }
            }
            Some("event") => {
                if let Some(p) = pending.take() {
                    events.push(p.finish(line)?);
                }
                let id = words
                    .next()
                    .and_then(|w| w.parse::<u64>().ok())
                    .ok_or_else(|| parse_err(line, "expected `event <id>`"))?;
                if words.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after event id"));
                }
                pending = Some(Pending {
                    id,
                    header_line: line,
                    regions: Vec::with_capacity(REGIONS),
                });
            }
            Some("region") => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "region line outside an event"))?;
                let shape = |msg: String| Error::EventShape {
                    line,
                    event: p.id,
                    msg,
                };
                let idx = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(line, "expected `region <idx> <tracks>`"))?;
                if idx != p.regions.len() {
                    return Err(shape(format!(
                        "region {idx} out of order, expected {}",
                        p.regions.len()
                    )));
                }
                let tracks = words
                    .map(|w| parse_track(line, w))
                    .collect::<Result<Vec<_>>>()?;
                if tracks.len() != TRACKS_PER_REGION {
                    return Err(shape(format!(
                        "region {idx} has {} tracks, expected {TRACKS_PER_REGION}",
                        tracks.len()
                    )));
                }
                if let Some(slot) = tracks.iter().enumerate().position(|(slot, t)| {
                    let expected = match slot {
                        s if s < CHARGED => TrackKind::Charged,
                        s if s < CHARGED + PHOTON => TrackKind::Photon,
                        _ => TrackKind::Neutral,
                    };
                    t.kind != expected
                }) {
                    return Err(shape(format!(
                        "region {idx}: slot {slot} has the wrong kind"
                    )));
                }
                let charged: [Track; CHARGED] = tracks[..CHARGED].try_into().unwrap();
                let photon: [Track; PHOTON] = tracks[CHARGED..CHARGED + PHOTON].try_into().unwrap();
                let neutral: [Track; NEUTRAL] = tracks[CHARGED + PHOTON..].try_into().unwrap();
                let region = Region::new(idx, charged, photon, neutral)
                    .map_err(|e| shape(format!("region {idx}: {e}")))?;
                p.regions.push(region);
            }
            Some(other) => {
                return Err(parse_err(line, &format!("unknown record `{other}`")));
            }
        }
    }
    if let Some(p) = pending.take() {
        events.push(p.finish(last_line + 1)?);
    }
    Ok(events)
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_owned(),
    }
}

fn parse_track(line: usize, tok: &str) -> Result<Track> {
    let bad = || parse_err(line, &format!("malformed track `{tok}`"));
    let mut parts = tok.split(':');
    let mut field = || parts.next().ok_or_else(bad);
    let pt: u64 = field()?.parse().map_err(|_| bad())?;
    let pt = u16::try_from(pt).map_err(|_| Error::PtRange { line, value: pt })?;
    let toward = |s: &str| match s {
        "0" => Ok(Toward::Lower),
        "1" => Ok(Toward::Higher),
        _ => Err(bad()),
    };
    let sub_row = toward(field()?)?;
    let sub_col = toward(field()?)?;
    let kind = match field()? {
        "c" => TrackKind::Charged,
        "p" => TrackKind::Photon,
        "n" => TrackKind::Neutral,
        _ => return Err(bad()),
    };
    let quality = field()?.parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Track {
        pt,
        sub_row,
        sub_col,
        kind,
        quality,
        ..Default::default()
    })
}
