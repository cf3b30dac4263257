use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Event, Region, Toward, Track, CHARGED, NEUTRAL, PHOTON};
use crate::{REGIONS, SEEDS_PER_REGION};

/// Deterministic synthetic event: pt uniform over the full 16-bit range,
/// sub-positions and quality uniform. Each `(rng_seed, event_id)` pair
/// selects an independent ChaCha stream.
pub fn generate_event(rng_seed: u64, event_id: u64) -> Event {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(event_id);

    let draw = |rng: &mut ChaCha8Rng| Track {
        pt: rng.random(),
        sub_row: if rng.random() {
            Toward::Higher
        } else {
            Toward::Lower
        },
        sub_col: if rng.random() {
            Toward::Higher
        } else {
            Toward::Lower
        },
        quality: rng.random(),
        ..Default::default()
    };

    let regions = (0..REGIONS)
        .map(|i| {
            let mut charged = [Track::default(); CHARGED];
            let mut photon = [Track::default(); PHOTON];
            let mut neutral = [Track::default(); NEUTRAL];
            for t in charged.iter_mut().chain(&mut photon).chain(&mut neutral) {
                *t = draw(&mut rng);
            }
            charged[..SEEDS_PER_REGION].sort_by_key(|t| std::cmp::Reverse(t.pt));
            Region::new(i, charged, photon, neutral).expect("generated region is valid")
        })
        .collect();
    Event::new(event_id, regions).expect("generated event is valid")
}
