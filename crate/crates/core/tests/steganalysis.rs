use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use stegsec::analysis::{chi_square_lsb_distinguisher, DEFAULT_THRESHOLD_P};
use stegsec::{Content, Generator, NBitString, PositionPolicy, Stegosystem, SupportFamily};

/// Natural-looking cover with a skewed LSB plane: values drift slowly and
/// even values are three times as likely as odd ones.
fn skewed_cover(len: usize) -> Content {
    let payload = (0..len)
        .map(|t| {
            let level = 96 + ((t / 7) % 48) as u8 * 2;
            if t % 4 == 3 { level + 1 } else { level }
        })
        .collect();
    Content::raw(payload).unwrap()
}

#[test]
fn skewed_cover_is_flagged_clean() {
    let d = chi_square_lsb_distinguisher(DEFAULT_THRESHOLD_P).unwrap();
    let report = d.analyze(&skewed_cover(2048));
    assert!(!report.decision);
    assert!(report.result.unwrap().p_value < 1e-6);
}

#[test]
fn fully_randomized_lsb_plane_is_flagged_stego() {
    let cover = skewed_cover(2048);
    let family = Arc::new(SupportFamily::new(vec![cover], 2048, PositionPolicy::LsbPerByte).unwrap());
    let sys = Stegosystem::new(family, Generator::one_time_pad(2048)).unwrap();
    let d = chi_square_lsb_distinguisher(DEFAULT_THRESHOLD_P).unwrap();
    let m = NBitString::zeros(2048);
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    let trials = 300;
    let hits = (0..trials)
        .filter(|_| {
            let k = NBitString::random(2048, &mut rng);
            d.analyze(&sys.embed(0, &m, &k).unwrap()).decision
        })
        .count();
    // pair counts split binomially, so the statistic concentrates near half
    // its degrees of freedom and p sits close to 1
    assert!(hits as f64 / trials as f64 > 0.9, "{hits}/{trials}");
}
