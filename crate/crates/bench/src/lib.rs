//! Synthetic inputs for the pipeline benchmarks.

/// A valid toy script with `scenes` scenes over a cast of `cast` letters,
/// generated from a fixed linear congruential sequence.
pub fn synthetic_script(scenes: usize, cast: usize, seed: u64) -> String {
    let letters: Vec<char> = ('A'..='Z').take(cast.clamp(1, 26)).collect();
    let mut state = seed;
    let mut next = move |n: usize| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as usize % n
    };
    let mut onstage: Vec<char> = Vec::new();
    let mut out = String::from("|");
    for _ in 0..scenes {
        let mut events = Vec::new();
        for _ in 0..8 {
            match next(4) {
                0 | 1 if onstage.len() < letters.len() => {
                    let c = *letters
                        .iter()
                        .filter(|c| !onstage.contains(c))
                        .nth(next(letters.len() - onstage.len()))
                        .unwrap();
                    onstage.push(c);
                    events.push(format!("->{c}"));
                }
                2 if onstage.len() > 1 => {
                    let c = onstage.remove(next(onstage.len()));
                    events.push(format!("{c}->"));
                }
                _ => {}
            }
            if onstage.is_empty() {
                onstage.push(letters[0]);
                events.push(format!("->{}", letters[0]));
            }
            events.push(format!("{}*", onstage[next(onstage.len())]));
        }
        out.push_str(&events.join("; "));
        out.push('|');
    }
    out
}
