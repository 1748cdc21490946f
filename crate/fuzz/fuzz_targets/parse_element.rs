//! Fuzzes the element grammar under a context drawn from the input's first
//! bytes (ring flavor and size, variable count, rank). Parse failures must be
//! structured errors; successes must round-trip through render.

#![no_main]

use libfuzzer_sys::fuzz_target;
use tdvr_gb::chainring::{Flavor, RingSpec};
use tdvr_gb::freemod::{default_var_names, TermOrder};
use tdvr_gb::parse::parse_element_str;

fuzz_target!(|data: &[u8]| {
    if data.len() < 4 {
        return;
    }
    let p = [2u64, 3, 5, 7][data[0] as usize % 4];
    let a = 1 + (data[1] as u32) % 4;
    let flavor = if data[0] & 0x80 == 0 { Flavor::EquiChar } else { Flavor::MixedChar };
    let ring = RingSpec::new(p, a, flavor).expect("small parameters are valid");
    let nvars = 1 + (data[2] as usize) % 3;
    let rank = 1 + (data[3] as usize) % 3;
    let order = TermOrder::default_for_rank(rank);
    let names = default_var_names(nvars);

    let Ok(src) = std::str::from_utf8(&data[4..]) else { return };
    let Ok(f) = parse_element_str(ring, &order, &names, src) else { return };
    let rendered = f.render(&names);
    let back = parse_element_str(ring, &order, &names, &rendered)
        .expect("rendered element must re-parse");
    assert_eq!(back.render(&names), rendered, "element render is not a parse fixed point");
});
