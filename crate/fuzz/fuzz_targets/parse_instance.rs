//! Fuzzes the instance-file parser: arbitrary UTF-8 must either parse or
//! return a structured error — never panic. When it parses, every generator
//! must survive a render/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use tdvr_gb::parse::{parse_element_str, parse_instance_str};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(instance) = parse_instance_str(src) else { return };
    for g in &instance.gens {
        let rendered = g.render(&instance.vars);
        let back = parse_element_str(instance.ring, &instance.order, &instance.vars, &rendered)
            .expect("rendered generator must re-parse");
        assert_eq!(
            back.render(&instance.vars),
            rendered,
            "generator render is not a parse fixed point"
        );
    }
});
