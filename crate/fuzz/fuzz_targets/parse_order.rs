//! Fuzzes the `--order` specification grammar for every small rank. Accepted
//! specs must describe the rank they were parsed for and re-render into a
//! spec that parses to the same order.

#![no_main]

use libfuzzer_sys::fuzz_target;
use tdvr_gb::parse::parse_order_spec;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    let rank = 1 + (data[0] as usize) % 4;
    let Ok(src) = std::str::from_utf8(&data[1..]) else { return };
    let Ok(order) = parse_order_spec(src, rank) else { return };
    assert_eq!(order.rank(), rank, "parsed order has the wrong rank");
    let spec = format!(
        "{} {} priority {}",
        order.mono_order().name(),
        order.module_mode().name(),
        order
            .priority_display()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let back = parse_order_spec(&spec, rank).expect("rendered order spec must re-parse");
    assert_eq!(back, order, "order spec render is not a parse fixed point");
});
