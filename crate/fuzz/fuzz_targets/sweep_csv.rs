#![no_main]

use libfuzzer_sys::fuzz_target;
use poisson_sor::experiment::{parse_sweep_csv, write_sweep_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(table) = parse_sweep_csv(text) else { return };
    let mut out = Vec::new();
    write_sweep_csv(&mut out, &[], &table.records, &[]).unwrap();
    let again = parse_sweep_csv(std::str::from_utf8(&out).unwrap()).unwrap();
    assert_eq!(table.records.len(), again.records.len());
    for (a, b) in table.records.iter().zip(&again.records) {
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.converged, b.converged);
        assert!(a.omega.to_bits() == b.omega.to_bits() || (a.omega.is_nan() && b.omega.is_nan()));
        assert!(a.final_norm.to_bits() == b.final_norm.to_bits() || (a.final_norm.is_nan() && b.final_norm.is_nan()));
    }
});
