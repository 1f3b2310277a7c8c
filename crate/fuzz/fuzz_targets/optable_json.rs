#![no_main]

use latclone::OpTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(op) = serde_json::from_slice::<OpTable>(data) {
        let json = serde_json::to_string(&op).unwrap();
        assert_eq!(serde_json::from_str::<OpTable>(&json).unwrap(), op);
    }
});
