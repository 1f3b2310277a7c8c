#![no_main]

use latclone::funclone::RelationRepr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&carrier, rest)) = data.split_first() else {
        return;
    };
    let Ok(repr) = serde_json::from_slice::<RelationRepr>(rest) else {
        return;
    };
    if let Ok(rel) = repr.into_relation(carrier as usize % 17) {
        let json = serde_json::to_string(&rel).unwrap();
        let again: RelationRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(again.into_relation(rel.carrier()).unwrap(), rel);
    }
});
