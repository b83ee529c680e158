#![no_main]
use crossratio::hypergraph::{canonical_form, BiadjacencyMatrix, CanonicalKey, ColumnSumProfile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = BiadjacencyMatrix::parse(s) {
        // whatever parses prints back to the same matrix
        assert_eq!(BiadjacencyMatrix::parse(&m.to_text()).unwrap(), m);
        if let Ok(h) = m.to_hypergraph() {
            if h.n_edges() <= 8 {
                let key = canonical_form(&h);
                assert_eq!(key.to_string().parse::<CanonicalKey>().unwrap(), key);
            }
        }
    }
    let _ = BiadjacencyMatrix::parse_list(s);
    let _ = s.parse::<CanonicalKey>();
    let _ = s.parse::<ColumnSumProfile>();
});
