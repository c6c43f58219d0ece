mod common;

use gmcp_core::{parse_instance, serialize_instance, validate};
use proptest::prelude::*;

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(inst in common::instance(8, 20)) {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(inst in common::instance(5, 6)) {
        let text = serialize_instance(&inst);
        let noisy: String = text
            .lines()
            .flat_map(|l| ["c noise", "", l])
            .map(|l| format!("{l}\n"))
            .collect();
        prop_assert_eq!(parse_instance(&noisy).unwrap(), inst);
    }

    #[test]
    fn generated_strategy_is_valid(inst in common::instance(6, 10)) {
        prop_assert!(validate(&inst).is_empty());
    }
}

#[test]
fn file_with_crlf_line_endings() {
    let inst = parse_instance("p gmcp 2 1 1 2\r\na 1 2 10 0.5\r\n").unwrap();
    assert_eq!(inst.arc_count(), 1);
}
