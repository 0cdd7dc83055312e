//! The bundled regression corpus.

use crate::instance::{parse_instance, InstanceFile};

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Known counts on `I1 u I2`, by class label.
    pub expected_counts: &'static [(&'static str, u64)],
    pub expected_o_kappa: Option<i64>,
}

impl CorpusEntry {
    pub fn instance(&self) -> InstanceFile {
        parse_instance(self.text).expect("corpus instances are well formed")
    }
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "NODE3",
        text: include_str!("../corpus/node3.json"),
        expected_counts: &[("0,0", 1), ("1,1", 4), ("0,1", 0), ("1,0", 0)],
        expected_o_kappa: Some(-3),
    },
    CorpusEntry {
        name: "NODE5",
        text: include_str!("../corpus/node5.json"),
        expected_counts: &[("0,0", 1), ("1,1", 6), ("0,1", 0), ("1,0", 0)],
        expected_o_kappa: Some(-5),
    },
    CorpusEntry { name: "TAC3", text: include_str!("../corpus/tac3.json"), expected_counts: &[], expected_o_kappa: Some(9) },
    CorpusEntry {
        name: "SPLITMAX",
        text: include_str!("../corpus/splitmax.json"),
        expected_counts: &[("0,0", 1), ("1,1", 0)],
        expected_o_kappa: Some(1),
    },
    CorpusEntry { name: "RAMU2", text: include_str!("../corpus/ramu2.json"), expected_counts: &[], expected_o_kappa: None },
    CorpusEntry { name: "CUSP3", text: include_str!("../corpus/cusp3.json"), expected_counts: &[], expected_o_kappa: None },
    CorpusEntry { name: "TRIPLE5", text: include_str!("../corpus/triple5.json"), expected_counts: &[], expected_o_kappa: None },
    CorpusEntry { name: "UNRAM5", text: include_str!("../corpus/unram5.json"), expected_counts: &[], expected_o_kappa: None },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_parse_and_round_trip() {
        assert!(CORPUS.len() >= 7);
        for e in CORPUS {
            let inst = e.instance();
            assert!(inst.partition().is_ok(), "{}", e.name);
            assert_eq!(parse_instance(&inst.emit()).unwrap(), inst);
            inst.datum(None).unwrap();
        }
        assert!(find("node3").is_some());
    }
}
