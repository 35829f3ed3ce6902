//! The three bundled groups: `C2*C3` (both factors peripheral), the same
//! group with the extra generator `ab`, and `Z*Z²` with `Z²` peripheral.

use crate::factor::FactorSpec;
use crate::group::{ExtraGenerator, GroupSpec};

pub fn c2c3() -> GroupSpec {
    GroupSpec::new(vec![
        FactorSpec::cyclic("A", 2, "a", true).expect("valid factor"),
        FactorSpec::cyclic("B", 3, "b", true).expect("valid factor"),
    ])
    .expect("valid group")
}

pub fn c2c3_ab() -> GroupSpec {
    let g = c2c3();
    let word = g.parse("a b").expect("valid word");
    g.with_extra_generators(vec![ExtraGenerator { label: "ab".into(), word }])
        .expect("valid generating set")
}

pub fn zxz2() -> GroupSpec {
    GroupSpec::new(vec![
        FactorSpec::infinite_cyclic("T", "t", false).expect("valid factor"),
        FactorSpec::free_abelian2("H", ["u", "v"], true).expect("valid factor"),
    ])
    .expect("valid group")
}
