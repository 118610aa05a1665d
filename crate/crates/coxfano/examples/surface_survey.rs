//! Library usage example: classify surfaces with nontrivial class-group
//! torsion for a range of Picard indices and print their invariants.

use coxfano::enumerate::{classify, ClassifyOptions, TorsionFilter};
use coxfano::invariants::rational_string;

fn main() {
    for mu in 2..=6 {
        let start = std::time::Instant::now();
        let opts = ClassifyOptions {
            torsion_filter: TorsionFilter::NontrivialOnly,
            ..ClassifyOptions::new(2, mu)
        };
        let found = classify(&opts).expect("search fits in the default budget");
        println!(
            "picard index {mu}: {} classes ({:?})",
            found.len(),
            start.elapsed()
        );
        for v in &found {
            println!(
                "  case {} torsion {:?} dX {} iota {} moduli {}",
                v.case_tag,
                v.data.group.torsion(),
                rational_string(&v.invariants.self_intersection),
                v.invariants.gorenstein_index,
                v.moduli_count
            );
        }
    }
}
