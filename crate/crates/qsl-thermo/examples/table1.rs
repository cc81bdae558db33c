//! The six benchmark initial states and their scalar invariants.

use qsl_thermo::qlinalg::{table1_state, TABLE1_REFERENCE};
use qsl_thermo::LogBase;

fn main() {
    println!(
        "{:<6} {:>8} {:>14} {:>9} {:>9} {:>7} {:>9}",
        "state", "rho00", "rho01", "purity", "ref", "l1", "ref"
    );
    for idx in 1..=6 {
        let s = table1_state(idx).unwrap();
        let (purity_ref, l1_ref) = TABLE1_REFERENCE[idx - 1];
        println!(
            "{:<6} {:>8.4} {:>6.3}{:+.3}i {:>9.4} {:>9.3} {:>7.4} {:>9.3}",
            idx,
            s.rho00(),
            s.rho01().re,
            s.rho01().im,
            s.purity(),
            purity_ref,
            s.l1_coherence(),
            l1_ref,
        );
    }

    println!();
    println!("entropy (bits) of each state:");
    for idx in 1..=6 {
        let s = table1_state(idx).unwrap();
        println!("  state {idx}: {:.6}", s.von_neumann_entropy(LogBase::Two));
    }
}
