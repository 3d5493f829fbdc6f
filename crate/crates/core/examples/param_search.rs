// Smallest parameter set matching the original SL2 Core-SVP values.
// A narrow grid keeps this quick; widen the ranges for a full search.
use ntt_dilithium::estimator::{search, AttackModel, SearchSpace, Targets};

fn main() {
    let model = AttackModel::default();
    let mut space = SearchSpace::standard(2, Targets::dilithium_match(2).unwrap());
    space.k_range = 8..=12;
    space.l_range = 3..=6;
    match search(&space, &model) {
        Ok((p, r)) => {
            println!("{}", p.to_json());
            println!(
                "pk {} B, sig {} B, repeats {:.2}, lwe {} stmsis {:?} sis {:?}",
                r.pk_bytes, r.sig_bytes, r.repeats, r.lwe_coresvp, r.stmsis_coresvp, r.sis_coresvp
            );
        }
        Err(e) => println!("no set found: {e}"),
    }
}
