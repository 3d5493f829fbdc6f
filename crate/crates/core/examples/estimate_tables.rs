// Security estimates for every built-in parameter set, as CSV.
use ntt_dilithium::estimator::{report, reports_to_csv};
use ntt_dilithium::scheme::builtin_sets;

fn main() {
    let reports: Vec<_> = builtin_sets()
        .into_iter()
        .map(|b| {
            let mut r = report(&b.params).unwrap();
            r.table = Some(b.table.label());
            r
        })
        .collect();
    print!("{}", reports_to_csv(&reports));
}
