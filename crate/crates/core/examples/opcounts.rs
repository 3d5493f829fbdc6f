// Z_q operation counts: NTT on the native modulus, H-NTT otherwise.
use ntt_dilithium::opcounts::{hntt_best, ntt_mul_cost, op_table_column, op_table_csv, MulMethod};
use ntt_dilithium::scheme::builtin;

fn main() {
    let ntt = ntt_mul_cost(512).unwrap();
    println!("ntt, n=512: {} mults, {} adds", ntt.mults, ntt.adds);

    let qrom = builtin("qrom-rec").unwrap().params;
    let ((a, b), h) = hntt_best(512, qrom.q).unwrap();
    println!("h-ntt, n=512, alpha={a} beta={b}: {} mults, {} adds\n", h.mults, h.adds);

    let cols: Vec<_> = [("qrom-rec", MulMethod::Hntt), ("qrom-vh", MulMethod::Hntt), ("ours-rec", MulMethod::Ntt), ("ours-vh", MulMethod::Ntt)]
        .into_iter()
        .map(|(id, m)| op_table_column(&builtin(id).unwrap().params, m).unwrap())
        .collect();
    print!("{}", op_table_csv(&cols));
}
