// Multiply two random elements of Z_q[X]/(X^512 + 1) with the NTT and
// compare against the schoolbook product.
use ntt_dilithium::ring::{schoolbook_mul, RingContext, XofStream};
use ntt_dilithium::scheme::params::Q0;

fn main() {
    let ctx = RingContext::new(Q0, 512).expect("q0 = 1 mod 1024");
    let mut xof = XofStream::new(b"ntt example", b"uniform");
    let a = ctx.sample_uniform(&mut xof).unwrap();
    let b = ctx.sample_uniform(&mut xof).unwrap();

    let fast = ctx.mul(&a, &b).unwrap();
    let slow = schoolbook_mul(a.coeffs(), b.coeffs(), ctx.q());
    assert_eq!(fast.coeffs(), &slow[..]);

    let back = ctx.ntt_inverse(&ctx.ntt_forward(&a).unwrap()).unwrap();
    assert_eq!(back, a);
    println!("root of unity: {}", ctx.root());
    println!("first coefficients of a*b: {:?}", &fast.coeffs()[..4]);
}
