// Toy-scale checks of the rounding, uniformity and NTT lemmas.
use ntt_dilithium::lemma_lab::{
    p_t_bruteforce, p_t_exact, primitive_sum_check, uniformity_check, RoundingSpec,
};
use ntt_dilithium::ring::RingContext;

fn main() {
    let spec = RoundingSpec::new(17, 4).unwrap();
    let exact = p_t_exact(&spec).unwrap();
    assert_eq!(exact, p_t_bruteforce(&spec).unwrap());
    println!("p_t(q=17, t=4) = {exact}");

    let ctx = RingContext::new(17, 4).unwrap();
    let delta = std::iter::once(ctx.element(vec![1, 1, 0, 0]).unwrap()).collect();
    let r = uniformity_check(&ctx, 1, &delta, 2).unwrap();
    println!("(b*(1+X))_2 uniform: {} (each value {} times)", r.passed, r.expected_count);

    let c = primitive_sum_check(17, 4);
    println!("{}: {} ({})", c.name, c.passed, c.detail);
}
