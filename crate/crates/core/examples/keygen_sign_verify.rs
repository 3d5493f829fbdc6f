// Key generation, signing and verification at the ours-sl2 parameters.
use ntt_dilithium::scheme::{builtin, Dilithium};

fn main() {
    let id = std::env::args().nth(1).unwrap_or_else(|| "ours-sl2".into());
    let set = builtin(&id).expect("built-in parameter set id");
    let scheme = Dilithium::new(set.params).unwrap();

    let kp = scheme.keygen(&[7u8; 32]);
    let msg = b"attack at dawn";
    let (sig, attempts) = scheme.sign_with_attempts(&kp.sk, msg).unwrap();
    println!("{id}: signed after {attempts} attempt(s)");

    assert!(scheme.verify(&kp.pk, msg, &sig));
    assert!(!scheme.verify(&kp.pk, b"attack at dusk", &sig));

    let pk = scheme.encode_public_key(&kp.pk);
    let sig_bytes = scheme.encode_signature(&sig);
    println!("pk {} bytes, sig {} bytes", pk.len(), sig_bytes.len());

    let pk2 = scheme.decode_public_key(&pk).unwrap();
    assert!(scheme.verify_bytes(&pk2, msg, &sig_bytes).unwrap());
}
