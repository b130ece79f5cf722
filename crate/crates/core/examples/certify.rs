//! Certificates for the constructed instances, plus one tampered instance.
use num_bigint::BigInt;
use odoni::arith::Rational;
use odoni::certify::{certify, CertifyOptions};
use odoni::construct::build_params;

fn main() -> odoni::Result<()> {
    let opts = CertifyOptions::default();
    for d in 2..=7 {
        let cert = certify(&build_params(d)?, &opts)?;
        let bits: Vec<u64> = cert.records.iter().map(|r| r.f_n_bits).collect();
        println!("d={d}: {:?} to depth {}, F_n bits {bits:?}", cert.verdict, cert.depth);
    }

    let d2 = certify(&build_params(2)?, &CertifyOptions { depth: 1, ..opts.clone() })?;
    let r = &d2.records[0];
    println!("d=2 F_1 = {} (q: {:?})", r.f_n.value.as_deref().unwrap_or("?"), r.exhibited_q.as_ref().and_then(|q| q.q.clone()));

    let mut bad = build_params(4)?;
    bad.b *= Rational::from_integer(BigInt::from(bad.p2));
    let cert = certify(&bad, &opts)?;
    println!("tampered b: {:?}, first failure {:?}", cert.verdict, cert.first_failure);
    Ok(())
}
