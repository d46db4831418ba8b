use plwe_trace::rng::{stream, Stream};
use plwe_trace::stats::chi_square_uniform;
use plwe_trace::subring::rank_mod_q;
use plwe_trace::{AttackParams, NoiseModel, RingContext};

fn small() -> AttackParams {
    AttackParams::search(2, 4, 2, 20, NoiseModel::std_dev(1.0), 0).unwrap().0
}

#[test]
fn uniform_ring_sampler_golden_and_histogram() {
    let ring: RingContext = *small().trace_context().unwrap().ring();
    let first = ring.sample_uniform(&mut stream(1, Stream::Uniform(0)));
    assert_eq!(first.coeffs(), GOLDEN);
    assert_ne!(first, ring.sample_uniform(&mut stream(2, Stream::Uniform(0))));

    let mut rng = stream(17, Stream::Aux(0));
    let mut counts = vec![0u64; 29];
    for _ in 0..12_500 {
        for &c in ring.sample_uniform(&mut rng).coeffs() {
            counts[c as usize] += 1;
        }
    }
    assert_eq!(counts.iter().sum::<u64>(), 100_000);
    let chi = chi_square_uniform(&counts);
    assert!(chi.passes(0.01), "p = {}", chi.p_value);
}

// ChaCha20 seed 1, uniform stream 0, q = 29, N = 8.
const GOLDEN: &[u64] = &[7, 10, 28, 9, 2, 14, 28, 11];

#[test]
fn subring_draws_have_five_free_coordinates() {
    let ctx = small().trace_context().unwrap();
    let mut rng = stream(4, Stream::Aux(1));
    let rows: Vec<Vec<u64>> = (0..40)
        .map(|_| {
            let a = ctx.sample_uniform_r0(&mut rng);
            assert!(ctx.membership_r0(&a));
            a.into_coeffs()
        })
        .collect();
    assert_eq!(rank_mod_q(&rows, ctx.modulus()), 5);
    assert_eq!(ctx.subring_dimension(), 5);
}

#[test]
fn reduced_components_are_uniform() {
    let ctx = small().trace_context().unwrap();
    let mut counts = vec![vec![0u64; 29]; 2];
    for i in 0..50_000 {
        let r = ctx.reduce_sample(&ctx.uniform_oracle(3, i));
        for (k, &c) in r.a.iter().enumerate() {
            counts[k][c as usize] += 1;
        }
    }
    for c in counts {
        assert!(chi_square_uniform(&c).passes(0.01));
    }
}
