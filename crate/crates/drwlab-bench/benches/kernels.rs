//! Timings of the exact-arithmetic kernels: Witt multiplication, normal-form
//! products, window-space construction, and the duality driver.

use drwlab_bench::bench;
use drwlab_core::duality;
use drwlab_core::filtration::{self, FilKind, FiltrationId};
use drwlab_core::linalg::WindowSpec;
use drwlab_core::modulus;
use drwlab_core::sample::Rng;
use drwlab_core::witt::{FpLaurentRing, WittOps};
use drwlab_core::PrimeContext;

fn main() {
    let ctx3 = PrimeContext::new(2, 3).unwrap();
    let mut rng = Rng::new(42);

    let ring = FpLaurentRing { p: 2 };
    let ops = WittOps::new(&ring, 2);
    let a = rng.witt_vector(&ctx3, 3, -6, 6);
    let b = rng.witt_vector(&ctx3, 3, -6, 6);
    bench("witt mul (p=2, n=3, sparse laurent)", 2000, || ops.mul(&a, &b).unwrap());

    let x = rng.nf0(&ctx3, 4, -10, 10);
    let y = rng.nf0(&ctx3, 4, -10, 10);
    let w = rng.nf1(&ctx3, 4, -10, 10);
    bench("normal-form mul 0x0 (p=2, n=3)", 20000, || x.mul(&y));
    bench("normal-form mul 0x1 (p=2, n=3)", 20000, || x.mul_form(&w));
    bench("decompose(recompose) roundtrip", 2000, || {
        drwlab_core::forms::NormalForm0::decompose(ctx3, &x.recompose())
    });

    let window = WindowSpec::new(1, -24, 24);
    bench("FilP window space (p=2, n=3, r=6)", 200, || {
        filtration::window_space(&FiltrationId { kind: FilKind::FilP, r: 6, q: 1, ctx: ctx3 }, window)
            .unwrap()
    });
    bench("zero space (p=2, n=3, r=6)", 50, || {
        modulus::zero_space(ctx3, 1, 6, window).unwrap()
    });
    bench("conductor of a deep pole", 50, || {
        let v = drwlab_core::forms::NormalForm0::teich_monomial(PrimeContext::new(2, 1).unwrap(), 1, -6)
            .v()
            .unwrap()
            .v()
            .unwrap();
        filtration::conductor(&drwlab_core::forms::Form::Zero(v))
    });
    bench("local duality driver (p=2, n=2, r=3)", 20, || {
        let ctx = PrimeContext::new(2, 2).unwrap();
        duality::verify_local_duality(ctx, 3, WindowSpec::new(1, -11, 13)).unwrap()
    });
}
