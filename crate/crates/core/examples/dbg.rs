use bolab::*;
use bolab::soliton::*;

fn l1_apply(v: &RealField, q: &RealField) -> RealField {
    // L1 = -H d/dx + 1 - 2Q at c=1
    v.derivative(1).hilbert().scaled(-1.0)
        .add(v).unwrap()
        .sub(&q.mul(v).unwrap().scaled(2.0)).unwrap()
}

fn main() {
    let grid = Grid::new(256.0, 4096).unwrap();
    let q = one_soliton(1.0, 0.0, 0.0, grid).unwrap();
    let amp = (2.0/std::f64::consts::PI).sqrt();
    for lambda in [0.7, 1.0, 2.3] {
        // candidate A: printed, Mobius^1
        let a = RealField::from_fn(grid, |x| {
            amp*((x*x-1.0)*(lambda*x).cos() + 2.0*x*(lambda*x).sin())/(x*x+1.0)
        });
        // candidate B: Mobius^2 (from the 2Q scalar reduction)
        let b = RealField::from_fn(grid, |x| {
            let d = x*x+1.0;
            amp*((x.powi(4)-6.0*x*x+1.0)*(lambda*x).cos() + 4.0*x*(x*x-1.0)*(lambda*x).sin())/(d*d)
        });
        for (name, eta) in [("Mobius1", &a), ("Mobius2", &b)] {
            let r = l1_apply(eta, &q).axpy(-(1.0+lambda), eta).unwrap();
            // interior residual
            let m = r.values()[1024..3072].iter().fold(0.0f64, |acc,v| acc.max(v.abs()));
            println!("lambda={lambda}: {name} residual (interior) = {m:.3e}");
        }
    }
}
