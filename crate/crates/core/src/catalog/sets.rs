use num_traits::{One, Zero};

use super::CatalogError;
use crate::{Poly, Rational};

/// Named parameter sets understood by set-membership constraints.
pub const SET_NAMES: [&str; 5] = ["k2-minus-T", "V", "k-star-gt-1", "k-geq-0", "U"];

fn arity(set: &str) -> usize {
    match set {
        "k2-minus-T" | "U" => 2,
        "V" => 4,
        _ => 1,
    }
}

/// Inequations equivalent to membership over Q.
///
/// k-geq-0 and U are sets of orbit representatives; over Q they impose nothing.
pub fn expand_set(set: &str, args: &[Poly]) -> Result<Vec<Poly>, CatalogError> {
    if !SET_NAMES.contains(&set) {
        return Err(CatalogError::UnknownSet(set.to_string()));
    }
    if args.len() != arity(set) {
        return Err(CatalogError::SetArity {
            set: set.to_string(),
            expected: arity(set),
            found: args.len(),
        });
    }
    let one = Poly::one();
    Ok(match set {
        "k2-minus-T" => vec![&(&args[0] + &args[1]) - &one],
        "V" => {
            let (a, b, c, d) = (&args[0], &args[1], &args[2], &args[3]);
            let big_d = &(&(a + c) * &(b + d)) - &one;
            vec![big_d, &(b + d) - &one, &(c + a) - &one]
        }
        "k-star-gt-1" => vec![args[0].clone(), &args[0] - &one],
        _ => Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValues {
    pub d: Rational,
    pub c1: (Rational, Rational),
    pub c2: (Rational, Rational),
    pub c3: (Rational, Rational),
}

/// D, C1, C2, C3 at a point (alpha, beta, gamma, delta).
pub fn gamma_functions(g: [&Rational; 4]) -> Result<GammaValues, CatalogError> {
    let [a, b, c, d] = g;
    let one = Rational::one();
    let big_d = (a + c) * (b + d) - &one;
    if big_d.is_zero() {
        return Err(CatalogError::DegenerateGamma);
    }
    let c3 = (
        (b * c - (a - &one) * (d - &one)) / &big_d,
        (a * d - (b - &one) * (c - &one)) / &big_d,
    );
    Ok(GammaValues {
        d: big_d,
        c1: (b.clone(), d.clone()),
        c2: (c.clone(), a.clone()),
        c3,
    })
}
