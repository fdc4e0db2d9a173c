//! Fixed operator batteries used by the invariant suites.

use crate::gauss::{rat, GaussQ};
use crate::poly::Poly;
use crate::symbol::ClassicalSymbol;

/// `c · x^a ξ^b` with rational `c = num/den`.
fn mono(x: &[u32], xi: &[u32], num: i64, den: i64) -> Poly {
    Poly::monomial(x.len(), x, xi, GaussQ::real(rat(num, den)))
}

fn sum(terms: &[Poly]) -> Poly {
    let mut it = terms.iter();
    let first = it.next().expect("nonempty").clone();
    it.fold(first, |acc, t| &acc + t)
}

fn symbol(terms: &[Poly]) -> ClassicalSymbol {
    ClassicalSymbol::from_full(&sum(terms)).expect("battery operators are well formed")
}

/// Ten constant-coefficient elliptic operators, `d ≤ 2`, order `≤ 4`.
pub fn constant_coefficient() -> Vec<(&'static str, ClassicalSymbol)> {
    vec![
        ("xi^2", symbol(&[mono(&[0], &[2], 1, 1)])),
        ("xi^2 + 7/3", symbol(&[mono(&[0], &[2], 1, 1), mono(&[0], &[0], 7, 3)])),
        (
            "xi^2 + xi + 1",
            symbol(&[mono(&[0], &[2], 1, 1), mono(&[0], &[1], 1, 1), mono(&[0], &[0], 1, 1)]),
        ),
        ("xi1^2 + xi2^2", symbol(&[mono(&[0, 0], &[2, 0], 1, 1), mono(&[0, 0], &[0, 2], 1, 1)])),
        (
            "xi1^2 + 4 xi2^2 + xi1 + 3",
            symbol(&[
                mono(&[0, 0], &[2, 0], 1, 1),
                mono(&[0, 0], &[0, 2], 4, 1),
                mono(&[0, 0], &[1, 0], 1, 1),
                mono(&[0, 0], &[0, 0], 3, 1),
            ]),
        ),
        (
            "xi^4 + xi^2 + 1",
            symbol(&[mono(&[0], &[4], 1, 1), mono(&[0], &[2], 1, 1), mono(&[0], &[0], 1, 1)]),
        ),
        (
            "xi1^4 + xi2^4 + xi1^2 xi2 + 2",
            symbol(&[
                mono(&[0, 0], &[4, 0], 1, 1),
                mono(&[0, 0], &[0, 4], 1, 1),
                mono(&[0, 0], &[2, 1], 1, 1),
                mono(&[0, 0], &[0, 0], 2, 1),
            ]),
        ),
        (
            "(xi1^2 + xi2^2)^2 + xi1^3 + 5",
            symbol(&[
                mono(&[0, 0], &[4, 0], 1, 1),
                mono(&[0, 0], &[2, 2], 2, 1),
                mono(&[0, 0], &[0, 4], 1, 1),
                mono(&[0, 0], &[3, 0], 1, 1),
                mono(&[0, 0], &[0, 0], 5, 1),
            ]),
        ),
        (
            "xi1^2 + xi1 xi2 + xi2^2 + xi2 + 1/2",
            symbol(&[
                mono(&[0, 0], &[2, 0], 1, 1),
                mono(&[0, 0], &[1, 1], 1, 1),
                mono(&[0, 0], &[0, 2], 1, 1),
                mono(&[0, 0], &[0, 1], 1, 1),
                mono(&[0, 0], &[0, 0], 1, 2),
            ]),
        ),
        (
            "xi^4 + 2 xi^3 + 3",
            symbol(&[mono(&[0], &[4], 1, 1), mono(&[0], &[3], 2, 1), mono(&[0], &[0], 3, 1)]),
        ),
    ]
}

/// Five operators with polynomial coefficients; together they exercise
/// x-dependent principal parts, lower-order parts of every degree, and mixed
/// derivatives in two variables.
pub fn variable_coefficient() -> Vec<(&'static str, ClassicalSymbol)> {
    vec![
        ("(1 + x^2) xi^2", symbol(&[mono(&[0], &[2], 1, 1), mono(&[2], &[2], 1, 1)])),
        (
            "(1 + x^2) xi^2 + x xi + 1",
            symbol(&[
                mono(&[0], &[2], 1, 1),
                mono(&[2], &[2], 1, 1),
                mono(&[1], &[1], 1, 1),
                mono(&[0], &[0], 1, 1),
            ]),
        ),
        (
            "(2 + x1^2) xi1^2 + (1 + x2^2) xi2^2 + x1 xi2 + x2",
            symbol(&[
                mono(&[0, 0], &[2, 0], 2, 1),
                mono(&[2, 0], &[2, 0], 1, 1),
                mono(&[0, 0], &[0, 2], 1, 1),
                mono(&[0, 2], &[0, 2], 1, 1),
                mono(&[1, 0], &[0, 1], 1, 1),
                mono(&[0, 1], &[0, 0], 1, 1),
            ]),
        ),
        (
            "xi1^2 + x1 xi1 xi2 / 4 + xi2^2 + x2 xi1 + 3",
            symbol(&[
                mono(&[0, 0], &[2, 0], 1, 1),
                mono(&[1, 0], &[1, 1], 1, 4),
                mono(&[0, 0], &[0, 2], 1, 1),
                mono(&[0, 1], &[1, 0], 1, 1),
                mono(&[0, 0], &[0, 0], 3, 1),
            ]),
        ),
        (
            "(1 + x^2) xi^4 + x xi^3 + xi^2 + x",
            symbol(&[
                mono(&[0], &[4], 1, 1),
                mono(&[2], &[4], 1, 1),
                mono(&[1], &[3], 1, 1),
                mono(&[0], &[2], 1, 1),
                mono(&[1], &[0], 1, 1),
            ]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batteries_are_well_formed() {
        let c = constant_coefficient();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|(_, p)| p.is_constant_coefficient() && p.dim() <= 2 && p.order() <= 4));
        let v = variable_coefficient();
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|(_, p)| !p.is_constant_coefficient()));
    }
}
