use crate::field::FieldElem;
use crate::poly::{Monomial, Poly};

/// `x0^2*x1`; the empty string for the unit monomial.
pub fn print_monomial(m: &Monomial, nvars: usize) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps(nvars).iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{i}")),
            _ => parts.push(format!("x{i}^{e}")),
        }
    }
    parts.join("*")
}

fn print_term(c: &FieldElem, m: &Monomial, nvars: usize) -> String {
    let mono = print_monomial(m, nvars);
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        mono
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

/// Canonical text: descending graded-lex terms, reduced fractions, no spaces.
pub fn print_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().iter().enumerate() {
        let t = print_term(c, m, f.nvars());
        if k > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_io::parse_poly;
    use crate::field::Field;

    #[test]
    fn canonical_order() {
        let f = parse_poly("x1*x2 + x0*x2", 3, Field::Q).unwrap();
        assert_eq!(print_poly(&f), "x0*x2+x1*x2");
        assert_eq!(print_poly(&Poly::zero(3, Field::Q)), "0");
        let g = parse_poly("-1/2*x0^2 + 3 - x1", 2, Field::Q).unwrap();
        assert_eq!(print_poly(&g), "-1/2*x0^2-x1+3");
    }

    #[test]
    fn omega_coefficients_round_trip() {
        for src in ["w*x0-w*x1+(1-2*w)*x0*x1", "(1/3+w)", "-w", "2*w*x1^3-(5)"] {
            let f = parse_poly(src, 2, Field::QOmega).unwrap();
            let back = parse_poly(&print_poly(&f), 2, Field::QOmega).unwrap();
            assert_eq!(f, back, "{src}");
        }
    }
}
