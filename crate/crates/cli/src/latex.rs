//! LaTeX renderings laid out like the printed matrices (`\left( \begin{array} ... \right)`).

use fano_qc_core::exact::{BigRat, Monomial};
use fano_qc_core::{DiffOperator, PolyMatrix, QHPoly};
use num_traits::{One, Signed};

fn coefficient(c: &BigRat) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn power(var: &str, e: i64) -> String {
    match e {
        1 => var.to_string(),
        _ => format!("{var}^{{{e}}}"),
    }
}

/// `|c| q^a h^b` with negative `h` powers written as a quotient (`3125q/h`).
fn term(m: Monomial, c: &BigRat) -> String {
    let mut num = String::new();
    let abs = c.abs();
    let bare = m.q == 0 && m.h <= 0;
    if !abs.is_one() || bare {
        num.push_str(&coefficient(&abs));
    }
    if m.q > 0 {
        num.push_str(&power("q", i64::from(m.q)));
    }
    if m.h > 0 {
        num.push_str(&power("h", i64::from(m.h)));
    }
    if m.h < 0 {
        num.push('/');
        num.push_str(&power("h", -i64::from(m.h)));
    }
    num
}

pub fn poly(p: &QHPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        match (idx, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term(m, c));
    }
    out
}

pub fn matrix(m: &PolyMatrix) -> String {
    let cols = "c".repeat(m.dim());
    let mut out = format!("\\left(\n\\begin{{array}}{{{cols}}}\n");
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(poly).collect();
        out.push_str(&cells.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{array}\n\\right)");
    out
}

pub fn operator(op: &DiffOperator) -> String {
    let mut out = String::new();
    for (j, c) in op.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let hd = match j {
            0 => String::new(),
            1 => "(h\\partial)".to_string(),
            _ => format!("(h\\partial)^{{{j}}}"),
        };
        let single = c.as_monomial();
        let negative = single.is_some_and(|(_, v)| v.is_negative());
        if !out.is_empty() {
            out.push_str(if negative { " - " } else { " + " });
        } else if negative {
            out.push('-');
        }
        let body = match single {
            Some((m, v)) if !(m == Monomial::ONE && v.abs().is_one() && j > 0) => term(m, v),
            Some(_) => String::new(),
            None => format!("\\left({}\\right)", poly(c)),
        };
        out.push_str(&body);
        out.push_str(&hd);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_form_for_inverse_h() {
        let p: QHPoly = "3125*q*h^-1".parse().unwrap();
        assert_eq!(poly(&p), "3125q/h");
        let one_over_h: QHPoly = "h^-1".parse().unwrap();
        assert_eq!(poly(&one_over_h), "1/h");
        let mixed: QHPoly = "120*q*h^3 + 757200*q^2*h".parse().unwrap();
        assert_eq!(poly(&mixed), "120qh^{3} + 757200q^{2}h");
        let half: QHPoly = "-1/2*q".parse().unwrap();
        assert_eq!(poly(&half), "-\\frac{1}{2}q");
    }

    #[test]
    fn matrix_layout() {
        let m: PolyMatrix = "[1, 24*q]\n[0, 1]".parse().unwrap();
        assert_eq!(
            matrix(&m),
            "\\left(\n\\begin{array}{cc}\n1 & 24q \\\\\n0 & 1 \\\\\n\\end{array}\n\\right)"
        );
    }

    #[test]
    fn operator_form() {
        let op = DiffOperator::new(vec![
            "-6*q*h^2".parse().unwrap(),
            QHPoly::zero(),
            QHPoly::zero(),
            QHPoly::zero(),
            QHPoly::one(),
        ]);
        assert_eq!(operator(&op), "(h\\partial)^{4} - 6qh^{2}");
    }
}
