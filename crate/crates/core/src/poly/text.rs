use super::{Polynomial, VariableLayout};

impl Polynomial {
    /// Canonical text: decreasing lex terms, `*` between factors, `^` for
    /// powers, frozen factors printed before unfrozen ones.
    pub fn to_text(&self, layout: &VariableLayout) -> String {
        assert_eq!(layout.nvars(), self.nvars(), "layout does not match polynomial");
        let names: Vec<String> = (0..layout.nvars()).map(|s| layout.name(s)).collect();
        render(self, &names, &layout.print_order())
    }
}

pub(super) fn render(f: &Polynomial, names: &[String], order: &[usize]) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in f.terms().iter().enumerate() {
        let neg = t.coeff.is_negative();
        if neg {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let mag = t.coeff.magnitude_string();
        let mut factors: Vec<String> = Vec::new();
        if mag != "1" || t.monomial.is_one() {
            factors.push(mag);
        }
        for &s in order {
            match t.monomial.exponent(s) {
                0 => {}
                1 => factors.push(names[s].clone()),
                e => factors.push(format!("{}^{}", names[s], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
