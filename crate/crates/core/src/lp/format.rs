use std::fmt::Write;

use super::{LinearProgram, Relation};

/// Renders the program in CPLEX LP text format.
pub fn to_lp_format(lp: &LinearProgram) -> String {
    let name = |j: usize| match &lp.names {
        Some(names) => names[j].clone(),
        None => format!("x{j}"),
    };
    let terms = |coeffs: &[f64]| {
        let parts: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| format!("{} {} {}", if *c < 0.0 { "-" } else { "+" }, c.abs(), name(j)))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "Maximize\n obj: {}", terms(&lp.objective));
    out.push_str("Subject To\n");
    for (i, row) in lp.constraints.iter().enumerate() {
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " c{i}: {} {rel} {}", terms(&row.coefficients), row.rhs);
    }
    out.push_str("Bounds\n");
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if hi.is_finite() {
            let _ = writeln!(out, " {lo} <= {} <= {hi}", name(j));
        } else {
            let _ = writeln!(out, " {} >= {lo}", name(j));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_sections() {
        let mut lp = LinearProgram::new(vec![1.0, -2.0]);
        lp.bounds = vec![(0.0, 1.0), (0.0, f64::INFINITY)];
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 3.0);
        let text = to_lp_format(&lp);
        assert!(text.starts_with("Maximize\n obj: + 1 x0 - 2 x1\n"));
        assert!(text.contains(" c0: + 1 x0 + 1 x1 <= 3\n"));
        assert!(text.contains(" 0 <= x0 <= 1\n"));
        assert!(text.contains(" x1 >= 0\n"));
        assert!(text.ends_with("End\n"));
    }
}
