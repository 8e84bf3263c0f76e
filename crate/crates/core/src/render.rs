//! Focus/weight rendering of single-variable marginals.
//!
//! A cell is `?` for the vacuous belief, `<var> <w>` or `~<var> <w>` for a
//! simple support function, and an explicit `(true, false, unknown)`
//! triple when both polarities carry mass.

use crate::mass::{Marginal, PRUNE_THRESHOLD};

/// Rounds half-up to three decimals. The nudge absorbs representation
/// error so that e.g. `0.995` computed as `0.99499999…` still prints `0.995`.
pub fn round3(x: f64) -> f64 {
    ((x * 1000.0) + 0.5 + 1e-7).floor() / 1000.0
}

pub fn fmt3(x: f64) -> String {
    format!("{:.3}", round3(x))
}

pub fn render_cell(variable: &str, m: &Marginal) -> String {
    let has_true = m.m_true > PRUNE_THRESHOLD;
    let has_false = m.m_false > PRUNE_THRESHOLD;
    match (has_true, has_false) {
        (false, false) => "?".to_owned(),
        (true, false) => format!("{variable} {}", fmt3(m.m_true)),
        (false, true) => format!("~{variable} {}", fmt3(m.m_false)),
        (true, true) => format!("({}, {}, {})", fmt3(m.m_true), fmt3(m.m_false), fmt3(m.m_unknown)),
    }
}

/// Cells joined with ` | `, one per variable.
pub fn render_row<'a>(cells: impl IntoIterator<Item = (&'a str, &'a Marginal)>) -> String {
    cells
        .into_iter()
        .map(|(v, m)| render_cell(v, m))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Reads a rendered cell back into a triple (at rendering precision).
pub fn parse_cell(variable: &str, cell: &str) -> Option<Marginal> {
    let cell = cell.trim();
    if cell == "?" {
        return Some(Marginal::VACUOUS);
    }
    if let Some(inner) = cell.strip_prefix('(').and_then(|c| c.strip_suffix(')')) {
        let parts: Vec<f64> = inner.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
        return match parts[..] {
            [t, f, u] => Some(Marginal::new(t, f, u)),
            _ => None,
        };
    }
    let (focus, weight) = cell.rsplit_once(' ')?;
    let w: f64 = weight.parse().ok()?;
    if focus == variable {
        Some(Marginal::new(w, 0.0, 1.0 - w))
    } else if focus.strip_prefix('~') == Some(variable) {
        Some(Marginal::new(0.0, w, 1.0 - w))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn cells() {
        assert_eq!(render_cell("F", &Marginal::VACUOUS), "?");
        assert_eq!(render_cell("F", &Marginal::new(0.0, 0.95, 0.05)), "~F 0.950");
        assert_eq!(render_cell("S", &Marginal::new(0.0, 1.0 - 0.1 * 0.05, 0.1 * 0.05)), "~S 0.995");
        assert_eq!(render_cell("B", &Marginal::new(1.0, 0.0, 0.0)), "B 1.000");
        assert_eq!(
            render_cell("F", &Marginal::new(0.045 / 0.145, 0.095 / 0.145, 0.005 / 0.145)),
            "(0.310, 0.655, 0.034)"
        );
    }

    #[test]
    fn half_up() {
        assert_eq!(fmt3(0.0005), "0.001");
        assert_eq!(fmt3(0.9995), "1.000");
        assert_eq!(fmt3(0.99949), "0.999");
        assert_eq!(fmt3(1.0), "1.000");
    }

    #[test]
    fn row() {
        let b = Marginal::new(1.0, 0.0, 0.0);
        let f = Marginal::new(0.0, 0.95, 0.05);
        assert_eq!(
            render_row([("B", &b), ("P", &b), ("S", &Marginal::VACUOUS), ("F", &f)]),
            "B 1.000 | P 1.000 | ? | ~F 0.950"
        );
    }

    fn triple() -> impl Strategy<Value = Marginal> {
        (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0usize..4).prop_map(|(a, b, c, zero)| {
            let (a, b) = match zero {
                0 => (0.0, b),
                1 => (a, 0.0),
                2 => (0.0, 0.0),
                _ => (a, b),
            };
            let s = a + b + c;
            if s == 0.0 {
                Marginal::VACUOUS
            } else {
                Marginal::new(a / s, b / s, c / s)
            }
        })
    }

    proptest! {
        #[test]
        fn rendered_cells_parse_back(m in triple()) {
            let cell = render_cell("X", &m);
            let back = parse_cell("X", &cell).unwrap();
            prop_assert!(back.max_deviation(&m) <= 0.0005 + 1e-6, "{cell} vs {m:?}");
        }
    }
}
