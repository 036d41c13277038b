use cayley_bruhat::{CMatrix, C64};

/// Rounds to 12 significant digits and prints the shortest representation.
pub fn real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    let s = rounded.to_string();
    if s.len() > 16 {
        format!("{rounded:e}")
    } else {
        s
    }
}

pub fn complex(z: C64) -> String {
    if z.im == 0.0 {
        return real(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", real(z.re), real(z.im.abs()))
}

pub fn matrix(m: &CMatrix) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().into_iter().map(|r| r.into_iter().map(complex).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn entries(label: &str, v: &[C64]) -> String {
    v.iter().enumerate().map(|(i, z)| format!("{label}[{}] = {}", i + 1, complex(*z))).collect::<Vec<_>>().join("\n")
}
