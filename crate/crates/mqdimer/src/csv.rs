//! Sweep output as CSV.

use std::io::{self, Write};

use mqdimer_core::sweep::SweepRow;

pub const HEADER: &str = "tau,J0_analytic,J2_analytic,J0_sim,J2_sim,source";

/// Writes the header and one line per row. Numbers carry 15 significant
/// digits.
pub fn write_rows<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{}",
            r.tau(),
            r.analytic.j0,
            r.analytic.j2(),
            r.simulated.j0,
            r.simulated.j2(),
            r.simulated.source
        )?;
    }
    w.flush()
}

pub fn to_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
