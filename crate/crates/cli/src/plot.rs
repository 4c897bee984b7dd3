//! SVG and CSV renderings of a PL map.

use std::fmt::Write;

use biorder::rational::{fmt_rational, to_f64};
use biorder::{PLMap, Rational};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Exact breakpoints, one `x,y` row each.
pub fn csv(map: &PLMap) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in map.breakpoints() {
        writeln!(out, "{},{}", fmt_rational(x), fmt_rational(y)).unwrap();
    }
    out
}

/// The diagonal and the graph of `map` over `[lo, hi]` (same range on both
/// axes, clipped to the square).
pub fn svg(map: &PLMap, lo: &Rational, hi: &Rational) -> String {
    let (l, h) = (to_f64(lo), to_f64(hi));
    let span = h - l;
    let px = |v: f64| MARGIN + (v - l) / span * (SIZE - 2.0 * MARGIN);
    let py = |v: f64| SIZE - px(v);
    let mut xs: Vec<Rational> = vec![lo.clone()];
    xs.extend(
        map.breakpoint_xs()
            .iter()
            .filter(|x| *x > lo && *x < hi)
            .cloned(),
    );
    xs.push(hi.clone());
    let points: Vec<String> = xs
        .iter()
        .map(|x| format!("{:.3},{:.3}", px(to_f64(x)), py(to_f64(&map.eval(x)))))
        .collect();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<defs><clipPath id="box"><rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}"/></clipPath></defs>"#,
        w = SIZE - 2.0 * MARGIN
    )
    .unwrap();
    writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="#888"/>"##,
        w = SIZE - 2.0 * MARGIN
    )
    .unwrap();
    writeln!(
        out,
        r##"<line id="diagonal" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#bbb" stroke-dasharray="4 4"/>"##,
        px(l),
        py(l),
        px(h),
        py(h)
    )
    .unwrap();
    if !map.is_identity() {
        writeln!(
            out,
            r##"<polyline id="map" clip-path="url(#box)" fill="none" stroke="#c22" stroke-width="2" points="{}"/>"##,
            points.join(" ")
        )
        .unwrap();
        for (x, y) in map.breakpoints() {
            writeln!(
                out,
                r##"<circle cx="{:.3}" cy="{:.3}" r="3" fill="#c22"><title>({}, {})</title></circle>"##,
                px(to_f64(x)),
                py(to_f64(y)),
                fmt_rational(x),
                fmt_rational(y)
            )
            .unwrap();
        }
    }
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.0}" font-size="12">[{}, {}]</text>"#,
        SIZE - 6.0,
        fmt_rational(lo),
        fmt_rational(hi)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

/// Default range: the breakpoint hull padded by one on each side.
pub fn default_range(map: &PLMap) -> (Rational, Rational) {
    let one = Rational::from_integer(1.into());
    match (map.breakpoint_xs().first(), map.breakpoint_xs().last()) {
        (Some(a), Some(b)) => (a - &one, b + &one),
        _ => (-one.clone(), one),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use biorder::pl::standard_generator;
    use biorder::rational::int;

    #[test]
    fn identity_is_diagonal_only() {
        let id = PLMap::identity();
        assert_eq!(csv(&id), "x,y\n");
        let s = svg(&id, &int(-1), &int(1));
        assert!(s.contains("diagonal"));
        assert!(!s.contains("polyline"));
    }

    #[test]
    fn standard_generator_breakpoints() {
        let g = standard_generator(&int(0));
        assert_eq!(csv(&g), "x,y\n-1/1,-1/2\n0/1,0/1\n");
        let (lo, hi) = default_range(&g);
        assert_eq!((lo, hi), (int(-2), int(1)));
        assert_eq!(svg(&g, &int(-2), &int(1)).matches("<circle").count(), 2);
    }
}
