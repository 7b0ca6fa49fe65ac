//! SVG rendering of packings. The one place exact values become decimals;
//! the decimals are emitted with 12 significant digits and are never read
//! back.

use std::fmt::Write;

use blpack::packing::Packing;
use blpack::rational::Rational;

fn sig12(value: &Rational) -> String {
    let v = value.to_f64();
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 17) as usize;
    let mut text = format!("{v:.decimals$}");
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    text
}

/// One rectangle per item at 1:1 aspect, strip boundary drawn, y flipped so
/// the strip bottom sits at the bottom of the image.
pub fn render_svg(packing: &Packing) -> String {
    let width = packing.instance().width();
    let height = packing.height();
    let h = if height.is_zero() {
        Rational::one()
    } else {
        height.clone()
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" \
         preserveAspectRatio=\"xMidYMid meet\">",
        sig12(width),
        sig12(&h)
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\" \
         stroke=\"black\" stroke-width=\"0.02\"/>",
        sig12(width),
        sig12(&h)
    );
    for placement in packing.placements() {
        let item = packing.instance().item(placement.id);
        let top = &placement.y + &item.height;
        let y_flipped = &h - &top;
        let _ = writeln!(
            svg,
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" \
             fill=\"#7aa6d6\" fill-opacity=\"0.8\" stroke=\"#1f3a5f\" stroke-width=\"0.02\">\
             <title>item {}</title></rect>",
            sig12(&placement.x),
            sig12(&y_flipped),
            sig12(&item.width),
            sig12(&item.height),
            placement.id
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use blpack::instance::Instance;
    use blpack::packing::Placement;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(&Rational::new(1, 3)), "0.333333333333");
        assert_eq!(sig12(&Rational::new(3263, 544)), "5.99816176471");
        assert_eq!(sig12(&Rational::from_int(7)), "7");
        assert_eq!(sig12(&Rational::zero()), "0");
    }

    #[test]
    fn empty_packing_renders_outline_only() {
        let inst = Instance::new(Rational::from_int(5), vec![]).unwrap();
        let packing = Packing::new(inst, vec![]).unwrap();
        let svg = render_svg(&packing);
        assert_eq!(svg.matches("<rect").count(), 1);
    }

    #[test]
    fn one_rect_per_item() {
        let inst = Instance::new(
            Rational::from_int(7),
            vec![
                (Rational::from_int(3), Rational::from_int(2)),
                (Rational::from_int(2), Rational::from_int(1)),
            ],
        )
        .unwrap();
        let packing = Packing::new(
            inst,
            vec![
                Placement {
                    id: 0,
                    x: Rational::zero(),
                    y: Rational::zero(),
                },
                Placement {
                    id: 1,
                    x: Rational::from_int(3),
                    y: Rational::zero(),
                },
            ],
        )
        .unwrap();
        let svg = render_svg(&packing);
        assert_eq!(svg.matches("<rect").count(), 3);
        assert!(svg.contains("viewBox=\"0 0 7 2\""));
    }
}
