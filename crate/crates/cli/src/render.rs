//! Plot emission for the Bloch construction: a 2-D cross-section through the
//! plane of `C₀`, `A` and `B` (the whole construction is planar) as SVG 1.1,
//! and the named point table as RFC 4180 CSV.

use effectkit::bloch::{BlochPoint, InternalCoupleConstruction, CENTRE, RADIUS};

const SIZE: f64 = 640.0;
const SCALE: f64 = 480.0;

/// Orthonormal in-plane basis spanning the section through the given points.
fn plane_basis(points: &[BlochPoint]) -> ([f64; 3], [f64; 3]) {
    let rel: Vec<[f64; 3]> = points
        .iter()
        .map(|p| [p.x - CENTRE.x, p.y - CENTRE.y, p.z - CENTRE.z])
        .collect();
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let e1 = rel
        .iter()
        .copied()
        .find(|v| norm(*v) > 1e-12)
        .unwrap_or([1.0, 0.0, 0.0]);
    let n1 = norm(e1);
    let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];

    let mut e2 = [0.0_f64; 3];
    for v in &rel {
        let proj = v[0] * e1[0] + v[1] * e1[1] + v[2] * e1[2];
        let perp = [v[0] - proj * e1[0], v[1] - proj * e1[1], v[2] - proj * e1[2]];
        if norm(perp) > 1e-9 {
            let n2 = norm(perp);
            e2 = [perp[0] / n2, perp[1] / n2, perp[2] / n2];
            break;
        }
    }
    if norm(e2) == 0.0 {
        // Collinear input: any perpendicular direction completes the plane.
        e2 = if e1[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let proj = e2[0] * e1[0] + e2[1] * e1[1] + e2[2] * e1[2];
        let perp = [e2[0] - proj * e1[0], e2[1] - proj * e1[1], e2[2] - proj * e1[2]];
        let n2 = norm(perp);
        e2 = [perp[0] / n2, perp[1] / n2, perp[2] / n2];
    }
    (e1, e2)
}

struct Frame {
    e1: [f64; 3],
    e2: [f64; 3],
}

impl Frame {
    fn project(&self, p: BlochPoint) -> (f64, f64) {
        let v = [p.x - CENTRE.x, p.y - CENTRE.y, p.z - CENTRE.z];
        let u = v[0] * self.e1[0] + v[1] * self.e1[1] + v[2] * self.e1[2];
        let w = v[0] * self.e2[0] + v[1] * self.e2[1] + v[2] * self.e2[2];
        (SIZE / 2.0 + SCALE * u, SIZE / 2.0 - SCALE * w)
    }
}

fn svg_open(out: &mut String) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn svg_circle(out: &mut String, cx: f64, cy: f64, r: f64, stroke: &str) {
    out.push_str(&format!(
        "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.2\"/>\n"
    ));
}

fn svg_line(out: &mut String, a: (f64, f64), b: (f64, f64), stroke: &str) {
    out.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{stroke}\" stroke-width=\"1.0\"/>\n",
        a.0, a.1, b.0, b.1
    ));
}

fn svg_point(out: &mut String, pos: (f64, f64), label: &str) {
    let text = label.replace('\'', "&#8242;");
    out.push_str(&format!(
        "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"black\"/>\n",
        pos.0, pos.1
    ));
    out.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" font-family=\"serif\">{text}</text>\n",
        pos.0 + 5.0,
        pos.1 - 5.0
    ));
}

/// Scene for a bare point set (classification mode).
pub fn svg_points(points: &[(String, BlochPoint)]) -> String {
    let coords: Vec<BlochPoint> = points.iter().map(|(_, p)| *p).collect();
    let (e1, e2) = plane_basis(&coords);
    let frame = Frame { e1, e2 };
    let mut out = String::new();
    svg_open(&mut out);
    let c0 = frame.project(CENTRE);
    svg_circle(&mut out, c0.0, c0.1, RADIUS * SCALE, "black");
    svg_point(&mut out, c0, "C0");
    for (name, p) in points {
        svg_point(&mut out, frame.project(*p), name);
    }
    out.push_str("</svg>\n");
    out
}

/// Full construction scene: the Bloch section, the diameter sphere, the
/// inner sphere, the axis and the chords, with every named point labeled and
/// the derived λ annotated.
pub fn svg_construction(cons: &InternalCoupleConstruction) -> String {
    let (e1, e2) = plane_basis(&[cons.a, cons.b]);
    let frame = Frame { e1, e2 };
    let mut out = String::new();
    svg_open(&mut out);

    let c0 = frame.project(CENTRE);
    svg_circle(&mut out, c0.0, c0.1, RADIUS * SCALE, "black");
    let m = frame.project(cons.m);
    svg_circle(&mut out, m.0, m.1, 0.5 * cons.a.dist(cons.b) * SCALE, "#666666");
    let m1 = frame.project(cons.m1);
    svg_circle(&mut out, m1.0, m1.1, 0.5 * cons.p.dist(cons.m0) * SCALE, "#999999");

    svg_line(&mut out, frame.project(cons.p), frame.project(cons.p_prime), "#444444");
    svg_line(&mut out, frame.project(cons.a), frame.project(cons.b), "#3355bb");
    svg_line(&mut out, frame.project(cons.m0), frame.project(cons.a1), "#777777");
    svg_line(&mut out, frame.project(cons.m0), frame.project(cons.b1), "#777777");
    svg_line(&mut out, frame.project(cons.p), frame.project(cons.q), "#bb5533");
    svg_line(&mut out, frame.project(cons.p), frame.project(cons.q_prime), "#bb5533");
    svg_line(&mut out, frame.project(cons.a1), frame.project(cons.b1), "#777777");

    for (name, pt) in cons.named_points() {
        svg_point(&mut out, frame.project(pt), name);
    }
    out.push_str(&format!(
        "  <text x=\"20\" y=\"30\" font-size=\"16\" font-family=\"serif\">&#955; = {}</text>\n",
        cons.lambda
    ));
    out.push_str("</svg>\n");
    out
}

/// RFC 4180 CSV of named points (CRLF separators, header row).
pub fn csv_points(points: &[(String, BlochPoint)]) -> String {
    let mut out = String::from("name,x,y,z\r\n");
    for (name, p) in points {
        out.push_str(&format!("{},{},{},{}\r\n", name, p.x, p.y, p.z));
    }
    out
}
