//! Knot and link invariants checked against independent oracles: explicit
//! space curves, a hand-written planar-diagram state sum and known Jones
//! polynomials.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use paperband::knot::{
    alexander_determinant, bracket, determinant, knot_summary, linking_number, simplify, trefoil_bracket, GaussCode,
    Laurent, Verdict,
};
use paperband::{crossing_diagram, Component, Error, SpaceCurve, Tolerance, Vec3};

fn circle(c: Vec3, u: Vec3, v: Vec3, r: f64, n: usize, comp: Component) -> SpaceCurve {
    let points = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            c + u * (r * t.cos()) + v * (r * t.sin())
        })
        .collect();
    SpaceCurve { component: comp, points }
}

/// (2,3) torus knot on a torus of radii 2 and 0.8.
fn trefoil_curve(n: usize) -> SpaceCurve {
    let points = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            let r = 2.0 + 0.8 * (3.0 * t).cos();
            Vec3::new(r * (2.0 * t).cos(), r * (2.0 * t).sin(), 0.8 * (3.0 * t).sin())
        })
        .collect();
    SpaceCurve { component: Component::Boundary, points }
}

#[test]
fn hopf_link_has_two_equal_crossings() {
    let tol = Tolerance::default();
    let a = circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 40, Component::Boundary);
    let b = circle(Vec3::new(1.0, 0.0, 0.0), Vec3::x(), Vec3::z(), 1.0, 40, Component::Midline);
    for seed in 0..5 {
        let d = crossing_diagram(&[a.clone(), b.clone()], seed, &tol).unwrap();
        let signs: Vec<i64> = d.inter_component_signs(0, 1).collect();
        assert_eq!(signs.len(), 2);
        assert_eq!(signs[0], signs[1]);
        assert_eq!(linking_number(&d, 0, 1).unwrap().abs(), 1);
    }
}

#[test]
fn hopf_link_sign_follows_orientation() {
    let tol = Tolerance::default();
    let a = circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 40, Component::Boundary);
    let b = circle(Vec3::new(1.0, 0.0, 0.0), Vec3::x(), Vec3::z(), 1.0, 40, Component::Midline);
    let d = crossing_diagram(&[a.clone(), b.clone()], 0, &tol).unwrap();
    let r = crossing_diagram(&[a, b.reversed()], 0, &tol).unwrap();
    assert_eq!(linking_number(&d, 0, 1).unwrap(), -linking_number(&r, 0, 1).unwrap());
}

#[test]
fn far_circles_do_not_link() {
    let tol = Tolerance::default();
    let a = circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 30, Component::Boundary);
    let b = circle(Vec3::new(10.0, 0.0, 0.0), Vec3::x(), Vec3::y(), 1.0, 30, Component::Midline);
    let d = crossing_diagram(&[a, b], 0, &tol).unwrap();
    assert!(d.crossings.is_empty());
    assert_eq!(linking_number(&d, 0, 1).unwrap(), 0);
}

#[test]
fn odd_crossing_sum_is_rejected() {
    let tol = Tolerance::default();
    let a = circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 40, Component::Boundary);
    let b = circle(Vec3::new(1.0, 0.0, 0.0), Vec3::x(), Vec3::z(), 1.0, 40, Component::Midline);
    let mut d = crossing_diagram(&[a, b], 0, &tol).unwrap();
    d.crossings.pop();
    assert!(matches!(linking_number(&d, 0, 1), Err(Error::OddCrossingSum(_))));
}

#[test]
fn torus_trefoil_is_a_trefoil() {
    let tol = Tolerance::default();
    let d = crossing_diagram(&[trefoil_curve(120)], 3, &tol).unwrap();
    let code = GaussCode::of_component(&d, 0);
    let s = knot_summary(&code).unwrap();
    assert_eq!(s.determinant, 3);
    assert_eq!(s.alexander_determinant, 3);
    assert_eq!(s.reduced.crossing_count(), 3);
    assert_eq!(s.verdict, Verdict::TrefoilConsistent);
}

#[test]
fn round_circle_is_an_unknot() {
    let tol = Tolerance::default();
    let c = circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 50, Component::Boundary);
    let d = crossing_diagram(&[c], 0, &tol).unwrap();
    let s = knot_summary(&GaussCode::of_component(&d, 0)).unwrap();
    assert_eq!((s.determinant, s.verdict), (1, Verdict::UnknotConsistent));
}

/// Planar diagram crossing `[a, b, c, d]`: edge labels counterclockwise,
/// starting from the incoming under-strand.
type Pd = Vec<[usize; 4]>;

fn find(p: &mut Vec<usize>, x: usize) -> usize {
    if p[x] != x {
        let r = find(p, p[x]);
        p[x] = r;
    }
    p[x]
}

/// Bracket by the plain 2^n state sum over a planar diagram code with
/// <O> = 1 and d = -A^2 - A^-2, then normalised by (-A^3)^-w. The A
/// smoothing joins the incoming under-strand to the edge clockwise from it.
fn pd_bracket(pd: &Pd, writhe: i32) -> BTreeMap<i32, i64> {
    let edges = pd.iter().flatten().copied().max().unwrap() + 1;
    let n = pd.len();
    let mut total: BTreeMap<i32, i64> = BTreeMap::new();
    for state in 0..(1u32 << n) {
        let mut parent: Vec<usize> = (0..edges).collect();
        let mut a_count = 0i32;
        for (k, x) in pd.iter().enumerate() {
            let pairs = if state & (1 << k) == 0 {
                a_count += 1;
                [(x[0], x[3]), (x[1], x[2])]
            } else {
                [(x[0], x[1]), (x[2], x[3])]
            };
            for (u, v) in pairs {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let used: std::collections::BTreeSet<usize> = pd.iter().flatten().copied().collect();
        let loops = used.iter().filter(|&&e| find(&mut parent, e) == e).count();
        // A^(a - b) d^(loops - 1)
        let mut term: BTreeMap<i32, i64> = BTreeMap::from([(a_count - (n as i32 - a_count), 1)]);
        for _ in 1..loops {
            let mut next = BTreeMap::new();
            for (&e, &c) in &term {
                *next.entry(e + 2).or_insert(0) -= c;
                *next.entry(e - 2).or_insert(0) -= c;
            }
            term = next;
        }
        for (e, c) in term {
            *total.entry(e).or_insert(0) += c;
        }
    }
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    total.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e - 3 * writhe, sign * c)).collect()
}

fn laurent(p: &Laurent) -> BTreeMap<i32, i64> {
    p.0.iter().filter(|(_, &c)| c != 0).map(|(&e, &c)| (e, c)).collect()
}

/// Jones polynomial in t written as a bracket polynomial in A, t = A^-4.
fn from_jones(terms: &[(i32, i64)]) -> BTreeMap<i32, i64> {
    terms.iter().map(|&(e, c)| (-4 * e, c)).collect()
}

#[test]
fn state_sum_oracle_reproduces_known_jones_polynomials() {
    // Left-handed trefoil: V = -t^-4 + t^-3 + t^-1, all crossings negative.
    let left: Pd = vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
    assert_eq!(pd_bracket(&left, -3), from_jones(&[(-4, -1), (-3, 1), (-1, 1)]));
    // Figure-eight: V = t^-2 - t^-1 + 1 - t + t^2, writhe 0.
    let eight: Pd = vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
    assert_eq!(pd_bracket(&eight, 0), from_jones(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]));
}

#[test]
fn bracket_matches_state_sum_oracle() {
    let left: Pd = vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
    let oracle = pd_bracket(&left, -3);
    let neg = GaussCode::parse("O0- U1- O2- U0- O1- U2-").unwrap();
    let pos = GaussCode::parse("O0+ U1+ O2+ U0+ O1+ U2+").unwrap();
    assert_eq!(laurent(&bracket(&neg).unwrap()), oracle);
    assert_eq!(laurent(&bracket(&pos).unwrap().invert_variable()), oracle);
    assert_eq!(bracket(&pos).unwrap(), trefoil_bracket());
    assert_eq!(trefoil_bracket().terms(), 3);

    let eight: Pd = vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
    let code = GaussCode::parse("O1- U2+ O3+ U1- O4- U3+ O2+ U4-").unwrap();
    assert_eq!(laurent(&bracket(&code).unwrap()), pd_bracket(&eight, 0));
}

#[test]
fn determinants_agree_on_standard_knots() {
    let trefoil = GaussCode::parse("O0+ U1+ O2+ U0+ O1+ U2+").unwrap();
    let eight = GaussCode::parse("O1- U2+ O3+ U1- O4- U3+ O2+ U4-").unwrap();
    assert_eq!(determinant(&trefoil).unwrap(), 3);
    assert_eq!(alexander_determinant(&trefoil).unwrap(), 3);
    assert_eq!(determinant(&eight).unwrap(), 5);
    assert_eq!(alexander_determinant(&eight).unwrap(), 5);
    assert_eq!(determinant(&GaussCode::unknot()).unwrap(), 1);
    assert_eq!(alexander_determinant(&GaussCode::unknot()).unwrap(), 1);
}

#[test]
fn mirror_inverts_the_variable() {
    let trefoil = GaussCode::parse("O0+ U1+ O2+ U0+ O1+ U2+").unwrap();
    let b = bracket(&trefoil).unwrap();
    let m = bracket(&trefoil.mirror()).unwrap();
    assert_eq!(m, b.invert_variable());
    assert_ne!(m, b);
    assert_eq!(determinant(&trefoil.mirror()).unwrap(), 3);
}

#[test]
fn unknot_bracket_is_one() {
    assert!(bracket(&GaussCode::unknot()).unwrap().is_one());
    let kink = GaussCode::parse("O0+ U0+").unwrap();
    assert!(bracket(&kink).unwrap().is_one());
}

#[test]
fn simplify_removes_kinks_and_keeps_reduced_knots() {
    let kink = GaussCode::parse("O0- U0-").unwrap();
    assert_eq!(simplify(&kink).crossing_count(), 0);
    let trefoil = GaussCode::parse("O0+ U1+ O2+ U0+ O1+ U2+").unwrap();
    assert_eq!(simplify(&trefoil), trefoil);
    // Trefoil with an extra kink and a removable bigon.
    let padded = GaussCode::parse("O0+ U1+ O3+ U3+ O2+ U0+ O1+ U2+").unwrap();
    let s = simplify(&padded);
    assert_eq!(s.crossing_count(), 3);
    assert_eq!(bracket(&s).unwrap(), bracket(&padded).unwrap());
}

#[test]
fn oversized_bracket_is_refused() {
    // A chain of 25 kinks.
    let text: Vec<String> = (0..25).map(|k| format!("O{k}+ U{k}+")).collect();
    let code = GaussCode::parse(&text.join(" ")).unwrap();
    assert!(matches!(bracket(&code), Err(Error::TooManyCrossings(25, 24))));
    assert_eq!(simplify(&code).crossing_count(), 0);
}

#[test]
fn malformed_codes_are_rejected() {
    assert!(GaussCode::parse("O0+ O0+").is_err());
    assert!(GaussCode::parse("O0+ U0-").is_err());
    assert!(GaussCode::parse("X0+").is_err());
}

fn crisscross_diagram() -> paperband::CrossingDiagram {
    let st = paperband::catalog::get_model("crisscross").unwrap().fold(&Tolerance::default()).unwrap();
    let curves = paperband::extract_curves(&st, &paperband::InflationParams::new(0.02), &Tolerance::default()).unwrap();
    paperband::crossing_diagram(&curves, 0, &Tolerance::default()).unwrap()
}

#[test]
fn diagram_text_round_trip() {
    let d = crisscross_diagram();
    let text = d.to_text();
    let back = paperband::CrossingDiagram::from_text(&text).unwrap();
    assert_eq!(back.to_text(), text);
    assert_eq!(back.gauss, d.gauss);
    let (b, m) =
        (back.component_index(Component::Boundary).unwrap(), back.component_index(Component::Midline).unwrap());
    assert_eq!(linking_number(&back, b, m).unwrap(), -3);
    assert_eq!(determinant(&GaussCode::of_component(&back, b)).unwrap(), 3);
}

#[test]
fn dropped_crossing_gives_odd_sum() {
    let d = crisscross_diagram();
    let (b, m) = (d.component_index(Component::Boundary).unwrap(), d.component_index(Component::Midline).unwrap());
    let victim = d.crossings.iter().position(|c| c.over.curve != c.under.curve).unwrap();
    // Turn one boundary/midline crossing into a midline self-crossing.
    let text = d.to_text();
    let lines: Vec<String> = text
        .lines()
        .map(|l| {
            if l.starts_with(&format!("crossing {victim} ")) {
                let sign = l.rsplit(' ').next().unwrap();
                format!("crossing {victim} midline midline {sign}")
            } else if l.starts_with("gauss boundary ") {
                l.split(' ').filter(|t| t.get(1..) != Some(&victim.to_string())).collect::<Vec<_>>().join(" ")
            } else if l.starts_with("gauss midline ") {
                let tag = if d.crossings[victim].over.curve == b { 'O' } else { 'U' };
                format!("{l} {tag}{victim}")
            } else {
                l.to_string()
            }
        })
        .collect();
    let bad = paperband::CrossingDiagram::from_text(&lines.join("\n")).unwrap();
    assert!(matches!(linking_number(&bad, b, m), Err(Error::OddCrossingSum(_))));
}

#[test]
fn malformed_diagrams_are_rejected() {
    for text in [
        "crossing 0 boundary midline +1",
        "gauss nowhere O0",
        "direction 1 2",
        "crossing 1 boundary midline +1\ngauss boundary O1\ngauss midline U1",
    ] {
        assert!(paperband::CrossingDiagram::from_text(text).is_err(), "{text}");
    }
}
