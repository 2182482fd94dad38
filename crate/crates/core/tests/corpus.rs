//! Diagram-level surgery agrees with the algebraic prediction on every
//! diagram of the corpus that carries a pochette.

use std::path::PathBuf;

use pochette::diagram::{self, CheckedDiagram, HandleDiagram, PochetteDesignation};
use pochette::slope::{Mod2Framing, SlopeFraction};
use pochette::surgery::{self, SurgeryHypotheses};
use pochette::template::{self, expr::Value, FamilyParams};

fn shipped(name: &str) -> CheckedDiagram {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/diagrams").join(name);
    let mut d = HandleDiagram::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    diagram::mark_meridians(&mut d, "c1");
    diagram::validate(d).unwrap()
}

fn corpus() -> Vec<(CheckedDiagram, PochetteDesignation)> {
    let c1u1 = PochetteDesignation::new("c1", "u1");
    let mut out = vec![
        (shipped("s4.json"), c1u1.clone()),
        (shipped("s4_meridians.json"), c1u1.clone()),
        (shipped("cp2.json"), c1u1),
    ];
    let fig1 = template::builtin("fig1").unwrap();
    for k in [2, 3] {
        let params: FamilyParams = [
            ("k".to_string(), Value::Int(k)),
            ("n".to_string(), Value::Tuple((0..k * k - 1).map(|i| i % 5 - 2).collect())),
        ]
        .into();
        let inst = template::instantiate(&fig1, &params, true).unwrap();
        out.push((inst.diagram, inst.pochette));
    }
    let fig2 = template::builtin("fig2").unwrap();
    for (s, t, m) in [(1, 1, vec![0]), (1, 2, vec![0]), (2, 1, vec![2, -2]), (2, 2, vec![-1, 1])] {
        let params: FamilyParams = [
            ("s".to_string(), Value::Int(s)),
            ("t".to_string(), Value::Int(t)),
            ("m".to_string(), Value::Tuple(m)),
            ("n".to_string(), Value::Tuple(vec![1; (s * t + 1) as usize])),
            ("sign".to_string(), Value::Int(-1)),
        ]
        .into();
        let inst = template::instantiate(&fig2, &params, true).unwrap();
        out.push((inst.diagram, inst.pochette));
    }
    out
}

#[test]
fn diagram_surgery_matches_algebra() {
    let hyp = SurgeryHypotheses::default();
    let mut checked = 0;
    for (d, poch) in corpus() {
        let x = diagram::homology_closed(&d).unwrap();
        for p in -5i64..=5 {
            for q in -5i64..=5 {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let s = SlopeFraction::new(p, q).unwrap();
                for eps in Mod2Framing::BOTH {
                    let out = diagram::transform_diagram(&d, &poch, s, eps).unwrap();
                    let got = diagram::homology_closed(&out).unwrap();
                    let want = surgery::surgery_homology(&x, s, eps, &hyp).unwrap();
                    assert!(
                        got.agrees_with(&want.profile),
                        "{} at {s}, eps {eps}: diagram {got}, algebra {}",
                        d.name,
                        want.profile
                    );
                    if p.abs() == 1 {
                        assert_eq!(got, x, "{} at {s}", d.name);
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500);
}
