//! The shipped `.qk` fixtures are the canonical serialization of the library
//! fixtures. Regenerate with `cargo test -p quasibos-cli --test fixtures -- --ignored`.

use std::path::PathBuf;
use std::sync::Arc;

use quasibos::bosonization::bosonize;
use quasibos::fixtures::{fix1, fix2, fix3, fix5, r_sweedler, trivial_braided, z2_sign};
use quasibos::graded::CrossedGModule;
use quasibos::hopfmod::Trimodule;
use quasibos::preantipode::group_preantipode;
use quasibos::Field;
use quasibos_cli::qk::{parse, serialize, Object, Workspace};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn explicit(name: &str, h: &Arc<quasibos::DualQuasiBialgebra>) -> Workspace {
    let mut ws = Workspace::new(Field::Rationals);
    ws.insert(name, Object::Dqb { dqb: h.clone(), group: None });
    ws
}

fn bosonized(h: Arc<quasibos::DualQuasiBialgebra>, r: quasibos::yd::BraidedBialgebra) -> Workspace {
    let bos = bosonize(&h, &r).expect("valid");
    let mut ws = explicit("H", &h);
    ws.insert("R", Object::Braided { over: "H".into(), bialgebra: r });
    ws.insert("B", Object::Dqb { dqb: bos.b, group: None });
    ws.insert("sigma", Object::Map { src: "H".into(), dst: "B".into(), matrix: bos.sigma });
    ws.insert("pi", Object::Map { src: "B".into(), dst: "H".into(), matrix: bos.pi });
    ws
}

fn fixtures() -> Vec<(&'static str, Workspace)> {
    let q = Field::Rationals;
    let h1 = Arc::new(fix1());
    let mut w1 = explicit("H", &h1);
    w1.insert("R", Object::Braided { over: "H".into(), bialgebra: r_sweedler(h1.clone()) });

    let h2 = Arc::new(fix2());
    let mut w2 = explicit("H", &h2);
    w2.insert("S", Object::Preantipode { over: "H".into(), s: group_preantipode(&z2_sign()).expect("group") });
    w2.insert("M", Object::Trimodule { over: "H".into(), module: Trimodule::regular(h2.clone()) });

    let w3 = explicit("H", &Arc::new(fix3()));
    let w4 = bosonized(h2.clone(), trivial_braided(&fix3(), h2.clone()));
    let w5 = explicit("H", &Arc::new(fix5()));

    // a ∈ V₁, b, c ∈ V_g: g▸g▸ = −1 on V_g is forced by θ(g,g,g) = −1
    let g = z2_sign();
    let v = |xs: [i64; 3]| xs.iter().map(|&x| q.int(x)).collect::<Vec<_>>();
    let action = vec![vec![v([1, 0, 0]), v([0, 1, 0]), v([0, 0, 1])], vec![v([-1, 0, 0]), v([0, 0, 1]), v([0, -1, 0])]];
    let crossed = CrossedGModule::new(g.clone(), vec!["a".into(), "b".into(), "c".into()], vec![0, 1, 1], action).expect("shape");
    let mut wg = Workspace::new(q);
    wg.insert("G", Object::Group(g));
    wg.insert("V", Object::Crossed { group: "G".into(), module: crossed });

    vec![("FIX1.qk", w1), ("FIX2.qk", w2), ("FIX3.qk", w3), ("FIX4.qk", w4), ("FIX5.qk", w5), ("Z2sign.qk", wg)]
}

#[test]
#[ignore]
fn regenerate() {
    for (file, ws) in fixtures() {
        std::fs::write(dir().join(file), serialize(&ws)).unwrap();
    }
}

#[test]
fn shipped_files_are_canonical() {
    for (file, ws) in fixtures() {
        let on_disk = std::fs::read_to_string(dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(on_disk, serialize(&ws), "{file} is stale");
        let back = parse(&on_disk).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(serialize(&back), on_disk, "{file} is not byte-stable");
    }
}

#[test]
fn fix1_has_one_two_dimensional_dqb() {
    let ws = parse(&std::fs::read_to_string(dir().join("FIX1.qk")).unwrap()).unwrap();
    let dqbs: Vec<_> = ws.objects.iter().filter(|(_, o)| o.kind() == "dqb").collect();
    assert_eq!(dqbs.len(), 1);
    assert_eq!(ws.dqb("H").unwrap().dim(), 2);
}
