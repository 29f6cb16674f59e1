use num_traits::One;
use sdg_core::gon::RegularGon;
use sdg_core::num::{rat, Rat};
use sdg_core::qdt::QTriangulationState;
use sdg_core::scenario::Scenario;

#[test]
#[ignore]
fn dbg_contact_evolution() {
    let sc = Scenario::random(2004, 8, 12, 2, Rat::one());
    let gon = RegularGon::new(12).unwrap();
    // scan the window around the corner event(s)
    for num in [7620i64, 7625, 7627, 7628, 7629, 7630, 7631, 7635, 7650] {
        let t = rat(num, 81920);
        let pts = sc.eval_points(&t);
        let qdt = QTriangulationState::build(&pts, &gon).unwrap();
        if let Some(tri) = qdt.triangles.get(&[0usize, 1, 5]) {
            println!(
                "t = {t} (~{:.6}): contacts of (0,1,5) = {:?}",
                num as f64 / 81920.0,
                tri.contacts
            );
        } else {
            println!("t = {t}: triangle (0,1,5) absent");
        }
    }
}
