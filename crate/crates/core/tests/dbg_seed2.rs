use num_traits::One;
use sdg_core::gon::RegularGon;
use sdg_core::num::{rat, Rat};
use sdg_core::qdt::QTriangulationState;
use sdg_core::scenario::Scenario;

#[test]
#[ignore]
fn dbg_corner_event() {
    let sc = Scenario::random(2004, 8, 12, 2, Rat::one());
    let gon = RegularGon::new(12).unwrap();
    // corner event at ~0.09314; probe either side
    for t in [rat(760, 8192), rat(764, 8192)] {
        let pts = sc.eval_points(&t);
        let qdt = QTriangulationState::build(&pts, &gon).unwrap();
        println!("t = {t} (~{:.5})", 760.0 / 8192.0);
        for key in [(0usize, 1usize), (0, 5), (1, 5)] {
            if let Some(e) = qdt.edges.get(&key) {
                let tags: Vec<(usize, usize)> = e
                    .breakpoints
                    .iter()
                    .map(|bp| {
                        let who = match bp.site {
                            sdg_core::qdt::CornerSite::P => e.p,
                            sdg_core::qdt::CornerSite::Q => e.q,
                        };
                        (who, bp.vertex)
                    })
                    .collect();
                println!("  edge {key:?}: {} bps {tags:?}", e.breakpoint_count());
            } else {
                println!("  edge {key:?}: absent");
            }
        }
    }
}
