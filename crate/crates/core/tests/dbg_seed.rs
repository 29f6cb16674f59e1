use num_traits::One;
use sdg_core::kinetic_qdt::KineticQdt;
use sdg_core::num::{rat, Rat};
use sdg_core::scenario::Scenario;

#[test]
#[ignore]
fn dbg_seed_2004() {
    let sc = Scenario::random(2004, 8, 12, 2, Rat::one());
    let mut kq = KineticQdt::new(&sc).unwrap();
    for i in 1..=256 {
        let t = rat(i, 256);
        kq.advance_to(&t).unwrap();
        if !kq.matches_static_at(&t).unwrap() {
            println!("first mismatch at t = {t}");
            println!("trace so far:");
            for e in &kq.trace {
                println!("  {}", e.to_line());
            }
            let pts = sc.eval_points(&t);
            let gon = sdg_core::gon::RegularGon::new(12).unwrap();
            let qdt = sdg_core::qdt::QTriangulationState::build(&pts, &gon).unwrap();
            println!("kinetic tris: {:?}", kq.triangle_set());
            println!("static  tris: {:?}", qdt.triangle_set());
            println!("kinetic bps: {:?}", kq.breakpoint_counts());
            println!("static  bps: {:?}", qdt.breakpoint_counts());
            println!("kinetic sdg: {:?}", kq.sdg);
            println!("static  sdg: {:?}", qdt.extract_sdg());
            panic!("mismatch");
        }
    }
    println!("no mismatch at 256 samples?!");
}
