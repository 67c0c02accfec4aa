// dev probe: run each driver and print its report
use cayham::casework::{run_driver, PropId};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");
    for prop in PropId::all() {
        if which != "all" && which != prop.name() {
            continue;
        }
        let start = std::time::Instant::now();
        let run = run_driver(prop, 0);
        println!(
            "{}: {:?} in {:.1?}",
            prop.name(),
            run.report,
            start.elapsed()
        );
        for cell in run.unexplained_cells().iter().take(5) {
            println!("  UNEXPLAINED: {cell:?}");
        }
    }
}
