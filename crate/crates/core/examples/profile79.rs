// dev probe: where does driver 7.9 spend its time?
use cayham::casework::{enumerate_cells, PropId};
use cayham::group::{order8_catalog, GroupTag};
use cayham::hamsearch::enumerate_ham_cycles_masked;
use std::collections::HashMap;

fn main() {
    let cells = enumerate_cells(PropId::P79);
    println!("cells: {}", cells.len());
    let tables: HashMap<GroupTag, _> = order8_catalog().into_iter().map(|t| (t.tag(), t)).collect();
    // count cycles for a few representative multisets
    let mut seen = std::collections::HashSet::new();
    let mut total = 0usize;
    let mut max = 0usize;
    let mut nkeys = 0usize;
    let t0 = std::time::Instant::now();
    for cell in &cells {
        let gbars: Vec<usize> = cell.gens.iter().map(|g| g.gbar).collect();
        let table = &tables[&cell.group];
        let mask: Vec<bool> = vec![true; gbars.len()];
        if seen.insert((cell.group, gbars.clone())) {
            let cycles = enumerate_ham_cycles_masked(table, &gbars, &mask);
            total += cycles.len();
            max = max.max(cycles.len());
            nkeys += 1;
        }
    }
    println!("distinct multisets: {nkeys}, avg cycles {}, max {}, enum time {:.1?}", total / nkeys.max(1), max, t0.elapsed());
}
