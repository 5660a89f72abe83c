use ere_stab::acceptance::{run, CRITERIA};

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, _) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let r = run(id);
        println!("{r}");
        failed += (!r.passed) as usize;
    }
    println!("{failed} of {} criteria failed", if only.is_empty() { CRITERIA.len() } else { only.len() });
    if failed > 0 {
        std::process::exit(1);
    }
}
