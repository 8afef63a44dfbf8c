fn main() {
    let start = std::time::Instant::now();
    let report = gs::suite::run_embedded(None).expect("suite runs");
    print!("{report}");
    for c in &report.cases {
        if c.millis > 200 {
            eprintln!("slow case {}: {} ms", c.id, c.millis);
        }
    }
    eprintln!("total: {:?}", start.elapsed());
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
