//! Pass/fail bookkeeping for the acceptance run.

/// Result of one criterion: overall verdict plus one line per check.
#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new() -> Self {
        Self { pass: true, lines: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }
}

/// Name and check of one criterion.
pub type Criterion = (&'static str, fn() -> Outcome);

/// Runs every criterion, prints a verdict line for each followed by its
/// checks, and returns the number that failed.
pub fn report(criteria: &[Criterion]) -> usize {
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = f();
        println!("criterion {}: {} - {name}", i + 1, if outcome.pass { "PASS" } else { "FAIL" });
        for line in &outcome.lines {
            println!("    {line}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    failed
}
