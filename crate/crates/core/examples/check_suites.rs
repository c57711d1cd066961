//! Running identity-check suites from library code and rendering the report.

use hilbgw::cli::{run_jobs, suite_jobs, Suite, SuiteConfig};

fn main() {
    let config = SuiteConfig { fast: true, ..SuiteConfig::full(7) };
    for suite in [Suite::Hodge, Suite::Nl, Suite::Exxx] {
        let r = run_jobs(&format!("{suite:?}").to_lowercase(), 7, suite_jobs(suite, &config), false);
        println!("{}", serde_json::to_string(&r).unwrap());
    }
}
