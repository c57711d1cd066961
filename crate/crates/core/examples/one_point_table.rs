//! The tabulated one-point series, including trace combinations evaluated
//! at a rational specialization of `(t1, t2)`.

use hilbgw::combinatorics::{partitions, Partition};
use hilbgw::genus1::{table_display_in, table_eval_in, theorem1_consistency_in, Section5Table, TraceCache};
use hilbgw::kernel::{rat, Specialized};

fn main() {
    let table = Section5Table::builtin();
    println!("{} records, issues: {:?}", table.entries().count(), table.validate());

    let mut cache = TraceCache::new(Specialized::new(rat(1, 1), rat(5, 1)));
    for mu in partitions(5) {
        let v = table_eval_in(&mut cache, &mu).unwrap();
        let shown = table_display_in(&cache, &mu).unwrap();
        let agree = shown.map(|s| if s == v.value { "matches closed form" } else { "DIFFERS" });
        println!("{mu} [{}]: {}  {}", v.source, v.value, agree.unwrap_or(""));
    }
    let hook = Partition::hook(5);
    println!("{hook} = -<D>_1: {}", theorem1_consistency_in(&mut cache, 5).unwrap());
}
