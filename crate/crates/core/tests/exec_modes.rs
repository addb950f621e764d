use std::sync::Arc;

use cobordia::fgl::Fgl;
use cobordia::group::GroupQuotient;
use cobordia::par::Exec;
use cobordia::roots::RootDatum;
use cobordia::schubert::{Theory, TheoryOptions};

fn theory(group: &str, law: Fgl, exec: Exec) -> Theory {
    let rd = Arc::new(RootDatum::named(group).unwrap());
    Theory::new(rd, Arc::new(law), &TheoryOptions { exec, ..TheoryOptions::default() }).unwrap()
}

#[test]
fn sequential_and_parallel_agree() {
    for (group, law) in [("SP4", Fgl::universal(4).unwrap()), ("SO4", Fgl::multiplicative(2))] {
        let par = theory(group, law.clone(), Exec::Parallel);
        let seq = theory(group, law, Exec::Sequential);
        assert_eq!(par.structure_constants().unwrap(), seq.structure_constants().unwrap());
        let a = GroupQuotient::new(&par, None).unwrap().slices().unwrap();
        let b = GroupQuotient::new(&seq, None).unwrap().slices().unwrap();
        let qa: Vec<_> = a.slices.iter().map(|s| s.quotient.clone()).collect();
        let qb: Vec<_> = b.slices.iter().map(|s| s.quotient.clone()).collect();
        assert_eq!(qa, qb);
    }
}
