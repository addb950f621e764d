use std::sync::Arc;

use cobordia::fgl::Fgl;
use cobordia::roots::RootDatum;
use cobordia::schubert::{Theory, TheoryOptions};

/// Products of the two codimension-one classes of G2/B for the universal law,
/// read off modulo the fourth filtration step.
#[test]
fn g2_divisor_products_modulo_level_four() {
    let rd = Arc::new(RootDatum::named("G2").unwrap());
    let th = Theory::new(rd, Arc::new(Fgl::universal(6).unwrap()), &TheoryOptions::default()).unwrap();
    let w = |s: &str| th.weyl().from_word_string(s).unwrap();
    let c = |s: &str| th.law().parse_coefficient(s).unwrap();
    let expected = [
        ("12121", "12121", [("1212", "0"), ("2121", "3"), ("121", "3*a11"), ("212", "0")]),
        ("12121", "21212", [("1212", "1"), ("2121", "1"), ("121", "a11"), ("212", "a11")]),
        ("21212", "21212", [("1212", "1"), ("2121", "0"), ("121", "0"), ("212", "0")]),
    ];
    for (u, v, terms) in expected {
        let got = th.product_coords(w(u), w(v)).unwrap();
        for (x, coeff) in got.iter().enumerate() {
            if th.codim(x) > 3 {
                continue;
            }
            let word = th.weyl().word_string(x);
            let want = terms.iter().find(|t| t.0 == word).map_or_else(|| c("0"), |t| c(t.1));
            assert_eq!(*coeff, want, "zeta_{u} * zeta_{v} at zeta_{word}");
        }
    }
}
