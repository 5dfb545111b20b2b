//! Constructing buffering alphabets: free products of standard factors and
//! explicit custom tables.
//!
//! ```bash
//! cargo run --example build_pairs
//! ```

use zaq::algebra::{pairs, BufferWord, FactorSpec, PairSpec, Reduction};

fn show_table(pair: &PairSpec) {
    print!("{:>6}", "*");
    for b in pair.generators() {
        print!("{:>6}", pair.label(b));
    }
    println!();
    for a in pair.generators() {
        print!("{:>6}", pair.label(a));
        for b in pair.generators() {
            let cell = match pair.product(a, b) {
                Reduction::Identity => "1".to_string(),
                Reduction::Letter(c) => pair.label(c).to_string(),
                Reduction::Irreducible => ".".to_string(),
            };
            print!("{cell:>6}");
        }
        println!();
    }
    for a in pair.generators() {
        let (left, right) = pair.neighbor_sets(a);
        println!(
            "  Left({}) = {{{}}}, Right({}) = {{{}}}",
            pair.label(a),
            left.iter().map(|&g| pair.label(g)).collect::<Vec<_>>().join(", "),
            pair.label(a),
            right.iter().map(|&g| pair.label(g)).collect::<Vec<_>>().join(", "),
        );
    }
    println!(
        "  plain: {}, successor graph strongly connected: {}",
        pair.is_plain(),
        pair.successor_strongly_connected()
    );
}

fn main() {
    println!("== Z/3Z * Z/3Z with natural generators ==");
    let z3z3 = pairs::z3_star_z3();
    show_table(&z3z3);

    println!("\n== free product N * Z * B (mixed factor kinds) ==");
    let mixed = PairSpec::build_pair(&[
        FactorSpec::FreeMonoid {
            letters: vec!["a".to_string()],
        },
        FactorSpec::FreeGroup {
            letters: vec!["b".to_string()],
        },
        pairs::boolean_factor("c"),
    ])
    .expect("valid factors");
    show_table(&mixed);

    println!("\n== bicyclic monoid <a,b | ab=1> from a custom table ==");
    let bic = pairs::bicyclic();
    show_table(&bic);

    println!("\n== buffer dynamics on the bicyclic pair ==");
    let a = bic.by_label("a").unwrap();
    let b = bic.by_label("b").unwrap();
    let mut w = BufferWord::empty();
    for (label, class) in [("b", b), ("a", a), ("a", a), ("a", a), ("b", b)] {
        w = bic.arrive(&w, class);
        println!("arrive {label}: buffer = {}", bic.format_word(&w));
    }
    w = bic.serve(&w).expect("nonempty");
    println!("serve:    buffer = {}", bic.format_word(&w));
}
