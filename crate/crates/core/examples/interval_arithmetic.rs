//! Interval basics: arithmetic, the generalized Hukuhara difference, the
//! LU order and the decomposition of a gap into a pair of slacks.
//!
//! ```bash
//! cargo run --example interval_arithmetic
//! ```

use intdea::interval::{slack_decompose, Interval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Interval::new(2.0, 5.0)?;
    let b = Interval::new(3.0, 9.0)?;

    println!("a = {a}, b = {b}");
    println!("a + b = {}", a + b);
    println!("b - a = {}  (plain difference, widths add up)", b - a);
    println!(
        "b gh a = {}  (recovers the shift between them)",
        b.gh_diff(&a)
    );
    println!("(a + b) gh b = {}", (a + b).gh_diff(&b));

    // LU order: both endpoints compare the same way.
    println!("a <= b: {}, a < b: {}", a.leq(&b), a.lt(&b));
    let c = Interval::new(1.0, 10.0)?;
    println!("a and c comparable: {}", a.leq(&c) || c.leq(&a));

    // a + sl = b - su with one side zero.
    let pair = slack_decompose(&a, &b)?;
    println!("gap from a to b: sl = {}, su = {}", pair.sl, pair.su);
    println!("a + sl = {}, b - su = {}", a + pair.sl, b - pair.su);

    match Interval::new(4.0, 1.0) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
