// The command-line front end driven in-process.

use modpcoh::cli::dispatch_to;

pub fn run_example() {
    let runs: &[&[&str]] = &[
        &["modpcoh", "--records", "iszero", "--field", "GF(2)(x,t)", "--class", "[x; t]", "--degree", "t"],
        &["modpcoh", "qf-iso", "--field", "GF(2)", "qf([0,0],[0,0])", "qf([1,1],[0,0])"],
        &["modpcoh", "--records", "gamma", "--i", "1", "--class", "{x,y}"],
        &["modpcoh", "--records", "suite", "etale"],
    ];
    for argv in runs {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = dispatch_to(argv.iter().copied(), &mut out, &mut err);
        println!("$ {}", argv[1..].join(" "));
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
        println!("exit {code}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
