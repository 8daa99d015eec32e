//! Runs a command from a TOML config and prints the JSON report.

use staticgeo::cli::execute;
use staticgeo::config::RunConfig;

const CONFIG: &str = r#"
[triple]
fixture = "schwarzschild-isotropic"
n = 3
m = 1.0
cut = "horizon"
"#;

pub fn run_example() -> staticgeo::Result<()> {
    let cfg = RunConfig::from_str_any(CONFIG)?;
    let out = execute("classify", &cfg)?;
    println!("exit code {}", out.exit_code);
    print!("{}", out.json);
    assert!(RunConfig::from_str_any("[triple]\nfixture = \"flat\"\ncolour = 1\n").is_err());
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
