use clap::Parser;
use wiretap_cli::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for bad arguments; here 2 is reserved for numeric failures
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("wiretap: {e}");
        std::process::exit(e.exit_code());
    }
}
