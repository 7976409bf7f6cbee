use clap::Parser;
use qview_service::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = run(cli, None, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
