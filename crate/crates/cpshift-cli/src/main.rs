use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = cpshift_cli::Cli::parse();
    std::process::ExitCode::from(cpshift_cli::run(&cli) as u8)
}
