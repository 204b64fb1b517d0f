use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let outcome = cliquebound_cli::run_command(&argv, &mut stdout.lock());
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary);
    }
    ExitCode::from(outcome.code as u8)
}
