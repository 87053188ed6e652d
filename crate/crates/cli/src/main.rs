use std::process::ExitCode;

fn main() -> ExitCode {
    match lpbm_cli::run(std::env::args_os(), &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
