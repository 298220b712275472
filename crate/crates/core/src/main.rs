use std::io::Write;

fn main() {
    let mut err = std::io::stderr();
    if let Err(e) = curveset::cli::configure_threads() {
        let _ = writeln!(err, "error: {}: {e}", e.code());
        std::process::exit(curveset::cli::EXIT_ERROR);
    }
    let code = curveset::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut err);
    std::process::exit(code);
}
