fn main() {
    let outcome = sparse_unitary::cli::dispatch(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(outcome.exit_code);
}
