fn main() {
    let env = std::env::var(ddmc::cli::MAX_PAIRS_ENV).ok();
    std::process::exit(ddmc::cli::main_with(std::env::args_os(), env.as_deref()));
}
