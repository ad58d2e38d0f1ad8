//! Thin binary shim; the whole front end lives in [`qbft::cli`].

fn main() {
    std::process::exit(qbft::cli::run_from_env());
}
