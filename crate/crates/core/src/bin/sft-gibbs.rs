fn main() {
    std::process::exit(sft_gibbs::cli::main_with_args(std::env::args_os()));
}
