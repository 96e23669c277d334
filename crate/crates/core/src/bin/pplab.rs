fn main() {
    std::process::exit(pplab::cli::main_with_args(std::env::args_os()));
}
