fn main() { std::process::exit(stegsec::cli::run()) }
