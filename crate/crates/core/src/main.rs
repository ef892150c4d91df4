fn main() {
    std::process::exit(soliton_forge::cli::main());
}
