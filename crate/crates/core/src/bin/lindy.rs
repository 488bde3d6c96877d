fn main() {
    std::process::exit(lindy::cli::main())
}
