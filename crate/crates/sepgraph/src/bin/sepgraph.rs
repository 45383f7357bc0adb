fn main() -> std::process::ExitCode {
    sepgraph::cli::main()
}
