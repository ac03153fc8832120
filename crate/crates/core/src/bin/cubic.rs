fn main() -> std::process::ExitCode {
    cubic_core::cli::main()
}
