fn main() -> std::process::ExitCode {
    robust_duopoly::cli::main()
}
