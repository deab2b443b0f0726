fn main() -> std::process::ExitCode {
    slitscope::cli::main()
}
