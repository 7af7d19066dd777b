fn main() -> std::process::ExitCode {
    p4surf::cli::main()
}
