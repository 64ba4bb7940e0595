fn main() -> std::process::ExitCode {
    enonet::cli::main_entry()
}
