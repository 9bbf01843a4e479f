fn main() -> std::process::ExitCode {
    seqpred_harness::cli::run()
}
