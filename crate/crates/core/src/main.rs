fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QSS_LOG", "error")).init();
    std::process::exit(qss_core::cli::run(std::env::args_os()));
}
