fn main() {
    std::process::exit(i32::from(wci_cli::run()));
}
