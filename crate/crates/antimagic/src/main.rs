use antimagic::cli;

fn main() {
    std::process::exit(cli::run());
}
