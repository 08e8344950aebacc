use chaindyn_cli::store::Store;

fn main() {
    let code = chaindyn_cli::run(std::env::args_os(), &Store::from_env(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
