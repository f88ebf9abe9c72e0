fn main() {
    eprintln!("nonlin-eig CLI: not yet wired");
    std::process::exit(2);
}
