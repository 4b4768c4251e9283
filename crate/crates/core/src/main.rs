fn main() {
    std::process::exit(dedekind_cluster::cli::run());
}
