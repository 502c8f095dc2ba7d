fn main() {
    std::process::exit(graphene_vdw::cli::main_with_args(std::env::args_os()));
}
