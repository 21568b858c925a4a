fn main() {
    qosc::cli::main_exit()
}
