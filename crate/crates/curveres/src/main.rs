fn main() {
    std::process::exit(curveres::run());
}
