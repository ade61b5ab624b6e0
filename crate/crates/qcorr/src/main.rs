//! `qcorr` binary: correlation measures for the two-qubit XXZ chain with DM
//! coupling. See `qcorr --help` or the library documentation.

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(qcorr::cli::entry(&args));
}
