//! Command-line driver and report emitter.

/// Entry point for the `dlal` binary; returns the process exit code.
pub fn main() -> i32 {
    eprintln!("not yet wired");
    3
}
