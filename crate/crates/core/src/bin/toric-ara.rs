use std::process::ExitCode;

fn main() -> ExitCode {
    match toric_ara::cli::run(std::env::args_os()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.message.trim_end());
            ExitCode::from(e.code as u8)
        }
    }
}
