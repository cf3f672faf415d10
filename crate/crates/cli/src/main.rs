use std::process::ExitCode;

fn main() -> ExitCode {
    let report = psa_audit_cli::main_with_args(std::env::args_os());
    if !report.message.is_empty() {
        if report.code == 0 {
            println!("{}", report.message.trim_end());
        } else {
            eprintln!("{}", report.message.trim_end());
        }
    }
    ExitCode::from(report.code)
}
