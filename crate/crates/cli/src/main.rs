use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = match std::env::var("TT_SEED") {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => {
                eprintln!("TT_SEED must be a non-negative integer, got `{s}`");
                return ExitCode::from(2);
            }
        },
        Err(_) => None,
    };
    let out = tensor_types_cli::run(std::env::args_os(), env_seed);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
