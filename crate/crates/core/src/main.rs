use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use gravshift::{cli, data};

fn main() -> ExitCode {
    let data_dir = std::env::var_os(data::DATA_DIR_ENV).map(PathBuf::from);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = cli::run(
        std::env::args_os(),
        data_dir,
        &mut stdout.lock(),
        &mut stderr.lock(),
    );
    let _ = std::io::stdout().flush();
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
