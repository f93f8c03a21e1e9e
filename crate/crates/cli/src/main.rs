use std::io::Write;

fn main() {
    if let Ok(value) = std::env::var("SKEWJS_THREADS") {
        match value.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("skewjs: ignoring SKEWJS_THREADS={value:?}, expected a positive integer"),
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = skewjs::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
