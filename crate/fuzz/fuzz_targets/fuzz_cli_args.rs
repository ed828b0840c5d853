#![no_main]

use clap::Parser;
use involution::cli::{run, Cli, Command, IdentityCommand, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args: Vec<&str> = std::iter::once("involution").chain(text.split('\0')).collect();
    let Ok(cli) = Cli::try_parse_from(&args) else {
        // Usage errors map to the configuration exit code, help to success.
        let code = run(&args).code;
        assert!(code == EXIT_CONFIG || code == EXIT_PASS, "{code}");
        return;
    };
    // Only the cheap, side-effect free command runs end to end.
    if let Command::Identity(IdentityCommand::Cyclic(a)) = &cli.command {
        if a.output.is_none() && a.alphas.len() <= 64 {
            let code = run(&args).code;
            assert!([EXIT_PASS, EXIT_FAIL, EXIT_CONFIG].contains(&code), "{code}");
        }
    }
});
