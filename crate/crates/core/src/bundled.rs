//! Definition files shipped with the crate, embedded at compile time.

pub const FS1_FILE: &str = "fs1_apparent_temperature.fis.txt";
pub const FS2_FILE: &str = "fs2_appliance_usage.fis.txt";
pub const FS3_FILE: &str = "fs3_sending_decision.fis.txt";
pub const MANIFEST_FILE: &str = "cascade.manifest";

pub const FS1: &str = include_str!("../fis/fs1_apparent_temperature.fis.txt");
pub const FS2: &str = include_str!("../fis/fs2_appliance_usage.fis.txt");
pub const FS3: &str = include_str!("../fis/fs3_sending_decision.fis.txt");
pub const MANIFEST: &str = include_str!("../fis/cascade.manifest");

/// Text of a bundled definition by file name.
pub fn definition(file_name: &str) -> Option<&'static str> {
    match file_name {
        FS1_FILE => Some(FS1),
        FS2_FILE => Some(FS2),
        FS3_FILE => Some(FS3),
        _ => None,
    }
}

/// The bundled files as `(file name, text)` pairs, in cascade order.
pub fn definitions() -> [(&'static str, &'static str); 3] {
    [(FS1_FILE, FS1), (FS2_FILE, FS2), (FS3_FILE, FS3)]
}
