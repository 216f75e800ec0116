//! Downloading and unpacking the TEI Simple archive.

use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};
use std::thread::sleep;
use std::time::Duration;

use log::{info, warn};

use crate::error::{Error, Result};
use crate::pipeline::CorpusLayout;

/// Bulk download of the Folger TEI Simple encodings.
pub const DEFAULT_URL: &str = "https://flgr.sh/txtfssAlltei";

pub const EXPECTED_PLAY_COUNT: usize = 37;

#[derive(Debug, Clone, Default)]
pub struct FetchOptions {
    /// Use this archive instead of downloading.
    pub zip: Option<PathBuf>,
    /// Never touch the network.
    pub offline: bool,
    pub attempts: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchReport {
    pub xml_files: usize,
    pub warning: Option<String>,
}

pub fn download(url: &str, attempts: u32) -> Result<Vec<u8>> {
    let mut last = String::new();
    for attempt in 1..=attempts.max(1) {
        match ureq::get(url).call() {
            Ok(response) => {
                let mut body = Vec::new();
                response
                    .into_body()
                    .into_reader()
                    .read_to_end(&mut body)
                    .map_err(|e| Error::Network(e.to_string()))?;
                return Ok(body);
            }
            Err(e) => {
                last = e.to_string();
                warn!("download attempt {attempt} failed: {last}");
                if attempt < attempts {
                    sleep(Duration::from_millis(500 * u64::from(attempt)));
                }
            }
        }
    }
    Err(Error::Network(last))
}

/// Writes every `.xml` member of the archive into `dest`, flattening
/// directories. Returns the number of files written.
pub fn extract_xml(archive: &[u8], dest: &Path) -> Result<usize> {
    let mut zip = zip::ZipArchive::new(Cursor::new(archive)).map_err(|e| Error::Archive(e.to_string()))?;
    std::fs::create_dir_all(dest).map_err(|e| Error::io(dest, e))?;
    let mut count = 0;
    for i in 0..zip.len() {
        let mut file = zip.by_index(i).map_err(|e| Error::Archive(e.to_string()))?;
        if !file.is_file() {
            continue;
        }
        let Some(name) = file
            .enclosed_name()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        else {
            continue;
        };
        if !name.ends_with(".xml") {
            continue;
        }
        let mut bytes = Vec::with_capacity(file.size() as usize);
        file.read_to_end(&mut bytes)
            .map_err(|e| Error::Archive(format!("{name}: {e}")))?;
        let path = dest.join(&name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        count += 1;
    }
    Ok(count)
}

/// Fills `rawdata/` from a local archive or the network.
pub fn fetch_rawdata(url: &str, layout: &CorpusLayout, options: &FetchOptions) -> Result<FetchReport> {
    let archive = match (&options.zip, options.offline) {
        (Some(path), _) => std::fs::read(path).map_err(|e| Error::io(path, e))?,
        (None, true) => return Err(Error::Archive("offline mode needs a local archive".into())),
        (None, false) => {
            info!("downloading {url}");
            download(url, options.attempts.unwrap_or(3))?
        }
    };
    let xml_files = extract_xml(&archive, &layout.rawdata())?;
    let warning = (xml_files != EXPECTED_PLAY_COUNT).then(|| {
        let msg = format!("expected {EXPECTED_PLAY_COUNT} XML files, found {xml_files}");
        warn!("{msg}");
        msg
    });
    Ok(FetchReport { xml_files, warning })
}
