//! Atomic file output: each file goes to a temporary sibling and is renamed into place.

use std::io::Write;
use std::path::Path;

use hardy_lab::{Error, Result};
use tempfile::NamedTempFile;

pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name))
        .map_err(|e| Error::Io(format!("{}: {}", dir.join(name).display(), e.error)))?;
    Ok(())
}

pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for (name, contents) in files {
        write_atomic(dir, name, contents)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replaces_existing_file() {
        let dir = tempfile::tempdir().unwrap();
        write_all(dir.path(), &[("a.csv".into(), "old\n".into())]).unwrap();
        write_all(dir.path(), &[("a.csv".into(), "new\n".into())]).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("a.csv")).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
