//! Write the element models as `.san` documents (default: `./models`).

use edgeavail::models::{shipped_documents, IntensityTable};

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "models".into());
    std::fs::create_dir_all(&dir)?;
    for (name, text) in shipped_documents(&IntensityTable::default()) {
        let path = std::path::Path::new(&dir).join(name);
        std::fs::write(&path, text)?;
        println!("{}", path.display());
    }
    Ok(())
}
