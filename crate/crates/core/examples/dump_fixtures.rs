use assumekit::fixtures::{by_name, NAMES};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    for name in NAMES {
        let doc = by_name(name).expect("known fixture");
        std::fs::write(format!("{dir}/{name}.json"), doc.to_json()).expect("write fixture");
    }
}
