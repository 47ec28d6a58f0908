//! Reading and writing module documents, and the analysis report built from
//! one.

use posetmod::io::Document;
use posetmod::local::LocalConfig;
use posetmod::report::analyze;

const THREE_LINES: &str = r#"{
  "field": {"type": "Q"},
  "objects": [
    {"name": "l1", "dim": 1}, {"name": "l2", "dim": 1}, {"name": "l3", "dim": 1},
    {"name": "v", "dim": 2}
  ],
  "edges": [
    {"src": "l1", "dst": "v", "matrix": [[1], [0]]},
    {"src": "l2", "dst": "v", "matrix": [[0], [1]]},
    {"src": "l3", "dst": "v", "matrix": [["1/2"], ["1/2"]]}
  ]
}"#;

fn main() -> posetmod::Result<()> {
    let doc = Document::parse(THREE_LINES)?;
    let m = doc.module()?;
    let (report, _) = analyze(&m, LocalConfig::default(), None)?;
    print!("{}", report.summary());
    println!("{}", report.to_json());
    println!("{}", Document::from_module(&m, None).to_json());
    Ok(())
}
