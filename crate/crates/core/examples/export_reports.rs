//! Stores mined operations in SQLite and exports the CSV and HTML reports.

use satd_miner::store::{ProjectInfo, Store};
use satd_miner::synth::{run_script, HistoryScript};
use satd_miner::tracker::MinerConfig;

const SCRIPT: &str = "\
commit add error page
write java/org/apache/catalina/ErrorPage.java
<<<
public class ErrorPage {
    public int getErrorCode() {
        // TODO: 404
        return errorCode;
    }
}
>>>
commit move
rename java/org/apache/catalina/ErrorPage.java java/org/apache/tomcat/ErrorPage.java
commit remove
delete java/org/apache/tomcat/ErrorPage.java
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let repo = tempfile::tempdir()?;
    let run = run_script(&HistoryScript::parse(SCRIPT)?, repo.path(), &MinerConfig::default())?;

    let out = tempfile::tempdir()?;
    let mut store = Store::open(&out.path().join("satd.db"))?;
    let project = ProjectInfo {
        name: "apache/tomcat".into(),
        url: "https://github.com/apache/tomcat".into(),
    };
    let counts = store.write_operations(&project, &run.outcome.commits, &run.outcome.operations)?;
    println!("stored {counts:?}");

    let (csv, html) = (out.path().join("satd.csv"), out.path().join("satd.html"));
    store.export_csv(&csv)?;
    store.export_html(&html)?;
    print!("{}", std::fs::read_to_string(&csv)?.replace("\r\n", "\n"));
    println!("html report: {} bytes", std::fs::metadata(&html)?.len());
    Ok(())
}
