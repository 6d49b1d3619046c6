use std::fmt::Write as _;

/// One comment snapshot as stored in `SATDInFile`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileRow {
    pub comment: String,
    pub comment_type: String,
    pub path: String,
    pub start_line: usize,
    pub end_line: usize,
    pub containing_class: Option<String>,
    pub containing_method: Option<String>,
}

/// One operation joined with its project, commit and comment rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationRow {
    pub satd_id: u64,
    pub instance_id: u64,
    pub resolution: String,
    pub project: String,
    pub project_url: String,
    pub parent_sha: Option<String>,
    pub child_sha: String,
    pub author_name: String,
    pub author_time: i64,
    pub committer_name: String,
    pub committer_time: i64,
    pub old: Option<FileRow>,
    pub new: Option<FileRow>,
}

const FILE_COLUMNS: [&str; 7] = [
    "comment",
    "comment_type",
    "path",
    "start_line",
    "end_line",
    "containing_class",
    "containing_method",
];

pub fn csv_header() -> Vec<String> {
    let mut cols: Vec<String> = [
        "satd_id",
        "satd_instance_id",
        "resolution",
        "commit",
        "comment",
        "project",
        "parent_sha",
        "child_sha",
        "author_name",
        "author_time",
        "committer_name",
        "committer_time",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for side in ["old", "new"] {
        cols.extend(FILE_COLUMNS.iter().map(|c| format!("{side}_{c}")));
    }
    cols
}

/// A rendered cell. Free text is always quoted so an absent value (bare
/// `None`) stays distinguishable from the text "None".
enum Cell {
    Bare(String),
    Text(String),
}

const NONE: &str = "None";

fn text_or_none(v: Option<&str>) -> Cell {
    v.map_or(Cell::Bare(NONE.into()), |s| Cell::Text(s.to_string()))
}

fn cells(row: &OperationRow) -> Vec<Cell> {
    let short = row.child_sha[..row.child_sha.len().min(7)].to_string();
    let comment = row.new.as_ref().map(|f| f.comment.as_str());
    let mut out = vec![
        Cell::Bare(row.satd_id.to_string()),
        Cell::Bare(row.instance_id.to_string()),
        Cell::Bare(row.resolution.clone()),
        Cell::Bare(short),
        text_or_none(comment),
        Cell::Text(row.project.clone()),
        Cell::Bare(row.parent_sha.clone().unwrap_or_else(|| NONE.into())),
        Cell::Bare(row.child_sha.clone()),
        Cell::Text(row.author_name.clone()),
        Cell::Bare(row.author_time.to_string()),
        Cell::Text(row.committer_name.clone()),
        Cell::Bare(row.committer_time.to_string()),
    ];
    for side in [&row.old, &row.new] {
        match side {
            Some(f) => out.extend([
                Cell::Text(f.comment.clone()),
                Cell::Bare(f.comment_type.clone()),
                Cell::Text(f.path.clone()),
                Cell::Bare(f.start_line.to_string()),
                Cell::Bare(f.end_line.to_string()),
                text_or_none(f.containing_class.as_deref()),
                text_or_none(f.containing_method.as_deref()),
            ]),
            None => out.extend((0..FILE_COLUMNS.len()).map(|_| Cell::Bare(NONE.into()))),
        }
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// RFC 4180 CSV with CRLF line endings and a header row.
pub fn render_csv(rows: &[OperationRow]) -> String {
    let mut out = csv_header().join(",");
    out.push_str("\r\n");
    for row in rows {
        let line: Vec<String> = cells(row)
            .into_iter()
            .map(|c| match c {
                Cell::Bare(s) => s,
                Cell::Text(s) => quote(&s),
            })
            .collect();
        out.push_str(&line.join(","));
        out.push_str("\r\n");
    }
    out
}

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            '\n' => out.push_str("<br>"),
            c => out.push(c),
        }
    }
    out
}

const SORT_SCRIPT: &str = r#"<script>
document.querySelectorAll("table.sortable th").forEach(function (th, col) {
  th.addEventListener("click", function () {
    var body = th.closest("table").tBodies[0];
    var asc = th.dataset.dir !== "asc";
    th.dataset.dir = asc ? "asc" : "desc";
    var idx = Array.prototype.indexOf.call(th.parentNode.children, th);
    var rows = Array.from(body.rows);
    rows.sort(function (a, b) {
      var x = a.cells[idx].textContent, y = b.cells[idx].textContent;
      var nx = parseFloat(x), ny = parseFloat(y);
      var cmp = (!isNaN(nx) && !isNaN(ny)) ? nx - ny : x.localeCompare(y);
      return asc ? cmp : -cmp;
    });
    rows.forEach(function (r) { body.appendChild(r); });
  });
});
</script>"#;

/// A standalone page with one click-to-sort table per project.
pub fn render_html(rows: &[OperationRow]) -> String {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>SATD operations</title>\n\
         <style>table{border-collapse:collapse;margin-bottom:2em}td,th{border:1px solid #ccc;padding:2px 6px;\
         vertical-align:top}th{cursor:pointer;background:#eee}</style>\n</head>\n<body>\n",
    );
    let header: String = csv_header()
        .iter()
        .map(|h| format!("<th>{}</th>", escape_html(h)))
        .collect();

    let mut start = 0;
    while start < rows.len() {
        let project = (&rows[start].project, &rows[start].project_url);
        let end = rows[start..]
            .iter()
            .position(|r| (&r.project, &r.project_url) != project)
            .map_or(rows.len(), |p| start + p);
        let _ = writeln!(
            out,
            "<h2>{}</h2>\n<table class=\"sortable\" data-project=\"{}\">\n<thead><tr>{header}</tr></thead>\n<tbody>",
            escape_html(project.0),
            escape_html(project.1)
        );
        for row in &rows[start..end] {
            out.push_str("<tr>");
            for cell in cells(row) {
                let (Cell::Bare(s) | Cell::Text(s)) = cell;
                let _ = write!(out, "<td>{}</td>", escape_html(&s));
            }
            out.push_str("</tr>\n");
        }
        out.push_str("</tbody>\n</table>\n");
        start = end;
    }
    out.push_str(SORT_SCRIPT);
    out.push_str("\n</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(comment: Option<&str>) -> OperationRow {
        OperationRow {
            satd_id: 13958,
            instance_id: 652915385,
            resolution: "SATD_ADDED".into(),
            project: "apache/tomcat".into(),
            project_url: "https://github.com/apache/tomcat".into(),
            parent_sha: None,
            child_sha: "09b640e".repeat(5) + "12345",
            author_name: "Dev \"Q\"".into(),
            author_time: 1,
            committer_name: "Dev".into(),
            committer_time: 2,
            old: None,
            new: comment.map(|c| FileRow {
                comment: c.into(),
                comment_type: "Line".into(),
                path: "A.java".into(),
                start_line: 3,
                end_line: 3,
                containing_class: Some("A".into()),
                containing_method: None,
            }),
        }
    }

    #[test]
    fn csv_quoting() {
        let csv = render_csv(&[row(Some("TODO: 404")), row(None)]);
        let lines: Vec<&str> = csv.split("\r\n").collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("13958,652915385,SATD_ADDED,09b640e,\"TODO: 404\",\"apache/tomcat\",None,"));
        assert!(lines[1].contains("\"Dev \"\"Q\"\"\""));
        assert!(lines[2].contains(",09b640e,None,"));
    }

    #[test]
    fn html_groups_by_project() {
        let mut other = row(Some("<b>"));
        other.project = "x/y".into();
        let html = render_html(&[row(Some("TODO")), row(Some("FIXME")), other]);
        assert_eq!(html.matches("<table").count(), 2);
        assert_eq!(html.matches("<tr>").count(), 2 + 3);
        assert!(html.contains("&lt;b&gt;"));
    }
}
